#pragma once

// Terms built from generators and wiring constants with ; and (x), their
// width, and the causality graphs and elimination orders they induce.

#include <cstddef>
#include <memory>
#include <string>

#include "petrimbn/bitmatrix.hpp"
#include "petrimbn/causality.hpp"
#include "petrimbn/eliminate.hpp"

namespace pmbn {

class Term {
 public:
  enum class Kind { Gen, Const, Seq, Tensor };

  static Term gen(Generator g);
  /// id_n, the n-fold duplicator, the terminator n -> 0, or the swap sigma_{n,m}.
  static Term constant(ConstantKind kind, unsigned n, unsigned m = 0);
  /// Throws InvalidTerm when the middle types differ.
  static Term seq(const Term& first, const Term& second);
  static Term tensor(const Term& left, const Term& right);

  Kind kind() const { return node_->kind; }
  unsigned in() const { return node_->in; }
  unsigned out() const { return node_->out; }
  const Generator& generator() const { return node_->gen; }
  ConstantKind constant_kind() const { return node_->ckind; }
  unsigned n() const { return node_->n; }
  unsigned m() const { return node_->m; }
  const Term& left() const { return *node_->left; }
  const Term& right() const { return *node_->right; }

  std::string str() const;

 private:
  struct Rep {
    Kind kind = Kind::Gen;
    unsigned in = 0;
    unsigned out = 0;
    Generator gen;
    ConstantKind ckind = ConstantKind::Identity;
    unsigned n = 0;
    unsigned m = 0;
    std::shared_ptr<const Term> left;
    std::shared_ptr<const Term> right;
  };

  explicit Term(std::shared_ptr<const Rep> rep) : node_(std::move(rep)) {}

  std::shared_ptr<const Rep> node_;
};

/// Largest n + m of any subterm.
std::size_t term_width(const Term& t);
/// Constants become plain wiring; generators become nodes in left-to-right order.
CausalityGraph term_graph(const Term& t);
/// Subterm orders concatenated, then the wires a composition hides.
ElimOrder order_from_term(const Term& t);

}  // namespace pmbn
