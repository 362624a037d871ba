#pragma once

// Modular Bayesian networks: a causality graph whose labels evaluate to
// (sub-)stochastic matrices, plus the bookkeeping that ties outputs to places.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "petrimbn/bitmatrix.hpp"
#include "petrimbn/causality.hpp"
#include "petrimbn/petri.hpp"

namespace pmbn {

inline constexpr std::size_t kNaiveWireLimit = 22;
/// Largest update matrix that is ever materialized.
inline constexpr unsigned kUpdateArityLimit = 24;

/// An update node kept as its relevant sets and observation. The matrix
/// (P' for a success, the diagonal F' for a failure) is built on first use.
class UpdateNode {
 public:
  UpdateNode(RelevantSets rs, Observation obs) : rs_(std::move(rs)), obs_(obs) {}
  UpdateNode(const UpdateNode&) = delete;
  UpdateNode& operator=(const UpdateNode&) = delete;

  const RelevantSets& sets() const { return rs_; }
  Observation observation() const { return obs_; }
  unsigned arity() const { return rs_.arity(); }
  bool is_diagonal() const { return obs_ == Observation::Failure; }

  /// Nonzero entries (row, value) of column y, ascending rows.
  std::vector<std::pair<Bits, double>> column(Bits y) const;
  /// Throws TooLarge beyond kUpdateArityLimit.
  const Matrix& matrix() const;

 private:
  RelevantSets rs_;
  Observation obs_;
  mutable std::once_flag once_;
  mutable std::optional<Matrix> matrix_;
};

class Mbn {
 public:
  using Evaluation = std::map<std::string, std::shared_ptr<const Matrix>>;
  using Updates = std::map<std::string, std::shared_ptr<const UpdateNode>>;

  Mbn() = default;
  /// Throws InvalidGraph when a label has no matrix or the types disagree.
  Mbn(CausalityGraph graph, Evaluation ev);
  /// As above, naming the place carried by every output.
  Mbn(CausalityGraph graph, Evaluation ev, std::vector<std::string> places);

  const CausalityGraph& graph() const { return graph_; }
  /// Explicit matrices; update nodes attached in structured form live in update_nodes().
  const Evaluation& ev() const { return ev_; }
  const Updates& update_nodes() const { return structured_; }
  /// Materializes structured update nodes.
  const Matrix& matrix(const std::string& label) const;
  const Matrix& node_matrix(std::size_t v) const { return matrix(graph_.node(v).gen.label); }
  /// The structured form of node v, or null.
  const UpdateNode* update_node(std::size_t v) const;
  bool is_diagonal(std::size_t v) const;
  /// Nonzero entries (row, value) of column y of node v's matrix.
  std::vector<std::pair<Bits, double>> column(std::size_t v, Bits y) const;
  /// Place names parallel to the outputs; empty when not a marking distribution.
  const std::vector<std::string>& places() const { return places_; }
  std::size_t updates() const { return updates_; }

  /// Output index carrying `place`; throws MissingPlace.
  std::size_t output_of(const std::string& place) const;

 private:
  friend Mbn attach_matrix(const Mbn&, const std::vector<std::string>&, Matrix, const std::string&);
  friend Mbn terminate(const Mbn&, const std::vector<std::string>&);
  friend Mbn attach_update(const Mbn&, const Net&, const StepSpec&, Observation);

  CausalityGraph graph_;
  Evaluation ev_;
  Updates structured_;
  std::vector<std::string> places_;
  std::size_t updates_ = 0;
};

/// One 0->1 node per place holding (1 - q, q).
Mbn independent_prior(const std::vector<std::string>& places, const std::vector<double>& marginals);
/// A single 0->k node holding the joint vector.
Mbn joint_prior(const std::vector<std::string>& places, const ProbVector& joint);

/// The literal sum over all wire assignments. Throws TooLarge beyond kNaiveWireLimit wires.
Matrix eval_naive(const Mbn& b);

bool is_obn(const Mbn& b);

struct UpdatePair {
  Matrix pmat;  // success, l -> l
  Matrix fmat;  // failure, diagonal l -> l
  std::vector<std::size_t> sbar;
};

UpdatePair build_update(const Net& net, const StepSpec& step);

/// Feeds the current wires of `places` (in that order) into a fresh node
/// evaluating to `m` and reroutes those outputs to the node's ports.
Mbn attach_matrix(const Mbn& b, const std::vector<std::string>& places, Matrix m, const std::string& label);
Mbn attach_update(const Mbn& b, const Net& net, const UpdatePair& up, Observation obs);
/// As above, keeping the update in structured form; its matrix is built only when asked for.
Mbn attach_update(const Mbn& b, const Net& net, const StepSpec& step, Observation obs);

/// Keeps the listed places as outputs, in the given order; the others are summed over.
Mbn terminate(const Mbn& b, const std::vector<std::string>& keep);

}  // namespace pmbn
