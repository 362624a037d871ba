#include "petrimbn/term.hpp"

#include <algorithm>

#include "petrimbn/error.hpp"

namespace pmbn {

Term Term::gen(Generator g) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Gen;
  r->in = g.in;
  r->out = g.out;
  r->gen = std::move(g);
  return Term(std::move(r));
}

Term Term::constant(ConstantKind kind, unsigned n, unsigned m) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Const;
  r->ckind = kind;
  r->n = n;
  r->m = m;
  switch (kind) {
    case ConstantKind::Identity:
      r->in = r->out = n;
      break;
    case ConstantKind::Duplicate:
      if (n == 0) throw InvalidTerm("duplicator needs arity >= 1");
      r->in = n;
      r->out = 2 * n;
      break;
    case ConstantKind::Terminate:
      if (n == 0) throw InvalidTerm("terminator needs arity >= 1");
      r->in = n;
      r->out = 0;
      break;
    case ConstantKind::Swap:
      r->in = r->out = n + m;
      break;
  }
  return Term(std::move(r));
}

Term Term::seq(const Term& first, const Term& second) {
  if (first.out() != second.in())
    throw InvalidTerm("cannot compose " + first.str() + " : " + std::to_string(first.in()) + "->" +
                      std::to_string(first.out()) + " with " + second.str() + " : " + std::to_string(second.in()) +
                      "->" + std::to_string(second.out()));
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Seq;
  r->in = first.in();
  r->out = second.out();
  r->left = std::make_shared<const Term>(first);
  r->right = std::make_shared<const Term>(second);
  return Term(std::move(r));
}

Term Term::tensor(const Term& left, const Term& right) {
  auto r = std::make_shared<Rep>();
  r->kind = Kind::Tensor;
  r->in = left.in() + right.in();
  r->out = left.out() + right.out();
  r->left = std::make_shared<const Term>(left);
  r->right = std::make_shared<const Term>(right);
  return Term(std::move(r));
}

std::string Term::str() const {
  switch (kind()) {
    case Kind::Gen:
      return generator().label;
    case Kind::Const:
      switch (constant_kind()) {
        case ConstantKind::Identity:
          return "id" + std::to_string(n());
        case ConstantKind::Duplicate:
          return "dup" + std::to_string(n());
        case ConstantKind::Terminate:
          return "top" + std::to_string(n());
        case ConstantKind::Swap:
          return "sigma" + std::to_string(n()) + "," + std::to_string(m());
      }
      break;
    case Kind::Seq:
      return "(" + left().str() + ";" + right().str() + ")";
    case Kind::Tensor:
      return "(" + left().str() + "*" + right().str() + ")";
  }
  return "?";
}

std::size_t term_width(const Term& t) {
  const std::size_t own = std::size_t{t.in()} + t.out();
  if (t.kind() == Term::Kind::Seq || t.kind() == Term::Kind::Tensor)
    return std::max({own, term_width(t.left()), term_width(t.right())});
  return own;
}

namespace {

// Builds the graph of a term over given input wires, appending nodes in
// left-to-right order and recording hidden wires per composition.
struct Builder {
  std::vector<Node> nodes;
  std::vector<Wire> order;

  std::vector<Wire> build(const Term& t, const std::vector<Wire>& in) {
    switch (t.kind()) {
      case Term::Kind::Gen: {
        nodes.push_back({t.generator(), in});
        std::vector<Wire> out;
        for (unsigned p = 0; p < t.out(); ++p) out.push_back(Wire::port(nodes.size() - 1, p));
        return out;
      }
      case Term::Kind::Const:
        switch (t.constant_kind()) {
          case ConstantKind::Identity:
            return in;
          case ConstantKind::Duplicate: {
            std::vector<Wire> out = in;
            out.insert(out.end(), in.begin(), in.end());
            return out;
          }
          case ConstantKind::Terminate:
            return {};
          case ConstantKind::Swap: {
            std::vector<Wire> out(in.begin() + t.n(), in.end());
            out.insert(out.end(), in.begin(), in.begin() + t.n());
            return out;
          }
        }
        return in;
      case Term::Kind::Seq: {
        const std::vector<Wire> mid = build(t.left(), in);
        const std::vector<Wire> out = build(t.right(), mid);
        std::vector<Wire> hidden;
        for (const Wire& w : mid) {
          if (w.is_input()) continue;
          if (std::find(out.begin(), out.end(), w) != out.end()) continue;
          if (std::find(hidden.begin(), hidden.end(), w) != hidden.end()) continue;
          hidden.push_back(w);
        }
        order.insert(order.end(), hidden.begin(), hidden.end());
        return out;
      }
      case Term::Kind::Tensor: {
        const std::vector<Wire> lin(in.begin(), in.begin() + t.left().in());
        const std::vector<Wire> rin(in.begin() + t.left().in(), in.end());
        std::vector<Wire> out = build(t.left(), lin);
        const std::vector<Wire> rout = build(t.right(), rin);
        out.insert(out.end(), rout.begin(), rout.end());
        return out;
      }
    }
    return {};
  }
};

}  // namespace

CausalityGraph term_graph(const Term& t) {
  Builder b;
  std::vector<Wire> in;
  for (unsigned j = 0; j < t.in(); ++j) in.push_back(Wire::input(j));
  std::vector<Wire> out = b.build(t, in);
  return CausalityGraph(t.in(), std::move(b.nodes), std::move(out));
}

ElimOrder order_from_term(const Term& t) {
  Builder b;
  std::vector<Wire> in;
  for (unsigned j = 0; j < t.in(); ++j) in.push_back(Wire::input(j));
  std::vector<Wire> out = b.build(t, in);
  const CausalityGraph g(t.in(), std::move(b.nodes), std::move(out));
  ElimOrder order;
  for (const Wire& w : b.order) order.push_back(g.wire_id(w));
  return order;
}

}  // namespace pmbn
