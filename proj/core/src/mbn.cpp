#include "petrimbn/mbn.hpp"

#include <algorithm>
#include <set>

#include "petrimbn/error.hpp"

namespace pmbn {

namespace {

void check_ev(const CausalityGraph& g, const Mbn::Evaluation& ev) {
  for (const Node& n : g.nodes()) {
    auto it = ev.find(n.gen.label);
    if (it == ev.end() || !it->second) throw InvalidGraph("no matrix for generator '" + n.gen.label + "'");
    if (it->second->in_arity() != n.gen.in || it->second->out_arity() != n.gen.out)
      throw InvalidGraph("matrix for '" + n.gen.label + "' has type " + std::to_string(it->second->in_arity()) + "->" +
                         std::to_string(it->second->out_arity()));
  }
}

// Column y of P' or F' straight from the relevant sets.
std::vector<std::pair<Bits, double>> update_column(const RelevantSets& rs, Observation obs, Bits y) {
  std::vector<std::pair<Bits, double>> col;
  if (obs == Observation::Failure) {
    double fail = rs.rbar_fail(y);
    for (std::size_t i = 0; i < rs.tbar.size(); ++i)
      if (!rs.enabled_local(y, i)) fail += rs.rbar(y, i);
    fail = std::min(fail, 1.0);
    if (fail > 0.0) col.emplace_back(y, fail);
    return col;
  }
  for (std::size_t i = 0; i < rs.tbar.size(); ++i) {
    if (!rs.enabled_local(y, i)) continue;
    const double r = rs.rbar(y, i);
    if (r > 0.0) col.emplace_back(rs.fire_local(y, i), r);
  }
  std::sort(col.begin(), col.end());
  std::vector<std::pair<Bits, double>> merged;
  for (const auto& e : col) {
    if (!merged.empty() && merged.back().first == e.first)
      merged.back().second += e.second;
    else
      merged.push_back(e);
  }
  return merged;
}

Matrix update_matrix(const RelevantSets& rs, Observation obs) {
  const unsigned l = rs.arity();
  if (l > kUpdateArityLimit)
    throw TooLarge("a step touches " + std::to_string(l) + " places; update matrices are limited to " +
                   std::to_string(kUpdateArityLimit));
  if (obs == Observation::Failure) {
    std::vector<double> diag(state_count(l), 0.0);
    for (Bits y = 0; y < state_count(l); ++y)
      for (const auto& [x, v] : update_column(rs, obs, y)) diag[x] = v;
    return Matrix::diagonal(l, std::move(diag));
  }
  std::vector<Matrix::Entry> entries;
  for (Bits y = 0; y < state_count(l); ++y)
    for (const auto& [x, v] : update_column(rs, obs, y)) entries.push_back({x, y, v});
  return Matrix::from_entries(l, l, std::move(entries));
}

std::string update_label(const Mbn& b, Observation obs) {
  return "upd_" + std::to_string(b.updates() + 1) + (obs == Observation::Success ? "_succ" : "_fail");
}

}  // namespace

std::vector<std::pair<Bits, double>> UpdateNode::column(Bits y) const { return update_column(rs_, obs_, y); }

const Matrix& UpdateNode::matrix() const {
  std::call_once(once_, [this] { matrix_ = update_matrix(rs_, obs_); });
  return *matrix_;
}

Mbn::Mbn(CausalityGraph graph, Evaluation ev) : graph_(std::move(graph)), ev_(std::move(ev)) { check_ev(graph_, ev_); }

Mbn::Mbn(CausalityGraph graph, Evaluation ev, std::vector<std::string> places)
    : graph_(std::move(graph)), ev_(std::move(ev)), places_(std::move(places)) {
  check_ev(graph_, ev_);
  if (places_.size() != graph_.output_count()) throw InvalidGraph("place list does not match the outputs");
  std::set<std::string> seen(places_.begin(), places_.end());
  if (seen.size() != places_.size()) throw InvalidGraph("a place is carried by two outputs");
}

const Matrix& Mbn::matrix(const std::string& label) const {
  if (auto it = ev_.find(label); it != ev_.end()) return *it->second;
  if (auto it = structured_.find(label); it != structured_.end()) return it->second->matrix();
  throw InvalidGraph("no matrix for generator '" + label + "'");
}

const UpdateNode* Mbn::update_node(std::size_t v) const {
  auto it = structured_.find(graph_.node(v).gen.label);
  return it == structured_.end() ? nullptr : it->second.get();
}

bool Mbn::is_diagonal(std::size_t v) const {
  if (const UpdateNode* u = update_node(v)) return u->is_diagonal();
  return node_matrix(v).is_diagonal();
}

std::vector<std::pair<Bits, double>> Mbn::column(std::size_t v, Bits y) const {
  if (const UpdateNode* u = update_node(v)) return u->column(y);
  std::vector<std::pair<Bits, double>> col;
  node_matrix(v).for_each_in_column(y, [&](Bits x, double val) { col.emplace_back(x, val); });
  return col;
}

std::size_t Mbn::output_of(const std::string& place) const {
  auto it = std::find(places_.begin(), places_.end(), place);
  if (it == places_.end()) throw MissingPlace("no output carries place '" + place + "'");
  return static_cast<std::size_t>(it - places_.begin());
}

Mbn independent_prior(const std::vector<std::string>& places, const std::vector<double>& marginals) {
  if (places.size() != marginals.size()) throw InvalidArity("one marginal per place expected");
  std::vector<Node> nodes;
  std::vector<Wire> outs;
  Mbn::Evaluation ev;
  for (std::size_t i = 0; i < places.size(); ++i) {
    const std::string label = "prior_" + places[i];
    nodes.push_back({{label, 0, 1}, {}});
    outs.push_back(Wire::port(i, 0));
    ev[label] = std::make_shared<const Matrix>(Matrix::column_vector({1.0 - marginals[i], marginals[i]}));
  }
  return Mbn(CausalityGraph(0, std::move(nodes), std::move(outs)), std::move(ev), places);
}

Mbn joint_prior(const std::vector<std::string>& places, const ProbVector& joint) {
  const unsigned k = static_cast<unsigned>(places.size());
  if (joint.arity() != k) throw InvalidArity("joint prior arity does not match the places");
  std::vector<Wire> outs;
  for (unsigned p = 0; p < k; ++p) outs.push_back(Wire::port(0, p));
  Mbn::Evaluation ev{{"prior", std::make_shared<const Matrix>(joint.matrix())}};
  return Mbn(CausalityGraph(0, {Node{{"prior", 0, k}, {}}}, std::move(outs)), std::move(ev), places);
}

Matrix eval_naive(const Mbn& b) {
  const CausalityGraph& g = b.graph();
  const std::size_t wires = g.wire_count();
  if (wires > kNaiveWireLimit)
    throw TooLarge("naive evaluation limited to " + std::to_string(kNaiveWireLimit) + " wires, graph has " +
                   std::to_string(wires));
  const unsigned n = g.input_count();
  const unsigned m = g.output_count();
  const std::size_t free_wires = wires - n;

  struct NodeView {
    const Matrix* mat;
    std::vector<std::size_t> src;
    std::vector<std::size_t> dst;
  };
  std::vector<NodeView> views;
  for (std::size_t v = 0; v < g.nodes().size(); ++v) {
    NodeView nv{&b.node_matrix(v), {}, {}};
    for (const Wire& w : g.node(v).sources) nv.src.push_back(g.wire_id(w));
    for (const Wire& w : g.targets(v)) nv.dst.push_back(g.wire_id(w));
    views.push_back(std::move(nv));
  }
  std::vector<std::size_t> out_ids;
  for (const Wire& w : g.outputs()) out_ids.push_back(g.wire_id(w));

  // bit i of an assignment is the value of wire i
  auto pack = [](Bits assignment, const std::vector<std::size_t>& ids) {
    Bits v = 0;
    for (std::size_t id : ids) v = (v << 1) | ((assignment >> id) & 1U);
    return v;
  };
  std::vector<Matrix::Entry> entries;
  for (Bits y = 0; y < state_count(n); ++y) {
    Bits inputs = 0;
    for (unsigned j = 0; j < n; ++j)
      if (bit_at(y, n, j)) inputs |= Bits{1} << j;
    for (Bits rest = 0; rest < state_count(static_cast<unsigned>(free_wires)); ++rest) {
      const Bits a = inputs | (rest << n);
      double prod = 1.0;
      for (const NodeView& nv : views) {
        prod *= nv.mat->at(pack(a, nv.dst), pack(a, nv.src));
        if (prod == 0.0) break;
      }
      if (prod != 0.0) entries.push_back({pack(a, out_ids), y, prod});
    }
  }
  return Matrix::from_entries(n, m, std::move(entries));
}

bool is_obn(const Mbn& b) {
  const CausalityGraph& g = b.graph();
  if (g.input_count() != 0) return false;
  for (std::size_t v = 0; v < g.nodes().size(); ++v) {
    if (g.node(v).gen.out != 1) return false;
    if (!b.node_matrix(v).is_stochastic()) return false;
  }
  if (g.output_count() != g.wire_count()) return false;
  std::set<std::size_t> ids;
  for (const Wire& w : g.outputs()) ids.insert(g.wire_id(w));
  return ids.size() == g.wire_count();
}

UpdatePair build_update(const Net& net, const StepSpec& step) {
  const RelevantSets rs = relevant_sets(net, step);
  return {update_matrix(rs, Observation::Success), update_matrix(rs, Observation::Failure), rs.sbar};
}

Mbn attach_matrix(const Mbn& b, const std::vector<std::string>& places, Matrix m, const std::string& label) {
  const unsigned l = static_cast<unsigned>(places.size());
  if (m.in_arity() != l || m.out_arity() != l) throw TypeMismatch("update matrix type does not match its places");
  if (b.ev_.contains(label) || b.structured_.contains(label)) throw InvalidGraph("generator '" + label + "' already exists");
  std::vector<std::size_t> outs;
  for (const std::string& p : places) outs.push_back(b.output_of(p));

  Mbn next = b;
  Node node{{label, l, l}, {}};
  for (std::size_t j : outs) node.sources.push_back(b.graph_.outputs()[j]);
  const std::size_t v = next.graph_.add_node(std::move(node));
  for (unsigned i = 0; i < l; ++i) next.graph_.set_output(static_cast<unsigned>(outs[i]), Wire::port(v, i));
  next.ev_[label] = std::make_shared<const Matrix>(std::move(m));
  ++next.updates_;
  return next;
}

Mbn attach_update(const Mbn& b, const Net& net, const UpdatePair& up, Observation obs) {
  std::vector<std::string> names;
  for (std::size_t p : up.sbar) names.push_back(net.places().at(p));
  return attach_matrix(b, names, obs == Observation::Success ? up.pmat : up.fmat, update_label(b, obs));
}

Mbn attach_update(const Mbn& b, const Net& net, const StepSpec& step, Observation obs) {
  auto node = std::make_shared<const UpdateNode>(relevant_sets(net, step), obs);
  const unsigned l = node->arity();
  const std::string label = update_label(b, obs);
  if (b.ev_.contains(label) || b.structured_.contains(label)) throw InvalidGraph("generator '" + label + "' already exists");
  std::vector<std::size_t> outs;
  for (std::size_t p : node->sets().sbar) outs.push_back(b.output_of(net.places().at(p)));

  Mbn next = b;
  Node n{{label, l, l}, {}};
  for (std::size_t j : outs) n.sources.push_back(b.graph_.outputs()[j]);
  const std::size_t v = next.graph_.add_node(std::move(n));
  for (unsigned i = 0; i < l; ++i) next.graph_.set_output(static_cast<unsigned>(outs[i]), Wire::port(v, i));
  next.structured_[label] = std::move(node);
  ++next.updates_;
  return next;
}

Mbn terminate(const Mbn& b, const std::vector<std::string>& keep) {
  std::set<std::string> seen;
  std::vector<Wire> outs;
  for (const std::string& p : keep) {
    if (!seen.insert(p).second) throw InvalidArity("place '" + p + "' listed twice");
    outs.push_back(b.graph().outputs()[b.output_of(p)]);
  }
  Mbn out = b;
  out.graph_.set_outputs(std::move(outs));
  out.places_ = keep;
  return out;
}

}  // namespace pmbn
