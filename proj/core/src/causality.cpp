#include "petrimbn/causality.hpp"

#include <algorithm>
#include <ostream>

#include "petrimbn/error.hpp"

namespace pmbn {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const std::string& p : parts) {
    if (!s.empty()) s += "; ";
    s += p;
  }
  return s;
}

Wire shift(const Wire& w, std::size_t node_offset, unsigned input_offset) {
  if (w.is_input()) return Wire::input(w.index + input_offset);
  return Wire::port(w.node + node_offset, w.index);
}

}  // namespace

CausalityGraph::CausalityGraph(unsigned inputs, std::vector<Node> nodes, std::vector<Wire> outputs)
    : inputs_(inputs), nodes_(std::move(nodes)), outputs_(std::move(outputs)) {
  if (auto problems = validate(); !problems.empty()) throw InvalidGraph(join(problems));
  rebuild_offsets();
}

CausalityGraph CausalityGraph::unchecked(unsigned inputs, std::vector<Node> nodes, std::vector<Wire> outputs) {
  CausalityGraph g;
  g.inputs_ = inputs;
  g.nodes_ = std::move(nodes);
  g.outputs_ = std::move(outputs);
  g.rebuild_offsets();
  return g;
}

void CausalityGraph::rebuild_offsets() {
  port_offset_.resize(nodes_.size() + 1);
  std::size_t next = inputs_;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    port_offset_[v] = next;
    next += nodes_[v].gen.out;
  }
  port_offset_[nodes_.size()] = next;
}

std::vector<std::string> CausalityGraph::validate() const {
  std::vector<std::string> problems;
  auto check_wire = [&](const Wire& w, const std::string& where) {
    if (w.is_input()) {
      if (w.index >= inputs_) problems.push_back(where + " refers to missing input " + wire_name(w));
    } else if (w.node >= nodes_.size()) {
      problems.push_back(where + " refers to missing node " + std::to_string(w.node + 1));
    } else if (w.index >= nodes_[w.node].gen.out) {
      problems.push_back(where + " refers to missing port " + wire_name(w));
    } else {
      return true;
    }
    return false;
  };
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    const Node& n = nodes_[v];
    const std::string where = "node " + std::to_string(v + 1) + " (" + n.gen.label + ")";
    if (n.sources.size() != n.gen.in)
      problems.push_back(where + " has " + std::to_string(n.sources.size()) + " sources but arity " +
                         std::to_string(n.gen.in));
    for (const Wire& w : n.sources) check_wire(w, where);
  }
  for (std::size_t j = 0; j < outputs_.size(); ++j) check_wire(outputs_[j], "output " + std::to_string(j + 1));

  // cycle detection over valid port references
  enum class Mark { Fresh, Active, Done };
  std::vector<Mark> mark(nodes_.size(), Mark::Fresh);
  bool cyclic = false;
  for (std::size_t root = 0; root < nodes_.size() && !cyclic; ++root) {
    if (mark[root] != Mark::Fresh) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::Active;
    while (!stack.empty() && !cyclic) {
      auto& [v, i] = stack.back();
      if (i == nodes_[v].sources.size()) {
        mark[v] = Mark::Done;
        stack.pop_back();
        continue;
      }
      const Wire w = nodes_[v].sources[i++];
      if (w.is_input() || w.node >= nodes_.size()) continue;
      if (mark[w.node] == Mark::Active) {
        cyclic = true;
      } else if (mark[w.node] == Mark::Fresh) {
        mark[w.node] = Mark::Active;
        stack.emplace_back(w.node, 0);
      }
    }
  }
  if (cyclic) problems.push_back("the graph contains a cycle");
  return problems;
}

std::size_t CausalityGraph::wire_count() const { return port_offset_.back(); }

std::size_t CausalityGraph::wire_id(const Wire& w) const {
  if (w.is_input()) return w.index;
  return port_offset_[w.node] + w.index;
}

Wire CausalityGraph::wire_at(std::size_t id) const {
  if (id < inputs_) return Wire::input(static_cast<unsigned>(id));
  auto it = std::upper_bound(port_offset_.begin(), port_offset_.end() - 1, id);
  const std::size_t v = static_cast<std::size_t>(it - port_offset_.begin()) - 1;
  return Wire::port(v, static_cast<unsigned>(id - port_offset_[v]));
}

std::vector<Wire> CausalityGraph::targets(std::size_t v) const {
  std::vector<Wire> out;
  for (unsigned p = 0; p < nodes_.at(v).gen.out; ++p) out.push_back(Wire::port(v, p));
  return out;
}

std::vector<bool> CausalityGraph::external_mask() const {
  std::vector<bool> ext(wire_count(), false);
  for (unsigned j = 0; j < inputs_; ++j) ext[j] = true;
  for (const Wire& w : outputs_) ext[wire_id(w)] = true;
  return ext;
}

std::vector<std::size_t> CausalityGraph::internal_wires() const {
  const std::vector<bool> ext = external_mask();
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < ext.size(); ++id)
    if (!ext[id]) out.push_back(id);
  return out;
}

std::vector<std::size_t> CausalityGraph::topological_order() const {
  std::vector<std::size_t> order;
  std::vector<bool> done(nodes_.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < nodes_.size(); ++root) {
    if (done[root]) continue;
    stack.emplace_back(root, 0);
    done[root] = true;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i == nodes_[v].sources.size()) {
        order.push_back(v);
        stack.pop_back();
        continue;
      }
      const Wire w = nodes_[v].sources[i++];
      if (!w.is_input() && !done[w.node]) {
        done[w.node] = true;
        stack.emplace_back(w.node, 0);
      }
    }
  }
  return order;
}

std::size_t CausalityGraph::add_node(Node node) {
  if (node.sources.size() != node.gen.in) throw InvalidGraph("node '" + node.gen.label + "' has the wrong number of sources");
  for (const Wire& w : node.sources) {
    const bool ok = w.is_input() ? w.index < inputs_ : (w.node < nodes_.size() && w.index < nodes_[w.node].gen.out);
    if (!ok) throw InvalidGraph("node '" + node.gen.label + "' refers to missing wire " + wire_name(w));
  }
  nodes_.push_back(std::move(node));
  rebuild_offsets();
  return nodes_.size() - 1;
}

CausalityGraph node_graph(const Generator& g) {
  Node n{g, {}};
  for (unsigned j = 0; j < g.in; ++j) n.sources.push_back(Wire::input(j));
  std::vector<Wire> outs;
  for (unsigned p = 0; p < g.out; ++p) outs.push_back(Wire::port(0, p));
  return CausalityGraph(g.in, {std::move(n)}, std::move(outs));
}

CausalityGraph identity_graph(unsigned n) {
  std::vector<unsigned> outs(n);
  for (unsigned j = 0; j < n; ++j) outs[j] = j;
  return wiring_graph(n, outs);
}

CausalityGraph wiring_graph(unsigned n, const std::vector<unsigned>& outputs) {
  std::vector<Wire> outs;
  for (unsigned j : outputs) outs.push_back(Wire::input(j));
  return CausalityGraph(n, {}, std::move(outs));
}

CausalityGraph seq(const CausalityGraph& first, const CausalityGraph& second) {
  if (first.output_count() != second.input_count())
    throw TypeMismatch("cannot compose graphs: " + std::to_string(first.output_count()) + " outputs vs " +
                       std::to_string(second.input_count()) + " inputs");
  const std::size_t offset = first.nodes().size();
  auto substitute = [&](const Wire& w) { return w.is_input() ? first.outputs()[w.index] : shift(w, offset, 0); };
  std::vector<Node> nodes = first.nodes();
  for (const Node& n : second.nodes()) {
    Node copy{n.gen, {}};
    for (const Wire& w : n.sources) copy.sources.push_back(substitute(w));
    nodes.push_back(std::move(copy));
  }
  std::vector<Wire> outs;
  for (const Wire& w : second.outputs()) outs.push_back(substitute(w));
  return CausalityGraph(first.input_count(), std::move(nodes), std::move(outs));
}

CausalityGraph tensor(const CausalityGraph& left, const CausalityGraph& right) {
  const std::size_t offset = left.nodes().size();
  const unsigned in_offset = left.input_count();
  std::vector<Node> nodes = left.nodes();
  for (const Node& n : right.nodes()) {
    Node copy{n.gen, {}};
    for (const Wire& w : n.sources) copy.sources.push_back(shift(w, offset, in_offset));
    nodes.push_back(std::move(copy));
  }
  std::vector<Wire> outs = left.outputs();
  for (const Wire& w : right.outputs()) outs.push_back(shift(w, offset, in_offset));
  return CausalityGraph(left.input_count() + right.input_count(), std::move(nodes), std::move(outs));
}

std::string wire_name(const Wire& w) {
  if (w.is_input()) return "i" + std::to_string(w.index + 1);
  return std::to_string(w.node + 1) + ":" + std::to_string(w.index + 1);
}

void write_graph(std::ostream& os, const CausalityGraph& g) {
  auto list = [](const std::vector<Wire>& ws) {
    std::string s = "[";
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (i != 0) s += ',';
      s += wire_name(ws[i]);
    }
    return s + "]";
  };
  for (std::size_t v = 0; v < g.nodes().size(); ++v)
    os << v + 1 << ' ' << g.node(v).gen.label << " inputs=" << list(g.node(v).sources) << '\n';
  os << "out=" << list(g.outputs()) << '\n';
}

}  // namespace pmbn
