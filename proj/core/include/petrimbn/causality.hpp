#pragma once

// Causality graphs: acyclic wiring diagrams of generator-labelled nodes.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pmbn {

struct Generator {
  std::string label;
  unsigned in = 0;
  unsigned out = 0;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Either the j-th graph input or output port p of a node (both 0-based).
struct Wire {
  static constexpr std::size_t kInput = static_cast<std::size_t>(-1);

  std::size_t node = kInput;
  unsigned index = 0;

  static Wire input(unsigned j) { return {kInput, j}; }
  static Wire port(std::size_t node, unsigned p) { return {node, p}; }
  bool is_input() const { return node == kInput; }

  friend bool operator==(const Wire&, const Wire&) = default;
  friend auto operator<=>(const Wire&, const Wire&) = default;
};

struct Node {
  Generator gen;
  std::vector<Wire> sources;

  friend bool operator==(const Node&, const Node&) = default;
};

class CausalityGraph {
 public:
  /// The empty graph 0 -> 0.
  CausalityGraph() = default;
  /// Throws InvalidGraph listing every problem found by validate().
  CausalityGraph(unsigned inputs, std::vector<Node> nodes, std::vector<Wire> outputs);
  /// Skips validation; used to inspect malformed graphs.
  static CausalityGraph unchecked(unsigned inputs, std::vector<Node> nodes, std::vector<Wire> outputs);

  unsigned input_count() const { return inputs_; }
  unsigned output_count() const { return static_cast<unsigned>(outputs_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t v) const { return nodes_.at(v); }
  const std::vector<Wire>& outputs() const { return outputs_; }

  /// Empty when well formed.
  std::vector<std::string> validate() const;

  /// Wires are numbered: inputs first, then node ports in node order.
  std::size_t wire_count() const;
  std::size_t wire_id(const Wire& w) const;
  Wire wire_at(std::size_t id) const;
  std::vector<Wire> targets(std::size_t v) const;
  /// Internal wire ids, ascending: neither inputs nor referenced by an output.
  std::vector<std::size_t> internal_wires() const;
  std::vector<bool> external_mask() const;

  /// Node ids in an order where every node follows its sources.
  std::vector<std::size_t> topological_order() const;

  /// Appends a node; returns its id. Sources must refer to existing wires.
  std::size_t add_node(Node node);
  void set_output(unsigned j, Wire w) { outputs_.at(j) = w; }
  void set_outputs(std::vector<Wire> outputs) { outputs_ = std::move(outputs); }

  friend bool operator==(const CausalityGraph&, const CausalityGraph&) = default;

 private:
  void rebuild_offsets();

  unsigned inputs_ = 0;
  std::vector<Node> nodes_;
  std::vector<Wire> outputs_;
  std::vector<std::size_t> port_offset_{0};  // first wire id of every node, then the wire count
};

/// A single node wired straight to the graph inputs and outputs.
CausalityGraph node_graph(const Generator& g);
/// n -> n, no nodes.
CausalityGraph identity_graph(unsigned n);
/// Pure wiring n -> |outputs|: output j carries input outputs[j].
CausalityGraph wiring_graph(unsigned n, const std::vector<unsigned>& outputs);
/// B1 ; B2. Throws TypeMismatch.
CausalityGraph seq(const CausalityGraph& first, const CausalityGraph& second);
CausalityGraph tensor(const CausalityGraph& left, const CausalityGraph& right);

/// Renders a wire as i<j> or <node>:<port>, 1-based.
std::string wire_name(const Wire& w);
/// One line per node "id label inputs=[...]", then "out=[...]".
void write_graph(std::ostream& os, const CausalityGraph& g);

}  // namespace pmbn
