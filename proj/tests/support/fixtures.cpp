#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>

namespace fixtures {

using namespace pmbn;

int uniform_int(Rand& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform_real(Rand& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Net gossip_net() {
  return Net({"K1", "K2", "K3", "K4"}, {{"d1", {"K1"}, {"K1", "K2"}},
                                        {"d2", {"K2"}, {"K1", "K2"}},
                                        {"d3", {"K1"}, {"K1", "K3"}},
                                        {"d4", {"K3"}, {"K1", "K3", "K4"}},
                                        {"d5", {"K4"}, {"K2", "K4"}}});
}

StepSpec gossip_step(const Net& net) {
  return StepSpec(net, Semantics::Stochastic, {{"d1", 1.0 / 6}, {"d2", 1.0 / 3}, {"d3", 1.0 / 6}});
}

ObservationTrace gossip_trace() {
  Net net = gossip_net();
  StepSpec step = gossip_step(net);
  return {net, Prior::uniform(4), {{step, Observation::Success}}};
}

Net test_net() { return Net({"I"}, {{"flp", {}, {}}, {"inf", {"I"}, {"I"}}}); }

StepSpec test_step(const Net& net, double p_r_i, double p_r_not_i) {
  return StepSpec(net, Semantics::Independent,
                  {{"flp", p_r_not_i}, {"inf", p_r_i - p_r_not_i}, {std::string(kFailName), 1.0 - p_r_i}});
}

ObservationTrace test_trace(double p_i, double p_r_i, double p_r_not_i, Observation obs) {
  Net net = test_net();
  StepSpec step = test_step(net, p_r_i, p_r_not_i);
  return {net, Prior{{p_i}, std::nullopt}, {{step, obs}}};
}

Matrix random_matrix(Rand& rng, unsigned in, unsigned out, bool stochastic) {
  const Bits rows = state_count(out);
  const Bits cols = state_count(in);
  std::vector<double> v(rows * cols);
  for (Bits y = 0; y < cols; ++y) {
    double sum = 0.0;
    for (Bits x = 0; x < rows; ++x) sum += v[x * cols + y] = uniform_real(rng, 0.0, 1.0);
    const double mass = stochastic ? 1.0 : uniform_real(rng, 0.5, 1.0);
    for (Bits x = 0; x < rows; ++x) v[x * cols + y] *= mass / sum;
  }
  return Matrix::dense(in, out, std::move(v));
}

std::vector<double> naive_product(const std::vector<double>& a, const std::vector<double>& b, std::size_t r,
                                  std::size_t k, std::size_t c) {
  std::vector<double> out(r * c, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t l = 0; l < k; ++l) out[i * c + j] += a[i * k + l] * b[l * c + j];
  return out;
}

std::vector<double> naive_kron(const std::vector<double>& a, std::size_t ar, std::size_t ac,
                               const std::vector<double>& b, std::size_t br, std::size_t bc) {
  std::vector<double> out(ar * br * ac * bc);
  const std::size_t cols = ac * bc;
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l) out[(i * br + k) * cols + j * bc + l] = a[i * ac + j] * b[k * bc + l];
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

namespace {

Mbn::Evaluation::mapped_type share(Matrix m) { return std::make_shared<const Matrix>(std::move(m)); }

Matrix coin() { return Matrix::column_vector({0.5, 0.5}); }

// 2 -> 1 deterministic gate
Matrix gate(bool (*fn)(bool, bool)) {
  return Matrix::generate(2, 1, [fn](Bits x, Bits y) { return x == (fn((y >> 1) & 1, y & 1) ? 1U : 0U) ? 1.0 : 0.0; });
}

}  // namespace

Mbn or_and_network(bool all_outputs) {
  std::vector<Node> nodes{{{"A", 0, 1}, {}},
                          {{"B", 0, 1}, {}},
                          {{"C", 0, 1}, {}},
                          {{"D", 2, 1}, {Wire::port(0, 0), Wire::port(1, 0)}},
                          {{"E", 2, 1}, {Wire::port(2, 0), Wire::port(3, 0)}}};
  std::vector<Wire> outs{Wire::port(4, 0)};
  if (all_outputs)
    outs = {Wire::port(0, 0), Wire::port(1, 0), Wire::port(2, 0), Wire::port(3, 0), Wire::port(4, 0)};
  Mbn::Evaluation ev{{"A", share(coin())},
                     {"B", share(coin())},
                     {"C", share(coin())},
                     {"D", share(gate([](bool a, bool b) { return a || b; }))},
                     {"E", share(gate([](bool c, bool d) { return c && d; }))}};
  return Mbn(CausalityGraph(0, std::move(nodes), std::move(outs)), std::move(ev));
}

Mbn star_network(unsigned n, Rand& rng) {
  std::vector<Node> nodes{{{"A", 0, 1}, {}}};
  Mbn::Evaluation ev{{"A", share(random_matrix(rng, 0, 1, true))}};
  std::vector<Wire> outs;
  for (unsigned i = 1; i <= n; ++i) {
    const std::string label = "B" + std::to_string(i);
    nodes.push_back({{label, 1, 1}, {Wire::port(0, 0)}});
    ev[label] = share(random_matrix(rng, 1, 1, true));
    outs.push_back(Wire::port(i, 0));
  }
  return Mbn(CausalityGraph(0, std::move(nodes), std::move(outs)), std::move(ev));
}

Mbn block_chain(unsigned k, Rand& rng) {
  std::vector<Wire> in;
  for (unsigned j = 0; j < k; ++j) in.push_back(Wire::input(j));
  std::vector<Wire> mid, out;
  for (unsigned p = 0; p < k; ++p) {
    mid.push_back(Wire::port(0, p));
    out.push_back(Wire::port(1, p));
  }
  std::vector<Node> nodes{{{"A", k, k}, in}, {{"C", k, k}, mid}};
  Mbn::Evaluation ev{{"A", share(random_matrix(rng, k, k))}, {"C", share(random_matrix(rng, k, k))}};
  return Mbn(CausalityGraph(k, std::move(nodes), std::move(out)), std::move(ev));
}

Mbn unary_chain(unsigned length, Rand& rng) {
  std::vector<Node> nodes{{{"S", 0, 1}, {}}};
  Mbn::Evaluation ev{{"S", share(random_matrix(rng, 0, 1))}};
  for (unsigned i = 1; i <= length; ++i) {
    const std::string label = "U" + std::to_string(i);
    nodes.push_back({{label, 1, 1}, {Wire::port(i - 1, 0)}});
    ev[label] = share(random_matrix(rng, 1, 1));
  }
  std::vector<Wire> outs{Wire::port(length, 0)};
  return Mbn(CausalityGraph(0, std::move(nodes), std::move(outs)), std::move(ev));
}

Mbn random_mbn(Rand& rng, const RandomMbnShape& shape) {
  const unsigned inputs = static_cast<unsigned>(uniform_int(rng, 0, static_cast<int>(shape.max_inputs)));
  std::vector<Wire> wires;
  for (unsigned j = 0; j < inputs; ++j) wires.push_back(Wire::input(j));
  std::vector<Node> nodes;
  Mbn::Evaluation ev;
  const int node_target = uniform_int(rng, 1, 6);
  while (static_cast<int>(nodes.size()) < node_target && wires.size() < shape.max_wires) {
    const std::size_t room = shape.max_wires - wires.size();
    unsigned out = static_cast<unsigned>(uniform_int(rng, 1, static_cast<int>(std::min<std::size_t>(shape.max_out, room))));
    unsigned in = static_cast<unsigned>(
        uniform_int(rng, 0, static_cast<int>(std::min<std::size_t>(shape.max_in, wires.size()))));
    const bool diagonal = in > 0 && in <= room && uniform_real(rng, 0.0, 1.0) < shape.diagonal_rate;
    if (diagonal) out = in;
    std::vector<Wire> pool = wires;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(in);
    const std::string label = "g" + std::to_string(nodes.size() + 1);
    if (diagonal) {
      std::vector<double> d(state_count(in));
      for (double& x : d) x = uniform_real(rng, 0.0, 1.0);
      ev[label] = share(Matrix::diagonal(in, std::move(d)));
    } else {
      ev[label] = share(random_matrix(rng, in, out));
    }
    nodes.push_back({{label, in, out}, std::move(pool)});
    for (unsigned p = 0; p < out; ++p) wires.push_back(Wire::port(nodes.size() - 1, p));
  }
  std::vector<Wire> outs = wires;
  std::shuffle(outs.begin(), outs.end(), rng);
  outs.resize(static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(std::min<std::size_t>(3, outs.size())))));
  return Mbn(CausalityGraph(inputs, std::move(nodes), std::move(outs)), std::move(ev));
}

RandomTerm random_term(Rand& rng, std::size_t max_internal) {
  for (;;) {
    int gens = 0;
    Mbn::Evaluation ev;
    auto fresh = [&](unsigned in, unsigned out) {
      const std::string label = "g" + std::to_string(++gens);
      ev[label] = share(random_matrix(rng, in, out));
      return Term::gen({label, in, out});
    };
    // first layer: sources
    std::optional<Term> t;
    const int sources = uniform_int(rng, 1, 3);
    for (int i = 0; i < sources; ++i) {
      Term g = fresh(0, static_cast<unsigned>(uniform_int(rng, 1, 2)));
      t = t ? Term::tensor(*t, g) : g;
    }
    const int layers = uniform_int(rng, 1, 3);
    for (int l = 0; l < layers && t->out() > 0; ++l) {
      const unsigned width = t->out();
      std::optional<Term> layer;
      unsigned i = 0;
      while (i < width) {
        Term block = Term::constant(ConstantKind::Identity, 1);
        switch (uniform_int(rng, 0, 4)) {
          case 0: {
            const unsigned a = static_cast<unsigned>(uniform_int(rng, 1, static_cast<int>(std::min(2U, width - i))));
            block = fresh(a, static_cast<unsigned>(uniform_int(rng, 1, 2)));
            break;
          }
          case 1:
            break;
          case 2:
            if (width < 4) block = Term::constant(ConstantKind::Duplicate, 1);
            break;
          case 3:
            block = Term::constant(ConstantKind::Terminate, 1);
            break;
          case 4:
            if (i + 2 <= width) block = Term::constant(ConstantKind::Swap, 1, 1);
            break;
        }
        i += block.in();
        layer = layer ? Term::tensor(*layer, block) : block;
      }
      t = Term::seq(*t, *layer);
    }
    CausalityGraph g = term_graph(*t);
    if (g.internal_wires().size() > max_internal || g.wire_count() > 16) continue;
    return {*t, Mbn(std::move(g), std::move(ev))};
  }
}

std::vector<double> brute_force(const Mbn& b) {
  const CausalityGraph& g = b.graph();
  const std::size_t n = g.input_count();
  const std::size_t m = g.output_count();
  const std::size_t wires = g.wire_count();
  if (wires > 24) throw std::runtime_error("brute force limited to 24 wires");
  const Bits cols = state_count(static_cast<unsigned>(n));
  std::vector<double> out(state_count(static_cast<unsigned>(m)) * cols, 0.0);
  // bit of wire id w in assignment a: wire 0 is the most significant
  auto bit = [&](Bits a, std::size_t w) { return (a >> (wires - 1 - w)) & 1U; };
  for (Bits a = 0; a < state_count(static_cast<unsigned>(wires)); ++a) {
    double p = 1.0;
    for (std::size_t v = 0; v < g.nodes().size() && p != 0.0; ++v) {
      Bits src = 0, tgt = 0;
      for (const Wire& w : g.node(v).sources) src = (src << 1) | bit(a, g.wire_id(w));
      for (const Wire& w : g.targets(v)) tgt = (tgt << 1) | bit(a, g.wire_id(w));
      p *= b.node_matrix(v).at(tgt, src);
    }
    if (p == 0.0) continue;
    Bits y = 0, x = 0;
    for (std::size_t j = 0; j < n; ++j) y = (y << 1) | bit(a, j);
    for (const Wire& w : g.outputs()) x = (x << 1) | bit(a, g.wire_id(w));
    out[x * cols + y] += p;
  }
  return out;
}

ElimOrder shuffled(ElimOrder order, Rand& rng) {
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace fixtures
