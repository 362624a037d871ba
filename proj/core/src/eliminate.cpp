#include "petrimbn/eliminate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "petrimbn/error.hpp"

namespace pmbn {

namespace {

constexpr double kPointMassTolerance = 1e-12;
// Update nodes on fewer places are cheap enough as a single table.
constexpr unsigned kExpandMinArity = 4;
// Largest choice-plus-enabledness table for stochastic successes.
constexpr unsigned kExpandTableLimit = 16;

// A column with one entry equal to one and all others zero.
bool point_mass(const std::vector<std::pair<Bits, double>>& col, Bits& row) {
  int ones = 0;
  for (const auto& [x, v] : col) {
    if (std::abs(v - 1.0) <= kPointMassTolerance) {
      ++ones;
      row = x;
    } else if (std::abs(v) > kPointMassTolerance) {
      return false;
    }
  }
  return ones == 1;
}

std::vector<std::size_t> node_wires(const CausalityGraph& g, std::size_t v) {
  std::vector<std::size_t> ws;
  for (const Wire& w : g.node(v).sources) ws.push_back(g.wire_id(w));
  for (const Wire& w : g.targets(v)) ws.push_back(g.wire_id(w));
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  return ws;
}

// Factor of node v over its distinct source and target wires.
Factor node_factor(const Mbn& b, std::size_t v) {
  const CausalityGraph& g = b.graph();
  const Matrix& m = b.node_matrix(v);
  std::vector<std::size_t> order;  // distinct wires, first appearance
  std::vector<std::size_t> slot_of_source;
  for (const Wire& w : g.node(v).sources) {
    const std::size_t id = g.wire_id(w);
    auto it = std::find(order.begin(), order.end(), id);
    slot_of_source.push_back(static_cast<std::size_t>(it - order.begin()));
    if (it == order.end()) order.push_back(id);
  }
  const std::size_t first_target = order.size();
  for (const Wire& w : g.targets(v)) order.push_back(g.wire_id(w));
  const unsigned n = m.in_arity();
  const unsigned k = m.out_arity();
  const std::size_t width = order.size();

  std::vector<Factor::Entry> entries;
  m.for_each_nonzero([&](Bits x, Bits y, double val) {
    Bits key = 0;
    Bits seen = 0;
    for (unsigned j = 0; j < n; ++j) {
      const Bits bit = Bits{1} << (width - 1 - slot_of_source[j]);
      const bool on = bit_at(y, n, j);
      if (seen & bit) {
        if (((key & bit) != 0) != on) return;  // repeated source read inconsistently
      } else {
        seen |= bit;
        if (on) key |= bit;
      }
    }
    for (unsigned p = 0; p < k; ++p)
      if (bit_at(x, k, p)) key |= Bits{1} << (width - 1 - (first_target + p));
    entries.emplace_back(key, val);
  });
  return Factor::sparse(std::move(order), std::move(entries));
}

struct WireGraph {
  std::vector<std::set<std::size_t>> adj;
  std::vector<std::size_t> node_max;  // largest node wire set containing the wire

  explicit WireGraph(const CausalityGraph& g) : adj(g.wire_count()), node_max(g.wire_count(), 0) {
    for (std::size_t v = 0; v < g.nodes().size(); ++v) {
      const auto ws = node_wires(g, v);
      for (std::size_t a : ws) {
        node_max[a] = std::max(node_max[a], ws.size());
        for (std::size_t c : ws)
          if (a != c) adj[a].insert(c);
      }
    }
  }

  // Removes w, connecting its neighbours; returns the neighbour count.
  std::size_t eliminate(std::size_t w) {
    const std::set<std::size_t> nb = std::move(adj[w]);
    adj[w].clear();
    for (std::size_t a : nb) {
      adj[a].erase(w);
      for (std::size_t c : nb)
        if (a != c) adj[a].insert(c);
    }
    return nb.size();
  }
};

void check_order(const CausalityGraph& g, const ElimOrder& order) {
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != g.internal_wires()) throw BadOrder("the order must list every internal wire exactly once");
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // The smaller id becomes the representative.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

class Engine {
 public:
  Engine(const Mbn& b, const EliminationOptions& opts, EliminationStats& stats)
      : b_(b), g_(b.graph()), opts_(opts), stats_(stats), rep_(g_.wire_count()) {
    const std::size_t w = g_.wire_count();
    UnionFind uf(w);
    if (opts_.merge_diagonals) {
      for (std::size_t v = 0; v < g_.nodes().size(); ++v) {
        if (!b_.is_diagonal(v)) continue;
        const auto targets = g_.targets(v);
        for (std::size_t i = 0; i < targets.size(); ++i)
          if (uf.unite(g_.wire_id(g_.node(v).sources[i]), g_.wire_id(targets[i]))) ++stats_.merged;
      }
    }
    for (std::size_t i = 0; i < w; ++i) rep_[i] = uf.find(i);
    external_.assign(w, false);
    const auto ext = g_.external_mask();
    for (std::size_t i = 0; i < w; ++i)
      if (ext[i]) external_[rep_[i]] = true;
    pinned_.assign(w, -1);
    done_.assign(w, false);

    for (std::size_t v = 0; v < g_.nodes().size(); ++v) {
      std::vector<std::size_t> classes;
      for (std::size_t id : node_wires(g_, v)) classes.push_back(rep_[id]);
      std::sort(classes.begin(), classes.end());
      classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
      stats_.max_factor_wires = std::max(stats_.max_factor_wires, classes.size());

      const UpdateNode* u = opts_.expand_updates ? b_.update_node(v) : nullptr;
      if (u && expand(v, *u)) continue;
      factors_.push_back(node_factor(b_, v).rename(rep_));
    }
    if (opts_.pin_definite) pin();
    for (Factor& f : factors_) {
      if (opts_.drop_vacuous) f = f.drop_vacuous();
      note(f);
    }
  }

  bool eliminable(std::size_t c) const { return rep_[c] == c && !external_[c] && pinned_[c] < 0 && !done_[c]; }

  std::size_t rep(std::size_t w) const { return rep_[w]; }

  void fold_singles() {
    bool again = true;
    while (again) {
      again = false;
      std::vector<std::size_t> count(rep_.size(), 0);
      for (const Factor& f : factors_)
        for (std::size_t w : f.wires()) ++count[w];
      std::vector<Factor> next;
      for (Factor& f : factors_) {
        std::vector<std::size_t> lonely;
        for (std::size_t w : f.wires())
          if (eliminable(w) && count[w] == 1) lonely.push_back(w);
        if (lonely.empty()) {
          next.push_back(std::move(f));
          continue;
        }
        for (std::size_t w : lonely) done_[w] = true;
        stats_.eliminated += lonely.size();
        const Factor* one[] = {&f};
        Factor produced = multiply_and_sum_out(one, lonely);
        if (opts_.drop_vacuous) produced = produced.drop_vacuous();
        note(produced, true);
        next.push_back(std::move(produced));
        again = true;
      }
      factors_ = std::move(next);
    }
  }

  void eliminate(std::size_t c) {
    done_[c] = true;
    ++stats_.eliminated;
    std::vector<const Factor*> bucket;
    std::vector<Factor> rest;
    for (const Factor& f : factors_)
      if (f.contains(c)) bucket.push_back(&f);
    if (bucket.empty()) {
      scale_ *= 2.0;
      return;
    }
    Factor produced = multiply_and_sum_out(bucket, {c});
    if (opts_.drop_vacuous) produced = produced.drop_vacuous();
    note(produced, true);
    for (Factor& f : factors_)
      if (!f.contains(c)) rest.push_back(std::move(f));
    rest.push_back(std::move(produced));
    factors_ = std::move(rest);
  }

  // Neighbour count of class c in the current factor set.
  std::size_t degree(std::size_t c, std::vector<std::size_t>& mark, std::size_t stamp) const {
    std::size_t d = 0;
    for (const Factor& f : factors_) {
      if (!f.contains(c)) continue;
      for (std::size_t w : f.wires())
        if (w != c && mark[w] != stamp) {
          mark[w] = stamp;
          ++d;
        }
    }
    return d;
  }

  void run_auto() {
    std::vector<std::size_t> mark(rep_.size(), 0);
    std::size_t stamp = 0;
    while (true) {
      if (opts_.fold_single) fold_singles();
      std::size_t best = std::numeric_limits<std::size_t>::max();
      std::size_t best_deg = best;
      for (std::size_t c = 0; c < rep_.size(); ++c) {
        if (!eliminable(c)) continue;
        const std::size_t d = degree(c, mark, ++stamp);
        if (d < best_deg) {
          best_deg = d;
          best = c;
        }
      }
      if (best == std::numeric_limits<std::size_t>::max()) break;
      eliminate(best);
    }
  }

  void run_order(const ElimOrder& order) {
    std::vector<std::size_t> remaining(rep_.size(), 0);
    for (std::size_t w : order) ++remaining[rep_[w]];
    if (opts_.fold_single) fold_singles();
    for (std::size_t w : order) {
      const std::size_t c = rep_[w];
      if (--remaining[c] == 0 && eliminable(c)) eliminate(c);
    }
    run_auto();  // hidden wires of expanded updates
  }

  Matrix finish() {
    // leftover internal classes appear in no factor
    for (std::size_t c = 0; c < rep_.size(); ++c)
      if (eliminable(c)) eliminate(c);
    std::vector<const Factor*> all;
    for (const Factor& f : factors_) all.push_back(&f);
    Factor joint = multiply_and_sum_out(all, {});

    const unsigned n = g_.input_count();
    const unsigned m = g_.output_count();
    std::vector<std::size_t> in_cls;
    std::vector<std::size_t> out_cls;
    for (unsigned j = 0; j < n; ++j) in_cls.push_back(rep_[j]);
    for (const Wire& w : g_.outputs()) out_cls.push_back(rep_[g_.wire_id(w)]);
    std::vector<std::size_t> free_cls;
    for (std::size_t c : in_cls)
      if (!joint.contains(c)) free_cls.push_back(c);
    for (std::size_t c : out_cls)
      if (!joint.contains(c)) free_cls.push_back(c);
    std::sort(free_cls.begin(), free_cls.end());
    free_cls.erase(std::unique(free_cls.begin(), free_cls.end()), free_cls.end());
    if (free_cls.size() > 24) throw TooLarge("too many unconstrained external wires");

    std::vector<int> value(rep_.size(), -1);
    std::vector<Matrix::Entry> entries;
    const auto& jw = joint.wires();
    joint.for_each_nonzero([&](Bits key, double v) {
      for (std::size_t i = 0; i < jw.size(); ++i) value[jw[i]] = static_cast<int>((key >> (jw.size() - 1 - i)) & 1U);
      for (Bits fk = 0; fk < state_count(static_cast<unsigned>(free_cls.size())); ++fk) {
        for (std::size_t i = 0; i < free_cls.size(); ++i)
          value[free_cls[i]] = static_cast<int>((fk >> (free_cls.size() - 1 - i)) & 1U);
        Bits x = 0;
        Bits y = 0;
        for (std::size_t c : in_cls) y = (y << 1) | static_cast<Bits>(value[c]);
        for (std::size_t c : out_cls) x = (x << 1) | static_cast<Bits>(value[c]);
        entries.push_back({x, y, v * scale_});
      }
    });
    return Matrix::from_entries(n, m, std::move(entries));
  }

 private:
  void note(const Factor& f, bool produced = false) {
    if (produced) stats_.max_intermediate_wires = std::max(stats_.max_intermediate_wires, f.arity());
    stats_.max_table_wires = std::max(stats_.max_table_wires, f.arity());
    stats_.max_factor_entries = std::max(stats_.max_factor_entries, f.nonzeros());
  }

  std::size_t hidden() {
    rep_.push_back(rep_.size());
    external_.push_back(false);
    pinned_.push_back(-1);
    done_.push_back(false);
    return rep_.size() - 1;
  }

  // Factor over `wires` (repeats allowed) with value fn(key); the key packs
  // the wires in the listed order, the first as the most significant bit.
  template <class F>
  static Factor table(const std::vector<std::size_t>& wires, F&& fn) {
    const std::size_t n = wires.size();
    std::vector<std::size_t> distinct;
    std::vector<std::size_t> first(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto it = std::find(distinct.begin(), distinct.end(), wires[i]);
      first[i] = static_cast<std::size_t>(it - distinct.begin());
      if (it == distinct.end()) distinct.push_back(wires[i]);
    }
    const std::size_t d = distinct.size();
    std::vector<Factor::Entry> entries;
    for (Bits key = 0; key < state_count(static_cast<unsigned>(n)); ++key) {
      Bits dkey = 0;
      Bits seen = 0;
      bool consistent = true;
      for (std::size_t i = 0; i < n && consistent; ++i) {
        const Bits bit = Bits{1} << (d - 1 - first[i]);
        const bool on = ((key >> (n - 1 - i)) & 1U) != 0;
        if (seen & bit)
          consistent = ((dkey & bit) != 0) == on;
        else if (on)
          dkey |= bit;
        seen |= bit;
      }
      if (!consistent) continue;
      const double v = fn(key);
      if (v != 0.0) entries.emplace_back(dkey, v);
    }
    return Factor::sparse(std::move(distinct), std::move(entries));
  }

  // Replaces update node v by small factors. A hidden choice variable c
  // (binary wires C) picks the transition; hidden wires E hold whether each
  // transition is enabled. Returns false when the node is kept whole.
  bool expand(std::size_t v, const UpdateNode& u) {
    const RelevantSets& rs = u.sets();
    const unsigned l = rs.arity();
    const std::size_t k = rs.tbar.size();
    if (l < kExpandMinArity) return false;
    const bool success = u.observation() == Observation::Success;
    const bool stochastic = rs.semantics == Semantics::Stochastic;

    std::vector<std::size_t> y;
    std::vector<std::size_t> x;
    for (const Wire& w : g_.node(v).sources) y.push_back(rep_[g_.wire_id(w)]);
    for (unsigned p = 0; p < l; ++p) x.push_back(rep_[g_.wire_id(Wire::port(v, p))]);
    auto local = [l](unsigned p) { return Bits{1} << (l - 1 - p); };
    auto pre_wires = [&](std::size_t i) {
      std::vector<std::size_t> ws;
      for (unsigned p = 0; p < l; ++p)
        if (rs.pre_mask[i] & local(p)) ws.push_back(y[p]);
      return ws;
    };
    auto all_ones = [](Bits key, std::size_t n) { return key == state_count(static_cast<unsigned>(n)) - 1; };
    auto link_diagonal = [&] {
      for (unsigned p = 0; p < l; ++p)
        if (x[p] != y[p]) factors_.push_back(table({x[p], y[p]}, [](Bits key) { return key == 0 || key == 3 ? 1.0 : 0.0; }));
    };

    if (!success && stochastic) {
      // F'(y) = [no transition enabled]
      for (std::size_t i = 0; i < k; ++i) {
        const auto ws = pre_wires(i);
        factors_.push_back(table(ws, [&](Bits key) { return all_ones(key, ws.size()) ? 0.0 : 1.0; }));
      }
      link_diagonal();
      return true;
    }

    const bool fail_code = !success && rs.fail_weight > 0.0;
    const std::size_t codes = k + (fail_code ? 1 : 0);
    const unsigned cb = codes <= 1 ? 0U : static_cast<unsigned>(std::bit_width(codes - 1));
    if (success && stochastic && cb + k > kExpandTableLimit) return false;
    std::vector<std::size_t> c;
    for (unsigned i = 0; i < cb; ++i) c.push_back(hidden());
    auto code_weight = [&](Bits code) {
      if (code < k) return rs.weight[code];
      return fail_code && code == k ? rs.fail_weight : 0.0;
    };
    auto with = [](std::vector<std::size_t> ws, std::initializer_list<std::size_t> more) {
      ws.insert(ws.end(), more);
      return ws;
    };

    std::vector<std::size_t> e;
    if (stochastic || !success) {
      // e_i = [pre_i marked]
      for (std::size_t i = 0; i < k; ++i) {
        e.push_back(hidden());
        const auto ws = with(pre_wires(i), {e.back()});
        factors_.push_back(table(ws, [&](Bits key) {
          const bool enabled = all_ones(key >> 1, ws.size() - 1);
          return enabled == ((key & 1U) != 0) ? 1.0 : 0.0;
        }));
      }
    }

    if (success) {
      if (stochastic) {
        // w_c e_c / sum_j w_j e_j
        std::vector<std::size_t> ws = c;
        ws.insert(ws.end(), e.begin(), e.end());
        factors_.push_back(table(ws, [&](Bits key) {
          const Bits code = key >> k;
          if (code >= k || !((key >> (k - 1 - code)) & 1U)) return 0.0;
          double total = 0.0;
          for (std::size_t j = 0; j < k; ++j)
            if ((key >> (k - 1 - j)) & 1U) total += rs.weight[j];
          return rs.weight[code] / total;
        }));
      } else {
        factors_.push_back(table(c, code_weight));
      }
      // per place: the chosen transition must find it marked if it consumes it, and fixes its next value
      for (unsigned p = 0; p < l; ++p) {
        factors_.push_back(table(with(c, {y[p], x[p]}), [&](Bits key) {
          const Bits code = key >> 2;
          if (code >= k) return 0.0;
          const bool in = (key & 2U) != 0;
          const bool out = (key & 1U) != 0;
          const bool consumes = (rs.pre_mask[code] & local(p)) != 0;
          const bool produces = (rs.post_mask[code] & local(p)) != 0;
          if (consumes && !in) return 0.0;
          const bool next = produces || (in && !consumes);
          return next == out ? 1.0 : 0.0;
        }));
      }
      return true;
    }

    // independent failure: the chosen transition is fail or disabled
    factors_.push_back(table(c, code_weight));
    for (std::size_t i = 0; i < k; ++i)
      factors_.push_back(table(with(c, {e[i]}), [&, i](Bits key) {
        return (key >> 1) != i || (key & 1U) == 0 ? 1.0 : 0.0;
      }));
    link_diagonal();
    return true;
  }

  void pin() {
    for (std::size_t v : g_.topological_order()) {
      const Node& node = g_.node(v);
      Bits y = 0;
      bool known = true;
      for (const Wire& w : node.sources) {
        const int p = pinned_[rep_[g_.wire_id(w)]];
        if (p < 0) {
          known = false;
          break;
        }
        y = (y << 1) | static_cast<Bits>(p);
      }
      if (!known) continue;
      Bits x = 0;
      if (!point_mass(b_.column(v, y), x)) continue;
      const unsigned k = node.gen.out;
      for (unsigned p = 0; p < k; ++p) {
        const std::size_t c = rep_[g_.wire_id(Wire::port(v, p))];
        if (external_[c] || pinned_[c] >= 0) continue;
        pinned_[c] = bit_at(x, k, p) ? 1 : 0;
        ++stats_.pinned;
      }
    }
    for (Factor& f : factors_) {
      for (std::size_t w : std::vector<std::size_t>(f.wires()))
        if (pinned_[w] >= 0) f = f.restrict(w, pinned_[w] == 1);
    }
  }

  const Mbn& b_;
  const CausalityGraph& g_;
  EliminationOptions opts_;
  EliminationStats& stats_;
  std::vector<std::size_t> rep_;
  std::vector<bool> external_;
  std::vector<int> pinned_;
  std::vector<bool> done_;
  std::vector<Factor> factors_;
  double scale_ = 1.0;
};

}  // namespace

std::vector<Factor> initial_factors(const Mbn& b) {
  std::vector<Factor> out;
  for (std::size_t v = 0; v < b.graph().nodes().size(); ++v) out.push_back(node_factor(b, v));
  return out;
}

ElimOrder min_degree_order(const Mbn& b) {
  const CausalityGraph& g = b.graph();
  WireGraph ug(g);
  std::vector<std::size_t> left = g.internal_wires();
  ElimOrder order;
  while (!left.empty()) {
    auto best = left.begin();
    for (auto it = left.begin(); it != left.end(); ++it)
      if (ug.adj[*it].size() < ug.adj[*best].size()) best = it;
    order.push_back(*best);
    ug.eliminate(*best);
    left.erase(best);
  }
  return order;
}

std::size_t order_width(const Mbn& b, const ElimOrder& order) {
  check_order(b.graph(), order);
  WireGraph ug(b.graph());
  std::size_t width = 0;
  for (std::size_t w : order) {
    const std::size_t own = ug.node_max[w];
    width = std::max({width, own, ug.eliminate(w)});
  }
  return width;
}

std::size_t elimination_width_exact(const Mbn& b) {
  ElimOrder order = b.graph().internal_wires();
  if (order.size() > kExactWidthLimit)
    throw TooLarge("exact elimination width limited to " + std::to_string(kExactWidthLimit) + " internal wires");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  do {
    best = std::min(best, order_width(b, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

Matrix run_elimination(const Mbn& b, const ElimOrder& order, const EliminationOptions& opts, EliminationStats* stats) {
  check_order(b.graph(), order);
  EliminationStats local;
  Engine engine(b, opts, stats ? *stats : local);
  engine.run_order(order);
  return engine.finish();
}

Matrix run_elimination_auto(const Mbn& b, const EliminationOptions& opts, EliminationStats* stats) {
  EliminationStats local;
  Engine engine(b, opts, stats ? *stats : local);
  engine.run_auto();
  return engine.finish();
}

std::size_t validate_tree_decomposition(const Mbn& b, const TreeDecomposition& td) {
  const CausalityGraph& g = b.graph();
  const std::size_t nb = td.bags.size();
  if (nb == 0) throw InvalidDecomposition("a tree decomposition needs at least one bag");
  // tree: connected with nb - 1 edges
  if (td.edges.size() != nb - 1) throw InvalidDecomposition("the bag graph is not a tree (edge count)");
  std::vector<std::vector<std::size_t>> adj(nb);
  for (auto [a, c] : td.edges) {
    if (a >= nb || c >= nb || a == c) throw InvalidDecomposition("edge refers to a missing bag");
    adj[a].push_back(c);
    adj[c].push_back(a);
  }
  auto connected = [&](const std::vector<bool>& allowed) {
    std::size_t start = nb;
    std::size_t total = 0;
    for (std::size_t i = 0; i < nb; ++i)
      if (allowed[i]) {
        ++total;
        if (start == nb) start = i;
      }
    if (total == 0) return false;
    std::vector<bool> seen(nb, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    std::size_t reached = 0;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      ++reached;
      for (std::size_t y : adj[x])
        if (allowed[y] && !seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
    }
    return reached == total;
  };
  if (!connected(std::vector<bool>(nb, true))) throw InvalidDecomposition("the bag graph is not a tree (disconnected)");

  for (std::size_t w = 0; w < g.wire_count(); ++w) {
    std::vector<bool> holds(nb, false);
    for (std::size_t i = 0; i < nb; ++i) holds[i] = td.bags[i].contains(w);
    if (std::none_of(holds.begin(), holds.end(), [](bool x) { return x; }))
      throw InvalidDecomposition("wire " + wire_name(g.wire_at(w)) + " lies in no bag");
    if (!connected(holds))
      throw InvalidDecomposition("the bags holding wire " + wire_name(g.wire_at(w)) + " do not form a subtree");
  }
  for (std::size_t v = 0; v < g.nodes().size(); ++v) {
    const auto ws = node_wires(g, v);
    const bool covered = std::any_of(td.bags.begin(), td.bags.end(), [&](const std::set<std::size_t>& bag) {
      return std::all_of(ws.begin(), ws.end(), [&](std::size_t w) { return bag.contains(w); });
    });
    if (!covered)
      throw InvalidDecomposition("no bag holds all wires of node " + std::to_string(v + 1) + " (" + g.node(v).gen.label +
                                 ")");
  }
  std::size_t largest = 0;
  for (const auto& bag : td.bags) largest = std::max(largest, bag.size());
  return largest == 0 ? 0 : largest - 1;
}

TreeDecomposition decomposition_from_order(const Mbn& b, const ElimOrder& order) {
  const CausalityGraph& g = b.graph();
  check_order(g, order);
  WireGraph ug(g);
  std::vector<std::size_t> position(g.wire_count(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  TreeDecomposition td;
  std::vector<std::size_t> parent_wire;
  for (std::size_t w : order) {
    std::set<std::size_t> bag = ug.adj[w];
    std::size_t parent = std::numeric_limits<std::size_t>::max();
    for (std::size_t x : bag)
      if (position[x] != std::numeric_limits<std::size_t>::max()) parent = std::min(parent, position[x]);
    parent_wire.push_back(parent);
    bag.insert(w);
    td.bags.push_back(std::move(bag));
    ug.eliminate(w);
  }
  // external wires are kept in one root bag
  std::set<std::size_t> root;
  const auto ext = g.external_mask();
  for (std::size_t w = 0; w < ext.size(); ++w)
    if (ext[w]) root.insert(w);
  const bool need_root = !root.empty() || order.empty();
  const std::size_t root_index = td.bags.size();
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (parent_wire[i] != std::numeric_limits<std::size_t>::max()) {
      td.edges.emplace_back(i, parent_wire[i]);
    } else if (need_root) {
      td.edges.emplace_back(i, root_index);
    } else if (i + 1 < order.size()) {
      td.edges.emplace_back(i, i + 1);  // joins separate components
    }
  }
  if (need_root) td.bags.push_back(std::move(root));
  return td;
}

}  // namespace pmbn
