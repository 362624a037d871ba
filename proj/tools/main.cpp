// petrimbn: command-line front end for the library.
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 inconsistent evidence, 4 resource guard.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "petrimbn/bench.hpp"
#include "petrimbn/error.hpp"
#include "petrimbn/io.hpp"
#include "petrimbn/reason.hpp"

namespace {

using namespace pmbn;

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kInconsistent = 3, kResource = 4 };

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const std::size_t v = std::stoul(text);
      return {v, v};
    }
    return {std::stoul(text.substr(0, dots)), std::stoul(text.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("range", "expected N or A..B, got '" + text + "'");
  }
}

/// Each --marginal value is one query; commas ask for a joint marginal.
void print_marginal(const std::vector<std::string>& places, const std::vector<double>& values) {
  const auto k = static_cast<unsigned>(places.size());
  if (k == 1) {
    std::cout << places[0] << "=1: " << fmt(values[1]) << '\n';
    return;
  }
  std::string label;
  for (std::size_t i = 0; i < places.size(); ++i) label += (i ? "," : "") + places[i];
  for (Bits x = state_count(k); x-- > 0;) std::cout << label << '=' << to_bitstring(x, k) << ": " << fmt(values[x]) << '\n';
}

std::vector<std::vector<std::string>> queries_for(const ObservationTrace& trace, const std::vector<std::string>& flags) {
  std::vector<std::vector<std::string>> qs;
  for (const std::string& f : flags) qs.push_back(split(f, ','));
  if (qs.empty())
    for (const std::string& p : trace.net.places()) qs.push_back({p});
  return qs;
}

int cmd_validate(const std::string& path) {
  const std::string text = read_text(path);
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("steps")) {
    const ObservationTrace trace = load_trace(path);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) relevant_sets(trace.net, trace.steps[i].step);
    std::cout << "trace ok: " << trace.net.place_count() << " places, " << trace.net.transition_count()
              << " transitions, " << trace.steps.size() << " steps\n";
    return kOk;
  }
  const Net net = parse_net(text);
  std::vector<bool> touched(net.place_count(), false);
  for (const Transition& t : net.transitions()) {
    if (t.pre.empty()) std::cout << "warning: transition '" << t.name << "' has an empty preset\n";
    for (std::size_t p : t.pre) touched[p] = true;
    for (std::size_t p : t.post) touched[p] = true;
  }
  for (std::size_t p = 0; p < net.place_count(); ++p)
    if (!touched[p]) std::cout << "warning: place '" << net.places()[p] << "' is not touched by any transition\n";
  std::cout << "net ok: " << net.place_count() << " places, " << net.transition_count() << " transitions\n";
  return kOk;
}

struct QueryArgs {
  std::string trace;
  std::vector<std::string> marginals;
  bool mass = false;
  std::string order_file;
  bool dump_matrix = false;
  bool dump_graph = false;
  bool plain = false;
};

int cmd_query(const QueryArgs& a) {
  const ObservationTrace trace = load_trace(a.trace);
  const Posterior post = run(trace);
  if (a.dump_graph) write_graph(std::cout, post.mbn.graph());

  QueryOptions q;
  if (a.plain) q.elimination = EliminationOptions::plain();
  EliminationStats stats;
  q.stats = &stats;

  const auto queries = queries_for(trace, a.marginals);
  if (!a.order_file.empty() && queries.size() > 1 && !a.mass)
    throw CLI::ValidationError("--order-file", "an explicit order needs exactly one query");

  auto with_order = [&](const Mbn& kept) {
    QueryOptions local = q;
    if (!a.order_file.empty()) local.order = parse_order(read_text(a.order_file), kept.graph());
    return local;
  };

  if (a.mass) {
    const double m = mass(post, with_order(terminate(post.mbn, {})));
    std::cout << "mass: " << fmt(m) << '\n';
    if (a.marginals.empty()) return kOk;
  }
  for (const auto& places : queries) {
    const ProbVector p = marginal(post, places, with_order(terminate(post.mbn, places)));
    if (a.dump_matrix) write_matrix(std::cout, p.matrix());
    print_marginal(places, p.values());
  }
  return kOk;
}

int cmd_oracle(const std::string& path, const std::vector<std::string>& marginals, bool want_mass, std::size_t limit) {
  const ObservationTrace trace = load_trace(path);
  if (want_mass) {
    std::cout << "mass: " << fmt(replay(trace, limit).mass()) << '\n';
    if (marginals.empty()) return kOk;
  }
  for (const auto& places : queries_for(trace, marginals)) print_marginal(places, replay_marginal(trace, places, limit));
  return kOk;
}

int cmd_width(const std::string& path, const std::vector<std::string>& keep, const std::string& order_file) {
  const ObservationTrace trace = load_trace(path);
  const Mbn b = terminate(run(trace).mbn, keep);
  const ElimOrder order = order_file.empty() ? min_degree_order(b) : parse_order(read_text(order_file), b.graph());
  const std::size_t width = order_width(b, order);
  nlohmann::json names = nlohmann::json::array();
  for (std::size_t w : order) names.push_back(wire_name(b.graph().wire_at(w)));
  nlohmann::json report{{"order", names}, {"width", width}, {"max_factor_entries", std::size_t{1} << width}};
  std::cout << report.dump() << '\n';
  return kOk;
}

struct BenchArgs {
  std::string config;
  std::string places;
  std::string transitions;
  std::size_t max_pre = 0;
  std::size_t max_post = 0;
  std::size_t max_active = 0;
  std::size_t steps = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string engines;
  std::string semantics;
  std::size_t dense_limit = 0;
  std::string output;
};

BenchConfig bench_config(const BenchArgs& a) {
  BenchConfig c;
  if (!a.config.empty()) {
    const auto j = nlohmann::json::parse(read_text(a.config), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError("bench config: expected a JSON object");
    try {
      if (j.contains("places")) c.places = parse_range(j["places"].is_string() ? j["places"].get<std::string>()
                                                                                : std::to_string(j["places"].get<std::size_t>()));
      if (j.contains("transitions"))
        c.transitions = parse_range(j["transitions"].is_string() ? j["transitions"].get<std::string>()
                                                                 : std::to_string(j["transitions"].get<std::size_t>()));
      if (j.contains("max_pre")) c.max_pre = j["max_pre"].get<std::size_t>();
      if (j.contains("max_post")) c.max_post = j["max_post"].get<std::size_t>();
      if (j.contains("max_active")) c.max_active = j["max_active"].get<std::size_t>();
      if (j.contains("steps")) c.steps = j["steps"].get<std::size_t>();
      if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
      if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("semantics")) c.semantics = parse_semantics(j["semantics"].get<std::string>());
      if (j.contains("dense_limit")) c.dense_limit = j["dense_limit"].get<std::size_t>();
      if (j.contains("engines")) {
        c.engines.clear();
        for (const auto& e : j["engines"]) c.engines.push_back(e.get<std::string>() == "dense" ? Engine::Dense : Engine::Mbn);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bench config: ") + e.what());
    }
  }
  if (!a.places.empty()) c.places = parse_range(a.places);
  if (!a.transitions.empty()) c.transitions = parse_range(a.transitions);
  if (a.max_pre) c.max_pre = a.max_pre;
  if (a.max_post) c.max_post = a.max_post;
  if (a.max_active) c.max_active = a.max_active;
  if (a.steps) c.steps = a.steps;
  if (a.trials) c.trials = a.trials;
  if (a.seed_set) c.seed = a.seed;
  if (!a.semantics.empty()) c.semantics = parse_semantics(a.semantics);
  if (a.dense_limit) c.dense_limit = a.dense_limit;
  if (!a.engines.empty()) {
    c.engines.clear();
    for (const std::string& e : split(a.engines, ',')) {
      if (e == "mbn") c.engines.push_back(Engine::Mbn);
      else if (e == "dense") c.engines.push_back(Engine::Dense);
      else throw CLI::ValidationError("--engines", "unknown engine '" + e + "'");
    }
  }
  return c;
}

int cmd_bench(const BenchArgs& a) {
  const BenchConfig c = bench_config(a);
  const auto rows = run_bench(c);
  if (a.output.empty()) {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(a.output);
    if (!out) throw ParseError("cannot write '" + a.output + "'");
    write_csv(out, rows);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty reasoning on probabilistic condition/event nets"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a net or trace file");
  validate->add_option("file", validate_path, "net or trace JSON")->required();

  QueryArgs qa;
  auto* query = app.add_subcommand("query", "Posterior marginals via the network engine");
  query->add_option("trace", qa.trace, "trace JSON")->required();
  query->add_option("--marginal,-m", qa.marginals, "place, or comma separated places for a joint marginal");
  query->add_flag("--mass", qa.mass, "print the probability of the observations");
  query->add_option("--order-file", qa.order_file, "elimination order as wire names");
  query->add_flag("--dump-matrix", qa.dump_matrix, "print each marginal as a matrix dump");
  query->add_flag("--dump-graph", qa.dump_graph, "print the posterior causality graph");
  query->add_flag("--plain", qa.plain, "disable merging, pinning and folding");

  std::string oracle_path;
  std::vector<std::string> oracle_marginals;
  bool oracle_mass = false;
  std::size_t oracle_limit = kDefaultDensePlaceLimit;
  auto* oracle = app.add_subcommand("oracle", "Posterior marginals via the dense engine");
  oracle->add_option("trace", oracle_path, "trace JSON")->required();
  oracle->add_option("--marginal,-m", oracle_marginals, "place, or comma separated places");
  oracle->add_flag("--mass", oracle_mass, "print the probability of the observations");
  oracle->add_option("--dense-limit", oracle_limit, "largest place count the dense engine accepts");

  std::string width_path;
  std::vector<std::string> width_keep;
  std::string width_order;
  auto* width = app.add_subcommand("width", "Elimination order and width report");
  width->add_option("trace", width_path, "trace JSON")->required();
  width->add_option("--marginal,-m", width_keep, "places kept as outputs");
  width->add_option("--order-file", width_order, "elimination order as wire names");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Runtime comparison on random nets, as CSV");
  bench->add_option("config", ba.config, "optional JSON config; flags override it");
  bench->add_option("--places", ba.places, "place range A..B");
  bench->add_option("--transitions", ba.transitions, "transition range A..B (default: the place count)");
  bench->add_option("--max-pre", ba.max_pre);
  bench->add_option("--max-post", ba.max_post);
  bench->add_option("--max-active", ba.max_active);
  bench->add_option("--steps", ba.steps);
  bench->add_option("--trials", ba.trials);
  bench->add_option("--seed", ba.seed)->each([&](const std::string&) { ba.seed_set = true; });
  bench->add_option("--engines", ba.engines, "comma separated subset of mbn,dense");
  bench->add_option("--semantics", ba.semantics, "independent or stochastic");
  bench->add_option("--dense-limit", ba.dense_limit);
  bench->add_option("--output,-o", ba.output, "CSV file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_path);
    if (*query) return cmd_query(qa);
    if (*oracle) return cmd_oracle(oracle_path, oracle_marginals, oracle_mass, oracle_limit);
    if (*width) return cmd_width(width_path, width_keep, width_order);
    if (*bench) return cmd_bench(ba);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InconsistentEvidence& e) {
    std::cerr << "inconsistent evidence: " << e.what() << '\n';
    return kInconsistent;
  } catch (const TooLarge& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  }
  return kUsage;
}
