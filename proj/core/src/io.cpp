#include "petrimbn/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "petrimbn/error.hpp"

namespace pmbn {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + name + "'");
  return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of names");
  std::vector<std::string> out;
  for (const json& e : j) {
    if (!e.is_string()) throw ParseError(where + ": expected a string");
    out.push_back(e.get<std::string>());
  }
  return out;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

Net net_from(const json& j) {
  std::vector<std::string> places = string_list(field(j, "places", "net"), "net.places");
  const json& ts = field(j, "transitions", "net");
  if (!ts.is_array()) throw ParseError("net.transitions: expected an array");
  std::vector<Net::TransitionSpec> specs;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string where = "net.transitions[" + std::to_string(i) + "]";
    const json& t = ts[i];
    const json& name = field(t, "name", where);
    if (!name.is_string()) throw ParseError(where + ".name: expected a string");
    Net::TransitionSpec spec{name.get<std::string>(), {}, {}};
    if (t.contains("pre")) spec.pre = string_list(t["pre"], where + ".pre");
    if (t.contains("post")) spec.post = string_list(t["post"], where + ".post");
    specs.push_back(std::move(spec));
  }
  return Net(std::move(places), specs);
}

json net_json(const Net& net) {
  json ts = json::array();
  for (const Transition& t : net.transitions()) {
    json pre = json::array();
    json post = json::array();
    for (std::size_t p : t.pre) pre.push_back(net.places()[p]);
    for (std::size_t p : t.post) post.push_back(net.places()[p]);
    ts.push_back({{"name", t.name}, {"pre", pre}, {"post", post}});
  }
  return {{"places", net.places()}, {"transitions", ts}};
}

}  // namespace

Net parse_net(const std::string& json_text) { return net_from(parse_json(json_text, "net")); }

Net load_net(const std::filesystem::path& path) { return parse_net(read_file(path)); }

std::string net_to_json(const Net& net) { return net_json(net).dump(2); }

ObservationTrace parse_trace(const std::string& json_text, const std::filesystem::path& base_dir) {
  const json j = parse_json(json_text, "trace");
  ObservationTrace trace;
  const json& net = field(j, "net", "trace");
  if (net.is_string()) {
    std::filesystem::path p = net.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    trace.net = load_net(p);
  } else {
    trace.net = net_from(net);
  }

  if (j.contains("prior")) {
    const json& prior = j["prior"];
    if (!prior.is_object()) throw ParseError("trace.prior: expected an object");
    if (prior.contains("joint")) {
      std::vector<double> joint;
      const json& arr = prior["joint"];
      if (!arr.is_array()) throw ParseError("trace.prior.joint: expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) joint.push_back(number(arr[i], "trace.prior.joint"));
      if (joint.size() != state_count(static_cast<unsigned>(std::min<std::size_t>(trace.net.place_count(), 40))))
        throw ParseError("trace.prior.joint: expected 2^" + std::to_string(trace.net.place_count()) + " entries");
      trace.prior.joint = std::move(joint);
    } else {
      trace.prior.marginals.assign(trace.net.place_count(), 0.0);
      for (auto it = prior.begin(); it != prior.end(); ++it)
        if (!trace.net.find_place(it.key())) throw ParseError("trace.prior: unknown place '" + it.key() + "'");
      for (std::size_t p = 0; p < trace.net.place_count(); ++p) {
        const std::string& name = trace.net.places()[p];
        const double q = number(field(prior, name.c_str(), "trace.prior"), "trace.prior." + name);
        if (!(q >= 0.0 && q <= 1.0)) throw ParseError("trace.prior." + name + ": probability outside [0,1]");
        trace.prior.marginals[p] = q;
      }
    }
  } else {
    trace.prior = Prior::uniform(trace.net.place_count());
  }

  const json& steps = field(j, "steps", "trace");
  if (!steps.is_array()) throw ParseError("trace.steps: expected an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "trace.steps[" + std::to_string(i) + "]";
    const json& s = steps[i];
    const json& sem = field(s, "semantics", where);
    if (!sem.is_string()) throw ParseError(where + ".semantics: expected a string");
    const json& ws = field(s, "weights", where);
    if (!ws.is_object()) throw ParseError(where + ".weights: expected an object");
    std::map<std::string, double> weights;
    for (auto it = ws.begin(); it != ws.end(); ++it) weights[it.key()] = number(it.value(), where + ".weights." + it.key());
    const json& obs = field(s, "obs", where);
    if (!obs.is_string()) throw ParseError(where + ".obs: expected a string");
    try {
      trace.steps.push_back({StepSpec(trace.net, parse_semantics(sem.get<std::string>()), weights),
                             parse_observation(obs.get<std::string>())});
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return trace;
}

ObservationTrace load_trace(const std::filesystem::path& path) {
  return parse_trace(read_file(path), path.parent_path());
}

std::string trace_to_json(const ObservationTrace& trace) {
  json j;
  j["net"] = net_json(trace.net);
  if (trace.prior.joint) {
    j["prior"] = {{"joint", *trace.prior.joint}};
  } else {
    json prior = json::object();
    for (std::size_t p = 0; p < trace.net.place_count(); ++p) prior[trace.net.places()[p]] = trace.prior.marginals[p];
    j["prior"] = prior;
  }
  json steps = json::array();
  for (const TraceStep& s : trace.steps) {
    json weights = json::object();
    for (std::size_t t : s.step.support()) weights[trace.net.transition(t).name] = s.step.weight(t);
    if (s.step.fail_weight() > 0.0) weights[std::string(kFailName)] = s.step.fail_weight();
    steps.push_back({{"semantics", std::string(to_string(s.step.semantics()))},
                     {"weights", weights},
                     {"obs", std::string(to_string(s.obs))}});
  }
  j["steps"] = steps;
  return j.dump(2);
}

ElimOrder parse_order(const std::string& text, const CausalityGraph& g) {
  std::istringstream in(text);
  std::string tok;
  ElimOrder order;
  while (in >> tok) {
    try {
      Wire w;
      if (tok.size() > 1 && tok[0] == 'i') {
        w = Wire::input(static_cast<unsigned>(std::stoul(tok.substr(1)) - 1));
        if (w.index >= g.input_count()) throw ParseError("");
      } else {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) throw ParseError("");
        const std::size_t node = std::stoul(tok.substr(0, colon));
        const unsigned port = static_cast<unsigned>(std::stoul(tok.substr(colon + 1)));
        if (node == 0 || port == 0 || node > g.nodes().size() || port > g.node(node - 1).gen.out) throw ParseError("");
        w = Wire::port(node - 1, port - 1);
      }
      order.push_back(g.wire_id(w));
    } catch (const std::logic_error&) {
      throw ParseError("order: bad wire '" + tok + "'");
    } catch (const ParseError&) {
      throw ParseError("order: bad wire '" + tok + "'");
    }
  }
  return order;
}

}  // namespace pmbn
