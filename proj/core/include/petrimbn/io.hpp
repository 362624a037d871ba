#pragma once

// JSON net and trace files.
//
// Net:   {"places": ["K1", ...], "transitions": [{"name": "d1", "pre": ["K1"], "post": ["K1", "K2"]}, ...]}
// Trace: {"net": <net object or path>, "prior": {"K1": 0.5, ...} | {"joint": [...]},
//         "steps": [{"semantics": "stochastic", "weights": {"d1": 0.25}, "obs": "success"}, ...]}
// A relative net path is resolved against the trace file's directory.

#include <filesystem>
#include <string>
#include <vector>

#include "petrimbn/petri.hpp"
#include "petrimbn/reason.hpp"

namespace pmbn {

/// Throws ParseError naming the offending field, or InvalidNet.
Net parse_net(const std::string& json_text);
Net load_net(const std::filesystem::path& path);
std::string net_to_json(const Net& net);

ObservationTrace parse_trace(const std::string& json_text, const std::filesystem::path& base_dir = {});
ObservationTrace load_trace(const std::filesystem::path& path);
std::string trace_to_json(const ObservationTrace& trace);

/// Whitespace separated wire names as printed in graph dumps: "i1" or "3:2" (node:port, 1-based).
ElimOrder parse_order(const std::string& text, const CausalityGraph& g);

}  // namespace pmbn
