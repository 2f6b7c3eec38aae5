#pragma once

#include "shatterlab/banseq.hpp"
#include "shatterlab/dims.hpp"
#include "shatterlab/geometry.hpp"
#include "shatterlab/set_system.hpp"
#include "shatterlab/thicketvc.hpp"
#include "shatterlab/typetree.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace shatterlab::io {

// Insertion-ordered, so emitted keys are deterministic.
using Json = nlohmann::ordered_json;

// Parse errors become InputError "<source>: line L, column C: ...".
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

// Semantic errors name the offending JSON pointer, e.g. "thresholds.json:/sets/2: ...".
SetSystem set_system_from_json(const Json& j, const std::string& source = "input");
Json to_json(const SetSystem& F);

PointArrangement arrangement_from_json(const Json& j, const std::string& source = "input");
Json to_json(const PointArrangement& arr);

std::vector<Line> lines_from_json(const Json& j, const std::string& source = "input");
Json to_json(const std::vector<Line>& lines);

Graph graph_from_json(const Json& j, const std::string& source = "input");
Json to_json(const Graph& G);

TypeTree type_tree_from_json(const Json& j, const std::string& source = "input");
Json to_json(const TypeTree& tree);

ProbSpace prob_space_from_json(const Json& j, const std::string& source = "input");
Json to_json(const ProbSpace& space);

// Explicit tables or generator shorthand ({"generator": "parity", "n": 5}).
RelaxedBanProblem relaxed_ban_problem_from_json(const Json& j, const std::string& source = "input",
                                                const Caps& caps = {});
BanProblem ban_problem_from_json(const Json& j, const std::string& source = "input", const Caps& caps = {});
// Explicit table of every (S, X).
Json to_json(const RelaxedBanProblem& f, const Caps& caps = {});

Json to_json(const HereditaryWitness& w, const BanShape& shape);

Json to_json(const BoundAuditReport& report);
std::string to_csv(const BoundAuditReport& report);

Json to_json(const ExperimentReport& report);
std::string trials_csv(const ExperimentReport& report);

// Decimal rendering with enough digits to round-trip a long double.
std::string format_real(long double x);

}  // namespace shatterlab::io
