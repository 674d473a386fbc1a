#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "wideopen/residues.hpp"
#include "wideopen/solver.hpp"

namespace wideopen {

using Json = nlohmann::ordered_json;

Rational json_rational(const Json& j, const std::string& field);
Point json_point(const Json& j, const std::string& field);
LaurentChunk json_chunk(const Json& j, long p);
RationalFn json_function(const Json& j);
WideOpenDomain json_domain(const Json& j);

Json to_json(const LaurentChunk& c);
Json to_json(const RationalFn& f);
Json to_json(const NormExp& e);

struct ProblemFile {
    MLProblem problem;
    long depth = 12;
};

ProblemFile parse_problem(const Json& j);
ProblemFile load_problem(const std::string& path);
Json load_json(const std::string& path);

Json report_json(const MLProblem& pb, const SolveReport& r);

struct RunOptions {
    std::optional<long> depth;
    std::optional<unsigned long> seed;
    bool oracle = false;
    std::optional<std::string> mode;
    std::optional<std::string> semantics;
    std::optional<std::string> diff_mode;
    std::optional<std::string> basis_kind;
};

struct RunResult {
    Json report;
    int exit_code = 0;
};

int exit_code_for(Verdict v);

// Errors surface as {"error": name, "message": ...} with exit code 1.
RunResult run_command(const std::string& command, const Json& input, const RunOptions& opt);

} // namespace wideopen
