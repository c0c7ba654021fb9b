#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cartan/errors.hpp"
#include "cartan/serialize.hpp"

namespace cartan {

inline constexpr const char* kReportSchema = "cartan-report/1";
inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    std::uint64_t seed = 1;
    std::size_t cap = kDefaultCap;
    double tol = kTol;
};

// Exit status: 0 pass, 1 verdict failure, 2 input error, 3 budget exceeded.
int exit_code_for(ErrorCode c);

struct RunResult {
    json report; // schema, command, instance digest, seed, verdicts, residuals, timings, output
    int exit_code = 0;
};

// commands: validate pseudogroup synthesize roundtrip-a crossed-product
// extract roundtrip-b quotient-rel roundtrip-c metric
const std::vector<std::string>& commands();
RunResult run(const std::string& command, const json& input, const RunOptions& opt = {});

struct RandomOptions {
    std::string kind;        // principal-groupoid (or principal), group-bundle, transformation-groupoid,
                             // coboundary-action, subrelation
    int atoms = 4;
    std::string group = "z2";
    int max_block = 2;
    bool strongly_normal = false;
    bool ergodic = false;
    std::uint64_t seed = 1;
};
// Tagged instance JSON. Throws MalformedInput for an unknown kind.
json random_instance(const RandomOptions& opt);

} // namespace cartan
