#pragma once

#include "mz/hurwitz.hpp"
#include "mz/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mz {

/// Malformed or inconsistent input; maps to exit status 2.
class JobError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct JobSpec {
    std::string mode;
    std::vector<std::string> marking;
    std::optional<int> degree;
    /// Source point to target point, in document order.
    std::vector<std::pair<std::string, std::string>> F;
    std::vector<std::pair<std::string, int>> rm;
    std::vector<std::pair<std::string, Partition>> br;
    std::optional<std::vector<std::string>> heavy;
    std::optional<std::vector<std::pair<std::string, Q>>> weights;
    std::optional<int> k;
    /// Braid orbit id; empty means the full space.
    std::optional<int> orbit;
    std::optional<int> ell;
    std::optional<Q> epsilon;
    std::optional<std::string> out;
};

/// Errors name the offending line (syntax) or field (schema).
JobSpec parse_job(std::string_view document);

/// Normal form of a job; parse_job(print_job(j).dump()) prints identically.
nlohmann::ordered_json print_job(const JobSpec& job);

/// Source points are the keys of F; a portrait is a datum whose source points are the marking.
HurwitzDatum datum_from_job(const JobSpec& job);
bool is_portrait(const JobSpec& job);

struct RunOptions {
    int threads = 1;
    std::uint64_t max_tuples = 0;
    std::optional<int> orbit;
};

struct RunResult {
    nlohmann::ordered_json report;
    /// 0 pass, 1 theorem-check counterexample, 2 input error.
    int exit_code = 0;
};

RunResult run(const JobSpec& job, const RunOptions& options = {});

/// Parses and runs; input errors become a report with exit status 2.
RunResult run_document(std::string_view document, const RunOptions& options = {});

std::string job_hash(const JobSpec& job);

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace mz
