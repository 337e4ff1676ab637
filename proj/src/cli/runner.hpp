#ifndef CODEDLAB_CLI_RUNNER_HPP
#define CODEDLAB_CLI_RUNNER_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "codedmm/schemes.hpp"
#include "gradcode/schemes.hpp"

namespace codedlab::cli {

struct ResultRow {
    std::string experiment;
    std::string axes;  // "key=value;key=value", CSV-safe
    std::string metric;
    double value = 0.0;
    uint64_t seed = 0;
    double timestamp = 0.0;  // simulated time where applicable, else 0
};

struct RunResult {
    std::vector<ResultRow> rows;
    bool any_unrecoverable = false;
};

// Executes the experiment, rows in deterministic grid order.
RunResult run(const ExperimentConfig& config);

// Scheme builders shared with the C API.
gc::GcScheme build_gc_scheme(const ExperimentConfig& cfg, uint64_t seed, size_t s_value);
std::unique_ptr<cmm::CmmScheme> build_cmm_scheme(const ExperimentConfig& cfg, const Matrix& a,
                                                 const Matrix& b, uint64_t seed);

void write_csv(const RunResult& result, const ExperimentConfig& config, std::ostream& out);
void write_jsonl(const RunResult& result, const ExperimentConfig& config, std::ostream& out);

// Writes to config's `out` path (or the override); empty path means stdout.
// Returns the path actually used.
std::string write_output(const RunResult& result, const ExperimentConfig& config,
                         const std::string& path_override, const std::string& format_override);

}  // namespace codedlab::cli

#endif
