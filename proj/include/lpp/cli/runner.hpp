#pragma once

#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "lpp/cli/experiment.hpp"
#include "lpp/cli/rows.hpp"

namespace lpp::cli {

std::string_view tool_version() noexcept;

/// Runs a validated spec, handing each row to `sink` as soon as it is ready.
/// Progress goes to `log`. Returns false when a verification experiment found a
/// mismatch.
bool run_experiment(const ExperimentSpec& spec, const std::function<void(const ResultRow&)>& sink,
                    std::ostream& log);

/// Per-row table and, for rate families, the least-squares slope of
/// -log p_hat against n. Throws SchemaError if rows mix experiments.
void write_report(const std::vector<ResultRow>& rows, std::ostream& out);

/// Full command line entry point; returns the process exit status
/// (0 success, 2 validation error, 3 runtime error).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lpp::cli
