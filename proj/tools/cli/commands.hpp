#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rlab::cli {

struct AnalyzeOptions {
    double eta_sq = 0.0;
    double pc_min = 0.0;
    double pc_max = 0.0;
    int pc_steps = 0;
    std::string out_path;
};

struct SimulateOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
};

struct SweepOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::vector<double> epsilons;
    int runs_per_point = 1;
};

// Exit codes: 0 success, 1 validation, 2 I/O, 3 simulation failure.
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

}  // namespace rlab::cli
