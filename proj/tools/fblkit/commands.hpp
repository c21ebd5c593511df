#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace fblkit::cli {

// Subcommand parameter blocks. Option values arrive as raw strings and are
// parsed/validated inside the cmd_* functions so that every failure mode
// surfaces as a fblkit::Error with a machine-readable kind.

struct AnalyzeConfig {
    std::string channel;
    std::string input_dist;      // comma-separated pmf, empty = uniform
    std::string json_path;       // empty = stdout table only
    std::string emit_spec_path;  // empty = none
};

struct BoundsConfig {
    std::string channel;
    double eps = 0.0;
    std::string n_grid;     // "start:stop:step", exclusive with rate_grid
    std::string rate_grid;  // "start:stop:step"
    std::uint64_t n = 0;    // blocklength for rate_grid mode
    std::string delta = "auto";
    std::string input_dist;
    std::string csv_path;
};

struct SimulateConfig {
    std::string channel;
    std::uint64_t n = 0;
    double rate = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string tie_policy = "ties-error";  // or "uniform"
    bool exact = false;
    bool fixed_codebook = false;
    std::string delta = "auto";
    std::string input_dist;
    std::string json_path;  // empty = JSON to stdout
};

struct LlnConfig {
    std::string channel;
    std::string n_list;  // comma-separated blocklengths
    double delta = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string input_dist;
    std::string csv_path;
};

// Each returns 0 on success and throws fblkit::Error subclasses otherwise.
// Warnings (infeasible grid rows and the like) go to err as single-line JSON
// records without affecting the exit code.
int cmd_analyze(const AnalyzeConfig& config, std::ostream& out,
                std::ostream& err);
int cmd_bounds(const BoundsConfig& config, std::ostream& out,
               std::ostream& err);
int cmd_simulate(const SimulateConfig& config, std::ostream& out,
                 std::ostream& err);
int cmd_lln(const LlnConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fblkit::cli
