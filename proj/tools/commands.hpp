#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "robust_alloc/verify.hpp"

namespace robust_alloc::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kVerificationFailure = 2 };

struct CalibrateOptions {
    std::string data;
    std::string out = ".";
    std::size_t window = 240;
    double T_bar = 20.0;
};

struct FrontierOptions {
    std::string params;
    std::string out = ".";
    std::string gamma_grid = "1:10:0.25";
    bool per_source = false;
};

struct PathOptions {
    std::string params;
    std::string out = ".";
    double gamma = 2.0;
    int t_resolution = 12;
    bool per_source = false;
};

struct VerifyOptions {
    std::string params;
    std::string out = ".";
    std::size_t paths = 100000;
    int steps_per_year = 252;
    std::uint64_t seed = 20211;
    SaddleGridSpec grid;
};

struct SimulateOptions {
    std::string params;
    std::string out = ".";
    std::string strategy = "optimal";
    std::string scenario = "worst-case";
    std::size_t paths = 100000;
    int steps_per_year = 252;
    std::uint64_t seed = 20211;
    std::optional<double> gamma;
    bool per_path = false;
};

struct SynthesizeOptions {
    std::string params;
    std::string out = "synthetic.csv";
    std::size_t rows = 900;
    std::uint64_t seed = 1946;
};

int cmd_calibrate(const CalibrateOptions& opt, std::ostream& log);
int cmd_frontier(const FrontierOptions& opt, std::ostream& log);
int cmd_path(const PathOptions& opt, std::ostream& log);
int cmd_verify(const VerifyOptions& opt, std::ostream& log);
int cmd_simulate(const SimulateOptions& opt, std::ostream& log);
int cmd_synthesize(const SynthesizeOptions& opt, std::ostream& log);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv);

} // namespace robust_alloc::cli
