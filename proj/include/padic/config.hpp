#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "padic/core.hpp"

namespace padic {

// Options shared by every subcommand. Zero for T / horizon means "derive from lambda_0".
struct RunConfig {
    long long p = 2;
    double alpha = 1.0;
    int r = 0;
    int nu = 1;
    double T = 0.0;        // grid length; density 10/lambda_0, hitting 100/lambda_0, asymptote 1e8/lambda_0
    int steps = 2000;      // grid steps (asymptote: log-spaced points)
    int K = 60;            // spectral lines
    double tail = 0.0;     // if > 0, grow K until tail_bound <= tail
    long paths = 1000;
    double horizon = 0.0;  // Monte Carlo horizon; default 1e3/lambda_0
    std::uint64_t seed = 42;
    int modes = 5;         // Fourier modes of the log-periodic prefactor
    std::string kernel = "power";
    std::string format = "csv";
    std::string out = "-";
    std::string suite = "all";

    ModelParams params() const;  // validated model parameters
};

// Throws ValidationError naming every violated bound.
void validate(const RunConfig& c);

// Lossless: doubles are written in shortest round-trip form, seed as an integer.
std::string config_to_json(const RunConfig& c);
// Applies the keys present in the JSON object on top of base; unknown keys are errors.
RunConfig config_from_json(const std::string& text, RunConfig base = {});
std::vector<std::string> config_keys();

}  // namespace padic
