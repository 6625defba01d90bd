#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "padic/core.hpp"

namespace padic {

enum class Suite { Analytic, MonteCarlo, Asymptotic, All };
Suite parse_suite(const std::string& s);
std::string suite_name(Suite s);
// analytic {1-7, 9, 12}, mc {8}, asymptotic {10, 11}
std::vector<int> suite_members(Suite s);

// p in {2,3,5} x alpha in {0.5,1,1.5,2} x r in {-1,0,1} x nu in {max(r+1,1),...,r+4}
std::vector<ModelParams> default_sweep();

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;
    std::vector<std::string> details;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20241015;
    long mc_paths = 100000;
    int detail_limit = 12;  // failing points listed per criterion
    std::function<void(const CriterionResult&)> on_result;
};

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_suite(Suite s, const AcceptanceOptions& opt = {});

// "PASS [ 1] title: summary" followed by indented detail lines
std::string format_result(const CriterionResult& r);

}  // namespace padic
