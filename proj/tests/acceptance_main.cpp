// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit 0 once every selected criterion has produced a verdict; with --strict,
// exit 2 if any verdict is FAIL.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "padic/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria runner"};
    std::string suite = "all", report;
    std::vector<int> only;
    bool strict = false;
    padic::AcceptanceOptions opt;
    app.add_option("--suite", suite, "analytic, mc, asymptotic or all")->check(CLI::IsMember({"analytic", "mc", "asymptotic", "all"}));
    app.add_option("--criterion", only, "run only these criterion ids")->check(CLI::Range(1, 12));
    app.add_option("--seed", opt.seed, "Monte Carlo seed");
    app.add_option("--paths", opt.mc_paths, "Monte Carlo paths per check")->check(CLI::Range(1000L, 100000000L));
    app.add_option("--report", report, "also write the output to this file");
    app.add_flag("--strict", strict, "exit 2 if any criterion fails");
    CLI11_PARSE(app, argc, argv);

    std::ostringstream all;
    opt.on_result = [&](const padic::CriterionResult& r) {
        const std::string s = padic::format_result(r);
        std::cout << s << std::flush;
        all << s;
    };
    std::vector<padic::CriterionResult> results;
    if (only.empty()) {
        results = padic::run_suite(padic::parse_suite(suite), opt);
    } else {
        for (int id : only) results.push_back(padic::run_criterion(id, opt));
    }
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    std::ostringstream tail;
    tail << "\n" << results.size() - failed << "/" << results.size() << " criteria pass\n";
    std::cout << tail.str();
    all << tail.str();
    if (!report.empty()) {
        std::ofstream f(report);
        f << all.str();
    }
    return strict && failed ? 2 : 0;
}
