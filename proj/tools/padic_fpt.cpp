// padic_fpt: first-passage, return and hitting statistics for the Vladimirov
// random walk on Q_p. Exit codes: 0 ok, 1 validation/usage/I-O error,
// 2 numerical failure or a failed verify criterion.
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "padic/acceptance.hpp"
#include "padic/asymptotics.hpp"
#include "padic/config.hpp"
#include "padic/hitting.hpp"
#include "padic/io.hpp"
#include "padic/kernels.hpp"
#include "padic/montecarlo.hpp"
#include "padic/spectrum.hpp"
#include "padic/transforms.hpp"

using namespace padic;
using nlohmann::json;

namespace {

// Summary goes to stdout unless the artifact itself is on stdout.
void summary(const RunConfig& c, const json& j) {
    (c.out == "-" ? std::cerr : std::cout) << j.dump() << std::endl;
}

double lambda0(const ModelParams& m) { return solve_lambda(0, m).lambda; }

std::vector<double> log_points(double a, double b, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = a * std::pow(b / a, n == 1 ? 0.0 : double(i) / (n - 1));
    return t;
}

int cmd_spectrum(const RunConfig& c) {
    const auto m = c.params();
    const Spectrum sp = build_spectrum(m, c.K, c.tail);
    if (c.format == "json") {
        write_text(spectrum_to_json(sp), c.out);
    } else {
        Table t{{"k", "lambda", "delta", "residue", "residue_err", "residual"}, {}};
        for (const auto& l : sp.lines) t.rows.push_back({double(l.k), l.lambda, l.delta, l.residue, l.residue_err, l.residual});
        write_output(t, Format::Csv, c.out);
    }
    summary(c, {{"command", "spectrum"}, {"K", sp.K}, {"f0", sp.f0}, {"sum_b", sp.sum_b}, {"tail_bound", sp.tail_bound}});
    return 0;
}

int cmd_density(const RunConfig& c) {
    const auto m = c.params();
    const Spectrum sp = build_spectrum(m, c.K, c.tail);
    const ReturnSpectrum rs = build_return_spectrum(m, sp.K);
    const TimeGrid g = make_grid(c.T > 0 ? c.T : 10.0 / sp.lines[0].lambda, c.steps);
    int flagged = 0;
    const auto fr = f_ret_grid(g.points(), rs, 64, &flagged);
    Table t{{"t", "f", "f_ret", "cdf"}, {}};
    for (int i = 0; i <= g.n; ++i) t.rows.push_back({g.t(i), f_series(g.t(i), sp), fr[i], f_cdf_series(g.t(i), sp)});
    write_output(t, parse_format(c.format), c.out);
    summary(c, {{"command", "density"}, {"T", g.T}, {"steps", g.n}, {"tail_bound", sp.tail_bound},
                {"return_points_from_inversion", flagged}});
    return 0;
}

int cmd_hitting(const RunConfig& c) {
    const auto m = c.params();
    const Spectrum sp = build_spectrum(m, c.K, c.tail);
    const ReturnSpectrum rs = build_return_spectrum(m, sp.K);
    const TimeGrid g = make_grid(c.T > 0 ? c.T : 100.0 / sp.lines[0].lambda, c.steps);
    const auto f = sample(g, [&](double x) { return f_series(x, sp); });
    const auto fr = f_ret_grid(g.points(), rs, 64);
    const HittingTable tab = build_hitting_table(g, f, fr, 1e-6);
    const int M = tab.m_max;
    Table t;
    t.header.push_back("t");
    for (int k = 0; k <= M; ++k) t.header.push_back("q" + std::to_string(k));
    for (int k = 0; k <= M; ++k) t.header.push_back("h" + std::to_string(k));
    t.header.push_back("mu");
    for (int i = 0; i <= g.n; ++i) {
        std::vector<double> row{g.t(i)};
        for (int k = 0; k <= M; ++k) row.push_back(tab.q[k][i]);
        for (int k = 0; k <= M; ++k) row.push_back(tab.h[k][i]);
        row.push_back(tab.mu[i]);
        t.rows.push_back(std::move(row));
    }
    write_output(t, parse_format(c.format), c.out);
    summary(c, {{"command", "hitting"}, {"T", g.T}, {"steps", g.n}, {"M", M}, {"mu_T", tab.mu.back()},
                {"mu_exact_T", mu_exact(g.T, m)}, {"tail_estimate_T", hitting_tail_estimate(tab, g.n)}});
    return 0;
}

int cmd_asymptote(const RunConfig& c) {
    const auto m = c.params();
    // large times need the deep spectrum regardless of K
    const Spectrum sp = build_spectrum(m, std::max(c.K, std::min(400, max_spectrum_k(m))));
    const DeltaLimit lim = delta_limit(m, 60);
    const double l0 = sp.lines[0].lambda;
    // start where both asymptotic forms have a scaled time above 1
    const double Lambda = f_asymptote_constants(m, lim).Lambda;
    const double t0 = 10.0 * std::max({1.0 / l0, 1.0 / Lambda, std::pow(norm_a(m), m.alpha), 1.0});
    const double T = c.T > 0 ? c.T : 1e8 / l0;
    if (!(T > t0)) throw ValidationError({"asymptote needs T > " + format_double(t0)});
    Table t{{"t", "f", "f_asymptote", "mu", "mu_asymptote"}, {}};
    AsymptoteResult fa, ma;
    for (double x : log_points(t0, T, c.steps)) {
        fa = f_asymptote(x, m, lim, c.modes);
        ma = mu_asymptote(x, m, c.modes);
        t.rows.push_back({x, f_series(x, sp), fa.value, mu_exact(x, m), ma.value});
    }
    write_output(t, parse_format(c.format), c.out);
    summary(c, {{"command", "asymptote"},
                {"f_exponent", fa.leading_exponent},
                {"mu_exponent", ma.leading_exponent},
                {"log_period", fa.log_period},
                {"delta_limit", lim.limit},
                {"delta_limit_converged", lim.converged}});
    return 0;
}

int cmd_simulate(const RunConfig& c) {
    const auto m = c.params();
    if (c.format != "csv") throw ValidationError({"simulate writes CSV only"});
    const auto model = DistanceChainModel::make(m);
    const double H = c.horizon > 0 ? c.horizon : 1e3 / lambda0(m);
    std::vector<ChainPath> paths(c.paths);
    parallel_chunks(c.paths, [&](long b, long e) {
        for (long i = b; i < e; ++i) paths[i] = simulate_path(model, PathKind::FirstPassage, H, c.seed, i);
    });
    long hits = 0;
    for (const auto& p : paths) hits += !p.hits.empty();
    write_text(paths_csv(paths), c.out);
    summary(c, {{"command", "simulate"}, {"paths", c.paths}, {"horizon", H}, {"seed", c.seed}, {"hits", hits},
                {"hit_fraction", double(hits) / c.paths}});
    return 0;
}

int cmd_verify(const RunConfig& c) {
    AcceptanceOptions opt;
    opt.seed = c.seed;
    opt.on_result = [](const CriterionResult& r) { std::cout << format_result(r) << std::flush; };
    const auto res = run_suite(parse_suite(c.suite), opt);
    int failed = 0;
    for (const auto& r : res) failed += !r.pass;
    std::cout << "\n" << res.size() - failed << "/" << res.size() << " criteria pass\n";
    return failed ? 2 : 0;
}

int cmd_kernels(const RunConfig& c) {
    const auto m = c.params();
    const KernelSpec k = parse_kernel(c.kernel, c.alpha);
    const double B = kernel_exit_rate(k, m).value;
    Table t{{"s", "J", "F_ret"}, {}};
    for (double s : log_points(1e-4 * B, 1e2 * B, c.steps))
        t.rows.push_back({s, eval_J_general(s, k, m).value, eval_F_return_general(s, k, m).value});
    write_output(t, parse_format(c.format), c.out);
    summary(c, {{"command", "kernels"}, {"kernel", kernel_name(k)}, {"exit_rate", B}});
    return 0;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError({"cannot read config file '" + path + "'"});
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-passage, return and hitting statistics of the Vladimirov random walk on Q_p"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig flag;
    std::string config_path;
    bool print_config = false;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bound;
    auto bind = [&](const std::string& name, auto member, const std::string& help) {
        bound.push_back({app.add_option(name, flag.*member, help), [&flag, member](RunConfig& c) { c.*member = flag.*member; }});
    };
    bind("--p", &RunConfig::p, "prime p (default 2)");
    bind("--alpha", &RunConfig::alpha, "exponent alpha > 0 of the jump kernel |x|^{-alpha-1} (default 1)");
    bind("--r", &RunConfig::r, "target ball radius exponent: B_r(a) has radius p^r (default 0)");
    bind("--nu", &RunConfig::nu, "target centre norm |a|_p = p^nu, nu >= max(r+1, 1) (default 1)");
    bind("--T", &RunConfig::T, "grid length; 0 picks 10/lambda_0 (density), 100/lambda_0 (hitting), 1e8/lambda_0 (asymptote, log grid from 10 max(1/lambda_0, |a|^alpha))");
    bind("--steps", &RunConfig::steps, "grid steps, or log-spaced points for asymptote and kernels (default 2000)");
    bind("--K", &RunConfig::K, "spectral lines kept in the eigen-expansion (default 60, at most 400)");
    bind("--tail", &RunConfig::tail, "if > 0, grow K until the mass tail bound is at most this (default 0)");
    bind("--paths", &RunConfig::paths, "Monte Carlo paths for simulate (default 1000)");
    bind("--horizon", &RunConfig::horizon, "Monte Carlo horizon; 0 picks 1e3/lambda_0");
    bind("--seed", &RunConfig::seed, "Monte Carlo seed; paths depend only on (seed, path id) (default 42; verify uses 20241015)");
    bind("--modes", &RunConfig::modes, "Fourier modes of the log-periodic prefactor (default 5)");
    bind("--kernel", &RunConfig::kernel, "kernels: power, exp or log (default power)");
    bind("--format", &RunConfig::format, "csv or json (default csv)");
    bind("--out", &RunConfig::out, "output path, '-' for stdout (default -)");
    bind("--suite", &RunConfig::suite, "verify: analytic, mc, asymptotic or all (default all)");
    app.add_option("--config", config_path, "JSON file with any of the option names as keys; flags override it");
    app.add_flag("--print-config", print_config, "print the merged configuration as JSON and exit");

    const std::pair<const char*, const char*> cmds[] = {
        {"spectrum", "eigenvalues lambda_k and residues b_k of the passage density"},
        {"density", "passage density f, return density f_ret and passage CDF on a grid"},
        {"hitting", "probabilities of at least m entries, exactly m entries, and the mean count"},
        {"asymptote", "long-time densities and mean hit count against their asymptotic forms"},
        {"simulate", "distance-chain Monte Carlo paths as CSV"},
        {"verify", "run the acceptance criteria; exit 2 if any fails"},
        {"kernels", "return-time transform for a general radial kernel"}};
    for (const auto& [name, help] : cmds) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg;
        bool seed_in_file = false;
        if (!config_path.empty()) {
            const std::string text = read_file(config_path);
            cfg = config_from_json(text, cfg);
            seed_in_file = json::parse(text).contains("seed");
        }
        for (auto& [opt, apply] : bound)
            if (opt->count() > 0) apply(cfg);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "verify" && !seed_in_file && app.get_option("--seed")->count() == 0) cfg.seed = 20241015;
        validate(cfg);
        if (print_config) {
            std::cout << config_to_json(cfg);
            return 0;
        }
        if (cmd == "spectrum") return cmd_spectrum(cfg);
        if (cmd == "density") return cmd_density(cfg);
        if (cmd == "hitting") return cmd_hitting(cfg);
        if (cmd == "asymptote") return cmd_asymptote(cfg);
        if (cmd == "simulate") return cmd_simulate(cfg);
        if (cmd == "verify") return cmd_verify(cfg);
        if (cmd == "kernels") return cmd_kernels(cfg);
    } catch (const ValidationError& e) {
        for (const auto& p : e.problems()) std::cerr << "error: " << p << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
