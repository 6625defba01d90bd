#include "padic/config.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace padic {

using nlohmann::json;

ModelParams RunConfig::params() const { return validate_params({p, alpha, r, nu}); }

void validate(const RunConfig& c) {
    std::vector<std::string> bad;
    try {
        c.params();
    } catch (const ValidationError& e) {
        bad.insert(bad.end(), e.problems().begin(), e.problems().end());
    }
    if (!(c.alpha <= 8.0)) bad.push_back("alpha must be <= 8");
    if (c.r < -30 || c.r > 30) bad.push_back("r must be in [-30, 30]");
    if (!std::isfinite(c.T) || c.T < 0) bad.push_back("T must be finite and >= 0 (0 = default)");
    if (c.steps < 2 || c.steps > (1 << 22)) bad.push_back("steps must be in [2, 4194304]");
    if (c.K < 1 || c.K > 400) bad.push_back("K must be in [1, 400]");
    if (!std::isfinite(c.tail) || c.tail < 0 || c.tail >= 1) bad.push_back("tail must be in [0, 1)");
    if (c.paths < 1 || c.paths > 100000000) bad.push_back("paths must be in [1, 1e8]");
    if (!std::isfinite(c.horizon) || c.horizon < 0) bad.push_back("horizon must be finite and >= 0 (0 = default)");
    if (c.modes < 0 || c.modes > 50) bad.push_back("modes must be in [0, 50]");
    const std::vector<std::string> kernels = {"power", "exp", "log"};
    if (std::find(kernels.begin(), kernels.end(), c.kernel) == kernels.end())
        bad.push_back("kernel must be power, exp or log");
    if (c.format != "csv" && c.format != "json") bad.push_back("format must be csv or json");
    if (c.out.empty()) bad.push_back("out must be a path or '-'");
    const std::vector<std::string> suites = {"analytic", "mc", "asymptotic", "all"};
    if (std::find(suites.begin(), suites.end(), c.suite) == suites.end())
        bad.push_back("suite must be analytic, mc, asymptotic or all");
    if (!bad.empty()) throw ValidationError(bad);
}

std::vector<std::string> config_keys() {
    return {"p",     "alpha",   "r",    "nu",    "T",      "steps",  "K",   "tail",
            "paths", "horizon", "seed", "modes", "kernel", "format", "out", "suite"};
}

std::string config_to_json(const RunConfig& c) {
    json j = {{"p", c.p},         {"alpha", c.alpha},     {"r", c.r},           {"nu", c.nu},
              {"T", c.T},         {"steps", c.steps},     {"K", c.K},           {"tail", c.tail},
              {"paths", c.paths}, {"horizon", c.horizon}, {"seed", c.seed},     {"modes", c.modes},
              {"kernel", c.kernel}, {"format", c.format}, {"out", c.out},       {"suite", c.suite}};
    return j.dump(1) + "\n";
}

RunConfig config_from_json(const std::string& text, RunConfig c) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
    }
    if (!j.is_object()) throw ValidationError({"config must be a JSON object"});
    const auto keys = config_keys();
    std::vector<std::string> bad;
    for (const auto& [k, v] : j.items()) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
            bad.push_back("unknown config key '" + k + "'");
            continue;
        }
        try {
            if (k == "p") c.p = v.get<long long>();
            else if (k == "alpha") c.alpha = v.get<double>();
            else if (k == "r") c.r = v.get<int>();
            else if (k == "nu") c.nu = v.get<int>();
            else if (k == "T") c.T = v.get<double>();
            else if (k == "steps") c.steps = v.get<int>();
            else if (k == "K") c.K = v.get<int>();
            else if (k == "tail") c.tail = v.get<double>();
            else if (k == "paths") c.paths = v.get<long>();
            else if (k == "horizon") c.horizon = v.get<double>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else if (k == "modes") c.modes = v.get<int>();
            else if (k == "kernel") c.kernel = v.get<std::string>();
            else if (k == "format") c.format = v.get<std::string>();
            else if (k == "out") c.out = v.get<std::string>();
            else if (k == "suite") c.suite = v.get<std::string>();
        } catch (const json::exception&) {
            bad.push_back("config key '" + k + "' has the wrong type");
        }
    }
    if (!bad.empty()) throw ValidationError(bad);
    return c;
}

}  // namespace padic
