#include "padic/core.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

namespace padic {

namespace {
std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += "; ";
        out += v[i];
    }
    return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error("invalid parameters: " + join(problems)), problems_(std::move(problems)) {}

bool is_prime(long long n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (long long d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

ModelParams validate_params(const RawParams& raw) {
    std::vector<std::string> bad;
    if (!is_prime(raw.p)) bad.push_back("p not prime (p=" + std::to_string(raw.p) + ")");
    if (raw.p > 1000000) bad.push_back("p too large (limit 10^6)");
    if (!(raw.alpha > 0.0) || !std::isfinite(raw.alpha)) bad.push_back("alpha must be > 0");
    if (raw.nu < 1) bad.push_back("target ball intersects Z_p (need nu >= 1)");
    if (raw.nu < raw.r + 1) bad.push_back("need nu >= r+1 so that |a|_p > p^r");
    if (!bad.empty()) throw ValidationError(bad);
    return ModelParams{static_cast<int>(raw.p), raw.alpha, raw.r, raw.nu};
}

double pow_p(int p, int e) {
    double lg = e * std::log2(static_cast<double>(p));
    if (lg >= DBL_MAX_EXP) throw NumericalError("overflow", "p^e with p=" + std::to_string(p) + ", e=" + std::to_string(e));
    if (lg < DBL_MIN_EXP - 1) throw NumericalError("underflow", "p^e with p=" + std::to_string(p) + ", e=" + std::to_string(e));
    // glibc pow is correctly rounded for these arguments; integer powers below 2^53 are exact anyway
    return std::pow(static_cast<double>(p), static_cast<double>(e));
}

double pow_pr(int p, double x) { return std::pow(static_cast<double>(p), x); }

double gamma_p_neg(int p, double alpha) {
    if (!(alpha > 0.0)) throw ValidationError({"alpha must be > 0"});
    return -std::expm1(-(alpha + 1.0) * std::log(static_cast<double>(p))) / -std::expm1(alpha * std::log(static_cast<double>(p)));
}

double gamma_p_neg(const ModelParams& m) { return gamma_p_neg(m.p, m.alpha); }

double kernel_const(int p, double alpha) {
    double lp = std::log(static_cast<double>(p));
    return std::expm1(alpha * lp) / -std::expm1(-(alpha + 1.0) * lp);
}

double b_alpha_r(const ModelParams& m) {
    double lp = std::log(static_cast<double>(m.p));
    return std::exp(-m.alpha * m.r * lp) * (1.0 - 1.0 / m.p) / -std::expm1(-(m.alpha + 1.0) * lp);
}

std::string to_string(const ModelParams& m) {
    std::ostringstream os;
    os << "p=" << m.p << " alpha=" << m.alpha << " r=" << m.r << " nu=" << m.nu;
    return os.str();
}

}  // namespace padic
