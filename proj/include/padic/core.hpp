#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace padic {

// Validation problems map to CLI exit code 1, numerical ones to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string kind, const std::string& detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

struct RawParams {
    long long p = 2;
    double alpha = 1.0;
    int r = 0;
    int nu = 1;
};

// (p, alpha, r, nu); target ball B_r(a) with |a|_p = p^nu.
struct ModelParams {
    int p = 2;
    double alpha = 1.0;
    int r = 0;
    int nu = 1;
};

bool is_prime(long long n);

ModelParams validate_params(const RawParams& raw);

// p^e for integer e; throws NumericalError on overflow/underflow.
double pow_p(int p, int e);

// p^x for real x (no range check beyond finiteness).
double pow_pr(int p, double x);

double gamma_p_neg(int p, double alpha);
double gamma_p_neg(const ModelParams& m);

// -1/Gamma_p(-alpha) = (p^alpha - 1)/(1 - p^{-alpha-1})
double kernel_const(int p, double alpha);

double b_alpha_r(const ModelParams& m);

// |a|_p
inline double norm_a(const ModelParams& m) { return pow_p(m.p, m.nu); }

std::string to_string(const ModelParams& m);

}  // namespace padic
