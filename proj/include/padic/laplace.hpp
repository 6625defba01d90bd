#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace padic {

using mp50 = boost::multiprecision::cpp_bin_float_50;

// Gaver-Stehfest weights V_1..V_n (n even), computed in T.
template <class T>
std::vector<T> stehfest_weights(int n) {
    std::vector<T> fact(2 * n + 2);
    fact[0] = T(1);
    for (int i = 1; i < static_cast<int>(fact.size()); ++i) fact[i] = fact[i - 1] * T(i);
    const int h = n / 2;
    std::vector<T> V(n + 1, T(0));
    for (int k = 1; k <= n; ++k) {
        T sum = T(0);
        for (int j = (k + 1) / 2; j <= std::min(k, h); ++j) {
            using std::pow;
            sum += pow(T(j), h) * fact[2 * j] / (fact[h - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k]);
        }
        V[k] = ((k + h) % 2 ? T(-1) : T(1)) * sum;
    }
    return V;
}

// f(t) ~ ln2/t * sum_k V_k F(k ln2 / t); the transform is evaluated in T.
template <class T, class Fn>
T gaver_stehfest(Fn&& F, const T& t, int n) {
    const auto V = stehfest_weights<T>(n);
    using std::log;
    const T ln2 = log(T(2));
    T sum = T(0);
    for (int k = 1; k <= n; ++k) sum += V[k] * F(T(k) * ln2 / t);
    return sum * ln2 / t;
}

// Fixed Talbot contour (Abate-Valko). F must accept std::complex<double>.
template <class Fn>
double talbot(Fn&& F, double t, int M) {
    const double pi = boost::math::constants::pi<double>();
    const double r = 2.0 * M / (5.0 * t);
    double sum = 0.5 * std::real(F(std::complex<double>(r, 0.0))) * std::exp(r * t);
    for (int k = 1; k < M; ++k) {
        const double th = k * pi / M;
        const double cot = std::cos(th) / std::sin(th);
        const std::complex<double> s(r * th * cot, r * th);
        const double sigma = th + (th * cot - 1.0) * cot;
        sum += std::real(std::exp(t * s) * F(s) * std::complex<double>(1.0, sigma));
    }
    return r / M * sum;
}

enum class InversionMethod { GaverStehfest, Talbot };

struct InversionResult {
    double value = 0.0;
    double companion = 0.0;  // same method at lower order
    bool reliable = true;
};

// Double-precision inversion with a successive-order disagreement check:
// GS compares n and n-2, Talbot compares M and 3M/4.
// rel_target is the caller's accuracy goal; disagreement beyond 10x flags it.
InversionResult laplace_invert(const std::function<double(double)>& F, double t, int n = 14, double rel_target = 1e-4);
InversionResult laplace_invert_talbot(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
                                      int M = 24, double rel_target = 1e-8);

}  // namespace padic
