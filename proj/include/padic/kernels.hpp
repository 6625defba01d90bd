#pragma once

#include <string>
#include <vector>

#include "padic/core.hpp"
#include "padic/transforms.hpp"

namespace padic {

// Radial jump kernels W(|x|_p). The symbol W~(|k|) = int W(|x|)(1 - chi(kx)) dx
// only sees |x| > 1/|k|, so admissibility is a question about the large-|x| tail.
struct KernelSpec {
    enum class Kind { VladimirovPower, Exponential, Logarithmic, CustomSymbol };
    Kind kind = Kind::VladimirovPower;
    double alpha = 1.0;
    // CustomSymbol: table[i] = W~(p^{-(n0+i)})
    int n0 = 0;
    std::vector<double> table;

    static KernelSpec power(double a) { return {Kind::VladimirovPower, a, 0, {}}; }
    static KernelSpec exponential(double a) { return {Kind::Exponential, a, 0, {}}; }
    static KernelSpec logarithmic(double a) { return {Kind::Logarithmic, a, 0, {}}; }
    static KernelSpec custom(int n0, std::vector<double> t) { return {Kind::CustomSymbol, 0.0, n0, std::move(t)}; }
};

std::string kernel_name(const KernelSpec& k);
KernelSpec parse_kernel(const std::string& name, double alpha);

// Throws ValidationError unless the table is nonnegative and nonincreasing in n.
void check_symbol_table(const KernelSpec& k);

// W~(p^{-n}) = u_{n+1} + (1-1/p) sum_{m>=n+2} u_m with u_m = p^m W(p^m).
SeriesValue kernel_symbol(const KernelSpec& k, int n, const ModelParams& m, const SeriesTolerance& tol = {});

// Exit rate from an r-ball: int_{|x|>p^r} W = (1-1/p) sum_{m>=r+1} u_m.
SeriesValue kernel_exit_rate(const KernelSpec& k, const ModelParams& m, const SeriesTolerance& tol = {});

// p^r (1-1/p) sum_{n>=r} p^{-n}/(s + W~(p^{-n}))
SeriesValue eval_J_general(double s, const KernelSpec& k, const ModelParams& m, const SeriesTolerance& tol = {});

// 1 - 1/((B + s) J_general(s))
SeriesValue eval_F_return_general(double s, const KernelSpec& k, const ModelParams& m,
                                  const SeriesTolerance& tol = {});

}  // namespace padic
