#include "padic/laplace.hpp"

#include <stdexcept>

#include "padic/core.hpp"

namespace padic {

InversionResult laplace_invert(const std::function<double(double)>& F, double t, int n, double rel_target) {
    if (n < 4 || n % 2 || n > 16) throw ValidationError({"Gaver-Stehfest order must be even, 4..16 in double"});
    if (!(t > 0)) throw ValidationError({"inversion time must be > 0"});
    InversionResult out;
    out.value = gaver_stehfest<double>(F, t, n);
    out.companion = gaver_stehfest<double>(F, t, n - 2);
    const double scale = std::max(std::fabs(out.value), 1e-300);
    out.reliable = std::fabs(out.value - out.companion) <= 10.0 * rel_target * scale;
    return out;
}

InversionResult laplace_invert_talbot(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
                                      int M, double rel_target) {
    if (M < 8) throw ValidationError({"Talbot needs M >= 8"});
    if (!(t > 0)) throw ValidationError({"inversion time must be > 0"});
    InversionResult out;
    out.value = talbot(F, t, M);
    out.companion = talbot(F, t, (3 * M) / 4);
    const double scale = std::max(std::fabs(out.value), 1e-300);
    out.reliable = std::fabs(out.value - out.companion) <= 10.0 * rel_target * scale;
    return out;
}

}  // namespace padic
