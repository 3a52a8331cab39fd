#pragma once

#include <cmath>
#include <utility>

#include "affine_smile/errors.hpp"

namespace affine_smile::roots {

/// Shrinks [inside, outside] around the boundary of a predicate that holds at
/// `inside` and fails at `outside` (either orientation). Returns the final pair;
/// `first` still satisfies the predicate.
template <class Pred>
std::pair<double, double> bisect_boundary(Pred&& holds, double inside, double outside, double tol,
                                          int max_iter = 400) {
    for (int i = 0; i < max_iter && std::abs(outside - inside) > tol; ++i) {
        const double mid = 0.5 * (inside + outside);
        if (mid == inside || mid == outside) break;
        if (holds(mid)) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    return {inside, outside};
}

/// Newton iteration safeguarded by a sign-change bracket. `fdf(x)` returns
/// {f(x), f'(x)}; f(lo) and f(hi) must have opposite signs (either may be ±inf).
template <class FdF>
double newton_bisect(FdF&& fdf, double lo, double hi, double xtol, int max_iter = 200) {
    auto [flo, dlo] = fdf(lo);
    auto [fhi, dhi] = fdf(hi);
    (void)dlo;
    (void)dhi;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("newton_bisect: root is not bracketed");
    // orient so that f(neg) < 0 < f(pos)
    double neg = flo < 0.0 ? lo : hi;
    double pos = flo < 0.0 ? hi : lo;

    double x = 0.5 * (lo + hi);
    double dx_prev = std::abs(hi - lo);
    for (int i = 0; i < max_iter; ++i) {
        const auto [f, df] = fdf(x);
        if (f == 0.0) return x;
        if (f < 0.0) {
            neg = x;
        } else {
            pos = x;
        }
        const double a = std::min(neg, pos);
        const double b = std::max(neg, pos);
        double next = x - f / df;
        const bool newton_ok = std::isfinite(next) && next > a && next < b &&
                               std::abs(next - x) < 0.5 * dx_prev;
        if (!newton_ok) next = 0.5 * (a + b);
        dx_prev = std::abs(next - x);
        x = next;
        if (dx_prev <= xtol || (b - a) <= xtol) return x;
    }
    return x;
}

}  // namespace affine_smile::roots
