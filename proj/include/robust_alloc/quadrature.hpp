#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace robust_alloc {

/// Composite Simpson rule on `intervals` uniform panels (rounded up to even).
/// Summation runs left to right so results do not depend on evaluation order.
template <typename F>
double simpson(F&& f, double a, double b, std::size_t intervals) {
    if (intervals < 2) intervals = 2;
    if (intervals % 2 != 0) ++intervals;
    if (a == b) return 0.0;
    const double h = (b - a) / static_cast<double>(intervals);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i) {
        const double x = a + h * static_cast<double>(i);
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
    }
    return sum * h / 3.0;
}

/// Bisection for the point where `pred` flips between lo and hi.
/// Requires pred(lo) != pred(hi); returns the midpoint of the final bracket.
template <typename Pred>
double bisect_flip(Pred&& pred, double lo, double hi, double tol) {
    const bool at_lo = pred(lo);
    if (at_lo == pred(hi)) throw std::invalid_argument("bisect_flip: no sign change in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace robust_alloc
