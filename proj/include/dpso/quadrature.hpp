#pragma once

#include <cmath>
#include <cstddef>

namespace dpso {

/// Adaptive Simpson integration of f over [a, b]. Each panel is split until the
/// Richardson error estimate drops below its share of `tol` or `max_depth` is hit.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10, int max_depth = 50)
{
    if (a == b)
        return 0.0;
    struct Rec {
        F& f;
        double panel(double a, double fa, double m, double fm, double b, double fb, double whole,
                     double tol, int depth)
        {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return panel(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)
                 + panel(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
        }
    } rec{f};
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec.panel(a, fa, m, fm, b, fb, whole, tol, max_depth);
}

} // namespace dpso
