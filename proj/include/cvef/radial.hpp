#pragma once

#include <cmath>
#include <functional>

#include "cvef/propagator.hpp"

namespace cvef {

/// Adaptive Simpson quadrature on [a, b] to the requested relative tolerance
/// (with an absolute floor for vanishing integrands).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-9, double abs_floor = 1e-300) {
    struct Recurse {
        const std::function<double(double)>& f;
        double abs_floor;
        double eval(double a, double m, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * std::max(tol, abs_floor))
                return left + right + delta / 15.0;
            return eval(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   eval(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::max(std::abs(whole) * rel_tol, abs_floor);
    return Recurse{f, abs_floor}.eval(a, m, b, fa, fm, fb, whole, tol, 40);
}

/// Isotropic initial spectrum: scalar amplitudes of the four Hodge potentials
/// as functions of |xi|.  Unset entries are zero.
struct RadialProfile {
    std::function<double(double)> d0;   ///< compressible eta potential
    std::function<double(double)> a0;   ///< compressible u potential
    std::function<double(double)> m0;   ///< solenoidal eta amplitude
    std::function<double(double)> mm0;  ///< solenoidal u amplitude

    double eval(const std::function<double(double)>& f, double r) const {
        return f ? f(r) : 0.0;
    }
};

/// Squared norms of the displacement and velocity rows separately.
struct RadialNormSplit {
    double eta_sq = 0.0;
    double u_sq = 0.0;
    double total() const { return eta_sq + u_sq; }
};

namespace detail {

/// Integrates 4 pi r^{2+2k} w(r) dr over [0, inf) with automatic dyadic
/// extension of the outer cutoff; throws if the tail does not converge
/// (non-decaying profile).
inline double radial_integral(const std::function<double(double)>& w, int k,
                              double rel_tol = 1e-9) {
    const double four_pi = 4.0 * pi;
    auto integrand = [&](double r) {
        double rw = four_pi * r * r * w(r);
        for (int j = 0; j < k; ++j) rw *= r * r;
        return rw;
    };
    double total = adaptive_simpson(integrand, 0.0, 1e-3, rel_tol);
    double lo = 1e-3;
    int quiet = 0;
    while (lo < 1e7) {
        const double hi = 2.0 * lo;
        const double piece = adaptive_simpson(integrand, lo, hi, rel_tol,
                                              std::abs(total) * rel_tol * 1e-3 + 1e-300);
        total += piece;
        if (std::abs(piece) <= std::abs(total) * rel_tol)
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 4 && hi >= 64.0) return total;
        lo = hi;
    }
    throw Error(ErrorKind::quadrature,
                "radial_integral: integral did not converge (non-decaying profile?)");
}

}  // namespace detail

/// Whole-space squared norm integral int |xi|^{2k} |e^{tG}(|xi|) profile|^2 dxi
/// evaluated by 1D adaptive radial quadrature with the 4 pi |xi|^2 weight,
/// split into the eta and u rows.  k in {0, .., 4}.
inline RadialNormSplit radial_decay_norm_split(const SimParams& p, const RadialProfile& prof,
                                               double t, int k) {
    if (k < 0 || k > 4)
        throw Error(ErrorKind::invalid_argument, "radial_decay_norm: k must be in [0, 4]");
    if (t < 0.0)
        throw Error(ErrorKind::invalid_argument, "radial_decay_norm: t must be nonnegative");

    auto weight = [&](bool row_eta) {
        return std::function<double(double)>([&p, &prof, t, row_eta](double r) {
            const double d0 = prof.d0 ? prof.d0(r) : 0.0;
            const double a0 = prof.a0 ? prof.a0(r) : 0.0;
            const double m0 = prof.m0 ? prof.m0(r) : 0.0;
            const double mm0 = prof.mm0 ? prof.mm0(r) : 0.0;
            const PropagatorBlock cb =
                block_propagator(r, p.visc_compressible(), p.stiff_compressible(), t);
            const PropagatorBlock sb =
                block_propagator(r, p.visc_solenoidal(), p.stiff_solenoidal(), t);
            if (row_eta) {
                return std::norm(cb.g11 * d0 + cb.g12 * a0) + std::norm(sb.g11 * m0 + sb.g12 * mm0);
            }
            return std::norm(cb.g21 * d0 + cb.g22 * a0) + std::norm(sb.g21 * m0 + sb.g22 * mm0);
        });
    };
    RadialNormSplit out;
    out.eta_sq = detail::radial_integral(weight(true), k);
    out.u_sq = detail::radial_integral(weight(false), k);
    return out;
}

/// Combined squared norm of the propagated pair (the quantity whose large-t
/// slope against log(1+t) is -(3/2 + k) for integrable initial data).
inline double radial_decay_norm(const SimParams& p, const RadialProfile& prof, double t, int k) {
    return radial_decay_norm_split(p, prof, t, k).total();
}

}  // namespace cvef
