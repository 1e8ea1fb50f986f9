#pragma once

#include <cmath>

#include "cvef/propagator.hpp"

namespace cvef {
namespace detail {

/// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, series below
/// |z| = 0.5 where the direct forms cancel.
inline Complex phi1(Complex z) {
    if (std::abs(z) < 0.5) {
        Complex sum = 0.0, term = 1.0;
        for (int n = 1; n <= 24; ++n) {
            sum += term;          // z^{n-1}/n!
            term *= z / static_cast<double>(n + 1);
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

inline Complex phi2(Complex z) {
    if (std::abs(z) < 0.5) {
        Complex sum = 0.0, term = 0.5;
        for (int n = 1; n <= 24; ++n) {
            sum += term;          // z^{n-1}/(n+1)!
            term *= z / static_cast<double>(n + 2);
        }
        return sum;
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

// Closed-form derivatives used by the near-degenerate Taylor branch; stable
// for |z| away from 0 (the series branch owns small |z|).
inline Complex phi1_d1(Complex z) { return (std::exp(z) * (z - 1.0) + 1.0) / (z * z); }
inline Complex phi1_d3(Complex z) {
    return (std::exp(z) * (((z - 3.0) * z + 6.0) * z - 6.0) + 6.0) / (z * z * z * z);
}
inline Complex phi2_d1(Complex z) { return (std::exp(z) * (z - 2.0) + z + 2.0) / (z * z * z); }
inline Complex phi2_d3(Complex z) {
    const Complex z2 = z * z;
    return (std::exp(z) * (((z - 6.0) * z + 18.0) * z - 24.0) + 6.0 * z + 24.0) / (z2 * z2 * z);
}

/// Divided difference phi_j[a, b] = (phi_j(a) - phi_j(b))/(a - b), continuous
/// through a = b.  Three regimes:
///  - both arguments small: the symmetric series
///    sum_k h_k(a,b)/(k + 1 + j)! with h_k the complete homogeneous
///    symmetric polynomials (exact divided difference of the Taylor series);
///  - well-separated arguments: the difference quotient;
///  - nearly equal, large arguments: Taylor in delta = (a-b)/2 around the
///    mean using the closed-form derivatives.
inline Complex phi_divided_diff(int j, Complex a, Complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale <= 4.0) {
        Complex sum = 0.0;
        Complex h = 1.0;   // h_0
        Complex bk = 1.0;  // b^k
        double fact = 1.0;  // (k + 1 + j)!
        for (int i = 2; i <= 1 + j; ++i) fact *= i;
        for (int k = 0; k <= 48; ++k) {
            if (k > 0) {
                fact *= static_cast<double>(k + 1 + j);
                bk *= b;
                h = a * h + bk;
            }
            sum += h / fact;
        }
        return sum;
    }
    if (std::abs(a - b) > 1e-3 * scale) {
        const Complex fa = j == 1 ? phi1(a) : phi2(a);
        const Complex fb = j == 1 ? phi1(b) : phi2(b);
        return (fa - fb) / (a - b);
    }
    const Complex m = 0.5 * (a + b);
    const Complex delta = 0.5 * (a - b);
    const Complex d1 = j == 1 ? phi1_d1(m) : phi2_d1(m);
    const Complex d3 = j == 1 ? phi1_d3(m) : phi2_d3(m);
    return d1 + d3 * delta * delta / 6.0;
}

}  // namespace detail

/// Duhamel quadrature weights of one 2x2 block: Q1 = integral_0^dt e^{sG} ds
/// = dt phi1(dt G) and Q2 = dt phi2(dt G), built from the block eigenpair
/// with the same stabilized divided differences as the propagator (covers the
/// xi = 0 affine mode, where G is nilpotent, with no special-casing).
struct PhiBlock {
    PropagatorBlock q1;  ///< dt * phi1(dt G)
    PropagatorBlock q2;  ///< dt * phi2(dt G)
};

inline PhiBlock phi_block(const EigenPair& roots, double c_visc, double c_stiff, double xi_mag,
                          double dt) {
    if (dt < 0.0) throw Error(ErrorKind::invalid_argument, "phi_block: dt must be nonnegative");
    const double xi2 = xi_mag * xi_mag;
    const Complex za = roots.gamma_plus * dt;
    const Complex zb = roots.gamma_minus * dt;
    const Complex zm = 0.5 * (za + zb);

    // matrix f(A) = dd * A + c * I with A = dt G,
    // dd = f[za, zb], c = mean(f) - zm * dd  (symmetric form of f(za) - za*dd)
    auto assemble = [&](int j) {
        const Complex dd = detail::phi_divided_diff(j, za, zb);
        const Complex fa = j == 1 ? detail::phi1(za) : detail::phi2(za);
        const Complex fb = j == 1 ? detail::phi1(zb) : detail::phi2(zb);
        const Complex c = 0.5 * (fa + fb) - zm * dd;
        PropagatorBlock blk;
        blk.g11 = dt * c;
        blk.g12 = dt * dt * dd;
        blk.g21 = -c_stiff * xi2 * dt * dt * dd;
        blk.g22 = dt * (c - c_visc * xi2 * dt * dd);
        return blk;
    };
    return {assemble(1), assemble(2)};
}

}  // namespace cvef
