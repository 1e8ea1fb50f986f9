#pragma once

#include <array>
#include <utility>

#include "cvef/operators.hpp"

namespace cvef {

/// Hodge potentials of a displacement/velocity pair: d and script_a are the
/// compressible (gradient) potentials, m and script_m the solenoidal (curl)
/// ones, stored as dense antisymmetric 3x3 spectral tensors.  Zero modes of
/// all four vanish (Lambda^{-1} mean-zero convention).
struct HodgePotentials {
    SpectralScalarField d;         ///< Lambda^{-1} div eta
    SpectralTensorField m;         ///< Lambda^{-1} curl eta
    SpectralScalarField script_a;  ///< Lambda^{-1} div u
    SpectralTensorField script_m;  ///< Lambda^{-1} curl u
};

namespace detail {

inline void decompose_one(const SpectralVectorField& v, SpectralScalarField& d,
                          SpectralTensorField& m) {
    const Grid& g = v.grid();
    d = SpectralScalarField(g);
    m = SpectralTensorField(g);
    const Complex* f[3] = {v.component(0), v.component(1), v.component(2)};
    Complex* dd = d.component(0);
    Complex* mm[9];
    for (int c = 0; c < 9; ++c) mm[c] = m.component(c);
    for_each_mode(g, [&](std::size_t s, double k1, double k2, double k3) {
        const double mag = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
        if (mag == 0.0) {
            dd[s] = Complex(0.0, 0.0);
            for (int c = 0; c < 9; ++c) mm[c][s] = Complex(0.0, 0.0);
            return;
        }
        const double k[3] = {k1, k2, k3};
        const Complex iom = Complex(0.0, 1.0 / mag);
        dd[s] = iom * (k1 * f[0][s] + k2 * f[1][s] + k3 * f[2][s]);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                mm[3 * i + j][s] = iom * (k[j] * f[i][s] - k[i] * f[j][s]);
    });
}

inline double antisymmetry_defect(const SpectralTensorField& m) {
    double worst = 0.0;
    const std::size_t count = m.site_count();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const Complex* a = m.component(3 * i + j);
            const Complex* b = m.component(3 * j + i);
            for (std::size_t s = 0; s < count; ++s)
                worst = std::max(worst, std::abs(a[s] + b[s]));
        }
    return worst;
}

inline double max_abs(const SpectralTensorField& m) {
    double worst = 0.0;
    for (const auto& v : m.raw()) worst = std::max(worst, std::abs(v));
    return worst;
}

}  // namespace detail

/// Mode-wise Hodge split: d_hat = i |xi|^{-1} xi . eta_hat and
/// m_hat_ij = i |xi|^{-1} (eta_i xi_j - xi_i eta_j); same for (u, script_*).
inline HodgePotentials decompose(const SpectralVectorField& eta_hat,
                                 const SpectralVectorField& u_hat) {
    require_same_grid(eta_hat.grid(), u_hat.grid(), "hodge::decompose");
    HodgePotentials p;
    detail::decompose_one(eta_hat, p.d, p.m);
    detail::decompose_one(u_hat, p.script_a, p.script_m);
    return p;
}

/// Inverse of decompose on mean-zero fields:
/// eta_hat = -i |xi|^{-1} (d_hat xi + m_hat xi), with the supplied zero modes
/// re-inserted.  Rejects non-antisymmetric potentials.
inline std::pair<SpectralVectorField, SpectralVectorField> reconstruct(
    const HodgePotentials& p, const std::array<Complex, 3>& eta_mean,
    const std::array<Complex, 3>& u_mean) {
    require_same_grid(p.d.grid(), p.m.grid(), "hodge::reconstruct");
    require_same_grid(p.script_a.grid(), p.script_m.grid(), "hodge::reconstruct");
    require_same_grid(p.d.grid(), p.script_a.grid(), "hodge::reconstruct");

    for (const SpectralTensorField* m : {&p.m, &p.script_m}) {
        const double defect = detail::antisymmetry_defect(*m);
        if (defect > 1e-10 * (1.0 + detail::max_abs(*m)))
            throw Error(ErrorKind::invalid_argument,
                        "hodge::reconstruct: potentials are not antisymmetric");
    }

    const Grid& g = p.d.grid();
    auto build = [&](const SpectralScalarField& d, const SpectralTensorField& m,
                     const std::array<Complex, 3>& mean) {
        SpectralVectorField v(g);
        Complex* out[3] = {v.component(0), v.component(1), v.component(2)};
        const Complex* dd = d.component(0);
        const Complex* mm[9];
        for (int c = 0; c < 9; ++c) mm[c] = m.component(c);
        detail::for_each_mode(g, [&](std::size_t s, double k1, double k2, double k3) {
            const double mag = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
            if (mag == 0.0) {
                for (int i = 0; i < 3; ++i) out[i][s] = mean[i];
                return;
            }
            const double k[3] = {k1, k2, k3};
            const Complex miom = Complex(0.0, -1.0 / mag);
            for (int i = 0; i < 3; ++i) {
                Complex mrow = mm[3 * i + 0][s] * k[0] + mm[3 * i + 1][s] * k[1] +
                               mm[3 * i + 2][s] * k[2];
                out[i][s] = miom * (dd[s] * k[i] + mrow);
            }
        });
        return v;
    };
    return {build(p.d, p.m, eta_mean), build(p.script_a, p.script_m, u_mean)};
}

}  // namespace cvef
