#pragma once

#include <random>
#include <sstream>

#include "cvef/energy.hpp"
#include "cvef/kinematics.hpp"

namespace cvef {

enum class InitKind { zero, gaussian_bump, random_band };

/// Generator description for (eta0, u0).  gaussian_bump places a smooth
/// periodic bump (product of von Mises factors, so it is exactly periodic and
/// tends to the Gaussian as width/L -> 0); random_band draws
/// conjugate-symmetric coefficients on |m_i| <= band under a Gaussian
/// envelope, deterministically from the seed.
struct InitSpec {
    InitKind kind = InitKind::gaussian_bump;
    double amplitude = 0.0;    ///< displacement scale (max |eta0|, or target max |grad eta0|)
    double u_amplitude = 0.0;  ///< velocity scale (max |u0|)
    double width = 1.0;        ///< bump width
    std::array<double, 3> center = {0.0, 0.0, 0.0};
    int band = 2;              ///< random_band: largest |m_i|
    unsigned long seed = 1;    ///< random_band: RNG seed
};

/// Generated fields plus the smallness diagnostics: E0 = E(0) and the
/// ratio kappa^{-1} max{ sqrt(2 E0), (2 E0)^2 } (reporting convention c2 = 1),
/// so the caller can judge the large-elasticity regime.
struct InitialData {
    VectorField eta0;
    VectorField u0;
    double e0 = 0.0;
    double smallness_ratio = 0.0;
    double min_j = 1.0;
};

namespace detail {

inline ScalarField periodic_bump(const Grid& g, double width, const std::array<double, 3>& center) {
    ScalarField out(g);
    const double L = g.box_len();
    const double q = (L / (two_pi * width)) * (L / (two_pi * width));
    Real* dst = out.component(0);
    const int n = g.n();
    std::vector<double> axis_factor[3];
    for (int axis = 0; axis < 3; ++axis) {
        axis_factor[axis].resize(n);
        for (int i = 0; i < n; ++i) {
            const double phase = two_pi * (g.coord(i) - center[axis]) / L;
            axis_factor[axis][i] = std::exp(-q * (1.0 - std::cos(phase)));
        }
    }
    for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
            for (int i3 = 0; i3 < n; ++i3)
                dst[g.site(i1, i2, i3)] =
                    axis_factor[0][i1] * axis_factor[1][i2] * axis_factor[2][i3];
    return out;
}

inline VectorField random_band_field(const Grid& g, int band, unsigned long seed,
                                     double target_linf, bool gradient_scale) {
    const int n = g.n();
    band = std::min(band, n / 2 - 1);
    SpectralVectorField coeffs(g);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma2 = std::max(1.0, 0.25 * band * band);

    // fill |m_i| <= band with enveloped Gaussian draws, then mirror
    for (int m1 = -band; m1 <= band; ++m1)
        for (int m2 = -band; m2 <= band; ++m2)
            for (int m3 = -band; m3 <= band; ++m3) {
                if (m1 == 0 && m2 == 0 && m3 == 0) continue;
                // draw once per conjugate pair: take the lexicographically
                // positive representative
                if (std::make_tuple(m1, m2, m3) < std::make_tuple(-m1, -m2, -m3)) continue;
                const double msq = m1 * m1 + m2 * m2 + m3 * m3;
                const double env = std::exp(-msq / (2.0 * sigma2));
                const int i1 = (m1 + n) % n, i2 = (m2 + n) % n, i3 = (m3 + n) % n;
                const int j1 = (n - i1) % n, j2 = (n - i2) % n, j3 = (n - i3) % n;
                for (int c = 0; c < 3; ++c) {
                    const Complex v = env * Complex(gauss(rng), gauss(rng));
                    coeffs.component(c)[g.site(i1, i2, i3)] = v;
                    coeffs.component(c)[g.site(j1, j2, j3)] = std::conj(v);
                }
            }

    VectorField f = to_physical(coeffs);
    double scale_ref;
    if (gradient_scale) {
        scale_ref = linf_norm(to_physical(gradient(coeffs)));
    } else {
        scale_ref = linf_norm(f);
    }
    if (scale_ref > 0.0) f *= target_linf / scale_ref;
    return f;
}

}  // namespace detail

/// Builds (eta0, u0) from the generator description, verifies min J >= 1/2
/// (rejecting with diagnostics otherwise), and reports the smallness
/// diagnostics of the large-elasticity condition.
inline InitialData make_initial_data(const InitSpec& spec, const SimParams& params,
                                     const Grid& g) {
    InitialData out;
    out.eta0 = VectorField(g);
    out.u0 = VectorField(g);

    switch (spec.kind) {
        case InitKind::zero:
            break;
        case InitKind::gaussian_bump: {
            const ScalarField bump = detail::periodic_bump(g, spec.width, spec.center);
            // fixed oblique directions so both Hodge components are populated
            const double de[3] = {0.8, 0.36, 0.48};
            const double du[3] = {0.48, 0.8, -0.36};
            const Real* b = bump.component(0);
            for (int c = 0; c < 3; ++c) {
                Real* e = out.eta0.component(c);
                Real* u = out.u0.component(c);
                for (std::size_t s = 0; s < g.site_count(); ++s) {
                    e[s] = spec.amplitude * de[c] * b[s];
                    u[s] = spec.u_amplitude * du[c] * b[s];
                }
            }
            break;
        }
        case InitKind::random_band:
            if (spec.amplitude > 0.0)
                out.eta0 = detail::random_band_field(g, spec.band, spec.seed, spec.amplitude,
                                                     /*gradient_scale=*/true);
            if (spec.u_amplitude > 0.0)
                out.u0 = detail::random_band_field(g, spec.band, spec.seed + 0x9e3779b9ul,
                                                   spec.u_amplitude, /*gradient_scale=*/false);
            break;
    }

    const auto [min_j, min_site] = min_jacobian(out.eta0);
    out.min_j = min_j;
    if (min_j < 0.5) {
        const auto idx = g.site_indices(min_site);
        std::ostringstream msg;
        msg << "make_initial_data: rejected, min J = " << min_j << " < 1/2 at site (" << idx[0]
            << ", " << idx[1] << ", " << idx[2] << "); reduce the amplitude or widen the bump";
        throw AdmissibilityError(min_j, min_site, 0.0, msg.str());
    }

    const auto [energy, dissipation] =
        energy_functionals(to_spectral(out.eta0), to_spectral(out.u0), 0.0, params);
    (void)dissipation;
    out.e0 = energy;
    out.smallness_ratio =
        std::max(std::sqrt(2.0 * out.e0), (2.0 * out.e0) * (2.0 * out.e0)) / params.kappa;
    return out;
}

}  // namespace cvef
