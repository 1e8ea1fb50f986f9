#pragma once

#include <array>
#include <utility>

#include "cvef/fft.hpp"
#include "cvef/norms.hpp"
#include "cvef/params.hpp"

namespace cvef {

/// Row-major 3x3 helpers shared by the grid pipeline and the affine-patch
/// unit tests.
namespace mat3 {

using M = std::array<double, 9>;

inline double det(const M& a) {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
}

/// Cofactor matrix: cof(B)_ij = d det(B) / d B_ij, so B^{-T} = cof(B)/det(B).
inline M cofactor(const M& a) {
    return {a[4] * a[8] - a[5] * a[7], a[5] * a[6] - a[3] * a[8], a[3] * a[7] - a[4] * a[6],
            a[2] * a[7] - a[1] * a[8], a[0] * a[8] - a[2] * a[6], a[1] * a[6] - a[0] * a[7],
            a[1] * a[5] - a[2] * a[4], a[2] * a[3] - a[0] * a[5], a[0] * a[4] - a[1] * a[3]};
}

inline double trace(const M& a) { return a[0] + a[4] + a[8]; }

inline double trace_sq(const M& a) {
    // tr(A^2)
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += a[3 * i + j] * a[3 * j + i];
    return acc;
}

}  // namespace mat3

/// Pointwise kinematic fields of the flow map zeta = y + eta:
/// grad eta, J = det(grad eta + I), A = (grad eta + I)^{-T}, A_tilde = A - I,
/// and the quadratic/cubic determinant remainder r_eta with
/// J = 1 + div eta + r_eta exactly.
struct KinematicFields {
    TensorField grad_eta;
    ScalarField j_det;
    TensorField a;
    TensorField a_tilde;
    ScalarField r_eta;
    double min_j = 0.0;
    std::size_t min_j_site = 0;
};

/// Computes the kinematic fields, with grad eta spectral and everything else
/// pointwise (A by cofactor over determinant, not a truncated series —
/// A is a rational function of grad eta).  Throws AdmissibilityError if the
/// map folds (min J < 1/2).
inline KinematicFields kinematics(const VectorField& eta) {
    KinematicFields kin;
    const Grid& g = eta.grid();
    kin.grad_eta = to_physical(gradient(to_spectral(eta)));
    kin.j_det = ScalarField(g);
    kin.a = TensorField(g);
    kin.a_tilde = TensorField(g);
    kin.r_eta = ScalarField(g);

    const std::size_t count = g.site_count();
    double min_j = 1e300;
    std::size_t min_site = 0;
    const Real* ge[9];
    for (int c = 0; c < 9; ++c) ge[c] = kin.grad_eta.component(c);
    Real* jd = kin.j_det.component(0);
    Real* re = kin.r_eta.component(0);
    Real* am[9];
    Real* at[9];
    for (int c = 0; c < 9; ++c) {
        am[c] = kin.a.component(c);
        at[c] = kin.a_tilde.component(c);
    }

    for (std::size_t s = 0; s < count; ++s) {
        mat3::M grad;
        for (int c = 0; c < 9; ++c) grad[c] = ge[c][s];
        mat3::M b = grad;
        b[0] += 1.0;
        b[4] += 1.0;
        b[8] += 1.0;
        const double j = mat3::det(b);
        jd[s] = j;
        if (j < min_j) {
            min_j = j;
            min_site = s;
        }
        const double div_eta = mat3::trace(grad);
        re[s] = 0.5 * (div_eta * div_eta - mat3::trace_sq(grad)) + mat3::det(grad);
        const mat3::M cof = mat3::cofactor(b);
        const double inv_j = 1.0 / j;
        for (int c = 0; c < 9; ++c) {
            am[c][s] = cof[c] * inv_j;
            at[c][s] = am[c][s];
        }
        at[0][s] -= 1.0;
        at[4][s] -= 1.0;
        at[8][s] -= 1.0;
    }
    kin.min_j = min_j;
    kin.min_j_site = min_site;
    if (min_j < 0.5)
        throw AdmissibilityError(min_j, min_site, 0.0,
                                 "kinematics: min J = " + std::to_string(min_j) +
                                     " < 1/2 at site " + std::to_string(min_site));
    return kin;
}

/// Minimum Jacobian and its site, without the admissibility throw (used to
/// reject candidate initial data gracefully).
inline std::pair<double, std::size_t> min_jacobian(const VectorField& eta) {
    const TensorField grad = to_physical(gradient(to_spectral(eta)));
    const std::size_t count = eta.grid().site_count();
    const Real* ge[9];
    for (int c = 0; c < 9; ++c) ge[c] = grad.component(c);
    double min_j = 1e300;
    std::size_t min_site = 0;
    for (std::size_t s = 0; s < count; ++s) {
        mat3::M b;
        for (int c = 0; c < 9; ++c) b[c] = ge[c][s];
        b[0] += 1.0;
        b[4] += 1.0;
        b[8] += 1.0;
        const double j = mat3::det(b);
        if (j < min_j) {
            min_j = j;
            min_site = s;
        }
    }
    return {min_j, min_site};
}

/// Pointwise pressure fields for the power law P(rho) = A rho^g:
/// returns (P(J^{-1}), remainder) with the Taylor-remainder integral
/// int_0^w (w - z) P''(1+z) dz, w = J^{-1} - 1, in its exact antiderivative
/// form P(1+w) - P(1) - P'(1) w.
inline std::pair<ScalarField, ScalarField> pressure_terms(const ScalarField& j_det,
                                                          const SimParams& params) {
    const std::size_t count = j_det.grid().site_count();
    const Real* jd = j_det.component(0);
    ScalarField p_field(j_det.grid());
    ScalarField rem(j_det.grid());
    Real* pf = p_field.component(0);
    Real* rm = rem.component(0);
    const double p1 = params.pressure(1.0);
    const double dp1 = params.p_prime_1();
    for (std::size_t s = 0; s < count; ++s) {
        if (jd[s] < 0.5)
            throw AdmissibilityError(jd[s], s, 0.0, "pressure_terms: J < 1/2");
        const double rho = 1.0 / jd[s];
        pf[s] = params.pressure(rho);
        rm[s] = pf[s] - p1 - dp1 * (rho - 1.0);
    }
    return {std::move(p_field), std::move(rem)};
}

/// L^2 size of div_k (J A)_{ik}, analytically zero (the Piola identity:
/// J A is the cofactor matrix of grad zeta, whose rows are divergence free).
/// The pointwise product is dealiased before the spectral divergence, so the
/// returned value is the spectral-truncation residual.
inline double piola_residual(const KinematicFields& kin) {
    const Grid& g = kin.j_det.grid();
    TensorField ja(g);
    const Real* jd = kin.j_det.component(0);
    for (int c = 0; c < 9; ++c) {
        const Real* a = kin.a.component(c);
        Real* out = ja.component(c);
        for (std::size_t s = 0; s < g.site_count(); ++s) out[s] = jd[s] * a[s];
    }
    const SpectralVectorField div = divergence_rows(dealias(to_spectral(ja)));
    return deriv_norm(div, 0);
}

/// Residual of the elasticity identity div((grad zeta grad zeta^T) A) = Delta zeta
/// (the middle equality of the Lagrangian reduction, multiplied by J).
/// Zero up to the dealiasing cut of the pointwise products; decreases under
/// grid refinement for smooth eta.
inline double elasticity_identity_residual(const VectorField& eta) {
    const KinematicFields kin = kinematics(eta);
    const Grid& g = eta.grid();
    const std::size_t count = g.site_count();

    // B = grad zeta = grad eta + I, C = B B^T, T = C A, all pointwise
    TensorField t_field(g);
    const Real* ge[9];
    const Real* am[9];
    for (int c = 0; c < 9; ++c) {
        ge[c] = kin.grad_eta.component(c);
        am[c] = kin.a.component(c);
    }
    Real* tf[9];
    for (int c = 0; c < 9; ++c) tf[c] = t_field.component(c);
    for (std::size_t s = 0; s < count; ++s) {
        mat3::M b;
        for (int c = 0; c < 9; ++c) b[c] = ge[c][s];
        b[0] += 1.0;
        b[4] += 1.0;
        b[8] += 1.0;
        mat3::M cmat{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 3; ++k) acc += b[3 * i + k] * b[3 * j + k];
                cmat[3 * i + j] = acc;
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 3; ++k) acc += cmat[3 * i + k] * am[3 * k + j][s];
                tf[3 * i + j][s] = acc;
            }
    }

    SpectralVectorField residual = divergence_rows(dealias(to_spectral(t_field)));
    const SpectralVectorField lap_zeta = laplacian(to_spectral(eta));  // Delta zeta = Delta eta
    residual -= lap_zeta;
    return deriv_norm(residual, 0);
}

}  // namespace cvef
