#pragma once

#include "cvef/kinematics.hpp"
#include "cvef/operators.hpp"

namespace cvef {

/// The nonlinearity of the displacement formulation, split into the pressure
/// part N_P and the viscosity part N^u (the full N is their pointwise sum;
/// it contains no linear terms — those sit on the left-hand side).
struct NonlinearForcing {
    VectorField n_p;
    VectorField n_u;
    VectorField n_total;
};

/// Assembles N from precomputed kinematic fields and the velocity.
/// All derivatives are spectral; all products are formed pointwise in
/// physical space and dealiased by the 2/3 rule whenever a product re-enters
/// spectral space.
///
/// N^u = mu (div_At grad_A u + div grad_At u)
///     + lambda (grad_At div_A u + grad div_At u)
///     + (J - 1)(mu Lap_A u + lambda grad_A div_A u)
/// N_P = -(J - 1) grad_A P(J^{-1}) - grad_At P(J^{-1})
///     - grad( P'(1)(J^{-1} - 1 + div eta) + [P(J^{-1}) - P(1) - P'(1)(J^{-1} - 1)] )
/// with A the inverse-transpose matrix, At = A - I.
inline NonlinearForcing assemble_force(const KinematicFields& kin, const VectorField& u,
                                       const SimParams& params) {
    const Grid& g = u.grid();
    require_same_grid(kin.j_det.grid(), g, "assemble_force");
    const std::size_t count = g.site_count();
    const double mu = params.mu;
    const double lam = params.lambda;

    const TensorField grad_u = to_physical(gradient(to_spectral(u)));

    const Real* a[9];
    const Real* at[9];
    const Real* gu[9];
    const Real* ge[9];
    for (int c = 0; c < 9; ++c) {
        a[c] = kin.a.component(c);
        at[c] = kin.a_tilde.component(c);
        gu[c] = grad_u.component(c);
        ge[c] = kin.grad_eta.component(c);
    }
    const Real* jd = kin.j_det.component(0);

    // twisted gradient Xg_li = A_lm d_m u_i and its sibling Z_li = At_lm d_m u_i
    TensorField xg(g), z(g);
    {
        Real* xo[9];
        Real* zo[9];
        for (int c = 0; c < 9; ++c) {
            xo[c] = xg.component(c);
            zo[c] = z.component(c);
        }
        for (std::size_t s = 0; s < count; ++s)
            for (int l = 0; l < 3; ++l)
                for (int i = 0; i < 3; ++i) {
                    double acca = 0.0, acct = 0.0;
                    for (int m = 0; m < 3; ++m) {
                        const double du = gu[3 * i + m][s];
                        acca += a[3 * l + m][s] * du;
                        acct += at[3 * l + m][s] * du;
                    }
                    xo[3 * l + i][s] = acca;
                    zo[3 * l + i][s] = acct;
                }
    }

    // d_k Xg_li for the twisted divergences (27 scalar fields)
    const SpectralTensorField xg_hat = dealias(to_spectral(xg));
    std::array<TensorField, 3> dxg;
    for (int k = 0; k < 3; ++k) {
        SpectralTensorField dk(g);
        for (int c = 0; c < 9; ++c) {
            const Complex* src = xg_hat.component(c);
            Complex* dst = dk.component(c);
            detail::for_each_mode(g, [&](std::size_t s, double k1, double k2, double k3) {
                const double kk = k == 0 ? k1 : (k == 1 ? k2 : k3);
                dst[s] = Complex(0.0, 1.0) * kk * src[s];
            });
        }
        zero_nyquist(dk);
        dxg[k] = to_physical(dk);
    }

    // scalars s = div_A u, w = div_At u and their gradients
    ScalarField s_field(g), w_field(g);
    {
        Real* so = s_field.component(0);
        Real* wo = w_field.component(0);
        for (std::size_t s = 0; s < count; ++s) {
            double sa = 0.0, sw = 0.0;
            for (int l = 0; l < 3; ++l)
                for (int m = 0; m < 3; ++m) {
                    const double du = gu[3 * l + m][s];
                    sa += a[3 * l + m][s] * du;
                    sw += at[3 * l + m][s] * du;
                }
            so[s] = sa;
            wo[s] = sw;
        }
    }
    const SpectralScalarField s_hat = dealias(to_spectral(s_field));
    const SpectralScalarField w_hat = dealias(to_spectral(w_field));
    const VectorField grad_s = to_physical(gradient(s_hat));

    // pressure pieces
    const auto [p_field, remainder] = pressure_terms(kin.j_det, params);
    const VectorField grad_p = to_physical(gradient(dealias(to_spectral(p_field))));
    ScalarField q_field(g);
    {
        const Real* rm = remainder.component(0);
        Real* qo = q_field.component(0);
        const double dp1 = params.p_prime_1();
        for (std::size_t s = 0; s < count; ++s) {
            const double div_eta = ge[0][s] + ge[4][s] + ge[8][s];
            qo[s] = dp1 * (1.0 / jd[s] - 1.0 + div_eta) + rm[s];
        }
    }

    // pointwise accumulations
    VectorField nu_phys(g), np_phys(g);
    {
        Real* nu[3] = {nu_phys.component(0), nu_phys.component(1), nu_phys.component(2)};
        Real* np[3] = {np_phys.component(0), np_phys.component(1), np_phys.component(2)};
        const Real* gs[3] = {grad_s.component(0), grad_s.component(1), grad_s.component(2)};
        const Real* gp[3] = {grad_p.component(0), grad_p.component(1), grad_p.component(2)};
        const Real* dx[3][9];
        for (int k = 0; k < 3; ++k)
            for (int c = 0; c < 9; ++c) dx[k][c] = dxg[k].component(c);

        for (std::size_t s = 0; s < count; ++s) {
            const double jm1 = jd[s] - 1.0;
            for (int i = 0; i < 3; ++i) {
                double div_at = 0.0;  // At_lk d_k Xg_li
                double lap_a = 0.0;   // A_lk d_k Xg_li
                for (int l = 0; l < 3; ++l)
                    for (int k = 0; k < 3; ++k) {
                        const double d = dx[k][3 * l + i][s];
                        div_at += at[3 * l + k][s] * d;
                        lap_a += a[3 * l + k][s] * d;
                    }
                double grad_at_s = 0.0;  // At_ik d_k s
                double grad_a_s = 0.0;   // A_ik d_k s
                double grad_a_p = 0.0;   // A_ik d_k P
                double grad_at_p = 0.0;  // At_ik d_k P
                for (int k = 0; k < 3; ++k) {
                    grad_at_s += at[3 * i + k][s] * gs[k][s];
                    grad_a_s += a[3 * i + k][s] * gs[k][s];
                    grad_a_p += a[3 * i + k][s] * gp[k][s];
                    grad_at_p += at[3 * i + k][s] * gp[k][s];
                }
                nu[i][s] = mu * div_at + lam * grad_at_s + jm1 * (mu * lap_a + lam * grad_a_s);
                np[i][s] = -jm1 * grad_a_p - grad_at_p;
            }
        }
    }

    // spectral-native contributions: mu div grad_At u, lambda grad div_At u, -grad q
    SpectralVectorField nu_spec = divergence_cols(dealias(to_spectral(z)));
    nu_spec *= Complex(mu, 0.0);
    {
        SpectralVectorField gw = gradient(w_hat);
        gw *= Complex(lam, 0.0);
        nu_spec += gw;
    }
    SpectralVectorField np_spec = gradient(dealias(to_spectral(q_field)));
    np_spec *= Complex(-1.0, 0.0);

    NonlinearForcing out;
    out.n_u = nu_phys + to_physical(nu_spec);
    out.n_p = np_phys + to_physical(np_spec);
    out.n_total = out.n_p + out.n_u;
    return out;
}

/// N(eta, u): kinematics plus assembly.  Throws AdmissibilityError if the
/// flow map folds.
inline NonlinearForcing nonlinear_force(const VectorField& eta, const VectorField& u,
                                        const SimParams& params) {
    return assemble_force(kinematics(eta), u, params);
}

/// Dealiased spectral N, as consumed by the Duhamel integrator.
inline SpectralVectorField nonlinear_force_hat(const KinematicFields& kin, const VectorField& u,
                                               const SimParams& params) {
    return dealias(to_spectral(assemble_force(kin, u, params).n_total));
}

}  // namespace cvef
