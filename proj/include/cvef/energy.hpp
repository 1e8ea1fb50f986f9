#pragma once

#include <array>
#include <vector>

#include "cvef/norms.hpp"
#include "cvef/params.hpp"

namespace cvef {

/// One time sample of the diagnostic norms and functionals.  The energy and
/// dissipation entries are exact arithmetic combinations of the stored norms
/// (re-derivable from the record alone).
struct EnergyRecord {
    double t = 0.0;
    std::array<double, 5> eta_norm{};  ///< ||grad^k eta||_0, k = 0..4
    std::array<double, 5> u_norm{};    ///< ||grad^k u||_0, k = 0..4
    double energy = 0.0;               ///< E(t)
    double dissipation = 0.0;          ///< D(t)
    double min_j = 1.0;
    double smallness_ratio = 0.0;      ///< kappa^{-1} max{sqrt(2 E0), (2 E0)^2}, c2 = 1
};

namespace detail {

struct EnergyParts {
    double energy;
    double dissipation;
};

/// E and D from squared derivative norms e2[k] = ||grad^k eta||^2,
/// u2[k] = ||grad^k u||^2, H^m norms expanded in the |xi|^(2j) convention:
///   E = ||u||_2^2 + k ||grad eta||_2^2 + (t+1)(||grad u||_2^2 + k ||D eta||_2^2)
///       + (t+1)^2 (||grad^2 u||_1^2 + k ||D grad eta||_1^2)
///   D = ||grad u||_2^2 + k ||D eta||_2^2 + (t+1)(||D u||_2^2 + k ||grad D eta||_1^2)
///       + (t+1)^2 ||grad D u||_1^2
inline EnergyParts energy_from_norms_sq(const std::array<double, 5>& e2,
                                        const std::array<double, 5>& u2, double t,
                                        double kappa) {
    const double w = t + 1.0;
    EnergyParts out;
    out.energy = (u2[0] + u2[1] + u2[2]) + kappa * (e2[1] + e2[2] + e2[3]) +
                 w * ((u2[1] + u2[2] + u2[3]) + kappa * (e2[2] + e2[3] + e2[4])) +
                 w * w * ((u2[2] + u2[3]) + kappa * (e2[3] + e2[4]));
    out.dissipation = (u2[1] + u2[2] + u2[3]) + kappa * (e2[2] + e2[3] + e2[4]) +
                      w * ((u2[2] + u2[3] + u2[4]) + kappa * (e2[3] + e2[4])) +
                      w * w * (u2[3] + u2[4]);
    return out;
}

}  // namespace detail

/// Temporally weighted energy/dissipation pair (E(t), D(t)), evaluated
/// spectrally.
inline std::pair<double, double> energy_functionals(const SpectralVectorField& eta_hat,
                                                    const SpectralVectorField& u_hat, double t,
                                                    const SimParams& params) {
    require_same_grid(eta_hat.grid(), u_hat.grid(), "energy_functionals");
    std::array<double, 5> e2{}, u2{};
    for (int k = 0; k <= 4; ++k) {
        const double en = deriv_norm(eta_hat, k);
        const double un = deriv_norm(u_hat, k);
        e2[k] = en * en;
        u2[k] = un * un;
    }
    const auto parts = detail::energy_from_norms_sq(e2, u2, t, params.kappa);
    return {parts.energy, parts.dissipation};
}

inline EnergyRecord make_energy_record(const SpectralVectorField& eta_hat,
                                       const SpectralVectorField& u_hat, double t,
                                       const SimParams& params, double min_j = 1.0) {
    require_same_grid(eta_hat.grid(), u_hat.grid(), "make_energy_record");
    EnergyRecord rec;
    rec.t = t;
    std::array<double, 5> e2{}, u2{};
    for (int k = 0; k <= 4; ++k) {
        rec.eta_norm[k] = deriv_norm(eta_hat, k);
        rec.u_norm[k] = deriv_norm(u_hat, k);
        e2[k] = rec.eta_norm[k] * rec.eta_norm[k];
        u2[k] = rec.u_norm[k] * rec.u_norm[k];
    }
    const auto parts = detail::energy_from_norms_sq(e2, u2, t, params.kappa);
    rec.energy = parts.energy;
    rec.dissipation = parts.dissipation;
    rec.min_j = min_j;
    const double e0 = rec.energy;
    rec.smallness_ratio =
        std::max(std::sqrt(2.0 * e0), (2.0 * e0) * (2.0 * e0)) / params.kappa;
    return rec;
}

/// Running supremum functional S(t) over a recorded trajectory:
/// per sample tau the weighted sum
///   max_k (1+tau)^{3/4 + k/2} (||grad^k eta|| + ||grad^k u||), k = 0..2,
///   + (1+tau)(sqrt(kappa) ||D grad eta||_1 + ||grad^2 u||_1)
///   + sqrt(kappa) ||grad eta||_2 + sqrt(kappa) (1+tau)^{1/2} ||D eta||_2
///   + ||(1+s) grad D u||_{L^2(0,tau; H^1)}   (trapezoid in time),
/// then S(t) = sup over samples up to t.  A single t = 0 sample is accepted;
/// a series reaching t > 0 needs at least 8 samples.
inline std::vector<std::pair<double, double>> s_functional(const std::vector<EnergyRecord>& recs,
                                                           const SimParams& params) {
    if (recs.empty())
        throw Error(ErrorKind::invalid_argument, "s_functional: empty trajectory");
    if (recs.back().t > 0.0 && recs.size() < 8)
        throw Error(ErrorKind::invalid_argument,
                    "s_functional: trajectories spanning t > 0 need at least 8 samples");
    const double sqrt_kappa = std::sqrt(params.kappa);

    std::vector<std::pair<double, double>> out;
    out.reserve(recs.size());
    double running = 0.0;
    double time_integral = 0.0;  // int (1+s)^2 (||grad^3 u||^2 + ||grad^4 u||^2) ds
    auto integrand = [&](const EnergyRecord& r) {
        const double w = 1.0 + r.t;
        return w * w * (r.u_norm[3] * r.u_norm[3] + r.u_norm[4] * r.u_norm[4]);
    };
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const EnergyRecord& r = recs[i];
        if (i > 0) {
            const double dt = r.t - recs[i - 1].t;
            if (dt < 0.0)
                throw Error(ErrorKind::invalid_argument, "s_functional: samples must be ascending");
            time_integral += 0.5 * dt * (integrand(recs[i - 1]) + integrand(r));
        }
        const double w = 1.0 + r.t;
        double rate_term = 0.0;
        for (int k = 0; k <= 2; ++k)
            rate_term = std::max(rate_term, std::pow(w, 0.75 + 0.5 * k) *
                                                (r.eta_norm[k] + r.u_norm[k]));
        const double lap_grad_eta_h1 =
            std::sqrt(r.eta_norm[3] * r.eta_norm[3] + r.eta_norm[4] * r.eta_norm[4]);
        const double grad2_u_h1 =
            std::sqrt(r.u_norm[2] * r.u_norm[2] + r.u_norm[3] * r.u_norm[3]);
        const double grad_eta_h2 = std::sqrt(r.eta_norm[1] * r.eta_norm[1] +
                                             r.eta_norm[2] * r.eta_norm[2] +
                                             r.eta_norm[3] * r.eta_norm[3]);
        const double lap_eta_h2 = std::sqrt(r.eta_norm[2] * r.eta_norm[2] +
                                            r.eta_norm[3] * r.eta_norm[3] +
                                            r.eta_norm[4] * r.eta_norm[4]);
        const double value = rate_term + w * (sqrt_kappa * lap_grad_eta_h1 + grad2_u_h1) +
                             sqrt_kappa * grad_eta_h2 + sqrt_kappa * std::sqrt(w) * lap_eta_h2 +
                             std::sqrt(time_integral);
        running = std::max(running, value);
        out.emplace_back(r.t, running);
    }
    return out;
}

}  // namespace cvef
