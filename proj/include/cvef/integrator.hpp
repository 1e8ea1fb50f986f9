#pragma once

#include <functional>
#include <optional>

#include "cvef/energy.hpp"
#include "cvef/forcing.hpp"
#include "cvef/phi.hpp"

namespace cvef {

/// Spectral state of the nonlinear Cauchy problem at time t.
struct SimState {
    SpectralVectorField eta_hat;
    SpectralVectorField u_hat;
    double t = 0.0;
};

enum class Scheme { etd1, etd2rk };

struct StepConfig {
    double dt = 0.1;
    Scheme scheme = Scheme::etd2rk;
    bool dealias_state = true;
    int admissibility_check_every = 1;  ///< min-J verification cadence (steps)

    void validate() const {
        if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "StepConfig: dt must be > 0");
        if (admissibility_check_every < 1)
            throw Error(ErrorKind::invalid_argument,
                        "StepConfig: admissibility cadence must be >= 1");
    }
};

/// Advective step-size default dt = min(0.1, 0.5 (L/n) / ||u||_inf); the
/// stiff linear part is exact, so only the nonlinearity limits dt.
inline double default_dt(const VectorField& u0) {
    const double umax = linf_norm(u0);
    const double h = u0.grid().spacing();
    return umax > 0.0 ? std::min(0.1, 0.5 * h / umax) : 0.1;
}

namespace detail {

/// Per-|m|^2 tables of the propagator and Duhamel-quadrature blocks for one
/// step size.
struct EtdTables {
    BlockTable prop;
    std::unordered_map<long, std::pair<PhiBlock, PhiBlock>> phi;  // (compressible, solenoidal)

    static EtdTables build(const Grid& g, const SimParams& p, double dt) {
        EtdTables t;
        t.prop = BlockTable::build(g, p, dt);
        const double unit = two_pi / g.box_len();
        t.phi.reserve(t.prop.entries.size());
        for (const auto& [sq, blocks] : t.prop.entries) {
            const double xi = unit * std::sqrt(static_cast<double>(sq));
            const EigenPair rc = char_roots(xi, p.visc_compressible(), p.stiff_compressible());
            const EigenPair rs = char_roots(xi, p.visc_solenoidal(), p.stiff_solenoidal());
            t.phi.emplace(sq,
                          std::make_pair(
                              phi_block(rc, p.visc_compressible(), p.stiff_compressible(), xi, dt),
                              phi_block(rs, p.visc_solenoidal(), p.stiff_solenoidal(), xi, dt)));
        }
        return t;
    }
};

/// One linear-plus-quadrature update at a single mode:
/// (eta, u) <- E (eta, u) + Q (0, h), applied block-wise through the
/// compressible/solenoidal projectors.  quad selects Q1 (phi1 weight) or Q2.
inline void mode_update(const Grid& g, int i1, int i2, int i3, const EtdTables& tables,
                        bool use_q2, bool skip_exp, std::array<Complex, 3>& eta,
                        std::array<Complex, 3>& u, const std::array<Complex, 3>& h) {
    const auto xi = g.wavevector(i1, i2, i3);
    const double xi_mag =
        std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    const long sq = g.mode_sq(i1, i2, i3);
    const auto& prop = tables.prop.entries.at(sq);
    const auto& phi = tables.phi.at(sq);
    const PropagatorBlock& qc = use_q2 ? phi.first.q2 : phi.first.q1;
    const PropagatorBlock& qs = use_q2 ? phi.second.q2 : phi.second.q1;

    if (xi_mag == 0.0) {
        for (int i = 0; i < 3; ++i) {
            Complex e = eta[i], v = u[i];
            if (!skip_exp) {
                const Complex e2 = prop.second.g11 * e + prop.second.g12 * v;
                const Complex v2 = prop.second.g21 * e + prop.second.g22 * v;
                e = e2;
                v = v2;
            }
            eta[i] = e + qs.g12 * h[i];
            u[i] = v + qs.g22 * h[i];
        }
        return;
    }
    const double inv = 1.0 / xi_mag;
    const double hat[3] = {xi[0] * inv, xi[1] * inv, xi[2] * inv};
    const Complex ed = eta[0] * hat[0] + eta[1] * hat[1] + eta[2] * hat[2];
    const Complex ud = u[0] * hat[0] + u[1] * hat[1] + u[2] * hat[2];
    const Complex hd = h[0] * hat[0] + h[1] * hat[1] + h[2] * hat[2];

    Complex e_par = ed, u_par = ud;
    if (!skip_exp) {
        e_par = prop.first.g11 * ed + prop.first.g12 * ud;
        u_par = prop.first.g21 * ed + prop.first.g22 * ud;
    }
    e_par += qc.g12 * hd;
    u_par += qc.g22 * hd;

    for (int i = 0; i < 3; ++i) {
        const Complex e_perp = eta[i] - ed * hat[i];
        const Complex u_perp = u[i] - ud * hat[i];
        const Complex h_perp = h[i] - hd * hat[i];
        Complex e_new = e_perp, u_new = u_perp;
        if (!skip_exp) {
            e_new = prop.second.g11 * e_perp + prop.second.g12 * u_perp;
            u_new = prop.second.g21 * e_perp + prop.second.g22 * u_perp;
        }
        e_new += qs.g12 * h_perp;
        u_new += qs.g22 * h_perp;
        eta[i] = e_par * hat[i] + e_new;
        u[i] = u_par * hat[i] + u_new;
    }
}

inline void sweep_update(SpectralVectorField& eta, SpectralVectorField& u,
                         const SpectralVectorField& h, const EtdTables& tables, bool use_q2,
                         bool skip_exp) {
    const Grid& g = eta.grid();
    const int n = g.n();
    Complex* e[3] = {eta.component(0), eta.component(1), eta.component(2)};
    Complex* v[3] = {u.component(0), u.component(1), u.component(2)};
    const Complex* hh[3] = {h.component(0), h.component(1), h.component(2)};
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx);
        for (int i2 = 0; i2 < n; ++i2)
            for (int i3 = 0; i3 < n; ++i3) {
                const std::size_t s = g.site(i1, i2, i3);
                std::array<Complex, 3> ev = {e[0][s], e[1][s], e[2][s]};
                std::array<Complex, 3> uv = {v[0][s], v[1][s], v[2][s]};
                const std::array<Complex, 3> hv = {hh[0][s], hh[1][s], hh[2][s]};
                mode_update(g, i1, i2, i3, tables, use_q2, skip_exp, ev, uv, hv);
                for (int i = 0; i < 3; ++i) {
                    e[i][s] = ev[i];
                    v[i][s] = uv[i];
                }
            }
    });
}

}  // namespace detail

/// One exponential-time-differencing step of the Duhamel representation
/// U(t+dt) = e^{dt G} U(t) + Q(dt) H.  ETD1 freezes H at t; ETD2RK adds the
/// standard predictor-corrector phi2 correction.  The exponential and the
/// quadrature weights come from the exact 2x2 blocks.  Throws on
/// admissibility loss (with the time stamp) or NaN.
inline SimState etd_step(const SimState& state, const StepConfig& cfg, const SimParams& params) {
    cfg.validate();
    const Grid& g = state.eta_hat.grid();
    const auto tables = detail::EtdTables::build(g, params, cfg.dt);

    SimState next;
    next.t = state.t + cfg.dt;
    next.eta_hat = state.eta_hat;
    next.u_hat = state.u_hat;

    SpectralVectorField n_hat(g);
    {
        const VectorField eta = to_physical(state.eta_hat);
        const VectorField u = to_physical(state.u_hat);
        try {
            n_hat = nonlinear_force_hat(kinematics(eta), u, params);
        } catch (const AdmissibilityError& err) {
            throw AdmissibilityError(err.min_j(), err.site(), state.t,
                                     "etd_step: admissibility lost at t = " +
                                         std::to_string(state.t) + ": " + err.what());
        }
    }

    detail::sweep_update(next.eta_hat, next.u_hat, n_hat, tables, /*use_q2=*/false,
                         /*skip_exp=*/false);

    if (cfg.scheme == Scheme::etd2rk) {
        // corrector: + dt phi2(dt G) (N(a, t+dt) - N(U, t))
        SpectralVectorField n_pred(g);
        try {
            n_pred = nonlinear_force_hat(kinematics(to_physical(next.eta_hat)),
                                         to_physical(next.u_hat), params);
        } catch (const AdmissibilityError& err) {
            throw AdmissibilityError(err.min_j(), err.site(), next.t,
                                     "etd_step: admissibility lost in predictor at t = " +
                                         std::to_string(next.t) + ": " + err.what());
        }
        n_pred -= n_hat;
        detail::sweep_update(next.eta_hat, next.u_hat, n_pred, tables, /*use_q2=*/true,
                             /*skip_exp=*/true);
    }

    if (cfg.dealias_state) {
        next.eta_hat = dealias(next.eta_hat);
        next.u_hat = dealias(next.u_hat);
    }
    if (!next.eta_hat.all_finite() || !next.u_hat.all_finite())
        throw Error(ErrorKind::invalid_argument,
                    "etd_step: NaN/Inf detected at t = " + std::to_string(next.t));
    return next;
}

/// Simulation output: records at the sampling cadence plus the final state.
/// On admissibility loss the run aborts cleanly, keeping everything sampled
/// so far and the abort reason.
struct SimRun {
    std::vector<EnergyRecord> records;
    SimState final_state;
    bool aborted = false;
    std::string abort_reason;
};

/// Advances the nonlinear problem to t_end, recording every record_every
/// steps (plus the initial and final samples).  The per-sample callback, when
/// given, sees each sampled state.  With dealias_state set, the initial data
/// is projected to the 2/3 band first, so the evolved content matches the
/// solver's working band from the start.
inline SimRun simulate(const SimState& initial, const StepConfig& cfg, const SimParams& params,
                       double t_end, int record_every = 1,
                       const std::function<void(const SimState&, const EnergyRecord&)>& on_sample =
                           nullptr) {
    cfg.validate();
    params.validate();
    if (t_end < initial.t)
        throw Error(ErrorKind::invalid_argument, "simulate: t_end precedes the initial time");
    if (record_every < 1)
        throw Error(ErrorKind::invalid_argument, "simulate: record_every must be >= 1");

    SimRun run;
    run.final_state = initial;
    if (cfg.dealias_state) {
        run.final_state.eta_hat = dealias(run.final_state.eta_hat);
        run.final_state.u_hat = dealias(run.final_state.u_hat);
    }

    auto sample = [&](const SimState& s) {
        double min_j = 1.0;
        try {
            min_j = min_jacobian(to_physical(s.eta_hat)).first;
        } catch (...) {
        }
        EnergyRecord rec = make_energy_record(s.eta_hat, s.u_hat, s.t, params, min_j);
        run.records.push_back(rec);
        if (on_sample) on_sample(s, rec);
    };
    sample(run.final_state);

    const double t_slack = 1e-9 * std::max(1.0, std::abs(t_end));
    StepConfig step_cfg = cfg;
    long step = 0;
    while (run.final_state.t < t_end - t_slack) {
        // last step lands exactly on t_end
        step_cfg.dt = std::min(cfg.dt, t_end - run.final_state.t);
        try {
            run.final_state = etd_step(run.final_state, step_cfg, params);
        } catch (const AdmissibilityError& err) {
            run.aborted = true;
            run.abort_reason = err.what();
            break;
        }
        ++step;
        const bool done = run.final_state.t >= t_end - t_slack;
        if (step % record_every == 0 || done) sample(run.final_state);
        if (!done && cfg.admissibility_check_every > 1 &&
            step % cfg.admissibility_check_every == 0) {
            const auto [mj, site] = min_jacobian(to_physical(run.final_state.eta_hat));
            (void)site;
            if (mj < 0.5) {
                run.aborted = true;
                run.abort_reason = "simulate: min J = " + std::to_string(mj) + " at t = " +
                                   std::to_string(run.final_state.t);
                break;
            }
        }
    }
    return run;
}

/// Independent truth for the block propagator: classical RK4 on the 2x2 mode
/// system dv/dt = [[0, 1], [-c_stiff xi^2, -c_visc xi^2]] v.  Requires
/// (t/steps) max|gamma| <= 0.1.
inline std::array<Complex, 2> mode_oracle(double xi_mag, double c_visc, double c_stiff,
                                          const std::array<Complex, 2>& v0, double t,
                                          long rk4_steps) {
    if (t < 0.0) throw Error(ErrorKind::invalid_argument, "mode_oracle: t must be nonnegative");
    if (rk4_steps < 1)
        throw Error(ErrorKind::invalid_argument, "mode_oracle: need at least one step");
    const EigenPair roots = char_roots(xi_mag, c_visc, c_stiff);
    const double gmax = std::max(std::abs(roots.gamma_plus), std::abs(roots.gamma_minus));
    const double h = t / static_cast<double>(rk4_steps);
    if (h * gmax > 0.1)
        throw Error(ErrorKind::invalid_argument,
                    "mode_oracle: step too large, need (t/steps) * max|gamma| <= 0.1");

    const double a21 = -c_stiff * xi_mag * xi_mag;
    const double a22 = -c_visc * xi_mag * xi_mag;
    auto rhs = [&](const std::array<Complex, 2>& v) {
        return std::array<Complex, 2>{v[1], a21 * v[0] + a22 * v[1]};
    };
    std::array<Complex, 2> v = v0;
    for (long s = 0; s < rk4_steps; ++s) {
        const auto k1 = rhs(v);
        const auto k2 = rhs({v[0] + 0.5 * h * k1[0], v[1] + 0.5 * h * k1[1]});
        const auto k3 = rhs({v[0] + 0.5 * h * k2[0], v[1] + 0.5 * h * k2[1]});
        const auto k4 = rhs({v[0] + h * k3[0], v[1] + h * k3[1]});
        for (int i = 0; i < 2; ++i)
            v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return v;
}

/// Difference-system sample: the energy functional of (eta - eta^l, u - u^l)
/// and the accumulated dissipation integral.
struct GapSample {
    double t = 0.0;
    double gap_energy = 0.0;       ///< E-bar(t)
    double gap_dissipation = 0.0;  ///< D-bar(t)
    double diss_integral = 0.0;    ///< int_0^t D-bar, trapezoid on samples
};

struct GapSeries {
    std::vector<GapSample> samples;
    double sup_gap_energy = 0.0;
    bool aborted = false;
    std::string abort_reason;
};

/// Runs the nonlinear solver and the exact linear propagator in lockstep from
/// identical initial data and returns the difference-system energy series.
/// With dealias_state set, both solvers start from the 2/3-band projection of
/// the data, so the difference measures the nonlinearity rather than the cut.
inline GapSeries linear_nonlinear_gap(const SimState& initial, const StepConfig& cfg,
                                      const SimParams& params, double t_end,
                                      int record_every = 1) {
    cfg.validate();
    GapSeries out;
    SimState nl = initial;
    if (cfg.dealias_state) {
        nl.eta_hat = dealias(nl.eta_hat);
        nl.u_hat = dealias(nl.u_hat);
    }
    SpectralVectorField eta_l = nl.eta_hat;
    SpectralVectorField u_l = nl.u_hat;

    auto sample = [&](const SimState& s) {
        SpectralVectorField de = s.eta_hat;
        SpectralVectorField du = s.u_hat;
        de -= eta_l;
        du -= u_l;
        GapSample gs;
        gs.t = s.t;
        const auto [e, d] = energy_functionals(de, du, s.t, params);
        gs.gap_energy = e;
        gs.gap_dissipation = d;
        if (!out.samples.empty()) {
            const GapSample& prev = out.samples.back();
            gs.diss_integral = prev.diss_integral +
                               0.5 * (gs.t - prev.t) * (gs.gap_dissipation + prev.gap_dissipation);
        }
        out.sup_gap_energy = std::max(out.sup_gap_energy, gs.gap_energy);
        out.samples.push_back(gs);
    };
    sample(nl);

    const double t_slack = 1e-9 * std::max(1.0, std::abs(t_end));
    StepConfig step_cfg = cfg;
    long step = 0;
    while (nl.t < t_end - t_slack) {
        step_cfg.dt = std::min(cfg.dt, t_end - nl.t);
        try {
            nl = etd_step(nl, step_cfg, params);
        } catch (const AdmissibilityError& err) {
            out.aborted = true;
            out.abort_reason = err.what();
            break;
        }
        apply_green(eta_l, u_l, params, step_cfg.dt);  // exact semigroup step
        ++step;
        if (step % record_every == 0 || nl.t >= t_end - t_slack) sample(nl);
    }
    return out;
}

}  // namespace cvef
