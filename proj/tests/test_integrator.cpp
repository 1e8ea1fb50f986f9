#include <catch2/catch.hpp>

#include "cvef/initial_data.hpp"
#include "cvef/integrator.hpp"
#include "cvef/norms.hpp"
#include "oracles.hpp"

using namespace cvef;
using oracles::rel_err;

namespace {

const Grid g16(16, two_pi);

SimState spectral_state(const VectorField& eta, const VectorField& u) {
    return {to_spectral(eta), to_spectral(u), 0.0};
}

double max_mode_diff(const SpectralVectorField& a, const SpectralVectorField& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.raw().size(); ++i)
        worst = std::max(worst, std::abs(a.raw()[i] - b.raw()[i]));
    return worst;
}

}  // namespace

TEST_CASE("etd step with zero displacement reduces to the exact linear propagator") {
    SimParams p;
    p.kappa = 3.0;
    // eta = 0 makes N vanish identically, so one step must equal e^{dt G}
    // ETD1 freezes the forcing at t, where N = 0 exactly: the step is e^{dt G}
    SimState s0;
    s0.eta_hat = SpectralVectorField(g16);
    s0.u_hat = dealias(oracles::random_spectrum(g16, 4, 4.0, 0.02, 201));

    StepConfig cfg;
    cfg.dt = 0.2;
    cfg.scheme = Scheme::etd1;
    const SimState s1 = etd_step(s0, cfg, p);
    SpectralVectorField eta_l = s0.eta_hat;
    SpectralVectorField u_l = s0.u_hat;
    apply_green(eta_l, u_l, p, cfg.dt);
    CHECK(max_mode_diff(s1.eta_hat, dealias(eta_l)) < 1e-12);
    CHECK(max_mode_diff(s1.u_hat, dealias(u_l)) < 1e-12);

    // ETD2RK's corrector sees N(a) = O(amp^2) at the predictor, so its
    // deviation from the exact linear step vanishes quadratically
    SimState tiny;
    tiny.eta_hat = SpectralVectorField(g16);
    tiny.u_hat = dealias(oracles::random_spectrum(g16, 4, 4.0, 1e-7, 202));
    cfg.scheme = Scheme::etd2rk;
    const SimState t1 = etd_step(tiny, cfg, p);
    SpectralVectorField eta_t = tiny.eta_hat;
    SpectralVectorField u_t = tiny.u_hat;
    apply_green(eta_t, u_t, p, cfg.dt);
    CHECK(max_mode_diff(t1.eta_hat, dealias(eta_t)) < 1e-12);
    CHECK(max_mode_diff(t1.u_hat, dealias(u_t)) < 1e-12);
}

TEST_CASE("ETD1 with constant synthetic forcing matches the closed-form phi1 action") {
    // one mode, forcing h held constant: the update must be
    // E v0 + (int_0^dt e^{s G} ds) h, independently integrated by RK4
    const double cv = 1.3, cs = 2.6, xi = 1.7, dt = 0.45;
    const EigenPair roots = char_roots(xi, cv, cs);
    const PhiBlock phi = phi_block(roots, cv, cs, xi, dt);
    const PropagatorBlock e = block_propagator(roots, cv, cs, xi, dt);

    const std::array<Complex, 2> v0 = {Complex(0.4, -0.1), Complex(-0.3, 0.8)};
    const std::array<Complex, 2> h = {Complex(0.0), Complex(0.9, 0.35)};

    const auto ev = e.apply(v0[0], v0[1]);
    const auto qh = phi.q1.apply(h[0], h[1]);
    const std::array<Complex, 2> got = {ev[0] + qh[0], ev[1] + qh[1]};

    const auto truth = oracles::rk4_mode_inhomogeneous(
        xi, cv, cs, v0, 0.0, dt, 20000, [&](double) { return h; });
    CHECK(std::abs(got[0] - truth[0]) < 1e-10);
    CHECK(std::abs(got[1] - truth[1]) < 1e-10);
}

TEST_CASE("phi blocks: degenerate and zero-wavenumber cases are continuous") {
    // near the double root the divided differences must agree with a slightly
    // perturbed evaluation
    const double cv = 1.0, cs = 1.0, dt = 0.8;
    const double xi_c = critical_wavenumber(cv, cs);
    const PhiBlock at = phi_block(char_roots(xi_c, cv, cs), cv, cs, xi_c, dt);
    const double xi_eps = xi_c * (1.0 + 1e-9);
    const PhiBlock near = phi_block(char_roots(xi_eps, cv, cs), cv, cs, xi_eps, dt);
    CHECK(std::abs(at.q1.g11 - near.q1.g11) < 1e-7);
    CHECK(std::abs(at.q1.g12 - near.q1.g12) < 1e-7);
    CHECK(std::abs(at.q2.g22 - near.q2.g22) < 1e-7);

    // xi = 0: nilpotent G, Q1 = [[dt, dt^2/2], [0, dt]], Q2 = [[dt/2, dt^2/6],[0, dt/2]]
    const PhiBlock zero = phi_block(char_roots(0.0, cv, cs), cv, cs, 0.0, dt);
    CHECK(std::abs(zero.q1.g11 - Complex(dt)) < 1e-14);
    CHECK(std::abs(zero.q1.g12 - Complex(0.5 * dt * dt)) < 1e-14);
    CHECK(std::abs(zero.q1.g21) < 1e-14);
    CHECK(std::abs(zero.q2.g11 - Complex(0.5 * dt)) < 1e-14);
    CHECK(std::abs(zero.q2.g12 - Complex(dt * dt / 6.0)) < 1e-14);
}

TEST_CASE("ETD2RK self-convergence is second order") {
    SimParams p;
    p.kappa = 2.0;
    InitSpec spec;
    spec.kind = InitKind::random_band;
    spec.amplitude = 0.02;
    spec.u_amplitude = 0.15;
    spec.band = 2;
    spec.seed = 77;
    const InitialData init = make_initial_data(spec, p, g16);
    const SimState s0 = spectral_state(init.eta0, init.u0);

    const double t_end = 0.4;
    auto advance = [&](double dt) {
        StepConfig cfg;
        cfg.dt = dt;
        cfg.scheme = Scheme::etd2rk;
        SimState s = s0;
        while (s.t < t_end - 1e-12) s = etd_step(s, cfg, p);
        return s;
    };
    const SimState fine = advance(0.0125);
    const SimState mid = advance(0.025);
    const SimState coarse = advance(0.05);

    SpectralVectorField d1 = coarse.u_hat;
    d1 -= mid.u_hat;
    SpectralVectorField d2 = mid.u_hat;
    d2 -= fine.u_hat;
    const double e1 = deriv_norm(d1, 0);
    const double e2 = deriv_norm(d2, 0);
    // dt halving: error ratio ~ 2^2 (Richardson on successive differences)
    CHECK(e1 / e2 > 2.8);
    CHECK(e1 / e2 < 5.5);
}

TEST_CASE("zero initial data stays identically zero") {
    SimParams p;
    StepConfig cfg;
    cfg.dt = 0.1;
    SimState s0;
    s0.eta_hat = SpectralVectorField(g16);
    s0.u_hat = SpectralVectorField(g16);
    const SimRun run = simulate(s0, cfg, p, 1.0, 2);
    CHECK_FALSE(run.aborted);
    CHECK(deriv_norm(run.final_state.eta_hat, 0) == 0.0);
    CHECK(deriv_norm(run.final_state.u_hat, 0) == 0.0);
    for (const auto& rec : run.records) {
        CHECK(rec.energy == 0.0);
        CHECK(rec.dissipation == 0.0);
    }
}

TEST_CASE("tiny amplitude: nonlinear trajectory converges to the linear one") {
    SimParams p;
    p.kappa = 2.0;
    StepConfig cfg;
    cfg.dt = 0.05;

    double prev_gap = -1.0;
    for (double amp : {1e-3, 5e-4, 2.5e-4}) {
        InitSpec spec;
        spec.kind = InitKind::gaussian_bump;
        spec.amplitude = amp;
        spec.u_amplitude = amp;
        spec.width = 1.2;
        spec.center = {pi, pi, pi};
        const InitialData init = make_initial_data(spec, p, g16);
        SimState s = spectral_state(init.eta0, init.u0);
        SpectralVectorField eta_l = s.eta_hat;
        SpectralVectorField u_l = s.u_hat;

        while (s.t < 1.0 - 1e-12) s = etd_step(s, cfg, p);
        apply_green(eta_l, u_l, p, 1.0);

        SpectralVectorField de = s.eta_hat;
        de -= dealias(eta_l);
        SpectralVectorField du = s.u_hat;
        du -= dealias(u_l);
        const double gap = std::sqrt(std::pow(deriv_norm(de, 0), 2) +
                                     std::pow(deriv_norm(du, 0), 2));
        const double scale = std::sqrt(std::pow(deriv_norm(eta_l, 0), 2) +
                                       std::pow(deriv_norm(u_l, 0), 2));
        CHECK(gap / scale < 1e-4);
        // second order in amplitude: halving amp quarters the gap
        if (prev_gap > 0.0) {
            CHECK(prev_gap / gap > 3.0);
            CHECK(prev_gap / gap < 5.0);
        }
        prev_gap = gap;
    }
}

TEST_CASE("moderate run in the large-elasticity regime keeps E(t) bounded by E(0)") {
    SimParams p;
    p.kappa = 500.0;
    InitSpec spec;
    spec.kind = InitKind::gaussian_bump;
    spec.amplitude = 0.0;
    spec.u_amplitude = 0.08;
    spec.width = 1.3;
    spec.center = {pi, pi, pi};
    const InitialData init = make_initial_data(spec, p, g16);
    CHECK(init.smallness_ratio < 1e-2);

    StepConfig cfg;
    cfg.dt = 0.05;
    const SimRun run = simulate(spectral_state(init.eta0, init.u0), cfg, p, 4.0, 4);
    CHECK_FALSE(run.aborted);
    const double e0 = run.records.front().energy;
    double sup = 0.0;
    for (const auto& rec : run.records) sup = std::max(sup, rec.energy);
    CHECK(sup <= 2.0 * e0);
}

TEST_CASE("dt preconditions and the advective default") {
    StepConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    VectorField u(g16);
    for (std::size_t s = 0; s < g16.site_count(); ++s) u.component(0)[s] = 4.0;
    // 0.5 * h / |u| = 0.5 * (2 pi / 16) / 4 ~ 0.049
    CHECK(rel_err(default_dt(u), 0.5 * g16.spacing() / 4.0) < 1e-12);
    CHECK(default_dt(VectorField(g16)) == 0.1);
}

TEST_CASE("mode oracle preconditions") {
    CHECK_THROWS_AS(mode_oracle(1.0, 1.0, 1.0, {Complex(1.0), Complex(0.0)}, -1.0, 100), Error);
    CHECK_THROWS_AS(mode_oracle(1.0, 1.0, 1.0, {Complex(1.0), Complex(0.0)}, 1.0, 0), Error);
}

TEST_CASE("linear-nonlinear gap: zero data gives zero gap, small data gives O(amp^2) gap") {
    SimParams p;
    p.kappa = 50.0;
    StepConfig cfg;
    cfg.dt = 0.05;

    SimState zero;
    zero.eta_hat = SpectralVectorField(g16);
    zero.u_hat = SpectralVectorField(g16);
    const GapSeries trivial = linear_nonlinear_gap(zero, cfg, p, 0.5, 1);
    CHECK(trivial.sup_gap_energy == 0.0);

    double prev = -1.0;
    for (double amp : {0.2, 0.1}) {
        InitSpec spec;
        spec.kind = InitKind::gaussian_bump;
        spec.u_amplitude = amp;
        spec.width = 1.2;
        spec.center = {pi, pi, pi};
        const InitialData init = make_initial_data(spec, p, g16);
        const GapSeries gap =
            linear_nonlinear_gap(spectral_state(init.eta0, init.u0), cfg, p, 1.0, 2);
        CHECK_FALSE(gap.aborted);
        CHECK(gap.sup_gap_energy > 0.0);
        CHECK(gap.samples.back().diss_integral >= 0.0);
        if (prev > 0.0) {
            // fields scale ~ amp, the gap energy ~ amp^4 (quadratic fields, squared norm)
            const double ratio = prev / gap.sup_gap_energy;
            CHECK(ratio > 8.0);
            CHECK(ratio < 32.0);
        }
        prev = gap.sup_gap_energy;
    }
}

TEST_CASE("admissibility loss aborts the run cleanly with a time stamp") {
    SimParams p;
    p.kappa = 1e-4;  // negligible restoring force
    p.mu = 1e-4;
    p.lambda = 0.0;
    p.pressure_amp = 1e-4;
    // strong compressive velocity: the map folds in finite time
    VectorField u(g16);
    for (int i1 = 0; i1 < 16; ++i1)
        for (int i2 = 0; i2 < 16; ++i2)
            for (int i3 = 0; i3 < 16; ++i3)
                u.component(0)[g16.site(i1, i2, i3)] =
                    -1.2 * std::sin(two_pi * g16.coord(i1) / g16.box_len());
    StepConfig cfg;
    cfg.dt = 0.05;
    cfg.dealias_state = true;
    const SimRun run = simulate(spectral_state(VectorField(g16), u), cfg, p, 10.0, 1);
    CHECK(run.aborted);
    CHECK(run.abort_reason.find("admissibility") != std::string::npos);
    CHECK(run.final_state.t < 10.0);
}
