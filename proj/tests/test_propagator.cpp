#include <catch2/catch.hpp>

#include "cvef/integrator.hpp"
#include "cvef/norms.hpp"
#include "cvef/propagator.hpp"
#include "cvef/radial.hpp"
#include "oracles.hpp"

using namespace cvef;
using oracles::rel_err;

TEST_CASE("characteristic roots: zero wavenumber, double root, textbook complex pair") {
    const EigenPair z = char_roots(0.0, 1.0, 1.0);
    CHECK(std::abs(z.gamma_plus) == 0.0);
    CHECK(std::abs(z.gamma_minus) == 0.0);

    // c_visc = 1, c_stiff = 1: critical |xi| = 2, double root gamma = -2
    const EigenPair d = char_roots(2.0, 1.0, 1.0);
    CHECK(d.regime == RootRegime::critical);
    CHECK(std::abs(d.gamma_plus - Complex(-2.0)) < 1e-12);
    CHECK(std::abs(d.gamma_minus - Complex(-2.0)) < 1e-12);

    const EigenPair c = char_roots(1.0, 1.0, 1.0);
    CHECK(c.regime == RootRegime::underdamped);
    CHECK(std::abs(c.gamma_plus - Complex(-0.5, 0.8660254037844386)) < 1e-12);
    CHECK(std::abs(c.gamma_minus - Complex(-0.5, -0.8660254037844386)) < 1e-12);

    CHECK_THROWS_AS(char_roots(1.0, 0.0, 1.0), Error);
    CHECK_THROWS_AS(char_roots(1.0, 1.0, -1.0), Error);
    CHECK_THROWS_AS(char_roots(-1.0, 1.0, 1.0), Error);
}

TEST_CASE("Vieta identities hold across regimes") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double cv = std::pow(10.0, logu(rng));
        const double cs = std::pow(10.0, logu(rng));
        const double xi = std::pow(10.0, logu(rng));
        const EigenPair r = char_roots(xi, cv, cs);
        const Complex sum = r.gamma_plus + r.gamma_minus;
        const Complex prod = r.gamma_plus * r.gamma_minus;
        CHECK(std::abs(sum - Complex(-cv * xi * xi)) <= 1e-12 * cv * xi * xi);
        CHECK(std::abs(prod - Complex(cs * xi * xi)) <= 1e-12 * cs * xi * xi);
        CHECK(r.gamma_plus.real() <= 0.0);
        CHECK(r.gamma_minus.real() <= 0.0);
    }
}

TEST_CASE("root asymptotics: low-branch Richardson check and high-branch limit") {
    const double cv = 1.3, cs = 2.1;

    // low branch: error / xi^3 stays bounded as xi halves
    double prev_ratio = 0.0;
    for (double xi : {0.2, 0.1, 0.05, 0.025}) {
        const EigenPair exact = char_roots(xi, cv, cs);
        const EigenPair approx = root_asymptotics(xi, cv, cs, RootBranch::low);
        const double err = std::abs(exact.gamma_plus - approx.gamma_plus);
        const double ratio = err / (xi * xi * xi);
        if (prev_ratio > 0.0) CHECK(ratio < 2.0 * prev_ratio);
        prev_ratio = ratio;
        // the low-branch real part is exactly -c_visc xi^2 / 2
        CHECK(rel_err(approx.gamma_plus.real(), -0.5 * cv * xi * xi) < 1e-14);
    }

    // high branch at xi = 100, c_visc = c_stiff = 1: gamma_plus = -1 + O(1e-4)
    const EigenPair exact = char_roots(100.0, 1.0, 1.0);
    const EigenPair approx = root_asymptotics(100.0, 1.0, 1.0, RootBranch::high);
    CHECK(std::abs(exact.gamma_plus - approx.gamma_plus) < 5e-4);
    CHECK(std::abs(exact.gamma_plus - Complex(-1.0)) < 2e-4);

    CHECK_THROWS_AS(root_asymptotics(0.1, 1.0, 1.0, RootBranch::high), Error);
    CHECK_THROWS_AS(root_asymptotics(100.0, 1.0, 1.0, RootBranch::low), Error);
}

TEST_CASE("block propagator: identity at t = 0 and the hand-evaluated double root") {
    const PropagatorBlock id = block_propagator(3.7, 1.1, 0.9, 0.0);
    CHECK(std::abs(id.g11 - Complex(1.0)) < 1e-15);
    CHECK(std::abs(id.g12) < 1e-15);
    CHECK(std::abs(id.g21) < 1e-15);
    CHECK(std::abs(id.g22 - Complex(1.0)) < 1e-15);

    // c_visc = c_stiff = 1, xi = 2, t = 1 (double root gamma = -2):
    // g11 = 3 e^-2, g12 = e^-2, g21 = -4 e^-2, g22 = -e^-2
    const double e2 = std::exp(-2.0);
    const PropagatorBlock b = block_propagator(2.0, 1.0, 1.0, 1.0);
    CHECK(rel_err(b.g11.real(), 3.0 * e2) < 1e-12);
    CHECK(rel_err(b.g12.real(), e2) < 1e-12);
    CHECK(rel_err(b.g21.real(), -4.0 * e2) < 1e-12);
    CHECK(rel_err(b.g22.real(), -e2) < 1e-12);
    CHECK(std::abs(b.g11.imag()) < 1e-14);

    CHECK_THROWS_AS(block_propagator(1.0, 1.0, 1.0, -0.5), Error);
}

TEST_CASE("block trace/determinant identities and the semigroup law") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logu(-1.5, 1.5);
    std::uniform_real_distribution<double> tdist(0.0, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double cv = std::pow(10.0, logu(rng));
        const double cs = std::pow(10.0, logu(rng));
        double xi = std::pow(10.0, logu(rng));
        if (trial % 6 == 0) {
            // park some samples within 1e-6 of the critical wavenumber
            xi = critical_wavenumber(cv, cs) * (1.0 + 1e-6 * (trial % 3 - 1));
        }
        const double t1 = tdist(rng), t2 = tdist(rng);
        const EigenPair r = char_roots(xi, cv, cs);
        const PropagatorBlock b1 = block_propagator(r, cv, cs, xi, t1);

        const Complex want_tr = std::exp(r.gamma_plus * t1) + std::exp(r.gamma_minus * t1);
        const Complex want_det = std::exp((r.gamma_plus + r.gamma_minus) * t1);
        if (std::abs(want_tr) > 1e-280)
            CHECK(std::abs(b1.trace() - want_tr) <= 1e-10 * std::max(1.0, std::abs(want_tr)));
        if (std::abs(want_det) > 1e-280)
            CHECK(std::abs(b1.det() - want_det) <= 1e-10 * std::max(1.0, std::abs(want_det)));

        const PropagatorBlock b2 = block_propagator(r, cv, cs, xi, t2);
        const PropagatorBlock b12 = block_propagator(r, cv, cs, xi, t1 + t2);
        const PropagatorBlock prod = b2 * b1;
        const double scale = std::max({std::abs(b12.g11), std::abs(b12.g12), std::abs(b12.g21),
                                       std::abs(b12.g22), 1e-30});
        CHECK(std::abs(prod.g11 - b12.g11) <= 1e-10 * std::max(1.0, scale));
        CHECK(std::abs(prod.g12 - b12.g12) <= 1e-10 * std::max(1.0, scale));
        CHECK(std::abs(prod.g21 - b12.g21) <= 1e-10 * std::max(1.0, scale));
        CHECK(std::abs(prod.g22 - b12.g22) <= 1e-10 * std::max(1.0, scale));
    }
}

TEST_CASE("block action matches the RK4 mode oracle over a randomized sweep") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> logu(-1.0, 1.0);
    std::uniform_real_distribution<double> tdist(0.01, 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 250; ++trial) {
        const double cv = std::pow(10.0, logu(rng));
        const double cs = std::pow(10.0, logu(rng));
        const double xi = std::pow(10.0, logu(rng));
        const double t = tdist(rng);
        const EigenPair r = char_roots(xi, cv, cs);
        const double gmax = std::max(std::abs(r.gamma_plus), std::abs(r.gamma_minus));
        const long steps = std::max<long>(200, static_cast<long>(20.0 * gmax * t));

        const std::array<Complex, 2> v0 = {Complex(gauss(rng), gauss(rng)),
                                           Complex(gauss(rng), gauss(rng))};
        const auto truth = mode_oracle(xi, cv, cs, v0, t, steps);
        const PropagatorBlock b = block_propagator(r, cv, cs, xi, t);
        const auto got = b.apply(v0[0], v0[1]);
        const double scale = std::max({std::abs(truth[0]), std::abs(truth[1]), 1e-12});
        CHECK(std::abs(got[0] - truth[0]) / scale < 1e-6);
        CHECK(std::abs(got[1] - truth[1]) / scale < 1e-6);
    }
}

TEST_CASE("mode decay bound: sub-critical entries sit under one e^{-c_visc xi^2 t / 4} envelope") {
    const double cv = 0.8, cs = 2.0;
    const double xi_c = critical_wavenumber(cv, cs);
    double fitted_c = 0.0;
    for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        const double xi = frac * xi_c;
        for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
            const PropagatorBlock b = block_propagator(xi, cv, cs, t);
            const double mag =
                std::max({std::abs(b.g11), std::abs(b.g12), std::abs(b.g21), std::abs(b.g22)});
            const double envelope = std::exp(-0.25 * cv * xi * xi * t);
            fitted_c = std::max(fitted_c, mag / envelope);
        }
    }
    // one fitted constant per parameter set over the sample grid (the g12
    // entry carries a 1/(sqrt(c_stiff) xi) factor, so C depends on the lowest
    // sampled wavenumber but not on t)
    CHECK(fitted_c < 10.0);
}

TEST_CASE("mode oracle: trivial t = 0, hand value, and 4th-order self-convergence") {
    const std::array<Complex, 2> v0 = {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    const auto at0 = mode_oracle(1.0, 1.0, 1.0, v0, 0.0, 10);
    CHECK(std::abs(at0[0] - v0[0]) == 0.0);

    const auto dbl = mode_oracle(2.0, 1.0, 1.0, v0, 1.0, 2000);
    CHECK(std::abs(dbl[0] - Complex(3.0 * std::exp(-2.0))) < 1e-8);
    CHECK(std::abs(dbl[1] - Complex(-4.0 * std::exp(-2.0))) < 1e-8);

    // Richardson: doubling the steps cuts the error ~16x
    const PropagatorBlock exact = block_propagator(1.3, 0.7, 1.9, 1.7);
    const auto truth = exact.apply(Complex(0.3, -0.2), Complex(-1.1, 0.4));
    auto err_with = [&](long steps) {
        const auto v = mode_oracle(1.3, 0.7, 1.9, {Complex(0.3, -0.2), Complex(-1.1, 0.4)}, 1.7,
                                   steps);
        return std::max(std::abs(v[0] - truth[0]), std::abs(v[1] - truth[1]));
    };
    const double e1 = err_with(400);
    const double e2 = err_with(800);
    CHECK(e1 / e2 > 10.0);
    CHECK(e1 / e2 < 24.0);

    CHECK_THROWS_AS(mode_oracle(10.0, 10.0, 10.0, v0, 10.0, 5), Error);
}

TEST_CASE("assembled Green matrix: projector algebra on aligned and orthogonal data") {
    SimParams p;
    p.mu = 0.7;
    p.lambda = 0.4;
    p.kappa = 2.5;
    const std::array<double, 3> xi = {1.0, 2.0, -2.0};
    const double ximag = 3.0;
    const double t = 0.8;
    const GreenMatrix6 g = assemble_green(p, xi, t);

    // parallel data stays parallel and follows the compressible block
    const Complex amp(0.4, -0.7), amv(-0.2, 0.3);
    std::array<Complex, 3> eta, u;
    for (int i = 0; i < 3; ++i) {
        eta[i] = amp * xi[i] / ximag;
        u[i] = amv * xi[i] / ximag;
    }
    g.apply(eta, u);
    const PropagatorBlock cb =
        block_propagator(ximag, p.visc_compressible(), p.stiff_compressible(), t);
    const auto want = cb.apply(amp, amv);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(eta[i] - want[0] * xi[i] / ximag) < 1e-12);
        CHECK(std::abs(u[i] - want[1] * xi[i] / ximag) < 1e-12);
    }

    // orthogonal data follows the solenoidal block
    const std::array<double, 3> perp = {2.0, -1.0, 0.0};  // perp . xi = 0
    for (int i = 0; i < 3; ++i) {
        eta[i] = amp * perp[i];
        u[i] = Complex(0.0);
    }
    g.apply(eta, u);
    const PropagatorBlock sb =
        block_propagator(ximag, p.visc_solenoidal(), p.stiff_solenoidal(), t);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(eta[i] - sb.g11 * amp * perp[i]) < 1e-12);
        CHECK(std::abs(u[i] - sb.g21 * amp * perp[i]) < 1e-12);
    }
}

TEST_CASE("assembled Green matrix agrees with a dense 6x6 matrix exponential") {
    SimParams p;
    p.mu = 1.2;
    p.lambda = -0.3;  // admissible: 3 lambda + 2 mu > 0
    p.kappa = 3.0;
    p.pressure_amp = 2.0;
    p.pressure_exp = 1.4;
    std::mt19937_64 rng(55);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (int trial = 0; trial < 20; ++trial) {
        const std::array<double, 3> xi = {gauss(rng), gauss(rng), gauss(rng)};
        const double t = 0.3 + 0.2 * trial / 20.0;

        // mode matrix of the first-order system: [[0, I], [B21, B22]]
        std::vector<Complex> a(36, Complex(0.0));
        const double xi2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        for (int i = 0; i < 3; ++i) {
            a[i * 6 + (3 + i)] = 1.0;
            for (int j = 0; j < 3; ++j) {
                a[(3 + i) * 6 + j] = -p.p_prime_1() * xi[i] * xi[j] -
                                     (i == j ? p.kappa * xi2 : 0.0);
                a[(3 + i) * 6 + (3 + j)] = -p.lambda * xi[i] * xi[j] -
                                           (i == j ? p.mu * xi2 : 0.0);
            }
        }
        const auto truth = oracles::dense_expm(a, 6);
        for (auto& v : const_cast<std::vector<Complex>&>(truth)) (void)v;

        std::vector<Complex> scaled = a;
        for (auto& v : scaled) v *= t;
        const auto expm = oracles::dense_expm(scaled, 6);

        const auto got = assemble_green(p, xi, t).dense();
        double worst = 0.0;
        for (int i = 0; i < 36; ++i) worst = std::max(worst, std::abs(got[i] - expm[i]));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("zero-mode propagation is the affine drift eta0 + t u0") {
    SimParams p;
    const GreenMatrix6 g = assemble_green(p, {0.0, 0.0, 0.0}, 2.5);
    std::array<Complex, 3> eta = {Complex(1.0), Complex(2.0), Complex(-1.0)};
    std::array<Complex, 3> u = {Complex(0.5), Complex(0.0), Complex(0.25)};
    g.apply(eta, u);
    CHECK(std::abs(eta[0] - Complex(1.0 + 2.5 * 0.5)) < 1e-14);
    CHECK(std::abs(eta[1] - Complex(2.0)) < 1e-14);
    CHECK(std::abs(eta[2] - Complex(-1.0 + 2.5 * 0.25)) < 1e-14);
    CHECK(std::abs(u[0] - Complex(0.5)) < 1e-14);
}

TEST_CASE("linear trajectory: t = 0 identity, semigroup, and the energy identity") {
    const Grid g(16, two_pi);
    SimParams p;
    p.mu = 0.9;
    p.lambda = 0.2;
    p.kappa = 1.7;
    const SpectralVectorField eta0 = oracles::random_spectrum(g, 3, 2.0, 0.5, 77);
    const SpectralVectorField u0 = oracles::random_spectrum(g, 3, 2.0, 0.5, 78);

    const auto at0 = linear_trajectory(eta0, u0, p, {0.0});
    double d0 = 0.0;
    for (std::size_t i = 0; i < eta0.raw().size(); ++i)
        d0 = std::max(d0, std::abs(at0[0].first.raw()[i] - eta0.raw()[i]));
    CHECK(d0 < 1e-14);

    // two-stage vs single-stage evaluation
    SpectralVectorField eta_a = eta0, u_a = u0;
    apply_green(eta_a, u_a, p, 0.7);
    apply_green(eta_a, u_a, p, 0.9);
    SpectralVectorField eta_b = eta0, u_b = u0;
    apply_green(eta_b, u_b, p, 1.6);
    double dsg = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < eta_a.raw().size(); ++i) {
        dsg = std::max(dsg, std::abs(eta_a.raw()[i] - eta_b.raw()[i]));
        dsg = std::max(dsg, std::abs(u_a.raw()[i] - u_b.raw()[i]));
        scale = std::max(scale, std::abs(eta_b.raw()[i]));
    }
    CHECK(dsg <= 1e-10 * std::max(1.0, scale));

    // energy identity: ||u||^2 + kappa ||grad eta||^2 + P'(1) ||div eta||^2
    //                  + 2 int (lambda ||div u||^2 + mu ||grad u||^2) is conserved
    const int samples = 801;
    const double t_end = 2.0;
    std::vector<double> times(samples);
    for (int i = 0; i < samples; ++i) times[i] = t_end * i / (samples - 1.0);
    const auto traj = linear_trajectory(eta0, u0, p, times);

    auto invariant_part = [&](const SpectralVectorField& eta, const SpectralVectorField& u) {
        const double un = deriv_norm(u, 0);
        const double ge = deriv_norm(eta, 1);
        const double de = deriv_norm(divergence(eta), 0);
        return un * un + p.kappa * ge * ge + p.p_prime_1() * de * de;
    };
    auto dissipation = [&](const SpectralVectorField& u) {
        const double du = deriv_norm(divergence(u), 0);
        const double gu = deriv_norm(u, 1);
        return p.lambda * du * du + p.mu * gu * gu;
    };
    std::vector<double> diss(samples);
    for (int i = 0; i < samples; ++i) diss[i] = dissipation(traj[i].second);
    // composite Simpson (odd sample count)
    const double h = t_end / (samples - 1.0);
    double integral = 0.0;
    for (int i = 0; i + 2 < samples; i += 2)
        integral += h / 3.0 * (diss[i] + 4.0 * diss[i + 1] + diss[i + 2]);

    const double i0 = invariant_part(eta0, u0);
    const double end = invariant_part(traj.back().first, traj.back().second) + 2.0 * integral;
    CHECK(rel_err(end, i0) < 1e-6);

    CHECK_THROWS_AS(linear_trajectory(eta0, u0, p, {1.0, 0.5}), Error);
    CHECK_THROWS_AS(linear_trajectory(eta0, u0, p, {-1.0}), Error);
}

TEST_CASE("radial quadrature: Gaussian value at t = 0 and heat-kernel t^{-3/2} scaling") {
    SimParams p;
    RadialProfile prof;
    prof.d0 = [](double r) { return std::exp(-0.5 * r * r); };

    // t = 0: int 4 pi r^2 e^{-r^2} dr = pi^{3/2}
    const double got = radial_decay_norm(p, prof, 0.0, 0);
    CHECK(rel_err(got, std::pow(pi, 1.5)) < 1e-8);

    // pure diffusion surrogate: int 4 pi r^2 e^{-2 r^2 t} e^{-r^2} dr
    // = pi^{3/2} (2t + 1)^{-3/2}, exactly the t^{-3/2} law for large t
    auto heat = [&](double t) {
        return detail::radial_integral(
            [&](double r) { return std::exp(-2.0 * r * r * t) * std::exp(-r * r); }, 0);
    };
    for (double t : {100.0, 400.0, 1e4})
        CHECK(rel_err(heat(t), std::pow(pi, 1.5) * std::pow(2.0 * t + 1.0, -1.5)) < 1e-8);
    CHECK(rel_err(heat(100.0) / heat(400.0), std::pow(801.0 / 201.0, 1.5)) < 1e-8);

    // non-decaying profile diverges
    RadialProfile flat;
    flat.d0 = [](double) { return 1.0; };
    CHECK_THROWS_AS(radial_decay_norm(p, flat, 1.0, 0), Error);
}

namespace {
double slope_loglog(const std::vector<double>& ts, const std::vector<double>& vals) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double x = std::log1p(ts[i]);
        const double y = std::log(vals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nn = static_cast<double>(ts.size());
    return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

double fitted_radial_slope(const SimParams& p, const RadialProfile& prof, int k) {
    std::vector<double> ts, vals;
    for (double t = 1e2; t <= 1e4 + 1.0; t *= std::sqrt(10.0)) {
        ts.push_back(t);
        vals.push_back(radial_decay_norm(p, prof, t, k));
    }
    return slope_loglog(ts, vals);
}
}  // namespace

TEST_CASE("radial decay of displacement-type data: squared-norm slopes -(3/2 + k)") {
    SimParams p;  // defaults: mu = 1, lambda = 0.5, kappa = 1, P'(1) = 1.4
    RadialProfile prof;
    prof.d0 = [](double r) { return std::exp(-0.5 * r * r); };
    prof.m0 = [](double r) { return 0.4 * std::exp(-0.5 * r * r); };

    for (int k = 0; k <= 2; ++k) {
        const double slope = fitted_radial_slope(p, prof, k);
        CHECK(std::abs(slope - (-1.5 - k)) < 0.05);
    }
}

TEST_CASE("radial decay of velocity-type data: the displacement row is slower") {
    // The eta <- u0 entry behaves like sin(theta t)/theta, which is O(t) near
    // xi ~ t^{-1/2}: a velocity profile with a nonzero zero-frequency limit
    // drives the displacement at squared-norm rate -(k + 1/2), not -(3/2 + k).
    // The velocity row itself still decays at the fast rate.
    SimParams p;
    RadialProfile prof;
    prof.a0 = [](double r) { return std::exp(-0.5 * r * r); };

    for (int k = 0; k <= 2; ++k) {
        std::vector<double> ts, etas, us;
        for (double t = 1e2; t <= 1e4 + 1.0; t *= std::sqrt(10.0)) {
            const RadialNormSplit split = radial_decay_norm_split(p, prof, t, k);
            ts.push_back(t);
            etas.push_back(split.eta_sq);
            us.push_back(split.u_sq);
        }
        CHECK(std::abs(slope_loglog(ts, etas) - (-0.5 - k)) < 0.1);
        CHECK(std::abs(slope_loglog(ts, us) - (-1.5 - k)) < 0.1);
    }

    // a velocity profile vanishing at zero frequency recovers the fast rate
    RadialProfile vanishing;
    vanishing.a0 = [](double r) { return r * std::exp(-0.5 * r * r); };
    for (int k = 0; k <= 2; ++k)
        CHECK(std::abs(fitted_radial_slope(p, vanishing, k) - (-1.5 - k)) < 0.1);
}
