#pragma once

#include <array>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "cvef/field.hpp"
#include "cvef/params.hpp"

namespace cvef {

/// Root regime of one Hodge-reduced mode system.  Informational only: no
/// numerical path branches on it (the divided differences below are uniform
/// across the degeneracy).
enum class RootRegime { underdamped, critical, overdamped };

/// Characteristic roots gamma_{+/-} of gamma^2 + c_visc |xi|^2 gamma
/// + c_stiff |xi|^2 = 0 at one wavenumber magnitude.
struct EigenPair {
    Complex gamma_plus;
    Complex gamma_minus;
    RootRegime regime = RootRegime::underdamped;

    Complex mean() const { return 0.5 * (gamma_plus + gamma_minus); }
    Complex half_gap() const { return 0.5 * (gamma_plus - gamma_minus); }
};

/// Critical wavenumber 2 sqrt(c_stiff) / c_visc where the roots merge.
inline double critical_wavenumber(double c_visc, double c_stiff) {
    return 2.0 * std::sqrt(c_stiff) / c_visc;
}

/// Exact characteristic roots.  gamma_{+/-} = m +/- s with m = -c_visc xi^2/2
/// and s = sqrt(m^2 - c_stiff xi^2), underdamped branch taking s = i omega.
/// gamma_plus is the principal (less damped) root in the overdamped regime.
inline EigenPair char_roots(double xi_mag, double c_visc, double c_stiff) {
    if (!(c_visc > 0.0) || !(c_stiff > 0.0))
        throw Error(ErrorKind::invalid_argument, "char_roots: coefficients must be positive");
    if (xi_mag < 0.0)
        throw Error(ErrorKind::invalid_argument, "char_roots: wavenumber must be nonnegative");

    const double xi2 = xi_mag * xi_mag;
    const double m = -0.5 * c_visc * xi2;
    const double disc = 4.0 * c_stiff - c_visc * c_visc * xi2;  // regime indicator

    EigenPair out;
    if (disc > 0.0) {
        const double omega = 0.5 * xi_mag * std::sqrt(disc);
        out.gamma_plus = Complex(m, omega);
        out.gamma_minus = Complex(m, -omega);
        out.regime = RootRegime::underdamped;
    } else {
        // stable real-root evaluation: the fast root has no cancellation, the
        // slow root comes from the product identity (m + s would cancel)
        const double s = 0.5 * xi_mag * std::sqrt(-disc);
        const double fast = m - s;
        out.gamma_minus = Complex(fast, 0.0);
        out.gamma_plus = Complex(fast == 0.0 ? 0.0 : c_stiff * xi2 / fast, 0.0);
        out.regime = disc < 0.0 ? RootRegime::overdamped : RootRegime::critical;
    }
    return out;
}

enum class RootBranch { low, high };

/// Leading-order root expansions, for validating char_roots only.
/// Low branch (|xi| below critical): -c_visc xi^2/2 +/- i sqrt(c_stiff) xi,
/// accurate to O(xi^3).  High branch: gamma_plus -> -c_stiff/c_visc,
/// gamma_minus -> -c_visc xi^2 + c_stiff/c_visc, accurate to O(xi^{-2}).
inline EigenPair root_asymptotics(double xi_mag, double c_visc, double c_stiff,
                                  RootBranch branch) {
    if (!(c_visc > 0.0) || !(c_stiff > 0.0))
        throw Error(ErrorKind::invalid_argument, "root_asymptotics: coefficients must be positive");
    const double xi_crit = critical_wavenumber(c_visc, c_stiff);
    EigenPair out;
    if (branch == RootBranch::low) {
        if (!(xi_mag < xi_crit))
            throw Error(ErrorKind::invalid_argument,
                        "root_asymptotics: low branch requires |xi| below critical");
        const double re = -0.5 * c_visc * xi_mag * xi_mag;
        const double im = std::sqrt(c_stiff) * xi_mag;
        out.gamma_plus = Complex(re, im);
        out.gamma_minus = Complex(re, -im);
        out.regime = RootRegime::underdamped;
    } else {
        if (!(xi_mag > xi_crit))
            throw Error(ErrorKind::invalid_argument,
                        "root_asymptotics: high branch requires |xi| above critical");
        const double ratio = c_stiff / c_visc;
        out.gamma_plus = Complex(-ratio, 0.0);
        out.gamma_minus = Complex(-c_visc * xi_mag * xi_mag + ratio, 0.0);
        out.regime = RootRegime::overdamped;
    }
    return out;
}

namespace detail {

/// sinh(z)/z, continuous through z = 0 (series below |z| = 1e-4).
inline Complex sinhc(Complex z) {
    if (std::abs(z) < 1e-4) {
        const Complex z2 = z * z;
        return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0);
    }
    return std::sinh(z) / z;
}

}  // namespace detail

/// 2x2 mode propagator exp(t G) of one Hodge block at (|xi|, t),
/// G = [[0, 1], [-c_stiff xi^2, -c_visc xi^2]].
struct PropagatorBlock {
    Complex g11, g12, g21, g22;

    Complex trace() const { return g11 + g22; }
    Complex det() const { return g11 * g22 - g12 * g21; }

    /// Matrix-vector action on a mode pair.
    std::array<Complex, 2> apply(Complex a, Complex b) const {
        return {g11 * a + g12 * b, g21 * a + g22 * b};
    }
    friend PropagatorBlock operator*(const PropagatorBlock& a, const PropagatorBlock& b) {
        return {a.g11 * b.g11 + a.g12 * b.g21, a.g11 * b.g12 + a.g12 * b.g22,
                a.g21 * b.g11 + a.g22 * b.g21, a.g21 * b.g12 + a.g22 * b.g22};
    }
};

/// Closed-form block exponential.  The divided difference
/// (e^{g+ t} - e^{g- t})/(g+ - g-) is evaluated as e^{mt} t sinhc(dt) with
/// m = (g+ + g-)/2, d = (g+ - g-)/2, which passes continuously through the
/// double root (never branches on root equality).
inline PropagatorBlock block_propagator(const EigenPair& roots, double c_visc, double c_stiff,
                                        double xi_mag, double t) {
    if (t < 0.0)
        throw Error(ErrorKind::invalid_argument, "block_propagator: t must be nonnegative");
    const double xi2 = xi_mag * xi_mag;
    const Complex m = roots.mean();
    const Complex d = roots.half_gap();

    PropagatorBlock blk;
    if (roots.gamma_plus.real() * t < -745.0 && roots.gamma_minus.real() * t < -745.0) {
        // both e^{gamma t} underflow
        blk.g11 = blk.g12 = blk.g21 = blk.g22 = Complex(0.0, 0.0);
        return blk;
    }
    const Complex dt = d * t;
    if (std::abs(dt.real()) > 30.0) {
        // far-from-degenerate overdamped regime: exponentials directly,
        // avoiding overflow of cosh(dt) against the underflowing e^{mt}
        const Complex ep = std::exp(roots.gamma_plus * t);
        const Complex em = std::exp(roots.gamma_minus * t);
        const Complex inv2d = 1.0 / (2.0 * d);
        blk.g11 = (roots.gamma_plus * em - roots.gamma_minus * ep) * inv2d;
        blk.g12 = (ep - em) * inv2d;
    } else {
        const Complex emt = std::exp(m * t);
        const Complex ch = std::cosh(dt);
        const Complex sc = t * detail::sinhc(dt);
        blk.g11 = emt * (ch - m * sc);
        blk.g12 = emt * sc;
    }
    blk.g21 = -c_stiff * xi2 * blk.g12;
    blk.g22 = blk.g11 - c_visc * xi2 * blk.g12;
    return blk;
}

inline PropagatorBlock block_propagator(double xi_mag, double c_visc, double c_stiff, double t) {
    return block_propagator(char_roots(xi_mag, c_visc, c_stiff), c_visc, c_stiff, xi_mag, t);
}

/// Mode propagator of the full 6x6 system acting on (eta_hat, u_hat): each
/// entry block is (compressible - solenoidal) xi xi^T/|xi|^2 + solenoidal I.
/// At xi = 0 both 2x2 blocks degenerate to [[1, t], [0, 1]] (the affine
/// zero-mode drift eta0' = u0, u0' = 0), so the projector is immaterial there.
struct GreenMatrix6 {
    PropagatorBlock comp;      ///< compressible block (c_visc = lambda+mu, c_stiff = P'(1)+kappa)
    PropagatorBlock sol;       ///< solenoidal block (c_visc = mu, c_stiff = kappa)
    std::array<double, 3> xi;  ///< wavevector
    double xi_mag = 0.0;

    /// Action on one mode: (eta_hat, u_hat) -> (eta_hat', u_hat').
    void apply(std::array<Complex, 3>& eta, std::array<Complex, 3>& u) const {
        if (xi_mag == 0.0) {
            for (int i = 0; i < 3; ++i) {
                const Complex e = eta[i], v = u[i];
                eta[i] = sol.g11 * e + sol.g12 * v;
                u[i] = sol.g21 * e + sol.g22 * v;
            }
            return;
        }
        const double inv = 1.0 / xi_mag;
        const double hat[3] = {xi[0] * inv, xi[1] * inv, xi[2] * inv};
        const Complex ed = eta[0] * hat[0] + eta[1] * hat[1] + eta[2] * hat[2];
        const Complex ud = u[0] * hat[0] + u[1] * hat[1] + u[2] * hat[2];
        const Complex e_par = comp.g11 * ed + comp.g12 * ud;
        const Complex u_par = comp.g21 * ed + comp.g22 * ud;
        for (int i = 0; i < 3; ++i) {
            const Complex e_perp = eta[i] - ed * hat[i];
            const Complex u_perp = u[i] - ud * hat[i];
            eta[i] = e_par * hat[i] + sol.g11 * e_perp + sol.g12 * u_perp;
            u[i] = u_par * hat[i] + sol.g21 * e_perp + sol.g22 * u_perp;
        }
    }

    /// Dense 6x6 entries (row-major), for cross-checks against a generic
    /// matrix-exponential evaluation.
    std::array<Complex, 36> dense() const {
        std::array<Complex, 36> out{};
        const double inv2 = xi_mag > 0.0 ? 1.0 / (xi_mag * xi_mag) : 0.0;
        auto proj = [&](int i, int j) { return xi_mag > 0.0 ? xi[i] * xi[j] * inv2 : 0.0; };
        auto put = [&](int bi, int bj, Complex tilde, Complex bar) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double p = proj(i, j);
                    const double id = i == j ? 1.0 : 0.0;
                    out[(3 * bi + i) * 6 + (3 * bj + j)] = (tilde - bar) * p + bar * id;
                }
        };
        put(0, 0, comp.g11, sol.g11);
        put(0, 1, comp.g12, sol.g12);
        put(1, 0, comp.g21, sol.g21);
        put(1, 1, comp.g22, sol.g22);
        return out;
    }
};

/// Assembles the mode propagator at wavevector xi and time t.
inline GreenMatrix6 assemble_green(const SimParams& p, const std::array<double, 3>& xi, double t) {
    if (t < 0.0) throw Error(ErrorKind::invalid_argument, "assemble_green: t must be nonnegative");
    GreenMatrix6 g;
    g.xi = xi;
    g.xi_mag = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    g.comp = block_propagator(g.xi_mag, p.visc_compressible(), p.stiff_compressible(), t);
    g.sol = block_propagator(g.xi_mag, p.visc_solenoidal(), p.stiff_solenoidal(), t);
    return g;
}

namespace detail {

/// Per-|m|^2 cache of the two blocks: every lattice mode with the same
/// integer |m|^2 shares one (compressible, solenoidal) pair.
struct BlockTable {
    std::unordered_map<long, std::pair<PropagatorBlock, PropagatorBlock>> entries;

    static BlockTable build(const Grid& g, const SimParams& p, double t) {
        BlockTable tbl;
        const int half = g.n() / 2;
        const double unit = two_pi / g.box_len();
        const long max_sq = 3L * half * half;
        tbl.entries.reserve(static_cast<std::size_t>(max_sq) + 1);
        for (int m1 = 0; m1 <= half; ++m1)
            for (int m2 = m1; m2 <= half; ++m2)
                for (int m3 = m2; m3 <= half; ++m3) {
                    const long sq = static_cast<long>(m1) * m1 + static_cast<long>(m2) * m2 +
                                    static_cast<long>(m3) * m3;
                    if (tbl.entries.count(sq)) continue;
                    const double xi = unit * std::sqrt(static_cast<double>(sq));
                    tbl.entries.emplace(
                        sq, std::make_pair(
                                block_propagator(xi, p.visc_compressible(), p.stiff_compressible(), t),
                                block_propagator(xi, p.visc_solenoidal(), p.stiff_solenoidal(), t)));
                }
        return tbl;
    }
};

/// One pass of a prebuilt block table over the full lattice.
inline void apply_block_table(const Grid& g, const BlockTable& table,
                              SpectralVectorField& eta_hat, SpectralVectorField& u_hat) {
    const int n = g.n();
    Complex* e[3] = {eta_hat.component(0), eta_hat.component(1), eta_hat.component(2)};
    Complex* u[3] = {u_hat.component(0), u_hat.component(1), u_hat.component(2)};

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx);
        GreenMatrix6 green;
        for (int i2 = 0; i2 < n; ++i2)
            for (int i3 = 0; i3 < n; ++i3) {
                const std::size_t s = g.site(i1, i2, i3);
                const auto& blocks = table.entries.at(g.mode_sq(i1, i2, i3));
                green.comp = blocks.first;
                green.sol = blocks.second;
                green.xi = g.wavevector(i1, i2, i3);
                green.xi_mag = std::sqrt(green.xi[0] * green.xi[0] + green.xi[1] * green.xi[1] +
                                         green.xi[2] * green.xi[2]);
                std::array<Complex, 3> ev = {e[0][s], e[1][s], e[2][s]};
                std::array<Complex, 3> uv = {u[0][s], u[1][s], u[2][s]};
                green.apply(ev, uv);
                for (int i = 0; i < 3; ++i) {
                    e[i][s] = ev[i];
                    u[i][s] = uv[i];
                }
            }
    });
}

}  // namespace detail

/// Applies exp(t G) mode-wise across the lattice (exact in time).
inline void apply_green(SpectralVectorField& eta_hat, SpectralVectorField& u_hat,
                        const SimParams& params, double t) {
    require_same_grid(eta_hat.grid(), u_hat.grid(), "apply_green");
    if (t < 0.0) throw Error(ErrorKind::invalid_argument, "apply_green: t must be nonnegative");
    const Grid& g = eta_hat.grid();
    const auto table = detail::BlockTable::build(g, params, t);
    detail::apply_block_table(g, table, eta_hat, u_hat);
}

/// Exact fixed-step linear evolution with the per-|m|^2 block table built
/// once (dense trajectory sampling, lockstep gap runs).
class LinearStepper {
  public:
    LinearStepper(const Grid& g, const SimParams& params, double dt)
        : grid_(g), dt_(dt), table_(detail::BlockTable::build(g, params, dt)) {
        if (dt < 0.0)
            throw Error(ErrorKind::invalid_argument, "LinearStepper: dt must be nonnegative");
    }
    double dt() const { return dt_; }
    void step(SpectralVectorField& eta_hat, SpectralVectorField& u_hat) const {
        require_same_grid(eta_hat.grid(), grid_, "LinearStepper::step");
        detail::apply_block_table(grid_, table_, eta_hat, u_hat);
    }

  private:
    Grid grid_;
    double dt_;
    detail::BlockTable table_;
};

/// Exact linear trajectory from a spectral initial state at the given
/// (nonnegative, ascending) times.  No time-stepping error.
inline std::vector<std::pair<SpectralVectorField, SpectralVectorField>> linear_trajectory(
    const SpectralVectorField& eta0_hat, const SpectralVectorField& u0_hat,
    const SimParams& params, const std::vector<double>& times) {
    require_same_grid(eta0_hat.grid(), u0_hat.grid(), "linear_trajectory");
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && times[i] < prev))
            throw Error(ErrorKind::invalid_argument,
                        "linear_trajectory: times must be nonnegative and ascending");
        prev = times[i];
    }
    std::vector<std::pair<SpectralVectorField, SpectralVectorField>> out;
    out.reserve(times.size());
    for (double t : times) {
        SpectralVectorField eta = eta0_hat;
        SpectralVectorField u = u0_hat;
        apply_green(eta, u, params, t);
        out.emplace_back(std::move(eta), std::move(u));
    }
    return out;
}

}  // namespace cvef
