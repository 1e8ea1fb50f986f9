#pragma once

#include <cmath>

#include "cvef/fft.hpp"
#include "cvef/operators.hpp"

namespace cvef {

namespace detail {

inline void check_order(int k, const char* what) {
    if (k < 0 || k > 4)
        throw Error(ErrorKind::invalid_argument, std::string(what) + ": order must be in [0, 4]");
}

}  // namespace detail

/// ||grad^k f||_0 via Parseval: physical-space inner products carry the
/// (L/n)^3 weight, so the spectral side is L^3 sum |xi|^(2k) |f_hat|^2.
template <int NC>
double deriv_norm(const Field<Complex, NC>& F, int k) {
    detail::check_order(k, "deriv_norm");
    const Grid& g = F.grid();
    double acc = 0.0;
    for (int c = 0; c < NC; ++c) {
        const Complex* src = F.component(c);
        detail::for_each_mode(g, [&](std::size_t s, double k1, double k2, double k3) {
            const double k2sum = k1 * k1 + k2 * k2 + k3 * k3;
            double w = 1.0;
            for (int j = 0; j < k; ++j) w *= k2sum;
            acc += w * std::norm(src[s]);
        });
    }
    return std::sqrt(g.volume() * acc);
}

template <int NC>
double deriv_norm(const Field<Real, NC>& f, int k) {
    return deriv_norm(to_spectral(f), k);
}

/// H^m norm as sqrt(sum_{j<=m} ||grad^j f||_0^2), the equivalent-norm
/// convention with |xi|^(2j) multipliers in place of the multi-index sum.
template <class T, int NC>
double sobolev_norm(const Field<T, NC>& f, int m) {
    detail::check_order(m, "sobolev_norm");
    if constexpr (std::is_same_v<T, Real>) {
        return sobolev_norm(to_spectral(f), m);
    } else {
        double acc = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double nj = deriv_norm(f, j);
            acc += nj * nj;
        }
        return std::sqrt(acc);
    }
}

/// Grid-weighted L^2 norm of physical samples, (L/n)^3 sum |f|^2.
template <int NC>
double l2_norm(const Field<Real, NC>& f) {
    double acc = 0.0;
    for (const auto& v : f.raw()) acc += v * v;
    return std::sqrt(f.grid().cell_volume() * acc);
}

}  // namespace cvef
