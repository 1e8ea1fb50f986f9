#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "cvef/common.hpp"

namespace cvef {

/// Cubic periodic grid: n samples per axis on [0, L)^3, stored y3-fastest
/// (site = (i1*n + i2)*n + i3).  The dual lattice carries wavevectors
/// xi = (2 pi / L) * m with signed integer modes m_i in [-n/2, n/2]; the
/// i = n/2 index is the self-conjugate Nyquist plane.
class Grid {
  public:
    Grid() = default;
    Grid(int n, double box_len) : n_(n), box_len_(box_len) {
        if (n_ < 8 || n_ % 2 != 0)
            throw Error(ErrorKind::invalid_argument, "Grid: n must be even and >= 8");
        if (!(box_len_ > 0.0))
            throw Error(ErrorKind::invalid_argument, "Grid: box length must be positive");
    }

    int n() const { return n_; }
    double box_len() const { return box_len_; }
    std::size_t site_count() const {
        return static_cast<std::size_t>(n_) * n_ * n_;
    }
    double spacing() const { return box_len_ / n_; }
    double cell_volume() const {
        const double h = spacing();
        return h * h * h;
    }
    double volume() const { return box_len_ * box_len_ * box_len_; }

    std::size_t site(int i1, int i2, int i3) const {
        return (static_cast<std::size_t>(i1) * n_ + i2) * n_ + i3;
    }
    std::array<int, 3> site_indices(std::size_t s) const {
        const int i3 = static_cast<int>(s % n_);
        const int i2 = static_cast<int>((s / n_) % n_);
        const int i1 = static_cast<int>(s / (static_cast<std::size_t>(n_) * n_));
        return {i1, i2, i3};
    }

    /// Signed mode number for storage index i in [0, n): 0..n/2, then negative.
    int signed_mode(int i) const { return i <= n_ / 2 ? i : i - n_; }
    bool is_nyquist_index(int i) const { return i == n_ / 2; }

    double wavenumber(int i) const { return two_pi / box_len_ * signed_mode(i); }
    std::array<double, 3> wavevector(int i1, int i2, int i3) const {
        return {wavenumber(i1), wavenumber(i2), wavenumber(i3)};
    }
    /// |m|^2 as an integer (resolution-independent block-cache key).
    long mode_sq(int i1, int i2, int i3) const {
        const long m1 = signed_mode(i1), m2 = signed_mode(i2), m3 = signed_mode(i3);
        return m1 * m1 + m2 * m2 + m3 * m3;
    }

    double coord(int i) const { return spacing() * i; }

    bool operator==(const Grid& o) const { return n_ == o.n_ && box_len_ == o.box_len_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

  private:
    int n_ = 0;
    double box_len_ = 0.0;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (a != b)
        throw Error(ErrorKind::dimension_mismatch, std::string(where) + ": grids do not match");
}

}  // namespace cvef
