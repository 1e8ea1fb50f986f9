#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cvef/grid.hpp"

namespace cvef {

/// Samples of an NC-component field over a Grid, component-major
/// (component c occupies a contiguous block of n^3 scalars).
/// T is Real for physical-space samples, Complex for spectral coefficients.
/// Tensor-valued fields use NC = 9 with row-major index pair (i,j) -> 3i + j.
template <class T, int NC>
class Field {
  public:
    static constexpr int components = NC;
    using value_type = T;

    Field() = default;
    explicit Field(const Grid& g) : grid_(g), data_(NC * g.site_count(), T{}) {}

    const Grid& grid() const { return grid_; }
    std::size_t site_count() const { return grid_.site_count(); }

    T* component(int c) { return data_.data() + static_cast<std::size_t>(c) * site_count(); }
    const T* component(int c) const {
        return data_.data() + static_cast<std::size_t>(c) * site_count();
    }

    T& at(int c, std::size_t s) { return component(c)[s]; }
    const T& at(int c, std::size_t s) const { return component(c)[s]; }

    std::vector<T>& raw() { return data_; }
    const std::vector<T>& raw() const { return data_; }

    Field& operator+=(const Field& o) {
        require_same_grid(grid_, o.grid_, "Field::operator+=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Field& operator-=(const Field& o) {
        require_same_grid(grid_, o.grid_, "Field::operator-=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Field& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(T s, Field a) { return a *= s; }

    bool all_finite() const {
        for (const auto& v : data_) {
            if constexpr (std::is_same_v<T, Complex>) {
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
            } else {
                if (!std::isfinite(v)) return false;
            }
        }
        return true;
    }

  private:
    Grid grid_;
    std::vector<T> data_;
};

using ScalarField = Field<Real, 1>;
using VectorField = Field<Real, 3>;
using TensorField = Field<Real, 9>;
using SpectralScalarField = Field<Complex, 1>;
using SpectralVectorField = Field<Complex, 3>;
using SpectralTensorField = Field<Complex, 9>;

template <int NC>
double linf_norm(const Field<Real, NC>& f) {
    double m = 0.0;
    for (const auto& v : f.raw()) m = std::max(m, std::abs(v));
    return m;
}

/// Largest conjugate-symmetry defect max_m |F(-m) - conj(F(m))| over all
/// components; 0 (to roundoff) for spectra of real fields.
template <int NC>
double conjugate_symmetry_defect(const Field<Complex, NC>& f) {
    const Grid& g = f.grid();
    const int n = g.n();
    double worst = 0.0;
    for (int c = 0; c < NC; ++c) {
        const Complex* F = f.component(c);
        for (int i1 = 0; i1 < n; ++i1) {
            const int j1 = (n - i1) % n;
            for (int i2 = 0; i2 < n; ++i2) {
                const int j2 = (n - i2) % n;
                for (int i3 = 0; i3 < n; ++i3) {
                    const int j3 = (n - i3) % n;
                    const Complex d = F[g.site(j1, j2, j3)] - std::conj(F[g.site(i1, i2, i3)]);
                    worst = std::max(worst, std::abs(d));
                }
            }
        }
    }
    return worst;
}

}  // namespace cvef
