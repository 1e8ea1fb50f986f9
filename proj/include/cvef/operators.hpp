#pragma once

#include <cmath>

#include "cvef/field.hpp"

namespace cvef {

/// Zeroes every mode on a Nyquist plane (any index equal to n/2).  Applied
/// after every differentiation so odd-order derivatives stay conjugate
/// symmetric (Decision: the unmatched m = n/2 plane has no -n/2 partner).
template <int NC>
void zero_nyquist(Field<Complex, NC>& F) {
    const Grid& g = F.grid();
    const int n = g.n();
    for (int c = 0; c < NC; ++c) {
        Complex* data = F.component(c);
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3)
                    if (g.is_nyquist_index(i1) || g.is_nyquist_index(i2) || g.is_nyquist_index(i3))
                        data[g.site(i1, i2, i3)] = Complex(0.0, 0.0);
    }
}

namespace detail {

/// Applies body(site, xi) over the full dual lattice.
template <class F>
void for_each_mode(const Grid& g, F&& body) {
    const int n = g.n();
    for (int i1 = 0; i1 < n; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < n; ++i2) {
            const double k2 = g.wavenumber(i2);
            std::size_t s = g.site(i1, i2, 0);
            for (int i3 = 0; i3 < n; ++i3, ++s) {
                body(s, k1, k2, g.wavenumber(i3));
            }
        }
    }
}

}  // namespace detail

/// grad f: scalar -> vector, (i xi) f.
inline SpectralVectorField gradient(const SpectralScalarField& F) {
    SpectralVectorField out(F.grid());
    const Complex* src = F.component(0);
    Complex* d0 = out.component(0);
    Complex* d1 = out.component(1);
    Complex* d2 = out.component(2);
    detail::for_each_mode(F.grid(), [&](std::size_t s, double k1, double k2, double k3) {
        const Complex v = Complex(0.0, 1.0) * src[s];
        d0[s] = k1 * v;
        d1[s] = k2 * v;
        d2[s] = k3 * v;
    });
    zero_nyquist(out);
    return out;
}

/// grad v: vector -> tensor, (i,j) entry i xi_j v_i  (rows are gradients of
/// the components, matching the deformation convention (grad eta)_ij = d_j eta_i).
inline SpectralTensorField gradient(const SpectralVectorField& F) {
    SpectralTensorField out(F.grid());
    for (int i = 0; i < 3; ++i) {
        const Complex* src = F.component(i);
        Complex* row[3] = {out.component(3 * i + 0), out.component(3 * i + 1),
                           out.component(3 * i + 2)};
        detail::for_each_mode(F.grid(), [&](std::size_t s, double k1, double k2, double k3) {
            const Complex v = Complex(0.0, 1.0) * src[s];
            row[0][s] = k1 * v;
            row[1][s] = k2 * v;
            row[2][s] = k3 * v;
        });
    }
    zero_nyquist(out);
    return out;
}

/// div v: vector -> scalar, i xi . v.
inline SpectralScalarField divergence(const SpectralVectorField& F) {
    SpectralScalarField out(F.grid());
    const Complex* f0 = F.component(0);
    const Complex* f1 = F.component(1);
    const Complex* f2 = F.component(2);
    Complex* dst = out.component(0);
    detail::for_each_mode(F.grid(), [&](std::size_t s, double k1, double k2, double k3) {
        dst[s] = Complex(0.0, 1.0) * (k1 * f0[s] + k2 * f1[s] + k3 * f2[s]);
    });
    zero_nyquist(out);
    return out;
}

/// Row-wise divergence of a tensor: (div T)_i = sum_k d_k T_ik.
inline SpectralVectorField divergence_rows(const SpectralTensorField& T) {
    SpectralVectorField out(T.grid());
    for (int i = 0; i < 3; ++i) {
        const Complex* t0 = T.component(3 * i + 0);
        const Complex* t1 = T.component(3 * i + 1);
        const Complex* t2 = T.component(3 * i + 2);
        Complex* dst = out.component(i);
        detail::for_each_mode(T.grid(), [&](std::size_t s, double k1, double k2, double k3) {
            dst[s] = Complex(0.0, 1.0) * (k1 * t0[s] + k2 * t1[s] + k3 * t2[s]);
        });
    }
    zero_nyquist(out);
    return out;
}

/// Column-wise divergence of a tensor: (div T)_i = sum_l d_l T_li.
inline SpectralVectorField divergence_cols(const SpectralTensorField& T) {
    SpectralVectorField out(T.grid());
    for (int i = 0; i < 3; ++i) {
        const Complex* t0 = T.component(3 * 0 + i);
        const Complex* t1 = T.component(3 * 1 + i);
        const Complex* t2 = T.component(3 * 2 + i);
        Complex* dst = out.component(i);
        detail::for_each_mode(T.grid(), [&](std::size_t s, double k1, double k2, double k3) {
            dst[s] = Complex(0.0, 1.0) * (k1 * t0[s] + k2 * t1[s] + k3 * t2[s]);
        });
    }
    zero_nyquist(out);
    return out;
}

/// curl as a matrix: (curl z)_ij = d_j z_i - d_i z_j -> i (xi_j z_i - xi_i z_j).
inline SpectralTensorField curl_matrix(const SpectralVectorField& F) {
    SpectralTensorField out(F.grid());
    const Complex* f[3] = {F.component(0), F.component(1), F.component(2)};
    Complex* o[9];
    for (int c = 0; c < 9; ++c) o[c] = out.component(c);
    detail::for_each_mode(F.grid(), [&](std::size_t s, double k1, double k2, double k3) {
        const double k[3] = {k1, k2, k3};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                o[3 * i + j][s] = Complex(0.0, 1.0) * (k[j] * f[i][s] - k[i] * f[j][s]);
    });
    zero_nyquist(out);
    return out;
}

/// Laplacian: multiplication by -|xi|^2 (any rank).
template <int NC>
Field<Complex, NC> laplacian(const Field<Complex, NC>& F) {
    Field<Complex, NC> out(F.grid());
    for (int c = 0; c < NC; ++c) {
        const Complex* src = F.component(c);
        Complex* dst = out.component(c);
        detail::for_each_mode(F.grid(), [&](std::size_t s, double k1, double k2, double k3) {
            dst[s] = -(k1 * k1 + k2 * k2 + k3 * k3) * src[s];
        });
    }
    zero_nyquist(out);
    return out;
}

/// Lambda^s = (-Delta)^(s/2): multiplication by |xi|^s.  For s < 0 the zero
/// mode is defined as 0 under the mean-zero convention; without that flag a
/// nonzero mean is an error.
template <int NC>
Field<Complex, NC> lambda_power(const Field<Complex, NC>& F, double s,
                                bool mean_zero_convention = true) {
    const Grid& g = F.grid();
    if (s < 0.0 && !mean_zero_convention) {
        for (int c = 0; c < NC; ++c) {
            if (std::abs(F.component(c)[0]) > 0.0)
                throw Error(ErrorKind::invalid_argument,
                            "lambda_power: negative power on a field with nonzero mean "
                            "(enable the zero-mode convention or remove the mean)");
        }
    }
    Field<Complex, NC> out(g);
    for (int c = 0; c < NC; ++c) {
        const Complex* src = F.component(c);
        Complex* dst = out.component(c);
        detail::for_each_mode(g, [&](std::size_t st, double k1, double k2, double k3) {
            const double k2sum = k1 * k1 + k2 * k2 + k3 * k3;
            dst[st] = (k2sum == 0.0 && s <= 0.0)
                          ? (s == 0.0 ? src[st] : Complex(0.0, 0.0))
                          : std::pow(k2sum, 0.5 * s) * src[st];
        });
    }
    zero_nyquist(out);
    return out;
}

/// 2/3-rule dealiasing: zeroes every mode with any |m_i| > n/3.  Idempotent.
template <int NC>
Field<Complex, NC> dealias(const Field<Complex, NC>& F) {
    const Grid& g = F.grid();
    const int n = g.n();
    Field<Complex, NC> out = F;
    auto keep = [&](int i) { return 3 * std::abs(g.signed_mode(i)) <= n; };
    for (int c = 0; c < NC; ++c) {
        Complex* data = out.component(c);
        for (int i1 = 0; i1 < n; ++i1) {
            const bool k1 = keep(i1);
            for (int i2 = 0; i2 < n; ++i2) {
                const bool k12 = k1 && keep(i2);
                for (int i3 = 0; i3 < n; ++i3)
                    if (!(k12 && keep(i3))) data[g.site(i1, i2, i3)] = Complex(0.0, 0.0);
            }
        }
    }
    return out;
}

}  // namespace cvef
