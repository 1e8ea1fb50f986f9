#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>

#include "cvef/field.hpp"

namespace cvef {

namespace detail {

/// Cached c2c FFTW plans per grid size.  Plans are created once under a lock
/// with FFTW_UNALIGNED so they may be executed on any caller buffer;
/// fftw_execute_dft on distinct arrays is thread-safe.
class FftPlanCache {
  public:
    struct Plans {
        fftw_plan forward = nullptr;
        fftw_plan backward = nullptr;
    };

    static const Plans& get(int n) {
        static FftPlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        auto it = cache.plans_.find(n);
        if (it != cache.plans_.end()) return it->second;

        const std::size_t count = static_cast<std::size_t>(n) * n * n;
        fftw_complex* in = fftw_alloc_complex(count);
        fftw_complex* out = fftw_alloc_complex(count);
        Plans p;
        p.forward = fftw_plan_dft_3d(n, n, n, in, out, FFTW_FORWARD, FFTW_MEASURE | FFTW_UNALIGNED);
        p.backward = fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, FFTW_MEASURE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        if (!p.forward || !p.backward)
            throw Error(ErrorKind::invalid_argument, "FFT: plan creation failed");
        return cache.plans_.emplace(n, p).first->second;
    }

  private:
    FftPlanCache() = default;
    ~FftPlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.backward);
        }
    }
    std::mutex mutex_;
    std::map<int, Plans> plans_;
};

inline fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace detail

/// Forward transform.  Carries the 1/n^3 normalization, so the coefficient at
/// mode m of exp(i xi(m).y) is exactly 1 and the zero-mode coefficient is the
/// field mean.
template <int NC>
Field<Complex, NC> to_spectral(const Field<Real, NC>& f) {
    const Grid& g = f.grid();
    const auto& plans = detail::FftPlanCache::get(g.n());
    const std::size_t count = g.site_count();
    const double scale = 1.0 / static_cast<double>(count);

    Field<Complex, NC> out(g);
    parallel_for(NC, [&](std::size_t c) {
        std::vector<Complex> in(count);
        const Real* src = f.component(static_cast<int>(c));
        for (std::size_t s = 0; s < count; ++s) in[s] = Complex(src[s], 0.0);
        Complex* dst = out.component(static_cast<int>(c));
        fftw_execute_dft(plans.forward, detail::as_fftw(in.data()), detail::as_fftw(dst));
        for (std::size_t s = 0; s < count; ++s) dst[s] *= scale;
    });
    return out;
}

/// Inverse transform back to real samples.  Together with to_spectral this is
/// an identity to roundoff; the (tiny) imaginary residue of the backward c2c
/// transform is dropped.
template <int NC>
Field<Real, NC> to_physical(const Field<Complex, NC>& F) {
    const Grid& g = F.grid();
    const auto& plans = detail::FftPlanCache::get(g.n());
    const std::size_t count = g.site_count();

    Field<Real, NC> out(g);
    parallel_for(NC, [&](std::size_t c) {
        std::vector<Complex> in(F.component(static_cast<int>(c)),
                                F.component(static_cast<int>(c)) + count);
        std::vector<Complex> work(count);
        fftw_execute_dft(plans.backward, detail::as_fftw(in.data()), detail::as_fftw(work.data()));
        Real* dst = out.component(static_cast<int>(c));
        for (std::size_t s = 0; s < count; ++s) dst[s] = work[s].real();
    });
    return out;
}

}  // namespace cvef
