#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cvef {

using Real = double;
using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Coarse error category carried by every cvef exception.
enum class ErrorKind {
    dimension_mismatch,
    invalid_argument,
    admissibility,
    config,
    quadrature,
    io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

/// Thrown when the flow map folds (min J < 1/2).  Carries the offending
/// minimum, its linear grid index, and the simulation time (0 for static checks).
class AdmissibilityError : public Error {
  public:
    AdmissibilityError(double min_j, std::size_t site, double time, const std::string& what)
        : Error(ErrorKind::admissibility, what), min_j_(min_j), site_(site), time_(time) {}
    double min_j() const noexcept { return min_j_; }
    std::size_t site() const noexcept { return site_; }
    double time() const noexcept { return time_; }

  private:
    double min_j_;
    std::size_t site_;
    double time_;
};

class ConfigError : public Error {
  public:
    ConfigError(int line, const std::string& what) : Error(ErrorKind::config, what), line_(line) {}
    int line() const noexcept { return line_; }

  private:
    int line_;
};

namespace detail {
inline int& worker_cap() {
    static int cap = 1;
    return cap;
}
}  // namespace detail

/// Caps the number of worker threads used by data-parallel loops (CLI --threads).
inline void set_worker_threads(int n) { detail::worker_cap() = n < 1 ? 1 : n; }
inline int worker_threads() { return detail::worker_cap(); }

/// Splits [0, count) across the configured workers.  Bodies must not share
/// mutable state.  Falls back to a plain loop for one worker or tiny ranges.
template <class F>
void parallel_for(std::size_t count, F&& body) {
    const int workers = worker_threads();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::size_t chunk = (count + nthreads - 1) / nthreads;
    for (std::size_t w = 0; w < nthreads; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace cvef
