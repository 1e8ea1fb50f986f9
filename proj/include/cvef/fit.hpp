#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "cvef/common.hpp"

namespace cvef {

/// Power-law fit of a decaying series: least squares of log(value) against
/// log(1 + t) over a window.  The residual is the RMS misfit in log space;
/// a large residual flags a series that is not a power law (for instance an
/// exponential over a growing window).
struct DecayFit {
    double t_min = 0.0;
    double t_max = 0.0;
    double exponent = 0.0;
    double residual = 0.0;
    int samples = 0;
};

inline DecayFit decay_fit(const std::vector<std::pair<double, double>>& series, double t_min,
                          double t_max) {
    if (!(t_min < t_max))
        throw Error(ErrorKind::invalid_argument, "decay_fit: need t_min < t_max");
    std::vector<double> xs, ys;
    for (const auto& [t, v] : series) {
        if (t < t_min || t > t_max) continue;
        if (!(v > 0.0))
            throw Error(ErrorKind::invalid_argument,
                        "decay_fit: values must be positive inside the window");
        xs.push_back(std::log1p(t));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 8)
        throw Error(ErrorKind::invalid_argument,
                    "decay_fit: need at least 8 samples inside the window");

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    DecayFit fit;
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.samples = static_cast<int>(xs.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw Error(ErrorKind::invalid_argument, "decay_fit: degenerate window (single time)");
    fit.exponent = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + fit.exponent * xs[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    return fit;
}

}  // namespace cvef
