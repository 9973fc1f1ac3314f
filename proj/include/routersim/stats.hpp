#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace routersim::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

inline double sem(std::span<const double> xs) {
    return sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

struct LinearFit {
    double slope = 0, intercept = 0;
    double slope_sigma = 0, intercept_sigma = 0;
    double r_squared = 0;
};

// Ordinary least squares; when sigmas are provided (same length as y)
// the parameter uncertainties are propagated from them.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> sigma = {});

// Mean and standard deviation of a geometric(p) attempt count (support
// 1, 2, ...).
inline double geometric_mean_attempts(double p) { return 1.0 / p; }
inline double geometric_stddev(double p) { return std::sqrt(1.0 - p) / p; }

// E[max(G1, G2)] for iid geometric(p): 2/p - 1/(2p - p^2).
inline double geometric_max_mean(double p) { return 2.0 / p - 1.0 / (2.0 * p - p * p); }

// Standard deviation of max(G1, G2), by series summation.
double geometric_max_stddev(double p);

// E[e^{-c G}] for geometric(p): p e^{-c} / (1 - (1-p) e^{-c}).
inline double geometric_exp_decay(double p, double c) {
    const double e = std::exp(-c);
    return p * e / (1.0 - (1.0 - p) * e);
}

}  // namespace routersim::stats
