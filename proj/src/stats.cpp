#include "routersim/stats.hpp"

#include <vector>

namespace routersim::stats {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> sigma) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("linear_fit: need matching samples, n >= 2");
    if (!sigma.empty() && sigma.size() != n) throw std::invalid_argument("linear_fit: sigma size mismatch");

    const double mx = mean(x), my = mean(y);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("linear_fit: degenerate x values");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double sse = 0, sst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.intercept + fit.slope * x[i];
        sse += (y[i] - pred) * (y[i] - pred);
        sst += (y[i] - my) * (y[i] - my);
    }
    fit.r_squared = sst > 0 ? 1.0 - sse / sst : 1.0;

    if (!sigma.empty()) {
        // Propagate the stated per-point uncertainties through the OLS
        // estimator: slope = sum w_i y_i with w_i = (x_i - mx) / sxx.
        double vs = 0, vi = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = (x[i] - mx) / sxx;
            vs += w * w * sigma[i] * sigma[i];
            const double wi = 1.0 / static_cast<double>(n) - mx * w;
            vi += wi * wi * sigma[i] * sigma[i];
        }
        fit.slope_sigma = std::sqrt(vs);
        fit.intercept_sigma = std::sqrt(vi);
    } else if (n > 2) {
        const double s2 = sse / static_cast<double>(n - 2);
        fit.slope_sigma = std::sqrt(s2 / sxx);
        fit.intercept_sigma = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
    }
    return fit;
}

double geometric_max_stddev(double p) {
    if (!(p > 0) || p > 1) throw std::invalid_argument("geometric_max_stddev: p outside (0, 1]");
    const double q = 1.0 - p;
    double m1 = 0, m2 = 0, qk_prev = 1.0;
    for (long k = 1; k < 100000; ++k) {
        const double cdf_prev = (1.0 - qk_prev) * (1.0 - qk_prev);  // P(max <= k-1)
        const double qk = qk_prev * q;
        const double cdf = (1.0 - qk) * (1.0 - qk);
        const double pk = cdf - cdf_prev;
        m1 += k * pk;
        m2 += static_cast<double>(k) * k * pk;
        qk_prev = qk;
        if (1.0 - cdf < 1e-16) break;
    }
    return std::sqrt(m2 - m1 * m1);
}

}  // namespace routersim::stats
