#pragma once

// Test-side reference computations, written independently of the library
// implementations so the two can cross-check each other.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace test_oracles {

// Bell-diagonal weights ordered [PhiPlus, PhiMinus, PsiPlus, PsiMinus].
using BellWeights = std::array<double, 4>;

// Action of a single-qubit Pauli channel (wI, wX, wY, wZ) applied to ONE
// half of a Bell-diagonal state. Each Pauli permutes the Bell basis:
//   X: PhiPlus<->PsiPlus, PhiMinus<->PsiMinus
//   Y: PhiPlus<->PsiMinus, PhiMinus<->PsiPlus
//   Z: PhiPlus<->PhiMinus, PsiPlus<->PsiMinus
inline BellWeights pauli_on_bell_half(const BellWeights& w, double wi, double wx, double wy,
                                      double wz) {
    BellWeights out{};
    out[0] = wi * w[0] + wx * w[2] + wy * w[3] + wz * w[1];
    out[1] = wi * w[1] + wx * w[3] + wy * w[2] + wz * w[0];
    out[2] = wi * w[2] + wx * w[0] + wy * w[1] + wz * w[3];
    out[3] = wi * w[3] + wx * w[1] + wy * w[0] + wz * w[2];
    return out;
}

// n applications of the per-attempt nuclear map rho -> (1-a-b) rho
// + a Z rho Z + b I/2 to one half of PhiPlus, by Bell-weight recursion.
inline BellWeights attempt_noise_recursion(double a, double b, int n) {
    const double wi = 1.0 - a - b + b / 4.0;
    const double wx = b / 4.0, wy = b / 4.0;
    const double wz = a + b / 4.0;
    BellWeights w{1.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) w = pauli_on_bell_half(w, wi, wx, wy, wz);
    return w;
}

// Reference realization of the idle T1/T2 matrix map on one qubit:
// populations relax toward |0> with factor e^{-t/T1}, coherences decay
// with factor e^{-t/T2}, applied entrywise.
inline Eigen::Matrix2cd t1t2_matrix_map(const Eigen::Matrix2cd& rho, double t, double t1,
                                        double t2) {
    const double f1 = std::isinf(t1) ? 1.0 : std::exp(-t / t1);
    const double f2 = std::isinf(t2) ? 1.0 : std::exp(-t / t2);
    Eigen::Matrix2cd out;
    out(1, 1) = rho(1, 1) * f1;
    out(0, 0) = rho(0, 0) + rho(1, 1) * (1.0 - f1);
    out(0, 1) = rho(0, 1) * f2;
    out(1, 0) = rho(1, 0) * f2;
    return out;
}

// Probability that a 2-bit outcome with independent per-bit flip
// probability eps lands on (flip_phase, flip_parity) relative to the
// true outcome; the 4x4 pattern table is the outer product.
inline double flip_pattern_probability(bool flip_phase, bool flip_parity, double eps) {
    return (flip_phase ? eps : 1.0 - eps) * (flip_parity ? eps : 1.0 - eps);
}

// Random density matrix of dimension d (Wishart construction).
inline Eigen::MatrixXcd random_density(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = std::complex<double>(normal(rng), normal(rng));
    Eigen::MatrixXcd rho = g * g.adjoint();
    return rho / rho.trace();
}

// Two-sample Kolmogorov-Smirnov statistic; rejects at alpha = 0.01 when
// D > 1.628 * sqrt((n + m) / (n m)).
inline bool ks_two_sample_reject_001(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        // Advance past every sample equal to the current minimum in both
        // arrays before evaluating D: with discrete data, mid-tie
        // evaluation inflates the statistic.
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double crit = 1.628 * std::sqrt((na + nb) / (na * nb));
    return d > crit;
}

}  // namespace test_oracles
