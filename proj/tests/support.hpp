#pragma once
// Shared helpers for the unit tests: seeded generators and a dense reference solver.

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace testing_support {

inline std::mt19937_64& rng() {
    static std::mt19937_64 engine(0x5eed2024ULL);
    return engine;
}

/// Gaussian coefficients with an overall magnitude spread over six decades.
inline std::vector<double> random_coefs(std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> mag(-3.0, 3.0);
    const double scale = std::pow(10.0, mag(rng()));
    std::vector<double> v(n);
    for (double& x : v) x = scale * g(rng());
    return v;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

/// Gaussian elimination with partial pivoting on a row-major copy.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
        if (a[p * n + k] == 0.0) throw std::runtime_error("dense_solve: singular");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a[i * n + k] / a[k * n + k];
            for (std::size_t j = k; j < n; ++j) a[i * n + j] -= m * a[k * n + j];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
        x[i] = s / a[i * n + i];
    }
    return x;
}

inline std::vector<double> dense_matvec(const std::vector<double>& a, const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> y(a.size() / n, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) y[i] += a[i * n + j] * x[j];
    return y;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace testing_support
