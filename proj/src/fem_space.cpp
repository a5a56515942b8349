#include "beamreg/fem_space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beamreg {

QuadratureRule gauss_legendre(int n_points) {
    if (n_points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
    const auto n = static_cast<std::size_t>(n_points);
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n for the roots in (-1,1), then map to [0,1].
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = z; p0 = 1.0; }
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.points[i] = 0.5 * (1.0 - z);
        rule.points[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    if (n == 1) {
        rule.points[0] = 0.5;
        rule.weights[0] = 1.0;
    }
    return rule;
}

FemSpace::FemSpace(int n_elements, int q_pts)
    : n_elements_(n_elements), h_(1.0 / n_elements), rule_(gauss_legendre(q_pts)) {
    nodes_.resize(static_cast<std::size_t>(n_elements) + 1);
    for (int i = 0; i <= n_elements; ++i) nodes_[static_cast<std::size_t>(i)] = static_cast<double>(i) / n_elements;
    nodes_.back() = 1.0;
}

int FemSpace::dof(int node, DofKind kind) const noexcept {
    if (node <= 0 || node >= n_elements_) return -1;
    return 2 * (node - 1) + static_cast<int>(kind);
}

std::array<int, 4> FemSpace::element_dofs(int element) const noexcept {
    return {dof(element, DofKind::Value), dof(element, DofKind::Slope),
            dof(element + 1, DofKind::Value), dof(element + 1, DofKind::Slope)};
}

int FemSpace::locate(double x) const noexcept {
    if (x <= 0.0) return 0;
    const int e = static_cast<int>(std::floor(x * n_elements_));
    return e >= n_elements_ ? n_elements_ - 1 : e;
}

std::array<double, 4> FemSpace::shape(double xi, int deriv, double h) {
    const double x2 = xi * xi;
    const double x3 = x2 * xi;
    switch (deriv) {
        case 0:
            return {1.0 - 3.0 * x2 + 2.0 * x3, h * (xi - 2.0 * x2 + x3), 3.0 * x2 - 2.0 * x3,
                    h * (x3 - x2)};
        case 1:
            return {(6.0 * x2 - 6.0 * xi) / h, 1.0 - 4.0 * xi + 3.0 * x2, (6.0 * xi - 6.0 * x2) / h,
                    3.0 * x2 - 2.0 * xi};
        case 2:
            return {(12.0 * xi - 6.0) / (h * h), (6.0 * xi - 4.0) / h, (6.0 - 12.0 * xi) / (h * h),
                    (6.0 * xi - 2.0) / h};
        default:
            throw std::invalid_argument("shape: derivative order " + std::to_string(deriv) +
                                        " exceeds C1 Hermite representation");
    }
}

FemSpace build_space(int n_elements, int q_pts) {
    if (n_elements < 2)
        throw std::invalid_argument("build_space: n_elements must be >= 2 (no interior DOFs otherwise)");
    if (q_pts < 4) throw std::invalid_argument("build_space: q_pts must be >= 4");
    return FemSpace(n_elements, q_pts);
}

CoefVector interpolate(const FemSpace& space, const std::function<double(double)>& f,
                       const std::function<double(double)>& df) {
    CoefVector u(space.n_dofs(), 0.0);
    for (int i = 1; i < space.n_elements(); ++i) {
        const double x = space.node(i);
        u[static_cast<std::size_t>(space.dof(i, DofKind::Value))] = f(x);
        u[static_cast<std::size_t>(space.dof(i, DofKind::Slope))] = df(x);
    }
    return u;
}

double eval(const FemSpace& space, std::span<const double> u, double x, int deriv) {
    if (deriv < 0 || deriv > 2)
        throw std::invalid_argument("eval: derivative order must be 0, 1 or 2");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("eval: x outside [0,1]");
    // Clamped ends carry no DOFs; the representation vanishes there identically.
    if (deriv < 2 && (x == 0.0 || x == 1.0)) return 0.0;
    const int e = space.locate(x);
    const double xi = (x - space.node(e)) / space.h();
    const auto n = FemSpace::shape(xi, deriv, space.h());
    const auto dofs = space.element_dofs(e);
    double s = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
        if (dofs[a] >= 0) s += n[a] * u[static_cast<std::size_t>(dofs[a])];
    return s;
}

std::array<double, 3> derivative_norms_sq(const FemSpace& space, std::span<const double> u) {
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    const auto& rule = space.rule();
    const double h = space.h();
    for (int e = 0; e < space.n_elements(); ++e) {
        const auto dofs = space.element_dofs(e);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            for (int d = 0; d < 3; ++d) {
                const auto n = FemSpace::shape(rule.points[q], d, h);
                double s = 0.0;
                for (std::size_t a = 0; a < 4; ++a)
                    if (dofs[a] >= 0) s += n[a] * u[static_cast<std::size_t>(dofs[a])];
                acc[static_cast<std::size_t>(d)] += rule.weights[q] * h * s * s;
            }
        }
    }
    return acc;
}

double norm(const FemSpace& space, std::span<const double> u, NormKind kind) {
    const auto sq = derivative_norms_sq(space, u);
    switch (kind) {
        case NormKind::L2: return std::sqrt(sq[0]);
        case NormKind::H1: return std::sqrt(sq[0] + sq[1]);
        case NormKind::H2: return std::sqrt(sq[0] + sq[1] + sq[2]);
    }
    return 0.0;
}

}  // namespace beamreg
