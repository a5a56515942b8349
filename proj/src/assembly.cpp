#include "beamreg/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace beamreg {

namespace {

constexpr std::size_t kBand = 3;

template <class Kernel>
BandedMatrix assemble(const FemSpace& space, std::span<const Window> windows, int test_deriv,
                      int trial_deriv, Kernel&& weight_at) {
    BandedMatrix a(space.n_dofs(), kBand, kBand);
    const double h = space.h();
    for (int e = 0; e < space.n_elements(); ++e) {
        const auto dofs = space.element_dofs(e);
        double local[4][4] = {};
        for (const auto& qp : element_quadrature(space, e, windows)) {
            const double x = space.node(e) + qp.xi * h;
            const double k = weight_at(x) * qp.weight;
            if (k == 0.0) continue;
            const auto nt = FemSpace::shape(qp.xi, test_deriv, h);
            const auto nu = FemSpace::shape(qp.xi, trial_deriv, h);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) local[i][j] += k * nt[static_cast<std::size_t>(i)] * nu[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < 4; ++i) {
            if (dofs[static_cast<std::size_t>(i)] < 0) continue;
            for (int j = 0; j < 4; ++j) {
                if (dofs[static_cast<std::size_t>(j)] < 0) continue;
                a.add(static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)]),
                      static_cast<std::size_t>(dofs[static_cast<std::size_t>(j)]), local[i][j]);
            }
        }
    }
    return a;
}

}  // namespace

std::vector<Panel> element_panels(const FemSpace& space, int element, std::span<const Window> windows) {
    const double xa = space.node(element);
    const double xb = xa + space.h();
    // Cut at every window edge inside the element, then refine the pieces
    // covered by a window to 1/32 of its half-width (the bump is flat to all
    // orders at its edges, which slows Gauss convergence there).
    std::vector<double> cuts{xa, xb};
    for (const auto& w : windows) {
        for (double c : {w.center - w.half_width, w.center + w.half_width})
            if (c > xa && c < xb) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a <= 1e-15 * space.h()) continue;
        const double mid = 0.5 * (a + b);
        double len = b - a;
        for (const auto& w : windows)
            if (std::abs(mid - w.center) < w.half_width) len = std::min(len, w.half_width / 32.0);
        const int m = std::max(1, static_cast<int>(std::ceil((b - a) / len - 1e-9)));
        for (int p = 0; p < m; ++p) panels.push_back({a + (b - a) * p / m, a + (b - a) * (p + 1) / m});
    }
    return panels;
}

std::vector<QuadPoint> element_quadrature(const FemSpace& space, int element,
                                          std::span<const Window> windows) {
    const double h = space.h();
    const double xa = space.node(element);
    const auto& rule = space.rule();
    std::vector<QuadPoint> pts;
    for (const auto& p : element_panels(space, element, windows)) {
        const double len = p.end - p.begin;
        for (std::size_t q = 0; q < rule.points.size(); ++q)
            pts.push_back({(p.begin - xa + len * rule.points[q]) / h, rule.weights[q] * len});
    }
    return pts;
}

BandedMatrix mass_matrix(const FemSpace& space) {
    return assemble(space, {}, 0, 0, [](double) { return 1.0; });
}

BandedMatrix bending_matrix(const FemSpace& space, const RegularizedField& c) {
    return assemble(space, c.windows(), 2, 2, [&](double x) { return c(x, 0.0); });
}

BandedMatrix axial_matrix(const FemSpace& space, const RegularizedField& b, double t, int t_order) {
    return assemble(space, b.windows(), 0, 2, [&](double x) { return b.value(x, t, t_order); });
}

Vector load_vector(const FemSpace& space, const RegularizedField& g, double t, int t_order) {
    Vector f(space.n_dofs(), 0.0);
    const double h = space.h();
    for (int e = 0; e < space.n_elements(); ++e) {
        const auto dofs = space.element_dofs(e);
        for (const auto& qp : element_quadrature(space, e, g.windows())) {
            const double v = g.value(space.node(e) + qp.xi * h, t, t_order) * qp.weight;
            if (v == 0.0) continue;
            const auto n = FemSpace::shape(qp.xi, 0, h);
            for (std::size_t a = 0; a < 4; ++a)
                if (dofs[a] >= 0) f[static_cast<std::size_t>(dofs[a])] += v * n[a];
        }
    }
    return f;
}

Vector point_load_vector(const FemSpace& space, std::span<const DiracAtom> atoms) {
    Vector f(space.n_dofs(), 0.0);
    for (const auto& atom : atoms) {
        const int e = space.locate(atom.location);
        const double xi = (atom.location - space.node(e)) / space.h();
        const auto n = FemSpace::shape(xi, 0, space.h());
        const auto dofs = space.element_dofs(e);
        for (std::size_t a = 0; a < 4; ++a)
            if (dofs[a] >= 0) f[static_cast<std::size_t>(dofs[a])] += atom.mass * n[a];
    }
    return f;
}

namespace {
double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
}  // namespace

double apply_form_a0(const FemSpace& space, const RegularizedField& c, std::span<const double> u,
                     std::span<const double> v) {
    return dot(v, bending_matrix(space, c).matvec(u));
}

double apply_form_a1(const FemSpace& space, const RegularizedField& b, double t,
                     std::span<const double> u, std::span<const double> v) {
    return dot(v, axial_matrix(space, b, t).matvec(u));
}

SystemMatrices::SystemMatrices(const FemSpace& space, RegularizedField stiffness,
                               RegularizedField axial, RegularizedField load, double winkler,
                               std::vector<DiracAtom> point_loads)
    : space_(space), c_(std::move(stiffness)), b_(std::move(axial)), g_(std::move(load)),
      winkler_(winkler), point_loads_(std::move(point_loads)), mass_(mass_matrix(space)),
      bending_(bending_matrix(space, c_)), winkler_matrix_(mass_) {
    winkler_matrix_.scale(winkler_);
    if (!b_.time_dependent()) static_axial_ = axial_matrix(space_, b_, 0.0);
    if (!g_.time_dependent()) {
        static_load_ = load_vector(space_, g_, 0.0);
        const auto pl = point_load_vector(space_, point_loads_);
        for (std::size_t i = 0; i < pl.size(); ++i) static_load_[i] += pl[i];
    }
}

BandedMatrix SystemMatrices::axial(double t, int t_order) const {
    if (!b_.time_dependent()) {
        if (t_order == 0) return static_axial_;
        return BandedMatrix(space_.n_dofs(), kBand, kBand);
    }
    return axial_matrix(space_, b_, t, t_order);
}

BandedMatrix SystemMatrices::operator_matrix(double t) const {
    BandedMatrix k = bending_;
    k.axpy(1.0, axial(t));
    if (winkler_ != 0.0) k.axpy(1.0, winkler_matrix_);
    return k;
}

Vector SystemMatrices::load(double t, int t_order) const {
    if (!g_.time_dependent()) {
        if (t_order == 0) return static_load_;
        return Vector(space_.n_dofs(), 0.0);
    }
    Vector f = load_vector(space_, g_, t, t_order);
    if (t_order == 0) {
        const auto pl = point_load_vector(space_, point_loads_);
        for (std::size_t i = 0; i < pl.size(); ++i) f[i] += pl[i];
    }
    return f;
}

}  // namespace beamreg
