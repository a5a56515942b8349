#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "beamreg/assembly.hpp"
#include "support.hpp"

using namespace beamreg;
namespace ts = testing_support;

namespace {

// On three elements, node 1 owns DOFs (0,1) and node 2 owns (2,3); their
// coupling block comes from the middle element alone, while each diagonal
// block is the sum of the two adjacent element blocks.
using Block = std::array<std::array<double, 2>, 2>;

void check_block(const BandedMatrix& a, std::size_t r, std::size_t c, const Block& ref, double tol) {
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(a(r + i, c + j) - ref[i][j]) <= tol);
}

double quad_inner(const FemSpace& s, const std::vector<double>& u, int du, const std::vector<double>& v, int dv,
                  const std::function<double(double)>& w = [](double) { return 1.0; }) {
    const QuadratureRule r = gauss_legendre(8);
    double acc = 0.0;
    for (int e = 0; e < s.n_elements(); ++e)
        for (std::size_t q = 0; q < r.points.size(); ++q) {
            const double x = s.node(e) + s.h() * r.points[q];
            acc += r.weights[q] * s.h() * w(x) * eval(s, u, x, du) * eval(s, v, x, dv);
        }
    return acc;
}

}  // namespace

TEST_CASE("mass matrix reproduces the classical Hermite element block") {
    const FemSpace s = build_space(3, 4);
    const double h = s.h(), k = h / 420.0;
    const BandedMatrix m = mass_matrix(s);
    check_block(m, 0, 2, {{{54 * k, -13 * h * k}, {13 * h * k, -3 * h * h * k}}}, 1e-15);
    check_block(m, 2, 0, {{{54 * k, 13 * h * k}, {-13 * h * k, -3 * h * h * k}}}, 1e-15);
    check_block(m, 0, 0, {{{312 * k, 0.0}, {0.0, 8 * h * h * k}}}, 1e-15);
}

TEST_CASE("bending matrix reproduces the classical beam element block") {
    const FemSpace s = build_space(3, 4);
    const double h = s.h(), k = 1.0 / (h * h * h);
    const BandedMatrix kc = bending_matrix(s, RegularizedField::constant(1.0));
    check_block(kc, 0, 2, {{{-12 * k, 6 * h * k}, {-6 * h * k, 2 * h * h * k}}}, 1e-12);
    check_block(kc, 0, 0, {{{24 * k, 0.0}, {0.0, 8 * h * h * k}}}, 1e-12);
    const BandedMatrix k2 = bending_matrix(s, RegularizedField::constant(2.0));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(k2(i, j) == doctest::Approx(2.0 * kc(i, j)));
}

TEST_CASE("property: Gram forms equal their quadratures") {
    const FemSpace s = build_space(10, 5);
    const BandedMatrix m = mass_matrix(s);
    const BandedMatrix kc = bending_matrix(s, RegularizedField::constant(1.0));
    const BandedMatrix kb = axial_matrix(s, RegularizedField::constant(1.0), 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = ts::random_coefs(s.n_dofs());
        const auto y = ts::random_coefs(s.n_dofs());
        double xmx = 0.0, xkx = 0.0, xby = 0.0;
        const auto mx = m.matvec(x), kx = kc.matvec(x), by = kb.matvec(y);
        for (std::size_t i = 0; i < x.size(); ++i) {
            xmx += x[i] * mx[i];
            xkx += x[i] * kx[i];
            xby += x[i] * by[i];
        }
        CHECK(xmx > 0.0);
        CHECK(xmx == doctest::Approx(quad_inner(s, x, 0, x, 0)).epsilon(1e-12));
        CHECK(xkx == doctest::Approx(quad_inner(s, x, 2, x, 2)).epsilon(1e-12));
        const double ref = quad_inner(s, y, 2, x, 0);
        CHECK(std::abs(xby - ref) <= 1e-12 * std::sqrt(quad_inner(s, y, 2, y, 2) * xmx));
    }
}

double asymmetry(const BandedMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
    return m;
}

TEST_CASE("axial matrix: zero field and nonsymmetry") {
    const FemSpace s = build_space(6, 4);
    const BandedMatrix z = axial_matrix(s, RegularizedField::constant(0.0), 0.3);
    CHECK(ts::max_abs(z.to_dense()) == 0.0);
    // int phi_j'' phi_i = -int phi_j' phi_i' on the clamped space: symmetric for constant b
    const BandedMatrix kb = axial_matrix(s, RegularizedField::constant(1.0), 0.0);
    CHECK(asymmetry(kb) <= 1e-12 * ts::max_abs(kb.to_dense()));
    // the extra -int b' phi_j' phi_i term breaks the symmetry once b varies in x
    const RegularizedField ramp(0.0, 0.0, [](double x, double, int order) { return order == 0 ? 1.0 + x : 0.0; }, 2.0,
                                false);
    CHECK(asymmetry(axial_matrix(s, ramp, 0.0)) > 1e-3);
}

TEST_CASE("mass form of the interpolated quartic") {
    const FemSpace s = build_space(16, 5);
    const CoefVector u = interpolate(
        s, [](double x) { return x * x * (1 - x) * (1 - x); }, [](double x) { return 2 * x * (1 - x) * (1 - 2 * x); });
    const auto mu = mass_matrix(s).matvec(u);
    double q = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) q += u[i] * mu[i];
    CHECK(q >= 0.0);
    CHECK(q == doctest::Approx(1.0 / 630.0).epsilon(1e-6));
}

TEST_CASE("load vectors") {
    const FemSpace s = build_space(8, 5);
    const ScaleRule rule{ScaleRule::Kind::Polynomial, 1.0};
    // a narrow load at a node acts like a point load on its value DOF
    const RegularizedField g = load_field(2.0, 0.5, 1e-4, rule);
    const Vector f = load_vector(s, g, 0.0);
    const Vector p = point_load_vector(s, std::vector<DiracAtom>{{0.5, 2.0}});
    const int vd = s.dof(4, DofKind::Value);
    CHECK(p[static_cast<std::size_t>(vd)] == doctest::Approx(2.0));
    for (std::size_t i = 0; i < p.size(); ++i)
        if (static_cast<int>(i) != vd) CHECK(std::abs(p[i]) <= 1e-15);
    CHECK(ts::max_abs_diff(f, p) <= 1e-6);
    // the quadrature of a window narrower than the element is refined
    const auto pts = element_quadrature(s, 4, g.windows());
    CHECK(pts.size() > 5);
    double wsum = 0.0;
    for (const auto& q : pts) wsum += q.weight;
    CHECK(wsum == doctest::Approx(s.h()).epsilon(1e-14));
}

TEST_CASE("forms agree with the assembled matrices") {
    const FemSpace s = build_space(12, 5);
    const ScaleRule rule{ScaleRule::Kind::Polynomial, 1.0};
    const RegularizedField c = stiffness_field(1.0, 3.0, 0.4, 0.1, rule);
    const BandedMatrix kc = bending_matrix(s, c);
    const RegularizedField b = RegularizedField::constant(0.7);
    const BandedMatrix kb = axial_matrix(s, b, 0.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto u = ts::random_coefs(s.n_dofs());
        const auto v = ts::random_coefs(s.n_dofs());
        const auto ku = kc.matvec(u), bu = kb.matvec(u);
        double a0 = 0.0, a1 = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            a0 += v[i] * ku[i];
            a1 += v[i] * bu[i];
        }
        const double scale = std::sqrt(quad_inner(s, u, 2, u, 2) * quad_inner(s, v, 2, v, 2));
        CHECK(std::abs(apply_form_a0(s, c, u, v) - a0) <= 1e-12 * scale);
        CHECK(std::abs(apply_form_a1(s, b, 0.0, u, v) - a1) <= 1e-12 * scale);
    }
}

TEST_CASE("system matrices") {
    const FemSpace s = build_space(8, 4);
    const SystemMatrices sys(s, RegularizedField::constant(1.0), RegularizedField::constant(0.5),
                             RegularizedField::constant(0.0), 3.0, {{0.5, 1.0}});
    const BandedMatrix op = sys.operator_matrix(0.2);
    for (std::size_t i = 0; i < op.size(); ++i)
        for (std::size_t j = 0; j < op.size(); ++j)
            CHECK(op(i, j) == doctest::Approx(sys.bending()(i, j) + sys.axial(0.2)(i, j) + 3.0 * sys.mass()(i, j)));
    CHECK(sys.load(0.1)[static_cast<std::size_t>(s.dof(4, DofKind::Value))] == doctest::Approx(1.0));
    CHECK_FALSE(sys.operator_time_dependent());
}
