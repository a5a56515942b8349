#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "beamreg/colombeau.hpp"
#include "support.hpp"

using namespace beamreg;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = BEAMREG_SCENARIO_DIR;

std::vector<double> powers(const std::vector<double>& eps, double p) {
    std::vector<double> v;
    for (double e : eps) v.push_back(std::pow(e, -p));
    return v;
}

Scenario smaller(const std::string& name) {
    Scenario s = parse_scenario_file(kScenarios / (name + ".json"));
    s.mesh.n_elements = std::min(s.mesh.n_elements, 64);
    return s;
}

}  // namespace

TEST_CASE("exponent fits on synthetic tables") {
    const auto eps = epsilon_schedule(1, 10);
    const ExponentFit flat = moderateness_exponent(eps, std::vector<double>(eps.size(), 3.0));
    CHECK(std::abs(*flat.slope) <= 1e-12);
    CHECK(flat.status == "moderate");
    const ExponentFit two = moderateness_exponent(eps, powers(eps, 2.0));
    CHECK(std::abs(*two.slope - 2.0) <= 1e-6);
    for (double s : two.local_slopes) CHECK(s == doctest::Approx(2.0));
    const ExponentFit decay = moderateness_exponent(eps, powers(eps, -5.0));
    CHECK(*decay.slope == doctest::Approx(-5.0));
    const ExponentFit zero = moderateness_exponent(eps, std::vector<double>(eps.size(), 0.0));
    CHECK_FALSE(zero.slope.has_value());
    CHECK(zero.status == "null");
    std::vector<double> partly = powers(eps, 1.0);
    partly[3] = 0.0;
    CHECK(moderateness_exponent(eps, partly).status == "non-finite");
    CHECK_THROWS(moderateness_exponent(eps, {1.0}));
}

TEST_CASE("growth faster than any power is flagged") {
    const auto eps = epsilon_schedule(1, 10);
    std::vector<double> fast;
    for (double e : eps) fast.push_back(std::exp(std::pow(std::log(1.0 / e), 2)));
    CHECK(moderateness_exponent(eps, fast).status == "diverging");
    // log growth is moderate
    std::vector<double> slow;
    for (double e : eps) slow.push_back(std::log(1.0 / e));
    CHECK(moderateness_exponent(eps, slow).status == "moderate");
}

TEST_CASE("slow-scale check") {
    const auto eps = epsilon_schedule(1, 10);
    std::vector<double> logs, roots;
    for (double e : eps) {
        logs.push_back(std::log(1.0 / e));
        roots.push_back(std::pow(e, -0.5));
    }
    CHECK(slow_scale_check(eps, logs).passed);
    const SlowScaleResult r = slow_scale_check(eps, roots);
    CHECK_FALSE(r.passed);
    CHECK(r.growth[0] <= 1.0);   // eps^{1/2}: decreasing
    CHECK(r.growth[2] > 10.0);   // eps^{-1/2}: unbounded at p = 3
    CHECK(slow_scale_check(eps, std::vector<double>(eps.size(), 7.0)).passed);
}

TEST_CASE("G-infinity spread on a synthetic table") {
    SweepReport r;
    for (double p : {0.0, 1.0, 2.0}) {
        ExponentFit f;
        f.slope = p;
        f.status = "moderate";
        r.exponents.push_back(f);
    }
    const GInfinityResult g = g_infinity_test(r);
    CHECK(g.spread == 2.0);
    CHECK_FALSE(g.passed);
}

TEST_CASE("space-time norm of a separable trajectory") {
    const FemSpace s = build_space(16, 5);
    const CoefVector u = interpolate(
        s, [](double x) { return x * x * (1 - x) * (1 - x); }, [](double x) { return 2 * x * (1 - x) * (1 - 2 * x); });
    std::vector<double> times;
    std::vector<CoefVector> states;
    for (int k = 0; k <= 1000; ++k) {
        times.push_back(k / 1000.0);
        states.push_back(u);
    }
    // constant in t on [0,1]: the space-time norm is the spatial norm
    CHECK(space_time_norm(s, times, states, 0) == doctest::Approx(norm(s, u, NormKind::L2)).epsilon(1e-12));
    CHECK(space_time_norm(s, times, states, 2) == doctest::Approx(std::sqrt(derivative_norms_sq(s, u)[2])).epsilon(1e-12));
    CHECK_THROWS(space_time_norm(s, times, states, 3));
}

TEST_CASE("zero data is null") {
    Scenario s = smaller("zero_data");
    s.regularization.k_max = 6;
    const SweepReport r = sweep(s, {.l_max = 1});
    CHECK(null_test(r));
    for (const auto& e : r.exponents) CHECK(e.status == "null");
}

TEST_CASE("smooth coefficients and smooth load: exponents near zero") {
    Scenario s = smaller("smooth");
    s.load = {0.0, 0.5, 0.0, true};  // smooth manufactured load instead of the point load
    s.mesh.n_elements = 32;
    s.time.dt = 4e-3;
    const SweepReport r = sweep(s, {.l_max = 3});
    for (const auto& e : r.exponents) {
        CAPTURE(e.l);
        CAPTURE(e.k);
        CHECK(std::abs(*e.slope) <= 0.1);
    }
    CHECK(g_infinity_test(r).spread <= 0.2);
    CHECK_FALSE(null_test(r));
}

TEST_CASE("smooth coefficients with a point load: Cauchy in eps") {
    Scenario s = smaller("smooth");
    s.mesh.n_elements = 32;
    s.time.dt = 4e-3;
    const SweepReport r = sweep(s, {.l_max = 0, .keep_solutions = true});
    const AssociationTable t = association_test(r, build_space(s.mesh.n_elements, s.mesh.q_pts));
    CHECK(t.cauchy);
    // mollification consistency: differences shrink like w(eps)^2
    const std::size_t m = t.consecutive.size();
    CHECK(t.consecutive[m - 2] / t.consecutive[m - 1] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("identical solutions are associated at distance zero") {
    Scenario s = smaller("smooth");
    s.mesh.n_elements = 16;
    s.regularization.k_min = s.regularization.k_max = 3;
    const SweepReport once = sweep(s, {.l_max = 0, .keep_solutions = true});
    SweepReport twice = once;
    twice.schedule.push_back(once.schedule[0]);
    twice.solutions.push_back(once.solutions[0]);
    const AssociationTable t = association_test(twice, build_space(16, s.mesh.q_pts));
    CHECK(t.consecutive.at(0) == 0.0);
}

TEST_CASE("impulsive scenario: finite exponents, not null, schema-valid report") {
    Scenario s = smaller("two_segment_impulse");
    const SweepReport r = sweep(s, {.l_max = 3});
    for (const auto& e : r.exponents) {
        REQUIRE(e.slope.has_value());
        CHECK(std::isfinite(*e.slope));
        CHECK(*e.slope <= 3.0);
        CHECK(e.status == "moderate");
    }
    CHECK(std::isfinite(*r.exponent(1, 2).slope));
    CHECK_FALSE(null_test(r));
    const auto doc = to_json(r);
    CHECK(validate_sweep_report(doc).empty());
    CHECK(doc.at("time_transform_applied") == false);
    auto broken = doc;
    broken.erase("norms");
    CHECK_FALSE(validate_sweep_report(broken).empty());
    broken = doc;
    broken["exponents"].erase(0);
    CHECK_FALSE(validate_sweep_report(broken).empty());
    std::ostringstream csv;
    write_norms_csv(csv, r);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "eps,l,k,norm");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == r.schedule.size() * 4 * 3);
}

TEST_CASE("thread count does not change the report") {
    Scenario s = smaller("two_segment_impulse");
    s.regularization.k_max = 5;
    const auto one = to_json(sweep(s, {.l_max = 2, .threads = 1})).dump();
    const auto four = to_json(sweep(s, {.l_max = 2, .threads = 4})).dump();
    CHECK(one == four);
}

TEST_CASE("sweep errors name the failing eps") {
    Scenario s = smaller("point_load");
    s.load.x1 = 0.1;  // the mollified load leaves the beam at large eps
    try {
        (void)sweep(s, {.l_max = 0});
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("eps = 0.5") != std::string::npos);
    }
}

TEST_CASE("bootstrap identity") {
    Scenario s;
    s.load.manufactured = true;
    s.mesh.n_elements = 128;
    s.time.dt = 1e-4;
    s.regularization.k_min = s.regularization.k_max = 1;
    const RegularizedProblem p = build_problem(s, 0.5);
    const Trajectory tr = solve_ivp(p.system, p.f1, p.f2, p.params);
    const BootstrapReport rep = bootstrap_check(tr, p.system, 100);
    CHECK(rep.relative_residual() <= 1e-3);
    CHECK(rep.times.size() == 101);
    // c u''(0) = e(t) = c sin(pi t) * 2 for the manufactured solution
    CHECK(rep.e[50] == doctest::Approx(2.0 * std::sin(M_PI * rep.times[50])).epsilon(1e-3));

    Scenario zero;
    zero.mesh.n_elements = 16;
    zero.regularization.k_min = zero.regularization.k_max = 1;
    const RegularizedProblem z = build_problem(zero, 0.5);
    const Trajectory zt = solve_ivp(z.system, z.f1, z.f2, z.params);
    const BootstrapReport zr = bootstrap_check(zt, z.system, 50);
    CHECK(zr.residual_l2 == 0.0);
    CHECK(zr.reference_l2 == 0.0);
    for (double e : zr.e) CHECK(e == 0.0);
    CHECK(to_json(zr).at("relative_residual") == 0.0);
}

TEST_CASE("bootstrap residual falls under mesh refinement") {
    double r[2];
    for (int i = 0; i < 2; ++i) {
        Scenario s = parse_scenario_file(kScenarios / "two_segment.json");
        s.mesh.n_elements = i == 0 ? 32 : 64;
        s.regularization.k_max = 4;
        const RegularizedProblem p = build_problem(s, s.schedule().back());
        const Trajectory tr = solve_ivp(p.system, p.f1, p.f2, p.params);
        r[i] = bootstrap_check(tr, p.system, 25).relative_residual();
    }
    CHECK(r[0] / r[1] > 2.0);
}
