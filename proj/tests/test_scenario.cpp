#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>

#include "beamreg/errors.hpp"
#include "beamreg/scenario.hpp"
#include "support.hpp"

using namespace beamreg;
using nlohmann::json;
namespace ts = testing_support;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = BEAMREG_SCENARIO_DIR;

std::string error_of(const json& doc) {
    try {
        (void)parse_scenario(doc);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

Scenario random_scenario() {
    Scenario s;
    s.name = "random";
    s.beam = {ts::uniform(0.5, 3.0), ts::uniform(0.5, 3.0), ts::uniform(0.4, 0.6), ts::uniform(0.5, 2.0),
              ts::uniform(0.0, 0.5)};
    const bool impulse = ts::uniform(0.0, 1.0) < 0.5;
    s.axial = {ts::uniform(-1.0, 1.0), ts::uniform(-1.0, 1.0), impulse ? "dirac" : "sinusoid", ts::uniform(0.2, 0.8),
               ts::uniform(0.0, 10.0)};
    s.load = {ts::uniform(-2.0, 2.0), ts::uniform(0.4, 0.6), ts::uniform(0.0, 3.0), false};
    const char* names[] = {"zero", "hermite_poly", "bump"};
    s.initial.f1 = {names[static_cast<int>(ts::uniform(0.0, 2.999))], ts::uniform(-1.0, 1.0)};
    s.initial.f2 = {names[static_cast<int>(ts::uniform(0.0, 2.999))], ts::uniform(-1.0, 1.0)};
    s.time = {1.0, 1.0 / static_cast<int>(ts::uniform(100.0, 1000.0))};
    s.mesh = {static_cast<int>(ts::uniform(2.0, 256.0)), static_cast<int>(ts::uniform(4.0, 8.0))};
    s.regularization.rule = {impulse ? ScaleRule::Kind::Log : ScaleRule::Kind::Polynomial, ts::uniform(0.05, 0.3)};
    s.regularization.k_min = 1;
    s.regularization.k_max = static_cast<int>(ts::uniform(1.0, 10.0));
    s.diagnostics = {static_cast<int>(ts::uniform(0.0, 3.99)), ts::uniform(0.0, 5.0), 101, 10};
    return s;
}

}  // namespace

TEST_CASE("minimal scenario takes defaults") {
    const Scenario s = parse_scenario(json::parse(R"({"name": "minimal"})"));
    CHECK(s.name == "minimal");
    CHECK(s.beam.ei1 == 1.0);
    CHECK(s.mesh.n_elements == 64);
    CHECK(s.regularization.rule.kind == ScaleRule::Kind::Polynomial);
    CHECK(s.schedule().size() == 10);
    CHECK(s.schedule().front() == 0.5);
}

TEST_CASE("range errors name the field") {
    CHECK(error_of(json::parse(R"({"beam": {"x0": 1.5}})")).find("beam.x0") != std::string::npos);
    CHECK(error_of(json::parse(R"({"beam": {"EI1": -1}})")).find("beam.EI1") != std::string::npos);
    CHECK(error_of(json::parse(R"({"load": {"x1": 0.0}})")).find("load.x1") != std::string::npos);
    CHECK(error_of(json::parse(R"({"time": {"dt": 0}})")).find("time.dt") != std::string::npos);
    CHECK(error_of(json::parse(R"({"time": {"T": -1}})")).find("time.T") != std::string::npos);
    CHECK(error_of(json::parse(R"({"mesh": {"n_elements": 1}})")).find("mesh.n_elements") != std::string::npos);
    CHECK(error_of(json::parse(R"({"axial": {"kind": "dirac", "P1": 1, "t0": 2}, "regularization": {"rule": "log"}})"))
              .find("axial.t0") != std::string::npos);
}

TEST_CASE("schema errors name the field") {
    CHECK(error_of(json::parse(R"({"beam": {"EI1": "stiff"}})")).find("beam.EI1") != std::string::npos);
    CHECK(error_of(json::parse(R"({"beam": {"EI3": 1}})")).find("beam.EI3") != std::string::npos);
    CHECK(error_of(json::parse(R"({"beems": {}})")).find("beems") != std::string::npos);
    CHECK(error_of(json::parse(R"({"regularization": {"rule": "cubic"}})")).find("regularization.rule") !=
          std::string::npos);
    CHECK(error_of(json::parse(R"({"initial": {"f1": 3}})")).find("initial.f1") != std::string::npos);
    CHECK(error_of(json::parse(R"({"initial": {"f1": "wiggle"}})")).find("wiggle") != std::string::npos);
    CHECK_THROWS_AS(parse_scenario(json::parse("[1, 2]")), std::invalid_argument);
}

TEST_CASE("impulse with the polynomial rule cites the log-type requirement") {
    const json doc = json::parse(R"({"axial": {"kind": "dirac", "P1": 1.0, "t0": 0.5}})");
    try {
        (void)parse_scenario(doc);
        FAIL("expected HypothesisError");
    } catch (const HypothesisError& e) {
        CHECK(std::string(e.what()).find("log-type") != std::string::npos);
    }
}

TEST_CASE("shipped scenarios parse") {
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(parse_scenario_file(entry.path()));
    }
    const Scenario s = parse_scenario_file(kScenarios / "two_segment_impulse.json");
    CHECK(s.has_axial_impulse());
    CHECK(s.has_spatial_atoms());
    CHECK(s.regularization.rule.kind == ScaleRule::Kind::Log);
    CHECK_NOTHROW(parse_scenario_file(kScenarios / "two_segment_impulse.json", true));
}

TEST_CASE("resolution rules warn, or fail when strict") {
    const json doc = json::parse(R"({"load": {"F0": 1.0, "x1": 0.5}, "mesh": {"n_elements": 16}})");
    std::vector<std::string> warnings;
    (void)parse_scenario(doc, false, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("w(eps_min)/4") != std::string::npos);
    CHECK_THROWS_AS(parse_scenario(doc, true), std::invalid_argument);
    const json kick = json::parse(
        R"({"axial": {"kind": "dirac", "P1": 1.0, "t0": 0.5}, "regularization": {"rule": "log", "scale": 0.1}, "time": {"dt": 0.01}})");
    warnings.clear();
    (void)parse_scenario(kick, false, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("w(eps_min)/8") != std::string::npos);
}

TEST_CASE("missing and malformed files") {
    CHECK_THROWS_AS(parse_scenario_file(kScenarios / "does_not_exist.json"), std::invalid_argument);
}

TEST_CASE("property: emit then parse is the identity") {
    for (int trial = 0; trial < 300; ++trial) {
        const Scenario s = random_scenario();
        const Scenario back = parse_scenario(json::parse(emit_scenario(s).dump()));
        CHECK(back == s);
    }
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
        const Scenario s = parse_scenario_file(entry.path());
        CHECK(parse_scenario(emit_scenario(s)) == s);
    }
}

TEST_CASE("profiles are clamped") {
    for (const char* name : {"zero", "hermite_poly", "bump"}) {
        const Profile p{name, 0.7};
        CHECK(p.value(0.0) == 0.0);
        CHECK(std::abs(p.value(1.0)) <= 1e-15);
        CHECK(p.slope(0.0) == 0.0);
        CHECK(std::abs(p.slope(1.0)) <= 1e-15);
        const double d = 1e-6;
        CHECK(p.slope(0.3) == doctest::Approx((p.value(0.3 + d) - p.value(0.3 - d)) / (2 * d)).epsilon(1e-6));
    }
}

TEST_CASE("physical to standard form") {
    Scenario s;
    s.beam = {1.0, 2.0, 0.5, 1.0, 0.5};
    s.axial = {0.5, 1.0, "sinusoid", 0.5, 3.0};
    s.mesh.n_elements = 16;
    s.regularization.k_max = 4;
    const RegularizedProblem p = build_problem(s, 1.0 / 16);
    const auto& b = p.system.axial_field();
    // b = P(R t), P(s) = P0 + P1 sin(omega s); R = 1 left of x0 and 1.5 right of it
    CHECK(b(0.2, 0.3) == doctest::Approx(0.5 + std::sin(3.0 * 0.3)));
    CHECK(b(0.8, 0.3) == doctest::Approx(0.5 + std::sin(3.0 * 1.5 * 0.3)));
    CHECK(p.system.stiffness_field()(0.2, 0.0) == 1.0);
    CHECK(p.system.stiffness_field()(0.8, 0.0) == 2.0);
    CHECK(p.stiffness_lower == 1.0);
    CHECK(p.width == doctest::Approx(1.0 / 16));
}

TEST_CASE("data scaling multiplies initial data and load") {
    Scenario s;
    s.initial.f1 = {"bump", 1.0};
    s.load = {1.0, 0.5, 0.0, false};
    s.mesh.n_elements = 16;
    s.regularization.k_max = 4;
    const RegularizedProblem plain = build_problem(s, 0.25);
    s.diagnostics.data_scale_power = 2.0;
    const RegularizedProblem scaled = build_problem(s, 0.25);
    for (std::size_t i = 0; i < plain.f1.size(); ++i) CHECK(scaled.f1[i] == doctest::Approx(plain.f1[i] / 16.0));
    const auto fp = plain.system.load(0.0), fs_ = scaled.system.load(0.0);
    for (std::size_t i = 0; i < fp.size(); ++i) CHECK(fs_[i] == doctest::Approx(fp[i] / 16.0));
}

TEST_CASE("manufactured solution derivatives") {
    const double d = 1e-5;
    for (double x : {0.1, 0.5, 0.77})
        for (int k = 0; k < 4; ++k)
            CHECK(manufactured_solution(x, 0.3, k + 1) ==
                  doctest::Approx((manufactured_solution(x + d, 0.3, k) - manufactured_solution(x - d, 0.3, k)) / (2 * d))
                      .epsilon(1e-6));
    CHECK(manufactured_solution(0.5, 0.5, 0) == doctest::Approx(0.0625));
}

TEST_CASE("direct problem only for smooth coefficients") {
    Scenario s;
    s.beam.ei2 = 2.0;
    CHECK_THROWS_AS(build_direct_problem(s), std::invalid_argument);
    s.beam.ei2 = 1.0;
    s.load = {1.0, 0.5, 0.0, false};
    const RegularizedProblem p = build_direct_problem(s);
    CHECK(p.system.point_loads().size() == 1);
}
