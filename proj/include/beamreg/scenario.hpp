#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "beamreg/assembly.hpp"
#include "beamreg/energy.hpp"
#include "beamreg/newmark.hpp"
#include "beamreg/regularization.hpp"

namespace beamreg {

/// Named clamped initial profile: zero, hermite_poly = A x^2(1-x)^2, bump = A sin^2(pi x).
struct Profile {
    std::string name = "zero";
    double amplitude = 1.0;

    double value(double x) const;
    double slope(double x) const;

    bool operator==(const Profile&) const = default;
};

/// Physical model in standard form: c = A(x), b(x,t) = P(R(x) t), g = F0 delta(x - x1).
struct Scenario {
    std::string name = "scenario";
    struct Beam {
        double ei1 = 1.0, ei2 = 1.0, x0 = 0.5, r_left = 1.0, r_jump = 0.0;
        bool operator==(const Beam&) const = default;
    } beam;
    struct Axial {
        double p0 = 0.0, p1 = 0.0;
        std::string kind = "sinusoid";  // "dirac" | "sinusoid"
        double t0 = 0.5;
        double omega = 0.0;
        bool operator==(const Axial&) const = default;
    } axial;
    struct Load {
        double f0 = 0.0, x1 = 0.5, winkler = 0.0;
        /// Forcing of u* = sin(pi t) x^2 (1-x)^2; overrides the initial profiles.
        bool manufactured = false;
        bool operator==(const Load&) const = default;
    } load;
    struct Initial {
        Profile f1, f2;
        bool operator==(const Initial&) const = default;
    } initial;
    struct Time {
        double t_final = 1.0, dt = 1e-3;
        bool operator==(const Time&) const = default;
    } time;
    struct Mesh {
        int n_elements = 64, q_pts = 5;
        bool operator==(const Mesh&) const = default;
    } mesh;
    struct Regularization {
        ScaleRule rule;
        int k_min = 1, k_max = 10;
        bool operator==(const Regularization&) const = default;
    } regularization;
    struct Diagnostics {
        int l_max = 3;
        /// Data (f1, f2, g) multiplied by eps^power; 0 leaves the data untouched.
        double data_scale_power = 0.0;
        int csv_x_points = 101;
        int csv_time_stride = 10;
        bool operator==(const Diagnostics&) const = default;
    } diagnostics;

    bool operator==(const Scenario&) const = default;

    AxialForce axial_force() const;
    CoefficientDescriptor density() const;
    std::vector<double> schedule() const;
    bool has_spatial_atoms() const;
    bool has_axial_impulse() const;
};

/// Parse and validate. Schema violations name the offending field. Resolution
/// rules (h <= w(eps_min)/4 with spatial atoms, dt <= w(eps_min)/8 with an axial
/// impulse) produce warnings, or errors when `strict`.
Scenario parse_scenario(const nlohmann::json& doc, bool strict = false,
                        std::vector<std::string>* warnings = nullptr);
Scenario parse_scenario_file(const std::filesystem::path& path, bool strict = false,
                             std::vector<std::string>* warnings = nullptr);

nlohmann::json emit_scenario(const Scenario& scenario);

/// Range and hypothesis checks; returns resolution warnings.
std::vector<std::string> validate_scenario(const Scenario& scenario, bool strict = false);

/// The eps-regularized initial-boundary value problem of a scenario.
struct RegularizedProblem {
    double eps = 0.0;
    double width = 0.0;
    SystemMatrices system;
    CoefVector f1, f2;
    NewmarkParams params;
    double stiffness_lower = 0.0;
    ConstantsLedger ledger;
};

RegularizedProblem build_problem(const Scenario& scenario, double eps);

/// Same problem with unmollified coefficients and exact point loads; only for
/// scenarios whose coefficients are already smooth.
RegularizedProblem build_direct_problem(const Scenario& scenario);

/// u*(x,t) = sin(pi t) x^2 (1-x)^2 and its x-derivatives.
double manufactured_solution(double x, double t, int x_deriv = 0);

}  // namespace beamreg
