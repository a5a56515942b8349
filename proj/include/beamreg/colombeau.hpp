#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "beamreg/energy.hpp"
#include "beamreg/newmark.hpp"
#include "beamreg/scenario.hpp"

namespace beamreg {

/// Norms below this are treated as numerically zero.
inline constexpr double kNullThreshold = 1e-12;

/// Least-squares slope p of log(norm) against log(1/eps), plus consecutive local slopes.
struct ExponentFit {
    int l = 0;
    int k = 0;
    std::optional<double> slope;  // empty when every norm is numerically zero
    std::vector<double> local_slopes;
    std::string status;  // "moderate" | "null" | "diverging" | "non-finite"
};

ExponentFit moderateness_exponent(const std::vector<double>& eps, const std::vector<double>& norms);

struct SweepOptions {
    int l_max = 3;
    /// Keep every base displacement trajectory (needed by association_test).
    bool keep_solutions = false;
    /// Worker cap; 0 reads BEAMREG_THREADS, else hardware concurrency.
    int threads = 0;
};

struct SweepReport {
    std::string scenario;
    int l_max = 0;
    std::vector<double> schedule;
    std::vector<double> widths;
    std::vector<double> b_sup;
    /// norms[e][l][k] = |d_t^l d_x^k u_eps|_{L2(X_T)}.
    std::vector<std::vector<std::array<double, 3>>> norms;
    std::vector<ExponentFit> exponents;
    std::vector<ConstantsLedger> ledgers;
    std::vector<std::vector<CoefVector>> solutions;
    std::vector<double> times;
    std::vector<std::string> warnings;

    double norm(std::size_t eps_index, int l, int k) const { return norms[eps_index][static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]; }
    const ExponentFit& exponent(int l, int k) const;
};

/// Solve every eps of the schedule (default: the scenario's) with the derivative cascade.
/// Throws std::runtime_error naming the eps of the first failing solve.
SweepReport sweep(const Scenario& scenario, const SweepOptions& options = {},
                  std::optional<std::vector<double>> schedule = std::nullopt);

/// |d_x^k w|_{L2(X_T)} for a trajectory of coefficient vectors (trapezoid in t).
double space_time_norm(const FemSpace& space, const std::vector<double>& times,
                       const std::vector<CoefVector>& states, int x_deriv = 0);

/// Pass iff every (0,0) norm is <= kNullThreshold.
bool null_test(const SweepReport& report);

struct AssociationTable {
    std::vector<double> consecutive;  // |u_{eps_j} - u_{eps_{j+1}}|
    std::vector<double> to_finest;    // |u_{eps_j} - u_{eps_min}|, j < last
    std::vector<double> to_reference; // |u_{eps_j} - u_ref| when a reference is given
    bool cauchy = false;              // consecutive differences decrease over the final three entries
};

AssociationTable association_test(const SweepReport& report, const FemSpace& space,
                                  const std::vector<CoefVector>* reference = nullptr);

struct GInfinityResult {
    double spread = 0.0;
    double min_exponent = 0.0;
    double max_exponent = 0.0;
    bool passed = false;  // spread <= 1
};

GInfinityResult g_infinity_test(const SweepReport& report);

struct BootstrapReport {
    double eps = 0.0;
    std::vector<double> times;
    std::vector<double> e;
    std::vector<double> d;
    double residual_l2 = 0.0;
    double reference_l2 = 0.0;  // |c u''|_{L2(X_T)}
    double relative_residual() const { return reference_l2 > 0.0 ? residual_l2 / reference_l2 : residual_l2; }
};

/// Reconstruct c u'' = e(t) + d(t) x + int_0^x int_0^y h, h = g - c_w u - b u'' - u_tt,
/// from a trajectory (accelerations from the stored Newmark states) on every
/// `time_stride`-th step.
BootstrapReport bootstrap_check(const Trajectory& trajectory, const SystemMatrices& system,
                                int time_stride = 1);

struct SlowScaleResult {
    bool passed = false;
    /// max_j values_j^p eps_j / (values_0^p eps_0) for p = 1..5.
    std::array<double, 5> growth{};
    /// values^p eps non-increasing over the last three entries, for p = 1..5.
    std::array<bool, 5> tail_decreasing{};
};

/// Desk-scale slow-scale test over a decreasing schedule.
SlowScaleResult slow_scale_check(const std::vector<double>& eps, const std::vector<double>& values);

nlohmann::json to_json(const SweepReport& report);
nlohmann::json to_json(const BootstrapReport& report);
/// Problems found in a serialized sweep report; empty when it conforms.
std::vector<std::string> validate_sweep_report(const nlohmann::json& doc);
void write_norms_csv(std::ostream& out, const SweepReport& report);

}  // namespace beamreg
