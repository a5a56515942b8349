#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "beamreg/assembly.hpp"
#include "beamreg/newmark.hpp"

namespace beamreg {

/// Ehrling constant for delta = 1/2 on the clamped space: |u|_1^2 <= |u|_2^2/2 + (5/8)|u|^2.
inline constexpr double kEhrlingConstant = 5.0 / 8.0;
/// Inflation applied to the sampled sup norm of b before it enters the ledger.
inline constexpr double kSupInflation = 1.05;

/// Constants of the a-priori estimate
///   |u(t)|_2^2 + |u'(t)|^2 <= (D_T |f1|_2^2 + |f2|^2 + int_0^t |g|^2) exp(t F_T).
struct ConstantsLedger {
    double c = 0.0;       // sup of the stiffness
    double c0_bound = 0.0;  // C0 (zero: time-independent stiffness)
    double c1 = 0.0;      // 1.05 * sup |b| + Winkler coefficient
    double alpha = 0.0;   // c0 / 2
    double lambda = 0.0;  // C_{1/2} c0
    double beta_min = 0.0;
    double d_t = 0.0;
    double f_t = 0.0;
    double t_final = 0.0;
    double stiffness_lower = 0.0;  // c0
};

/// Throws HypothesisError unless c0 > 0.
ConstantsLedger constants(const RegularizedField& c, const RegularizedField& b, double c0,
                          double t_final, double winkler = 0.0);

/// |u_k|_2^2 + |v_k|^2.
double phi(const Trajectory& trajectory, const FemSpace& space, std::size_t k);

/// (D_T f1_h2_sq + f2_l2_sq + load_integral) exp(t F_T).
double gronwall_bound(const ConstantsLedger& ledger, double f1_h2_sq, double f2_l2_sq,
                      double load_integral, double t);

/// int_0^1 g(x,t)^2 dx.
double load_norm_sq(const FemSpace& space, const RegularizedField& g, double t);

struct EnergyIdentity {
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> residual;
    double sup_residual = 0.0;
};

/// |v|^2 + a0(u,u) against its value at 0 plus the time integrals of
/// -2 a1(u,v) + 2 <F, v> (trapezoid in time); a1 includes the Winkler term.
EnergyIdentity check_energy_identity(const Trajectory& trajectory, const SystemMatrices& system);

struct EnergyReport {
    ConstantsLedger ledger;
    std::vector<double> times;
    std::vector<double> phi;
    std::vector<double> bound;
    std::vector<double> residual;
    std::vector<double> margin;
};

/// Φ, the Gronwall bound and the identity residual along a regularized trajectory.
/// Requires a system without unmollified point loads.
EnergyReport energy_report(const Trajectory& trajectory, const SystemMatrices& system,
                           const ConstantsLedger& ledger);

struct BoundVerdict {
    bool passed = true;
    double min_margin = 0.0;
    std::size_t worst_index = 0;
};

/// Pass iff phi_k <= bound_k (1 + 1e-6) + 1e-12 for all k.
BoundVerdict verify_bound(const EnergyReport& report);

/// Discrete form of |u(t)|^2 <= (1+t)(|u0|_2^2 + int_0^t |u'|^2): largest ratio lhs/rhs over k.
double auxiliary_inequality_ratio(const Trajectory& trajectory, const FemSpace& space);

nlohmann::json to_json(const ConstantsLedger& ledger);
nlohmann::json to_json(const EnergyReport& report);

}  // namespace beamreg
