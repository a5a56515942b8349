#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "beamreg/assembly.hpp"
#include "beamreg/fem_space.hpp"

namespace beamreg {

struct NewmarkParams {
    double beta = 0.25;
    double gamma = 0.5;
    double dt = 1e-3;
    double t_final = 1.0;

    /// Number of steps; throws std::invalid_argument unless dt divides T and beta, gamma are admissible.
    std::size_t steps() const;
};

/// Displacement, velocity and acceleration coefficient vectors at t_k = k dt.
struct Trajectory {
    std::vector<double> times;
    std::vector<CoefVector> u;
    std::vector<CoefVector> v;
    std::vector<CoefVector> a;

    std::size_t size() const noexcept { return times.size(); }
};

/// Right-hand side at step k (time t_k); defaults to the system load vector.
using Forcing = std::function<Vector(std::size_t, double)>;

/// Newmark integration of M u'' + K(t) u = F(t) with u(0) = u0, u'(0) = v0.
///
/// Every stored acceleration satisfies M a_k = F(t_k) - K(t_k) u_k. Throws
/// SolveError naming the step when the step matrix is singular or the state
/// stops being finite.
Trajectory solve_ivp(const SystemMatrices& system, const CoefVector& u0, const CoefVector& v0,
                     const NewmarkParams& params, const Forcing& forcing = {});

/// Trajectories of d^l u / dt^l for l = 0..max_order (index 0 is `base`).
///
/// Level l solves the same operator with data (level l-1 velocity at 0,
/// level l-1 acceleration at 0) and right-hand side
/// F^(l)(t) - sum_{j=1..l} binom(l,j) K_b^(j)(t) W_{l-j}(t).
std::vector<Trajectory> time_derivative_cascade(const SystemMatrices& system, const Trajectory& base,
                                                const NewmarkParams& params, int max_order);

/// CSV with header `t,x,u,ut,uxx` on a uniform x grid, every `time_stride`-th step.
void write_trajectory_csv(std::ostream& out, const FemSpace& space, const Trajectory& trajectory,
                          int x_points = 101, int time_stride = 10);

}  // namespace beamreg
