#include "beamreg/newmark.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "beamreg/errors.hpp"

namespace beamreg {

std::size_t NewmarkParams::steps() const {
    if (!(dt > 0.0) || !(t_final > 0.0)) throw std::invalid_argument("Newmark: dt and T must be positive");
    if (beta < 0.25 || beta > 0.5) throw std::invalid_argument("Newmark: beta must lie in [1/4, 1/2]");
    if (gamma != 0.5) throw std::invalid_argument("Newmark: gamma must be 1/2");
    const double n = std::round(t_final / dt);
    if (n < 1.0 || std::abs(n * dt - t_final) > 1e-9 * t_final)
        throw std::invalid_argument("Newmark: dt must divide T");
    return static_cast<std::size_t>(n);
}

namespace {

bool all_finite(const Vector& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

Trajectory solve_ivp(const SystemMatrices& system, const CoefVector& u0, const CoefVector& v0,
                     const NewmarkParams& params, const Forcing& forcing) {
    const std::size_t n_steps = params.steps();
    const std::size_t n = system.space().n_dofs();
    if (u0.size() != n || v0.size() != n) throw std::invalid_argument("solve_ivp: initial data size mismatch");
    const double dt = params.dt;
    const double beta = params.beta;
    const double gamma = params.gamma;
    auto rhs_at = [&](std::size_t k, double t) { return forcing ? forcing(k, t) : system.load(t); };

    Trajectory tr;
    tr.times.reserve(n_steps + 1);
    tr.u.reserve(n_steps + 1);
    tr.v.reserve(n_steps + 1);
    tr.a.reserve(n_steps + 1);

    Vector a0;
    {
        Vector r = rhs_at(0, 0.0);
        const auto ku = system.operator_matrix(0.0).matvec(u0);
        for (std::size_t i = 0; i < n; ++i) r[i] -= ku[i];
        try {
            a0 = band_lu(system.mass()).solve(r);
        } catch (const SingularMatrixError& e) {
            throw SolveError(std::string("solve_ivp: singular mass matrix: ") + e.what(), 0);
        }
    }
    tr.times.push_back(0.0);
    tr.u.push_back(u0);
    tr.v.push_back(v0);
    tr.a.push_back(std::move(a0));

    const bool time_dependent = system.operator_time_dependent();
    BandedMatrix k_static;
    BandedLU lu_static;
    auto factor = [&](const BandedMatrix& k, std::size_t step) {
        BandedMatrix s = system.mass();
        s.axpy(beta * dt * dt, k);
        try {
            return band_lu(s);
        } catch (const SingularMatrixError& e) {
            throw SolveError("solve_ivp: singular effective matrix at step " + std::to_string(step) +
                                 ": " + e.what(),
                             step);
        }
    };
    if (!time_dependent) {
        k_static = system.operator_matrix(0.0);
        lu_static = factor(k_static, 1);
    }

    Vector u_pred(n), v_pred(n);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t1 = static_cast<double>(k + 1) * dt;
        const auto& u = tr.u.back();
        const auto& v = tr.v.back();
        const auto& a = tr.a.back();
        for (std::size_t i = 0; i < n; ++i) {
            u_pred[i] = u[i] + dt * v[i] + dt * dt * (0.5 - beta) * a[i];
            v_pred[i] = v[i] + dt * (1.0 - gamma) * a[i];
        }
        Vector rhs = rhs_at(k + 1, t1);
        Vector a1;
        if (time_dependent) {
            const BandedMatrix k1 = system.operator_matrix(t1);
            const auto ku = k1.matvec(u_pred);
            for (std::size_t i = 0; i < n; ++i) rhs[i] -= ku[i];
            a1 = factor(k1, k + 1).solve(rhs);
        } else {
            const auto ku = k_static.matvec(u_pred);
            for (std::size_t i = 0; i < n; ++i) rhs[i] -= ku[i];
            a1 = lu_static.solve(rhs);
        }
        Vector u1(n), v1(n);
        for (std::size_t i = 0; i < n; ++i) {
            u1[i] = u_pred[i] + beta * dt * dt * a1[i];
            v1[i] = v_pred[i] + gamma * dt * a1[i];
        }
        if (!all_finite(a1) || !all_finite(u1) || !all_finite(v1))
            throw SolveError("solve_ivp: non-finite state at step " + std::to_string(k + 1) + " (t = " +
                                 std::to_string(t1) + "); axial force too destabilizing for this dt",
                             k + 1);
        tr.times.push_back(t1);
        tr.u.push_back(std::move(u1));
        tr.v.push_back(std::move(v1));
        tr.a.push_back(std::move(a1));
    }
    return tr;
}

std::vector<Trajectory> time_derivative_cascade(const SystemMatrices& system, const Trajectory& base,
                                                const NewmarkParams& params, int max_order) {
    if (max_order < 0) throw std::invalid_argument("time_derivative_cascade: negative order");
    std::vector<Trajectory> levels;
    levels.push_back(base);
    const std::size_t n = system.space().n_dofs();
    const bool axial_varies = system.operator_time_dependent();
    for (int l = 1; l <= max_order; ++l) {
        auto forcing = [&, l](std::size_t k, double t) {
            Vector f = system.load(t, l);
            if (!axial_varies) return f;
            double binom = 1.0;
            for (int j = 1; j <= l; ++j) {
                binom = binom * (l - j + 1) / j;
                const auto kb = system.axial(t, j).matvec(levels[static_cast<std::size_t>(l - j)].u[k]);
                for (std::size_t i = 0; i < n; ++i) f[i] -= binom * kb[i];
            }
            return f;
        };
        const auto& prev = levels.back();
        Trajectory next = solve_ivp(system, prev.v.front(), prev.a.front(), params, forcing);
        levels.push_back(std::move(next));
    }
    return levels;
}

void write_trajectory_csv(std::ostream& out, const FemSpace& space, const Trajectory& trajectory,
                          int x_points, int time_stride) {
    if (x_points < 2 || time_stride < 1) throw std::invalid_argument("write_trajectory_csv: bad sampling");
    out << "t,x,u,ut,uxx\n";
    char buf[160];
    for (std::size_t k = 0; k < trajectory.size(); k += static_cast<std::size_t>(time_stride)) {
        for (int i = 0; i < x_points; ++i) {
            const double x = i == x_points - 1 ? 1.0 : static_cast<double>(i) / (x_points - 1);
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g,%.17g,%.17g\n", trajectory.times[k], x,
                          eval(space, trajectory.u[k], x, 0), eval(space, trajectory.v[k], x, 0),
                          eval(space, trajectory.u[k], x, 2));
            out << buf;
        }
    }
}

}  // namespace beamreg
