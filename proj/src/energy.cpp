#include "beamreg/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "beamreg/errors.hpp"

namespace beamreg {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double h2_sq(const FemSpace& space, std::span<const double> u) {
    const auto sq = derivative_norms_sq(space, u);
    return sq[0] + sq[1] + sq[2];
}

}  // namespace

ConstantsLedger constants(const RegularizedField& c, const RegularizedField& b, double c0,
                          double t_final, double winkler) {
    if (!(c0 > 0.0)) throw HypothesisError("constants: stiffness lower bound c0 must be positive");
    if (!(t_final > 0.0)) throw std::invalid_argument("constants: T must be positive");
    ConstantsLedger l;
    l.c = c.sup_norm();
    l.c0_bound = 0.0;
    l.c1 = kSupInflation * b.sup_norm() + winkler;
    l.alpha = c0 / 2.0;
    l.lambda = kEhrlingConstant * c0;
    l.beta_min = std::min(l.alpha, 1.0);
    l.d_t = (l.c + l.lambda * (1.0 + t_final)) / l.beta_min;
    l.f_t = std::max(l.c0_bound + l.c1, l.c1 + t_final + 2.0) / l.beta_min;
    l.t_final = t_final;
    l.stiffness_lower = c0;
    return l;
}

double phi(const Trajectory& trajectory, const FemSpace& space, std::size_t k) {
    const double v = norm(space, trajectory.v.at(k), NormKind::L2);
    return h2_sq(space, trajectory.u.at(k)) + v * v;
}

double gronwall_bound(const ConstantsLedger& ledger, double f1_h2_sq, double f2_l2_sq,
                      double load_integral, double t) {
    return (ledger.d_t * f1_h2_sq + f2_l2_sq + load_integral) * std::exp(t * ledger.f_t);
}

double load_norm_sq(const FemSpace& space, const RegularizedField& g, double t) {
    double s = 0.0;
    for (int e = 0; e < space.n_elements(); ++e)
        for (const auto& qp : element_quadrature(space, e, g.windows())) {
            const double v = g(space.node(e) + qp.xi * space.h(), t);
            s += qp.weight * v * v;
        }
    return s;
}

EnergyIdentity check_energy_identity(const Trajectory& trajectory, const SystemMatrices& system) {
    EnergyIdentity out;
    const std::size_t n = trajectory.size();
    const auto& m = system.mass();
    const auto& kc = system.bending();
    auto lhs_at = [&](std::size_t k) {
        return dot(trajectory.v[k], m.matvec(trajectory.v[k])) +
               dot(trajectory.u[k], kc.matvec(trajectory.u[k]));
    };
    auto power_at = [&](std::size_t k) {
        const double t = trajectory.times[k];
        BandedMatrix a1 = system.axial(t);
        if (system.winkler_coefficient() != 0.0) a1.axpy(1.0, system.winkler());
        const auto& v = trajectory.v[k];
        return -2.0 * dot(v, a1.matvec(trajectory.u[k])) + 2.0 * dot(v, system.load(t));
    };
    const double lhs0 = lhs_at(0);
    double integral = 0.0;
    double prev_power = n > 0 ? power_at(0) : 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            const double p = power_at(k);
            integral += 0.5 * (trajectory.times[k] - trajectory.times[k - 1]) * (prev_power + p);
            prev_power = p;
        }
        const double lhs = k == 0 ? lhs0 : lhs_at(k);
        const double rhs = lhs0 + integral;
        out.lhs.push_back(lhs);
        out.rhs.push_back(rhs);
        out.residual.push_back(std::abs(lhs - rhs));
        out.sup_residual = std::max(out.sup_residual, out.residual.back());
    }
    return out;
}

EnergyReport energy_report(const Trajectory& trajectory, const SystemMatrices& system,
                           const ConstantsLedger& ledger) {
    if (!system.point_loads().empty())
        throw std::invalid_argument("energy_report: unmollified point loads have no L2 norm");
    const auto& space = system.space();
    EnergyReport r;
    r.ledger = ledger;
    const double f1 = h2_sq(space, trajectory.u.front());
    const double f2n = norm(space, trajectory.v.front(), NormKind::L2);
    const double f2 = f2n * f2n;
    const auto identity = check_energy_identity(trajectory, system);
    const auto& g = system.load_field();
    double load_integral = 0.0;
    double prev = load_norm_sq(space, g, 0.0);
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        const double t = trajectory.times[k];
        if (k > 0) {
            const double cur = g.time_dependent() ? load_norm_sq(space, g, t) : prev;
            load_integral += 0.5 * (t - trajectory.times[k - 1]) * (prev + cur);
            prev = cur;
        }
        const double p = phi(trajectory, space, k);
        const double b = gronwall_bound(ledger, f1, f2, load_integral, t);
        r.times.push_back(t);
        r.phi.push_back(p);
        r.bound.push_back(b);
        r.residual.push_back(identity.residual[k]);
        r.margin.push_back(b - p);
    }
    return r;
}

BoundVerdict verify_bound(const EnergyReport& report) {
    BoundVerdict v;
    v.min_margin = report.margin.empty() ? 0.0 : report.margin.front();
    for (std::size_t k = 0; k < report.phi.size(); ++k) {
        if (report.margin[k] < v.min_margin) {
            v.min_margin = report.margin[k];
            v.worst_index = k;
        }
        if (!(report.phi[k] <= report.bound[k] * (1.0 + 1e-6) + 1e-12)) v.passed = false;
    }
    return v;
}

double auxiliary_inequality_ratio(const Trajectory& trajectory, const FemSpace& space) {
    const double u0 = h2_sq(space, trajectory.u.front());
    double integral = 0.0;
    double prev = std::pow(norm(space, trajectory.v.front(), NormKind::L2), 2);
    double worst = 0.0;
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        const double t = trajectory.times[k];
        if (k > 0) {
            const double cur = std::pow(norm(space, trajectory.v[k], NormKind::L2), 2);
            integral += 0.5 * (t - trajectory.times[k - 1]) * (prev + cur);
            prev = cur;
        }
        const double lhs = std::pow(norm(space, trajectory.u[k], NormKind::L2), 2);
        const double rhs = (1.0 + t) * (u0 + integral);
        if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
        else if (lhs > 0.0) worst = std::numeric_limits<double>::infinity();
    }
    return worst;
}

nlohmann::json to_json(const ConstantsLedger& l) {
    return {{"C", l.c},         {"C0", l.c0_bound}, {"C1", l.c1},   {"alpha", l.alpha},
            {"lambda", l.lambda}, {"C_half", kEhrlingConstant},     {"beta_min", l.beta_min},
            {"D_T", l.d_t},     {"F_T", l.f_t},     {"T", l.t_final}, {"c0", l.stiffness_lower}};
}

nlohmann::json to_json(const EnergyReport& r) {
    return {{"ledger", to_json(r.ledger)}, {"t", r.times},         {"phi", r.phi},
            {"bound", r.bound},           {"residual", r.residual}, {"margins", r.margin}};
}

}  // namespace beamreg
