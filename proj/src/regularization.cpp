#include "beamreg/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <numbers>
#include <stdexcept>

#include "beamreg/errors.hpp"
#include "beamreg/fem_space.hpp"

namespace beamreg {

namespace {

constexpr int kCdfIntervals = 4096;

double raw_bump(double x) {
    const double q = 1.0 - x * x;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

// n-th derivative of -1/(1-x^2) = 1/(x^2-1), from its partial fractions.
double log_bump_derivative(double x, int n) {
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return 0.5 * sign * fact * (std::pow(x - 1.0, -(n + 1)) - std::pow(x + 1.0, -(n + 1)));
}

}  // namespace

Mollifier::Mollifier() : table_step_(2.0 / kCdfIntervals) {
    const auto rule = gauss_legendre(12);
    auto panel = [&](double a, double b) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q)
            s += rule.weights[q] * raw_bump(a + (b - a) * rule.points[q]);
        return s * (b - a);
    };
    cdf_table_.assign(kCdfIntervals + 1, 0.0);
    for (int i = 0; i < kCdfIntervals; ++i) {
        const double a = -1.0 + i * table_step_;
        cdf_table_[static_cast<std::size_t>(i) + 1] = cdf_table_[static_cast<std::size_t>(i)] + panel(a, a + table_step_);
    }
    const double mass = cdf_table_.back();
    normalization_ = 1.0 / mass;
    for (double& v : cdf_table_) v *= normalization_;
    cdf_table_.back() = 1.0;
}

double Mollifier::derivative(double x, int order) const {
    if (order < 0 || order > 4) throw std::invalid_argument("Mollifier: derivative order must be in 0..4");
    if (x <= -1.0 || x >= 1.0) return 0.0;
    const double e = normalization_ * raw_bump(x);
    if (order == 0 || e == 0.0) return e;
    const double h1 = log_bump_derivative(x, 1);
    if (order == 1) return h1 * e;
    const double h2 = log_bump_derivative(x, 2);
    if (order == 2) return (h2 + h1 * h1) * e;
    const double h3 = log_bump_derivative(x, 3);
    if (order == 3) return (h3 + 3.0 * h1 * h2 + h1 * h1 * h1) * e;
    const double h4 = log_bump_derivative(x, 4);
    return (h4 + 4.0 * h1 * h3 + 3.0 * h2 * h2 + 6.0 * h1 * h1 * h2 + h1 * h1 * h1 * h1) * e;
}

double Mollifier::cdf(double z) const noexcept {
    if (z <= -1.0) return 0.0;
    if (z >= 1.0) return 1.0;
    const double s = (z + 1.0) / table_step_;
    auto i = static_cast<std::size_t>(s);
    if (i >= static_cast<std::size_t>(kCdfIntervals)) i = kCdfIntervals - 1;
    const double a = -1.0 + static_cast<double>(i) * table_step_;
    const double t = (z - a) / table_step_;
    const auto n = FemSpace::shape(t, 0, table_step_);
    return n[0] * cdf_table_[i] + n[1] * (*this)(a) + n[2] * cdf_table_[i + 1] +
           n[3] * (*this)(a + table_step_);
}

const Mollifier& make_mollifier() {
    static const Mollifier instance;
    return instance;
}

double ScaleRule::width(double eps) const {
    if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("ScaleRule: eps must lie in (0,1]");
    if (!(scale > 0.0)) throw std::invalid_argument("ScaleRule: scale must be positive");
    switch (kind) {
        case Kind::Polynomial: return scale * eps;
        case Kind::Log:
            if (eps >= 1.0) throw std::invalid_argument("ScaleRule: log rule needs eps < 1");
            return scale / std::log(1.0 / eps);
        case Kind::SlowScale: return scale / std::log(std::log(1.0 / eps) + std::numbers::e);
    }
    return scale * eps;
}

std::string to_string(ScaleRule::Kind kind) {
    switch (kind) {
        case ScaleRule::Kind::Polynomial: return "polynomial";
        case ScaleRule::Kind::Log: return "log";
        case ScaleRule::Kind::SlowScale: return "slow_scale";
    }
    return "polynomial";
}

ScaleRule::Kind parse_rule_kind(const std::string& name) {
    if (name == "polynomial") return ScaleRule::Kind::Polynomial;
    if (name == "log") return ScaleRule::Kind::Log;
    if (name == "slow_scale") return ScaleRule::Kind::SlowScale;
    throw std::invalid_argument("unknown regularization rule '" + name + "'");
}

RegularizedField::RegularizedField(double eps, double width, Evaluator f, double sup_norm,
                                   bool time_dependent, std::vector<Window> windows)
    : eps_(eps), width_(width), f_(std::move(f)), sup_norm_(sup_norm),
      time_dependent_(time_dependent), windows_(std::move(windows)) {}

RegularizedField RegularizedField::constant(double value) {
    RegularizedField f(1.0, 0.0, [value](double, double, int order) { return order == 0 ? value : 0.0; },
                       std::abs(value), false);
    f.lower_bound = value;
    f.upper_bound = value;
    return f;
}

namespace {

void require_interior_window(double center, double w, const char* what) {
    if (!(center - w > 0.0 && center + w < 1.0))
        throw std::invalid_argument(std::string(what) + ": mollification window [" +
                                    std::to_string(center - w) + ", " + std::to_string(center + w) +
                                    "] leaves (0,1); shrink eps or move the atom");
}

// d^order/dt^order of a scaled bump P1 phi_w(s - s0).
double scaled_bump(const Mollifier& phi, double mass, double s, double s0, double w, int order) {
    const double z = (s - s0) / w;
    if (z <= -1.0 || z >= 1.0) return 0.0;
    return mass * phi.derivative(z, order) / std::pow(w, order + 1);
}

double sample_sup(const RegularizedField::Evaluator& f, double t_final, std::span<const double> extra_x,
                  std::span<const double> extra_t) {
    constexpr int nx = 400;
    constexpr int nt = 200;
    std::vector<double> xs, ts;
    for (int i = 0; i <= nx; ++i) xs.push_back(static_cast<double>(i) / nx);
    for (int j = 0; j <= nt; ++j) ts.push_back(t_final * j / nt);
    xs.insert(xs.end(), extra_x.begin(), extra_x.end());
    ts.insert(ts.end(), extra_t.begin(), extra_t.end());
    double sup = 0.0;
    for (double x : xs)
        for (double t : ts) sup = std::max(sup, std::abs(f(x, t, 0)));
    return sup;
}

}  // namespace

RegularizedField regularize(const CoefficientDescriptor& desc, double eps, const ScaleRule& rule,
                            double t_final) {
    const double w = rule.width(eps);
    const Mollifier& phi = make_mollifier();
    std::vector<Window> windows;
    std::vector<double> extra_x, extra_t;
    for (const auto& a : desc.heaviside_atoms) {
        if (a.jump == 0.0) continue;
        require_interior_window(a.location, w, "heaviside atom");
        windows.push_back({a.location, w});
        extra_x.push_back(a.location);
    }
    for (const auto& a : desc.dirac_x_atoms) {
        if (a.mass == 0.0) continue;
        require_interior_window(a.location, w, "dirac atom in x");
        windows.push_back({a.location, w});
        extra_x.push_back(a.location);
    }
    for (const auto& a : desc.dirac_t_atoms) {
        if (a.mass == 0.0) continue;
        if (!(a.location > 0.0 && a.location < t_final))
            throw std::invalid_argument("dirac atom in t: t0 must lie in (0,T)");
        extra_t.push_back(a.location);
    }

    // Gauss rule for the x-convolution of a smooth part, nodes on (-1,1).
    const auto conv_rule = gauss_legendre(48);

    auto f = [desc, w, conv_rule, &phi](double x, double t, int order) {
        double v = 0.0;
        if (desc.smooth_part) {
            if (desc.mollify_smooth) {
                double s = 0.0;
                for (std::size_t q = 0; q < conv_rule.points.size(); ++q) {
                    const double y = 2.0 * conv_rule.points[q] - 1.0;
                    s += 2.0 * conv_rule.weights[q] * phi(y) * desc.smooth_part(x - w * y, t, order);
                }
                v += s;
            } else {
                v += desc.smooth_part(x, t, order);
            }
        }
        if (order == 0) {
            for (const auto& a : desc.heaviside_atoms) v += a.jump * phi.cdf((x - a.location) / w);
            for (const auto& a : desc.dirac_x_atoms) v += scaled_bump(phi, a.mass, x, a.location, w, 0);
        }
        for (const auto& a : desc.dirac_t_atoms) v += scaled_bump(phi, a.mass, t, a.location, w, order);
        if (desc.periodic_part) {
            const auto& p = *desc.periodic_part;
            v += p.amplitude * std::pow(p.omega, order) *
                 std::sin(p.omega * t + order * std::numbers::pi / 2.0);
        }
        return v;
    };
    const bool time_dependent = !desc.dirac_t_atoms.empty() || desc.periodic_part.has_value() ||
                                static_cast<bool>(desc.smooth_part);
    const double sup = sample_sup(f, t_final, extra_x, extra_t);
    return RegularizedField(eps, w, f, sup, time_dependent, std::move(windows));
}

RegularizedField stiffness_field(double ei1, double ei2, double x0, double eps, const ScaleRule& rule) {
    if (!(ei1 > 0.0 && ei2 > 0.0)) throw HypothesisError("stiffness_field: EI1 and EI2 must be positive");
    const double w = rule.width(eps);
    std::vector<Window> windows;
    if (ei1 != ei2) {
        require_interior_window(x0, w, "stiffness_field");
        windows.push_back({x0, w});
    }
    const Mollifier& phi = make_mollifier();
    const double jump = ei2 - ei1;
    auto f = [ei1, jump, x0, w, &phi](double x, double, int order) {
        if (order > 0) return 0.0;
        return ei1 + jump * phi.cdf((x - x0) / w);
    };
    RegularizedField field(eps, w, f, std::max(ei1, ei2), false, std::move(windows));
    field.lower_bound = std::min(ei1, ei2);
    field.upper_bound = std::max(ei1, ei2);
    return field;
}

RegularizedField axial_force_field(const AxialForce& force, const CoefficientDescriptor& density,
                                   double eps, const ScaleRule& rule, double t_final) {
    const bool impulsive = force.kind == AxialForce::Kind::Dirac && force.p1 != 0.0;
    if (impulsive && rule.kind == ScaleRule::Kind::Polynomial)
        throw HypothesisError(
            "axial_force_field: a Dirac impulse in the axial force needs a log-type regularization "
            "(rule 'log' or 'slow_scale'); the polynomial rule is not of L-infinity log-type");
    if (impulsive && !(force.t0 > 0.0 && force.t0 < t_final))
        throw std::invalid_argument("axial_force_field: t0 must lie in (0,T)");
    const double w = rule.width(eps);

    CoefficientDescriptor r_desc = density;
    r_desc.dirac_t_atoms.clear();
    r_desc.periodic_part.reset();
    const RegularizedField r_field = regularize(r_desc, eps, rule, t_final);

    double r_min = std::numeric_limits<double>::infinity();
    double r_max = -r_min;
    for (int i = 0; i <= 2000; ++i) {
        const double r = r_field(i / 2000.0, 0.0);
        r_min = std::min(r_min, r);
        r_max = std::max(r_max, r);
    }
    if (!(r_min > 0.0)) throw HypothesisError("axial_force_field: density must stay positive");

    const Mollifier& phi = make_mollifier();
    // d^j/ds^j P_eps(s)
    auto pulse = [force, w, &phi](double s, int order) {
        double v = order == 0 ? force.p0 : 0.0;
        if (force.kind == AxialForce::Kind::Dirac) {
            if (force.p1 != 0.0) v += scaled_bump(phi, force.p1, s, force.t0, w, order);
        } else {
            v += force.p1 * std::pow(force.omega, order) *
                 std::sin(force.omega * s + order * std::numbers::pi / 2.0);
        }
        return v;
    };
    auto f = [pulse, r_field](double x, double t, int order) {
        const double r = r_field(x, 0.0);
        return pulse(r * t, order) * std::pow(r, order);
    };

    // s = R(x) t sweeps [0, r_max T]; sample densely, including the pulse centre.
    const double s_max = r_max * t_final;
    constexpr int ns = 200000;
    double sup = 0.0;
    for (int i = 0; i <= ns; ++i) sup = std::max(sup, std::abs(pulse(s_max * i / ns, 0)));
    if (impulsive && force.t0 <= s_max) sup = std::max(sup, std::abs(pulse(force.t0, 0)));

    const bool time_dependent = force.p1 != 0.0;
    RegularizedField field(eps, w, f, sup, time_dependent, r_field.windows());
    return field;
}

RegularizedField load_field(double f0, double x1, double eps, const ScaleRule& rule,
                            std::function<double(double, double, int)> smooth_part, double t_final) {
    CoefficientDescriptor desc;
    desc.smooth_part = std::move(smooth_part);
    if (f0 != 0.0) desc.dirac_x_atoms.push_back({x1, f0});
    return regularize(desc, eps, rule, t_final);
}

std::vector<double> epsilon_schedule(int k_min, int k_max) {
    if (k_min < 0 || k_max < k_min)
        throw std::invalid_argument("epsilon_schedule: need 0 <= k_min <= k_max");
    std::vector<double> s;
    for (int k = k_min; k <= k_max; ++k) s.push_back(std::ldexp(1.0, -k));
    return s;
}

}  // namespace beamreg
