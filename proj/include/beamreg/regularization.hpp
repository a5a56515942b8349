#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace beamreg {

/// Normalized bump exp(-1/(1-x^2)) on (-1,1), even, unit mass.
///
/// The cumulative distribution (the mollified Heaviside) is tabulated once on
/// a fine grid and read back by cubic Hermite interpolation using the profile
/// itself as derivative data.
class Mollifier {
public:
    Mollifier();

    /// 1 / int_{-1}^{1} exp(-1/(1-x^2)) dx.
    double normalization() const noexcept { return normalization_; }
    double peak() const noexcept { return normalization_ * 0.36787944117144233; }

    double operator()(double x) const noexcept { return derivative(x, 0); }
    /// order-th derivative of the profile, order <= 4.
    double derivative(double x, int order) const;
    /// int_{-1}^{z} profile.
    double cdf(double z) const noexcept;

private:
    double normalization_;
    double table_step_;
    std::vector<double> cdf_table_;
};

const Mollifier& make_mollifier();

/// Mollification width as a function of eps.
struct ScaleRule {
    enum class Kind { Polynomial, Log, SlowScale };
    Kind kind = Kind::Polynomial;
    /// Constant factor on the width; log-type / slow-scale character is unaffected.
    double scale = 1.0;

    /// Polynomial: scale*eps; Log: scale/log(1/eps); SlowScale: scale/log(log(1/eps)+e).
    double width(double eps) const;

    bool operator==(const ScaleRule&) const = default;
};

std::string to_string(ScaleRule::Kind kind);
ScaleRule::Kind parse_rule_kind(const std::string& name);

/// Interval in x where a field varies on the mollification scale.
struct Window {
    double center;
    double half_width;
};

/// One member (fixed eps) of a regularizing net; evaluable with time derivatives.
class RegularizedField {
public:
    /// (x, t, t_order) -> d^t_order/dt^t_order of the field at (x,t).
    using Evaluator = std::function<double(double, double, int)>;

    RegularizedField() : RegularizedField(constant(0.0)) {}
    RegularizedField(double eps, double width, Evaluator f, double sup_norm, bool time_dependent,
                     std::vector<Window> windows = {});

    static RegularizedField constant(double value);

    double operator()(double x, double t) const { return f_(x, t, 0); }
    double value(double x, double t, int t_order = 0) const { return f_(x, t, t_order); }

    double eps() const noexcept { return eps_; }
    double width() const noexcept { return width_; }
    double sup_norm() const noexcept { return sup_norm_; }
    bool time_dependent() const noexcept { return time_dependent_; }
    const std::vector<Window>& windows() const noexcept { return windows_; }

    /// Pointwise bounds known by construction (stiffness fields), if any.
    std::optional<double> lower_bound;
    std::optional<double> upper_bound;

private:
    double eps_;
    double width_;
    Evaluator f_;
    double sup_norm_;
    bool time_dependent_;
    std::vector<Window> windows_;
};

struct HeavisideAtom {
    double location;
    double jump;
};

struct DiracAtom {
    double location;
    double mass;
};

struct PeriodicPart {
    double amplitude;
    double omega;
};

/// Singular coefficient or datum: smooth part plus tagged atoms.
struct CoefficientDescriptor {
    /// (x, t, t_order) -> time derivative of the smooth part; empty means zero.
    std::function<double(double, double, int)> smooth_part;
    /// Convolve the smooth part in x as well; otherwise it is embedded as a constant net.
    bool mollify_smooth = false;
    std::vector<HeavisideAtom> heaviside_atoms;
    std::vector<DiracAtom> dirac_x_atoms;
    std::vector<DiracAtom> dirac_t_atoms;
    std::optional<PeriodicPart> periodic_part;
    std::optional<double> winkler_coefficient;
};

/// Mollify every atom of the descriptor at width rule.width(eps).
/// Throws std::invalid_argument if a spatial window leaves (0,1) or an atom is misplaced.
RegularizedField regularize(const CoefficientDescriptor& desc, double eps, const ScaleRule& rule,
                            double t_final);

/// c_eps(x) = EI1 + (EI2 - EI1) (H * phi_w)(x - x0).
RegularizedField stiffness_field(double ei1, double ei2, double x0, double eps, const ScaleRule& rule);

struct AxialForce {
    enum class Kind { Dirac, Sinusoid };
    double p0 = 0.0;
    double p1 = 0.0;
    Kind kind = Kind::Sinusoid;
    double t0 = 0.0;     // dirac
    double omega = 0.0;  // sinusoid
};

/// b_eps(x,t) = P_eps(R_eps(x) t): axial force and density mollified separately, then composed.
/// A Dirac impulse requires a log or slow-scale rule (HypothesisError otherwise).
RegularizedField axial_force_field(const AxialForce& force, const CoefficientDescriptor& density,
                                   double eps, const ScaleRule& rule, double t_final);

/// g_eps(x,t) = F0 phi_w(x - x1) plus an optional unmollified smooth part.
RegularizedField load_field(double f0, double x1, double eps, const ScaleRule& rule,
                            std::function<double(double, double, int)> smooth_part = {},
                            double t_final = 1.0);

/// eps = 2^-k for k = k_min..k_max (strictly decreasing).
std::vector<double> epsilon_schedule(int k_min, int k_max);

}  // namespace beamreg
