#include "beamreg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "beamreg/errors.hpp"

namespace beamreg {

using nlohmann::json;

double Profile::value(double x) const {
    if (name == "zero") return 0.0;
    if (name == "hermite_poly") return amplitude * x * x * (1.0 - x) * (1.0 - x);
    if (name == "bump") {
        const double s = std::sin(std::numbers::pi * x);
        return amplitude * s * s;
    }
    throw std::invalid_argument("unknown initial profile '" + name + "'");
}

double Profile::slope(double x) const {
    if (name == "zero") return 0.0;
    if (name == "hermite_poly") return amplitude * 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
    if (name == "bump") return amplitude * std::numbers::pi * std::sin(2.0 * std::numbers::pi * x);
    throw std::invalid_argument("unknown initial profile '" + name + "'");
}

AxialForce Scenario::axial_force() const {
    AxialForce f;
    f.p0 = axial.p0;
    f.p1 = axial.p1;
    f.kind = axial.kind == "dirac" ? AxialForce::Kind::Dirac : AxialForce::Kind::Sinusoid;
    f.t0 = axial.t0;
    f.omega = axial.omega;
    return f;
}

CoefficientDescriptor Scenario::density() const {
    CoefficientDescriptor d;
    const double r0 = beam.r_left;
    d.smooth_part = [r0](double, double, int order) { return order == 0 ? r0 : 0.0; };
    if (beam.r_jump != 0.0) d.heaviside_atoms.push_back({beam.x0, beam.r_jump});
    return d;
}

std::vector<double> Scenario::schedule() const {
    return epsilon_schedule(regularization.k_min, regularization.k_max);
}

bool Scenario::has_spatial_atoms() const {
    return beam.ei1 != beam.ei2 || beam.r_jump != 0.0 || load.f0 != 0.0;
}

bool Scenario::has_axial_impulse() const { return axial.kind == "dirac" && axial.p1 != 0.0; }

namespace {

// Reads doc[section][key] into out when present; type errors name the field.
template <class T>
void read(const json& doc, const char* section, const char* key, T& out) {
    if (!doc.contains(section)) return;
    const json& s = doc.at(section);
    if (!s.is_object()) throw std::invalid_argument(std::string("scenario: '") + section + "' must be an object");
    if (!s.contains(key)) return;
    try {
        out = s.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scenario: field '") + section + "." + key +
                                    "' has the wrong type (" + e.what() + ")");
    }
}

void reject_unknown_fields(const json& doc) {
    static const std::map<std::string, std::set<std::string>> known = {
        {"beam", {"EI1", "EI2", "x0", "R_left", "R_jump"}},
        {"axial", {"P0", "P1", "kind", "t0", "omega"}},
        {"load", {"F0", "x1", "winkler", "manufactured"}},
        {"initial", {"f1", "f2"}},
        {"time", {"T", "dt"}},
        {"mesh", {"n_elements", "q_pts"}},
        {"regularization", {"rule", "scale", "k_min", "k_max"}},
        {"diagnostics", {"L_max", "data_scale_power", "csv_x_points", "csv_time_stride"}},
    };
    for (const auto& [section, body] : doc.items()) {
        if (section == "name") continue;
        const auto it = known.find(section);
        if (it == known.end()) throw std::invalid_argument("scenario: unknown field '" + section + "'");
        if (!body.is_object()) throw std::invalid_argument("scenario: '" + section + "' must be an object");
        for (const auto& [key, value] : body.items())
            if (!it->second.contains(key))
                throw std::invalid_argument("scenario: unknown field '" + section + "." + key + "'");
    }
}

void read_profile(const json& doc, const char* key, Profile& p) {
    if (!doc.contains("initial") || !doc.at("initial").contains(key)) return;
    const json& j = doc.at("initial").at(key);
    const std::string field = std::string("initial.") + key;
    if (j.is_string()) {
        p.name = j.get<std::string>();
        return;
    }
    if (!j.is_object()) throw std::invalid_argument("scenario: field '" + field + "' must be a string or object");
    try {
        if (j.contains("profile")) p.name = j.at("profile").get<std::string>();
        if (j.contains("amplitude")) p.amplitude = j.at("amplitude").get<double>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("scenario: field '" + field + "' has the wrong type (" + e.what() + ")");
    }
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("scenario: " + msg);
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s, bool strict) {
    require(s.beam.ei1 > 0.0 && s.beam.ei2 > 0.0, "beam.EI1 and beam.EI2 must be positive");
    require(s.beam.x0 > 0.0 && s.beam.x0 < 1.0, "beam.x0 must lie in (0,1)");
    require(s.beam.r_left > 0.0 && s.beam.r_left + s.beam.r_jump > 0.0, "density must stay positive");
    require(s.axial.kind == "dirac" || s.axial.kind == "sinusoid", "axial.kind must be 'dirac' or 'sinusoid'");
    require(s.load.x1 > 0.0 && s.load.x1 < 1.0, "load.x1 must lie in (0,1)");
    require(s.load.winkler >= 0.0, "load.winkler must be >= 0");
    require(s.time.t_final > 0.0, "time.T must be positive");
    require(s.time.dt > 0.0, "time.dt must be positive");
    if (s.has_axial_impulse()) require(s.axial.t0 > 0.0 && s.axial.t0 < s.time.t_final, "axial.t0 must lie in (0,T)");
    require(s.mesh.n_elements >= 2, "mesh.n_elements must be >= 2");
    require(s.mesh.q_pts >= 4, "mesh.q_pts must be >= 4");
    require(s.regularization.k_min >= 0 && s.regularization.k_min <= s.regularization.k_max,
            "regularization needs 0 <= k_min <= k_max");
    require(s.regularization.rule.scale > 0.0, "regularization.scale must be positive");
    require(s.diagnostics.l_max >= 0 && s.diagnostics.l_max <= 4, "diagnostics.L_max must lie in 0..4");
    require(s.diagnostics.csv_x_points >= 2 && s.diagnostics.csv_time_stride >= 1, "bad CSV sampling");
    (void)s.initial.f1.value(0.5);
    (void)s.initial.f2.value(0.5);
    if (s.load.manufactured)
        require(s.beam.ei1 == s.beam.ei2 && s.axial.p1 == 0.0,
                "load.manufactured needs constant stiffness (EI1 == EI2) and constant axial force (P1 == 0)");
    if (s.has_axial_impulse() && s.regularization.rule.kind == ScaleRule::Kind::Polynomial)
        throw HypothesisError(
            "scenario: a Dirac axial impulse requires a log-type regularization (rule 'log' or "
            "'slow_scale'); the polynomial rule violates the log-type hypothesis");
    NewmarkParams p;
    p.dt = s.time.dt;
    p.t_final = s.time.t_final;
    (void)p.steps();

    std::vector<std::string> warnings;
    const double eps_min = std::ldexp(1.0, -s.regularization.k_max);
    const double w = s.regularization.rule.width(eps_min);
    const double h = 1.0 / s.mesh.n_elements;
    auto flag = [&](const std::string& msg) {
        if (strict) throw std::invalid_argument("scenario (strict): " + msg);
        warnings.push_back(msg);
    };
    if (s.has_spatial_atoms() && h > w / 4.0)
        flag("mesh width h = " + std::to_string(h) + " exceeds w(eps_min)/4 = " + std::to_string(w / 4.0));
    if (s.has_axial_impulse() && s.time.dt > w / 8.0)
        flag("time step dt = " + std::to_string(s.time.dt) + " exceeds w(eps_min)/8 = " + std::to_string(w / 8.0));
    return warnings;
}

Scenario parse_scenario(const json& doc, bool strict, std::vector<std::string>* warnings) {
    if (!doc.is_object()) throw std::invalid_argument("scenario: top level must be a JSON object");
    reject_unknown_fields(doc);
    Scenario s;
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw std::invalid_argument("scenario: field 'name' must be a string");
        s.name = doc.at("name").get<std::string>();
    }
    read(doc, "beam", "EI1", s.beam.ei1);
    read(doc, "beam", "EI2", s.beam.ei2);
    read(doc, "beam", "x0", s.beam.x0);
    read(doc, "beam", "R_left", s.beam.r_left);
    read(doc, "beam", "R_jump", s.beam.r_jump);
    read(doc, "axial", "P0", s.axial.p0);
    read(doc, "axial", "P1", s.axial.p1);
    read(doc, "axial", "kind", s.axial.kind);
    read(doc, "axial", "t0", s.axial.t0);
    read(doc, "axial", "omega", s.axial.omega);
    read(doc, "load", "F0", s.load.f0);
    read(doc, "load", "x1", s.load.x1);
    read(doc, "load", "winkler", s.load.winkler);
    read(doc, "load", "manufactured", s.load.manufactured);
    read_profile(doc, "f1", s.initial.f1);
    read_profile(doc, "f2", s.initial.f2);
    read(doc, "time", "T", s.time.t_final);
    read(doc, "time", "dt", s.time.dt);
    read(doc, "mesh", "n_elements", s.mesh.n_elements);
    read(doc, "mesh", "q_pts", s.mesh.q_pts);
    std::string rule = to_string(s.regularization.rule.kind);
    read(doc, "regularization", "rule", rule);
    try {
        s.regularization.rule.kind = parse_rule_kind(rule);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("scenario: field 'regularization.rule' must be 'polynomial', 'log' or 'slow_scale'");
    }
    read(doc, "regularization", "scale", s.regularization.rule.scale);
    read(doc, "regularization", "k_min", s.regularization.k_min);
    read(doc, "regularization", "k_max", s.regularization.k_max);
    read(doc, "diagnostics", "L_max", s.diagnostics.l_max);
    read(doc, "diagnostics", "data_scale_power", s.diagnostics.data_scale_power);
    read(doc, "diagnostics", "csv_x_points", s.diagnostics.csv_x_points);
    read(doc, "diagnostics", "csv_time_stride", s.diagnostics.csv_time_stride);
    auto w = validate_scenario(s, strict);
    if (warnings) *warnings = std::move(w);
    return s;
}

Scenario parse_scenario_file(const std::filesystem::path& path, bool strict,
                             std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scenario: cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("scenario: malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_scenario(doc, strict, warnings);
}

json emit_scenario(const Scenario& s) {
    return {
        {"name", s.name},
        {"beam", {{"EI1", s.beam.ei1}, {"EI2", s.beam.ei2}, {"x0", s.beam.x0}, {"R_left", s.beam.r_left},
                  {"R_jump", s.beam.r_jump}}},
        {"axial", {{"P0", s.axial.p0}, {"P1", s.axial.p1}, {"kind", s.axial.kind}, {"t0", s.axial.t0},
                   {"omega", s.axial.omega}}},
        {"load", {{"F0", s.load.f0}, {"x1", s.load.x1}, {"winkler", s.load.winkler},
                  {"manufactured", s.load.manufactured}}},
        {"initial", {{"f1", {{"profile", s.initial.f1.name}, {"amplitude", s.initial.f1.amplitude}}},
                     {"f2", {{"profile", s.initial.f2.name}, {"amplitude", s.initial.f2.amplitude}}}}},
        {"time", {{"T", s.time.t_final}, {"dt", s.time.dt}}},
        {"mesh", {{"n_elements", s.mesh.n_elements}, {"q_pts", s.mesh.q_pts}}},
        {"regularization", {{"rule", to_string(s.regularization.rule.kind)},
                            {"scale", s.regularization.rule.scale},
                            {"k_min", s.regularization.k_min},
                            {"k_max", s.regularization.k_max}}},
        {"diagnostics", {{"L_max", s.diagnostics.l_max},
                         {"data_scale_power", s.diagnostics.data_scale_power},
                         {"csv_x_points", s.diagnostics.csv_x_points},
                         {"csv_time_stride", s.diagnostics.csv_time_stride}}},
    };
}

double manufactured_solution(double x, double t, int x_deriv) {
    const double s = std::sin(std::numbers::pi * t);
    switch (x_deriv) {
        case 0: return s * x * x * (1.0 - x) * (1.0 - x);
        case 1: return s * 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
        case 2: return s * (2.0 - 12.0 * x + 12.0 * x * x);
        case 3: return s * (24.0 * x - 12.0);
        case 4: return s * 24.0;
        default: return 0.0;
    }
}

namespace {

std::function<double(double, double, int)> manufactured_forcing(const Scenario& s, double scale) {
    const double c = s.beam.ei1;
    const double b = s.axial.p0;
    const double cw = s.load.winkler;
    return [=](double x, double t, int order) {
        const double p = x * x * (1.0 - x) * (1.0 - x);
        const double p2 = 2.0 - 12.0 * x + 12.0 * x * x;
        const double spatial = -std::numbers::pi * std::numbers::pi * p + c * 24.0 + b * p2 + cw * p;
        const double temporal = std::pow(std::numbers::pi, order) *
                                std::sin(std::numbers::pi * t + order * std::numbers::pi / 2.0);
        return scale * spatial * temporal;
    };
}

void initial_data(const Scenario& s, const FemSpace& space, double scale, CoefVector& f1, CoefVector& f2) {
    Profile p1 = s.initial.f1;
    Profile p2 = s.initial.f2;
    if (s.load.manufactured) {
        p1 = Profile{"zero", 1.0};
        p2 = Profile{"hermite_poly", std::numbers::pi};
    }
    p1.amplitude *= scale;
    p2.amplitude *= scale;
    f1 = interpolate(space, [&](double x) { return p1.value(x); }, [&](double x) { return p1.slope(x); });
    f2 = interpolate(space, [&](double x) { return p2.value(x); }, [&](double x) { return p2.slope(x); });
}

NewmarkParams newmark_params(const Scenario& s) {
    NewmarkParams p;
    p.dt = s.time.dt;
    p.t_final = s.time.t_final;
    return p;
}

}  // namespace

RegularizedProblem build_problem(const Scenario& s, double eps) {
    const auto& rule = s.regularization.rule;
    const double scale = s.diagnostics.data_scale_power == 0.0 ? 1.0 : std::pow(eps, s.diagnostics.data_scale_power);
    const FemSpace space = build_space(s.mesh.n_elements, s.mesh.q_pts);
    RegularizedField c = stiffness_field(s.beam.ei1, s.beam.ei2, s.beam.x0, eps, rule);
    RegularizedField b = axial_force_field(s.axial_force(), s.density(), eps, rule, s.time.t_final);
    std::function<double(double, double, int)> smooth;
    if (s.load.manufactured) smooth = manufactured_forcing(s, scale);
    RegularizedField g = load_field(scale * s.load.f0, s.load.x1, eps, rule, smooth, s.time.t_final);
    const double c0 = std::min(s.beam.ei1, s.beam.ei2);
    const ConstantsLedger ledger = constants(c, b, c0, s.time.t_final, s.load.winkler);
    CoefVector f1, f2;
    initial_data(s, space, scale, f1, f2);
    return RegularizedProblem{eps,
                              rule.width(eps),
                              SystemMatrices(space, std::move(c), std::move(b), std::move(g), s.load.winkler),
                              std::move(f1),
                              std::move(f2),
                              newmark_params(s),
                              c0,
                              ledger};
}

RegularizedProblem build_direct_problem(const Scenario& s) {
    if (s.beam.ei1 != s.beam.ei2)
        throw std::invalid_argument("build_direct_problem: stiffness has a jump (not a smooth coefficient)");
    if (s.has_axial_impulse())
        throw std::invalid_argument("build_direct_problem: axial impulse is not a smooth coefficient");
    if (s.axial.p1 != 0.0 && s.beam.r_jump != 0.0)
        throw std::invalid_argument("build_direct_problem: axial force composed with a density jump is not smooth");
    const FemSpace space = build_space(s.mesh.n_elements, s.mesh.q_pts);
    const ScaleRule unit{ScaleRule::Kind::Polynomial, 1.0};
    RegularizedField c = RegularizedField::constant(s.beam.ei1);
    Scenario smooth_density = s;
    smooth_density.beam.r_jump = 0.0;
    RegularizedField b = axial_force_field(s.axial_force(), smooth_density.density(), 1.0, unit, s.time.t_final);
    std::function<double(double, double, int)> smooth;
    if (s.load.manufactured) smooth = manufactured_forcing(s, 1.0);
    RegularizedField g = load_field(0.0, s.load.x1, 1.0, unit, smooth, s.time.t_final);
    std::vector<DiracAtom> points;
    if (s.load.f0 != 0.0) points.push_back({s.load.x1, s.load.f0});
    const ConstantsLedger ledger = constants(c, b, s.beam.ei1, s.time.t_final, s.load.winkler);
    CoefVector f1, f2;
    initial_data(s, space, 1.0, f1, f2);
    return RegularizedProblem{0.0,
                              0.0,
                              SystemMatrices(space, std::move(c), std::move(b), std::move(g), s.load.winkler,
                                             std::move(points)),
                              std::move(f1),
                              std::move(f2),
                              newmark_params(s),
                              s.beam.ei1,
                              ledger};
}

}  // namespace beamreg
