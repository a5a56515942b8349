// beamreg: solve, sweep, verify and bootstrap runs for a scenario file.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "beamreg/colombeau.hpp"
#include "beamreg/energy.hpp"
#include "beamreg/errors.hpp"
#include "beamreg/newmark.hpp"
#include "beamreg/scenario.hpp"

namespace fs = std::filesystem;
using namespace beamreg;

namespace {

struct Options {
    std::string mode;
    std::string scenario;
    std::string out = ".";
    std::optional<int> eps_min_exp;
    std::optional<int> eps_max_exp;
    bool strict = false;
    double ft_scale = 1.0;
    double bootstrap_tol = 1e-3;
    int bootstrap_stride = 10;
};

void write_json(const fs::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

void warn_resolution(const RegularizedProblem& prob) {
    const double h = prob.system.space().h();
    if (prob.width > 0.0 && h > prob.width)
        std::cerr << "warning: mesh width h = " << h << " exceeds the mollification width w = " << prob.width
                  << " at eps = " << prob.eps << '\n';
}

int run_solve(const Scenario& s, const Options& o) {
    const double eps = s.schedule().back();
    const RegularizedProblem prob = build_problem(s, eps);
    warn_resolution(prob);
    const Trajectory traj = solve_ivp(prob.system, prob.f1, prob.f2, prob.params);
    const fs::path path = fs::path(o.out) / (s.name + "_trajectory.csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_trajectory_csv(out, prob.system.space(), traj, s.diagnostics.csv_x_points, s.diagnostics.csv_time_stride);
    std::cout << "wrote " << path.string() << " (eps = " << eps << ", " << traj.size() << " steps)\n";
    return 0;
}

int run_sweep(const Scenario& s, const Options& o) {
    SweepOptions opts;
    opts.l_max = s.diagnostics.l_max;
    const SweepReport report = sweep(s, opts);
    const nlohmann::json doc = to_json(report);
    const auto problems = validate_sweep_report(doc);
    const fs::path json_path = fs::path(o.out) / (s.name + "_sweep.json");
    const fs::path csv_path = fs::path(o.out) / (s.name + "_norms.csv");
    write_json(json_path, doc);
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    write_norms_csv(csv, report);
    bool ok = problems.empty();
    for (const auto& p : problems) std::cerr << "report: " << p << '\n';
    for (const auto& e : report.exponents) {
        std::printf("l=%d k=%d exponent=%s status=%s\n", e.l, e.k,
                    e.slope ? std::to_string(*e.slope).c_str() : "null", e.status.c_str());
        if (e.status == "diverging" || e.status == "non-finite") ok = false;
    }
    std::cout << "wrote " << json_path.string() << " and " << csv_path.string() << '\n';
    return ok ? 0 : 1;
}

int run_verify(const Scenario& s, const Options& o) {
    nlohmann::json reports = nlohmann::json::array();
    bool ok = true;
    for (double eps : s.schedule()) {
        RegularizedProblem prob = build_problem(s, eps);
        warn_resolution(prob);
        prob.ledger.f_t *= o.ft_scale;
        const Trajectory traj = solve_ivp(prob.system, prob.f1, prob.f2, prob.params);
        const EnergyReport rep = energy_report(traj, prob.system, prob.ledger);
        const BoundVerdict verdict = verify_bound(rep);
        nlohmann::json entry = to_json(rep);
        entry["eps"] = eps;
        entry["passed"] = verdict.passed;
        entry["min_margin"] = verdict.min_margin;
        reports.push_back(std::move(entry));
        std::printf("eps=%.6g bound %s (min margin %.3e at t=%.4g)\n", eps, verdict.passed ? "holds" : "VIOLATED",
                    verdict.min_margin, rep.times[verdict.worst_index]);
        ok = ok && verdict.passed;
    }
    const fs::path path = fs::path(o.out) / (s.name + "_energy.json");
    write_json(path, {{"scenario", s.name},
                      {"time_transform_applied", false},
                      {"ft_scale", o.ft_scale},
                      {"passed", ok},
                      {"reports", reports}});
    std::cout << "wrote " << path.string() << '\n';
    return ok ? 0 : 1;
}

int run_bootstrap(const Scenario& s, const Options& o) {
    const double eps = s.schedule().back();
    const RegularizedProblem prob = build_problem(s, eps);
    warn_resolution(prob);
    const Trajectory traj = solve_ivp(prob.system, prob.f1, prob.f2, prob.params);
    const BootstrapReport rep = bootstrap_check(traj, prob.system, o.bootstrap_stride);
    nlohmann::json doc = to_json(rep);
    doc["scenario"] = s.name;
    doc["time_transform_applied"] = false;
    const bool ok = rep.relative_residual() <= o.bootstrap_tol;
    doc["passed"] = ok;
    const fs::path path = fs::path(o.out) / (s.name + "_bootstrap.json");
    write_json(path, doc);
    std::printf("relative residual %.3e (tolerance %.1e)\n", rep.relative_residual(), o.bootstrap_tol);
    std::cout << "wrote " << path.string() << '\n';
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mollified clamped-beam solver and asymptotics diagnostics"};
    Options o;
    app.add_option("mode", o.mode, "solve | sweep | verify | bootstrap")
        ->required()
        ->check(CLI::IsMember({"solve", "sweep", "verify", "bootstrap"}));
    app.add_option("--scenario", o.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "output directory");
    app.add_option("--eps-min-exp", o.eps_min_exp, "schedule starts at eps = 2^-k")->check(CLI::NonNegativeNumber);
    app.add_option("--eps-max-exp", o.eps_max_exp, "schedule ends at eps = 2^-k")->check(CLI::NonNegativeNumber);
    app.add_flag("--strict", o.strict, "resolution warnings become errors");
    app.add_option("--ft-scale", o.ft_scale, "multiply F_T of the ledger (verify)")->check(CLI::PositiveNumber);
    app.add_option("--bootstrap-tol", o.bootstrap_tol, "relative residual accepted by bootstrap");
    app.add_option("--bootstrap-stride", o.bootstrap_stride, "time-step stride of the bootstrap check")
        ->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<std::string> warnings;
        Scenario s = parse_scenario_file(o.scenario, false);
        if (o.eps_min_exp) s.regularization.k_min = *o.eps_min_exp;
        if (o.eps_max_exp) s.regularization.k_max = *o.eps_max_exp;
        warnings = validate_scenario(s, o.strict);
        for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
        fs::create_directories(o.out);
        if (o.mode == "solve") return run_solve(s, o);
        if (o.mode == "sweep") return run_sweep(s, o);
        if (o.mode == "verify") return run_verify(s, o);
        return run_bootstrap(s, o);
    } catch (const SolveError& e) {
        std::cerr << "error [" << o.scenario << ", step " << e.step() << "]: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error [" << o.scenario << "]: " << e.what() << '\n';
    }
    return 2;
}
