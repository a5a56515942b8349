#include "beamreg/colombeau.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace beamreg {

using nlohmann::json;

ExponentFit moderateness_exponent(const std::vector<double>& eps, const std::vector<double>& norms) {
    if (eps.size() != norms.size() || eps.empty())
        throw std::invalid_argument("moderateness_exponent: need matching, non-empty eps and norm lists");
    ExponentFit fit;
    const bool all_null = std::all_of(norms.begin(), norms.end(), [](double v) { return std::abs(v) <= kNullThreshold; });
    if (all_null) {
        fit.status = "null";
        return fit;
    }
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < eps.size(); ++j) {
        xs.push_back(std::log(1.0 / eps[j]));
        ys.push_back(std::log(norms[j]));
    }
    if (!std::all_of(ys.begin(), ys.end(), [](double y) { return std::isfinite(y); })) {
        fit.status = "non-finite";
        return fit;
    }
    for (std::size_t j = 0; j + 1 < xs.size(); ++j)
        fit.local_slopes.push_back((ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]));
    if (xs.size() == 1) {
        fit.slope = 0.0;
        fit.status = "moderate";
        return fit;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        mx += xs[j] / n;
        my += ys[j] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        sxy += (xs[j] - mx) * (ys[j] - my);
        sxx += (xs[j] - mx) * (xs[j] - mx);
    }
    fit.slope = sxy / sxx;
    fit.status = "moderate";

    // Local slopes that keep growing linearly in log(1/eps) signal exp(log^2)-type growth.
    const std::size_t m = fit.local_slopes.size();
    if (m >= 3) {
        const std::size_t start = m / 2 >= m - 3 ? m - 3 : m / 2;
        double ax = 0.0, as = 0.0;
        const double cnt = static_cast<double>(m - start);
        for (std::size_t j = start; j < m; ++j) {
            ax += 0.5 * (xs[j] + xs[j + 1]) / cnt;
            as += fit.local_slopes[j] / cnt;
        }
        double cxy = 0.0, cxx = 0.0;
        for (std::size_t j = start; j < m; ++j) {
            const double x = 0.5 * (xs[j] + xs[j + 1]) - ax;
            cxy += x * (fit.local_slopes[j] - as);
            cxx += x * x;
        }
        const double curvature = cxx > 0.0 ? cxy / cxx : 0.0;
        if (curvature > 0.5 && fit.local_slopes.back() > *fit.slope + 1.0) fit.status = "diverging";
    }
    return fit;
}

const ExponentFit& SweepReport::exponent(int l, int k) const {
    for (const auto& e : exponents)
        if (e.l == l && e.k == k) return e;
    throw std::out_of_range("SweepReport: no exponent for (l,k)");
}

namespace {

int worker_count(int requested, std::size_t jobs) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("BEAMREG_THREADS")) n = std::atoi(env);
        if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return std::max(1, std::min(n, static_cast<int>(jobs)));
}

std::array<double, 3> space_time_norms(const FemSpace& space, const std::vector<double>& times,
                                       const std::vector<CoefVector>& states) {
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    std::array<double, 3> prev = derivative_norms_sq(space, states.front());
    for (std::size_t k = 1; k < states.size(); ++k) {
        const auto cur = derivative_norms_sq(space, states[k]);
        const double dt = times[k] - times[k - 1];
        for (std::size_t d = 0; d < 3; ++d) acc[d] += 0.5 * dt * (prev[d] + cur[d]);
        prev = cur;
    }
    for (double& v : acc) v = std::sqrt(v);
    return acc;
}

struct EpsResult {
    std::vector<std::array<double, 3>> norms;
    ConstantsLedger ledger;
    double width = 0.0;
    double b_sup = 0.0;
    std::vector<CoefVector> solution;
    std::vector<double> times;
};

}  // namespace

double space_time_norm(const FemSpace& space, const std::vector<double>& times,
                       const std::vector<CoefVector>& states, int x_deriv) {
    if (x_deriv < 0 || x_deriv > 2) throw std::invalid_argument("space_time_norm: x_deriv must be 0..2");
    return space_time_norms(space, times, states)[static_cast<std::size_t>(x_deriv)];
}

SweepReport sweep(const Scenario& scenario, const SweepOptions& options,
                  std::optional<std::vector<double>> schedule) {
    SweepReport report;
    report.scenario = scenario.name;
    report.l_max = options.l_max;
    report.schedule = schedule ? *schedule : scenario.schedule();
    report.warnings = validate_scenario(scenario, false);
    const std::size_t jobs = report.schedule.size();
    std::vector<EpsResult> results(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (std::size_t j = next++; j < jobs; j = next++) {
            try {
                const double eps = report.schedule[j];
                const RegularizedProblem prob = build_problem(scenario, eps);
                const Trajectory base = solve_ivp(prob.system, prob.f1, prob.f2, prob.params);
                const auto levels = time_derivative_cascade(prob.system, base, prob.params, options.l_max);
                EpsResult r;
                for (const auto& level : levels)
                    r.norms.push_back(space_time_norms(prob.system.space(), level.times, level.u));
                r.ledger = prob.ledger;
                r.width = prob.width;
                r.b_sup = prob.system.axial_field().sup_norm();
                r.times = base.times;
                if (options.keep_solutions) r.solution = base.u;
                results[j] = std::move(r);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };
    const int n_workers = worker_count(options.threads, jobs);
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (std::size_t j = 0; j < jobs; ++j) {
        if (!errors[j]) continue;
        try {
            std::rethrow_exception(errors[j]);
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep: solve failed at eps = " + std::to_string(report.schedule[j]) + ": " +
                                     e.what());
        }
    }
    for (auto& r : results) {
        report.norms.push_back(std::move(r.norms));
        report.ledgers.push_back(r.ledger);
        report.widths.push_back(r.width);
        report.b_sup.push_back(r.b_sup);
        if (options.keep_solutions) report.solutions.push_back(std::move(r.solution));
        report.times = r.times;
    }
    for (int l = 0; l <= options.l_max; ++l)
        for (int k = 0; k <= 2; ++k) {
            std::vector<double> col;
            for (std::size_t j = 0; j < jobs; ++j) col.push_back(report.norm(j, l, k));
            ExponentFit fit = moderateness_exponent(report.schedule, col);
            fit.l = l;
            fit.k = k;
            report.exponents.push_back(std::move(fit));
        }
    return report;
}

bool null_test(const SweepReport& report) {
    for (std::size_t j = 0; j < report.schedule.size(); ++j)
        if (!(report.norm(j, 0, 0) <= kNullThreshold)) return false;
    return true;
}

namespace {

std::vector<CoefVector> difference(const std::vector<CoefVector>& a, const std::vector<CoefVector>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("association_test: trajectories on different time grids");
    std::vector<CoefVector> d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        d[k].resize(a[k].size());
        for (std::size_t i = 0; i < a[k].size(); ++i) d[k][i] = a[k][i] - b[k][i];
    }
    return d;
}

}  // namespace

AssociationTable association_test(const SweepReport& report, const FemSpace& space,
                                  const std::vector<CoefVector>* reference) {
    if (report.solutions.size() != report.schedule.size())
        throw std::invalid_argument("association_test: sweep was run without keep_solutions");
    AssociationTable t;
    const auto& sols = report.solutions;
    const std::size_t n = sols.size();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        t.consecutive.push_back(space_time_norm(space, report.times, difference(sols[j], sols[j + 1])));
        t.to_finest.push_back(space_time_norm(space, report.times, difference(sols[j], sols.back())));
    }
    if (reference)
        for (std::size_t j = 0; j < n; ++j)
            t.to_reference.push_back(space_time_norm(space, report.times, difference(sols[j], *reference)));
    const std::size_t m = t.consecutive.size();
    t.cauchy = m >= 3 && t.consecutive[m - 1] < t.consecutive[m - 2] && t.consecutive[m - 2] < t.consecutive[m - 3];
    return t;
}

GInfinityResult g_infinity_test(const SweepReport& report) {
    GInfinityResult r;
    bool any = false;
    for (const auto& e : report.exponents) {
        if (!e.slope) continue;
        if (!any) {
            r.min_exponent = r.max_exponent = *e.slope;
            any = true;
        }
        r.min_exponent = std::min(r.min_exponent, *e.slope);
        r.max_exponent = std::max(r.max_exponent, *e.slope);
    }
    r.spread = r.max_exponent - r.min_exponent;
    r.passed = r.spread <= 1.0;
    return r;
}

BootstrapReport bootstrap_check(const Trajectory& trajectory, const SystemMatrices& system, int time_stride) {
    if (time_stride < 1) throw std::invalid_argument("bootstrap_check: time_stride must be >= 1");
    const FemSpace& space = system.space();
    const auto& c = system.stiffness_field();
    const auto& b = system.axial_field();
    const auto& g = system.load_field();
    const double cw = system.winkler_coefficient();
    std::vector<Window> windows = c.windows();
    windows.insert(windows.end(), b.windows().begin(), b.windows().end());
    windows.insert(windows.end(), g.windows().begin(), g.windows().end());
    const auto& rule = space.rule();
    const std::size_t q = rule.points.size();

    BootstrapReport rep;
    std::vector<double> sample_t, res_sq, ref_sq;
    for (std::size_t k = 0; k < trajectory.size(); k += static_cast<std::size_t>(time_stride)) {
        const double t = trajectory.times[k];
        const auto& u = trajectory.u[k];
        const auto& a = trajectory.a[k];
        auto source = [&](double x) {
            return g(x, t) - cw * eval(space, u, x, 0) - b(x, t) * eval(space, u, x, 2) - eval(space, a, x, 0);
        };
        // Sample points carry the running integrals A = int h and B = int z h.
        struct Sample {
            double x, weight, cu2, iint;
        };
        std::vector<Sample> samples;
        double big_a = 0.0, big_b = 0.0;
        for (int e = 0; e < space.n_elements(); ++e) {
            for (const auto& panel : element_panels(space, e, windows)) {
                const double xa = panel.begin;
                const double len = panel.end - panel.begin;
                for (std::size_t s = 0; s < q; ++s) {
                    const double x = xa + len * rule.points[s];
                    double pa = 0.0, pb = 0.0;  // partial integrals over [xa, x]
                    for (std::size_t r = 0; r < q; ++r) {
                        const double z = xa + (x - xa) * rule.points[r];
                        const double hz = source(z);
                        pa += rule.weights[r] * (x - xa) * hz;
                        pb += rule.weights[r] * (x - xa) * z * hz;
                    }
                    const double iint = x * (big_a + pa) - (big_b + pb);
                    samples.push_back({x, rule.weights[s] * len, c(x, t) * eval(space, u, x, 2), iint});
                }
                for (std::size_t r = 0; r < q; ++r) {
                    const double z = xa + len * rule.points[r];
                    const double hz = source(z);
                    big_a += rule.weights[r] * len * hz;
                    big_b += rule.weights[r] * len * z * hz;
                }
            }
        }
        const double e0 = c(0.0, t) * eval(space, u, 0.0, 2);
        const double d0 = c(1.0, t) * eval(space, u, 1.0, 2) - e0 - (big_a - big_b);
        double rs = 0.0, fs = 0.0;
        for (const auto& s : samples) {
            const double r = s.cu2 - (e0 + d0 * s.x + s.iint);
            rs += s.weight * r * r;
            fs += s.weight * s.cu2 * s.cu2;
        }
        rep.times.push_back(t);
        rep.e.push_back(e0);
        rep.d.push_back(d0);
        sample_t.push_back(t);
        res_sq.push_back(rs);
        ref_sq.push_back(fs);
    }
    double ri = 0.0, fi = 0.0;
    for (std::size_t k = 1; k < sample_t.size(); ++k) {
        const double dt = sample_t[k] - sample_t[k - 1];
        ri += 0.5 * dt * (res_sq[k] + res_sq[k - 1]);
        fi += 0.5 * dt * (ref_sq[k] + ref_sq[k - 1]);
    }
    if (sample_t.size() == 1) {
        ri = res_sq[0];
        fi = ref_sq[0];
    }
    rep.eps = c.eps();
    rep.residual_l2 = std::sqrt(ri);
    rep.reference_l2 = std::sqrt(fi);
    return rep;
}

SlowScaleResult slow_scale_check(const std::vector<double>& eps, const std::vector<double>& values) {
    if (eps.size() != values.size() || eps.empty())
        throw std::invalid_argument("slow_scale_check: need matching, non-empty lists");
    SlowScaleResult r;
    r.passed = true;
    for (int p = 1; p <= 5; ++p) {
        std::vector<double> seq;
        for (std::size_t j = 0; j < eps.size(); ++j) seq.push_back(std::pow(std::abs(values[j]), p) * eps[j]);
        const double mx = *std::max_element(seq.begin(), seq.end());
        const double growth = seq.front() > 0.0 ? mx / seq.front() : (mx > 0.0 ? INFINITY : 1.0);
        const std::size_t m = seq.size();
        bool tail = true;
        for (std::size_t j = m >= 3 ? m - 2 : 1; j < m; ++j)
            if (seq[j] > seq[j - 1] * (1.0 + 1e-12)) tail = false;
        r.growth[static_cast<std::size_t>(p - 1)] = growth;
        r.tail_decreasing[static_cast<std::size_t>(p - 1)] = tail;
        if (!(growth <= 10.0 || tail)) r.passed = false;
    }
    return r;
}

json to_json(const SweepReport& r) {
    json norms = json::array();
    for (std::size_t j = 0; j < r.schedule.size(); ++j)
        for (int l = 0; l <= r.l_max; ++l)
            for (int k = 0; k <= 2; ++k)
                norms.push_back({{"eps", r.schedule[j]}, {"l", l}, {"k", k}, {"norm", r.norm(j, l, k)}});
    json exps = json::array();
    for (const auto& e : r.exponents) {
        exps.push_back({{"l", e.l},
                        {"k", e.k},
                        {"slope", e.slope ? json(*e.slope) : json(nullptr)},
                        {"local_slopes", e.local_slopes},
                        {"status", e.status}});
    }
    json ledgers = json::array();
    for (const auto& l : r.ledgers) ledgers.push_back(to_json(l));
    return {{"scenario", r.scenario},
            {"time_transform_applied", false},
            {"L_max", r.l_max},
            {"schedule", r.schedule},
            {"widths", r.widths},
            {"b_sup", r.b_sup},
            {"ledgers", ledgers},
            {"norms", norms},
            {"exponents", exps},
            {"warnings", r.warnings}};
}

json to_json(const BootstrapReport& r) {
    return {{"eps", r.eps},
            {"t", r.times},
            {"e", r.e},
            {"d", r.d},
            {"residual_l2", r.residual_l2},
            {"reference_l2", r.reference_l2},
            {"relative_residual", r.relative_residual()}};
}

std::vector<std::string> validate_sweep_report(const json& doc) {
    std::vector<std::string> problems;
    auto need = [&](const char* key, auto pred, const char* what) {
        if (!doc.contains(key)) problems.push_back(std::string("missing '") + key + "'");
        else if (!pred(doc.at(key))) problems.push_back(std::string("'") + key + "' must be " + what);
    };
    if (!doc.is_object()) return {"report must be an object"};
    need("scenario", [](const json& j) { return j.is_string(); }, "a string");
    need("time_transform_applied", [](const json& j) { return j.is_boolean(); }, "a boolean");
    need("L_max", [](const json& j) { return j.is_number_integer() && j.get<int>() >= 0; }, "a non-negative integer");
    auto numbers = [](const json& j) {
        return j.is_array() && std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_number(); });
    };
    need("schedule", numbers, "an array of numbers");
    need("widths", numbers, "an array of numbers");
    need("b_sup", numbers, "an array of numbers");
    need("ledgers", [](const json& j) { return j.is_array(); }, "an array");
    need("norms", [](const json& j) { return j.is_array(); }, "an array");
    need("exponents", [](const json& j) { return j.is_array(); }, "an array");
    if (!problems.empty()) return problems;

    const std::size_t n_eps = doc.at("schedule").size();
    const int l_max = doc.at("L_max").get<int>();
    if (doc.at("widths").size() != n_eps || doc.at("b_sup").size() != n_eps || doc.at("ledgers").size() != n_eps)
        problems.push_back("per-eps arrays disagree with the schedule length");
    for (const auto& l : doc.at("ledgers"))
        for (const char* key : {"C", "C0", "C1", "alpha", "lambda", "beta_min", "D_T", "F_T", "T"})
            if (!l.contains(key) || !l.at(key).is_number()) problems.push_back(std::string("ledger lacks numeric '") + key + "'");
    const std::size_t expected = n_eps * static_cast<std::size_t>(l_max + 1) * 3;
    if (doc.at("norms").size() != expected) problems.push_back("norms table incomplete");
    for (const auto& e : doc.at("norms")) {
        if (!e.contains("eps") || !e.contains("l") || !e.contains("k") || !e.contains("norm") ||
            !e.at("norm").is_number() || e.at("norm").get<double>() < 0.0) {
            problems.push_back("malformed norms entry");
            break;
        }
    }
    if (doc.at("exponents").size() != static_cast<std::size_t>(l_max + 1) * 3)
        problems.push_back("exponent table incomplete");
    for (const auto& e : doc.at("exponents")) {
        const bool ok = e.contains("l") && e.contains("k") && e.contains("slope") &&
                        (e.at("slope").is_null() || e.at("slope").is_number()) && e.contains("status") &&
                        e.at("status").is_string() && e.contains("local_slopes") && e.at("local_slopes").is_array();
        if (!ok) {
            problems.push_back("malformed exponents entry");
            break;
        }
    }
    return problems;
}

void write_norms_csv(std::ostream& out, const SweepReport& r) {
    out << "eps,l,k,norm\n";
    char buf[128];
    for (std::size_t j = 0; j < r.schedule.size(); ++j)
        for (int l = 0; l <= r.l_max; ++l)
            for (int k = 0; k <= 2; ++k) {
                std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%.17g\n", r.schedule[j], l, k, r.norm(j, l, k));
                out << buf;
            }
}

}  // namespace beamreg
