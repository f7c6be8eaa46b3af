#include "pdm/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include "pdm/eom.hpp"
#include "pdm/error.hpp"
#include "pdm/exact.hpp"
#include "pdm/expr.hpp"
#include "pdm/integrate.hpp"
#include "pdm/transform.hpp"

namespace pdm {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::ExpectedFail: return "expected-fail";
        case Outcome::Fail: return "fail";
    }
    return "?";
}

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

CheckReport below(std::string name, double metric, double threshold, std::string details) {
    CheckReport r;
    r.name = std::move(name);
    r.metric = metric;
    r.threshold = threshold;
    r.passed = metric <= threshold;
    r.details = std::move(details);
    return r;
}

CheckReport above(std::string name, double metric, double threshold, std::string details) {
    CheckReport r;
    r.name = std::move(name);
    r.metric = metric;
    r.threshold = threshold;
    r.expected_fail = true;
    r.passed = metric >= threshold;
    r.details = std::move(details);
    return r;
}

// ---------------------------------------------------------------------------
// Scenarios

ParameterSet with_omega(std::vector<double> w) {
    ParameterSet p;
    p.omega = std::move(w);
    return p;
}

ExactSolutionSpec make_spec(ExactFamily f, ParameterSet p, std::vector<double> amplitude,
                            Sw2Form form = Sw2Form::Printed) {
    ExactSolutionSpec s;
    s.family = f;
    s.params = std::move(p);
    s.amplitude = std::move(amplitude);
    s.sw2_form = form;
    return s;
}

struct Scenario {
    std::string label;
    ExactSolutionSpec spec;
};

Scenario ml1(double lambda, Branch b, double A) {
    ParameterSet p = with_omega({1.0});
    p.lambda = lambda;
    p.sign = b;
    return {"lambda=" + fmt(lambda) + (b == Branch::Plus ? "(+)" : "(-)") + " A=" + fmt(A),
            make_spec(ExactFamily::ML1, p, {A})};
}

Scenario powerlaw(double upsilon) {
    ParameterSet p = with_omega({1.0});
    p.upsilon = upsilon;
    p.alpha = 1.0;
    return {"upsilon=" + fmt(upsilon), make_spec(ExactFamily::PowerLaw, p, {1.0})};
}

Scenario sw1(Branch b) {
    ParameterSet p = with_omega({1.0});
    p.lambda = 0.5;
    p.sign = b;
    p.kappa = std::vector<double>{0.5};
    return {std::string("lambda=0.5") + (b == Branch::Plus ? "(+)" : "(-)"), make_spec(ExactFamily::SW1, p, {1.0})};
}

Scenario sw2(double eta, Sw2Form form) {
    ParameterSet p = with_omega({1.0});
    p.eta_exp = eta;
    p.beta = 1.0;
    p.kappa = std::vector<double>{0.5};
    return {"eta=" + fmt(eta), make_spec(ExactFamily::SW2, p, {eta > 0 ? 1.0 : -1.0}, form)};
}

std::vector<Scenario> scenarios(const std::string& family) {
    if (family == "harmonic") return {{"B=0.7", make_spec(ExactFamily::HarmonicRef, with_omega({1.0}), {0.7})}};
    if (family == "isotonic") {
        ParameterSet p = with_omega({1.0});
        p.kappa = std::vector<double>{0.5};
        return {{"C=1", make_spec(ExactFamily::IsotonicRef, p, {1.0})}};
    }
    if (family == "ml1") {
        std::vector<Scenario> out;
        for (double l : {0.5, 1.0}) {
            out.push_back(ml1(l, Branch::Plus, 1.0));
            out.push_back(ml1(l, Branch::Minus, 0.8));
        }
        ParameterSet p = with_omega({1.0, 1.7});
        p.lambda = 0.5;
        out.push_back({"n=2", make_spec(ExactFamily::ML1, p, {1.0, 0.6})});
        return out;
    }
    if (family == "powerlaw") return {powerlaw(1.0), powerlaw(2.0)};
    if (family == "morse") {
        ParameterSet p = with_omega({1.0});
        p.zeta = std::vector<double>{1.0};
        return {{"B=0.5", make_spec(ExactFamily::Morse, p, {0.5})}};
    }
    if (family == "sw1") return {sw1(Branch::Plus), sw1(Branch::Minus)};
    if (family == "sw2") return {sw2(-1.0, Sw2Form::Printed)};
    return {};
}

double longest_period(const ExactSolutionSpec& s) {
    double T = 0.0;
    for (std::size_t i = 0; i < s.n(); ++i) T = std::max(T, exact_period(s, i));
    return T;
}

double shortest_period(const ExactSolutionSpec& s) {
    double T = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.n(); ++i) T = std::min(T, exact_period(s, i));
    return T;
}

AdaptiveEmbedded45 tolerances(const CheckContext& ctx) {
    AdaptiveEmbedded45 tol;
    tol.rel_tol = ctx.rel_tol;
    tol.abs_tol = ctx.abs_tol;
    return tol;
}

// Power-law trajectories cross the kinetic singularity at x = 0, which only
// the Sundman-regularized integrator can pass.
Trajectory integrate_scenario(const PdmSystem& sys, const ExactSolutionSpec& spec, double t_end,
                              const CheckContext& ctx) {
    const State s0 = exact_solution(spec, 0.0);
    if (spec.family == ExactFamily::PowerLaw) return integrate_regularized(sys, s0, tolerances(ctx), t_end);
    IntegratorOptions o;
    o.scheme = tolerances(ctx);
    o.t_end = t_end;
    return integrate(sys, s0, o);
}

bool completed(const Trajectory& tr, std::string& details) {
    if (tr.termination.kind == Termination::Kind::Completed) return true;
    details += "integration stopped at t=" + fmt(tr.termination.t) + ": " + tr.termination.message + "; ";
    return false;
}

// max |EL-I residual| on a cell-centred grid of 3001 points over 3 periods
double residual_over_periods(const ExactSolutionSpec& spec) {
    const PdmSystem sys = system_for(spec);
    const double span = 3.0 * longest_period(spec);
    const SolutionFn fn = [&](double t) { return exact_kinematics(spec, t); };
    constexpr int N = 3001;
    double worst = 0.0;
    for (int k = 0; k < N; ++k) {
        const double t = span * (k + 0.5) / N;
        for (double r : el1_residual(sys, fn, t)) worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Criterion 1 and 9: closed-form residuals

CheckReport exact_residual(const std::string& name, const std::string& family) {
    double worst = 0.0;
    std::string details;
    double slowest = 0.0;
    for (const auto& sc : scenarios(family)) {
        const auto t0 = std::chrono::steady_clock::now();
        const double r = residual_over_periods(sc.spec);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, secs);
        worst = std::max(worst, r);
        details += sc.label + ": " + fmt(r) + "; ";
    }
    details += "slowest " + fmt(slowest) + " s";
    CheckReport rep = below(name, worst, 1e-8, details);
    if (slowest > 1.0) {
        rep.passed = false;
        rep.details += " (over the 1 s budget)";
    }
    return rep;
}

CheckReport sw2_printed_eta2(const std::string& name) {
    const Scenario sc = sw2(2.0, Sw2Form::Amended);
    const PdmSystem sys = system_for(sc.spec);
    const std::vector<double> C = sc.spec.amplitude;
    const SolutionFn fn = [&](double t) { return sw2_printed_form(sc.spec.params, C, {}, t); };
    const double span = 3.0 * longest_period(sc.spec);
    double worst = 0.0;
    for (int k = 0; k < 3001; ++k)
        for (double r : el1_residual(sys, fn, span * (k + 0.5) / 3001)) worst = std::max(worst, std::fabs(r));
    return above(name, worst, 1e-1, "printed form with eta=2 misses EL-I");
}

CheckReport sw2_amended_eta2(const std::string& name) {
    const Scenario sc = sw2(2.0, Sw2Form::Amended);
    return below(name, residual_over_periods(sc.spec), 1e-8, "kappa -> eta^2 kappa, eta=2");
}

// ---------------------------------------------------------------------------
// Criterion 2: numerical vs exact

CheckReport trajectory_vs_exact(const std::string& name, const std::string& family, const CheckContext& ctx) {
    double worst = 0.0;
    std::string details;
    bool ok = true;
    for (const auto& sc : scenarios(family)) {
        const PdmSystem sys = system_for(sc.spec);
        const double t_end = 10.0 * longest_period(sc.spec);
        const Trajectory tr = integrate_scenario(sys, sc.spec, t_end, ctx);
        if (!completed(tr, details)) {
            ok = false;
            continue;
        }
        // cell-centred output grid, 64 cells per shortest period
        const auto cells = static_cast<int>(std::ceil(64.0 * t_end / shortest_period(sc.spec)));
        double dev = 0.0;
        for (int k = 0; k < cells; ++k) {
            const double t = t_end * (k + 0.5) / cells;
            const State num = tr.at(t);
            const State ex = exact_solution(sc.spec, t);
            for (std::size_t i = 0; i < ex.x.size(); ++i) dev = std::max(dev, std::fabs(num.x[i] - ex.x[i]));
        }
        worst = std::max(worst, dev);
        details += sc.label + ": " + fmt(dev) + "; ";
    }
    CheckReport r = below(name, worst, 1e-6, details);
    r.passed = r.passed && ok;
    return r;
}

// ---------------------------------------------------------------------------
// Criterion 3: energy drift

// Integrated one decade below the context tolerance: at 1e-10 the truncation
// error alone accumulates to about 2e-8 over 100 ML1(-) periods.
CheckReport energy_drift(const std::string& name, const std::string& family, const CheckContext& base) {
    CheckContext ctx = base;
    ctx.rel_tol = base.rel_tol / 10.0;
    double worst = 0.0;
    double worst_start = 0.0;
    std::string details;
    bool ok = true;
    for (const auto& sc : scenarios(family)) {
        const PdmSystem sys = system_for(sc.spec);
        const double E0 = exact_energy(sc.spec);
        const double start = std::fabs(total_energy(sys, exact_solution(sc.spec, 0.0)).total - E0) / std::fabs(E0);
        const Trajectory tr = integrate_scenario(sys, sc.spec, 100.0 * longest_period(sc.spec), ctx);
        if (!completed(tr, details)) ok = false;
        double drift = 0.0;
        for (const State& s : tr.samples) {
            bool singular = false;
            for (double x : s.x) singular = singular || x == 0.0;
            if (singular) continue;
            drift = std::max(drift, std::fabs(total_energy(sys, s).total - E0) / std::fabs(E0));
        }
        worst = std::max(worst, drift);
        worst_start = std::max(worst_start, start);
        details += sc.label + ": drift " + fmt(drift) + ", E(0) vs formula " + fmt(start) + "; ";
    }
    CheckReport r = below(name, worst, 1e-8, details);
    r.passed = r.passed && ok && worst_start <= 1e-12;
    return r;
}

// ---------------------------------------------------------------------------
// Criterion 4: frequency relations

double measured_period(const Scenario& sc, const CheckContext& ctx, std::string& details) {
    const PdmSystem sys = system_for(sc.spec);
    const Trajectory tr = integrate_scenario(sys, sc.spec, 10.5 * longest_period(sc.spec), ctx);
    if (!completed(tr, details)) return std::numeric_limits<double>::quiet_NaN();
    return estimate_period(tr, 0);
}

CheckReport frequency(const std::string& name, const std::vector<Scenario>& cases, const CheckContext& ctx) {
    double worst = 0.0;
    std::string details;
    for (const auto& sc : cases) {
        const double T = exact_period(sc.spec, 0);
        const double Tm = measured_period(sc, ctx, details);
        const double rel = std::isfinite(Tm) ? std::fabs(Tm - T) / T : std::numeric_limits<double>::infinity();
        worst = std::max(worst, rel);
        details += sc.label + ": " + fmt(rel) + "; ";
    }
    return below(name, worst, 1e-6, details);
}

CheckReport frequency_printed_ml1(const std::string& name, const CheckContext& ctx) {
    const Scenario sc = ml1(1.0, Branch::Minus, 0.8);
    std::string details;
    const double Tm = measured_period(sc, ctx, details);
    const auto& p = sc.spec.params;
    const double printed = 2.0 * kPi / printed_ml1_frequency(1.0, *p.lambda, p.sign, 0.8);
    const double rel = std::fabs(Tm - printed) / printed;
    return above(name, rel, 1e-6,
                 details + "printed relation (extra A^2 in the numerator) at A=0.8: relative error " + fmt(rel));
}

// ---------------------------------------------------------------------------
// Criterion 5: transformation identities

struct TransformCase {
    std::string label;
    SystemDescription desc;
    double lo, hi;
    double exclude = 0.0;  ///< skip |x| < exclude
};

std::vector<TransformCase> transform_cases() {
    std::vector<TransformCase> out;
    auto base = [](Family f) {
        SystemDescription d;
        d.family = f;
        d.n = 1;
        d.params.omega = std::vector<double>{1.3};
        return d;
    };
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        auto d = base(Family::ML1);
        d.params.lambda = 1.0;
        d.params.sign = b;
        out.push_back({b == Branch::Plus ? "ml1(+)" : "ml1(-)", d, b == Branch::Plus ? -3.0 : -0.99,
                       b == Branch::Plus ? 3.0 : 0.99});
    }
    for (double u : {1.0, 2.0, -0.5}) {
        auto d = base(Family::PowerLaw);
        d.params.upsilon = u;
        d.params.alpha = 1.5;
        d.mirrored = true;
        out.push_back({"powerlaw(" + fmt(u) + ")", d, -2.0, 2.0, 1e-2});
    }
    {
        auto d = base(Family::ML2);
        d.params.lambda = 0.25;
        d.params.sign = Branch::Minus;
        d.params.eta_const = std::vector<double>{2.0};
        out.push_back({"ml2", d, -1.99, 1.99});
    }
    {
        auto d = base(Family::Morse);
        d.params.zeta = std::vector<double>{0.8};
        out.push_back({"morse", d, -2.0, 2.0});
    }
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        auto d = base(Family::SW1);
        d.params.lambda = 0.5;
        d.params.sign = b;
        d.params.kappa = std::vector<double>{0.5};
        out.push_back({b == Branch::Plus ? "sw1(+)" : "sw1(-)", d, -1.4, 1.4, 0.1});
    }
    for (double eta : {-1.0, 2.0}) {
        auto d = base(Family::SW2);
        d.params.eta_exp = eta;
        d.params.beta = 1.2;
        d.params.kappa = std::vector<double>{0.5};
        out.push_back({"sw2(" + fmt(eta) + ")", d, 0.2, 3.0});
    }
    return out;
}

template <class Metric>
CheckReport transform_check(const std::string& name, double threshold, const CheckContext& ctx, Metric metric) {
    std::mt19937_64 rng(ctx.seed);
    double worst = 0.0;
    std::string details;
    for (const auto& c : transform_cases()) {
        const PdmSystem sys = build_system(c.desc);
        const NonlocalMap map = map_for(sys);
        const ReferenceSystem ref = reference_for(sys);
        std::uniform_real_distribution<double> dist(c.lo, c.hi);
        double w = 0.0;
        for (int k = 0; k < 10000;) {
            const double x = dist(rng);
            if (std::fabs(x) < c.exclude) continue;
            w = std::max(w, metric(map, sys, ref, x));
            ++k;
        }
        worst = std::max(worst, w);
        details += c.label + ": " + fmt(w) + "; ";
    }
    return below(name, worst, threshold, details);
}

CheckReport transform_g(const std::string& name, const CheckContext& ctx) {
    return transform_check(name, 1e-10, ctx,
                           [](const NonlocalMap& map, const PdmSystem&, const ReferenceSystem&, double x) {
                               const double g = g_metric(map, 0, x);
                               const double f = f_scale(map, 0, x);
                               const double mf2 = map.profiles[0].eval(x).m * f * f;
                               const double scale = std::max(g, mf2);
                               return scale == 0.0 ? 0.0 : std::fabs(g - mf2) / scale;
                           });
}

CheckReport transform_potential(const std::string& name, const CheckContext& ctx) {
    return transform_check(name, 1e-12, ctx,
                           [](const NonlocalMap& map, const PdmSystem& sys, const ReferenceSystem& ref, double x) {
                               const double xs[1] = {x};
                               return potential_match_residual(map, sys, ref, xs);
                           });
}

// ---------------------------------------------------------------------------
// Criterion 6: invariance along integrated trajectories

struct InvarianceCase {
    std::string label;
    PdmSystem system;
    State initial;
    double t_end;
    bool regularized = false;
};

std::vector<InvarianceCase> invariance_cases(const std::string& family) {
    std::vector<InvarianceCase> out;
    auto from_spec = [&](const Scenario& sc) {
        const PdmSystem sys = system_for(sc.spec);
        out.push_back({sc.label, sys, exact_solution(sc.spec, 0.0), 3.0 * longest_period(sc.spec),
                       sc.spec.family == ExactFamily::PowerLaw});
    };
    if (family == "ml2") {
        SystemDescription d;
        d.family = Family::ML2;
        d.params.omega = std::vector<double>{1.0};
        d.params.lambda = 0.5;
        d.params.sign = Branch::Minus;
        d.params.eta_const = std::vector<double>{1.5};
        out.push_back({"lambda=0.5(-) eta=1.5", build_system(d), State{0.0, {0.5}, {0.0}}, 20.0});
        d.n = 2;
        d.params.omega = std::vector<double>{1.0, 1.4};
        d.params.eta_const = std::vector<double>{1.5, 0.7};
        out.push_back({"n=2", build_system(d), State{0.0, {0.5, -0.3}, {0.2, 0.4}}, 20.0});
        return out;
    }
    for (const auto& sc : scenarios(family)) from_spec(sc);
    return out;
}

CheckReport invariance(const std::string& name, const std::string& family, const CheckContext& ctx) {
    double worst = 0.0;
    std::string details;
    bool ok = true;
    for (const auto& c : invariance_cases(family)) {
        const Trajectory tr = c.regularized ? integrate_regularized(c.system, c.initial, tolerances(ctx), c.t_end)
                                            : [&] {
                                                  IntegratorOptions o;
                                                  o.scheme = tolerances(ctx);
                                                  o.t_end = c.t_end;
                                                  return integrate(c.system, c.initial, o);
                                              }();
        if (!completed(tr, details)) ok = false;
        const NonlocalMap map = map_for(c.system);
        const ReferenceSystem ref = reference_for(c.system);
        double w = 0.0;
        std::size_t used = 0;
        for (std::size_t k = 0; k < tr.samples.size(); ++k) {
            const State& s = tr.samples[k];
            // the regularized samples carry ẍ ~ 1/x³ near the kinetic
            // singularity; keep to |x| >= 0.1 there
            bool skip = false;
            if (c.regularized)
                for (double x : s.x) skip = skip || std::fabs(x) < 0.1;
            if (skip) continue;
            for (double r : invariance_residual(map, ref, s, tr.accelerations[k])) w = std::max(w, std::fabs(r));
            ++used;
        }
        // τ along the trajectory, where f keeps one sign
        std::string tau_note;
        try {
            const auto mapped = map_to_reference(map, tr);
            tau_note = "tau(end)=" + fmt(mapped.tau.back()[0]);
        } catch (const Error& e) {
            tau_note = std::string("tau: ") + std::string(to_string(e.kind()));
        }
        worst = std::max(worst, w);
        details += c.label + ": " + fmt(w) + " over " + std::to_string(used) + " samples, " + tau_note + "; ";
    }
    CheckReport r = below(name, worst, 1e-6, details);
    r.passed = r.passed && ok;
    return r;
}

// ---------------------------------------------------------------------------
// Criterion 7: EL-II non-invariance

PdmSystem coupled_free(std::size_t n) {
    SystemDescription d;
    d.family = Family::Custom;
    d.kind = Kind::TypeII;
    d.n = n;
    d.coupled_mass = n == 1 ? "1 + x1^2" : "1 + x1^2 + x2^2";
    d.potential = {"0"};
    return build_system(d);
}

double max_mapped_residual(const PdmSystem& sys, const State& initial, const CheckContext& ctx,
                           std::string& details, double* obstruction = nullptr) {
    IntegratorOptions o;
    o.scheme = tolerances(ctx);
    o.t_end = 10.0;
    const Trajectory tr = integrate(sys, initial, o);
    completed(tr, details);
    double w = 0.0;
    double ob = 0.0;
    for (const State& s : tr.samples) {
        for (double r : el2_mapped_residual(sys, s)) w = std::max(w, std::fabs(r));
        ob = std::max(ob, el2_obstruction(sys, s));
    }
    if (obstruction) *obstruction = ob;
    return w;
}

CheckReport noninvariance_n2(const std::string& name, const CheckContext& ctx) {
    std::string details;
    double ob = 0.0;
    const double w = max_mapped_residual(coupled_free(2), State{0.0, {1.0, 0.5}, {0.3, -0.8}}, ctx, details, &ob);
    return above(name, w, 1e-2, details + "max obstruction term " + fmt(ob));
}

CheckReport noninvariance_n1(const std::string& name, const CheckContext& ctx) {
    std::string details;
    const double w = max_mapped_residual(coupled_free(1), State{0.0, {1.0}, {0.3}}, ctx, details);
    return below(name, w, 1e-8, details + "n=1 reduction of the same construction");
}

CheckReport el2_equals_el1(const std::string& name, const CheckContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> xs(-1.5, 1.5);
    std::uniform_real_distribution<double> vs(-2.0, 2.0);
    double worst = 0.0;
    // the coupled profile over one coordinate against the same profile as a
    // per-coordinate mass
    SystemDescription two;
    two.family = Family::Custom;
    two.kind = Kind::TypeII;
    two.coupled_mass = "1 + x1^2";
    two.potential = {"0.5*x1^2 + 0.1*x1^4"};
    SystemDescription one = two;
    one.kind = Kind::TypeI;
    one.coupled_mass.reset();
    one.mass = {"1 + x^2"};
    one.potential = {"0.5*x^2 + 0.1*x^4"};
    const PdmSystem s2 = build_system(two);
    const PdmSystem s1 = build_system(one);
    for (int k = 0; k < 1000; ++k) {
        const State st{0.0, {xs(rng)}, {vs(rng)}};
        const double a1 = el1_acceleration(s1, st)[0];
        const double a2 = el2_acceleration(s2, st)[0];
        worst = std::max(worst, std::fabs(a1 - a2) / std::max(1.0, std::fabs(a1)));
    }
    // catalog families at n = 1
    std::uniform_real_distribution<double> pos(0.2, 0.9);
    for (const char* fam : {"ml1", "powerlaw", "morse", "sw1", "sw2"}) {
        for (const auto& sc : scenarios(fam)) {
            if (sc.spec.n() != 1) continue;
            const PdmSystem sys = system_for(sc.spec);
            for (int k = 0; k < 200; ++k) {
                const State st{0.0, {pos(rng)}, {vs(rng)}};
                const double a1 = el1_acceleration(sys, st)[0];
                const double a2 = el2_acceleration(sys, st)[0];
                worst = std::max(worst, std::fabs(a1 - a2) / std::max(1.0, std::fabs(a1)));
            }
        }
    }
    return below(name, worst, 1e-12, "relative difference at seeded random states");
}

// ---------------------------------------------------------------------------
// Criterion 8: ML2 reduces to ML1 for lambda = -+1/eta^2

CheckReport ml2_reduction(const std::string& name, const CheckContext& ctx) {
    SystemDescription d2;
    d2.family = Family::ML2;
    d2.params.omega = std::vector<double>{1.0};
    d2.params.lambda = 0.25;
    d2.params.sign = Branch::Minus;
    d2.params.eta_const = std::vector<double>{2.0};
    SystemDescription d1 = d2;
    d1.family = Family::ML1;
    d1.params.eta_const.reset();
    const PdmSystem ml2 = build_system(d2);
    const PdmSystem ml1s = build_system(d1);

    std::string details;
    if (!ml2_reduction_check(d2.params)) details += "reduction condition not met; ";
    const Scenario sc{"", make_spec(ExactFamily::ML1, d1.params, {1.0})};
    const double T = exact_period(sc.spec, 0);
    IntegratorOptions o;
    o.scheme = tolerances(ctx);
    o.t_end = 5.0 * T;
    const State s0{0.0, {1.0}, {0.0}};
    const Trajectory a = integrate(ml2, s0, o);
    const Trajectory b = integrate(ml1s, s0, o);
    bool ok = completed(a, details) && completed(b, details) && ml2_reduction_check(d2.params);
    double dev = 0.0;
    double dev_exact = 0.0;
    const int cells = 64 * 5;
    for (int k = 0; k < cells; ++k) {
        const double t = o.t_end * (k + 0.5) / cells;
        const State sa = a.at(t);
        const State sb = b.at(t);
        dev = std::max({dev, std::fabs(sa.x[0] - sb.x[0]), std::fabs(sa.v[0] - sb.v[0])});
        dev_exact = std::max(dev_exact, std::fabs(sa.x[0] - exact_solution(sc.spec, t).x[0]));
    }
    details += "ML2 vs ML1 closed form: " + fmt(dev_exact);
    CheckReport r = below(name, dev, 1e-9, details);
    r.passed = r.passed && ok;
    return r;
}

// ---------------------------------------------------------------------------
// Criterion 10: parser and AD

// Random expressions in x. Divisions, logarithms and roots act on 1 + u²
// and bases of non-integer powers on 2 + sin u, so every expression is
// defined on the whole line.
std::string random_expression(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 13);
    std::uniform_real_distribution<double> cst(0.5, 2.0);
    auto sub = [&] { return random_expression(rng, depth - 1); };
    char buf[32];
    switch (pick(rng)) {
        case 0: return "x";
        case 1: std::snprintf(buf, sizeof buf, "%.3f", cst(rng)); return buf;
        case 2: return "(" + sub() + " + " + sub() + ")";
        case 3: return "(" + sub() + " - " + sub() + ")";
        case 4: return sub() + " * " + sub();
        case 5: return sub() + " / (1 + (" + sub() + ")^2)";
        case 6: return "sin(" + sub() + ")";
        case 7: return "cos(" + sub() + ")";
        case 8: return "exp(" + sub() + ")";
        case 9: return "ln(1 + (" + sub() + ")^2)";
        case 10: return "sqrt(1 + (" + sub() + ")^2)";
        case 11: return "(" + sub() + ")^" + std::to_string(std::uniform_int_distribution<int>(2, 3)(rng));
        case 12: return "(2 + sin(" + sub() + "))^(" + sub() + ")";
        default: return "-" + sub();
    }
}

struct AdErrors {
    double d1 = 0.0;
    double d2 = 0.0;
    std::size_t tested = 0;
    std::size_t skipped = 0;
};

// Ridders' extrapolation of a central difference D(h) = D + c₁h² + c₂h⁴ + ...
// from h = 0.01 downwards; returns the tableau entry with the smallest error
// estimate.
template <class Diff>
double ridders(Diff diff) {
    constexpr int N = 10;
    constexpr double shrink = 1.4, s2 = shrink * shrink;
    double a[N][N];
    double h = 0.01;
    a[0][0] = diff(h);
    double best = a[0][0];
    double err = std::numeric_limits<double>::infinity();
    for (int i = 1; i < N; ++i) {
        h /= shrink;
        a[0][i] = diff(h);
        double fac = s2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= s2;
            const double e = std::max(std::fabs(a[j][i] - a[j - 1][i]), std::fabs(a[j][i] - a[j - 1][i - 1]));
            if (e <= err) {
                err = e;
                best = a[j][i];
            }
        }
        if (std::fabs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
    }
    return best;
}

AdErrors ad_against_fd(const CheckContext& ctx) {
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    AdErrors out;
    while (out.tested < 1000) {
        const std::string text = random_expression(rng, 4);
        const expr::Expr e = expr::parse_expression(text);
        const double x = xs(rng);
        try {
            const expr::Dual2 d = e.eval(x);
            // keep values and derivatives where a finite-difference oracle is accurate;
            // relative error is measured against max(1, |AD value|)
            if (!(std::fabs(d.v) < 1e4 && std::fabs(d.d1) < 1e4 && std::fabs(d.d2) < 1e4)) {
                ++out.skipped;
                continue;
            }
            const double fd1 = ridders([&](double h) { return (e.eval(x + h).v - e.eval(x - h).v) / (2 * h); });
            const double fd2 =
                ridders([&](double h) { return (e.eval(x + h).v - 2 * d.v + e.eval(x - h).v) / (h * h); });
            out.d1 = std::max(out.d1, std::fabs(d.d1 - fd1) / std::max(1.0, std::fabs(d.d1)));
            out.d2 = std::max(out.d2, std::fabs(d.d2 - fd2) / std::max(1.0, std::fabs(d.d2)));
            ++out.tested;
        } catch (const Error&) {
            ++out.skipped;
        }
    }
    return out;
}

CheckReport parser_ad_d1(const std::string& name, const CheckContext& ctx) {
    const AdErrors e = ad_against_fd(ctx);
    return below(name, e.d1, 1e-6,
                 std::to_string(e.tested) + " expressions, " + std::to_string(e.skipped) + " draws skipped");
}

CheckReport parser_ad_d2(const std::string& name, const CheckContext& ctx) {
    const AdErrors e = ad_against_fd(ctx);
    return below(name, e.d2, 1e-4,
                 std::to_string(e.tested) + " expressions, " + std::to_string(e.skipped) + " draws skipped");
}

CheckReport parser_errors(const std::string& name, const CheckContext& ctx) {
    std::vector<std::string> bad = {"2*sin(x",  "",        "1+",     "(x",      "x)",    "sin x", "2..3",
                                    "foo(x)",   "y + 1",   "1 $ 2",  "x^",      "3x",    "()",    "sin()",
                                    "x + * 2",  "1e",      "((x)",   "cos(x))", "ln(,x)", "x ^ ^ 2", "  ",
                                    "sqrt(x",   "exp",     "x y",    ".",       "1 +- ", "*x"};
    std::mt19937_64 rng(ctx.seed + 7);
    const std::string noise = "()+-*/^.,$#a";
    std::size_t mutated = 0;
    for (int k = 0; k < 2000 && mutated < 500; ++k) {
        std::string s = random_expression(rng, 3);
        const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
        switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
            case 0: s.erase(pos, 1); break;
            case 1: s.insert(pos, 1, noise[std::uniform_int_distribution<std::size_t>(0, noise.size() - 1)(rng)]); break;
            default: s.resize(pos); break;
        }
        try {
            expr::parse_expression(s);
        } catch (const Error&) {
            bad.push_back(s);
            ++mutated;
        }
    }
    std::size_t failures = 0;
    std::string first;
    for (const auto& s : bad) {
        std::size_t where = 0;
        try {
            expr::parse_expression(s);
        } catch (const SyntaxError& e) {
            where = e.position();
        } catch (const UnknownIdentifier& e) {
            where = e.position();
        } catch (...) {
        }
        if (where < 1 || where > s.size() + 1) {
            ++failures;
            if (first.empty()) first = "'" + s + "'";
        }
    }
    return below(name, static_cast<double>(failures), 0.0,
                 std::to_string(bad.size()) + " malformed inputs" + (first.empty() ? "" : ", first unpositioned " + first));
}

// ---------------------------------------------------------------------------
// Criterion 11: RK4 order

CheckReport rk4_order(const std::string& name, const CheckContext&) {
    const AccelerationField field = [](const State& s) { return std::vector<double>{-s.x[0]}; };
    const double t_end = 20.0 * kPi;
    auto error_for = [&](double h) {
        IntegratorOptions o;
        o.scheme = FixedRK4{h};
        o.t_end = t_end;
        const Trajectory tr = integrate(field, State{0.0, {1.0}, {0.0}}, o);
        const State& s = tr.samples.back();
        return std::max(std::fabs(s.x[0] - std::cos(s.t)), std::fabs(s.v[0] + std::sin(s.t)));
    };
    const double e1 = error_for(0.1);
    const double e2 = error_for(0.05);
    const double factor = e1 / e2;
    CheckReport r = below(name, factor, 20.0, "error " + fmt(e1) + " -> " + fmt(e2) + ", accepted range [12, 20]");
    r.passed = factor >= 12.0 && factor <= 20.0;
    return r;
}

// ---------------------------------------------------------------------------
// Registry

using CheckFn = std::function<CheckReport(const std::string&, const CheckContext&)>;

struct Entry {
    CheckInfo info;
    CheckFn fn;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e;
        auto add = [&](std::string name, int crit, bool xfail, std::string summary, CheckFn fn) {
            e.push_back({{std::move(name), crit, xfail, std::move(summary)}, std::move(fn)});
        };
        for (const char* fam : {"harmonic", "isotonic", "ml1", "powerlaw", "morse", "sw1"}) {
            const std::string f = fam;
            add("exact-residual:" + f, 1, false, "EL-I residual of the closed form over 3 periods",
                [f](const std::string& n, const CheckContext&) { return exact_residual(n, f); });
        }
        add("exact-residual:sw2-eta-1", 9, false, "printed SW2 closed form at eta=-1",
            [](const std::string& n, const CheckContext&) { return exact_residual(n, "sw2"); });
        add("exact-residual:sw2-paper-form", 9, true, "printed SW2 closed form at eta=2 must miss EL-I",
            [](const std::string& n, const CheckContext&) { return sw2_printed_eta2(n); });
        add("exact-residual:sw2-amended", 9, false, "SW2 closed form with kappa -> eta^2 kappa at eta=2",
            [](const std::string& n, const CheckContext&) { return sw2_amended_eta2(n); });

        for (const char* fam : {"ml1", "powerlaw", "morse", "sw1", "sw2"}) {
            const std::string f = fam;
            add("trajectory:" + f, 2, false, "adaptive integration against the closed form over 10 periods",
                [f](const std::string& n, const CheckContext& c) { return trajectory_vs_exact(n, f, c); });
            add("energy-drift:" + f, 3, false, "relative energy drift over 100 periods",
                [f](const std::string& n, const CheckContext& c) { return energy_drift(n, f, c); });
        }
        add("frequency:powerlaw", 4, false, "measured period against Omega = (1+upsilon) omega",
            [](const std::string& n, const CheckContext& c) { return frequency(n, scenarios("powerlaw"), c); });
        add("frequency:ml1", 4, false, "measured period against Omega^2 = omega^2/(1 +- lambda A^2)",
            [](const std::string& n, const CheckContext& c) {
                return frequency(n,
                                 {ml1(0.5, Branch::Plus, 0.5), ml1(0.5, Branch::Minus, 0.8), ml1(1.0, Branch::Plus, 1.0),
                                  ml1(1.0, Branch::Minus, 0.8)},
                                 c);
            });
        add("frequency:ml1-printed", 4, true, "the printed ML1 relation must miss the measured period for A != 1",
            [](const std::string& n, const CheckContext& c) { return frequency_printed_ml1(n, c); });

        add("transform:g-metric", 5, false, "(dq/dx)^2 = m f^2 at 10^4 points per family",
            [](const std::string& n, const CheckContext& c) { return transform_g(n, c); });
        add("transform:potential-match", 5, false, "|V_I(x) - V(q(x))| at 10^4 points per family",
            [](const std::string& n, const CheckContext& c) { return transform_potential(n, c); });

        for (const char* fam : {"ml1", "powerlaw", "ml2", "morse", "sw1", "sw2"}) {
            const std::string f = fam;
            add("invariance:" + f, 6, false, "mapped EL-I trajectory satisfies EL-G",
                [f](const std::string& n, const CheckContext& c) { return invariance(n, f, c); });
        }

        add("noninvariance:n2", 7, true, "mapped EL-II trajectory misses EL-G for n=2",
            [](const std::string& n, const CheckContext& c) { return noninvariance_n2(n, c); });
        add("noninvariance:n1", 7, false, "same construction at n=1 satisfies EL-G",
            [](const std::string& n, const CheckContext& c) { return noninvariance_n1(n, c); });
        add("el2-el1:n1", 7, false, "EL-II equals EL-I for n=1",
            [](const std::string& n, const CheckContext& c) { return el2_equals_el1(n, c); });

        add("ml2-reduction", 8, false, "ML2 with lambda = -+1/eta^2 follows ML1 over 5 periods",
            [](const std::string& n, const CheckContext& c) { return ml2_reduction(n, c); });

        add("parser:ad-first", 10, false, "AD first derivatives against central differences",
            [](const std::string& n, const CheckContext& c) { return parser_ad_d1(n, c); });
        add("parser:ad-second", 10, false, "AD second derivatives against central differences",
            [](const std::string& n, const CheckContext& c) { return parser_ad_d2(n, c); });
        add("parser:malformed", 10, false, "malformed inputs raise positioned errors",
            [](const std::string& n, const CheckContext& c) { return parser_errors(n, c); });

        add("rk4-order", 11, false, "RK4 error reduction per step halving",
            [](const std::string& n, const CheckContext& c) { return rk4_order(n, c); });

        std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.info.name < b.info.name; });
        return e;
    }();
    return entries;
}

const Entry* find(const std::string& name) {
    for (const auto& e : registry())
        if (e.info.name == name) return &e;
    return nullptr;
}

}  // namespace

const std::vector<CheckInfo>& registered_checks() {
    static const std::vector<CheckInfo> infos = [] {
        std::vector<CheckInfo> v;
        for (const auto& e : registry()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

CheckReport run_check(const std::string& name, const CheckContext& ctx) {
    const Entry* e = find(name);
    if (!e) throw Error(ErrorKind::UnknownCheck, "unknown check '" + name + "'");
    CheckReport r;
    try {
        r = e->fn(name, ctx);
    } catch (const std::exception& ex) {
        r.name = name;
        r.passed = false;
        r.metric = std::numeric_limits<double>::quiet_NaN();
        r.details = std::string("raised: ") + ex.what();
    }
    r.expected_fail = e->info.expected_fail;
    return r;
}

SuiteResult run_suite(const std::vector<std::string>& selection, const CheckContext& ctx) {
    std::vector<std::string> names;
    for (const auto& sel : selection) {
        if (sel == "all" || sel == "default") {
            for (const auto& e : registry()) names.push_back(e.info.name);
        } else if (sel.size() > 1 && sel.ends_with("*")) {
            const std::string prefix = sel.substr(0, sel.size() - 1);
            bool any = false;
            for (const auto& e : registry())
                if (e.info.name.starts_with(prefix)) {
                    names.push_back(e.info.name);
                    any = true;
                }
            if (!any) throw Error(ErrorKind::UnknownCheck, "no check matches '" + sel + "'");
        } else {
            if (!find(sel)) throw Error(ErrorKind::UnknownCheck, "unknown check '" + sel + "'");
            names.push_back(sel);
        }
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    SuiteResult out;
    out.reports.resize(names.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min<std::size_t>(names.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.push_back(std::async(std::launch::async, [&] {
            for (std::size_t k = next++; k < names.size(); k = next++) out.reports[k] = run_check(names[k], ctx);
        }));
    for (auto& f : pool) f.get();

    for (const auto& r : out.reports) {
        switch (r.outcome()) {
            case Outcome::Pass: ++out.passes; break;
            case Outcome::ExpectedFail: ++out.expected_fails; break;
            case Outcome::Fail: ++out.failures; break;
        }
    }
    return out;
}

}  // namespace pdm
