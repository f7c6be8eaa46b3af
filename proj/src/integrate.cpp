#include "pdm/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "pdm/eom.hpp"
#include "pdm/error.hpp"

namespace pdm {

using Vec = std::vector<double>;

void validate(const IntegratorOptions& opts) {
    if (!std::isfinite(opts.t_end)) throw ParameterError(ErrorKind::InvalidParameter, "t_end", "must be finite");
    if (const auto* f = std::get_if<FixedRK4>(&opts.scheme)) {
        if (!(f->h > 0.0) || !std::isfinite(f->h))
            throw ParameterError(ErrorKind::InvalidParameter, "h", "step must be positive");
        return;
    }
    const auto& a = std::get<AdaptiveEmbedded45>(opts.scheme);
    if (!(a.rel_tol > 0.0)) throw ParameterError(ErrorKind::InvalidParameter, "rel_tol", "must be positive");
    if (!(a.abs_tol > 0.0)) throw ParameterError(ErrorKind::InvalidParameter, "abs_tol", "must be positive");
    if (!(a.h_init > 0.0)) throw ParameterError(ErrorKind::InvalidParameter, "h_init", "must be positive");
    if (!(a.h_min > 0.0) || a.h_min > a.h_init)
        throw ParameterError(ErrorKind::InvalidParameter, "h_min", "must be positive and at most h_init");
    if (!(a.h_max >= a.h_init)) throw ParameterError(ErrorKind::InvalidParameter, "h_max", "must be at least h_init");
}

State rk4_step(const AccelerationField& field, const State& s, double h) {
    const std::size_t n = s.x.size();
    auto shifted = [&](double dt, const Vec& dx, const Vec& dv, double c) {
        State out{s.t + dt, s.x, s.v};
        for (std::size_t i = 0; i < n; ++i) {
            out.x[i] += c * dx[i];
            out.v[i] += c * dv[i];
        }
        return out;
    };
    const Vec k1x = s.v;
    const Vec k1v = field(s);
    const State s2 = shifted(0.5 * h, k1x, k1v, 0.5 * h);
    const Vec k2x = s2.v;
    const Vec k2v = field(s2);
    const State s3 = shifted(0.5 * h, k2x, k2v, 0.5 * h);
    const Vec k3x = s3.v;
    const Vec k3v = field(s3);
    const State s4 = shifted(h, k3x, k3v, h);
    const Vec k4x = s4.v;
    const Vec k4v = field(s4);
    State out{s.t + h, s.x, s.v};
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] += h / 6.0 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]);
        out.v[i] += h / 6.0 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
    }
    return out;
}

namespace {

struct Failure {
    std::size_t coordinate = 0;
    std::string message;
};

Failure failure_from(const Error& e) {
    if (const auto* d = dynamic_cast<const DomainViolation*>(&e)) return {d->coordinate(), e.what()};
    return {0, e.what()};
}

bool all_finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

// First-order system y' = F(s, y). Throws pdm::Error on a domain problem.
using Rhs = std::function<void(double, const Vec&, Vec&)>;

struct Dp45Run {
    const Rhs& rhs;
    AdaptiveEmbedded45 tol;
    std::size_t max_steps;
    /// Upper bound on s; the last step is clipped to land on it.
    double s_end;
    /// Optional early stop evaluated after each accepted step.
    std::function<bool(double, const Vec&)> done;
    std::function<void(double, const Vec&, const Vec&)> on_accept;
    /// Component 0 is a clock: its error is measured on a unit scale
    /// instead of relative to its (growing) magnitude.
    bool clock_first = false;
};

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

Termination run_dp45(const Dp45Run& run, double s, Vec y, StepStats& stats) {
    const std::size_t dim = y.size();
    Vec k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim), y_new(dim);
    Termination term;
    term.t = s;

    try {
        run.rhs(s, y, k1);
        if (!all_finite(k1)) throw Error(ErrorKind::SingularCoefficient, "non-finite derivative at the initial state");
    } catch (const Error& e) {
        const Failure f = failure_from(e);
        return Termination{Termination::Kind::DomainViolation, s, f.coordinate, f.message};
    }
    run.on_accept(s, y, k1);

    constexpr double beta = 0.04;
    constexpr double safe = 0.9;
    constexpr double fac_min = 0.2;  // largest growth 1/fac_min
    constexpr double fac_max = 10.0;  // largest shrink
    const double expo1 = 0.2 - beta * 0.75;
    double fac_old = 1e-4;
    double h = std::min(run.tol.h_init, run.tol.h_max);
    bool last_rejected = false;
    Failure last_failure;
    bool have_failure = false;
    std::size_t steps = 0;

    while (s < run.s_end) {
        if (++steps > run.max_steps)
            return Termination{Termination::Kind::StepFailure, s, 0, "step budget exhausted"};
        bool clipped = false;
        if (s + h >= run.s_end) {
            h = run.s_end - s;
            clipped = true;
        }
        if (h < run.tol.h_min && !clipped) {
            if (have_failure)
                return Termination{Termination::Kind::DomainViolation, s, last_failure.coordinate,
                                   last_failure.message};
            return Termination{Termination::Kind::StepFailure, s, 0, "step size fell below h_min"};
        }

        auto stage = [&](Vec& k, double cs, auto&&... terms) {
            for (std::size_t i = 0; i < dim; ++i) {
                double acc = 0.0;
                ((acc += terms.first * (*terms.second)[i]), ...);
                tmp[i] = y[i] + h * acc;
            }
            run.rhs(s + cs * h, tmp, k);
            if (!all_finite(k)) throw Error(ErrorKind::SingularCoefficient, "non-finite derivative in a stage");
        };
        using P = std::pair<double, const Vec*>;
        bool stage_failed = false;
        try {
            stage(k2, c2, P{a21, &k1});
            stage(k3, c3, P{a31, &k1}, P{a32, &k2});
            stage(k4, c4, P{a41, &k1}, P{a42, &k2}, P{a43, &k3});
            stage(k5, c5, P{a51, &k1}, P{a52, &k2}, P{a53, &k3}, P{a54, &k4});
            stage(k6, 1.0, P{a61, &k1}, P{a62, &k2}, P{a63, &k3}, P{a64, &k4}, P{a65, &k5});
            for (std::size_t i = 0; i < dim; ++i)
                y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            run.rhs(s + h, y_new, k7);
            if (!all_finite(k7) || !all_finite(y_new))
                throw Error(ErrorKind::SingularCoefficient, "non-finite state at the end of a step");
        } catch (const Error& e) {
            last_failure = failure_from(e);
            have_failure = true;
            stage_failed = true;
        }
        if (stage_failed) {
            ++stats.rejected;
            h *= 0.5;
            last_rejected = true;
            continue;
        }

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double mag = (run.clock_first && i == 0) ? 1.0 : std::max(std::fabs(y[i]), std::fabs(y_new[i]));
            const double sk = run.tol.abs_tol + run.tol.rel_tol * mag;
            const double ei =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]) / sk;
            err += ei * ei;
        }
        err = std::sqrt(err / static_cast<double>(dim));

        const double fac11 = std::pow(std::max(err, 1e-300), expo1);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(fac_old, beta) / safe;
            fac = std::clamp(fac, 1.0 / fac_max, 1.0 / fac_min);
            double h_new = h / fac;
            if (last_rejected) h_new = std::min(h_new, h);
            fac_old = std::max(err, 1e-4);
            s = clipped ? run.s_end : s + h;
            std::swap(y, y_new);
            std::swap(k1, k7);
            ++stats.accepted;
            stats.max_error_estimate = std::max(stats.max_error_estimate, err);
            have_failure = false;
            last_rejected = false;
            run.on_accept(s, y, k1);
            if (run.done && run.done(s, y)) break;
            h = std::min(h_new, run.tol.h_max);
        } else {
            ++stats.rejected;
            h /= std::min(1.0 / fac_min, fac11 / safe);
            last_rejected = true;
        }
        if (s + h == s)
            return Termination{Termination::Kind::StepFailure, s, 0, "step size underflow"};
    }
    term.t = s;
    return term;
}

Trajectory integrate_fixed(const AccelerationField& field, const State& initial, const IntegratorOptions& opts,
                           double h) {
    Trajectory traj;
    const std::size_t n = initial.x.size();
    auto check = [&](const State& st) {
        if (opts.guard)
            if (const auto bad = opts.guard(st))
                throw DomainViolation(*bad, st.x[*bad], "x" + std::to_string(*bad + 1) + " left the domain");
    };
    auto guarded_field = [&](const State& st) {
        check(st);
        Vec a = field(st);
        if (!all_finite(a)) throw Error(ErrorKind::SingularCoefficient, "non-finite acceleration");
        return a;
    };

    State cur = initial;
    try {
        traj.accelerations.push_back(guarded_field(cur));
    } catch (const Error& e) {
        const Failure f = failure_from(e);
        traj.termination = {Termination::Kind::DomainViolation, cur.t, f.coordinate, f.message};
        return traj;
    }
    traj.samples.push_back(cur);
    const double span = opts.t_end - initial.t;
    const auto steps = static_cast<std::size_t>(std::ceil(span / h - 1e-9));
    for (std::size_t k = 0; k < steps; ++k) {
        if (k >= opts.max_steps) {
            traj.termination = {Termination::Kind::StepFailure, cur.t, 0, "step budget exhausted"};
            return traj;
        }
        const double hk = (k + 1 == steps) ? opts.t_end - cur.t : h;
        try {
            State next = rk4_step(guarded_field, cur, hk);
            if (k + 1 == steps) next.t = opts.t_end;
            Vec a = guarded_field(next);
            cur = std::move(next);
            traj.samples.push_back(cur);
            traj.accelerations.push_back(std::move(a));
            ++traj.stats.accepted;
        } catch (const Error& e) {
            const Failure f = failure_from(e);
            traj.termination = {Termination::Kind::DomainViolation, cur.t, f.coordinate, f.message};
            return traj;
        }
    }
    (void)n;
    traj.termination.t = cur.t;
    return traj;
}

}  // namespace

Trajectory integrate(const AccelerationField& field, const State& initial, const IntegratorOptions& opts) {
    validate(opts);
    if (initial.x.size() != initial.v.size())
        throw ParameterError(ErrorKind::InvalidParameter, "initial", "x and v must have the same length");
    if (!(opts.t_end > initial.t)) throw ParameterError(ErrorKind::InvalidParameter, "t_end", "must exceed t0");

    if (const auto* f = std::get_if<FixedRK4>(&opts.scheme)) return integrate_fixed(field, initial, opts, f->h);

    const std::size_t n = initial.x.size();
    Trajectory traj;
    State st;
    st.x.resize(n);
    st.v.resize(n);
    const Rhs rhs = [&](double t, const Vec& y, Vec& dy) {
        st.t = t;
        std::copy(y.begin(), y.begin() + n, st.x.begin());
        std::copy(y.begin() + n, y.end(), st.v.begin());
        if (opts.guard)
            if (const auto bad = opts.guard(st))
                throw DomainViolation(*bad, st.x[*bad], "x" + std::to_string(*bad + 1) + " left the domain");
        const Vec a = field(st);
        std::copy(st.v.begin(), st.v.end(), dy.begin());
        std::copy(a.begin(), a.end(), dy.begin() + n);
    };
    Vec y(2 * n);
    std::copy(initial.x.begin(), initial.x.end(), y.begin());
    std::copy(initial.v.begin(), initial.v.end(), y.begin() + n);

    Dp45Run run{rhs, std::get<AdaptiveEmbedded45>(opts.scheme), opts.max_steps, opts.t_end, nullptr,
                [&](double t, const Vec& yy, const Vec& dy) {
                    traj.samples.push_back(State{t, Vec(yy.begin(), yy.begin() + n), Vec(yy.begin() + n, yy.end())});
                    traj.accelerations.emplace_back(dy.begin() + n, dy.end());
                }};
    traj.termination = run_dp45(run, initial.t, std::move(y), traj.stats);
    return traj;
}

AccelerationField field_for(const PdmSystem& system) {
    return [&system](const State& s) { return acceleration(system, s); };
}

DomainGuard guard_for(const PdmSystem& system) {
    return [&system](const State& s) -> std::optional<std::size_t> {
        if (system.kind() == Kind::TypeII) {
            if (system.admits(s.x)) return std::nullopt;
            return 0;
        }
        for (std::size_t i = 0; i < system.n(); ++i)
            if (!system.profile(i).admits(s.x[i])) return i;
        return std::nullopt;
    };
}

Trajectory integrate(const PdmSystem& system, const State& initial, IntegratorOptions opts) {
    if (initial.x.size() != system.n())
        throw ParameterError(ErrorKind::InvalidParameter, "initial.x",
                             "expected " + std::to_string(system.n()) + " coordinates");
    if (!opts.guard) opts.guard = guard_for(system);
    Trajectory traj = integrate(field_for(system), initial, opts);
    // Approaching a finite domain edge the mass blows up and the step size
    // collapses before any stage crosses the edge. Report that as a domain
    // violation of the coordinate next to the edge.
    if (traj.termination.kind == Termination::Kind::StepFailure && system.kind() == Kind::TypeI &&
        !traj.samples.empty()) {
        const State& last = traj.samples.back();
        for (std::size_t i = 0; i < system.n(); ++i) {
            const Interval d = system.profile(i).domain();
            for (double edge : {d.lo, d.hi}) {
                if (!std::isfinite(edge)) continue;
                if (std::fabs(last.x[i] - edge) <= 1e-4 * std::max(1.0, std::fabs(edge))) {
                    traj.termination.kind = Termination::Kind::DomainViolation;
                    traj.termination.coordinate = i;
                    traj.termination.message = "step size collapsed at x" + std::to_string(i + 1) + " = " +
                                               std::to_string(last.x[i]) + " next to the domain edge " +
                                               std::to_string(edge);
                    return traj;
                }
            }
        }
    }
    return traj;
}

namespace {

// √m for the Sundman transform. Mirrored power laws vanish at the origin
// instead of being undefined there.
double root_mass(const MassProfile& p, double x, std::size_t i) {
    if (x == 0.0)
        if (const auto* pl = std::get_if<profile::PowerLaw>(&p.family()); pl && pl->mirrored) {
            if (pl->upsilon > 0) return 0.0;
            throw DomainViolation(ErrorKind::SingularPoint, i, x, "mass diverges at the origin");
        }
    return std::sqrt(p.eval(x, i).m);
}

}  // namespace

Trajectory integrate_regularized(const PdmSystem& system, const State& initial, const AdaptiveEmbedded45& tol,
                                 double t_end) {
    if (system.kind() != Kind::TypeI)
        throw Error(ErrorKind::InvalidParameter, "regularized integration needs per-coordinate mass profiles");
    IntegratorOptions check;
    check.scheme = tol;
    check.t_end = t_end;
    validate(check);
    const std::size_t n = system.n();
    if (initial.x.size() != n || initial.v.size() != n)
        throw ParameterError(ErrorKind::InvalidParameter, "initial", "expected " + std::to_string(n) + " coordinates");
    if (!(t_end > initial.t)) throw ParameterError(ErrorKind::InvalidParameter, "t_end", "must exceed t0");

    // y = (t, x₁..xₙ, p₁..pₙ) as functions of s
    Vec rm(n);
    const Rhs rhs = [&](double, const Vec& y, Vec& dy) {
        for (std::size_t i = 0; i < n; ++i) rm[i] = root_mass(system.profile(i), y[1 + i], i);
        const auto grad = system.potential().eval(std::span<const double>(y.data() + 1, n)).grad;
        double h = 1.0;
        for (double r : rm) h *= r;
        dy[0] = h;
        for (std::size_t i = 0; i < n; ++i) {
            double others = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others *= rm[j];
            dy[1 + i] = y[1 + n + i] * others;
            dy[1 + n + i] = -grad[i] * others;
        }
    };

    Vec y(1 + 2 * n);
    y[0] = initial.t;
    for (std::size_t i = 0; i < n; ++i) {
        y[1 + i] = initial.x[i];
        y[1 + n + i] = root_mass(system.profile(i), initial.x[i], i) * initial.v[i];
    }

    Trajectory traj;
    // y and y′ in s at each accepted step, for dense output in s where the
    // solution stays smooth through the kinetic singularity
    struct Path {
        std::vector<double> s;
        std::vector<Vec> y, dy;
    };
    auto path = std::make_shared<Path>();
    auto record = [&](double s, const Vec& yy, const Vec& dy) {
        path->s.push_back(s);
        path->y.push_back(yy);
        path->dy.push_back(dy);
        State st;
        st.t = yy[0];
        st.x.assign(yy.begin() + 1, yy.begin() + 1 + n);
        st.v.resize(n);
        Vec a(n);
        const double h = dy[0];
        for (std::size_t i = 0; i < n; ++i) {
            const double r = root_mass(system.profile(i), st.x[i], i);
            st.v[i] = yy[1 + n + i] / r;
            // ẍ = d(p/√m)/dt with p′ and x′ taken in s
            const double ds_dt = 1.0 / h;
            if (r > 0.0 && std::isfinite(ds_dt)) {
                const ProfileValue pv = system.profile(i).eval(st.x[i], i);
                const double dp_dt = dy[1 + n + i] * ds_dt;
                const double dr_dt = pv.dm / (2.0 * r) * st.v[i];
                a[i] = (dp_dt - st.v[i] * dr_dt) / r;
            } else {
                a[i] = std::numeric_limits<double>::quiet_NaN();
            }
        }
        traj.samples.push_back(std::move(st));
        traj.accelerations.push_back(std::move(a));
    };
    Dp45Run run{rhs,
                tol,
                20'000'000,
                std::numeric_limits<double>::infinity(),
                [t_end](double, const Vec& yy) { return yy[0] >= t_end; },
                record,
                true};
    traj.termination = run_dp45(run, 0.0, std::move(y), traj.stats);
    if (!traj.samples.empty()) traj.termination.t = traj.samples.back().t;

    traj.dense = [path, profiles = system.profiles(), n](double t) {
        const auto& ys = path->y;
        const auto it = std::upper_bound(ys.begin(), ys.end(), t, [](double v, const Vec& yy) { return v < yy[0]; });
        const std::size_t k = static_cast<std::size_t>(it - ys.begin()) - 1;
        const double h = path->s[k + 1] - path->s[k];
        const Vec& a = ys[k];
        const Vec& b = ys[k + 1];
        const Vec& da = path->dy[k];
        const Vec& db = path->dy[k + 1];
        auto cubic = [&](std::size_t j, double u) {
            const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
            const double h10 = u * (1 - u) * (1 - u);
            const double h01 = u * u * (3 - 2 * u);
            const double h11 = u * u * (u - 1);
            return h00 * a[j] + h * h10 * da[j] + h01 * b[j] + h * h11 * db[j];
        };
        double lo = 0.0, hi = 1.0;
        for (int it2 = 0; it2 < 100 && hi - lo > 1e-16; ++it2) {
            const double mid = 0.5 * (lo + hi);
            (cubic(0, mid) < t ? lo : hi) = mid;
        }
        const double u = 0.5 * (lo + hi);
        State out;
        out.t = t;
        out.x.resize(n);
        out.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.x[i] = cubic(1 + i, u);
            const double r = root_mass(profiles[i], out.x[i], i);
            out.v[i] = r > 0.0 ? cubic(1 + n + i, u) / r : std::numeric_limits<double>::infinity();
        }
        return out;
    };
    return traj;
}

namespace {

double hermite(double s, double h, double ya, double da, double yb, double db) {
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * ya + h * h10 * da + h01 * yb + h * h11 * db;
}

// Root of a cubic Hermite segment with a sign change, by bisection.
double hermite_root(double h, double ya, double da, double yb, double db) {
    double lo = 0.0, hi = 1.0;
    const bool rising = yb > ya;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = hermite(mid, h, ya, da, yb, db);
        if ((v < 0.0) == rising)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Time at which the segment a→b crosses `level` upward.
double crossing_time(const State& a, const State& b, std::size_t i, double level) {
    const double dt = b.t - a.t;
    const double ya = a.x[i] - level;
    const double yb = b.x[i] - level;
    const double chord = (yb - ya) / dt;
    const double va = a.v[i];
    const double vb = b.v[i];
    const bool smooth = std::isfinite(va) && std::isfinite(vb) && std::fabs(va) < 10 * std::fabs(chord) &&
                        std::fabs(vb) < 10 * std::fabs(chord);
    if (smooth) return a.t + dt * hermite_root(dt, ya, va, yb, vb);
    if (va > 0.0 && vb > 0.0) {
        // steep segment: interpolate t(x), whose slope 1/v stays bounded
        const double dx = yb - ya;
        const double s = -ya / dx;
        return hermite(s, dx, a.t, 1.0 / va, b.t, 1.0 / vb);
    }
    return a.t + dt * (-ya / (yb - ya));
}

}  // namespace

double estimate_period(const Trajectory& traj, std::size_t i) {
    const auto& smp = traj.samples;
    if (smp.size() < 3) throw Error(ErrorKind::NoPeriod, "trajectory too short for a period estimate");
    if (i >= smp.front().x.size()) throw ParameterError(ErrorKind::InvalidParameter, "coordinate", "out of range");

    double area = 0.0;
    for (std::size_t k = 0; k + 1 < smp.size(); ++k)
        area += 0.5 * (smp[k].x[i] + smp[k + 1].x[i]) * (smp[k + 1].t - smp[k].t);
    const double level = area / (smp.back().t - smp.front().t);

    std::vector<double> crossings;
    for (std::size_t k = 0; k + 1 < smp.size(); ++k) {
        const double ya = smp[k].x[i] - level;
        const double yb = smp[k + 1].x[i] - level;
        if (ya < 0.0 && yb >= 0.0) crossings.push_back(crossing_time(smp[k], smp[k + 1], i, level));
    }
    if (crossings.size() < 2)
        throw Error(ErrorKind::NoPeriod, "fewer than two upward crossings of the mean level");
    std::vector<double> periods;
    for (std::size_t k = 0; k + 1 < crossings.size(); ++k) periods.push_back(crossings[k + 1] - crossings[k]);
    const double mean = std::accumulate(periods.begin(), periods.end(), 0.0) / static_cast<double>(periods.size());
    const auto [lo, hi] = std::minmax_element(periods.begin(), periods.end());
    if (*hi - *lo > 0.01 * mean) throw Error(ErrorKind::NoPeriod, "period estimates spread by more than 1%");
    return mean;
}

}  // namespace pdm
