#include "pdm/transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdm/error.hpp"

namespace pdm {

namespace {

double eta_of(const NonlocalMap& map, std::size_t i) {
    if (!map.params.eta_const || i >= map.params.eta_const->size())
        throw ParameterError(ErrorKind::MissingParameter, "eta_const", "required by the constant map");
    return (*map.params.eta_const)[i];
}

double zeta_of(const NonlocalMap& map, std::size_t i) {
    if (!map.params.zeta || i >= map.params.zeta->size())
        throw ParameterError(ErrorKind::MissingParameter, "zeta", "required by the Morse map");
    return (*map.params.zeta)[i];
}

}  // namespace

MapValue q_map(const NonlocalMap& map, std::size_t i, double x) {
    const ProfileValue p = map.profiles.at(i).eval(x, i);
    const double r = std::sqrt(p.m);
    const double dr = p.dm / (2.0 * r);
    switch (map.kind) {
        case MapKind::OscillatorMap:
        case MapKind::IsotonicMap:
            return {x * r, r + x * dr};
        case MapKind::ConstantMap: {
            const double eta = eta_of(map, i);
            return {eta * r, eta * dr};
        }
        case MapKind::MorseMap: {
            const double z = zeta_of(map, i);
            const double e = std::exp(-z * x);
            return {r * (1.0 - e), dr * (1.0 - e) + r * z * e};
        }
    }
    return {0.0, 0.0};
}

double f_scale(const NonlocalMap& map, std::size_t i, double x) {
    const ProfileValue p = map.profiles.at(i).eval(x, i);
    const double k = p.dm / (2.0 * p.m);
    switch (map.kind) {
        case MapKind::OscillatorMap:
        case MapKind::IsotonicMap:
            return 1.0 + x * k;
        case MapKind::ConstantMap:
            return eta_of(map, i) * k;
        case MapKind::MorseMap: {
            const double z = zeta_of(map, i);
            return k + (z - k) * std::exp(-z * x);
        }
    }
    return 0.0;
}

double g_metric(const NonlocalMap& map, std::size_t i, double x) {
    const double d = q_map(map, i, x).dq_dx;
    return d * d;
}

double inverse_q_map(const NonlocalMap& map, std::size_t i, double q, double lo, double hi) {
    double qlo = q_map(map, i, lo).q - q;
    double qhi = q_map(map, i, hi).q - q;
    if (qlo == 0.0) return lo;
    if (qhi == 0.0) return hi;
    if ((qlo > 0.0) == (qhi > 0.0))
        throw DomainViolation(i, q, "q = " + std::to_string(q) + " is not bracketed on the given interval");
    const bool rising = qhi > 0.0;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const MapValue v = q_map(map, i, x);
        const double r = v.q - q;
        if (r == 0.0) return x;
        if ((r < 0.0) == rising)
            lo = x;
        else
            hi = x;
        double next = x - r / v.dq_dx;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 4e-16 * std::max(1.0, std::fabs(x)) || hi - lo <= 4e-16 * std::max(1.0, std::fabs(x)))
            return next;
        x = next;
    }
    return x;
}

NonlocalMap map_for(const PdmSystem& system) {
    if (system.kind() != Kind::TypeI)
        throw Error(ErrorKind::UnsupportedFamily, "the nonlocal map needs per-coordinate mass profiles");
    NonlocalMap map;
    map.profiles = system.profiles();
    map.params = system.params();
    switch (system.family()) {
        case Family::HarmonicReference:
        case Family::ML1:
        case Family::PowerLaw:
            map.kind = MapKind::OscillatorMap;
            break;
        case Family::ML2:
            map.kind = MapKind::ConstantMap;
            break;
        case Family::Morse:
            map.kind = MapKind::MorseMap;
            break;
        case Family::IsotonicReference:
        case Family::SW1:
        case Family::SW2:
            map.kind = MapKind::IsotonicMap;
            break;
        case Family::Custom:
            throw Error(ErrorKind::UnsupportedFamily, "no catalog map for custom systems");
    }
    return map;
}

ReferenceSystem reference_for(const PdmSystem& system) {
    const auto& p = system.params();
    if (!p.omega) throw ParameterError(ErrorKind::MissingParameter, "omega", "required by the reference system");
    switch (system.family()) {
        case Family::HarmonicReference:
        case Family::ML1:
        case Family::PowerLaw:
        case Family::ML2:
        case Family::Morse:
            return ReferenceSystem::harmonic(*p.omega);
        case Family::IsotonicReference:
        case Family::SW1:
        case Family::SW2:
            if (!p.kappa) throw ParameterError(ErrorKind::MissingParameter, "kappa", "required by the isotonic reference");
            return ReferenceSystem::isotonic(*p.omega, *p.kappa);
        case Family::Custom:
            break;
    }
    throw Error(ErrorKind::UnsupportedFamily, "no reference system for custom systems");
}

std::vector<double> tau_accumulate(const NonlocalMap& map, const Trajectory& traj, std::size_t i) {
    const auto& s = traj.samples;
    std::vector<double> tau(s.size(), 0.0);
    if (s.empty()) return tau;
    double sign = 0.0;
    auto f_at = [&](double x, double t) {
        const double f = f_scale(map, i, x);
        if (!(f != 0.0) || !std::isfinite(f))
            throw Error(ErrorKind::NonPositiveScale,
                        "f" + std::to_string(i + 1) + " vanishes at t = " + std::to_string(t));
        const double sg = f > 0.0 ? 1.0 : -1.0;
        if (sign == 0.0) sign = sg;
        if (sg != sign)
            throw Error(ErrorKind::NonPositiveScale,
                        "f" + std::to_string(i + 1) + " changes sign at t = " + std::to_string(t));
        return f;
    };
    double fa = f_at(s[0].x[i], s[0].t);
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const double ta = s[k].t;
        const double tb = s[k + 1].t;
        const double tm = 0.5 * (ta + tb);
        const double fm = f_at(traj.at(tm).x[i], tm);
        const double fb = f_at(s[k + 1].x[i], tb);
        tau[k + 1] = tau[k] + (tb - ta) / 6.0 * (fa + 4.0 * fm + fb);
        fa = fb;
    }
    return tau;
}

ReferenceTrajectory map_to_reference(const NonlocalMap& map, const Trajectory& traj) {
    const std::size_t n = map.n();
    ReferenceTrajectory out;
    const std::size_t N = traj.samples.size();
    out.t.resize(N);
    out.tau.assign(N, std::vector<double>(n));
    out.q.assign(N, std::vector<double>(n));
    out.q_tilde.assign(N, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto tau = tau_accumulate(map, traj, i);
        for (std::size_t k = 0; k < N; ++k) out.tau[k][i] = tau[k];
    }
    for (std::size_t k = 0; k < N; ++k) {
        const State& st = traj.samples[k];
        out.t[k] = st.t;
        for (std::size_t i = 0; i < n; ++i) {
            out.q[k][i] = q_map(map, i, st.x[i]).q;
            out.q_tilde[k][i] = st.v[i] * std::sqrt(map.profiles[i].eval(st.x[i], i).m);
        }
    }
    return out;
}

double potential_match_residual(const NonlocalMap& map, const PdmSystem& system, const ReferenceSystem& ref,
                                std::span<const double> x) {
    const double v = potential_energy(system, x);
    std::vector<double> q(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) q[i] = q_map(map, i, x[i]).q;
    return std::fabs(v - ref.potential_energy(q));
}

std::vector<double> invariance_residual(const NonlocalMap& map, const ReferenceSystem& ref, const State& state,
                                        std::span<const double> acceleration) {
    const std::size_t n = map.n();
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = q_map(map, i, state.x[i]).q;
    const auto grad = ref.gradient(q);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = f_scale(map, i, state.x[i]);
        if (f == 0.0) {
            r[i] = 0.0;
            continue;
        }
        const ProfileValue p = map.profiles[i].eval(state.x[i], i);
        const double root = std::sqrt(p.m);
        const double dqt_dt = p.dm / (2.0 * root) * state.v[i] * state.v[i] + root * acceleration[i];
        r[i] = dqt_dt / f + grad[i];
    }
    return r;
}

namespace {

struct Coupled {
    double m;
    std::vector<double> grad;
};

Coupled coupled_at(const PdmSystem& system, std::span<const double> x) {
    if (system.kind() == Kind::TypeII) {
        auto v = system.coupled_profile().eval(x);
        return {v.m, std::move(v.grad)};
    }
    if (system.n() != 1) throw Error(ErrorKind::InvalidParameter, "a coupled profile is needed for n > 1");
    const ProfileValue p = system.profile(0).eval(x[0], 0);
    return {p.m, {p.dm}};
}

}  // namespace

std::vector<double> el2_mapped_residual(const PdmSystem& system, const State& state) {
    const std::size_t n = system.n();
    const Coupled c = coupled_at(system, state.x);
    const auto a = el2_acceleration(system, state);
    const auto grad = system.potential().eval(state.x).grad;
    double mdot = 0.0;
    for (std::size_t j = 0; j < n; ++j) mdot += c.grad[j] * state.v[j];
    const double root = std::sqrt(c.m);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = mdot / (2.0 * root) * state.v[i] + root * a[i] + grad[i] / root;
    return r;
}

double el2_obstruction(const PdmSystem& system, const State& state) {
    const Coupled c = coupled_at(system, state.x);
    double speed2 = 0.0;
    for (double v : state.v) speed2 += v * v;
    double norm2 = 0.0;
    for (double g : c.grad) {
        const double term = 0.5 * (g / c.m) * speed2;
        norm2 += term * term;
    }
    return std::sqrt(norm2);
}

}  // namespace pdm
