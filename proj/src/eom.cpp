#include "pdm/eom.hpp"

#include <cmath>

#include "pdm/error.hpp"

namespace pdm {

ReferenceSystem ReferenceSystem::harmonic(std::vector<double> omega) {
    return ReferenceSystem{Potential::Harmonic, std::move(omega), {}};
}

ReferenceSystem ReferenceSystem::isotonic(std::vector<double> omega, std::vector<double> kappa) {
    if (kappa.size() != omega.size())
        throw ParameterError(ErrorKind::InvalidParameter, "kappa", "expected one entry per coordinate");
    return ReferenceSystem{Potential::Isotonic, std::move(omega), std::move(kappa)};
}

namespace {

void require_nonzero(std::span<const double> q) {
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] == 0.0)
            throw DomainViolation(ErrorKind::SingularPoint, i, 0.0,
                                  "isotonic reference is singular at q" + std::to_string(i + 1) + " = 0");
}

}  // namespace

double ReferenceSystem::potential_energy(std::span<const double> q) const {
    if (potential == Potential::Isotonic) require_nonzero(q);
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        v += omega[i] * omega[i] * q[i] * q[i];
        if (potential == Potential::Isotonic) v += kappa[i] / (q[i] * q[i]);
    }
    return 0.5 * v;
}

std::vector<double> ReferenceSystem::gradient(std::span<const double> q) const {
    if (potential == Potential::Isotonic) require_nonzero(q);
    std::vector<double> g(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        g[i] = omega[i] * omega[i] * q[i];
        if (potential == Potential::Isotonic) g[i] -= kappa[i] / (q[i] * q[i] * q[i]);
    }
    return g;
}

std::vector<double> el1_acceleration(const PdmSystem& system, const State& state) {
    if (system.kind() != Kind::TypeI)
        throw Error(ErrorKind::InvalidParameter, "EL-I dynamics need per-coordinate mass profiles");
    const std::size_t n = system.n();
    for (std::size_t i = 0; i < n; ++i) {
        // power-law profiles vanish at the origin, where m'/2m ~ 1/x diverges
        if (state.x[i] == 0.0 && system.profile(i).domain().lo == 0.0)
            throw DomainViolation(ErrorKind::SingularCoefficient, i, 0.0,
                                  "coefficient m'/2m diverges at x" + std::to_string(i + 1) + " = 0");
    }
    system.require_domain(state.x);
    const auto grad = system.potential().eval(state.x).grad;
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ProfileValue p = system.profile(i).eval(state.x[i], i);
        a[i] = -(p.dm / (2.0 * p.m)) * state.v[i] * state.v[i] - grad[i] / p.m;
        if (!std::isfinite(a[i]))
            throw DomainViolation(ErrorKind::SingularCoefficient, i, state.x[i],
                                  "non-finite acceleration at x" + std::to_string(i + 1));
    }
    return a;
}

std::vector<double> el2_acceleration(const PdmSystem& system, const State& state) {
    if (system.kind() != Kind::TypeII) {
        if (system.n() != 1) throw Error(ErrorKind::InvalidParameter, "EL-II dynamics need a coupled mass profile");
        // n = 1: the single profile doubles as the coupled one
        const ProfileValue p = system.profile(0).eval(state.x[0], 0);
        const double g = system.potential().eval(state.x).grad[0];
        const double v = state.v[0];
        const double mdot = p.dm * v;
        return {-(mdot / p.m) * v + 0.5 * (p.dm / p.m) * v * v - g / p.m};
    }
    const std::size_t n = system.n();
    const auto mv = system.coupled_profile().eval(state.x);
    const auto grad = system.potential().eval(state.x).grad;
    double mdot = 0.0;
    double speed2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        mdot += mv.grad[j] * state.v[j];
        speed2 += state.v[j] * state.v[j];
    }
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = -(mdot / mv.m) * state.v[i] + 0.5 * (mv.grad[i] / mv.m) * speed2 - grad[i] / mv.m;
    return a;
}

std::vector<double> acceleration(const PdmSystem& system, const State& state) {
    return system.kind() == Kind::TypeI ? el1_acceleration(system, state) : el2_acceleration(system, state);
}

std::vector<double> reference_acceleration(const ReferenceSystem& ref, std::span<const double> q,
                                           std::span<const double> /*q_tilde*/) {
    auto g = ref.gradient(q);
    for (double& e : g) e = -e;
    return g;
}

namespace {

std::vector<double> residual_from(const PdmSystem& system, const Kinematics& k) {
    const std::size_t n = system.n();
    system.require_domain(k.x);
    const auto grad = system.potential().eval(k.x).grad;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ProfileValue p = system.profile(i).eval(k.x[i], i);
        r[i] = k.a[i] + (p.dm / (2.0 * p.m)) * k.v[i] * k.v[i] + grad[i] / p.m;
    }
    return r;
}

}  // namespace

std::vector<double> el1_residual(const PdmSystem& system, const SolutionFn& solution, double t) {
    return residual_from(system, solution(t));
}

std::vector<double> el1_residual(const PdmSystem& system, const PositionFn& position, double t) {
    const double h = 1e-4 * std::max(1.0, std::fabs(t));
    const auto xm2 = position(t - 2 * h);
    const auto xm1 = position(t - h);
    const auto x0 = position(t);
    const auto xp1 = position(t + h);
    const auto xp2 = position(t + 2 * h);
    Kinematics k;
    k.t = t;
    k.x = x0;
    const std::size_t n = x0.size();
    k.v.resize(n);
    k.a.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        k.v[i] = (-xp2[i] + 8.0 * xp1[i] - 8.0 * xm1[i] + xm2[i]) / (12.0 * h);
        k.a[i] = (-xp2[i] + 16.0 * xp1[i] - 30.0 * x0[i] + 16.0 * xm1[i] - xm2[i]) / (12.0 * h * h);
    }
    return residual_from(system, k);
}

}  // namespace pdm
