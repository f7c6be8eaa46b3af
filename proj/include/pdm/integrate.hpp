#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "pdm/core.hpp"

namespace pdm {

/// ẍ = a(t, x, ẋ). May throw pdm::Error (DomainViolation, SingularCoefficient).
using AccelerationField = std::function<std::vector<double>(const State&)>;

/// Returns the offending coordinate when a state is outside the domain.
using DomainGuard = std::function<std::optional<std::size_t>(const State&)>;

struct FixedRK4 {
    double h = 1e-3;
};

/// Dormand–Prince 5(4) pair with PI step-size control.
struct AdaptiveEmbedded45 {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-14;
    double h_max = std::numeric_limits<double>::infinity();
};

struct IntegratorOptions {
    std::variant<FixedRK4, AdaptiveEmbedded45> scheme = AdaptiveEmbedded45{};
    double t_end = 1.0;
    /// Checked at every stage, not just at accepted steps.
    DomainGuard guard;
    std::size_t max_steps = 20'000'000;
};

/// Throws InvalidParameter when the options break their invariants.
void validate(const IntegratorOptions& opts);

/// One classical RK4 step of (x, v)' = (v, a). Errors from the field propagate.
State rk4_step(const AccelerationField& field, const State& state, double h);

/// Integrates to opts.t_end, or stops early with a DomainViolation /
/// StepFailure termination. Never throws for domain problems.
Trajectory integrate(const AccelerationField& field, const State& initial, const IntegratorOptions& opts);

/// EL-I or EL-II dynamics of the system with its domain as guard.
AccelerationField field_for(const PdmSystem& system);
DomainGuard guard_for(const PdmSystem& system);
Trajectory integrate(const PdmSystem& system, const State& initial, IntegratorOptions opts);

/// EL-I integration in Sundman time s with dt/ds = Πⱼ√mⱼ and momenta
/// pᵢ = √mᵢ ẋᵢ. The transformed system stays smooth where a mass profile
/// vanishes, so mirrored power-law trajectories can pass through x = 0.
/// Samples are reported in physical time.
Trajectory integrate_regularized(const PdmSystem& system, const State& initial, const AdaptiveEmbedded45& tol,
                                 double t_end);

/// Mean period of coordinate i from successive upward crossings of its
/// time-averaged level. Throws NoPeriod for fewer than two crossings or
/// period estimates that disagree by more than 1%.
double estimate_period(const Trajectory& trajectory, std::size_t coordinate);

}  // namespace pdm
