#pragma once

// Nonlocal point transformation (x, t) -> (q, τ) with
//   qᵢ = qᵢ(xᵢ),  q̃ᵢ = ẋᵢ√mᵢ,  dτᵢ = fᵢ(xᵢ) dt,  gᵢ = (dqᵢ/dxᵢ)² = mᵢfᵢ².

#include <cstddef>
#include <span>
#include <vector>

#include "pdm/core.hpp"
#include "pdm/eom.hpp"

namespace pdm {

enum class MapKind {
    OscillatorMap,  ///< q = x√m, harmonic reference
    ConstantMap,    ///< q = η√m
    MorseMap,       ///< q = √m(1 − e^{−ζx})
    IsotonicMap,    ///< q = x√m, isotonic reference
};

struct NonlocalMap {
    MapKind kind = MapKind::OscillatorMap;
    std::vector<MassProfile> profiles;
    ParameterSet params;

    std::size_t n() const { return profiles.size(); }
};

struct MapValue {
    double q;
    double dq_dx;
};

/// Throws DomainViolation outside the profile domain.
MapValue q_map(const NonlocalMap& map, std::size_t i, double x);
double f_scale(const NonlocalMap& map, std::size_t i, double x);
/// g = (dq/dx)²
double g_metric(const NonlocalMap& map, std::size_t i, double x);

/// Inverts q_map on [lo, hi], where the caller guarantees monotonicity.
/// Safeguarded Newton–bisection; throws DomainViolation when q is not
/// bracketed by q(lo), q(hi).
double inverse_q_map(const NonlocalMap& map, std::size_t i, double q, double lo, double hi);

/// Map and reference system matching a catalog family. UnsupportedFamily
/// for Custom and TypeII systems.
NonlocalMap map_for(const PdmSystem& system);
ReferenceSystem reference_for(const PdmSystem& system);

/// τᵢ at every trajectory sample, τᵢ(t₀) = 0, by composite Simpson on the
/// Hermite dense output. fᵢ must keep one strict sign along the trajectory
/// (τ strictly monotone); NonPositiveScale if it vanishes or changes sign.
std::vector<double> tau_accumulate(const NonlocalMap& map, const Trajectory& traj, std::size_t i);

/// Per-sample reference coordinates; inner vectors are indexed by coordinate.
struct ReferenceTrajectory {
    std::vector<double> t;
    std::vector<std::vector<double>> tau;
    std::vector<std::vector<double>> q;
    std::vector<std::vector<double>> q_tilde;
};

ReferenceTrajectory map_to_reference(const NonlocalMap& map, const Trajectory& traj);

/// |V_I(x) − V(q(x))|
double potential_match_residual(const NonlocalMap& map, const PdmSystem& system, const ReferenceSystem& ref,
                                std::span<const double> x);

/// EL-G residual dq̃ᵢ/dτᵢ + ∂V/∂qᵢ of the mapped state, with
/// dq̃/dτ = (dq̃/dt)/f and dq̃/dt = (m′/2√m)ẋ² + √m ẍ. Points where f = 0
/// exactly are reported as 0.
std::vector<double> invariance_residual(const NonlocalMap& map, const ReferenceSystem& ref, const State& state,
                                        std::span<const double> acceleration);

/// Same construction for a coupled profile: q̃ᵢ = ẋᵢ√m, f = 1, so the
/// residual is d(√m ẋᵢ)/dt + ∂ᵢV/√m with ẍ from EL-II. Zero for n = 1.
std::vector<double> el2_mapped_residual(const PdmSystem& system, const State& state);

/// ‖½(∂ᵢm/m)Σⱼẋⱼ²‖, the EL-II term with no EL-G counterpart.
double el2_obstruction(const PdmSystem& system, const State& state);

}  // namespace pdm
