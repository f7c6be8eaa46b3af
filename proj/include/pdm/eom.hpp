#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pdm/core.hpp"

namespace pdm {

/// Constant unit-mass system in generalized coordinates q with rescaled
/// time τ: L = ½Σq̃² − V(q).
struct ReferenceSystem {
    enum class Potential { Harmonic, Isotonic };

    Potential potential = Potential::Harmonic;
    std::vector<double> omega;
    std::vector<double> kappa;  ///< Isotonic only

    static ReferenceSystem harmonic(std::vector<double> omega);
    static ReferenceSystem isotonic(std::vector<double> omega, std::vector<double> kappa);

    std::size_t n() const { return omega.size(); }
    /// V(q); throws SingularPoint at qᵢ = 0 for the isotonic potential.
    double potential_energy(std::span<const double> q) const;
    /// ∂V/∂qᵢ
    std::vector<double> gradient(std::span<const double> q) const;
};

/// PDM EL-I: ẍᵢ = −(m′ᵢ/2mᵢ)ẋᵢ² − (1/mᵢ)∂V/∂xᵢ.
std::vector<double> el1_acceleration(const PdmSystem& system, const State& state);

/// PDM EL-II: ẍᵢ = −(ṁ/m)ẋᵢ + ½(∂ᵢm/m)Σẋⱼ² − (1/m)∂ᵢV.
std::vector<double> el2_acceleration(const PdmSystem& system, const State& state);

/// Dispatches on the system kind.
std::vector<double> acceleration(const PdmSystem& system, const State& state);

/// EL-G: d q̃ᵢ/dτ = −∂V/∂qᵢ.
std::vector<double> reference_acceleration(const ReferenceSystem& ref, std::span<const double> q,
                                           std::span<const double> q_tilde);

/// x, ẋ, ẍ of a candidate solution at time t.
struct Kinematics {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> a;
};

using SolutionFn = std::function<Kinematics(double)>;
using PositionFn = std::function<std::vector<double>(double)>;

/// rᵢ = ẍᵢ + (m′ᵢ/2mᵢ)ẋᵢ² + (1/mᵢ)∂ᵢV, evaluated on analytic derivatives.
std::vector<double> el1_residual(const PdmSystem& system, const SolutionFn& solution, double t);

/// Same residual with ẋ and ẍ from 4th-order central differences,
/// step h = 1e-4·max(1, |t|).
std::vector<double> el1_residual(const PdmSystem& system, const PositionFn& position, double t);

}  // namespace pdm
