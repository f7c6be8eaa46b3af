#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pdm/core.hpp"
#include "pdm/eom.hpp"

namespace pdm {

enum class ExactFamily { HarmonicRef, IsotonicRef, ML1, PowerLaw, Morse, SW1, SW2 };

std::string to_string(ExactFamily f);
std::optional<ExactFamily> exact_family_from_string(std::string_view name);
Family system_family(ExactFamily f);

/// SW2 closed form: as printed (valid for η = −1 only) or with κ replaced by
/// η²κ, which holds for every η ≠ 1.
enum class Sw2Form { Printed, Amended };

struct ExactSolutionSpec {
    ExactFamily family = ExactFamily::ML1;
    ParameterSet params;
    /// Per coordinate: A (ML1, PowerLaw), B (HarmonicRef, Morse) or C
    /// (IsotonicRef, SW1, SW2). Its length fixes n.
    std::vector<double> amplitude;
    /// φ or σ per coordinate; empty means all zero.
    std::vector<double> phase;
    Sw2Form sw2_form = Sw2Form::Printed;

    std::size_t n() const { return amplitude.size(); }
};

/// Throws InvalidSpec when an invariant of the closed form fails.
void validate(const ExactSolutionSpec& spec);

/// x(t), ẋ(t), ẍ(t) from the closed form with analytic derivatives.
Kinematics exact_kinematics(const ExactSolutionSpec& spec, double t);
State exact_solution(const ExactSolutionSpec& spec, double t);

/// Angular frequency of the argument of each coordinate's closed form.
/// UnsupportedFamily when the family has no printed relation.
std::vector<double> frequency_relation(Family family, const ParameterSet& params,
                                       std::span<const double> amplitude = {});
/// Ω² as printed for ML1, ω²A²/(1±λA²); kept to show that it fails.
double printed_ml1_frequency(double omega, double lambda, Branch sign, double amplitude);
/// SW1: ω from Ω via ω² = (1±λC²)[Ω² ± λκ/C²].
double sw1_reference_omega(double Omega, double lambda, Branch sign, double C, double kappa);

/// Time for the closed form of coordinate i to repeat.
double exact_period(const ExactSolutionSpec& spec, std::size_t i = 0);

double exact_energy(const ExactSolutionSpec& spec);

/// True iff ±λ·ηᵢ² = −1 for every coordinate, i.e. the ML2 system is
/// an ML1 system plus a constant.
bool ml2_reduction_check(const ParameterSet& params);

/// The SW2 closed form exactly as printed, without the η = −1 check, for
/// the validity-split demonstration.
Kinematics sw2_printed_form(const ParameterSet& params, std::span<const double> C, std::span<const double> sigma,
                          double t);

/// The catalog system an exact solution belongs to (power laws mirrored).
PdmSystem system_for(const ExactSolutionSpec& spec);

struct Misprint {
    std::string id;
    std::string equation;
    std::string printed;
    std::string validated;
    std::string note;
};

/// Printed relations that disagree with the residual oracle, with the forms
/// the catalog uses instead.
const std::vector<Misprint>& misprint_ledger();

}  // namespace pdm
