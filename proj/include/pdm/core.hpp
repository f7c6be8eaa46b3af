#pragma once

// Domain types for n-dimensional position-dependent-mass (PDM) systems and
// their energy bookkeeping. The rest mass is fixed to 1: it scales kinetic
// and potential energy identically.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdm/expr.hpp"
#include "pdm/profiles.hpp"

namespace pdm {

enum class Family {
    HarmonicReference,  ///< V = ½Σω²x², m = 1
    IsotonicReference,  ///< V = ½Σ(ω²x² + κ/x²), m = 1
    ML1,                ///< Mathews–Lakshmanan type I
    PowerLaw,           ///< m = α²x^{2υ}
    ML2,                ///< Mathews–Lakshmanan type II (constant ηᵢ)
    Morse,              ///< m = e^{2ζx}, Morse-like force
    SW1,                ///< Smorodinsky–Winternitz type I
    SW2,                ///< Smorodinsky–Winternitz type II (power-law deformation)
    Custom,
};

std::string to_string(Family f);
/// Accepts the names produced by to_string (case-insensitive).
std::optional<Family> family_from_string(std::string_view name);

/// TypeI: one profile per coordinate, T = ½Σ mⱼ(xⱼ)ẋⱼ².
/// TypeII: one coupled profile, T = ½ m(x⃗) Σ ẋⱼ².
enum class Kind { TypeI, TypeII };

/// Family parameters. Absent optionals are reported as MissingParameter
/// by build_system when the family needs them.
struct ParameterSet {
    std::optional<std::vector<double>> omega;
    std::optional<double> lambda;
    Branch sign = Branch::Plus;
    std::optional<double> upsilon;
    std::optional<double> alpha;
    std::optional<std::vector<double>> zeta;
    std::optional<std::vector<double>> eta_const;
    std::optional<double> eta_exp;
    std::optional<double> beta;
    std::optional<std::vector<double>> kappa;
};

/// Potential V(x⃗). Catalog families are separable, V = Σ Vᵢ(xᵢ).
class PotentialSpec {
public:
    PotentialSpec() = default;
    PotentialSpec(Family family, ParameterSet params) : family_(family), params_(std::move(params)) {}
    /// Custom: one expression in `x` per coordinate.
    static PotentialSpec per_coordinate(std::vector<expr::Expr> terms);
    /// Custom: a single expression over x1..xn.
    static PotentialSpec coupled(expr::Expr v);

    Family family() const { return family_; }
    const ParameterSet& params() const { return params_; }

    struct Value {
        double v;
        std::vector<double> grad;
    };
    /// Value and gradient. Throws SingularPoint at xᵢ = 0 for isotonic terms.
    Value eval(std::span<const double> x) const;
    double value(std::span<const double> x) const { return eval(x).v; }

private:
    Family family_ = Family::Custom;
    ParameterSet params_;
    std::vector<expr::Expr> terms_;
    expr::Expr coupled_;
};

struct State {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> v;
};

struct EnergyBreakdown {
    double kinetic;
    double potential;
    double total;
};

class PdmSystem {
public:
    static PdmSystem type_one(std::vector<MassProfile> profiles, PotentialSpec potential);
    static PdmSystem type_two(std::size_t n, CoupledProfile profile, PotentialSpec potential);

    static constexpr double rest_mass = 1.0;

    std::size_t n() const { return n_; }
    Kind kind() const { return kind_; }
    Family family() const { return potential_.family(); }
    const ParameterSet& params() const { return potential_.params(); }
    const std::vector<MassProfile>& profiles() const { return profiles_; }
    const MassProfile& profile(std::size_t i) const { return profiles_.at(i); }
    const CoupledProfile& coupled_profile() const { return coupled_; }
    const PotentialSpec& potential() const { return potential_; }

    /// True when every coordinate lies inside its profile's domain.
    bool admits(std::span<const double> x) const;
    /// Throws DomainViolation naming the first offending coordinate.
    void require_domain(std::span<const double> x) const;

private:
    PdmSystem() = default;

    std::size_t n_ = 0;
    Kind kind_ = Kind::TypeI;
    std::vector<MassProfile> profiles_;
    CoupledProfile coupled_;
    PotentialSpec potential_;
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double max_error_estimate = 0.0;
};

struct Termination {
    enum class Kind { Completed, DomainViolation, StepFailure };
    Kind kind = Kind::Completed;
    double t = 0.0;
    std::size_t coordinate = 0;
    std::string message;
};

/// Accepted integration states with the accelerations at each sample, which
/// the cubic Hermite dense output needs.
struct Trajectory {
    std::vector<State> samples;
    std::vector<std::vector<double>> accelerations;
    StepStats stats;
    Termination termination;

    bool empty() const { return samples.empty(); }
    double t_begin() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }
    /// Replaces the Hermite interpolant when the integrator has a better one.
    std::function<State(double)> dense;

    /// Cubic Hermite interpolation of (x, v) between accepted samples.
    State at(double t) const;
};

/// Everything needed to build a system: family, dimension, parameters and,
/// for Custom / TypeII, the expressions.
struct SystemDescription {
    Family family = Family::Custom;
    std::size_t n = 1;
    Kind kind = Kind::TypeI;
    ParameterSet params;
    /// Power laws: use the even extension through x = 0.
    bool mirrored = false;

    /// Custom TypeI mass, one per coordinate (a single entry is reused).
    std::vector<std::string> mass;
    /// Open interval for custom profiles.
    std::optional<Interval> mass_domain;
    /// TypeII coupled mass over x1..xn.
    std::optional<std::string> coupled_mass;
    /// Custom potential: n expressions in x, or one expression over x1..xn.
    std::vector<std::string> potential;
};

/// Validates the description. Throws ParameterError (MissingParameter or
/// InvalidParameter) naming the field, or the parser's errors for custom
/// expressions.
PdmSystem build_system(const SystemDescription& description);

/// The catalog mass profile of coordinate i for a family.
MassProfile catalog_profile(Family family, const ParameterSet& params, std::size_t i, bool mirrored = false);

double kinetic_energy(const PdmSystem& system, const State& state);
double potential_energy(const PdmSystem& system, std::span<const double> x);
EnergyBreakdown total_energy(const PdmSystem& system, const State& state);

}  // namespace pdm
