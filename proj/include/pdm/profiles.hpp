#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pdm/expr.hpp"

namespace pdm {

/// Sign in the `1 ± λx²` denominators. λ itself stays non-negative.
enum class Branch { Plus, Minus };

constexpr double sign_of(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

/// Open interval (lo, hi); infinite ends allowed.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return x > lo && x < hi; }
    bool operator==(const Interval&) const = default;
};

/// m, dm/dx, d²m/dx² at one point.
struct ProfileValue {
    double m;
    double dm;
    double d2m;
};

namespace profile {

/// m ≡ 1 (constant-mass reference systems).
struct Unit {};

/// m = 1/(1 ± λx²)
struct MathewsLakshmanan {
    double lambda;
    Branch branch;
};

/// m = α² x^{2υ}. With `mirrored`, the even extension α²|x|^{2υ} is used
/// for x < 0 so trajectories can pass through the kinetic singularity at 0.
struct PowerLaw {
    double alpha;
    double upsilon;
    bool mirrored = false;
};

/// m = exp(2ζx)
struct Exponential {
    double zeta;
};

/// m = β² x^{2(η-1)}
struct IsotonicPowerLaw {
    double beta;
    double eta;
};

/// m given by a parsed expression in `x`, on a user-declared interval.
struct Custom {
    expr::Expr m;
    Interval domain;
};

}  // namespace profile

class MassProfile {
public:
    using Family = std::variant<profile::Unit, profile::MathewsLakshmanan, profile::PowerLaw,
                                profile::Exponential, profile::IsotonicPowerLaw, profile::Custom>;

    MassProfile() : family_(profile::Unit{}) {}
    MassProfile(Family f) : family_(std::move(f)) {}  // NOLINT(google-explicit-constructor)
    template <class T>
        requires std::is_constructible_v<Family, T> && (!std::is_same_v<std::decay_t<T>, MassProfile>) &&
                 (!std::is_same_v<std::decay_t<T>, Family>)
    MassProfile(T&& f) : family_(std::forward<T>(f)) {}  // NOLINT(google-explicit-constructor)

    const Family& family() const { return family_; }

    /// Maximal open interval on which m > 0 (the positive half-line for
    /// power laws, even when mirrored).
    Interval domain() const;
    /// Membership test used by guards; mirrored power laws accept x != 0.
    bool admits(double x) const;

    /// Throws DomainViolation (tagged with `coordinate`) outside the domain.
    ProfileValue eval(double x, std::size_t coordinate = 0) const;

    std::string describe() const;

private:
    Family family_;
};

inline ProfileValue profile_eval(const MassProfile& p, double x) { return p.eval(x); }
inline Interval profile_domain(const MassProfile& p) { return p.domain(); }

/// A single mass multiplier m(x⃗) shared by every velocity component.
/// Either an expression over x1..xn or, for n = 1, a catalog profile.
class CoupledProfile {
public:
    CoupledProfile() = default;
    explicit CoupledProfile(expr::Expr m) : expression_(std::move(m)) {}
    explicit CoupledProfile(MassProfile one_dimensional) : separable_(std::move(one_dimensional)), use_separable_(true) {}

    struct Value {
        double m;
        std::vector<double> grad;
    };

    /// m and ∂m/∂xᵢ; throws DomainViolation when m <= 0.
    Value eval(std::span<const double> x) const;

    std::size_t variable_count() const { return use_separable_ ? 1 : expression_.variables().size(); }
    std::string describe() const;

private:
    expr::Expr expression_;
    MassProfile separable_;
    bool use_separable_ = false;
};

/// Variable names x1..xn used for coupled expressions.
std::vector<std::string> coordinate_names(std::size_t n);

}  // namespace pdm
