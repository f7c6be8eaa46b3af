#include "pdm/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "pdm/error.hpp"

namespace pdm {

std::string to_string(Family f) {
    switch (f) {
    case Family::HarmonicReference: return "harmonic";
    case Family::IsotonicReference: return "isotonic";
    case Family::ML1: return "ml1";
    case Family::PowerLaw: return "powerlaw";
    case Family::ML2: return "ml2";
    case Family::Morse: return "morse";
    case Family::SW1: return "sw1";
    case Family::SW2: return "sw2";
    case Family::Custom: return "custom";
    }
    return "custom";
}

std::optional<Family> family_from_string(std::string_view name) {
    std::string key;
    for (char c : name)
        if (c != '-' && c != '_' && c != ' ') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (Family f : {Family::HarmonicReference, Family::IsotonicReference, Family::ML1, Family::PowerLaw, Family::ML2,
                     Family::Morse, Family::SW1, Family::SW2, Family::Custom})
        if (key == to_string(f)) return f;
    if (key == "harmonicreference") return Family::HarmonicReference;
    if (key == "isotonicreference") return Family::IsotonicReference;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Potential

namespace {

struct Term {
    double v;
    double dv;
};

[[noreturn]] void singular(std::size_t i, double x) {
    throw DomainViolation(ErrorKind::SingularPoint, i, x,
                          "isotonic term kappa/x^2 is singular at x" + std::to_string(i + 1) + " = 0");
}

Term catalog_term(Family f, const ParameterSet& p, std::size_t i, double x) {
    const double w = p.omega->at(i);
    const double w2 = w * w;
    switch (f) {
    case Family::HarmonicReference:
        return {0.5 * w2 * x * x, w2 * x};
    case Family::IsotonicReference: {
        if (x == 0.0) singular(i, x);
        const double k = p.kappa->at(i);
        return {0.5 * (w2 * x * x + k / (x * x)), w2 * x - k / (x * x * x)};
    }
    case Family::ML1: {
        const double l = sign_of(p.sign) * *p.lambda;
        const double m = 1.0 / (1.0 + l * x * x);
        return {0.5 * w2 * x * x * m, w2 * x * m * m};
    }
    case Family::PowerLaw: {
        const double a2 = *p.alpha * *p.alpha;
        const double u = *p.upsilon;
        const double ax = std::pow(std::fabs(x), 2.0 * u);
        return {0.5 * a2 * w2 * ax * x * x, (1.0 + u) * a2 * w2 * ax * x};
    }
    case Family::ML2: {
        const double l = sign_of(p.sign) * *p.lambda;
        const double eta = p.eta_const->at(i);
        const double m = 1.0 / (1.0 + l * x * x);
        return {0.5 * w2 * eta * eta * m, -l * w2 * eta * eta * x * m * m};
    }
    case Family::Morse: {
        const double z = p.zeta->at(i);
        const double e = std::exp(z * x);
        return {0.5 * w2 * (e - 1.0) * (e - 1.0), w2 * z * e * (e - 1.0)};
    }
    case Family::SW1: {
        if (x == 0.0) singular(i, x);
        const double l = sign_of(p.sign) * *p.lambda;
        const double k = p.kappa->at(i);
        const double m = 1.0 / (1.0 + l * x * x);
        return {0.5 * (w2 * x * x * m + k * (1.0 + l * x * x) / (x * x)), w2 * x * m * m - k / (x * x * x)};
    }
    case Family::SW2: {
        if (x == 0.0) singular(i, x);
        const double b2 = *p.beta * *p.beta;
        const double eta = *p.eta_exp;
        const double k = p.kappa->at(i);
        const double x2e = std::pow(x, 2.0 * eta);
        return {0.5 * (b2 * x2e * w2 + k / (b2 * x2e)), eta * (b2 * w2 * x2e - k / (b2 * x2e)) / x};
    }
    case Family::Custom:
        break;
    }
    return {0.0, 0.0};
}

}  // namespace

PotentialSpec PotentialSpec::per_coordinate(std::vector<expr::Expr> terms) {
    PotentialSpec s;
    s.terms_ = std::move(terms);
    return s;
}

PotentialSpec PotentialSpec::coupled(expr::Expr v) {
    PotentialSpec s;
    s.coupled_ = std::move(v);
    return s;
}

PotentialSpec::Value PotentialSpec::eval(std::span<const double> x) const {
    const std::size_t n = x.size();
    Value out{0.0, std::vector<double>(n, 0.0)};
    if (family_ != Family::Custom) {
        for (std::size_t i = 0; i < n; ++i) {
            const Term t = catalog_term(family_, params_, i, x[i]);
            out.v += t.v;
            out.grad[i] = t.dv;
        }
        return out;
    }
    if (!terms_.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            const expr::Dual2 d = terms_.at(terms_.size() == 1 ? 0 : i).eval(x[i]);
            out.v += d.v;
            out.grad[i] = d.d1;
        }
        return out;
    }
    if (coupled_.empty()) return out;
    for (std::size_t i = 0; i < n; ++i) {
        const expr::Dual2 d = coupled_.eval(x, i);
        out.v = d.v;
        out.grad[i] = d.d1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// System

PdmSystem PdmSystem::type_one(std::vector<MassProfile> profiles, PotentialSpec potential) {
    if (profiles.empty()) throw ParameterError(ErrorKind::InvalidParameter, "n", "dimension must be at least 1");
    PdmSystem s;
    s.n_ = profiles.size();
    s.kind_ = Kind::TypeI;
    s.profiles_ = std::move(profiles);
    s.potential_ = std::move(potential);
    return s;
}

PdmSystem PdmSystem::type_two(std::size_t n, CoupledProfile profile, PotentialSpec potential) {
    if (n == 0) throw ParameterError(ErrorKind::InvalidParameter, "n", "dimension must be at least 1");
    if (profile.variable_count() != n)
        throw ParameterError(ErrorKind::InvalidParameter, "coupled_mass", "profile must depend on x1..xn");
    PdmSystem s;
    s.n_ = n;
    s.kind_ = Kind::TypeII;
    s.coupled_ = std::move(profile);
    s.potential_ = std::move(potential);
    return s;
}

bool PdmSystem::admits(std::span<const double> x) const {
    if (x.size() != n_) return false;
    if (kind_ == Kind::TypeII) {
        try {
            coupled_.eval(x);
            return true;
        } catch (const Error&) {
            return false;
        }
    }
    for (std::size_t i = 0; i < n_; ++i)
        if (!profiles_[i].admits(x[i])) return false;
    return true;
}

void PdmSystem::require_domain(std::span<const double> x) const {
    if (x.size() != n_)
        throw ParameterError(ErrorKind::InvalidParameter, "x", "expected " + std::to_string(n_) + " coordinates");
    if (kind_ == Kind::TypeII) {
        coupled_.eval(x);
        return;
    }
    for (std::size_t i = 0; i < n_; ++i) profiles_[i].eval(x[i], i);
}

namespace {

[[noreturn]] void missing(const std::string& field) {
    throw ParameterError(ErrorKind::MissingParameter, field, "required by the chosen family");
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw ParameterError(ErrorKind::InvalidParameter, field, why);
}

void require_list(const std::optional<std::vector<double>>& v, const std::string& field, std::size_t n,
                  bool positive) {
    if (!v) missing(field);
    if (v->size() != n) invalid(field, "expected " + std::to_string(n) + " entries, got " + std::to_string(v->size()));
    for (double e : *v) {
        if (!std::isfinite(e)) invalid(field, "entries must be finite");
        if (positive && !(e > 0.0)) invalid(field, "entries must be positive");
    }
}

void require_scalar(const std::optional<double>& v, const std::string& field) {
    if (!v) missing(field);
    if (!std::isfinite(*v)) invalid(field, "must be finite");
}

void validate(const SystemDescription& d) {
    const ParameterSet& p = d.params;
    const std::size_t n = d.n;
    switch (d.family) {
    case Family::HarmonicReference:
        require_list(p.omega, "omega", n, true);
        break;
    case Family::IsotonicReference:
        require_list(p.omega, "omega", n, true);
        require_list(p.kappa, "kappa", n, true);
        break;
    case Family::ML1:
    case Family::ML2:
    case Family::SW1:
        require_list(p.omega, "omega", n, true);
        require_scalar(p.lambda, "lambda");
        if (*p.lambda < 0.0) invalid("lambda", "must be non-negative; the branch sign is a separate tag");
        if (d.family == Family::ML2) require_list(p.eta_const, "eta_const", n, false);
        if (d.family == Family::SW1) require_list(p.kappa, "kappa", n, true);
        break;
    case Family::PowerLaw:
        require_list(p.omega, "omega", n, true);
        require_scalar(p.alpha, "alpha");
        require_scalar(p.upsilon, "upsilon");
        if (!(*p.alpha > 0.0)) invalid("alpha", "must be positive");
        if (*p.upsilon == -1.0) invalid("upsilon", "upsilon = -1 collapses the map q = alpha x^(1+upsilon)");
        break;
    case Family::Morse:
        require_list(p.omega, "omega", n, true);
        require_list(p.zeta, "zeta", n, true);
        break;
    case Family::SW2:
        require_list(p.omega, "omega", n, true);
        require_list(p.kappa, "kappa", n, true);
        require_scalar(p.beta, "beta");
        require_scalar(p.eta_exp, "eta_exp");
        if (!(*p.beta > 0.0)) invalid("beta", "must be positive");
        if (*p.eta_exp == 1.0) invalid("eta_exp", "eta_exp = 1 is the constant-mass case");
        break;
    case Family::Custom:
        if (d.potential.empty()) missing("potential");
        if (d.kind == Kind::TypeI && d.mass.empty()) missing("mass");
        break;
    }
    if (d.kind == Kind::TypeII && !d.coupled_mass && (d.n != 1 || d.family == Family::Custom))
        missing("coupled_mass");
}

expr::Expr parse_single_or_indexed(const std::string& text, std::size_t n) {
    if (n == 1) {
        try {
            return expr::parse_expression(text, {"x"});
        } catch (const UnknownIdentifier&) {
            return expr::parse_expression(text, {"x1"});
        }
    }
    return expr::parse_expression(text, coordinate_names(n));
}

}  // namespace

MassProfile catalog_profile(Family family, const ParameterSet& p, std::size_t i, bool mirrored) {
    switch (family) {
    case Family::HarmonicReference:
    case Family::IsotonicReference:
        return profile::Unit{};
    case Family::ML1:
    case Family::ML2:
    case Family::SW1:
        return profile::MathewsLakshmanan{*p.lambda, p.sign};
    case Family::PowerLaw:
        return profile::PowerLaw{*p.alpha, *p.upsilon, mirrored};
    case Family::Morse:
        return profile::Exponential{p.zeta->at(i)};
    case Family::SW2:
        return profile::IsotonicPowerLaw{*p.beta, *p.eta_exp};
    case Family::Custom:
        break;
    }
    throw Error(ErrorKind::UnsupportedFamily, "custom systems have no catalog profile");
}

PdmSystem build_system(const SystemDescription& d) {
    if (d.n == 0) invalid("n", "dimension must be at least 1");
    validate(d);

    PotentialSpec potential(d.family, d.params);
    if (d.family == Family::Custom) {
        if (d.potential.size() == d.n && (d.n > 1 || d.potential.size() == 1)) {
            std::vector<expr::Expr> terms;
            bool per_coordinate = true;
            for (const auto& text : d.potential) {
                try {
                    terms.push_back(expr::parse_expression(text, {"x"}));
                } catch (const UnknownIdentifier&) {
                    if (d.n > 1) throw;
                    per_coordinate = false;
                }
            }
            potential = per_coordinate ? PotentialSpec::per_coordinate(std::move(terms))
                                       : PotentialSpec::coupled(parse_single_or_indexed(d.potential[0], 1));
        } else if (d.potential.size() == 1) {
            potential = PotentialSpec::coupled(expr::parse_expression(d.potential[0], coordinate_names(d.n)));
        } else {
            invalid("potential", "expected 1 or n expressions");
        }
    }

    if (d.kind == Kind::TypeII) {
        if (d.coupled_mass) {
            return PdmSystem::type_two(d.n, CoupledProfile(parse_single_or_indexed(*d.coupled_mass, d.n)),
                                       std::move(potential));
        }
        return PdmSystem::type_two(1, CoupledProfile(catalog_profile(d.family, d.params, 0, d.mirrored)),
                                   std::move(potential));
    }

    std::vector<MassProfile> profiles;
    profiles.reserve(d.n);
    for (std::size_t i = 0; i < d.n; ++i) {
        if (d.family == Family::Custom) {
            if (d.mass.size() != 1 && d.mass.size() != d.n) invalid("mass", "expected 1 or n expressions");
            const std::string& text = d.mass[d.mass.size() == 1 ? 0 : i];
            profiles.emplace_back(profile::Custom{expr::parse_expression(text, {"x"}), d.mass_domain.value_or(Interval{})});
        } else {
            profiles.push_back(catalog_profile(d.family, d.params, i, d.mirrored));
        }
    }
    return PdmSystem::type_one(std::move(profiles), std::move(potential));
}

// ---------------------------------------------------------------------------
// Energies

double kinetic_energy(const PdmSystem& system, const State& state) {
    const std::size_t n = system.n();
    if (state.x.size() != n || state.v.size() != n)
        throw ParameterError(ErrorKind::InvalidParameter, "state", "dimension mismatch");
    if (system.kind() == Kind::TypeII) {
        const double m = system.coupled_profile().eval(state.x).m;
        double sum = 0.0;
        for (double v : state.v) sum += v * v;
        return 0.5 * PdmSystem::rest_mass * m * sum;
    }
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += system.profile(i).eval(state.x[i], i).m * state.v[i] * state.v[i];
    return 0.5 * PdmSystem::rest_mass * t;
}

double potential_energy(const PdmSystem& system, std::span<const double> x) {
    system.require_domain(x);
    return PdmSystem::rest_mass * system.potential().value(x);
}

EnergyBreakdown total_energy(const PdmSystem& system, const State& state) {
    const double t = kinetic_energy(system, state);
    const double v = potential_energy(system, state.x);
    return {t, v, t + v};
}

// ---------------------------------------------------------------------------
// Trajectory dense output

State Trajectory::at(double t) const {
    if (samples.empty()) throw Error(ErrorKind::InvalidParameter, "empty trajectory");
    if (t <= samples.front().t) return samples.front();
    if (t >= samples.back().t) return samples.back();
    if (dense) return dense(t);
    const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                     [](double value, const State& s) { return value < s.t; });
    const std::size_t k = static_cast<std::size_t>(it - samples.begin()) - 1;
    const State& a = samples[k];
    const State& b = samples[k + 1];
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);

    State out;
    out.t = t;
    const std::size_t n = a.x.size();
    out.x.resize(n);
    out.v.resize(n);
    const auto& aa = accelerations[k];
    const auto& ab = accelerations[k + 1];
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] = h00 * a.x[i] + h * h10 * a.v[i] + h01 * b.x[i] + h * h11 * b.v[i];
        out.v[i] = h00 * a.v[i] + h * h10 * aa[i] + h01 * b.v[i] + h * h11 * ab[i];
    }
    return out;
}

}  // namespace pdm
