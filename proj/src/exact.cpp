#include "pdm/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "pdm/error.hpp"

namespace pdm {

std::string to_string(ExactFamily f) {
    switch (f) {
        case ExactFamily::HarmonicRef: return "harmonic";
        case ExactFamily::IsotonicRef: return "isotonic";
        case ExactFamily::ML1: return "ml1";
        case ExactFamily::PowerLaw: return "powerlaw";
        case ExactFamily::Morse: return "morse";
        case ExactFamily::SW1: return "sw1";
        case ExactFamily::SW2: return "sw2";
    }
    return "?";
}

std::optional<ExactFamily> exact_family_from_string(std::string_view name) {
    const auto f = family_from_string(name);
    if (!f) return std::nullopt;
    switch (*f) {
        case Family::HarmonicReference: return ExactFamily::HarmonicRef;
        case Family::IsotonicReference: return ExactFamily::IsotonicRef;
        case Family::ML1: return ExactFamily::ML1;
        case Family::PowerLaw: return ExactFamily::PowerLaw;
        case Family::Morse: return ExactFamily::Morse;
        case Family::SW1: return ExactFamily::SW1;
        case Family::SW2: return ExactFamily::SW2;
        default: return std::nullopt;
    }
}

Family system_family(ExactFamily f) {
    switch (f) {
        case ExactFamily::HarmonicRef: return Family::HarmonicReference;
        case ExactFamily::IsotonicRef: return Family::IsotonicReference;
        case ExactFamily::ML1: return Family::ML1;
        case ExactFamily::PowerLaw: return Family::PowerLaw;
        case ExactFamily::Morse: return Family::Morse;
        case ExactFamily::SW1: return Family::SW1;
        case ExactFamily::SW2: return Family::SW2;
    }
    return Family::Custom;
}

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorKind::InvalidSpec, why); }

double ell(const ParameterSet& p) { return sign_of(p.sign) * p.lambda.value_or(0.0); }

double phase_of(const ExactSolutionSpec& s, std::size_t i) { return s.phase.empty() ? 0.0 : s.phase[i]; }

const std::vector<double>& list(const std::optional<std::vector<double>>& v, const char* name) {
    if (!v) invalid(std::string(name) + " is required");
    return *v;
}

double scalar(const std::optional<double>& v, const char* name) {
    if (!v) invalid(std::string(name) + " is required");
    return *v;
}

// x = √u with u = a sin²θ + b cos²θ, θ = w t + σ.
void isotonic_kinematics(double a, double b, double w, double theta, double& x, double& v, double& acc) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double u = a * s * s + b * c * c;
    const double du = (a - b) * w * std::sin(2 * theta);
    const double d2u = 2 * (a - b) * w * w * std::cos(2 * theta);
    x = std::sqrt(u);
    v = du / (2 * x);
    acc = (0.5 * d2u - v * v) / x;
}

// SW2 closed form with K in place of κ (K = κ printed, K = η²κ amended).
void sw2_coordinate(double beta, double eta, double omega, double C, double K, double sigma, double t, double& x,
                    double& v, double& acc) {
    const double w = eta * omega;
    const double theta = w * t + sigma;
    const double D = beta * eta * omega * C;
    double y, dy, d2y;
    isotonic_kinematics(eta * eta * omega * omega * C * C * C * C, K, w, theta, y, dy, d2y);
    y /= D;
    dy /= D;
    d2y /= D;
    const double p = 1.0 / eta;
    x = std::pow(y, p);
    v = p * std::pow(y, p - 1) * dy;
    acc = p * ((p - 1) * std::pow(y, p - 2) * dy * dy + std::pow(y, p - 1) * d2y);
}

}  // namespace

void validate(const ExactSolutionSpec& spec) {
    const std::size_t n = spec.n();
    if (n == 0) invalid("amplitude list is empty");
    if (!spec.phase.empty() && spec.phase.size() != n) invalid("phase list must match the amplitude list");
    for (double a : spec.amplitude)
        if (!std::isfinite(a)) invalid("amplitudes must be finite");
    const auto& p = spec.params;
    const auto& omega = list(p.omega, "omega");
    if (omega.size() != n) invalid("omega must have one entry per coordinate");
    for (double w : omega)
        if (!(w > 0)) invalid("omega entries must be positive");
    auto kappa_list = [&]() -> const std::vector<double>& {
        const auto& k = list(p.kappa, "kappa");
        if (k.size() != n) invalid("kappa must have one entry per coordinate");
        for (double e : k)
            if (!(e > 0)) invalid("kappa entries must be positive");
        return k;
    };
    switch (spec.family) {
        case ExactFamily::HarmonicRef:
            break;
        case ExactFamily::IsotonicRef:
            kappa_list();
            for (double C : spec.amplitude)
                if (C == 0.0) invalid("C must be nonzero");
            break;
        case ExactFamily::ML1: {
            const double l = ell(p);
            if (!p.lambda || *p.lambda < 0) invalid("lambda must be given and non-negative");
            for (double A : spec.amplitude)
                if (!(1.0 + l * A * A > 0)) invalid("amplitude outside the domain of 1/(1 - lambda x^2)");
            break;
        }
        case ExactFamily::PowerLaw: {
            const double u = scalar(p.upsilon, "upsilon");
            if (u == -1.0) invalid("upsilon must differ from -1");
            if (!(scalar(p.alpha, "alpha") > 0)) invalid("alpha must be positive");
            for (double A : spec.amplitude)
                if (A < 0) invalid("amplitude must be non-negative");
            break;
        }
        case ExactFamily::Morse: {
            const auto& z = list(p.zeta, "zeta");
            if (z.size() != n) invalid("zeta must have one entry per coordinate");
            for (double e : z)
                if (!(e > 0)) invalid("zeta entries must be positive");
            for (double B : spec.amplitude)
                if (!(std::fabs(B) < 1)) invalid("|B| must be below 1");
            break;
        }
        case ExactFamily::SW1: {
            const auto& k = kappa_list();
            if (!p.lambda || *p.lambda < 0) invalid("lambda must be given and non-negative");
            const double l = ell(p);
            for (std::size_t i = 0; i < n; ++i) {
                const double C = spec.amplitude[i];
                if (C == 0.0) invalid("C must be nonzero");
                if (!(1.0 + l * C * C > 0)) invalid("C outside the mass-profile domain");
                const double W2 = omega[i] * omega[i] / (1.0 + l * C * C) - l * k[i] / (C * C);
                if (!(W2 > 0)) invalid("no real frequency for these constants");
                const double reach = std::max(C * C, k[i] / (W2 * C * C));
                if (!(1.0 + l * reach > 0)) invalid("orbit leaves the mass-profile domain");
            }
            break;
        }
        case ExactFamily::SW2: {
            kappa_list();
            const double eta = scalar(p.eta_exp, "eta_exp");
            if (eta == 1.0) invalid("eta_exp must differ from 1");
            if (!(scalar(p.beta, "beta") > 0)) invalid("beta must be positive");
            for (double C : spec.amplitude)
                if (!(eta * C > 0)) invalid("eta*C must be positive so that x > 0");
            if (spec.sw2_form == Sw2Form::Printed && eta * eta != 1.0)
                invalid("the printed form holds only for eta = -1");
            break;
        }
    }
}

std::vector<double> frequency_relation(Family family, const ParameterSet& p, std::span<const double> amplitude) {
    if (!p.omega) throw ParameterError(ErrorKind::MissingParameter, "omega", "required");
    const auto& omega = *p.omega;
    const std::size_t n = omega.size();
    auto need_amp = [&] {
        if (amplitude.size() != n)
            throw ParameterError(ErrorKind::InvalidParameter, "amplitude", "one entry per coordinate required");
    };
    std::vector<double> out(n);
    switch (family) {
        case Family::HarmonicReference:
        case Family::IsotonicReference:
            return omega;
        case Family::ML1: {
            need_amp();
            const double l = ell(p);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = omega[i] / std::sqrt(1.0 + l * amplitude[i] * amplitude[i]);
            return out;
        }
        case Family::PowerLaw: {
            if (!p.upsilon) throw ParameterError(ErrorKind::MissingParameter, "upsilon", "required");
            for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(1.0 + *p.upsilon) * omega[i];
            return out;
        }
        case Family::Morse: {
            if (!p.zeta) throw ParameterError(ErrorKind::MissingParameter, "zeta", "required");
            for (std::size_t i = 0; i < n; ++i) out[i] = (*p.zeta)[i] * omega[i];
            return out;
        }
        case Family::SW1: {
            need_amp();
            if (!p.kappa) throw ParameterError(ErrorKind::MissingParameter, "kappa", "required");
            const double l = ell(p);
            for (std::size_t i = 0; i < n; ++i) {
                const double C = amplitude[i];
                const double W2 = omega[i] * omega[i] / (1.0 + l * C * C) - l * (*p.kappa)[i] / (C * C);
                if (!(W2 > 0)) throw Error(ErrorKind::InvalidSpec, "no real frequency for these constants");
                out[i] = std::sqrt(W2);
            }
            return out;
        }
        case Family::SW2: {
            if (!p.eta_exp) throw ParameterError(ErrorKind::MissingParameter, "eta_exp", "required");
            for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(*p.eta_exp) * omega[i];
            return out;
        }
        case Family::ML2:
        case Family::Custom:
            break;
    }
    throw Error(ErrorKind::UnsupportedFamily, "no frequency relation for family " + to_string(family));
}

double printed_ml1_frequency(double omega, double lambda, Branch sign, double A) {
    return std::sqrt(omega * omega * A * A / (1.0 + sign_of(sign) * lambda * A * A));
}

double sw1_reference_omega(double Omega, double lambda, Branch sign, double C, double kappa) {
    const double l = sign_of(sign) * lambda;
    return std::sqrt((1.0 + l * C * C) * (Omega * Omega + l * kappa / (C * C)));
}

Kinematics exact_kinematics(const ExactSolutionSpec& spec, double t) {
    validate(spec);
    const std::size_t n = spec.n();
    const auto& p = spec.params;
    const auto& omega = *p.omega;
    Kinematics k;
    k.t = t;
    k.x.resize(n);
    k.v.resize(n);
    k.a.resize(n);
    const auto W = frequency_relation(system_family(spec.family), p, spec.amplitude);
    for (std::size_t i = 0; i < n; ++i) {
        const double A = spec.amplitude[i];
        const double ph = phase_of(spec, i);
        double& x = k.x[i];
        double& v = k.v[i];
        double& a = k.a[i];
        switch (spec.family) {
            case ExactFamily::HarmonicRef:
            case ExactFamily::ML1: {
                const double th = W[i] * t + ph;
                x = A * std::cos(th);
                v = -A * W[i] * std::sin(th);
                a = -W[i] * W[i] * x;
                break;
            }
            case ExactFamily::PowerLaw: {
                // sign-extended through the crossings of cos θ
                const double th = W[i] * t + ph;
                const double c = std::cos(th), s = std::sin(th);
                const double q = 1.0 / (1.0 + *p.upsilon);
                const double ac = std::fabs(c);
                const double sg = c < 0 ? -1.0 : 1.0;
                x = A * sg * std::pow(ac, q);
                v = -A * W[i] * q * std::pow(ac, q - 1) * s;
                a = A * W[i] * W[i] * q * sg * ((q - 1) * std::pow(ac, q - 2) * s * s - std::pow(ac, q));
                break;
            }
            case ExactFamily::Morse: {
                const double z = (*p.zeta)[i];
                const double th = W[i] * t + ph;
                const double u = 1.0 + A * std::cos(th);
                const double du = -A * W[i] * std::sin(th);
                const double d2u = -A * W[i] * W[i] * std::cos(th);
                x = std::log(u) / z;
                v = du / (z * u);
                a = (d2u * u - du * du) / (z * u * u);
                break;
            }
            case ExactFamily::IsotonicRef:
            case ExactFamily::SW1: {
                const double kap = (*p.kappa)[i];
                isotonic_kinematics(A * A, kap / (W[i] * W[i] * A * A), W[i], W[i] * t + ph, x, v, a);
                if (A < 0) {
                    x = -x;
                    v = -v;
                    a = -a;
                }
                break;
            }
            case ExactFamily::SW2: {
                const double eta = *p.eta_exp;
                const double kap = (*p.kappa)[i];
                const double K = spec.sw2_form == Sw2Form::Amended ? eta * eta * kap : kap;
                sw2_coordinate(*p.beta, eta, omega[i], A, K, ph, t, x, v, a);
                break;
            }
        }
    }
    return k;
}

State exact_solution(const ExactSolutionSpec& spec, double t) {
    Kinematics k = exact_kinematics(spec, t);
    return State{t, std::move(k.x), std::move(k.v)};
}

Kinematics sw2_printed_form(const ParameterSet& p, std::span<const double> C, std::span<const double> sigma,
                          double t) {
    if (!p.omega || !p.kappa || !p.eta_exp || !p.beta)
        throw Error(ErrorKind::InvalidSpec, "omega, kappa, eta_exp and beta are required");
    const std::size_t n = C.size();
    Kinematics k;
    k.t = t;
    k.x.resize(n);
    k.v.resize(n);
    k.a.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sw2_coordinate(*p.beta, *p.eta_exp, (*p.omega)[i], C[i], (*p.kappa)[i], sigma.empty() ? 0.0 : sigma[i], t,
                       k.x[i], k.v[i], k.a[i]);
    return k;
}

double exact_period(const ExactSolutionSpec& spec, std::size_t i) {
    validate(spec);
    const double w = frequency_relation(system_family(spec.family), spec.params, spec.amplitude).at(i);
    const double full = 2.0 * std::numbers::pi / w;
    switch (spec.family) {
        case ExactFamily::IsotonicRef:
        case ExactFamily::SW1:
        case ExactFamily::SW2:
            return 0.5 * full;  // x² depends on θ through sin²θ and cos²θ
        default:
            return full;
    }
}

double exact_energy(const ExactSolutionSpec& spec) {
    validate(spec);
    const auto& p = spec.params;
    const auto& omega = *p.omega;
    double e = 0.0;
    for (std::size_t i = 0; i < spec.n(); ++i) {
        const double A = spec.amplitude[i];
        const double w2 = omega[i] * omega[i];
        switch (spec.family) {
            case ExactFamily::HarmonicRef:
            case ExactFamily::Morse:
                e += 0.5 * w2 * A * A;
                break;
            case ExactFamily::ML1:
                e += 0.5 * w2 * A * A / (1.0 + ell(p) * A * A);
                break;
            case ExactFamily::PowerLaw:
                e += 0.5 * *p.alpha * *p.alpha * w2 * std::pow(A, 2.0 * (1.0 + *p.upsilon));
                break;
            case ExactFamily::IsotonicRef:
            case ExactFamily::SW2:
                e += 0.5 * (w2 * A * A + (*p.kappa)[i] / (A * A));
                break;
            case ExactFamily::SW1: {
                // x = C is a turning point
                const double m = 1.0 / (1.0 + ell(p) * A * A);
                e += 0.5 * (w2 * A * A * m + (*p.kappa)[i] / (A * A * m));
                break;
            }
        }
    }
    return e;
}

bool ml2_reduction_check(const ParameterSet& p) {
    if (!p.lambda || !p.eta_const || p.eta_const->empty()) return false;
    const double l = ell(p);
    for (double eta : *p.eta_const)
        if (std::fabs(l * eta * eta + 1.0) > 1e-12) return false;
    return true;
}

PdmSystem system_for(const ExactSolutionSpec& spec) {
    validate(spec);
    SystemDescription d;
    d.family = system_family(spec.family);
    d.n = spec.n();
    d.params = spec.params;
    d.mirrored = spec.family == ExactFamily::PowerLaw;
    return build_system(d);
}

const std::vector<Misprint>& misprint_ledger() {
    static const std::vector<Misprint> ledger = {
        {"ml1-frequency", "30, 69", "Omega^2 = omega^2 A^2 / (1 +- lambda A^2)",
         "Omega^2 = omega^2 / (1 +- lambda A^2)",
         "the cosine ansatz satisfies EL-I only without the A^2 in the numerator; the energy line agrees with the "
         "corrected form"},
        {"powerlaw-eom", "34", "restoring term (1+upsilon) omega^2 x^2", "restoring term (1+upsilon) omega^2 x",
         "f = 1+upsilon in the generic oscillator EOM gives a linear force; the exact solution needs it"},
        {"powerlaw-energy", "36", "B = A^(1/(1+upsilon))", "B = A^(1+upsilon), E = 1/2 sum alpha^2 omega^2 A^(2(1+upsilon))",
         "energy at the turning point x = A"},
        {"morse-f", "47", "stray subscript in '=_i f_i'", "f = zeta", "read as f = zeta per the surrounding text"},
        {"sw2-restriction", "66, 67", "solution with kappa, valid iff eta^2 = 1",
         "kappa -> eta^2 kappa inside the square root, valid for every eta != 1",
         "the printed restriction comes from keeping kappa when converting the tau-frame solution to t"},
        {"powerlaw-map-exponent", "70", "q = alpha x^(alpha+1)", "q = alpha x^(upsilon+1)",
         "exponent read as upsilon+1, as in the power-law section"},
    };
    return ledger;
}

}  // namespace pdm
