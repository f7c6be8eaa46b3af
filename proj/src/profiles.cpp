#include "pdm/profiles.hpp"

#include <cmath>
#include <cstdio>

#include "pdm/error.hpp"

namespace pdm {

namespace {

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

[[noreturn]] void outside(std::size_t i, double x, const std::string& what) {
    throw DomainViolation(i, x, "x" + std::to_string(i + 1) + " = " + num(x) + " outside the domain of " + what);
}

}  // namespace

Interval MassProfile::domain() const {
    return std::visit(
        overloaded{
            [](const profile::Unit&) { return Interval{}; },
            [](const profile::MathewsLakshmanan& p) {
                if (p.branch == Branch::Plus || p.lambda <= 0.0) return Interval{};
                const double edge = 1.0 / std::sqrt(p.lambda);
                return Interval{-edge, edge};
            },
            [](const profile::PowerLaw&) { return Interval{0.0, kInf}; },
            [](const profile::Exponential&) { return Interval{}; },
            [](const profile::IsotonicPowerLaw&) { return Interval{0.0, kInf}; },
            [](const profile::Custom& p) { return p.domain; },
        },
        family_);
}

bool MassProfile::admits(double x) const {
    if (!std::isfinite(x)) return false;
    if (const auto* p = std::get_if<profile::PowerLaw>(&family_); p && p->mirrored) return x != 0.0;
    return domain().contains(x);
}

ProfileValue MassProfile::eval(double x, std::size_t i) const {
    if (!admits(x)) outside(i, x, describe());
    return std::visit(
        overloaded{
            [](const profile::Unit&) { return ProfileValue{1.0, 0.0, 0.0}; },
            [&](const profile::MathewsLakshmanan& p) {
                const double l = sign_of(p.branch) * p.lambda;
                const double m = 1.0 / (1.0 + l * x * x);
                return ProfileValue{m, -2.0 * l * x * m * m, -2.0 * l * m * m + 8.0 * l * l * x * x * m * m * m};
            },
            [&](const profile::PowerLaw& p) {
                const double k = 2.0 * p.upsilon;
                const double m = p.alpha * p.alpha * std::pow(std::fabs(x), k);
                return ProfileValue{m, k * m / x, k * (k - 1.0) * m / (x * x)};
            },
            [&](const profile::Exponential& p) {
                const double m = std::exp(2.0 * p.zeta * x);
                return ProfileValue{m, 2.0 * p.zeta * m, 4.0 * p.zeta * p.zeta * m};
            },
            [&](const profile::IsotonicPowerLaw& p) {
                const double k = 2.0 * (p.eta - 1.0);
                const double m = p.beta * p.beta * std::pow(x, k);
                return ProfileValue{m, k * m / x, k * (k - 1.0) * m / (x * x)};
            },
            [&](const profile::Custom& p) {
                const expr::Dual2 d = p.m.eval(x);
                if (!(d.v > 0.0)) outside(i, x, "custom profile (m <= 0)");
                return ProfileValue{d.v, d.d1, d.d2};
            },
        },
        family_);
}

std::string MassProfile::describe() const {
    return std::visit(
        overloaded{
            [](const profile::Unit&) { return std::string("m = 1"); },
            [](const profile::MathewsLakshmanan& p) {
                return "m = 1/(1 " + std::string(p.branch == Branch::Plus ? "+" : "-") + " " + num(p.lambda) + " x^2)";
            },
            [](const profile::PowerLaw& p) {
                return "m = " + num(p.alpha) + "^2 x^(2*" + num(p.upsilon) + ")" + (p.mirrored ? " (mirrored)" : "");
            },
            [](const profile::Exponential& p) { return "m = exp(2*" + num(p.zeta) + " x)"; },
            [](const profile::IsotonicPowerLaw& p) {
                return "m = " + num(p.beta) + "^2 x^(2*(" + num(p.eta) + "-1))";
            },
            [](const profile::Custom& p) { return "m = " + p.m.to_string(); },
        },
        family_);
}

CoupledProfile::Value CoupledProfile::eval(std::span<const double> x) const {
    if (use_separable_) {
        const ProfileValue v = separable_.eval(x[0], 0);
        return {v.m, {v.dm}};
    }
    const std::size_t n = x.size();
    Value out{0.0, std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        const expr::Dual2 d = expression_.eval(x, i);
        out.m = d.v;
        out.grad[i] = d.d1;
    }
    if (n == 0) out.m = expression_.value(x);
    if (!(out.m > 0.0)) throw DomainViolation(0, x.empty() ? 0.0 : x[0], "coupled mass m(x) <= 0");
    return out;
}

std::string CoupledProfile::describe() const {
    return use_separable_ ? separable_.describe() : "m = " + expression_.to_string();
}

std::vector<std::string> coordinate_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

}  // namespace pdm
