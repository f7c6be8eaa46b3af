#include <random>

#include "doctest.h"
#include "pdm/error.hpp"
#include "pdm/expr.hpp"
#include "pdm/profiles.hpp"

using namespace pdm;

namespace {

void check_value(const ProfileValue& got, double m, double dm, double d2m) {
    CHECK(got.m == doctest::Approx(m).epsilon(1e-14));
    CHECK(got.dm == doctest::Approx(dm).epsilon(1e-14));
    CHECK(got.d2m == doctest::Approx(d2m).epsilon(1e-14));
}

// fourth-order central differences of m and of m'
void check_against_differences(const MassProfile& p, double lo, double hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xs(lo, hi);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double x = xs(rng);
        const double h = 1e-3 * std::max(1.0, std::fabs(x));
        auto m = [&](double y) { return p.eval(y).m; };
        auto dm = [&](double y) { return p.eval(y).dm; };
        const double fd1 = (-m(x + 2 * h) + 8 * m(x + h) - 8 * m(x - h) + m(x - 2 * h)) / (12 * h);
        const double fd2 = (-dm(x + 2 * h) + 8 * dm(x + h) - 8 * dm(x - h) + dm(x - 2 * h)) / (12 * h);
        const ProfileValue v = p.eval(x);
        worst = std::max(worst, std::fabs(v.dm - fd1) / std::max(1.0, std::fabs(v.dm)));
        worst = std::max(worst, std::fabs(v.d2m - fd2) / std::max(1.0, std::fabs(v.d2m)));
    }
    CHECK(worst < 1e-6);
}

}  // namespace

TEST_SUITE("profiles") {

TEST_CASE("catalog values and derivatives") {
    check_value(profile_eval(profile::MathewsLakshmanan{1.0, Branch::Plus}, 1.0), 0.5, -0.5, 0.5);
    check_value(profile_eval(profile::PowerLaw{1.0, 1.0}, 2.0), 4.0, 4.0, 2.0);
    check_value(profile_eval(profile::Exponential{1.0}, 0.0), 1.0, 2.0, 4.0);
    check_value(profile_eval(profile::Unit{}, 3.0), 1.0, 0.0, 0.0);
    // m = beta^2 x^(2(eta-1)) with beta = 2, eta = -1: 4/x^4
    check_value(profile_eval(profile::IsotonicPowerLaw{2.0, -1.0}, 1.0), 4.0, -16.0, 80.0);
}

TEST_CASE("domains") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(profile_domain(profile::MathewsLakshmanan{1.0, Branch::Minus}) == Interval{-1.0, 1.0});
    CHECK(profile_domain(profile::MathewsLakshmanan{4.0, Branch::Minus}) == Interval{-0.5, 0.5});
    CHECK(profile_domain(profile::MathewsLakshmanan{1.0, Branch::Plus}) == Interval{-inf, inf});
    CHECK(profile_domain(profile::PowerLaw{1.0, 1.0}) == Interval{0.0, inf});
    CHECK(profile_domain(profile::IsotonicPowerLaw{1.0, 2.0}) == Interval{0.0, inf});
    CHECK(profile_domain(profile::Exponential{0.5}) == Interval{-inf, inf});
}

TEST_CASE("evaluation outside the domain") {
    const MassProfile minus = profile::MathewsLakshmanan{1.0, Branch::Minus};
    CHECK_THROWS_AS(minus.eval(1.0), DomainViolation);
    CHECK_THROWS_AS(minus.eval(-2.0), DomainViolation);
    const MassProfile pl = profile::PowerLaw{1.0, 0.5};
    CHECK_THROWS_AS(pl.eval(-1.0), DomainViolation);
    CHECK_THROWS_AS(pl.eval(0.0), DomainViolation);
}

TEST_CASE("mirrored power law is even") {
    const MassProfile p = profile::PowerLaw{1.5, 0.5, true};
    for (double x : {0.3, 1.0, 2.7}) {
        const ProfileValue a = p.eval(x), b = p.eval(-x);
        CHECK(a.m == doctest::Approx(b.m));
        CHECK(a.dm == doctest::Approx(-b.dm));
        CHECK(a.d2m == doctest::Approx(b.d2m));
    }
    CHECK(p.admits(-1.0));
    CHECK_FALSE(p.admits(0.0));
}

TEST_CASE("analytic derivatives agree with central differences") {
    check_against_differences(profile::MathewsLakshmanan{1.0, Branch::Plus}, -5.0, 5.0, 1);
    check_against_differences(profile::MathewsLakshmanan{1.0, Branch::Minus}, -0.9, 0.9, 2);
    check_against_differences(profile::PowerLaw{1.3, 2.0}, 0.1, 3.0, 3);
    check_against_differences(profile::PowerLaw{0.7, -0.5}, 0.2, 3.0, 4);
    check_against_differences(profile::Exponential{0.8}, -2.0, 2.0, 5);
    check_against_differences(profile::IsotonicPowerLaw{1.2, -1.0}, 0.3, 3.0, 6);
    check_against_differences(profile::IsotonicPowerLaw{0.9, 2.5}, 0.2, 2.0, 7);
    check_against_differences(profile::Custom{expr::parse_expression("1 + 0.5*sin(x)^2"), Interval{}}, -3.0, 3.0, 8);
}

TEST_CASE("Mathews-Lakshmanan identity m'/2m") {
    std::mt19937_64 rng(3);
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const double lambda = 0.7;
        const MassProfile p = profile::MathewsLakshmanan{lambda, b};
        std::uniform_real_distribution<double> xs(-1.1, 1.1);
        for (int k = 0; k < 1000; ++k) {
            const double x = xs(rng);
            const double s = sign_of(b);
            const ProfileValue v = p.eval(x);
            CHECK(v.dm / (2 * v.m) == doctest::Approx(-s * lambda * x / (1 + s * lambda * x * x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("custom profile from an expression") {
    const MassProfile p = profile::Custom{expr::parse_expression("1/(1+x^2)"), Interval{}};
    check_value(p.eval(1.0), 0.5, -0.5, 0.5);
    const MassProfile bad = profile::Custom{expr::parse_expression("x"), Interval{}};
    CHECK_THROWS_AS(bad.eval(-1.0), DomainViolation);
}

TEST_CASE("coupled profile gradient") {
    const CoupledProfile c{expr::parse_expression("1 + x1^2 + 2*x2^2", coordinate_names(2))};
    const double x[] = {1.0, 0.5};
    const auto v = c.eval(x);
    CHECK(v.m == doctest::Approx(2.5));
    CHECK(v.grad[0] == doctest::Approx(2.0));
    CHECK(v.grad[1] == doctest::Approx(2.0));
}

}
