#include <functional>
#include <random>

#include "doctest.h"
#include "pdm/eom.hpp"
#include "pdm/error.hpp"
#include "pdm/exact.hpp"
#include "support.hpp"

using namespace pdm;

namespace {

struct PrintedCase {
    const char* name;
    PdmSystem system;
    double lo, hi;
    std::function<double(double, double)> accel;  // (x, v) -> a, written out by hand per family
};

std::vector<PrintedCase> printed_cases() {
    std::vector<PrintedCase> out;
    const double w = 1.3;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
        const double s = sign_of(b), l = 0.6;
        auto p = test::omega({w});
        p.lambda = l;
        p.sign = b;
        out.push_back({"ml1", build_system(test::catalog(Family::ML1, p)), -1.2, 1.2, [=](double x, double v) {
                           const double d = 1 + s * l * x * x;
                           return s * l * x * v * v / d - w * w * x / d;
                       }});
        const double eta = 1.7;
        p.eta_const = std::vector<double>{eta};
        out.push_back({"ml2", build_system(test::catalog(Family::ML2, p)), -1.2, 1.2, [=](double x, double v) {
                           const double d = 1 + s * l * x * x;
                           return s * l * x * v * v / d + s * w * w * eta * eta * l * x / d;
                       }});
        p.eta_const.reset();
        p.kappa = std::vector<double>{0.4};
        out.push_back({"sw1", build_system(test::catalog(Family::SW1, p)), 0.1, 1.2, [=](double x, double v) {
                           const double d = 1 + s * l * x * x;
                           return s * l * x * v * v / d - w * w * x / d + 0.4 * d / (x * x * x);
                       }});
    }
    for (double u : {1.0, 2.0, 0.5, -0.5}) {
        auto p = test::omega({w});
        p.upsilon = u;
        p.alpha = 1.4;
        out.push_back({"powerlaw", build_system(test::catalog(Family::PowerLaw, p)), 0.1, 2.0,
                       [=](double x, double v) { return -u * v * v / x - (1 + u) * w * w * x; }});
    }
    {
        auto p = test::omega({w});
        p.zeta = std::vector<double>{0.8};
        out.push_back({"morse", build_system(test::catalog(Family::Morse, p)), -2.0, 2.0, [=](double x, double v) {
                           return -0.8 * v * v - 0.8 * w * w * (1 - std::exp(-0.8 * x));
                       }});
    }
    for (double eta : {-1.0, 2.0, 0.5}) {
        auto p = test::omega({w});
        p.eta_exp = eta;
        p.beta = 1.1;
        p.kappa = std::vector<double>{0.3};
        const double b4 = std::pow(1.1, 4);
        out.push_back({"sw2", build_system(test::catalog(Family::SW2, p)), 0.2, 2.0, [=](double x, double v) {
                           return -(eta - 1) * v * v / x - eta * w * w * x + eta * 0.3 / (b4 * std::pow(x, 4 * eta - 1));
                       }});
    }
    {
        auto p = test::omega({w});
        p.kappa = std::vector<double>{0.4};
        out.push_back({"isotonic", build_system(test::catalog(Family::IsotonicReference, p)), 0.1, 2.0,
                       [=](double x, double) { return -w * w * x + 0.4 / (x * x * x); }});
    }
    return out;
}

}  // namespace

TEST_SUITE("eom") {

TEST_CASE("EL-I examples") {
    const PdmSystem ml = test::ml1(1.0, Branch::Plus);
    CHECK(el1_acceleration(ml, State{0.0, {1.0}, {0.0}})[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(el1_acceleration(ml, State{0.0, {0.0}, {5.0}})[0] == 0.0);

    auto p = test::omega({1.0});
    p.upsilon = 1.0;
    p.alpha = 1.0;
    for (bool mirrored : {false, true}) {
        auto d = test::catalog(Family::PowerLaw, p);
        d.mirrored = mirrored;
        try {
            el1_acceleration(build_system(d), State{0.0, {0.0}, {1.0}});
            FAIL("expected SingularCoefficient");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::SingularCoefficient);
        }
    }
}

TEST_CASE("EL-II examples") {
    SystemDescription d;
    d.kind = Kind::TypeII;
    d.n = 2;
    d.coupled_mass = "1 + x1^2 + x2^2";
    d.potential = {"0"};
    const auto a = el2_acceleration(build_system(d), State{0.0, {1.0, 0.0}, {0.0, 1.0}});
    CHECK(a[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(0.0));

    d.coupled_mass = "1";
    d.potential = {"0.5*x1^2 + 2*x2^2"};
    const auto h = el2_acceleration(build_system(d), State{0.0, {0.3, -0.7}, {1.0, 2.0}});
    CHECK(h[0] == doctest::Approx(-0.3));
    CHECK(h[1] == doctest::Approx(4.0 * 0.7));
}

TEST_CASE("EL-II equals EL-I for one coordinate") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> xs(-2.0, 2.0), vs(-3.0, 3.0);
    SystemDescription one;
    one.mass = {"exp(0.3*x) + x^2"};
    one.potential = {"cos(x) + x^4"};
    SystemDescription two;
    two.kind = Kind::TypeII;
    two.coupled_mass = "exp(0.3*x1) + x1^2";
    two.potential = {"cos(x1) + x1^4"};
    const PdmSystem s1 = build_system(one), s2 = build_system(two);
    const PdmSystem ml = test::ml1(0.5, Branch::Plus);
    for (int k = 0; k < 1000; ++k) {
        const State st{0.0, {xs(rng)}, {vs(rng)}};
        CHECK(test::rel(el2_acceleration(s2, st)[0], el1_acceleration(s1, st)[0]) < 1e-12);
        CHECK(test::rel(el2_acceleration(ml, st)[0], el1_acceleration(ml, st)[0]) < 1e-12);
    }
}

TEST_CASE("generic EL-I agrees with hand-written family equations") {
    std::mt19937_64 rng(23);
    for (auto& c : printed_cases()) {
        CAPTURE(c.name);
        std::uniform_real_distribution<double> xs(c.lo, c.hi), vs(-2.0, 2.0);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double x = xs(rng), v = vs(rng);
            if (!c.system.admits(std::span<const double>(&x, 1))) continue;
            const double a = el1_acceleration(c.system, State{0.0, {x}, {v}})[0];
            worst = std::max(worst, test::rel(a, c.accel(x, v)));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("EL-I acceleration is even in the velocity") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> xs(0.2, 0.9), vs(-3.0, 3.0);
    for (auto& c : printed_cases()) {
        for (int k = 0; k < 100; ++k) {
            const double x = xs(rng), v = vs(rng);
            if (!c.system.admits(std::span<const double>(&x, 1))) continue;
            CHECK(el1_acceleration(c.system, State{0.0, {x}, {v}})[0] ==
                  el1_acceleration(c.system, State{0.0, {x}, {-v}})[0]);
        }
    }
}

TEST_CASE("reference accelerations") {
    const double one[] = {1.0}, zero[] = {0.0};
    CHECK(reference_acceleration(ReferenceSystem::harmonic({1.0}), one, one)[0] == -1.0);
    const auto iso = ReferenceSystem::isotonic({1.0}, {1.0});
    CHECK(reference_acceleration(iso, one, one)[0] == doctest::Approx(0.0));
    try {
        reference_acceleration(iso, zero, one);
        FAIL("expected SingularPoint");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularPoint);
    }
}

TEST_CASE("EL-I residual") {
    ExactSolutionSpec spec;
    spec.family = ExactFamily::ML1;
    spec.params = test::omega({1.0});
    spec.params.lambda = 1.0;
    spec.amplitude = {1.0};
    const PdmSystem sys = system_for(spec);
    const double T = exact_period(spec);

    double exact = 0.0, fd = 0.0, perturbed = 0.0;
    ExactSolutionSpec wrong = spec;
    wrong.amplitude = {1.1};
    const double W = frequency_relation(Family::ML1, spec.params, spec.amplitude)[0];
    for (int k = 0; k < 200; ++k) {
        const double t = T * (k + 0.5) / 200;
        exact = std::max(exact, std::fabs(el1_residual(sys, [&](double s) { return exact_kinematics(spec, s); }, t)[0]));
        const PositionFn pos = [&](double s) { return exact_solution(spec, s).x; };
        fd = std::max(fd, std::fabs(el1_residual(sys, pos, t)[0]));
        // amplitude changed, frequency kept
        const SolutionFn off = [&](double s) {
            return Kinematics{s, {1.1 * std::cos(W * s)}, {-1.1 * W * std::sin(W * s)}, {-1.1 * W * W * std::cos(W * s)}};
        };
        perturbed = std::max(perturbed, std::fabs(el1_residual(sys, off, t)[0]));
    }
    CHECK(exact < 1e-10);
    CHECK(fd < 1e-5);
    CHECK(perturbed > 1e-2);

    auto p = test::omega({1.0});
    p.upsilon = 1.0;
    p.alpha = 1.0;
    const PdmSystem pl = build_system(test::catalog(Family::PowerLaw, p));
    const SolutionFn cosine = [](double s) {
        return Kinematics{s, {2 + std::cos(s)}, {-std::sin(s)}, {-std::cos(s)}};
    };
    CHECK(std::fabs(el1_residual(pl, cosine, 0.3)[0]) > 1e-2);
}

}
