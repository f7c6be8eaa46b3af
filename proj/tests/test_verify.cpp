#include <set>

#include "doctest.h"
#include "pdm/error.hpp"
#include "pdm/verify.hpp"

using namespace pdm;

TEST_SUITE("verify") {

TEST_CASE("registry") {
    const auto& checks = registered_checks();
    REQUIRE_FALSE(checks.empty());
    std::set<int> criteria;
    for (std::size_t k = 0; k < checks.size(); ++k) {
        if (k > 0) CHECK(checks[k - 1].name < checks[k].name);
        CHECK(checks[k].criterion >= 1);
        CHECK(checks[k].criterion <= 11);
        criteria.insert(checks[k].criterion);
    }
    CHECK(criteria.size() == 11);
}

TEST_CASE("energy drift of ML1") {
    const CheckReport r = run_check("energy-drift:ml1");
    CHECK(r.outcome() == Outcome::Pass);
    CHECK(r.metric < 1e-8);
    CHECK_FALSE(r.details.empty());
}

TEST_CASE("printed SW2 form is an expected failure") {
    const CheckReport r = run_check("exact-residual:sw2-paper-form");
    CHECK(r.expected_fail);
    CHECK(r.outcome() == Outcome::ExpectedFail);
    CHECK(r.metric > 1e-1);
}

TEST_CASE("unknown names") {
    try {
        run_check("no-such-check");
        FAIL("expected UnknownCheck");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownCheck);
    }
    CHECK_THROWS_AS(run_suite({"energy-drift:ml1", "no-such-check"}), Error);
    CHECK_THROWS_AS(run_suite({"nothing:*"}), Error);
}

TEST_CASE("empty selection") {
    const SuiteResult r = run_suite({});
    CHECK(r.reports.empty());
    CHECK(r.passes == 0);
    CHECK(r.expected_fails == 0);
    CHECK(r.failures == 0);
}

TEST_CASE("loose integrator tolerance makes the drift checks fail") {
    CheckContext loose;
    loose.rel_tol = 1e-4;
    loose.abs_tol = 1e-6;
    const SuiteResult r = run_suite({"energy-drift:*"}, loose);
    REQUIRE(r.reports.size() == 5);
    CHECK(r.failures == 5);
    for (const auto& rep : r.reports) CHECK(rep.outcome() == Outcome::Fail);
}

TEST_CASE("patterns expand in name order") {
    const SuiteResult r = run_suite({"parser:*", "rk4-order"});
    REQUIRE(r.reports.size() == 4);
    CHECK(r.reports[0].name == "parser:ad-first");
    CHECK(r.reports[3].name == "rk4-order");
    CHECK(r.passes + r.expected_fails + r.failures == 4);
}

TEST_CASE("reports are bit-identical across runs") {
    const std::vector<std::string> sel = {"invariance:*", "parser:ad-first", "noninvariance:n2"};
    const SuiteResult a = run_suite(sel);
    const SuiteResult b = run_suite(sel);
    REQUIRE(a.reports.size() == b.reports.size());
    for (std::size_t k = 0; k < a.reports.size(); ++k) {
        CHECK(a.reports[k].name == b.reports[k].name);
        CHECK(a.reports[k].metric == b.reports[k].metric);
        CHECK(a.reports[k].passed == b.reports[k].passed);
    }
    CheckContext other;
    other.seed = 7;
    const CheckReport c = run_check("parser:ad-first", other);
    CHECK(c.outcome() == Outcome::Pass);
}

}
