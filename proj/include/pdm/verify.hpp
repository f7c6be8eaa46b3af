#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pdm {

/// Inputs shared by every check. Sampling is seeded, so reports are
/// reproducible bit for bit.
struct CheckContext {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::uint64_t seed = 20240611;
};

enum class Outcome { Pass, ExpectedFail, Fail };

struct CheckReport {
    std::string name;
    /// metric <= threshold, or metric >= threshold for expected-fail checks.
    bool passed = false;
    double metric = 0.0;
    double threshold = 0.0;
    /// Demonstrates a negative result: the check passes when the metric is large.
    bool expected_fail = false;
    std::string details;

    Outcome outcome() const {
        if (!passed) return Outcome::Fail;
        return expected_fail ? Outcome::ExpectedFail : Outcome::Pass;
    }
};

std::string to_string(Outcome o);

struct CheckInfo {
    std::string name;
    int criterion;  ///< acceptance criterion the check belongs to
    bool expected_fail;
    std::string summary;
};

/// All registered checks, sorted by name.
const std::vector<CheckInfo>& registered_checks();

/// Throws UnknownCheck for unregistered names.
CheckReport run_check(const std::string& name, const CheckContext& ctx = {});

struct SuiteResult {
    std::vector<CheckReport> reports;  ///< sorted by name
    std::size_t passes = 0;
    std::size_t expected_fails = 0;
    std::size_t failures = 0;
};

/// Runs the selection concurrently. Entries are check names, "prefix:*"
/// patterns, "all" or "default". Unknown names throw UnknownCheck before
/// anything runs.
SuiteResult run_suite(const std::vector<std::string>& selection, const CheckContext& ctx = {});

}  // namespace pdm
