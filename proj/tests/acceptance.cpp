// One line per acceptance criterion. A criterion passes when every check
// attached to it passes, or fails in the way it is expected to.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "pdm/verify.hpp"

namespace {

const std::map<int, std::string> kTitles = {
    {1, "exact-solution residuals < 1e-8"},
    {2, "numerical vs exact trajectories < 1e-6 over 10 periods"},
    {3, "relative energy drift < 1e-8 over 100 periods"},
    {4, "measured periods match frequency relations < 1e-6"},
    {5, "g = m f^2 < 1e-10, potential match < 1e-12"},
    {6, "mapped EL-I trajectories satisfy EL-G < 1e-6"},
    {7, "EL-II non-invariance at n=2, invariance at n=1"},
    {8, "ML2 reduces to ML1 within 1e-9 over 5 periods"},
    {9, "SW2 printed form valid only at eta=-1, amended form valid at eta=2"},
    {10, "parser AD vs differences, positioned syntax errors"},
    {11, "RK4 error ratio per halving in [12, 20]"},
};

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const pdm::SuiteResult res = pdm::run_suite({"all"});

    std::map<int, std::vector<const pdm::CheckReport*>> by_criterion;
    std::map<std::string, int> criterion_of;
    for (const auto& info : pdm::registered_checks()) criterion_of[info.name] = info.criterion;
    for (const auto& r : res.reports) by_criterion[criterion_of.at(r.name)].push_back(&r);

    int failed = 0;
    for (const auto& [id, title] : kTitles) {
        const auto& reports = by_criterion[id];
        bool ok = !reports.empty();
        std::string worst;
        for (const auto* r : reports) {
            if (r->outcome() != pdm::Outcome::Fail) continue;
            ok = false;
            worst += " " + r->name;
        }
        if (!ok) ++failed;
        std::printf("[%s] criterion %2d: %s (%zu checks)%s%s\n", ok ? "PASS" : "FAIL", id, title.c_str(),
                    reports.size(), worst.empty() ? "" : "; failing:", worst.c_str());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of %zu criteria failed (%.1f s)\n", failed, kTitles.size(), secs);
    return failed ? 1 : 0;
}
