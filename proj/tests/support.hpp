#pragma once

#include <cmath>
#include <vector>

#include "pdm/core.hpp"

namespace test {

inline pdm::ParameterSet omega(std::vector<double> w) {
    pdm::ParameterSet p;
    p.omega = std::move(w);
    return p;
}

inline pdm::SystemDescription catalog(pdm::Family f, pdm::ParameterSet p, std::size_t n = 1) {
    pdm::SystemDescription d;
    d.family = f;
    d.n = n;
    d.params = std::move(p);
    return d;
}

inline pdm::PdmSystem ml1(double lambda, pdm::Branch b, std::vector<double> w = {1.0}) {
    auto p = omega(w);
    p.lambda = lambda;
    p.sign = b;
    return pdm::build_system(catalog(pdm::Family::ML1, p, w.size()));
}

inline double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace test
