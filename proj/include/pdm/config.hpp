#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "pdm/core.hpp"
#include "pdm/error.hpp"
#include "pdm/exact.hpp"
#include "pdm/integrate.hpp"

namespace pdm {

enum class OutputFormat { Csv, Json };

struct OutputSpec {
    std::string path;  ///< empty: standard output
    OutputFormat format = OutputFormat::Csv;
    std::size_t stride = 1;
};

/// A JSON run description. Keys:
///   family, n, kind ("type1" | "type2"), mirrored,
///   params {omega[], lambda, sign, upsilon, alpha, zeta[], eta_const[], eta_exp, beta, kappa[]},
///   mass, mass_domain [lo, hi], coupled_mass, potential,
///   initial {x[], v[], t0} or {from_exact: {amplitude[], phase[], sw2_form}},
///   integrator {scheme ("adaptive" | "rk4" | "regularized"), h, rel_tol, abs_tol,
///               h_init, h_min, h_max, t_end, max_steps},
///   grid {points} for tabulating closed forms,
///   output {path, format ("csv" | "json"), stride}.
struct RunConfig {
    SystemDescription system;
    State initial;
    std::optional<ExactSolutionSpec> from_exact;
    IntegratorOptions integrator;
    bool regularized = false;
    std::size_t grid_points = 1001;
    OutputSpec output;
};

/// Error in a configuration document. location is "line L, column C" for
/// malformed JSON and the dotted key path (e.g. "params.omega") otherwise.
class ConfigError : public Error {
public:
    ConfigError(std::string location, const std::string& message)
        : Error(ErrorKind::ConfigError, location + ": " + message), location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

/// Parses and validates. Invalid system parameters surface as ConfigError at
/// params.<field>; malformed custom expressions at their key, with the
/// parser's position in the message.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

}  // namespace pdm
