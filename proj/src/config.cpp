#include "pdm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pdm/expr.hpp"
#include "json.hpp"

namespace pdm {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, _] : obj.items())
        if (!keys.count(k)) throw ConfigError(join(path, k), "unknown key");
}

const json& object_at(const json& parent, const std::string& path) {
    if (!parent.is_object()) throw ConfigError(path.empty() ? "document" : path, "expected an object");
    return parent;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
    return d;
}

std::size_t count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(path, "expected a non-negative integer");
    return v.get<std::size_t>();
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

// A number is accepted where a one-element list is meant.
std::vector<double> numbers(const json& v, const std::string& path) {
    if (v.is_number()) return {number(v, path)};
    if (!v.is_array()) throw ConfigError(path, "expected a number or a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::string> strings(const json& v, const std::string& path) {
    if (v.is_string()) return {v.get<std::string>()};
    if (!v.is_array()) throw ConfigError(path, "expected a string or a list of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(text(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Branch branch(const json& v, const std::string& path) {
    if (v.is_number()) {
        const double s = v.get<double>();
        if (s == 1.0) return Branch::Plus;
        if (s == -1.0) return Branch::Minus;
    } else if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "+" || s == "plus") return Branch::Plus;
        if (s == "-" || s == "minus") return Branch::Minus;
    }
    throw ConfigError(path, "expected \"+\", \"-\", 1 or -1");
}

ParameterSet parse_params(const json& p) {
    const std::string path = "params";
    object_at(p, path);
    reject_unknown(p, path,
                   {"omega", "lambda", "sign", "upsilon", "alpha", "zeta", "eta_const", "eta_exp", "beta", "kappa"});
    ParameterSet out;
    if (p.contains("omega")) out.omega = numbers(p["omega"], "params.omega");
    if (p.contains("lambda")) out.lambda = number(p["lambda"], "params.lambda");
    if (p.contains("sign")) out.sign = branch(p["sign"], "params.sign");
    if (p.contains("upsilon")) out.upsilon = number(p["upsilon"], "params.upsilon");
    if (p.contains("alpha")) out.alpha = number(p["alpha"], "params.alpha");
    if (p.contains("zeta")) out.zeta = numbers(p["zeta"], "params.zeta");
    if (p.contains("eta_const")) out.eta_const = numbers(p["eta_const"], "params.eta_const");
    if (p.contains("eta_exp")) out.eta_exp = number(p["eta_exp"], "params.eta_exp");
    if (p.contains("beta")) out.beta = number(p["beta"], "params.beta");
    if (p.contains("kappa")) out.kappa = numbers(p["kappa"], "params.kappa");
    return out;
}

const std::set<std::string> kParamFields = {"omega", "lambda", "sign",    "upsilon", "alpha",
                                            "zeta",  "eta_const", "eta_exp", "beta", "kappa"};

std::string location_of(const std::string& field) { return kParamFields.count(field) ? "params." + field : field; }

IntegratorOptions parse_integrator(const json& j, bool& regularized, bool& scheme_given) {
    const std::string path = "integrator";
    object_at(j, path);
    reject_unknown(j, path, {"scheme", "h", "rel_tol", "abs_tol", "h_init", "h_min", "h_max", "t_end", "max_steps"});
    IntegratorOptions o;
    std::string scheme = "adaptive";
    scheme_given = j.contains("scheme");
    if (scheme_given) scheme = text(j["scheme"], "integrator.scheme");
    if (scheme == "rk4") {
        FixedRK4 s;
        if (j.contains("h")) s.h = number(j["h"], "integrator.h");
        o.scheme = s;
    } else if (scheme == "adaptive" || scheme == "regularized") {
        AdaptiveEmbedded45 s;
        if (j.contains("rel_tol")) s.rel_tol = number(j["rel_tol"], "integrator.rel_tol");
        if (j.contains("abs_tol")) s.abs_tol = number(j["abs_tol"], "integrator.abs_tol");
        if (j.contains("h_init")) s.h_init = number(j["h_init"], "integrator.h_init");
        if (j.contains("h_min")) s.h_min = number(j["h_min"], "integrator.h_min");
        if (j.contains("h_max")) s.h_max = number(j["h_max"], "integrator.h_max");
        if (j.contains("h")) throw ConfigError("integrator.h", "only used by the rk4 scheme");
        o.scheme = s;
        regularized = scheme == "regularized";
    } else {
        throw ConfigError("integrator.scheme", "expected \"adaptive\", \"rk4\" or \"regularized\"");
    }
    if (!j.contains("t_end")) throw ConfigError("integrator.t_end", "missing");
    o.t_end = number(j["t_end"], "integrator.t_end");
    if (j.contains("max_steps")) o.max_steps = count(j["max_steps"], "integrator.max_steps");
    return o;
}

OutputSpec parse_output(const json& j) {
    object_at(j, "output");
    reject_unknown(j, "output", {"path", "format", "stride"});
    OutputSpec o;
    if (j.contains("path")) o.path = text(j["path"], "output.path");
    if (j.contains("format")) {
        const std::string f = text(j["format"], "output.format");
        if (f == "csv")
            o.format = OutputFormat::Csv;
        else if (f == "json")
            o.format = OutputFormat::Json;
        else
            throw ConfigError("output.format", "expected \"csv\" or \"json\"");
    }
    if (j.contains("stride")) {
        o.stride = count(j["stride"], "output.stride");
        if (o.stride == 0) throw ConfigError("output.stride", "must be at least 1");
    }
    return o;
}

// ParameterError messages start with "field: "
std::string reason(const ParameterError& e) {
    const std::string m = e.what();
    const std::string prefix = e.field() + ": ";
    return m.starts_with(prefix) ? m.substr(prefix.size()) : m;
}

std::string line_and_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

RunConfig parse_run_config(std::string_view source) {
    json doc;
    try {
        doc = json::parse(source.begin(), source.end());
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        if (const auto at = msg.find("syntax error"); at != std::string::npos) msg = msg.substr(at);
        throw ConfigError(line_and_column(source, e.byte), msg);
    }
    object_at(doc, "");
    reject_unknown(doc, "", {"family", "n", "kind", "mirrored", "params", "mass", "mass_domain", "coupled_mass",
                             "potential", "initial", "integrator", "grid", "output"});

    RunConfig cfg;
    SystemDescription& d = cfg.system;
    if (!doc.contains("family")) throw ConfigError("family", "missing");
    const std::string fam = text(doc["family"], "family");
    const auto family = family_from_string(fam);
    if (!family) throw ConfigError("family", "unknown family '" + fam + "'");
    d.family = *family;
    if (doc.contains("n")) d.n = count(doc["n"], "n");
    if (doc.contains("kind")) {
        const std::string k = text(doc["kind"], "kind");
        if (k == "type1" || k == "I")
            d.kind = Kind::TypeI;
        else if (k == "type2" || k == "II")
            d.kind = Kind::TypeII;
        else
            throw ConfigError("kind", "expected \"type1\" or \"type2\"");
    }
    if (doc.contains("mirrored")) {
        if (!doc["mirrored"].is_boolean()) throw ConfigError("mirrored", "expected true or false");
        d.mirrored = doc["mirrored"].get<bool>();
    }
    if (doc.contains("params")) d.params = parse_params(doc["params"]);
    if (doc.contains("mass")) d.mass = strings(doc["mass"], "mass");
    if (doc.contains("mass_domain")) {
        const auto b = numbers(doc["mass_domain"], "mass_domain");
        if (b.size() != 2 || !(b[0] < b[1])) throw ConfigError("mass_domain", "expected [lo, hi] with lo < hi");
        d.mass_domain = Interval{b[0], b[1]};
    }
    if (doc.contains("coupled_mass")) d.coupled_mass = text(doc["coupled_mass"], "coupled_mass");
    if (doc.contains("potential")) d.potential = strings(doc["potential"], "potential");

    bool scheme_given = false;
    if (!doc.contains("integrator")) throw ConfigError("integrator", "missing");
    cfg.integrator = parse_integrator(doc["integrator"], cfg.regularized, scheme_given);
    try {
        validate(cfg.integrator);
    } catch (const ParameterError& e) {
        throw ConfigError(join("integrator", e.field()), reason(e));
    } catch (const Error& e) {
        throw ConfigError("integrator", e.what());
    }

    if (doc.contains("grid")) {
        const json& g = object_at(doc["grid"], "grid");
        reject_unknown(g, "grid", {"points"});
        if (g.contains("points")) cfg.grid_points = count(g["points"], "grid.points");
        if (cfg.grid_points < 2) throw ConfigError("grid.points", "need at least 2 points");
    }
    if (doc.contains("output")) cfg.output = parse_output(doc["output"]);

    // initial conditions, possibly from a closed form
    if (!doc.contains("initial")) throw ConfigError("initial", "missing");
    const json& init = object_at(doc["initial"], "initial");
    if (init.contains("from_exact")) {
        reject_unknown(init, "initial", {"from_exact"});
        const json& fe = object_at(init["from_exact"], "initial.from_exact");
        reject_unknown(fe, "initial.from_exact", {"amplitude", "phase", "sw2_form"});
        const auto ef = exact_family_from_string(fam);
        if (!ef) throw ConfigError("initial.from_exact", "requires a catalog family with a closed form");
        ExactSolutionSpec spec;
        spec.family = *ef;
        spec.params = d.params;
        if (!fe.contains("amplitude")) throw ConfigError("initial.from_exact.amplitude", "missing");
        spec.amplitude = numbers(fe["amplitude"], "initial.from_exact.amplitude");
        if (fe.contains("phase")) spec.phase = numbers(fe["phase"], "initial.from_exact.phase");
        if (fe.contains("sw2_form")) {
            const std::string f = text(fe["sw2_form"], "initial.from_exact.sw2_form");
            if (f == "printed")
                spec.sw2_form = Sw2Form::Printed;
            else if (f == "amended")
                spec.sw2_form = Sw2Form::Amended;
            else
                throw ConfigError("initial.from_exact.sw2_form", "expected \"printed\" or \"amended\"");
        }
        if (spec.n() != d.n) throw ConfigError("initial.from_exact.amplitude", "expected " + std::to_string(d.n) + " entries");
        try {
            validate(spec);
        } catch (const ParameterError& e) {
            throw ConfigError(location_of(e.field()), reason(e));
        } catch (const Error& e) {
            throw ConfigError("initial.from_exact", e.what());
        }
        cfg.initial = exact_solution(spec, 0.0);
        if (spec.family == ExactFamily::PowerLaw) d.mirrored = true;
        cfg.from_exact = spec;
    } else {
        reject_unknown(init, "initial", {"x", "v", "t0"});
        if (!init.contains("x")) throw ConfigError("initial.x", "missing");
        if (!init.contains("v")) throw ConfigError("initial.v", "missing");
        cfg.initial.x = numbers(init["x"], "initial.x");
        cfg.initial.v = numbers(init["v"], "initial.v");
        if (init.contains("t0")) cfg.initial.t = number(init["t0"], "initial.t0");
        if (cfg.initial.x.size() != d.n) throw ConfigError("initial.x", "expected " + std::to_string(d.n) + " entries");
        if (cfg.initial.v.size() != d.n) throw ConfigError("initial.v", "expected " + std::to_string(d.n) + " entries");
    }
    if (!(cfg.integrator.t_end > cfg.initial.t)) throw ConfigError("integrator.t_end", "must exceed the initial time");
    // mirrored power laws pass through x = 0, which needs the regularized scheme
    if (!scheme_given && d.family == Family::PowerLaw && d.mirrored) cfg.regularized = true;

    // syntax errors are located per key here; identifiers are resolved by
    // build_system, which knows which variables each expression may use
    std::vector<std::string> vars = {"x"};
    for (std::size_t i = 1; i <= d.n; ++i) vars.push_back("x" + std::to_string(i));
    auto check_syntax = [&](const std::string& expr, const std::string& path) {
        try {
            (void)expr::parse_expression(expr, vars);
        } catch (const SyntaxError& e) {
            throw ConfigError(path, e.what());
        } catch (const UnknownIdentifier&) {
        }
    };
    for (std::size_t i = 0; i < d.mass.size(); ++i) check_syntax(d.mass[i], "mass[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < d.potential.size(); ++i)
        check_syntax(d.potential[i], "potential[" + std::to_string(i) + "]");
    if (d.coupled_mass) check_syntax(*d.coupled_mass, "coupled_mass");

    try {
        (void)build_system(d);
    } catch (const ParameterError& e) {
        throw ConfigError(location_of(e.field()), reason(e));
    } catch (const UnknownIdentifier& e) {
        throw ConfigError(d.coupled_mass ? "coupled_mass" : "mass/potential", e.what());
    } catch (const Error& e) {
        throw ConfigError("system", e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace pdm
