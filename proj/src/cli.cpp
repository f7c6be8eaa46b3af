#include "pdm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdm/config.hpp"
#include "pdm/eom.hpp"
#include "pdm/transform.hpp"
#include "pdm/verify.hpp"

namespace pdm::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string render(const Table& table, const OutputSpec& spec) {
    std::vector<std::size_t> picked;
    for (std::size_t k = 0; k < table.rows.size(); k += spec.stride) picked.push_back(k);
    if (!table.rows.empty() && picked.back() != table.rows.size() - 1) picked.push_back(table.rows.size() - 1);

    std::string s;
    if (spec.format == OutputFormat::Csv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) s += (c ? "," : "") + table.columns[c];
        s += '\n';
        for (std::size_t k : picked) {
            const auto& row = table.rows[k];
            for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + num(row[c]);
            s += '\n';
        }
        return s;
    }
    s = "{\"columns\":[";
    for (std::size_t c = 0; c < table.columns.size(); ++c) s += (c ? ",\"" : "\"") + table.columns[c] + "\"";
    s += "],\"rows\":[";
    for (std::size_t r = 0; r < picked.size(); ++r) {
        const auto& row = table.rows[picked[r]];
        s += r ? ",[" : "[";
        for (std::size_t c = 0; c < row.size(); ++c) s += (c ? "," : "") + (std::isfinite(row[c]) ? num(row[c]) : "null");
        s += "]";
    }
    s += "]}\n";
    return s;
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
    f << content;
    if (!f) throw Error(ErrorKind::ConfigError, "write to '" + path + "' failed");
}

std::vector<std::string> state_columns(std::size_t n) {
    std::vector<std::string> c = {"t"};
    for (std::size_t i = 1; i <= n; ++i) c.push_back("x_" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) c.push_back("v_" + std::to_string(i));
    c.push_back("E");
    return c;
}

std::vector<double> state_row(const PdmSystem& sys, const State& s) {
    std::vector<double> row = {s.t};
    row.insert(row.end(), s.x.begin(), s.x.end());
    row.insert(row.end(), s.v.begin(), s.v.end());
    double e = std::numeric_limits<double>::quiet_NaN();
    try {
        e = total_energy(sys, s).total;
    } catch (const Error&) {
    }
    row.push_back(e);
    return row;
}

Trajectory run_integration(const RunConfig& cfg, const PdmSystem& sys) {
    if (cfg.regularized)
        return integrate_regularized(sys, cfg.initial, std::get<AdaptiveEmbedded45>(cfg.integrator.scheme),
                                     cfg.integrator.t_end);
    return integrate(sys, cfg.initial, cfg.integrator);
}

int report_termination(const Trajectory& tr, std::ostream& err) {
    if (tr.termination.kind == Termination::Kind::Completed) return kSuccess;
    err << "integration stopped early at t=" << num(tr.termination.t) << ": " << tr.termination.message << '\n';
    return kCheckFailed;
}

struct Overrides {
    std::string config;
    std::string out;
    std::string format;
    std::size_t stride = 0;
};

RunConfig load(const Overrides& o) {
    RunConfig cfg = load_run_config(o.config);
    if (!o.out.empty()) cfg.output.path = o.out;
    if (o.format == "csv") cfg.output.format = OutputFormat::Csv;
    if (o.format == "json") cfg.output.format = OutputFormat::Json;
    if (o.stride) cfg.output.stride = o.stride;
    return cfg;
}

void add_output_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output path (default: output.path, or stdout)");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--stride", o.stride, "write every k-th sample")->check(CLI::PositiveNumber);
}

int cmd_simulate(const Overrides& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(o);
    const PdmSystem sys = build_system(cfg.system);
    const Trajectory tr = run_integration(cfg, sys);
    Table t{state_columns(sys.n()), {}};
    for (const State& s : tr.samples) t.rows.push_back(state_row(sys, s));
    emit(render(t, cfg.output), cfg.output.path, out);
    return report_termination(tr, err);
}

int cmd_exact(const Overrides& o, std::size_t points, std::ostream& out) {
    RunConfig cfg = load(o);
    if (!cfg.from_exact) throw ConfigError("initial.from_exact", "the exact subcommand needs a closed form");
    if (points) cfg.grid_points = points;
    const PdmSystem sys = build_system(cfg.system);
    Table t{state_columns(sys.n()), {}};
    const double t0 = cfg.initial.t, t1 = cfg.integrator.t_end;
    for (std::size_t k = 0; k < cfg.grid_points; ++k) {
        const double tk = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(cfg.grid_points - 1);
        t.rows.push_back(state_row(sys, exact_solution(*cfg.from_exact, tk)));
    }
    emit(render(t, cfg.output), cfg.output.path, out);
    return kSuccess;
}

int cmd_map(const Overrides& o, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(o);
    const PdmSystem sys = build_system(cfg.system);
    const NonlocalMap map = map_for(sys);
    const Trajectory tr = run_integration(cfg, sys);
    const int status = report_termination(tr, err);
    const ReferenceTrajectory ref = map_to_reference(map, tr);
    const std::size_t n = sys.n();
    Table t{state_columns(n), {}};
    for (const char* prefix : {"tau_", "q_", "qt_"})
        for (std::size_t i = 1; i <= n; ++i) t.columns.push_back(prefix + std::to_string(i));
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
        auto row = state_row(sys, tr.samples[k]);
        for (const auto* block : {&ref.tau, &ref.q, &ref.q_tilde}) row.insert(row.end(), (*block)[k].begin(), (*block)[k].end());
        t.rows.push_back(std::move(row));
    }
    emit(render(t, cfg.output), cfg.output.path, out);
    return status;
}

struct NoninvarianceOptions {
    std::vector<double> x = {1.0, 0.5};
    std::vector<double> v = {0.3, -0.8};
    double t_end = 10.0;
    std::string report;
};

int cmd_noninvariance(const NoninvarianceOptions& o, std::ostream& out, std::ostream& err) {
    if (o.x.size() != 2 || o.v.size() != 2) throw ConfigError("--x/--v", "expected two values each");
    SystemDescription d;
    d.family = Family::Custom;
    d.kind = Kind::TypeII;
    d.n = 2;
    d.coupled_mass = "1 + x1^2 + x2^2";
    d.potential = {"0"};
    const PdmSystem sys = build_system(d);
    IntegratorOptions opts;
    opts.t_end = o.t_end;
    const Trajectory tr = integrate(sys, State{0.0, o.x, o.v}, opts);
    double residual = 0.0, obstruction = 0.0;
    for (const State& s : tr.samples) {
        for (double r : el2_mapped_residual(sys, s)) residual = std::max(residual, std::fabs(r));
        obstruction = std::max(obstruction, el2_obstruction(sys, s));
    }
    const bool shown = residual > 1e-2;
    out << "mass 1 + x1^2 + x2^2, V = 0, t_end " << num(o.t_end) << '\n'
        << "max EL-G residual of the mapped EL-II trajectory: " << num(residual) << '\n'
        << "max obstruction |(dm/dx_i)/(2m) |v|^2|: " << num(obstruction) << '\n'
        << (shown ? "non-invariance demonstrated (residual > 1e-2)" : "residual below 1e-2: not demonstrated") << '\n';
    if (!o.report.empty()) {
        json j = {{"residual", residual}, {"obstruction", obstruction}, {"threshold", 1e-2}, {"demonstrated", shown}};
        emit(j.dump(2) + "\n", o.report, out);
    }
    const int status = report_termination(tr, err);
    return shown ? status : kCheckFailed;
}

struct VerifyOptions {
    std::vector<std::string> suite = {"default"};
    std::string report;
    bool list = false;
    std::uint64_t seed = CheckContext{}.seed;
    double rel_tol = CheckContext{}.rel_tol;
    double abs_tol = CheckContext{}.abs_tol;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    if (o.list) {
        for (const auto& c : registered_checks())
            out << c.name << "  [criterion " << c.criterion << (c.expected_fail ? ", expected-fail" : "") << "]  "
                << c.summary << '\n';
        return kSuccess;
    }
    CheckContext ctx;
    ctx.seed = o.seed;
    ctx.rel_tol = o.rel_tol;
    ctx.abs_tol = o.abs_tol;
    const SuiteResult res = run_suite(o.suite, ctx);
    json checks = json::array();
    for (const auto& r : res.reports) {
        char line[160];
        std::snprintf(line, sizeof line, "%-14s %-30s metric %-12.4g threshold %-9.3g ", to_string(r.outcome()).c_str(),
                      r.name.c_str(), r.metric, r.threshold);
        out << line << r.details << '\n';
        checks.push_back({{"name", r.name},
                          {"outcome", to_string(r.outcome())},
                          {"passed", r.passed},
                          {"expected_fail", r.expected_fail},
                          {"metric", std::isfinite(r.metric) ? json(r.metric) : json(nullptr)},
                          {"threshold", r.threshold},
                          {"details", r.details}});
    }
    out << res.passes << " passed, " << res.expected_fails << " expected-fail, " << res.failures << " failed\n";
    if (!o.report.empty()) {
        json j = {{"summary",
                   {{"passes", res.passes}, {"expected_fails", res.expected_fails}, {"failures", res.failures}}},
                  {"seed", o.seed},
                  {"rel_tol", o.rel_tol},
                  {"checks", checks}};
        emit(j.dump(2) + "\n", o.report, out);
    }
    return res.failures ? kCheckFailed : kSuccess;
}

int cmd_misprints(const std::string& format, std::ostream& out) {
    if (format == "json") {
        json j = json::array();
        for (const auto& m : misprint_ledger())
            j.push_back({{"id", m.id},
                         {"equation", m.equation},
                         {"printed", m.printed},
                         {"validated", m.validated},
                         {"note", m.note}});
        out << j.dump(2) << '\n';
        return kSuccess;
    }
    for (const auto& m : misprint_ledger())
        out << m.id << " (eq. " << m.equation << ")\n  printed:   " << m.printed << "\n  validated: " << m.validated
            << "\n  " << m.note << "\n\n";
    return kSuccess;
}

int status_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::ConfigError:
        case ErrorKind::MissingParameter:
        case ErrorKind::InvalidParameter:
        case ErrorKind::InvalidSpec:
        case ErrorKind::UnsupportedFamily:
        case ErrorKind::UnknownCheck:
        case ErrorKind::SyntaxError:
        case ErrorKind::UnknownIdentifier:
            return kUsageError;
        default:
            return kCheckFailed;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Position-dependent-mass dynamics: simulation, closed forms, nonlocal maps and checks", "pdmctl"};
    app.require_subcommand(1);

    Overrides sim, ex, mp;
    std::size_t points = 0;
    auto* simulate = app.add_subcommand("simulate", "integrate the EL-I (or coupled EL-II) equations");
    add_output_options(simulate, sim);
    auto* exact = app.add_subcommand("exact", "tabulate a closed-form solution on a uniform time grid");
    add_output_options(exact, ex);
    exact->add_option("--points", points, "grid points (default: grid.points or 1001)")->check(CLI::Range(2, 100000000));
    auto* mapcmd = app.add_subcommand("map", "integrate and emit tau_i, q_i, qt_i per sample");
    add_output_options(mapcmd, mp);

    NoninvarianceOptions ni;
    auto* nonin = app.add_subcommand("noninvariance", "EL-II with m = 1 + x1^2 + x2^2, V = 0, mapped to EL-G");
    nonin->add_option("--x", ni.x, "initial position (2 values)")->expected(2)->capture_default_str();
    nonin->add_option("--v", ni.v, "initial velocity (2 values)")->expected(2)->capture_default_str();
    nonin->add_option("--t-end", ni.t_end, "integration time")->check(CLI::PositiveNumber)->capture_default_str();
    nonin->add_option("--report", ni.report, "JSON report path");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "run named checks");
    verify->add_option("--suite", vo.suite, "check names, prefix:* patterns, 'default' or 'all'")
        ->delimiter(',')
        ->capture_default_str();
    verify->add_option("--report", vo.report, "JSON report path");
    verify->add_flag("--list", vo.list, "list registered checks");
    verify->add_option("--seed", vo.seed, "sampling seed")->capture_default_str();
    verify->add_option("--rel-tol", vo.rel_tol, "integrator relative tolerance")->check(CLI::PositiveNumber);
    verify->add_option("--abs-tol", vo.abs_tol, "integrator absolute tolerance")->check(CLI::PositiveNumber);

    std::string mformat = "text";
    auto* misprints = app.add_subcommand("misprints", "printed relations that fail the residual oracle");
    misprints->add_option("--format", mformat, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, out, err);
        if (exact->parsed()) return cmd_exact(ex, points, out);
        if (mapcmd->parsed()) return cmd_map(mp, out, err);
        if (nonin->parsed()) return cmd_noninvariance(ni, out, err);
        if (verify->parsed()) return cmd_verify(vo, out);
        if (misprints->parsed()) return cmd_misprints(mformat, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return status_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kUsageError;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace pdm::cli
