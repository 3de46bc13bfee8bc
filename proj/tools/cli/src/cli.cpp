#include "rdsde_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "rdsde/coeff.hpp"
#include "rdsde/diagnostics.hpp"
#include "rdsde/fbm.hpp"
#include "rdsde/fracnorm.hpp"
#include "rdsde/skorokhod.hpp"
#include "rdsde/solver.hpp"
#include "rdsde_cli/csv.hpp"
#include "rdsde_cli/run_config.hpp"

namespace rdsde::cli {

namespace {

namespace fs = std::filesystem;

// Usage problems detected after CLI11 parsing.
class UsageError : public Error {
public:
    using Error::Error;
};

std::vector<std::string> component_names(const std::string& prefix, std::size_t d) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < d; ++i) {
        names.push_back(prefix + "_" + std::to_string(i + 1));
    }
    return names;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot write '" + path.string() + "'");
    }
    return f;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    auto f = open_output(path);
    f << j.dump(2) << '\n';
}

void write_solution_csv(const fs::path& path, const ReflectedSolution& sol) {
    auto f = open_output(path);
    const std::size_t d = sol.x.dim();
    std::vector<std::string> header = component_names("x", d);
    for (const char* p : {"y", "z"}) {
        const auto names = component_names(p, d);
        header.insert(header.end(), names.begin(), names.end());
    }
    write_csv(f, sol.x.grid(), header, {&sol.x, &sol.y, &sol.z});
}

std::string path_file(std::size_t index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 4) {
        digits.insert(0, 4 - digits.size(), '0');
    }
    return "path_" + digits + ".csv";
}

const char* scheme_name(Scheme s) { return s == Scheme::picard ? "picard" : "euler"; }

struct Options {
    std::string config;
    std::vector<std::string> overrides;
    std::string out;
};

RunConfig load(const Options& o) {
    RunConfig rc = load_run_config(o.config, o.overrides);
    if (!o.out.empty()) {
        rc.output_directory = o.out;
    }
    return rc;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig rc = load(o);
    for (const auto& w : rc.warnings) {
        err << "warning: " << w << '\n';
    }
    discretize_eta(rc.problem, rc.solver.steps_per_delay);
    const std::vector<PathResult> results = solve_stochastic(rc.problem, rc.solver, rc.paths);
    const fs::path dir(rc.output_directory);
    fs::create_directories(dir);

    std::optional<double> phi_value;
    if (rc.diagnostics.norms) {
        phi_value = phi({rc.problem.coeffs.meta.gamma, rc.diagnostics.alpha});
    }
    nlohmann::json paths = nlohmann::json::array();
    std::size_t failures = 0;
    std::size_t violations = 0;
    for (const PathResult& res : results) {
        nlohmann::json entry{{"index", res.path}};
        if (!res.solution) {
            ++failures;
            entry["error"] = res.error;
            err << "error: " << res.error << '\n';
            paths.push_back(entry);
            continue;
        }
        const ReflectedSolution& sol = *res.solution;
        const InvariantReport inv = check_invariants(rc.problem, sol);
        if (!inv.ok() || !inv.complementarity_ok()) {
            ++violations;
            err << "invariant violation on path " << res.path << '\n';
        }
        entry["invariants"] = to_json(inv);
        entry["iterations_per_interval"] = sol.iterations_per_interval;
        entry["final_residuals"] = sol.final_residuals;
        if (rc.write_csv) {
            const std::string name = path_file(res.path);
            write_solution_csv(dir / name, sol);
            entry["csv"] = name;
        }
        if (rc.diagnostics.norms) {
            nlohmann::json norms = nlohmann::json::array();
            for (std::size_t i = 0; i < sol.x.dim(); ++i) {
                NormReport nr = make_norm_report(sol.x.component(i), rc.diagnostics.alpha, rc.diagnostics.lambda,
                                                 sol.x.grid().t0(), sol.x.grid().t1());
                nr.phi = phi_value;
                norms.push_back(to_json(nr));
            }
            entry["norms"] = norms;
            entry["lambda_alpha_driver"] = lambda_alpha_bound(sol.driver, rc.diagnostics.alpha).value;
        }
        paths.push_back(entry);
    }

    if (rc.write_json) {
        nlohmann::json manifest{{"command", "simulate"},
                                {"config", rc.file.to_json()},
                                {"seed", rc.solver.seed},
                                {"scheme", scheme_name(rc.solver.scheme)},
                                {"steps_per_delay", rc.solver.steps_per_delay},
                                {"paths", paths},
                                {"failures", failures},
                                {"invariant_violations", violations},
                                {"warnings", rc.warnings}};
        write_json(dir / "manifest.json", manifest);
    }
    out << "simulated " << results.size() - failures << " of " << results.size() << " paths into " << dir.string()
        << '\n';
    if (failures > 0) {
        return exit_error;
    }
    return violations > 0 ? exit_invariant : exit_ok;
}

struct FbmOptionsCli {
    double hurst = 0.75;
    std::size_t steps = 1024;
    std::size_t paths = 1;
    std::size_t dim = 1;
    std::uint64_t seed = 0;
    double horizon = 1.0;
    std::string method = "circulant";
    std::string out;
    bool allow_half = false;
};

int cmd_fbm(const FbmOptionsCli& o, std::ostream& out) {
    const bool in_range = o.hurst > 0.5 && o.hurst < 1.0;
    if (!in_range && !(o.allow_half && o.hurst == 0.5)) {
        throw UsageError("--hurst must lie in (0.5, 1); got " + format_number(o.hurst));
    }
    const HurstParameter hurst(o.hurst, o.allow_half);
    const TimeGrid grid(0.0, o.horizon, o.steps);
    std::vector<SamplePath> samples;
    if (o.method == "cholesky") {
        const CholeskyGenerator gen(grid, hurst);
        for (std::size_t p = 0; p < o.paths; ++p) {
            samples.push_back(gen.sample(o.dim, o.seed, p));
        }
    } else {
        const CirculantGenerator gen(grid, hurst);
        for (std::size_t p = 0; p < o.paths; ++p) {
            samples.push_back(gen.sample(o.dim, o.seed, p));
        }
    }
    std::vector<std::string> header;
    std::vector<const SamplePath*> blocks;
    for (std::size_t p = 0; p < o.paths; ++p) {
        for (std::size_t c = 0; c < o.dim; ++c) {
            header.push_back("w_" + std::to_string(p + 1) + "_" + std::to_string(c + 1));
        }
        blocks.push_back(&samples[p]);
    }
    if (o.out.empty()) {
        write_csv(out, grid, header, blocks);
    } else {
        auto f = open_output(o.out);
        write_csv(f, grid, header, blocks);
    }
    return exit_ok;
}

int cmd_skorokhod(const std::string& input, const std::string& output, std::ostream& out) {
    const CsvTable table = read_csv(input);
    const SamplePath z = table_to_path(table);
    const SkorokhodSolution sol = reflect(z);
    std::vector<std::string> header;
    for (const char* p : {"x", "y", "z"}) {
        for (std::size_t i = 1; i < table.header.size(); ++i) {
            header.push_back(std::string(p) + "_" + table.header[i]);
        }
    }
    if (output.empty()) {
        write_csv(out, z.grid(), header, {&sol.x, &sol.y, &sol.z});
    } else {
        auto f = open_output(output);
        write_csv(f, z.grid(), header, {&sol.x, &sol.y, &sol.z});
    }
    return exit_ok;
}

int cmd_norms(const std::string& input, double alpha, double lambda, std::optional<double> gamma,
              const std::string& output, std::ostream& out) {
    const CsvTable table = read_csv(input);
    const SamplePath f = table_to_path(table);
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < f.dim(); ++i) {
        NormReport nr = make_norm_report(f.component(i), alpha, lambda, f.grid().t0(), f.grid().t1());
        if (gamma) {
            nr.phi = phi({*gamma, alpha});
        }
        j[table.header[i + 1]] = to_json(nr);
    }
    if (output.empty()) {
        out << j.dump(2) << '\n';
    } else {
        write_json(output, j);
    }
    return exit_ok;
}

int cmd_converge(const Options& o, const std::vector<std::size_t>& levels, std::ostream& out) {
    if (levels.size() < 3) {
        throw UsageError("--levels needs at least 3 values");
    }
    RunConfig rc = load(o);
    SolverConfig fine = rc.solver;
    fine.steps_per_delay = levels.back();
    const SamplePath g = sample_driver(rc.problem, fine, 0);
    const ConvergenceTable table = convergence_study(rc.problem, g, levels, rc.solver);
    const fs::path dir(rc.output_directory);
    fs::create_directories(dir);
    nlohmann::json j = to_json(table);
    j["command"] = "converge";
    j["scheme"] = scheme_name(rc.solver.scheme);
    j["seed"] = rc.solver.seed;
    j["config"] = rc.file.to_json();
    write_json(dir / "convergence.json", j);
    auto f = open_output(dir / "convergence.csv");
    f << "steps_per_delay,step,error,local_order\n";
    for (const auto& row : table.rows) {
        f << row.steps_per_delay << ',' << format_number(row.step) << ',' << format_number(row.error) << ','
          << (row.local_order ? format_number(*row.local_order) : std::string()) << '\n';
    }
    out << "empirical order " << format_number(table.order) << '\n';
    return exit_ok;
}

int cmd_audit(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig rc = load(o);
    const AuditReport rep =
        hypothesis_audit(*rc.coefficients, rc.audit.box, rc.audit.samples, rc.audit.seed, rc.diagnostics.alpha);
    const fs::path dir(rc.output_directory);
    fs::create_directories(dir);
    nlohmann::json j = to_json(rep);
    j["command"] = "audit";
    j["config"] = rc.file.to_json();
    write_json(dir / "audit.json", j);
    for (const auto& flag : rep.flags) {
        err << "warning: audit estimate exceeds declared constant: " << flag << '\n';
    }
    out << "audit " << (rep.flagged() ? "flagged" : "clean") << '\n';
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reflected delay SDEs driven by fractional Brownian motion", "rdsde"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    Options sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo solve of a configured problem");
    simulate->add_option("config", sim.config, "Config file")->required();
    simulate->add_option("--set", sim.overrides, "Override section.key=value");
    simulate->add_option("--out", sim.out, "Output directory");

    FbmOptionsCli fb;
    auto* fbm = app.add_subcommand("fbm", "Sample fractional Brownian motion paths");
    fbm->add_option("--hurst", fb.hurst, "Hurst index in (0.5, 1)")->required();
    fbm->add_option("--steps", fb.steps, "Grid steps")->check(CLI::PositiveNumber);
    fbm->add_option("--paths", fb.paths, "Number of paths")->check(CLI::PositiveNumber);
    fbm->add_option("--dim", fb.dim, "Components per path")->check(CLI::PositiveNumber);
    fbm->add_option("--seed", fb.seed, "Seed");
    fbm->add_option("--horizon", fb.horizon, "Final time")->check(CLI::PositiveNumber);
    fbm->add_option("--method", fb.method, "cholesky or circulant")
        ->check(CLI::IsMember({"cholesky", "circulant"}));
    fbm->add_option("--out", fb.out, "Output CSV (stdout when omitted)");
    fbm->add_flag("--allow-h-half", fb.allow_half, "Admit H = 0.5 for testing");

    std::string sk_in;
    std::string sk_out;
    auto* sko = app.add_subcommand("skorokhod", "Reflect the columns of a CSV path");
    sko->add_option("input", sk_in, "CSV with columns t, z_1, ...")->required();
    sko->add_option("--out", sk_out, "Output CSV (stdout when omitted)");

    Options conv;
    std::vector<std::size_t> levels;
    auto* converge = app.add_subcommand("converge", "Mesh refinement study on one driver");
    converge->add_option("config", conv.config, "Config file")->required();
    converge->add_option("--levels", levels, "Steps per delay, ascending")->required()->delimiter(',');
    converge->add_option("--set", conv.overrides, "Override section.key=value");
    converge->add_option("--out", conv.out, "Output directory");

    Options aud;
    auto* audit = app.add_subcommand("audit", "Sample the coefficients against the declared constants");
    audit->add_option("config", aud.config, "Config file")->required();
    audit->add_option("--set", aud.overrides, "Override section.key=value");
    audit->add_option("--out", aud.out, "Output directory");

    std::string nm_in;
    std::string nm_out;
    double alpha = 0.25;
    double lambda = 0.0;
    std::optional<double> gamma;
    auto* norms = app.add_subcommand("norms", "Fractional norms of the columns of a CSV path");
    norms->add_option("input", nm_in, "CSV with columns t, f_1, ...")->required();
    norms->add_option("--alpha", alpha, "alpha in (0, 1/2)")->check(CLI::Range(0.0, 0.5));
    norms->add_option("--lambda", lambda, "Exponential weight")->check(CLI::NonNegativeNumber);
    norms->add_option("--gamma", gamma, "Growth order for phi")->check(CLI::Range(0.0, 1.0));
    norms->add_option("--out", nm_out, "Output JSON (stdout when omitted)");

    std::vector<std::string> argv_store{"rdsde"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_error;
    }
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(sim, out, err);
        }
        if (fbm->parsed()) {
            return cmd_fbm(fb, out);
        }
        if (sko->parsed()) {
            return cmd_skorokhod(sk_in, sk_out, out);
        }
        if (converge->parsed()) {
            return cmd_converge(conv, levels, out);
        }
        if (audit->parsed()) {
            return cmd_audit(aud, out, err);
        }
        if (norms->parsed()) {
            if (!(alpha > 0.0 && alpha < 0.5)) {
                throw UsageError("--alpha must lie in (0, 1/2)");
            }
            return cmd_norms(nm_in, alpha, lambda, gamma, nm_out, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_error;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return exit_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}

}  // namespace rdsde::cli
