#include "rdsde_cli/run_config.hpp"

#include <cmath>
#include <cstdlib>

#include "rdsde/fbm.hpp"

namespace rdsde::cli {

namespace {

std::size_t positive_size(ConfigReader& r, const std::string& section, const std::string& key, long long fallback,
                          long long minimum = 1) {
    const long long v = r.integer(section, key, fallback);
    if (v < minimum) {
        r.fail(section, key, "must be at least " + std::to_string(minimum));
    }
    return static_cast<std::size_t>(v);
}

std::vector<Expr> parse_all(ConfigReader& r, const std::string& key, const std::vector<std::string>& sources,
                            std::size_t expected, const ParamMap& params, std::size_t dim) {
    if (sources.size() != expected) {
        r.fail("problem", key,
               "expected " + std::to_string(expected) + " expressions, got " + std::to_string(sources.size()));
    }
    std::vector<Expr> out;
    for (std::size_t k = 0; k < sources.size(); ++k) {
        try {
            out.push_back(Expr::parse(sources[k], params, dim));
        } catch (const SyntaxError& e) {
            r.fail("problem", key, "entry " + std::to_string(k + 1) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

RunConfig make_run_config(ConfigFile file) {
    RunConfig rc;
    rc.file = std::move(file);
    ConfigReader r(rc.file);

    // [problem] scalars first; r is injected as a parameter.
    const double hurst = r.number("problem", "hurst", 0.75);
    try {
        HurstParameter h(hurst);
    } catch (const DomainError& e) {
        r.fail("problem", "hurst", e.what());
    }
    const double delay = r.required_number("problem", "r");
    if (!(delay > 0.0)) {
        r.fail("problem", "r", "delay must be positive");
    }
    const double horizon = r.required_number("problem", "T");
    const double ratio = horizon / delay;
    if (!(ratio >= 1.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * std::round(ratio)) {
        r.fail("problem", "T", "T must be a positive integer multiple of r");
    }
    const std::size_t d = positive_size(r, "problem", "d", 1);
    const std::size_t m = positive_size(r, "problem", "m", 1);

    for (const auto& [name, value] : r.numbers_in("params")) {
        if (name == "r" || name == "t") {
            r.fail("params", name, "'" + name + "' is reserved");
        }
        rc.params[name] = value;
    }
    rc.params["r"] = delay;

    DeclaredMeta meta;
    meta.m0 = r.number("meta", "m0", meta.m0);
    meta.beta = r.number("meta", "beta", meta.beta);
    meta.l0 = r.number("meta", "l0", meta.l0);
    meta.k0 = r.number("meta", "k0", meta.k0);
    meta.gamma = r.number("meta", "gamma", meta.gamma);
    meta.b0_bound = r.number("meta", "b0_bound", meta.b0_bound);
    rc.rho = r.number("meta", "rho");
    try {
        meta.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: [meta]: ") + e.what());
    }

    const auto eta_src = r.strings("problem", "eta");
    const auto drift_src = r.strings("problem", "drift");
    const auto diff_src = r.strings("problem", "diffusion");
    if (!eta_src || !drift_src || !diff_src) {
        throw ConfigError("config: [problem] needs eta, drift and diffusion");
    }
    rc.eta = parse_all(r, "eta", *eta_src, d, rc.params, d);
    for (std::size_t k = 0; k < d; ++k) {
        if (rc.eta[k].uses(VarKind::current) || rc.eta[k].uses(VarKind::delayed) || rc.eta[k].uses(VarKind::sup)) {
            r.fail("problem", "eta", "entry " + std::to_string(k + 1) + " may only depend on t");
        }
    }
    auto drift = parse_all(r, "drift", *drift_src, d, rc.params, d);
    auto diffusion = parse_all(r, "diffusion", *diff_src, d * m, rc.params, d);
    try {
        rc.coefficients.emplace(std::move(drift), std::move(diffusion), d, m, meta);
    } catch (const Error& e) {
        r.fail("problem", "diffusion", e.what());
    }

    rc.problem.coeffs = rc.coefficients->bind();
    rc.problem.r = delay;
    rc.problem.horizon = horizon;
    rc.problem.hurst = hurst;
    rc.problem.eta = [eta = rc.eta](double u, std::span<double> out) {
        const EvalContext ctx{u, {}, {}, {}};
        for (std::size_t i = 0; i < eta.size(); ++i) {
            out[i] = eta[i].eval(ctx);
        }
    };

    // [solver]
    const std::string scheme = r.string("solver", "scheme", "euler");
    if (scheme == "euler") {
        rc.solver.scheme = Scheme::euler;
    } else if (scheme == "picard") {
        rc.solver.scheme = Scheme::picard;
    } else {
        r.fail("solver", "scheme", "expected \"euler\" or \"picard\"");
    }
    rc.solver.steps_per_delay = positive_size(r, "solver", "steps_per_delay", 64, 4);
    rc.solver.picard_tol = r.number("solver", "picard_tol", 1e-10);
    if (!(rc.solver.picard_tol > 0.0)) {
        r.fail("solver", "picard_tol", "must be positive");
    }
    rc.solver.picard_max_iter = positive_size(r, "solver", "picard_max_iter", 100);
    const std::string init = r.string("solver", "initial_iterate", "constant");
    if (init == "constant") {
        rc.solver.initial_iterate = InitialIterate::constant;
    } else if (init == "linear") {
        rc.solver.initial_iterate = InitialIterate::linear;
    } else {
        r.fail("solver", "initial_iterate", "expected \"constant\" or \"linear\"");
    }
    rc.solver.threads = static_cast<unsigned>(positive_size(r, "solver", "threads", 0, 0));

    // [mc]
    rc.paths = positive_size(r, "mc", "paths", 1);
    const long long seed = r.integer("mc", "seed", 0);
    if (seed < 0) {
        r.fail("mc", "seed", "must be non-negative");
    }
    rc.solver.seed = static_cast<std::uint64_t>(seed);

    // [output]
    rc.output_directory = r.string("output", "directory", rc.output_directory);
    if (const auto formats = r.strings("output", "formats")) {
        rc.write_csv = false;
        rc.write_json = false;
        for (const auto& f : *formats) {
            if (f == "csv") {
                rc.write_csv = true;
            } else if (f == "json") {
                rc.write_json = true;
            } else {
                r.fail("output", "formats", "unknown format \"" + f + "\" (expected \"csv\" or \"json\")");
            }
        }
    }
    if (const char* env = std::getenv("RDSDE_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        rc.output_directory = env;
    }

    // [diagnostics]
    rc.diagnostics.alpha = r.number("diagnostics", "alpha", rc.diagnostics.alpha);
    if (!(rc.diagnostics.alpha > 0.0 && rc.diagnostics.alpha < 0.5)) {
        r.fail("diagnostics", "alpha", "must lie in (0, 1/2)");
    }
    rc.diagnostics.lambda = r.number("diagnostics", "lambda", rc.diagnostics.lambda);
    if (!(rc.diagnostics.lambda >= 0.0)) {
        r.fail("diagnostics", "lambda", "must be non-negative");
    }
    rc.diagnostics.norms = r.boolean("diagnostics", "norms", rc.diagnostics.norms);

    // [audit]
    rc.audit.box.t_min = r.number("audit", "t_min", 0.0);
    rc.audit.box.t_max = r.number("audit", "t_max", horizon);
    rc.audit.box.x_min = r.number("audit", "x_min", 0.0);
    rc.audit.box.x_max = r.number("audit", "x_max", 10.0);
    rc.audit.samples = positive_size(r, "audit", "samples", static_cast<long long>(rc.audit.samples));
    const long long audit_seed = r.integer("audit", "seed", 1);
    if (audit_seed < 0) {
        r.fail("audit", "seed", "must be non-negative");
    }
    rc.audit.seed = static_cast<std::uint64_t>(audit_seed);

    r.reject_unknown({"problem", "params", "meta", "solver", "mc", "output", "diagnostics", "audit"});

    if (rc.rho) {
        const double inv_alpha = 1.0 / rc.diagnostics.alpha;
        if (*rc.rho < 2.0) {
            rc.warnings.push_back("meta.rho = " + std::to_string(*rc.rho) + " is below 2");
        }
        if (*rc.rho > inv_alpha) {
            rc.warnings.push_back("meta.rho = " + std::to_string(*rc.rho) + " exceeds 1/alpha = " +
                                  std::to_string(inv_alpha));
        }
    }
    return rc;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
    ConfigFile file = ConfigFile::load(path);
    for (const auto& o : overrides) {
        file.set(o);
    }
    return make_run_config(std::move(file));
}

}  // namespace rdsde::cli
