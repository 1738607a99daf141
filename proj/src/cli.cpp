#include "shiftlab/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "shiftlab/beurling.hpp"
#include "shiftlab/errors.hpp"
#include "shiftlab/io.hpp"
#include "shiftlab/operator_core.hpp"
#include "shiftlab/report.hpp"
#include "shiftlab/stability_lab.hpp"
#include "shiftlab/weights.hpp"

namespace shiftlab {

using nlohmann::json;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_list_json(const std::vector<Complex>& zs) {
    json out = json::array();
    for (const auto& z : zs) out.push_back(complex_json(z));
    return out;
}

// Re-throws parse failures as ConfigError naming the key.
template <class F>
auto keyed(const std::string& key, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(key, e.what());
    }
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

std::size_t default_n(const std::string& command) {
    if (command == "classify" || command == "radii") return 4096;
    if (command == "semicont") return 64;
    if (command == "beurling-index") return 128;
    if (command == "beurling-check") return 64;
    return 200;
}

std::string default_weight(const std::string& command) {
    if (command == "semicont") return "unweighted";
    if (command == "beurling-check") return "poly:1";
    return "bergman";
}

std::string default_eps(const std::string& command) {
    if (command == "semicont") {
        std::string s;
        for (int k = 1; k <= 14; ++k) {
            if (k > 1) s += ',';
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", std::ldexp(1.0, -k));
            s += buf;
        }
        return s;
    }
    return "1e-1,1e-2,1e-3,1e-4,1e-5";
}

std::uint64_t resolve_seed(std::uint64_t seed, bool& from_env) {
    from_env = false;
    const char* env = std::getenv("SHIFTLAB_SEED");
    if (!env || !*env) return seed;
    std::uint64_t v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc() && ptr == s.data() + s.size(), "SHIFTLAB_SEED", "not an unsigned 64-bit integer");
    from_env = true;
    return v;
}

PerturbationPlan make_plan(const RunConfig& c, const std::string& eps, const std::string& kind, std::uint64_t seed) {
    PerturbationPlan plan;
    plan.kind = keyed("perturbation", [&] { return perturbation_kind_from_string(kind); });
    plan.epsilon_schedule = keyed("eps", [&] { return parse_real_list(eps); });
    plan.seed = seed;
    require(!plan.epsilon_schedule.empty(), "eps", "schedule is empty");
    keyed("eps", [&] {
        plan.validate();
        return 0;
    });
    (void)c;
    return plan;
}

json classification_json(const ClassificationReport& r) {
    json sums = json::array();
    for (const auto& [n, s] : r.quasianalytic_partial_sums) sums.push_back({{"N", n}, {"sum", s}});
    json conc = json::object(), log_conc = json::object();
    for (const auto& [s, v] : r.omega_s_concave) conc[std::to_string(s)] = v;
    for (const auto& [s, v] : r.log_omega_s_concave) log_conc[std::to_string(s)] = v;
    return {{"regular", r.regular},
            {"alpha_inf", r.alpha_inf},
            {"alpha_sup", r.alpha_sup},
            {"tail_start", r.tail_start},
            {"window", r.window},
            {"log_convex_tail", r.log_convex_tail},
            {"omega_s_concave", conc},
            {"log_omega_s_concave", log_conc},
            {"quasianalytic_partial_sums", sums},
            {"partial_sum_slope", r.partial_sum_slope},
            {"increment_ratios", r.increment_ratios},
            {"divergence_verdict", std::string(to_string(r.divergence_verdict))},
            {"shields_hypotheses_met", r.shields_hypotheses_met}};
}

json batch_json(const BatchResult& b) {
    json out = {{"min", b.min},
                {"max", b.max},
                {"samples", b.samples},
                {"band_top", b.band_top},
                {"running_min", b.running_min},
                {"running_max", b.running_max}};
    if (!b.warning.empty()) out["warning"] = b.warning;
    return out;
}

}  // namespace

RunResult run(const RunConfig& c, std::ostream& log) {
    static const std::vector<std::string> commands = {"classify", "radii",          "chain",         "stability",
                                                      "semicont", "beurling-index", "beurling-check"};
    require(std::find(commands.begin(), commands.end(), c.command) != commands.end(), "command",
            "unknown command '" + c.command + "'");
    require(!c.out.empty(), "out", "output prefix is empty");

    const std::string& cmd = c.command;
    const std::size_t n = c.n.value_or(default_n(cmd));
    const std::string weight_spec = c.weight.empty() ? default_weight(cmd) : c.weight;
    bool seed_from_env = false;
    const std::uint64_t seed = resolve_seed(c.seed, seed_from_env);

    json config = {{"command", cmd}, {"N", n}, {"out", c.out}};
    json doc;
    std::optional<ExperimentReport> experiment;
    int exit_code = 0;

    auto weight = [&] {
        config["weight"] = weight_spec;
        return keyed("weight", [&] { return resolve_weight(weight_spec); });
    };
    auto record_seed = [&] {
        config["seed"] = seed;
        config["seed_from_env"] = seed_from_env;
    };

    if (cmd == "classify") {
        const auto w = weight();
        require(n >= 64, "N", "classify needs N >= 64");
        const auto r = keyed("N", [&] { return classify(w, n); });
        doc["result"] = classification_json(r);
        doc["verdict"] = std::string(to_string(r.divergence_verdict));
        log << "classify " << w.name() << " N=" << n << ": " << to_string(r.divergence_verdict)
            << ", shields hypotheses " << (r.shields_hypotheses_met ? "met" : "not met") << '\n';
    } else if (cmd == "radii") {
        const auto w = weight();
        require(n >= 64, "N", "radii needs N >= 64");
        const auto r = keyed("N", [&] { return radius_estimates(w, n); });
        const auto [lo, hi] = keyed("N", [&] { return alpha_bounds(w, n); });
        doc["result"] = {{"r_point", r.r_point}, {"r_spec", r.r_spec},        {"r0", r.r0},
                         {"window_length", r.window_length}, {"tail_start", r.tail_start},
                         {"alpha_inf", lo}, {"alpha_sup", hi}};
        doc["verdict"] = "ok";
        log << "radii " << w.name() << " N=" << n << ": r_point=" << r.r_point << " r_spec=" << r.r_spec
            << " r0=" << r.r0 << '\n';
    } else if (cmd == "chain") {
        const auto w = weight();
        const Complex lambda = keyed("lambda", [&] { return parse_complex(c.lambda); });
        require(c.m >= 1, "m", "chain length must be >= 1");
        require(n >= c.m + 2, "N", "window too small for the chain length");
        config["lambda"] = complex_json(lambda);
        config["m"] = c.m;
        const auto ch = keyed("lambda", [&] { return jordan_chain(w, lambda, c.m, n); });
        json vectors = json::array();
        json norms = json::array();
        for (const auto& v : ch.vectors) {
            json head = json::array();
            for (Eigen::Index i = 0; i < std::min<Eigen::Index>(v.size(), 8); ++i) head.push_back(complex_json(v(i)));
            vectors.push_back(head);
            norms.push_back(v.norm());
        }
        doc["result"] = {{"lambda", complex_json(lambda)}, {"residuals", ch.residuals}, {"tail_bound", ch.tail_bound},
                         {"in_l2", ch.in_l2},                {"r_point", ch.r_point},     {"norms", norms},
                         {"vector_heads", vectors}};
        if (!ch.warning.empty()) doc["result"]["warning"] = ch.warning;
        if (c.m >= 2) {
            doc["result"]["gamma_2"] = ch.vectors[1](2).real();
            doc["result"]["gamma_2_imag"] = ch.vectors[1](2).imag();
        }
        doc["verdict"] = ch.in_l2 ? "ok" : "not_in_l2";
        log << "chain " << w.name() << " lambda=" << lambda << " m=" << c.m << " N=" << n
            << ": last residual " << ch.residuals.back() << (ch.warning.empty() ? "" : ", " + ch.warning) << '\n';
    } else if (cmd == "stability") {
        NormStabilityConfig sc;
        sc.weight = weight();
        sc.roots = keyed("roots", [&] { return parse_complex_list(c.roots); });
        require(!sc.roots.empty(), "roots", "need at least one root");
        require(c.tol > 0.0, "tol", "must be > 0");
        sc.n = n;
        sc.tol = c.tol;
        const std::string eps = c.eps.empty() ? default_eps(cmd) : c.eps;
        const std::string kind = c.perturbation.empty() ? "dense_random" : c.perturbation;
        record_seed();
        config["roots"] = complex_list_json(sc.roots);
        config["eps"] = eps;
        config["perturbation"] = kind;
        config["tol"] = c.tol;
        const auto plan = make_plan(c, eps, kind, seed);
        experiment = keyed("roots", [&] { return norm_stability_run(sc, plan); });
    } else if (cmd == "semicont") {
        SemicontinuityConfig sc;
        sc.weight = weight();
        sc.zeros = keyed("zeros", [&] { return parse_complex_list(c.zeros); });
        require(c.trials >= 1, "trials", "must be >= 1");
        require(c.copies >= 1, "copies", "must be >= 1");
        require(c.tol > 0.0, "tol", "must be > 0");
        require(n >= 2, "N", "must be >= 2");
        sc.n = n;
        sc.trials = c.trials;
        sc.copies = c.copies;
        sc.tol = c.tol;
        const std::string eps = c.eps.empty() ? default_eps(cmd) : c.eps;
        const std::string kind = c.perturbation.empty() ? "weight_jitter" : c.perturbation;
        record_seed();
        config["zeros"] = complex_list_json(sc.zeros);
        config["eps"] = eps;
        config["perturbation"] = kind;
        config["trials"] = c.trials;
        config["copies"] = c.copies;
        config["tol"] = c.tol;
        const auto plan = make_plan(c, eps, kind, seed);
        experiment = keyed("weight", [&] { return semicontinuity_run(sc, plan); });
    } else if (cmd == "beurling-index") {
        require(c.tol > 0.0, "tol", "must be > 0");
        require(n >= 8, "N", "must be >= 8");
        config["tol"] = c.tol;
        std::vector<std::vector<Complex>> sets;
        if (!c.zeros.empty()) {
            sets.push_back(keyed("zeros", [&] { return parse_complex_list(c.zeros); }));
            config["zeros"] = complex_list_json(sets.front());
        } else {
            require(c.sets >= 1, "sets", "must be >= 1");
            record_seed();
            config["sets"] = c.sets;
            sets = random_zero_sets(c.sets, seed);
        }
        experiment = keyed("zeros", [&] { return beurling_index_sweep(sets, n, c.tol); });
    } else {
        const auto w = weight();
        require(n >= 1, "N", "must be >= 1");
        require(c.samples >= 1, "samples", "must be >= 1");
        record_seed();
        config["samples"] = c.samples;
        const CoefficientSeries p{Complex(-1.0), Complex(1.0)};
        const auto alg = keyed("N", [&] { return algebra_constant(w, 2 * n); });
        const auto wa = keyed("weight", [&] { return check_wa_batch(p, w, c.samples, n, seed); });
        const auto wc = keyed("weight", [&] { return check_wc_batch(w, c.samples, n, seed + 1); });
        const auto der = keyed("weight", [&] { return derivative_equivalence_batch(w, c.samples, n, seed + 2); });
        doc["result"] = {{"algebra_constant",
                          {{"N", 2 * n},
                           {"constant", alg.constant},
                           {"argmax", alg.argmax},
                           {"unbounded_trend", alg.unbounded_trend}}},
                         {"wa", batch_json(wa)},
                         {"wc", batch_json(wc)},
                         {"derivative", batch_json(der)}};
        doc["verdict"] = "ok";
        log << "beurling-check " << w.name() << " degree<=" << n << ": algebra constant " << alg.constant
            << (alg.unbounded_trend ? " (unbounded trend)" : "") << ", wa max " << wa.max << ", wc min " << wc.min
            << ", derivative ratio [" << der.min << ", " << der.max << "]\n";
        if (!wc.warning.empty()) log << "warning: " << wc.warning << '\n';
    }

    RunResult result;
    if (experiment) {
        doc = report_document(*experiment);
        if (experiment->verdict == Verdict::fail) exit_code = 2;
        log << cmd << ": verdict " << to_string(experiment->verdict);
        if (std::isfinite(experiment->fitted_slope)) log << ", slope " << experiment->fitted_slope;
        log << '\n';
        result.steps_path = c.out + ".steps.csv";
        write_text_file(result.steps_path, steps_csv(*experiment));
    }
    doc["schema"] = report_schema;
    doc["command"] = cmd;
    doc["config"] = config;
    result.report_path = c.out + ".report.json";
    write_text_file(result.report_path, canonical_dump(doc));
    result.document = std::move(doc);
    result.exit_code = exit_code;
    return result;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-window experiments on weighted shifts and Beurling-type spaces", "shiftlab"};
    app.require_subcommand(1);
    RunConfig c;
    std::size_t n_value = 0;

    auto add = [&](CLI::App* sub, const std::string& keys) {
        const auto has = [&](const char* k) { return keys.find(std::string(" ") + k + " ") != std::string::npos; };
        if (has("weight")) sub->add_option("--weight", c.weight, "preset, poly:p or weight file");
        sub->add_option("--N", n_value, "window size (max degree for beurling-check)");
        if (has("lambda")) sub->add_option("--lambda", c.lambda, "complex eigenvalue, a+bi")->capture_default_str();
        if (has("m")) sub->add_option("--m", c.m, "chain length")->capture_default_str();
        if (has("roots")) sub->add_option("--roots", c.roots, "roots of p, comma separated")->capture_default_str();
        if (has("eps")) sub->add_option("--eps", c.eps, "epsilon schedule, comma separated, decreasing");
        if (has("perturbation")) sub->add_option("--perturbation", c.perturbation, "dense_random or weight_jitter");
        if (has("seed")) sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
        if (has("tol")) sub->add_option("--tol", c.tol, "rank / invariance tolerance")->capture_default_str();
        if (has("zeros")) sub->add_option("--zeros", c.zeros, "zero set, comma separated complex numbers");
        if (has("sets")) sub->add_option("--sets", c.sets, "number of random zero sets")->capture_default_str();
        if (has("trials")) sub->add_option("--trials", c.trials, "trials")->capture_default_str();
        if (has("copies")) sub->add_option("--copies", c.copies, "copies of the shift")->capture_default_str();
        if (has("samples")) sub->add_option("--samples", c.samples, "samples per degree band")->capture_default_str();
        sub->add_option("--out", c.out, "output prefix")->capture_default_str();
    };
    add(app.add_subcommand("classify", "weight classification and Shields hypotheses"), " weight ");
    add(app.add_subcommand("radii", "spectral radius surrogates"), " weight ");
    add(app.add_subcommand("chain", "Jordan chain of the adjoint"), " weight lambda m ");
    add(app.add_subcommand("stability", "norm stability of a kernel subspace"), " weight roots eps perturbation seed tol ");
    add(app.add_subcommand("semicont", "semicontinuity of the relative index"),
        " weight zeros eps perturbation seed tol trials copies ");
    add(app.add_subcommand("beurling-index", "relative index of zero-based subspaces"), " zeros sets seed tol ");
    add(app.add_subcommand("beurling-check", "Beurling space inequalities"), " weight seed samples ");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    if (sub->count("--N") > 0) c.n = n_value;
    try {
        return run(c, err).exit_code;
    } catch (const ConfigError& e) {
        const bool env = e.key() == "SHIFTLAB_SEED";
        err << "error: invalid value for " << (env ? "" : "--") << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace shiftlab
