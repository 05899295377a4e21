#include "conjlab/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "conjlab/conjugacy.hpp"
#include "conjlab/errors.hpp"
#include "conjlab/examples.hpp"
#include "conjlab/gronwall.hpp"
#include "conjlab/regularity.hpp"
#include "conjlab/rng.hpp"

namespace conjlab::cli {

using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path + " must be an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown key " + path + "." + key);
}

double num_or(const json& j, const char* key, double def, json& eff) {
    double v = def;
    if (j.contains(key)) {
        if (!j.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
        v = j.at(key).get<double>();
    }
    eff[key] = v;
    return v;
}

long int_or(const json& j, const char* key, long def, json& eff) {
    long v = def;
    if (j.contains(key)) {
        if (!j.at(key).is_number_integer())
            throw ConfigError(std::string(key) + " must be an integer");
        v = j.at(key).get<long>();
    }
    eff[key] = v;
    return v;
}

bool bool_or(const json& j, const char* key, bool def, json& eff) {
    bool v = def;
    if (j.contains(key)) {
        if (!j.at(key).is_boolean()) throw ConfigError(std::string(key) + " must be a bool");
        v = j.at(key).get<bool>();
    }
    eff[key] = v;
    return v;
}

std::string str_or(const json& j, const char* key, const std::string& def, json& eff) {
    std::string v = def;
    if (j.contains(key)) {
        if (!j.at(key).is_string()) throw ConfigError(std::string(key) + " must be a string");
        v = j.at(key).get<std::string>();
    }
    eff[key] = v;
    return v;
}

Interval interval_or(const json& j, const char* key, Interval def, json& eff) {
    Interval v = def;
    if (j.contains(key)) {
        const auto& a = j.at(key);
        if (!a.is_array() || a.size() != 2) throw ConfigError(std::string(key) + " must be [lo, hi]");
        v = {a[0].get<double>(), a[1].get<double>()};
        if (!(v.hi > v.lo)) throw ConfigError(std::string(key) + " must satisfy lo < hi");
    }
    eff[key] = {v.lo, v.hi};
    return v;
}

Mat parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path + " must be a matrix");
    const size_t rows = j.size();
    const size_t cols = j[0].size();
    Mat m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ConfigError(path + " rows must have equal length");
        for (size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

json matrix_to_json(const Mat& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        out.push_back(row);
    }
    return out;
}

ParamMap parse_params(const json& j, json& eff) {
    ParamMap out;
    json echoed = json::object();
    if (!j.is_object()) throw ConfigError("params must be an object of numbers");
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) throw ConfigError("param " + key + " must be a number");
        out[key] = value.get<double>();
        echoed[key] = value.get<double>();
    }
    eff["params"] = echoed;
    return out;
}

// ---------------------------------------------------------------------------
// system + dichotomy assembly

struct SystemSpec {
    MatrixField A = MatrixField::constant(-Mat::Identity(1, 1));
    NonlinearField f = NonlinearField::zero(1);
    std::optional<DichotomyData> builtin_dichotomy;
    Interval window{-8.0, 8.0};
    std::string builtin_name;  // empty for explicit systems
    ParamMap builtin_params;
};

MatrixField parse_matrix_field(const json& j, json& eff) {
    require_keys(j, "system.matrix", {"constant", "diagonal_table", "builtin", "params"});
    if (j.contains("constant")) {
        Mat m = parse_matrix(j.at("constant"), "system.matrix.constant");
        eff["constant"] = matrix_to_json(m);
        return MatrixField::constant(m);
    }
    if (j.contains("diagonal_table")) {
        const auto& t = j.at("diagonal_table");
        require_keys(t, "system.matrix.diagonal_table", {"times", "entries"});
        std::vector<double> times = t.at("times").get<std::vector<double>>();
        std::vector<std::vector<double>> entries =
            t.at("entries").get<std::vector<std::vector<double>>>();
        eff["diagonal_table"] = {{"times", times}, {"entries", entries}};
        return MatrixField::diagonal_table(std::move(times), std::move(entries));
    }
    if (j.contains("builtin")) {
        json sub;
        const std::string name = j.at("builtin").get<std::string>();
        ParamMap params =
            j.contains("params") ? parse_params(j.at("params"), sub) : ParamMap{};
        eff["builtin"] = name;
        eff["params"] = sub.value("params", json::object());
        return MatrixField::builtin(name, params);
    }
    throw ConfigError("system.matrix needs constant | diagonal_table | builtin");
}

NonlinearField parse_nonlinear_field(const json& j, json& eff) {
    require_keys(j, "system.nonlinear", {"builtin", "params"});
    if (!j.contains("builtin"))
        throw ConfigError("system.nonlinear needs a builtin name");
    const std::string name = j.at("builtin").get<std::string>();
    json sub;
    ParamMap params = j.contains("params") ? parse_params(j.at("params"), sub) : ParamMap{};
    eff["builtin"] = name;
    eff["params"] = sub.value("params", json::object());
    if (name == "unit_ball")  // the radially extended field of the worked example
        return radial_extend(
            NonlinearField::builtin("unit_ball_local", params), 1.0);
    return NonlinearField::builtin(name, params);
}

SystemSpec parse_system(const json& cfg, json& eff) {
    if (!cfg.contains("system")) throw ConfigError("missing system block");
    const json& j = cfg.at("system");
    require_keys(j, "system", {"builtin", "params", "matrix", "nonlinear", "window"});
    SystemSpec out;
    json sys_eff = json::object();
    out.window = interval_or(j, "window", {-8.0, 8.0}, sys_eff);

    if (j.contains("builtin")) {
        out.builtin_name = j.at("builtin").get<std::string>();
        sys_eff["builtin"] = out.builtin_name;
        json psub;
        out.builtin_params =
            j.contains("params") ? parse_params(j.at("params"), psub) : ParamMap{};
        sys_eff["params"] = psub.value("params", json::object());
        if (out.builtin_name == "planar") {
            auto ex = planar_example(out.builtin_params.count("sigma")
                                         ? out.builtin_params.at("sigma")
                                         : throw ConfigError("planar needs sigma"));
            out.A = ex.A;
            out.f = ex.f;
            out.builtin_dichotomy = ex.D;
        } else if (out.builtin_name == "unit_ball") {
            if (!out.builtin_params.count("epsilon"))
                throw ConfigError("unit_ball needs epsilon");
            auto ex = unit_ball_example(out.builtin_params.at("epsilon"));
            out.A = ex.A;
            out.f = ex.f;
            out.builtin_dichotomy = ex.D;
        } else if (out.builtin_name == "scalar_time") {
            if (!out.builtin_params.count("epsilon") || !out.builtin_params.count("delta"))
                throw ConfigError("scalar_time needs epsilon and delta");
            auto ex = scalar_time_example(out.builtin_params.at("epsilon"),
                                          out.builtin_params.at("delta"));
            out.A = ex.A;
            out.f = ex.f;
            out.builtin_dichotomy =
                DichotomyData{0.0, Mat::Identity(1, 1), 1.0, 1.0, 0.5};
        } else if (out.builtin_name == "sawtooth_sine") {
            if (!out.builtin_params.count("c")) throw ConfigError("sawtooth_sine needs c");
            out.A = MatrixField::constant(-Mat::Identity(1, 1));
            out.f = sawtooth_sine_field(out.builtin_params.at("c"));
            out.builtin_dichotomy =
                DichotomyData{0.0, Mat::Identity(1, 1), 1.0, 1.0, 0.5};
        } else {
            throw ConfigError("unknown builtin system: " + out.builtin_name);
        }
    } else {
        if (!j.contains("matrix")) throw ConfigError("system needs builtin or matrix");
        json meff = json::object(), neff = json::object();
        out.A = parse_matrix_field(j.at("matrix"), meff);
        sys_eff["matrix"] = meff;
        if (j.contains("nonlinear")) {
            out.f = parse_nonlinear_field(j.at("nonlinear"), neff);
        } else {
            out.f = NonlinearField::zero(out.A.dim());
            neff["builtin"] = "zero";
        }
        sys_eff["nonlinear"] = neff;
        if (out.f.dim() != out.A.dim())
            throw ConfigError("matrix and nonlinear dimensions differ");
    }
    eff["system"] = sys_eff;
    return out;
}

DichotomyData parse_dichotomy(const json& cfg, const SystemSpec& sys, json& eff) {
    if (!cfg.contains("dichotomy")) {
        if (sys.builtin_dichotomy) {
            const auto& d = *sys.builtin_dichotomy;
            eff["dichotomy"] = {{"t0", d.t0},       {"P0", matrix_to_json(d.P0)},
                                {"K", d.K},         {"alpha", d.alpha},
                                {"alpha1", d.alpha1}, {"source", "builtin"}};
            return d;
        }
        throw ConfigError("missing dichotomy block");
    }
    const json& j = cfg.at("dichotomy");
    require_keys(j, "dichotomy", {"t0", "P0", "K", "alpha", "alpha1", "estimate"});
    json deff = json::object();
    DichotomyData d;
    d.t0 = num_or(j, "t0", sys.builtin_dichotomy ? sys.builtin_dichotomy->t0 : 0.0, deff);
    if (j.contains("P0"))
        d.P0 = parse_matrix(j.at("P0"), "dichotomy.P0");
    else if (sys.builtin_dichotomy)
        d.P0 = sys.builtin_dichotomy->P0;
    else
        throw ConfigError("dichotomy.P0 is required");
    deff["P0"] = matrix_to_json(d.P0);

    if (j.contains("estimate")) {
        const json& e = j.at("estimate");
        require_keys(e, "dichotomy.estimate", {"t_range", "points", "alpha1_fraction"});
        json eeff = json::object();
        Interval tr = interval_or(e, "t_range", {-3.0, 3.0}, eeff);
        const long pts = int_or(e, "points", 9, eeff);
        const double frac = num_or(e, "alpha1_fraction", 0.5, eeff);
        std::vector<std::pair<double, double>> grid;
        for (long i = 0; i < pts; ++i)
            for (long k = 0; k < pts; ++k)
                grid.emplace_back(tr.lo + (tr.hi - tr.lo) * i / (pts - 1),
                                  tr.lo + (tr.hi - tr.lo) * k / (pts - 1));
        const auto est = estimate_dichotomy_constants(sys.A, d.P0, d.t0, grid);
        d.K = est.K_hat;
        d.alpha = est.alpha_hat;
        d.alpha1 = frac * d.alpha;
        deff["estimate"] = eeff;
        deff["estimated_K"] = d.K;
        deff["estimated_alpha"] = d.alpha;
    } else {
        d.K = num_or(j, "K", sys.builtin_dichotomy ? sys.builtin_dichotomy->K : 1.0, deff);
        d.alpha =
            num_or(j, "alpha", sys.builtin_dichotomy ? sys.builtin_dichotomy->alpha : 1.0, deff);
        d.alpha1 = num_or(j, "alpha1",
                          sys.builtin_dichotomy ? sys.builtin_dichotomy->alpha1
                                                : 0.5 * d.alpha,
                          deff);
    }
    deff["K"] = d.K;
    deff["alpha"] = d.alpha;
    deff["alpha1"] = d.alpha1;
    eff["dichotomy"] = deff;
    d.validate();
    return d;
}

ConjugacySettings parse_settings(const json& cfg, const SystemSpec& sys, json& eff) {
    ConjugacySettings s;
    s.window = sys.window;
    json teff = json::object(), heff = json::object(), geff = json::object();
    const json tol = cfg.value("tolerances", json::object());
    require_keys(tol, "tolerances",
                 {"picard", "ode_abs", "ode_rel", "quadrature", "bound_slack"});
    s.picard_tol = num_or(tol, "picard", 1e-6, teff);
    s.ode_tol.abs = num_or(tol, "ode_abs", 1e-9, teff);
    s.ode_tol.rel = num_or(tol, "ode_rel", 1e-9, teff);
    s.quad_tol = num_or(tol, "quadrature", 1e-8, teff);
    s.bound_slack = num_or(tol, "bound_slack", 1e-3, teff);
    const json hor = cfg.value("horizons", json::object());
    require_keys(hor, "horizons",
                 {"T", "tail_target", "grid_step", "ode_max_step", "field_window"});
    s.horizon_T = num_or(hor, "T", 0.0, heff);
    s.tail_target = num_or(hor, "tail_target", 1e-6, heff);
    s.grid_step = num_or(hor, "grid_step", 0.0625, heff);
    s.ode_max_step = num_or(hor, "ode_max_step", 0.1, heff);
    // sine-type builtins oscillate in space along exploding coordinates; ramp
    // the field off beyond this distance from the evaluation time by default
    const bool oscillatory = sys.builtin_name == "planar" ||
                             sys.builtin_name == "sawtooth_sine" ||
                             sys.f.kind() == "builtin:planar_sine" ||
                             sys.f.kind() == "builtin:sawtooth_sine";
    s.field_window = num_or(hor, "field_window", oscillatory ? 8.0 : 0.0, heff);
    const json hyp = cfg.value("hypotheses", json::object());
    require_keys(hyp, "hypotheses", {"grid_points"});
    s.hypothesis_grid_points = static_cast<int>(int_or(hyp, "grid_points", 25, geff));
    eff["tolerances"] = teff;
    eff["horizons"] = heff;
    eff["hypotheses"] = geff;
    return s;
}

unsigned long long parse_seed(const json& cfg,
                              std::optional<unsigned long long> seed_override, json& eff) {
    unsigned long long seed = 0;
    if (cfg.contains("seed")) {
        if (!cfg.at("seed").is_number_unsigned() && !cfg.at("seed").is_number_integer())
            throw ConfigError("seed must be an integer");
        seed = cfg.at("seed").get<unsigned long long>();
    }
    if (seed_override) seed = *seed_override;
    eff["seed"] = seed;
    return seed;
}

int thread_cap(const json& cfg, json& eff) {
    long want = 0;
    if (cfg.contains("threads")) want = cfg.at("threads").get<long>();
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap <= 0) cap = 1;
    if (const char* env = std::getenv("CONJLAB_THREADS")) {
        const int env_cap = std::atoi(env);
        if (env_cap > 0) cap = std::min(cap, env_cap);
    }
    int threads = want > 0 ? std::min<long>(want, cap) : std::min(cap, 4);
    eff["threads"] = threads;
    return threads;
}

/// index-deterministic parallel map: results depend only on (seed, index)
template <typename Fn>
void parallel_for(int n, int threads, const Fn& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const int i = next.fetch_add(1);
                    if (i >= n) return;
                    fn(i);
                }
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// serialization

json to_json(const HypothesisReport& h) {
    json out{{"sup_L_mu", h.sup_L_mu},
             {"theta", h.theta},
             {"theta_tilde", h.theta_tilde},
             {"K_theta", h.K_theta},
             {"K_theta_tilde", h.K_theta_tilde},
             {"sup_L_mu_finite", h.sup_L_mu_finite},
             {"theta_ok", h.theta_ok},
             {"theta_tilde_ok", h.theta_tilde_ok},
             {"grid", h.grid},
             {"quad_error", h.quad_error},
             {"tail_bound", h.tail_bound}};
    if (h.autonomous_shortcut) out["autonomous_shortcut_2rK_over_alpha"] = *h.autonomous_shortcut;
    return out;
}

json to_json(const Certificate& c) {
    const char* verdict = c.verdict == CertificateVerdict::Pass ? "pass"
                          : c.verdict == CertificateVerdict::BoundViolated
                              ? "bound-violated"
                              : "hypothesis-not-satisfied";
    return json{{"hypothesis_ok", c.hypothesis_ok}, {"theta1", c.theta1},
                {"bound_margin", c.bound_margin},   {"worst_t", c.worst_t},
                {"alpha2", c.alpha2},               {"slack", c.slack},
                {"verdict", verdict}};
}

json to_json(const RegularityEstimate& e) {
    json per = json::array();
    for (auto [d, inc] : e.per_scale) per.push_back({d, inc});
    return json{{"exponent", e.exponent},
                {"constant", e.constant},
                {"log_constant", e.log_constant},
                {"fit_residual", e.fit_residual},
                {"flat_map", e.flat_map},
                {"per_scale", per},
                {"scale_range", {e.scale_range.lo, e.scale_range.hi}}};
}

json to_json(const ConjugacyReport& r) {
    return json{{"max_HG_residual", r.max_HG_residual},
                {"max_GH_residual", r.max_GH_residual},
                {"max_solution_map_H", r.max_solution_map_H},
                {"max_solution_map_G", r.max_solution_map_G},
                {"max_H_offset", r.max_H_offset},
                {"max_G_offset", r.max_G_offset},
                {"offset_bound", r.offset_bound},
                {"offsets_ok", r.offsets_ok},
                {"hypotheses_ok", r.hypotheses_ok},
                {"budget", r.budget},
                {"residuals_within_budget", r.residuals_within_budget}};
}

std::string samples_csv(const ConjugacyReport& r) {
    std::ostringstream os;
    os << "map,t";
    const int dim = r.samples.empty() ? 0 : static_cast<int>(r.samples[0].point.size());
    for (int i = 0; i < dim; ++i) os << ",x" << i;
    for (int i = 0; i < dim; ++i) os << ",Fx" << i;
    os << "\n";
    for (const auto& row : r.samples) {
        os << (row.is_H ? "H" : "G") << "," << csv_number(row.t);
        for (int i = 0; i < dim; ++i) os << "," << csv_number(row.point[i]);
        for (int i = 0; i < dim; ++i) os << "," << csv_number(row.image[i]);
        os << "\n";
    }
    return os.str();
}

std::string scales_csv(const RegularityEstimate& e) {
    std::ostringstream os;
    os << "scale,max_increment\n";
    for (auto [d, inc] : e.per_scale)
        os << csv_number(d) << "," << csv_number(inc) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// subcommands

std::set<std::string> top_keys(const std::string& command) {
    std::set<std::string> keys{"seed", "threads", "output"};
    if (command == "hypotheses" || command == "verify" || command == "regularity") {
        keys.insert({"system", "dichotomy", "tolerances", "horizons", "hypotheses"});
    }
    if (command == "verify") keys.insert("verify");
    if (command == "regularity") keys.insert("regularity");
    if (command == "gronwall") keys.insert("gronwall");
    if (command == "example") keys.insert("example");
    return keys;
}

bool parse_emit_csv(const json& cfg, json& eff) {
    const json out = cfg.value("output", json::object());
    require_keys(out, "output", {"csv"});
    json oeff = json::object();
    const bool v = bool_or(out, "csv", false, oeff);
    eff["output"] = oeff;
    return v;
}

CommandResult cmd_hypotheses(const json& cfg,
                             std::optional<unsigned long long> seed_override) {
    json eff;
    parse_seed(cfg, seed_override, eff);
    thread_cap(cfg, eff);
    parse_emit_csv(cfg, eff);
    const SystemSpec sys = parse_system(cfg, eff);
    const DichotomyData d = parse_dichotomy(cfg, sys, eff);
    const ConjugacySettings set = parse_settings(cfg, sys, eff);
    ConjugacyProblem problem(sys.A, sys.f, d, set);
    const auto& h = problem.hypotheses();

    CommandResult res;
    res.report = {{"command", "hypotheses"},
                  {"effective_config", eff},
                  {"hypotheses", to_json(h)},
                  {"horizon_T", problem.horizon()},
                  {"offset_bound_K_L_mu", problem.offset_bound()}};
    const bool pass = h.sup_L_mu_finite && h.theta_ok && h.theta_tilde_ok;
    res.report["pass"] = pass;
    res.exit_code = pass ? kExitPass : kExitHypothesis;
    return res;
}

CommandResult cmd_verify(const json& cfg, std::optional<unsigned long long> seed_override) {
    json eff;
    const unsigned long long seed = parse_seed(cfg, seed_override, eff);
    thread_cap(cfg, eff);
    const bool emit_csv = parse_emit_csv(cfg, eff);
    const SystemSpec sys = parse_system(cfg, eff);
    const DichotomyData d = parse_dichotomy(cfg, sys, eff);
    const ConjugacySettings set = parse_settings(cfg, sys, eff);

    const json v = cfg.value("verify", json::object());
    require_keys(v, "verify",
                 {"samples", "t_range", "point_radius", "trajectories",
                  "trajectory_horizon", "checks_per_trajectory", "budget"});
    json veff = json::object();
    SampleSpec spec;
    spec.composition_samples = static_cast<int>(int_or(v, "samples", 100, veff));
    spec.t_range = interval_or(v, "t_range", {-2.0, 2.0}, veff);
    spec.point_radius = num_or(v, "point_radius", 2.0, veff);
    spec.trajectories = static_cast<int>(int_or(v, "trajectories", 20, veff));
    spec.trajectory_horizon = num_or(v, "trajectory_horizon", 3.0, veff);
    spec.checks_per_trajectory =
        static_cast<int>(int_or(v, "checks_per_trajectory", 4, veff));
    spec.budget = num_or(v, "budget", 5e-3, veff);
    spec.seed = seed;
    eff["verify"] = veff;

    ConjugacyProblem problem(sys.A, sys.f, d, set);
    CommandResult res;
    if (!problem.hypotheses().all_ok()) {
        res.report = {{"command", "verify"},
                      {"effective_config", eff},
                      {"hypotheses", to_json(problem.hypotheses())},
                      {"pass", false},
                      {"reason", "hypotheses failed"}};
        res.exit_code = kExitHypothesis;
        return res;
    }
    const ConjugacyReport rep = verify_conjugacy(problem, spec);
    res.report = {{"command", "verify"},
                  {"effective_config", eff},
                  {"hypotheses", to_json(problem.hypotheses())},
                  {"report", to_json(rep)}};
    const bool pass = rep.residuals_within_budget && rep.offsets_ok;
    res.report["pass"] = pass;
    res.exit_code = pass ? kExitPass : kExitViolation;
    if (emit_csv) res.files["map_samples.csv"] = samples_csv(rep);
    return res;
}

CommandResult cmd_regularity(const json& cfg,
                             std::optional<unsigned long long> seed_override) {
    json eff;
    const unsigned long long seed = parse_seed(cfg, seed_override, eff);
    thread_cap(cfg, eff);
    const bool emit_csv = parse_emit_csv(cfg, eff);

    const json r = cfg.value("regularity", json::object());
    require_keys(r, "regularity",
                 {"target", "t", "epsilon", "delta", "radius", "scales",
                  "pairs_per_scale", "mode", "sampler", "theory"});
    json reff = json::object();
    const std::string target = str_or(r, "target", "unit_ball_G1", reff);
    const double at_t = num_or(r, "t", 0.0, reff);
    const double epsilon = num_or(r, "epsilon", 0.25, reff);
    const double delta = num_or(r, "delta", 0.5, reff);
    const double radius = num_or(r, "radius", 3.0, reff);
    std::vector<double> scales;
    if (r.contains("scales")) {
        scales = r.at("scales").get<std::vector<double>>();
    } else {
        for (int k = -6; k <= -1; ++k) scales.push_back(std::pow(10.0, k));
    }
    reff["scales"] = scales;
    const int pairs = static_cast<int>(int_or(r, "pairs_per_scale", 64, reff));
    const std::string mode = str_or(r, "mode", "both", reff);
    const std::string sampler_name = str_or(r, "sampler", "auto", reff);
    const bool want_theory = bool_or(r, "theory", true, reff);
    eff["regularity"] = reff;

    CommandResult res;
    res.report = {{"command", "regularity"}};

    // resolve the target map and its natural sampling domain
    PointMap map;
    PairSampler lip_sampler, hold_sampler;
    std::optional<ConjugacyProblem> problem;
    json warn = json::array();

    // a system block is validated and echoed even when the target is a
    // closed form that ignores it
    const bool has_system = cfg.contains("system");
    if (has_system && target != "numeric_H" && target != "numeric_G")
        parse_system(cfg, eff);

    auto scalar_map = [](std::function<double(double)> f) {
        return [f](const Vec& x) {
            Vec y(1);
            y[0] = f(x[0]);
            return y;
        };
    };

    if (target == "unit_ball_H1" || target == "unit_ball_G1") {
        const auto ex = unit_ball_example(epsilon);
        const auto& cf = ex.closed_form;
        map = scalar_map(target == "unit_ball_H1" ? cf.H1 : cf.G1);
        const Interval dom = target == "unit_ball_H1" ? cf.h_domain : cf.g_domain;
        Vec lo(1), hi(1);
        lo[0] = dom.lo;
        hi[0] = dom.hi;
        lip_sampler = box_pair_sampler(lo, hi, seed);
        hold_sampler = origin_anchored_sampler(1, seed);
    } else if (target == "scalar_time_H") {
        const auto ex = scalar_time_example(epsilon, delta);
        map = scalar_map([H = ex.H, at_t](double x) { return H(at_t, x); });
        // two-sided domain delta <= |x| <= radius
        lip_sampler = [delta, radius, seed](double scale, std::uint64_t k) {
            Rng rng = Rng::fork(seed ^ 0xabcdULL, k);
            for (int attempt = 0; attempt < 64; ++attempt) {
                const double side = rng.next_double() < 0.5 ? -1.0 : 1.0;
                const double x = side * rng.uniform(delta, radius);
                const double dir = rng.next_double() < 0.5 ? -1.0 : 1.0;
                const double other = x + dir * scale;
                if (std::abs(other) >= delta && std::abs(other) <= radius) {
                    Vec a(1), b(1);
                    a[0] = x;
                    b[0] = other;
                    return std::make_pair(a, b);
                }
            }
            Vec a(1), b(1);
            a[0] = delta;
            b[0] = delta + scale;
            return std::make_pair(a, b);
        };
        hold_sampler = lip_sampler;
    } else if (target == "numeric_H" || target == "numeric_G") {
        const SystemSpec sys = parse_system(cfg, eff);
        const DichotomyData d = parse_dichotomy(cfg, sys, eff);
        const ConjugacySettings set = parse_settings(cfg, sys, eff);
        problem.emplace(sys.A, sys.f, d, set);
        if (!problem->hypotheses().all_ok()) {
            res.report["hypotheses"] = to_json(problem->hypotheses());
            res.report["pass"] = false;
            res.report["effective_config"] = eff;
            res.exit_code = kExitHypothesis;
            return res;
        }
        auto evaluator = std::make_shared<MapEvaluator>(
            *problem, target == "numeric_H" ? MapEvaluator::Mode::H
                                            : MapEvaluator::Mode::G);
        map = [evaluator, at_t](const Vec& x) { return (*evaluator)(at_t, x); };
        const int n = sys.A.dim();
        Vec lo = Vec::Constant(n, -radius), hi = Vec::Constant(n, radius);
        lip_sampler = box_pair_sampler(lo, hi, seed);
        hold_sampler = origin_anchored_sampler(n, seed);
    } else if (target == "flat") {  // diagnostic fixture
        map = [](const Vec& x) { return Vec(Vec::Zero(x.size())); };
        Vec lo = Vec::Constant(1, -1.0), hi = Vec::Constant(1, 1.0);
        lip_sampler = box_pair_sampler(lo, hi, seed);
        hold_sampler = origin_anchored_sampler(1, seed);
    } else {
        throw ConfigError("unknown regularity target: " + target);
    }
    if (sampler_name == "box") hold_sampler = lip_sampler;
    if (sampler_name == "origin") lip_sampler = hold_sampler;

    if (mode == "lipschitz" || mode == "both") {
        const auto est = lipschitz_estimate(map, lip_sampler, scales, pairs);
        res.report["lipschitz"] = to_json(est);
        if (est.flat_map) warn.push_back("flat map: zero increments at every scale");
        if (emit_csv) res.files["lipschitz_scales.csv"] = scales_csv(est);
    }
    if (mode == "holder" || mode == "both") {
        const auto est = holder_estimate(map, hold_sampler, scales, pairs);
        res.report["holder"] = to_json(est);
        if (est.flat_map) warn.push_back("flat map: Hoelder exponent undefined");
        if (emit_csv) res.files["holder_scales.csv"] = scales_csv(est);
    }

    if (want_theory && problem) {
        const auto& h = problem->hypotheses();
        json theory;
        theory["theta_tilde"] = h.theta_tilde;
        if (h.K_theta_tilde < 1.0)
            theory["p"] = theoretical_p(problem->dichotomy().K, h.theta_tilde);
        const auto M = problem->A().bound_M(problem->settings().window);
        const auto cmu = problem->f().mu().window_sup(problem->settings().window);
        const auto cr = problem->f().r().window_sup(problem->settings().window);
        theory["M"] = {{"value", M.value}, {"grid_step", M.grid_step}};
        theory["C_mu"] = {{"value", cmu.value}, {"grid_step", cmu.grid_step}};
        theory["C_r"] = {{"value", cr.value}, {"grid_step", cr.grid_step}};
        const auto tc = theoretical_beta_lambda(problem->dichotomy().K,
                                                problem->dichotomy().alpha, M.value,
                                                cmu.value, cr.value);
        json tcj{{"beta", tc.beta},
                 {"q", tc.q},
                 {"tau_coefficient", tc.tau_coefficient},
                 {"lambda_feasible", tc.lambda_feasible},
                 {"beta_feasible", tc.beta_feasible},
                 {"third_feasible", tc.third_feasible},
                 {"note", tc.note}};
        if (tc.lambda) tcj["lambda"] = *tc.lambda;
        theory["step_constants"] = tcj;
        res.report["theory"] = theory;
        res.report["hypotheses"] = to_json(h);
    }

    res.report["warnings"] = warn;
    res.report["effective_config"] = eff;
    res.report["pass"] = true;
    res.exit_code = kExitPass;
    return res;
}

ScalarModulus parse_modulus(const json& j, json& eff) {
    require_keys(j, "b", {"constant", "table_times", "table_values", "sawtooth_c"});
    if (j.contains("constant")) {
        const double v = j.at("constant").get<double>();
        eff = {{"constant", v}};
        return ScalarModulus::constant(v);
    }
    if (j.contains("sawtooth_c")) {
        const double c = j.at("sawtooth_c").get<double>();
        eff = {{"sawtooth_c", c}};
        return ScalarModulus::sawtooth(c);
    }
    if (j.contains("table_times") && j.contains("table_values")) {
        auto t = j.at("table_times").get<std::vector<double>>();
        auto v = j.at("table_values").get<std::vector<double>>();
        eff = {{"table_times", t}, {"table_values", v}};
        return ScalarModulus::tabulated(std::move(t), std::move(v));
    }
    throw ConfigError("modulus needs constant | sawtooth_c | table_times+table_values");
}

CommandResult cmd_gronwall(const json& cfg,
                           std::optional<unsigned long long> seed_override) {
    json eff;
    const unsigned long long seed = parse_seed(cfg, seed_override, eff);
    const int threads = thread_cap(cfg, eff);
    parse_emit_csv(cfg, eff);
    const json g = cfg.value("gronwall", json::object());
    require_keys(g, "gronwall", {"suite", "instance"});

    CommandResult res;
    res.report = {{"command", "gronwall"}};

    if (g.contains("instance")) {
        const json& ij = g.at("instance");
        require_keys(ij, "gronwall.instance",
                     {"t0", "s", "c", "c1", "c2", "alpha", "alpha1", "b",
                      "grid_points", "slack", "tol"});
        json ieff = json::object();
        IneqInstance inst;
        inst.t0 = num_or(ij, "t0", 0.0, ieff);
        inst.s = num_or(ij, "s", 6.0, ieff);
        inst.c = num_or(ij, "c", 1.0, ieff);
        inst.c1 = num_or(ij, "c1", 1.0, ieff);
        inst.c2 = num_or(ij, "c2", 1.0, ieff);
        inst.alpha = num_or(ij, "alpha", 1.0, ieff);
        inst.alpha1 = num_or(ij, "alpha1", 0.5, ieff);
        inst.grid_points = static_cast<int>(int_or(ij, "grid_points", 400, ieff));
        const double slack = num_or(ij, "slack", 1e-6, ieff);
        const double tol = num_or(ij, "tol", 1e-10, ieff);
        json beff;
        inst.b = ij.contains("b") ? parse_modulus(ij.at("b"), beff)
                                  : ScalarModulus::constant(0.2);
        ieff["b"] = beff;
        eff["gronwall"] = {{"instance", ieff}};
        res.report["effective_config"] = eff;

        try {
            const auto wc1 = worst_case_u(inst, tol, false);
            IneqInstance first = inst;
            first.u = wc1.u;
            const auto cert1 = check_first_inequality(first, slack);
            const auto wc2 = worst_case_u(inst, tol, true);
            IneqInstance second = inst;
            second.u = wc2.u;
            const auto cert2 = check_second_inequality(second, slack);
            res.report["first"] = to_json(cert1);
            res.report["second"] = to_json(cert2);
            res.report["picard_iterations"] = {wc1.iterations, wc2.iterations};
            const bool pass = cert1.verdict == CertificateVerdict::Pass &&
                              cert2.verdict == CertificateVerdict::Pass;
            res.report["pass"] = pass;
            res.exit_code = pass ? kExitPass : kExitViolation;
        } catch (const ContractionViolated& e) {
            res.report["pass"] = false;
            res.report["error"] = {{"kind", "contraction-violated"},
                                   {"theta1", e.theta1},
                                   {"what", e.what()}};
            res.exit_code = kExitHypothesis;
        }
        return res;
    }

    const json sj = g.value("suite", json::object());
    require_keys(sj, "gronwall.suite",
                 {"instances", "theta_max", "slack", "tol_scale", "grid_points"});
    json seff = json::object();
    const int count = static_cast<int>(int_or(sj, "instances", 50, seff));
    const double theta_max = num_or(sj, "theta_max", 0.9, seff);
    const double slack = num_or(sj, "slack", 1e-6, seff);
    const double tol_scale = num_or(sj, "tol_scale", 1e-12, seff);
    const int grid_points = static_cast<int>(int_or(sj, "grid_points", 400, seff));
    eff["gronwall"] = {{"suite", seff}};
    res.report["effective_config"] = eff;

    struct Row {
        json summary;
        bool pass = false;
    };
    std::vector<Row> rows(static_cast<size_t>(count));
    parallel_for(count, threads, [&](int i) {
        Rng rng = Rng::fork(seed, static_cast<std::uint64_t>(i));
        IneqInstance inst;
        inst.t0 = 0.0;
        inst.s = rng.uniform(3.0, 8.0);
        inst.c = rng.uniform(0.1, 3.0);
        inst.c1 = rng.uniform(0.1, 3.0);
        inst.c2 = rng.uniform(0.1, 3.0);
        inst.alpha = rng.uniform(0.5, 2.0);
        inst.alpha1 = inst.alpha * rng.uniform(0.2, 0.8);
        inst.grid_points = grid_points;
        const double theta_target = rng.uniform(0.1, theta_max);
        if (rng.next_double() < 0.5) {
            inst.b = ScalarModulus::constant(1.0);
        } else {
            std::vector<double> ts, vs;
            const int m = 17;
            for (int k = 0; k < m; ++k) {
                ts.push_back(inst.t0 + (inst.s - inst.t0) * k / (m - 1));
                vs.push_back(rng.uniform(0.1, 1.0));
            }
            inst.b = ScalarModulus::tabulated(std::move(ts), std::move(vs));
        }
        // theta1 is linear in b: rescale to hit the target exactly
        const double raw = theta1(inst).value;
        inst.b = inst.b.scaled(theta_target / raw);

        const double tol = tol_scale * inst.c;
        const auto wc1 = worst_case_u(inst, tol, false);
        IneqInstance first = inst;
        first.u = wc1.u;
        const auto cert1 = check_first_inequality(first, slack);
        const auto wc2 = worst_case_u(inst, tol, true);
        IneqInstance second = inst;
        second.u = wc2.u;
        const auto cert2 = check_second_inequality(second, slack);

        // linearity in c: doubling c (and tol) must double u* to 1e-10
        IneqInstance scaled = inst;
        scaled.c = 2.0 * inst.c;
        const auto wc_scaled = worst_case_u(scaled, 2.0 * tol, false);
        double lin_err = 0.0;
        const auto& base_vals = wc1.u.values();
        const auto& scaled_vals = wc_scaled.u.values();
        for (size_t k = 0; k < base_vals.size(); ++k)
            lin_err = std::max(lin_err,
                               std::abs(scaled_vals[k] - 2.0 * base_vals[k]) /
                                   std::max(1.0, 2.0 * base_vals[k]));

        Row row;
        row.pass = cert1.verdict == CertificateVerdict::Pass &&
                   cert2.verdict == CertificateVerdict::Pass && lin_err <= 1e-10;
        row.summary = {{"theta1", cert1.theta1},
                       {"first_margin", cert1.bound_margin},
                       {"second_margin", cert2.bound_margin},
                       {"linearity_error", lin_err},
                       {"iterations", wc1.iterations},
                       {"pass", row.pass}};
        rows[static_cast<size_t>(i)] = std::move(row);
    });

    json items = json::array();
    bool all = true;
    for (auto& row : rows) {
        items.push_back(row.summary);
        all = all && row.pass;
    }
    res.report["instances"] = items;
    res.report["pass"] = all;
    res.exit_code = all ? kExitPass : kExitViolation;
    return res;
}

CommandResult cmd_example(const json& cfg,
                          std::optional<unsigned long long> seed_override) {
    json eff;
    parse_seed(cfg, seed_override, eff);
    thread_cap(cfg, eff);
    parse_emit_csv(cfg, eff);
    if (!cfg.contains("example")) throw ConfigError("missing example block");
    const json& ej = cfg.at("example");
    require_keys(ej, "example", {"name", "params"});
    json eeff = json::object();
    const std::string name = str_or(ej, "name", "", eeff);
    json psub;
    ParamMap params =
        ej.contains("params") ? parse_params(ej.at("params"), psub) : ParamMap{};
    eeff["params"] = psub.value("params", json::object());
    eff["example"] = eeff;

    json checks = json::array();
    auto check = [&](const std::string& what, double value, double expected, double tol) {
        const bool ok = std::abs(value - expected) <= tol;
        checks.push_back({{"check", what},
                          {"value", value},
                          {"expected", expected},
                          {"tol", tol},
                          {"pass", ok}});
        return ok;
    };
    auto check_le = [&](const std::string& what, double value, double limit) {
        const bool ok = value <= limit;
        checks.push_back(
            {{"check", what}, {"value", value}, {"limit", limit}, {"pass", ok}});
        return ok;
    };

    bool all = true;
    if (name == "unit_ball") {
        const double epsv = params.count("epsilon") ? params.at("epsilon") : 0.25;
        const auto ex = unit_ball_example(epsv);
        const auto& cf = ex.closed_form;
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = -1.0 + 2.0 * i / 2000.0;
            worst = std::max(worst, std::abs(cf.G1(cf.H1(x)) - x));
        }
        all &= check_le("G1(H1(x)) - x on 2001-point grid", worst, 1e-10);
        all &= check("H1(1)", cf.H1(1.0), 1.0 - epsv, 0.0);
        all &= check("H1(0)", cf.H1(0.0), 0.0, 0.0);
        const double dh = 1e-9;
        all &= check("right derivative of H1 at 0", cf.H1(dh) / dh, 0.0, 1e-3);
        all &= check("left derivative of H1 at 0", cf.H1(-dh) / (-dh),
                     std::pow(1.0 - epsv, 1.5), 1e-3);
        const auto oracles = trajectory_oracles(epsv);
        double worst_push = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double t = 10.0 * i / 100.0;
            worst_push = std::max(
                worst_push, std::abs(cf.H1(oracles.x1_pos(t)) - oracles.y1_pos(t)));
            worst_push = std::max(
                worst_push, std::abs(cf.H1(oracles.x1_neg(t)) - oracles.y1_neg(t)));
        }
        all &= check_le("pushed trajectories vs linear closed forms", worst_push, 1e-10);
    } else if (name == "scalar_time") {
        const double epsv = params.count("epsilon") ? params.at("epsilon") : 0.1;
        const double deltav = params.count("delta") ? params.at("delta") : 0.5;
        const auto ex = scalar_time_example(epsv, deltav);
        all &= check("H(0, x(0)) = H(0, 1)", ex.H(0.0, ex.x_ref(0.0)), 0.5, 0.0);
        double worst_res = 0.0, worst_curve = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double t = -5.0 + 10.0 * i / 200.0;
            const double y = ex.pushed_curve(t);
            worst_curve = std::max(worst_curve, std::abs(y - 0.5 * std::exp(-t)));
            worst_res = std::max(worst_res, std::abs(ex.pushed_curve_derivative(t) + y));
        }
        all &= check_le("pushed curve equals e^{-t}/2", worst_curve, 1e-10);
        all &= check_le("residual of y' = -y along the pushed curve", worst_res, 1e-10);
        double worst_ratio = 0.0;
        Rng rng(7);
        for (int i = 0; i < 2000; ++i) {
            const double sa = rng.next_double() < 0.5 ? -1.0 : 1.0;
            const double sb = rng.next_double() < 0.5 ? -1.0 : 1.0;
            const double xa = sa * rng.uniform(deltav, 3.0);
            const double xb = sb * rng.uniform(deltav, 3.0);
            if (xa == xb) continue;
            worst_ratio = std::max(
                worst_ratio, std::abs(ex.H(0.3, xa) - ex.H(0.3, xb)) / std::abs(xa - xb));
        }
        all &= check_le("Lipschitz ratio of H on |x| >= delta",
                        worst_ratio, 1.0 / (deltav * deltav) + 1e-6);
    } else if (name == "sawtooth") {
        const double c = params.count("c") ? params.at("c") : 1.0;
        const auto mu = sawtooth_modulus(c);
        double on_unit = 0.0;
        for (int i = 0; i < 100; ++i)
            on_unit = std::max(on_unit, mu.at(i / 100.0 * 0.999));
        all &= check("mu on [0, 1)", on_unit, 0.0, 0.0);
        all &= check("peak value at m = 4", mu.at(4.0 + 1.0 / 8.0), c * 2.0, 1e-12);
        double worst_window = 0.0;
        for (int m = 1; m <= 50; ++m)
            worst_window = std::max(worst_window, mu.integral(m, m + 1.0));
        all &= check_le("unit-window integrals up to m = 50", worst_window, c);
        double peak = 0.0;
        for (int m = 21; m <= 50; ++m)
            peak = std::max(peak, mu.at(m + 0.5 / m));
        const bool unbounded_witness = peak > 10.0 * c;
        checks.push_back({{"check", "peak exceeds 10c (unboundedness witness)"},
                          {"value", peak},
                          {"limit", 10.0 * c},
                          {"pass", unbounded_witness}});
        all &= unbounded_witness;
    } else if (name == "planar") {
        const double sigma = params.count("sigma") ? params.at("sigma") : 0.1;
        const auto ex = planar_example(sigma);
        all &= check("theta = 2 sigma", ex.theta, 2.0 * sigma, 0.0);
        Rng rng(11);
        double worst_lip = 0.0, worst_mu = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const Vec x = rng.in_ball(2, 5.0), y = rng.in_ball(2, 5.0);
            const double t = rng.uniform(-3.0, 3.0);
            worst_mu = std::max(worst_mu, ex.f.at(t, x).norm() / ex.f.mu().at(t));
            const double dx = (x - y).norm();
            if (dx > 1e-12)
                worst_lip = std::max(
                    worst_lip, (ex.f.at(t, x) - ex.f.at(t, y)).norm() / (dx * sigma));
        }
        all &= check_le("||f|| / mu over samples", worst_mu, 1.0);
        all &= check_le("Lipschitz ratio / sigma over samples", worst_lip, 1.0);
    } else {
        throw ConfigError("unknown example: " + name);
    }

    CommandResult res;
    res.report = {{"command", "example"},
                  {"effective_config", eff},
                  {"checks", checks},
                  {"pass", all}};
    res.exit_code = all ? kExitPass : kExitViolation;
    return res;
}

}  // namespace

CommandResult run_command(const std::string& command, const json& config,
                          std::optional<unsigned long long> seed_override) {
    try {
        require_keys(config, "config", top_keys(command));
        if (command == "hypotheses") return cmd_hypotheses(config, seed_override);
        if (command == "verify") return cmd_verify(config, seed_override);
        if (command == "regularity") return cmd_regularity(config, seed_override);
        if (command == "gronwall") return cmd_gronwall(config, seed_override);
        if (command == "example") return cmd_example(config, seed_override);
        CommandResult res;
        res.exit_code = kExitConfig;
        res.report = {{"error", "unknown command: " + command}};
        return res;
    } catch (const ConfigError& e) {
        return {kExitConfig, {{"error", e.what()}, {"kind", "config"}}, {}};
    } catch (const InvalidArgument& e) {
        return {kExitConfig, {{"error", e.what()}, {"kind", "invalid-argument"}}, {}};
    } catch (const HypothesisViolated& e) {
        return {kExitHypothesis, {{"error", e.what()}, {"kind", "hypothesis-violated"}}, {}};
    } catch (const json::exception& e) {
        return {kExitConfig, {{"error", e.what()}, {"kind", "config"}}, {}};
    }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp);
        os << contents;
    }
    std::filesystem::rename(tmp, path);
}

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int run_main(int argc, char** argv) {
    const std::string usage =
        "usage: conjlab <hypotheses|verify|regularity|gronwall|example> "
        "--config <path> [--out <dir>] [--seed <u64>]";
    std::string command, config_path, out_dir = ".";
    std::optional<unsigned long long> seed;
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
        std::fprintf(stderr, "%s\n", usage.c_str());
        return kExitConfig;
    }
    command = args[0];
    for (size_t i = 1; i < args.size(); ++i) {
        auto need_value = [&](const char* flag) -> std::string {
            if (i + 1 >= args.size())
                throw std::runtime_error(std::string(flag) + " needs a value");
            return args[++i];
        };
        try {
            if (args[i] == "--config") config_path = need_value("--config");
            else if (args[i] == "--out") out_dir = need_value("--out");
            else if (args[i] == "--seed") seed = std::stoull(need_value("--seed"));
            else throw std::runtime_error("unknown option " + args[i]);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "%s\n%s\n", e.what(), usage.c_str());
            return kExitConfig;
        }
    }
    if (config_path.empty()) {
        std::fprintf(stderr, "missing --config\n%s\n", usage.c_str());
        return kExitConfig;
    }

    json config;
    {
        std::ifstream is(config_path);
        if (!is) {
            std::fprintf(stderr, "cannot read config %s\n", config_path.c_str());
            return kExitConfig;
        }
        try {
            is >> config;
        } catch (const json::exception& e) {
            std::fprintf(stderr, "config parse error: %s\n", e.what());
            return kExitConfig;
        }
    }

    CommandResult res = run_command(command, config, seed);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    try {
        write_file_atomic(out_dir + "/report.json", res.report.dump(2) + "\n");
        for (const auto& [name, contents] : res.files)
            write_file_atomic(out_dir + "/" + name, contents);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "output error: %s\n", e.what());
        return kExitConfig;
    }
    if (res.report.contains("error"))
        std::fprintf(stderr, "%s\n", res.report["error"].dump().c_str());
    return res.exit_code;
}

}  // namespace conjlab::cli
