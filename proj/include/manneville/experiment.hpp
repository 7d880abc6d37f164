#pragma once

// Seeded experiment runs behind the command-line tool. Each run yields a CSV
// data table and a JSON metadata record; the CSV depends only on the config.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aic.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "maps.hpp"
#include "renewal.hpp"
#include "spectral.hpp"
#include "symbolic.hpp"

namespace manneville {

inline constexpr const char* library_version = "0.1.0";

enum class experiment_kind { validate, ladder, spectral, renewal, aic };

inline std::string to_string(experiment_kind k)
{
    switch (k) {
    case experiment_kind::validate: return "validate";
    case experiment_kind::ladder: return "ladder";
    case experiment_kind::spectral: return "spectral";
    case experiment_kind::renewal: return "renewal";
    case experiment_kind::aic: return "aic";
    }
    return "unknown";
}

inline experiment_kind parse_experiment_kind(const std::string& s)
{
    for (auto k : {experiment_kind::validate, experiment_kind::ladder, experiment_kind::spectral,
                   experiment_kind::renewal, experiment_kind::aic})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

struct experiment_config {
    experiment_kind kind = experiment_kind::aic;
    std::string name;                       // output file stem; defaults to the kind
    std::optional<json> family;             // sequence spec
    std::optional<double> z;                // Manneville exponent; implies Power with alpha = 1/(z-1)
    std::uint64_t n_max = 100000;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 42;
    int checkpoints_per_decade = 20;
    std::uint64_t N = 1;                    // spectral: structure matrix size N + 1
    std::uint64_t K = 1000;                 // validate/ladder depth
    unsigned threads = 0;
};

/// Power sequence equivalent to the Manneville map with exponent z.
inline epsilon_sequence sequence_for_exponent(double z)
{
    if (!(z > 1.0)) throw std::invalid_argument("z must exceed 1");
    return epsilon_sequence::power(1.0 / (z - 1.0), 0.5);
}

inline json to_json(const experiment_config& c)
{
    json j{{"kind", to_string(c.kind)},
           {"name", c.name},
           {"n_max", c.n_max},
           {"trials", c.trials},
           {"seed", c.seed},
           {"checkpoints_per_decade", c.checkpoints_per_decade},
           {"N", c.N},
           {"K", c.K}};
    if (c.family) j["family"] = *c.family;
    if (c.z) j["z"] = *c.z;
    return j;
}

/// The sequence a config refers to: --z wins over --family.
inline epsilon_sequence resolve_sequence(const experiment_config& c)
{
    if (c.z) return sequence_for_exponent(*c.z);
    if (c.family) return sequence_from_json(*c.family);
    throw std::invalid_argument("a family (or z) is required for " + to_string(c.kind));
}

/// Depth used to screen a family before any run.
inline constexpr std::int64_t screening_depth = 1000;

inline void check_config(const experiment_config& c)
{
    if (c.n_max < 1) throw std::invalid_argument("n_max must be positive");
    if (c.trials < 1) throw std::invalid_argument("trials must be positive");
    if (c.checkpoints_per_decade < 1) throw std::invalid_argument("checkpoints must be positive");
    if (c.N < 1) throw std::invalid_argument("N must be positive");
    if (c.K < 2) throw std::invalid_argument("K must be at least 2");
    if (c.kind == experiment_kind::renewal || c.kind == experiment_kind::aic) {
        const auto seq = resolve_sequence(c);
        const auto report = validate(seq, screening_depth);
        if (!report.ok())
            throw std::invalid_argument("family fails " + to_string(*report.failed_condition) + " at k = " +
                                        std::to_string(*report.first_failure));
    }
    if (c.kind == experiment_kind::ladder && !c.z) throw std::invalid_argument("ladder needs z");
}

struct experiment_output {
    std::string csv;
    json summary;
};

namespace detail {

inline experiment_output run_validate(const experiment_config& c)
{
    const auto seq = resolve_sequence(c);
    const auto r = validate(seq, static_cast<std::int64_t>(c.K));
    csv_table t({"K", "positive", "decreasing", "ratio_below_one", "first_failure", "failed_condition"});
    t.row(c.K, std::uint64_t{r.positive}, std::uint64_t{r.decreasing}, std::uint64_t{r.ratio_below_one},
          r.first_failure ? std::to_string(*r.first_failure) : std::string(),
          r.failed_condition ? to_string(*r.failed_condition) : std::string());
    json s{{"ok", r.ok()}, {"family", to_json(seq)}};
    return {t.str(), s};
}

inline experiment_output run_ladder(const experiment_config& c)
{
    const preimage_ladder ladder(*c.z, c.K);
    csv_table t({"k", "x_k", "residual"});
    for (std::size_t k = 0; k <= c.K; ++k) t.row(k, ladder.point(static_cast<std::int64_t>(k)), ladder.residual(k));
    return {t.str(), json{{"z", *c.z}, {"x_0", ladder.point(0)}}};
}

inline experiment_output run_spectral(const experiment_config& c)
{
    const auto m = build_transition_matrix(c.N);
    const auto right = largest_eigenvalue(m);
    const auto mm = parry_measure(m);
    const auto h = markov_ks_entropy(mm);
    csv_table t({"i", "stationary", "right_vector"});
    for (std::size_t i = 0; i < m.size(); ++i) t.row(i, mm.stationary[i], right.vector[i]);
    json s{{"N", c.N},
           {"lambda_max", right.lambda},
           {"topological_entropy", std::log(right.lambda)},
           {"parry_stationary", mm.stationary},
           {"ks_entropy_nats", h.nats},
           {"ks_entropy_bits", h.bits}};
    return {t.str(), s};
}

inline double feller_or_nan(const renewal_model& model, double n)
{
    try {
        return feller_prediction(model, n).value;
    } catch (const unsupported_regime&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

inline experiment_output run_renewal(const experiment_config& c)
{
    const auto model = make_renewal_model(resolve_sequence(c));
    const auto cps = log_checkpoints(1, c.n_max, c.checkpoints_per_decade);
    const auto sim = simulate_counts(model, c.n_max, c.trials, c.seed, cps, c.threads);
    std::optional<exact_counts> exact;
    if (c.n_max <= max_exact_horizon) exact = exact_mean_counts(model, c.n_max);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::string regime = to_string(model.regime);
    csv_table t({"n", "exact_EN", "mc_mean", "mc_stderr", "feller_pred", "regime", "u_n"});
    for (std::size_t i = 0; i < sim.checkpoints.size(); ++i) {
        const auto n = sim.checkpoints[i];
        t.row(n, exact ? exact->expected[n] : nan, sim.mean[i], sim.std_error[i],
              feller_or_nan(model, static_cast<double>(n)), regime, exact ? exact->u[n] : nan);
    }
    json s{{"family", to_json(model.law.seq)},
           {"regime", to_string(model.regime)},
           {"m0", model.law.moments.mean},
           {"second_moment", model.law.moments.second_moment}};
    if (exact) s["u_limit"] = exact->u_limit;
    return {t.str(), s};
}

inline experiment_output run_aic(const experiment_config& c)
{
    const auto model = make_renewal_model(resolve_sequence(c));
    const auto cps = log_checkpoints(1, c.n_max, c.checkpoints_per_decade);
    const auto ens = ensemble_mean_aic(model, cps, c.trials, c.seed, c.threads);
    csv_table t({"n", "mean_N", "mean_est", "mean_lower", "mean_upper", "feller_pred"});
    std::vector<std::pair<double, double>> pts_N, pts_est;
    for (const auto& r : ens.rows) {
        t.row(r.n, r.mean_N, r.mean_estimate, r.mean_lower, r.mean_upper,
              feller_or_nan(model, static_cast<double>(r.n)));
        if (r.mean_N > 0) pts_N.emplace_back(static_cast<double>(r.n), r.mean_N);
        pts_est.emplace_back(static_cast<double>(r.n), r.mean_estimate);
    }
    json s{{"family", to_json(model.law.seq)},
           {"regime", to_string(model.regime)},
           {"sandwich_checks", ens.sandwich_checks},
           {"sandwich_violations", ens.sandwich_violations}};
    // exponent over the top two decades, when available
    const double hi = static_cast<double>(c.n_max);
    const double lo = std::max(1.0, hi / 100.0);
    try {
        s["exponent_N"] = scaling_fit(pts_N, lo, hi).exponent;
        s["exponent_estimate"] = scaling_fit(pts_est, lo, hi).exponent;
        s["fit_window"] = {lo, hi};
    } catch (const std::domain_error&) {
    }
    return {t.str(), s};
}

} // namespace detail

/// Runs the experiment in memory. Throws on invalid configs.
inline experiment_output run_experiment_in_memory(const experiment_config& c)
{
    check_config(c);
    switch (c.kind) {
    case experiment_kind::validate: return detail::run_validate(c);
    case experiment_kind::ladder: return detail::run_ladder(c);
    case experiment_kind::spectral: return detail::run_spectral(c);
    case experiment_kind::renewal: return detail::run_renewal(c);
    case experiment_kind::aic: return detail::run_aic(c);
    }
    throw std::logic_error("unhandled experiment kind");
}

struct experiment_files {
    std::filesystem::path csv;
    std::filesystem::path metadata;
    experiment_output output;
};

/// Runs and writes <out>/<stem>.csv and <out>/<stem>.json.
inline experiment_files run_experiment(const experiment_config& c, const std::filesystem::path& out_dir)
{
    const auto start = std::chrono::steady_clock::now();
    auto output = run_experiment_in_memory(c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::filesystem::create_directories(out_dir);
    const std::string stem = c.name.empty() ? to_string(c.kind) : c.name;
    experiment_files files{out_dir / (stem + ".csv"), out_dir / (stem + ".json"), std::move(output)};

    json meta{{"config", to_json(c)},
              {"version", library_version},
              {"seed", c.seed},
              {"wall_time_seconds", wall},
              {"data", files.csv.filename().string()},
              {"result", files.output.summary}};
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw resource_error("cannot open " + p.string() + " for writing");
        f << text;
        if (!f) throw resource_error("write failed for " + p.string());
    };
    write(files.csv, files.output.csv);
    write(files.metadata, meta.dump(2) + "\n");
    return files;
}

struct preset_entry {
    std::string name;
    std::string description;
    experiment_config config;
};

inline const std::vector<preset_entry>& preset_table()
{
    static const std::vector<preset_entry> table = [] {
        auto aic = [](std::string name, json family, std::uint64_t n_max = 1'000'000) {
            experiment_config c;
            c.kind = experiment_kind::aic;
            c.name = std::move(name);
            c.family = std::move(family);
            c.n_max = n_max;
            c.trials = 1000;
            c.seed = 42;
            return c;
        };
        auto aic_z = [&](std::string name, double z) {
            auto c = aic(std::move(name), json());
            c.family.reset();
            c.z = z;
            return c;
        };
        return std::vector<preset_entry>{
            {"example1-alpha05", "Power alpha=0.5: AIC ~ n^0.5 (null recurrent)",
             aic("example1-alpha05", json{{"kind", "power"}, {"alpha", 0.5}})},
            {"example1-alpha15", "Power alpha=1.5: AIC ~ n (ergodic, infinite variance)",
             aic("example1-alpha15", json{{"kind", "power"}, {"alpha", 1.5}})},
            {"example2-geometric", "Geometric a=2: AIC ~ n",
             aic("example2-geometric", json{{"kind", "geometric"}})},
            {"example3-logcorrected", "Log-corrected alpha=1, beta=2 (finite mean, infinite variance)",
             aic("example3-logcorrected", json{{"kind", "log_corrected"}, {"alpha", 1.0}, {"beta", 2.0}})},
            {"example4-invlog", "Inverse log: AIC grows slower than any power",
             aic("example4-invlog", json{{"kind", "inverse_log"}}, 10'000'000)},
            {"corollary2-z3", "Manneville z=3 (alpha=0.5): AIC ~ n^0.5", aic_z("corollary2-z3", 3.0)},
            {"corollary2-z15", "Manneville z=1.5 (alpha=2): AIC ~ n", aic_z("corollary2-z15", 1.5)},
        };
    }();
    return table;
}

inline experiment_config preset(const std::string& name)
{
    for (const auto& p : preset_table())
        if (p.name == name) return p.config;
    std::string names;
    for (const auto& p : preset_table()) names += (names.empty() ? "" : ", ") + p.name;
    throw std::invalid_argument("unknown preset '" + name + "'; available: " + names);
}

} // namespace manneville
