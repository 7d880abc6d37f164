// Command-line front end: one subcommand per experiment kind plus named presets.
// Exit codes: 0 success, 2 configuration error, 3 numeric/resource error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "manneville/manneville.hpp"

namespace mv = manneville;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct options {
    std::string family;
    std::string params;
    double z = 0.0;
    std::uint64_t n_max = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 42;
    int checkpoints = 20;
    std::uint64_t N = 1;
    std::uint64_t K = 1000;
    unsigned threads = 0;
    std::string out = ".";
    std::string preset_name;
    bool list_presets = false;
};

// --family names the kind; --params carries the remaining JSON parameters.
mv::json family_json(const options& o)
{
    mv::json j = o.params.empty() ? mv::json::object() : mv::json::parse(o.params);
    if (!j.is_object()) throw std::invalid_argument("--params must be a JSON object");
    if (!o.family.empty()) j["kind"] = o.family;
    return j;
}

void add_family(CLI::App* sub, options& o)
{
    sub->add_option("--family", o.family, "sequence kind: power, geometric, log_corrected, inverse_log");
    sub->add_option("--params", o.params, R"(JSON parameters, e.g. {"alpha":0.5,"c":0.5})");
    sub->add_option("--z", o.z, "Manneville exponent; implies power with alpha = 1/(z-1)");
}

void add_common(CLI::App* sub, options& o)
{
    sub->add_option("--seed", o.seed, "64-bit seed");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores; results do not depend on it)");
}

void add_run(CLI::App* sub, options& o)
{
    sub->add_option("--n,--n-max", o.n_max, "horizon n_max");
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    sub->add_option("--checkpoints", o.checkpoints, "checkpoints per decade");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Intermittent-map symbolic dynamics, renewal counts and compression estimates"};
    app.require_subcommand(1);
    options o;

    auto* validate = app.add_subcommand("validate", "check a sequence family up to depth K");
    add_family(validate, o);
    add_common(validate, o);
    validate->add_option("--K", o.K, "depth");

    auto* ladder = app.add_subcommand("ladder", "preimage ladder x_k of the Manneville map");
    ladder->add_option("--z", o.z, "exponent z > 1")->required();
    ladder->add_option("--K", o.K, "depth");
    add_common(ladder, o);

    auto* spectral = app.add_subcommand("spectral", "entropy and Parry measure of the finite structure matrix");
    spectral->add_option("--N", o.N, "matrix has N + 1 states");
    add_common(spectral, o);

    auto* renewal = app.add_subcommand("renewal", "exact and simulated renewal counts E[N_n]");
    add_family(renewal, o);
    add_run(renewal, o);
    add_common(renewal, o);

    auto* aic = app.add_subcommand("aic", "ensemble compression estimates and bounds");
    add_family(aic, o);
    add_run(aic, o);
    add_common(aic, o);

    auto* preset = app.add_subcommand("preset", "run a named reproduction preset");
    preset->add_option("name", o.preset_name, "preset name");
    preset->add_flag("--list", o.list_presets, "list presets and exit");
    add_run(preset, o);
    add_common(preset, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        mv::experiment_config cfg;
        auto* chosen = app.get_subcommands().front();
        if (chosen == preset) {
            if (o.list_presets) {
                for (const auto& p : mv::preset_table()) std::cout << p.name << "\t" << p.description << "\n";
                return 0;
            }
            if (o.preset_name.empty()) throw std::invalid_argument("preset needs a name (see --list)");
            cfg = mv::preset(o.preset_name);
            if (o.n_max) cfg.n_max = o.n_max;
            if (o.trials) cfg.trials = o.trials;
            if (preset->count("--seed")) cfg.seed = o.seed;
            if (preset->count("--checkpoints")) cfg.checkpoints_per_decade = o.checkpoints;
        } else {
            cfg.kind = mv::parse_experiment_kind(chosen->get_name());
            if (const auto* zopt = chosen->get_option_no_throw("--z"); zopt && zopt->count()) cfg.z = o.z;
            if (!o.family.empty() || !o.params.empty()) cfg.family = family_json(o);
            if (o.n_max) cfg.n_max = o.n_max;
            if (o.trials) cfg.trials = o.trials;
            cfg.seed = o.seed;
            cfg.checkpoints_per_decade = o.checkpoints;
            cfg.N = o.N;
            cfg.K = o.K;
        }
        cfg.threads = o.threads;

        const auto files = mv::run_experiment(cfg, o.out);
        if (cfg.kind == mv::experiment_kind::spectral) std::cout << files.output.summary.dump(2) << "\n";
        std::cerr << "wrote " << files.csv.string() << " and " << files.metadata.string() << "\n";
        return 0;
    } catch (const mv::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const mv::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const mv::unsupported_regime& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const mv::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
}
