#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "twinfuse/config.hpp"
#include "twinfuse/errors.hpp"
#include "twinfuse/pipeline.hpp"

namespace {

struct CliOverrides {
    std::vector<std::pair<std::string, std::string>> values;

    void apply(twinfuse::PipelineConfig& cfg) const {
        for (const auto& [key, value] : values) twinfuse::set_config_value(cfg, key, value);
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twinfuse - twin identification from speech and ear images"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides overrides;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        cmd->add_option_function<std::string>(
               "--manifest",
               [&](const std::string& v) { overrides.values.emplace_back("manifest", v); },
               "cohort manifest path")
            ->type_name("PATH");
        cmd->add_option_function<std::string>(
               "--store", [&](const std::string& v) { overrides.values.emplace_back("store", v); },
               "feature store directory")
            ->type_name("DIR");
        cmd->add_option_function<std::string>(
               "--set",
               [&](const std::string& v) {
                   const auto eq = v.find('=');
                   if (eq == std::string::npos)
                       throw CLI::ValidationError("--set", "expected key=value");
                   overrides.values.emplace_back(v.substr(0, eq), v.substr(eq + 1));
               },
               "override any config key (repeatable), e.g. --set speech.n_fft=1024")
            ->type_name("KEY=VALUE");
    };

    auto* synth = app.add_subcommand("synth", "generate the deterministic synthetic cohort");
    int n_pairs = 0;
    synth->add_option("--pairs", n_pairs, "number of twin pairs")
        ->required()
        ->check(CLI::PositiveNumber);
    std::uint64_t seed = 0;
    auto* seed_opt = synth->add_option("--seed", seed, "cohort seed");
    double twin_gap = 0.0;
    auto* gap_opt = synth->add_option("--twin-gap", twin_gap, "twin similarity knob in [0,1]");
    add_common(synth);

    auto* extract = app.add_subcommand("extract", "extract features into the store");
    std::string modality;
    extract->add_option("--modality", modality, "speech or ear")
        ->required()
        ->check(CLI::IsMember({"speech", "ear"}));
    add_common(extract);

    auto* match = app.add_subcommand("match", "fit dcva and compute distance matrices");
    add_common(match);

    auto* evaluate = app.add_subcommand("evaluate", "normalize, fuse and report cmc/rank tables");
    std::string report_dir;
    auto* out_opt = evaluate->add_option("--out", report_dir, "report output directory");
    double w_speech = 0.0, w_ear = 0.0;
    auto* ws_opt = evaluate->add_option("--w-speech", w_speech, "speech fusion weight");
    auto* we_opt = evaluate->add_option("--w-ear", w_ear, "ear fusion weight");
    std::string norm;
    auto* norm_opt = evaluate->add_option("--norm", norm, "normalization scope: row or global")
                         ->check(CLI::IsMember({"row", "global"}));
    add_common(evaluate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        twinfuse::PipelineConfig cfg;
        if (!config_path.empty()) cfg = twinfuse::load_config(config_path);
        overrides.apply(cfg);
        if (*seed_opt) cfg.seed = seed;
        if (*gap_opt) cfg.twin_gap = twin_gap;
        if (*out_opt) cfg.report_dir = report_dir;
        if (*ws_opt) cfg.fusion.w_speech = w_speech;
        if (*we_opt) cfg.fusion.w_ear = w_ear;
        if (*norm_opt)
            cfg.fusion.scope =
                norm == "row" ? twinfuse::NormScope::per_row : twinfuse::NormScope::global;

        if (synth->parsed()) {
            twinfuse::run_synth(cfg, n_pairs, std::cout);
        } else if (extract->parsed()) {
            twinfuse::run_extract(cfg, modality, std::cout);
        } else if (match->parsed()) {
            twinfuse::run_match(cfg, std::cout);
        } else if (evaluate->parsed()) {
            twinfuse::run_evaluate(cfg, std::cout);
        }
        return 0;
    } catch (const twinfuse::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
