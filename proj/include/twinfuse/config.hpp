#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "twinfuse/dtw.hpp"
#include "twinfuse/fusion.hpp"
#include "twinfuse/gabor.hpp"
#include "twinfuse/mfcc.hpp"

namespace twinfuse {

struct EarConfig {
    GaborBankConfig bank;
    int downsample = 8;
    bool mirror = true;
    int image_width = 90;
    int image_height = 70;
};

struct FusionConfig {
    double w_speech = 0.85;
    double w_ear = 0.15;
    NormScope scope = NormScope::per_row;
};

/// Every knob of the pipeline; defaults mirror the reference setup
/// (30/10 ms frames, 20 filters over 300-3700 Hz, 13 cepstra, 4-coefficient
/// DTW subset, 32x10 Gabor bank, factor-8 downsampling, 0.85/0.15 weights).
struct PipelineConfig {
    std::filesystem::path manifest = "cohort/manifest.txt";
    std::filesystem::path store = "store";
    std::filesystem::path report_dir = ".";
    std::uint64_t seed = 7;
    double twin_gap = 0.2;
    int sample_rate = 8000;
    FrameConfig speech;
    DtwConfig dtw;
    EarConfig ear;
    FusionConfig fusion;
};

/// Applies one `section.key=value` setting. Throws ConfigError on unknown
/// keys or unparsable values.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Loads a flat key=value file ('#' starts a comment). Throws ConfigError
/// with the offending line number.
PipelineConfig load_config(const std::filesystem::path& path);

} // namespace twinfuse
