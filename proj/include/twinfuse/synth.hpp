#pragma once

#include <cstdint>
#include <filesystem>

#include "twinfuse/manifest.hpp"

namespace twinfuse {

/// Knobs for the deterministic synthetic twin cohort.
///
/// Speech: each subject's utterances are a sum of three sinusoids whose
/// frequencies are drawn once per twin pair and then perturbed per subject;
/// twin_gap scales the per-subject perturbation (twins end up closer to each
/// other than to strangers). Ears: each pair shares a band-limited noise
/// texture, each subject adds a perturbation of amplitude proportional to
/// twin_gap; the left image is the mirrored subject texture.
struct SynthConfig {
    std::uint64_t seed = 7;
    int n_pairs = 1;
    double twin_gap = 0.2;
    int sample_rate = 8000;
    int image_width = 90;
    int image_height = 70;
};

/// Writes 2 * n_pairs subjects' WAV and PPM files plus `manifest.txt` under
/// out_dir and returns the parsed manifest. Output bytes are a pure function
/// of the config. Throws IoError, InvalidArgument.
Manifest generate_synthetic_cohort(const SynthConfig& cfg,
                                   const std::filesystem::path& out_dir);

} // namespace twinfuse
