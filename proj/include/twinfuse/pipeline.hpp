#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "twinfuse/config.hpp"
#include "twinfuse/fusion.hpp"

namespace twinfuse {

/// Evaluation artifacts produced by run_evaluate.
struct EvalReport {
    CmcCurve speech, ear, fused;
    RankTable table;
    std::array<double, 3> one_one_percent;  // speech, ear, fused
};

/// synth: writes the cohort next to cfg.manifest and the manifest itself.
void run_synth(const PipelineConfig& cfg, int n_pairs, std::ostream& log);

/// extract: one store entry per training/test item of the given modality
/// ("speech" or "ear"). Parallel across subjects, capped by TWINFUSE_THREADS.
void run_extract(const PipelineConfig& cfg, const std::string& modality, std::ostream& log);

/// match: fits DCVA on the ear gallery, computes both probes x identities
/// distance matrices and stores them under score_matrix/{speech,ear}.
void run_match(const PipelineConfig& cfg, std::ostream& log);

/// evaluate: normalizes, fuses, writes cmc_speech.csv / cmc_ear.csv /
/// cmc_fused.csv, rank_table.csv and rank_table.txt under cfg.report_dir.
EvalReport run_evaluate(const PipelineConfig& cfg, std::ostream& log);

} // namespace twinfuse
