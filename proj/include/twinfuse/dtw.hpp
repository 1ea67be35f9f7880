#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twinfuse/mfcc.hpp"

namespace twinfuse {

struct DtwConfig {
    std::vector<int> coeff_subset = {0, 1, 2, 3};
    bool equalize = true;
};

/// Training utterances of one enrolled identity.
struct SpeechTemplate {
    std::string subject_id;
    std::vector<MfccSequence> sequences;
};

/// Euclidean distance between two frames over the selected coefficients.
double local_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b,
                      const std::vector<int>& coeff_subset);

/// Resamples each column (cepstral track) linearly in time to n_frames rows.
Eigen::MatrixXd resample_frames(const Eigen::Ref<const Eigen::MatrixXd>& frames,
                                Eigen::Index n_frames);

/// Accumulated DTW cost between two frame matrices (rows = frames):
///   D(i,j) = min(D(i-1,j-1), D(i-1,j), D(i,j-1)) + d(a_i, b_j)
/// with the boundary row/column accumulated. When cfg.equalize is set both
/// inputs are first resampled to the longer length. Throws EmptySequence.
double dtw_distance(const Eigen::Ref<const Eigen::MatrixXd>& a,
                    const Eigen::Ref<const Eigen::MatrixXd>& b,
                    const DtwConfig& cfg);

inline double dtw_distance(const MfccSequence& a, const MfccSequence& b, const DtwConfig& cfg) {
    return dtw_distance(a.frames, b.frames, cfg);
}

/// Per-identity distance: the minimum DTW cost over the identity's training
/// sequences. Order follows the gallery. Throws EmptyGallery.
std::vector<std::pair<std::string, double>>
match_speech(const MfccSequence& probe, const std::vector<SpeechTemplate>& gallery,
             const DtwConfig& cfg);

} // namespace twinfuse
