#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace twinfuse {

enum class Polarity { distance, similarity };

/// Probes x gallery-identities scores for one system.
struct ScoreMatrix {
    std::vector<std::string> probe_ids;
    std::vector<std::string> gallery_ids;
    Eigen::MatrixXd scores;  // P x G
    Polarity polarity = Polarity::distance;
};

enum class NormScope { per_row, global };

/// probe id -> gallery identity
using IdentityMap = std::unordered_map<std::string, std::string>;

/// Min-max normalizes to [0, 1] (per probe row by default) and flips
/// distances into similarities. Constant rows map to 0.5 everywhere.
ScoreMatrix to_similarity(const ScoreMatrix& m, NormScope scope = NormScope::per_row);

/// Elementwise weighted sum of two similarity matrices with identical id
/// layout. Throws IdMismatch, BadWeights, InvalidArgument (non-similarity
/// input).
ScoreMatrix fuse(const ScoreMatrix& speech, const ScoreMatrix& ear,
                 double w_speech = 0.85, double w_ear = 0.15);

/// rates[k-1] = fraction of probes whose true identity ranks within top k.
struct CmcCurve {
    Eigen::VectorXd rates;  // length G, non-decreasing, ends at 1.0

    double rank(int k) const { return rates[k - 1]; }
};

/// Rank of the true identity = 1 + number of gallery identities scoring
/// >= the true identity's score (ties count against it).
/// Throws UnknownIdentity when a probe's truth is missing from the gallery.
CmcCurve cmc(const ScoreMatrix& similarity, const IdentityMap& truth);

/// Identification rates at ranks 1-5, percent, for the three systems.
struct RankTable {
    struct Row {
        std::string system;
        std::array<double, 5> percent;
    };
    std::array<Row, 3> rows;  // speech, ear, fused
};

RankTable rank_table(const CmcCurve& speech, const CmcCurve& ear, const CmcCurve& fused);

/// Binary twin protocol: per probe the row is restricted to {true identity,
/// co-twin}; the decision is correct only when the true identity scores
/// strictly higher. Throws UnknownIdentity / MissingTwin.
double twin_one_one(const ScoreMatrix& similarity, const IdentityMap& truth,
                    const IdentityMap& twin_map);

// -- report emission -----------------------------------------------------------

void write_score_csv(const std::filesystem::path& path, const ScoreMatrix& m);
void write_cmc_csv(const std::filesystem::path& path, const std::string& system,
                   const CmcCurve& curve);
void write_rank_table_csv(const std::filesystem::path& path, const RankTable& table,
                          const std::array<double, 3>& one_one_percent);

/// Aligned plain-text table: three rank rows plus the three one-one rows.
std::string format_rank_table(const RankTable& table,
                              const std::array<double, 3>& one_one_percent);

} // namespace twinfuse
