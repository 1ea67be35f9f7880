#include "twinfuse/dtw.hpp"

#include <cmath>
#include <limits>

#include "twinfuse/errors.hpp"

namespace twinfuse {

namespace {

void check_subset(const std::vector<int>& subset, Eigen::Index n_ceps) {
    if (subset.empty()) throw InvalidArgument("coefficient subset must be non-empty");
    for (int idx : subset)
        if (idx < 0 || idx >= n_ceps)
            throw InvalidArgument("coefficient index " + std::to_string(idx) +
                                  " out of range for " + std::to_string(n_ceps) + " cepstra");
}

// Column slice of the selected coefficients, frames stay rows.
Eigen::MatrixXd select_coeffs(const Eigen::Ref<const Eigen::MatrixXd>& frames,
                              const std::vector<int>& subset) {
    Eigen::MatrixXd out(frames.rows(), static_cast<Eigen::Index>(subset.size()));
    for (std::size_t j = 0; j < subset.size(); ++j)
        out.col(static_cast<Eigen::Index>(j)) = frames.col(subset[j]);
    return out;
}

} // namespace

double local_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b,
                      const std::vector<int>& coeff_subset) {
    if (a.size() != b.size()) throw InvalidArgument("frames of different width");
    check_subset(coeff_subset, a.size());
    double acc = 0.0;
    for (int idx : coeff_subset) {
        const double d = a[idx] - b[idx];
        acc += d * d;
    }
    return std::sqrt(acc);
}

Eigen::MatrixXd resample_frames(const Eigen::Ref<const Eigen::MatrixXd>& frames,
                                Eigen::Index n_frames) {
    const auto t = frames.rows();
    if (t == 0 || n_frames < 1) throw EmptySequence("cannot resample an empty sequence");
    Eigen::MatrixXd out(n_frames, frames.cols());
    if (n_frames == 1) {
        out.row(0) = frames.row(0);
        return out;
    }
    for (Eigen::Index i = 0; i < n_frames; ++i) {
        const double pos = static_cast<double>(i) * (t - 1) / static_cast<double>(n_frames - 1);
        const auto lo = static_cast<Eigen::Index>(pos);
        const double frac = pos - static_cast<double>(lo);
        if (frac == 0.0 || lo + 1 >= t)
            out.row(i) = frames.row(lo);
        else
            out.row(i) = (1.0 - frac) * frames.row(lo) + frac * frames.row(lo + 1);
    }
    return out;
}

double dtw_distance(const Eigen::Ref<const Eigen::MatrixXd>& a,
                    const Eigen::Ref<const Eigen::MatrixXd>& b,
                    const DtwConfig& cfg) {
    if (a.rows() == 0 || b.rows() == 0) throw EmptySequence("dtw on an empty sequence");
    if (a.cols() != b.cols()) throw InvalidArgument("sequences of different frame width");
    check_subset(cfg.coeff_subset, a.cols());

    Eigen::MatrixXd at = select_coeffs(a, cfg.coeff_subset);
    Eigen::MatrixXd bt = select_coeffs(b, cfg.coeff_subset);
    if (cfg.equalize) {
        const Eigen::Index len = std::max(at.rows(), bt.rows());
        at = resample_frames(at, len);
        bt = resample_frames(bt, len);
    }

    const auto n = at.rows(), m = bt.rows();
    auto local = [&](Eigen::Index i, Eigen::Index j) {
        return (at.row(i) - bt.row(j)).norm();
    };

    // Rolling two-row DP over the Eq-style recurrence.
    Eigen::VectorXd prev(m), cur(m);
    prev[0] = local(0, 0);
    for (Eigen::Index j = 1; j < m; ++j) prev[j] = prev[j - 1] + local(0, j);
    for (Eigen::Index i = 1; i < n; ++i) {
        cur[0] = prev[0] + local(i, 0);
        for (Eigen::Index j = 1; j < m; ++j)
            cur[j] = std::min({prev[j - 1], prev[j], cur[j - 1]}) + local(i, j);
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

std::vector<std::pair<std::string, double>>
match_speech(const MfccSequence& probe, const std::vector<SpeechTemplate>& gallery,
             const DtwConfig& cfg) {
    if (gallery.empty()) throw EmptyGallery("speech gallery is empty");
    std::vector<std::pair<std::string, double>> result;
    result.reserve(gallery.size());
    for (const auto& tmpl : gallery) {
        if (tmpl.sequences.empty())
            throw InvalidArgument("template " + tmpl.subject_id + " has no training sequences");
        double best = std::numeric_limits<double>::infinity();
        for (const auto& seq : tmpl.sequences)
            best = std::min(best, dtw_distance(probe, seq, cfg));
        result.emplace_back(tmpl.subject_id, best);
    }
    return result;
}

} // namespace twinfuse
