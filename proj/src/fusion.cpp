#include "twinfuse/fusion.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "twinfuse/errors.hpp"

namespace twinfuse {

namespace {

void check_finite(const ScoreMatrix& m) {
    if (!m.scores.allFinite()) throw InvalidArgument("score matrix contains non-finite entries");
    if (m.scores.rows() != static_cast<Eigen::Index>(m.probe_ids.size()) ||
        m.scores.cols() != static_cast<Eigen::Index>(m.gallery_ids.size()))
        throw InvalidArgument("score matrix shape disagrees with its id lists");
}

Eigen::Index gallery_index(const ScoreMatrix& m, const std::string& id) {
    for (std::size_t g = 0; g < m.gallery_ids.size(); ++g)
        if (m.gallery_ids[g] == id) return static_cast<Eigen::Index>(g);
    return -1;
}

// Maps a row (or the whole matrix) onto [0,1]; constant stretches become 0.5.
void minmax_inplace(Eigen::Ref<Eigen::MatrixXd> block) {
    const double lo = block.minCoeff(), hi = block.maxCoeff();
    if (hi == lo)
        block.setConstant(0.5);
    else
        block = (block.array() - lo) / (hi - lo);
}

std::string fmt(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    return os;
}

} // namespace

ScoreMatrix to_similarity(const ScoreMatrix& m, NormScope scope) {
    check_finite(m);
    ScoreMatrix out = m;
    if (scope == NormScope::per_row) {
        for (Eigen::Index p = 0; p < out.scores.rows(); ++p)
            minmax_inplace(out.scores.row(p));
    } else {
        minmax_inplace(out.scores);
    }
    if (m.polarity == Polarity::distance)
        out.scores = 1.0 - out.scores.array();
    out.polarity = Polarity::similarity;
    return out;
}

ScoreMatrix fuse(const ScoreMatrix& speech, const ScoreMatrix& ear,
                 double w_speech, double w_ear) {
    if (speech.polarity != Polarity::similarity || ear.polarity != Polarity::similarity)
        throw InvalidArgument("fuse expects similarity-polarity inputs");
    check_finite(speech);
    check_finite(ear);
    if (speech.probe_ids != ear.probe_ids || speech.gallery_ids != ear.gallery_ids)
        throw IdMismatch("speech and ear matrices disagree on probe/gallery ids");
    if (!(w_speech >= 0.0 && w_ear >= 0.0) || std::abs(w_speech + w_ear - 1.0) > 1e-9)
        throw BadWeights("weights must be non-negative and sum to 1");

    ScoreMatrix out = speech;
    out.scores = w_speech * speech.scores + w_ear * ear.scores;
    return out;
}

CmcCurve cmc(const ScoreMatrix& m, const IdentityMap& truth) {
    check_finite(m);
    const auto p_count = m.scores.rows();
    const auto g_count = m.scores.cols();
    if (p_count == 0 || g_count == 0) throw InvalidArgument("empty score matrix");

    Eigen::VectorXd counts = Eigen::VectorXd::Zero(g_count);
    for (Eigen::Index p = 0; p < p_count; ++p) {
        const auto it = truth.find(m.probe_ids[static_cast<std::size_t>(p)]);
        if (it == truth.end())
            throw UnknownIdentity("no truth entry for probe " +
                                  m.probe_ids[static_cast<std::size_t>(p)]);
        const auto g_true = gallery_index(m, it->second);
        if (g_true < 0) throw UnknownIdentity("identity " + it->second + " not in gallery");

        const double s_true = m.scores(p, g_true);
        Eigen::Index rank = 1;
        for (Eigen::Index g = 0; g < g_count; ++g)
            if (g != g_true && m.scores(p, g) >= s_true) ++rank;  // ties count against truth
        counts[rank - 1] += 1.0;
    }

    CmcCurve curve;
    curve.rates.resize(g_count);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < g_count; ++k) {
        acc += counts[k];
        curve.rates[k] = acc / static_cast<double>(p_count);
    }
    return curve;
}

RankTable rank_table(const CmcCurve& speech, const CmcCurve& ear, const CmcCurve& fused) {
    const CmcCurve* curves[3] = {&speech, &ear, &fused};
    const char* names[3] = {"Speech", "Ear", "Speech + Ear (matching score fusion)"};
    RankTable table;
    for (int s = 0; s < 3; ++s) {
        if (curves[s]->rates.size() < 5)
            throw InvalidArgument("rank table needs curves covering rank 5");
        table.rows[s].system = names[s];
        for (int k = 0; k < 5; ++k) table.rows[s].percent[k] = 100.0 * curves[s]->rates[k];
    }
    return table;
}

double twin_one_one(const ScoreMatrix& m, const IdentityMap& truth,
                    const IdentityMap& twin_map) {
    check_finite(m);
    const auto p_count = m.scores.rows();
    if (p_count == 0) throw InvalidArgument("empty score matrix");

    Eigen::Index correct = 0;
    for (Eigen::Index p = 0; p < p_count; ++p) {
        const auto& probe_id = m.probe_ids[static_cast<std::size_t>(p)];
        const auto t = truth.find(probe_id);
        if (t == truth.end()) throw UnknownIdentity("no truth entry for probe " + probe_id);
        const auto w = twin_map.find(probe_id);
        if (w == twin_map.end()) throw MissingTwin("no twin entry for probe " + probe_id);

        const auto g_true = gallery_index(m, t->second);
        if (g_true < 0) throw UnknownIdentity("identity " + t->second + " not in gallery");
        const auto g_twin = gallery_index(m, w->second);
        if (g_twin < 0) throw MissingTwin("twin " + w->second + " not in gallery");

        if (m.scores(p, g_true) > m.scores(p, g_twin)) ++correct;  // ties are errors
    }
    return static_cast<double>(correct) / static_cast<double>(p_count);
}

void write_score_csv(const std::filesystem::path& path, const ScoreMatrix& m) {
    auto os = open_out(path);
    os << "probe_id";
    for (const auto& g : m.gallery_ids) os << "," << g;
    os << "\n";
    for (Eigen::Index p = 0; p < m.scores.rows(); ++p) {
        os << m.probe_ids[static_cast<std::size_t>(p)];
        for (Eigen::Index g = 0; g < m.scores.cols(); ++g)
            os << "," << fmt(m.scores(p, g), "%.17g");
        os << "\n";
    }
    if (!os) throw IoError("short write to " + path.string());
}

void write_cmc_csv(const std::filesystem::path& path, const std::string& system,
                   const CmcCurve& curve) {
    auto os = open_out(path);
    os << "rank";
    for (Eigen::Index k = 0; k < curve.rates.size(); ++k) os << "," << (k + 1);
    os << "\n" << system;
    for (Eigen::Index k = 0; k < curve.rates.size(); ++k) os << "," << fmt(curve.rates[k]);
    os << "\n";
    if (!os) throw IoError("short write to " + path.string());
}

void write_rank_table_csv(const std::filesystem::path& path, const RankTable& table,
                          const std::array<double, 3>& one_one_percent) {
    auto os = open_out(path);
    os << "system,rank1,rank2,rank3,rank4,rank5\n";
    for (const auto& row : table.rows) {
        os << "\"" << row.system << "\"";
        for (double v : row.percent) os << "," << fmt(v);
        os << "\n";
    }
    const char* names[3] = {"Speech (only twins one-one)", "Ear (only twins one-one)",
                            "Speech + Ear (only twins one-one)"};
    for (int s = 0; s < 3; ++s)
        os << "\"" << names[s] << "\"," << fmt(one_one_percent[s]) << ",,,,\n";
    if (!os) throw IoError("short write to " + path.string());
}

std::string format_rank_table(const RankTable& table,
                              const std::array<double, 3>& one_one_percent) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-40s %8s %8s %8s %8s %8s\n", "BIOMETRIC SYSTEM",
                  "RANK-1", "RANK-2", "RANK-3", "RANK-4", "RANK-5");
    out += line;
    for (const auto& row : table.rows) {
        std::snprintf(line, sizeof line, "%-40s %8.1f %8.1f %8.1f %8.1f %8.1f\n",
                      row.system.c_str(), row.percent[0], row.percent[1], row.percent[2],
                      row.percent[3], row.percent[4]);
        out += line;
    }
    const char* names[3] = {"Speech (only twins one-one)", "Ear (only twins one-one)",
                            "Speech + Ear (only twins one-one)"};
    for (int s = 0; s < 3; ++s) {
        std::snprintf(line, sizeof line, "%-40s %8.1f\n", names[s], one_one_percent[s]);
        out += line;
    }
    return out;
}

} // namespace twinfuse
