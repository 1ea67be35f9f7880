#include "twinfuse/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "twinfuse/audio.hpp"
#include "twinfuse/errors.hpp"
#include "twinfuse/image.hpp"

namespace twinfuse {

namespace {

// std distributions are implementation-defined, so all draws below map raw
// mt19937_64 output through fixed arithmetic; generated bytes are identical
// across standard libraries.
double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit(rng);
}

double gaussian(std::mt19937_64& rng) {
    const double u1 = 1.0 - unit(rng);  // (0, 1]
    const double u2 = unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Separable moving-average smoothing with edge clamping; keeps the noise
// band-limited without pulling in any filtering machinery.
Eigen::MatrixXd smooth(const Eigen::MatrixXd& in, int radius, int passes) {
    Eigen::MatrixXd cur = in;
    for (int pass = 0; pass < passes; ++pass) {
        Eigen::MatrixXd tmp(cur.rows(), cur.cols());
        for (Eigen::Index y = 0; y < cur.rows(); ++y) {
            for (Eigen::Index x = 0; x < cur.cols(); ++x) {
                const auto lo = std::max<Eigen::Index>(0, x - radius);
                const auto hi = std::min<Eigen::Index>(cur.cols() - 1, x + radius);
                tmp(y, x) = cur.row(y).segment(lo, hi - lo + 1).mean();
            }
        }
        for (Eigen::Index x = 0; x < cur.cols(); ++x) {
            for (Eigen::Index y = 0; y < cur.rows(); ++y) {
                const auto lo = std::max<Eigen::Index>(0, y - radius);
                const auto hi = std::min<Eigen::Index>(cur.rows() - 1, y + radius);
                cur(y, x) = tmp.col(x).segment(lo, hi - lo + 1).mean();
            }
        }
    }
    return cur;
}

Eigen::MatrixXd noise_field(std::mt19937_64& rng, int height, int width) {
    Eigen::MatrixXd m(height, width);
    for (Eigen::Index y = 0; y < height; ++y)
        for (Eigen::Index x = 0; x < width; ++x) m(y, x) = unit(rng);
    return smooth(m, 2, 3);
}

// Rescales to [lo, hi]; a constant field maps to the midpoint.
Eigen::MatrixXd rescale(const Eigen::MatrixXd& m, double lo, double hi) {
    const double mn = m.minCoeff(), mx = m.maxCoeff();
    if (mx - mn <= 0.0)
        return Eigen::MatrixXd::Constant(m.rows(), m.cols(), 0.5 * (lo + hi));
    return ((m.array() - mn) / (mx - mn) * (hi - lo) + lo).matrix();
}

constexpr int kTonesPerVoice = 3;

struct VoiceProfile {
    double freq[kTonesPerVoice];
    double amp[kTonesPerVoice];
};

AudioClip render_utterance(const VoiceProfile& voice, int sample_rate, std::mt19937_64& rng) {
    const auto n = static_cast<Eigen::Index>(std::llround(sample_rate * uniform(rng, 0.70, 0.95)));
    double phase[kTonesPerVoice], amp[kTonesPerVoice];
    for (int k = 0; k < kTonesPerVoice; ++k) {
        phase[k] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        amp[k] = voice.amp[k] * (1.0 + 0.05 * uniform(rng, -1.0, 1.0));
    }
    AudioClip clip;
    clip.sample_rate = sample_rate;
    clip.samples.resize(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        double s = 0.0;
        for (int k = 0; k < kTonesPerVoice; ++k)
            s += amp[k] * std::sin(2.0 * std::numbers::pi * voice.freq[k] * t / sample_rate +
                                   phase[k]);
        s += 0.02 * gaussian(rng);
        clip.samples[t] = std::clamp(s, -0.999, 0.999);
    }
    return clip;
}

RgbImage render_ear(const Eigen::MatrixXd& texture, const double tint[3],
                    std::mt19937_64& rng) {
    RgbImage img;
    Eigen::MatrixXd* planes[3] = {&img.r, &img.g, &img.b};
    for (int c = 0; c < 3; ++c) {
        const Eigen::MatrixXd capture =
            rescale(noise_field(rng, static_cast<int>(texture.rows()),
                                static_cast<int>(texture.cols())),
                    -0.01, 0.01);
        *planes[c] = (texture.array() + tint[c] + capture.array()).cwiseMax(0.0).cwiseMin(1.0);
    }
    return img;
}

} // namespace

Manifest generate_synthetic_cohort(const SynthConfig& cfg,
                                   const std::filesystem::path& out_dir) {
    if (cfg.n_pairs < 1) throw InvalidArgument("n_pairs must be >= 1");
    if (cfg.sample_rate < 2000) throw InvalidArgument("sample rate too low for the speech band");
    if (cfg.image_width < 8 || cfg.image_height < 8)
        throw InvalidArgument("ear images must be at least 8x8");

    std::error_code ec;
    std::filesystem::create_directories(out_dir / "audio", ec);
    std::filesystem::create_directories(out_dir / "images", ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    std::mt19937_64 master(cfg.seed);
    Manifest manifest;

    for (int pair = 0; pair < cfg.n_pairs; ++pair) {
        // Sub-seeds are drawn in a fixed order so each entity's stream is
        // independent of how much randomness its siblings consumed.
        std::mt19937_64 pair_rng(master());
        const std::uint64_t subject_seed[2] = {master(), master()};

        VoiceProfile base{};
        double amp_sum = 0.0;
        for (int k = 0; k < kTonesPerVoice; ++k) {
            base.freq[k] = uniform(pair_rng, 350.0, 1500.0);
            base.amp[k] = uniform(pair_rng, 0.4, 1.0);
            amp_sum += base.amp[k];
        }
        for (int k = 0; k < kTonesPerVoice; ++k) base.amp[k] *= 0.85 / amp_sum;

        const Eigen::MatrixXd pair_texture =
            rescale(noise_field(pair_rng, cfg.image_height, cfg.image_width), 0.25, 0.75);

        char pair_tag[16];
        std::snprintf(pair_tag, sizeof pair_tag, "twin%03d", pair);

        std::string ids[2];
        for (int s = 0; s < 2; ++s) {
            std::mt19937_64 rng(subject_seed[s]);
            const std::string id = std::string(pair_tag) + (s == 0 ? "_a" : "_b");
            ids[s] = id;

            // Twins share base.freq; the per-subject shift is twin_gap of the
            // +-150 Hz subject band, so co-twins stay closer than strangers.
            VoiceProfile voice = base;
            for (int k = 0; k < kTonesPerVoice; ++k)
                voice.freq[k] += cfg.twin_gap * uniform(rng, -150.0, 150.0);

            const Eigen::MatrixXd delta =
                rescale(noise_field(rng, cfg.image_height, cfg.image_width), -1.0, 1.0) *
                (cfg.twin_gap * 0.25);
            const Eigen::MatrixXd texture =
                (pair_texture.array() + delta.array()).cwiseMax(0.0).cwiseMin(1.0);
            double tint[3];
            for (double& t : tint) t = uniform(rng, -0.02, 0.02);

            SubjectRecord rec;
            rec.subject_id = id;
            rec.twin_id = std::string(pair_tag) + (s == 0 ? "_b" : "_a");

            const char* speech_names[3] = {"_train1.wav", "_train2.wav", "_test.wav"};
            for (int u = 0; u < 3; ++u) {
                const auto path = out_dir / "audio" / (id + speech_names[u]);
                write_wav(path, render_utterance(voice, cfg.sample_rate, rng));
                if (u < 2)
                    rec.speech_train.push_back(path);
                else
                    rec.speech_test = path;
            }

            // The stored left-side photo shows the mirrored ear; probes are
            // right-side photos of the same texture under fresh capture noise.
            const auto left_path = out_dir / "images" / (id + "_left.ppm");
            const auto right_path = out_dir / "images" / (id + "_right.ppm");
            write_ppm(left_path, flip_horizontal(render_ear(texture, tint, rng)));
            write_ppm(right_path, render_ear(texture, tint, rng));
            rec.ear_train = left_path;
            rec.ear_test = right_path;

            manifest.subjects.push_back(std::move(rec));
        }
    }

    const auto manifest_path = out_dir / "manifest.txt";
    manifest.cohort_name = manifest_path.stem().string();
    write_manifest(manifest_path, manifest);
    return parse_manifest(manifest_path);
}

} // namespace twinfuse
