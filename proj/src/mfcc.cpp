#include "twinfuse/mfcc.hpp"

#include <cmath>
#include <numbers>

#include "twinfuse/errors.hpp"
#include "twinfuse/fft.hpp"

namespace twinfuse {

namespace {
constexpr double kLogFloor = 1e-10;  // keeps silent frames out of -inf
}

int frame_length(const FrameConfig& cfg, int sample_rate) {
    return static_cast<int>(std::llround(cfg.frame_ms * sample_rate / 1000.0));
}

int frame_step(const FrameConfig& cfg, int sample_rate) {
    return static_cast<int>(std::llround(cfg.step_ms * sample_rate / 1000.0));
}

void validate(const FrameConfig& cfg, int sample_rate) {
    if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
    if (!(cfg.step_ms > 0.0 && cfg.step_ms <= cfg.frame_ms))
        throw InvalidArgument("need 0 < step_ms <= frame_ms");
    if (!(cfg.f_lo > 0.0 && cfg.f_lo < cfg.f_hi && cfg.f_hi <= sample_rate / 2.0))
        throw InvalidArgument("need 0 < f_lo < f_hi <= sample_rate/2");
    if (cfg.n_filters < 1) throw InvalidArgument("need at least one mel filter");
    if (cfg.n_ceps < 1 || cfg.n_ceps > cfg.n_filters)
        throw InvalidArgument("need 1 <= n_ceps <= n_filters");
    if (cfg.n_fft <= 0 || !is_power_of_two(static_cast<std::size_t>(cfg.n_fft)))
        throw InvalidArgument("n_fft must be a positive power of two");
    if (cfg.n_fft < frame_length(cfg, sample_rate))
        throw InvalidArgument("n_fft smaller than the frame length");
    if (frame_step(cfg, sample_rate) < 1) throw InvalidArgument("step shorter than one sample");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterBank build_mel_filterbank(const FrameConfig& cfg, int sample_rate) {
    validate(cfg, sample_rate);
    const int n_bins = cfg.n_fft / 2 + 1;
    const double mel_lo = hz_to_mel(cfg.f_lo);
    const double mel_hi = hz_to_mel(cfg.f_hi);

    // n_filters + 2 edge points, equally spaced on the mel axis, snapped to bins.
    std::vector<int> edge_bins(cfg.n_filters + 2);
    for (int i = 0; i < cfg.n_filters + 2; ++i) {
        const double mel = mel_lo + (mel_hi - mel_lo) * i / (cfg.n_filters + 1);
        const double hz = mel_to_hz(mel);
        edge_bins[i] = static_cast<int>(std::llround(hz * cfg.n_fft / sample_rate));
    }

    MelFilterBank bank;
    bank.weights = Eigen::MatrixXd::Zero(cfg.n_filters, n_bins);
    bank.center_bins.resize(cfg.n_filters);
    for (int m = 0; m < cfg.n_filters; ++m) {
        const int left = edge_bins[m], center = edge_bins[m + 1], right = edge_bins[m + 2];
        if (center <= left || right <= center)
            throw BandTooNarrow("filter " + std::to_string(m) + " collapses onto bins [" +
                                std::to_string(left) + ", " + std::to_string(right) +
                                "]; use a larger n_fft or fewer filters");
        bank.center_bins[m] = center;
        for (int k = left + 1; k <= center; ++k)
            bank.weights(m, k) = static_cast<double>(k - left) / (center - left);
        for (int k = center + 1; k < right; ++k)
            bank.weights(m, k) = static_cast<double>(right - k) / (right - center);
    }
    return bank;
}

Eigen::MatrixXd frame_signal(const AudioClip& clip, const FrameConfig& cfg) {
    validate(cfg, clip.sample_rate);
    const int n = frame_length(cfg, clip.sample_rate);
    const int step = frame_step(cfg, clip.sample_rate);
    if (clip.samples.size() < n)
        throw TooShort("clip of " + std::to_string(clip.samples.size()) +
                       " samples is shorter than one " + std::to_string(n) + "-sample frame");

    const auto t = static_cast<Eigen::Index>((clip.samples.size() - n) / step + 1);
    Eigen::MatrixXd frames(t, n);
    for (Eigen::Index i = 0; i < t; ++i) frames.row(i) = clip.samples.segment(i * step, n);
    return frames;
}

Eigen::VectorXd hamming_window(int n) {
    if (n < 2) throw InvalidArgument("hamming window needs at least 2 points");
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i)
        w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
    return w;
}

Eigen::VectorXd dct2(const Eigen::Ref<const Eigen::VectorXd>& x) {
    const auto m = x.size();
    if (m == 0) throw InvalidArgument("dct2 of an empty vector");
    Eigen::VectorXd y(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
            acc += x[i] * std::cos(std::numbers::pi * k * (2 * i + 1) / (2.0 * m));
        y[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / m);
    }
    return y;
}

MfccSequence mfcc(const AudioClip& clip, const FrameConfig& cfg) {
    const Eigen::MatrixXd frames = frame_signal(clip, cfg);
    const MelFilterBank bank = build_mel_filterbank(cfg, clip.sample_rate);
    const Eigen::VectorXd window = hamming_window(static_cast<int>(frames.cols()));

    MfccSequence seq;
    seq.config = cfg;
    seq.frames.resize(frames.rows(), cfg.n_ceps);
    for (Eigen::Index i = 0; i < frames.rows(); ++i) {
        const Eigen::VectorXd windowed = frames.row(i).transpose().cwiseProduct(window);
        const Eigen::VectorXd energies = bank.apply(power_spectrum(windowed, cfg.n_fft));
        const Eigen::VectorXd logs = energies.cwiseMax(kLogFloor).array().log();
        seq.frames.row(i) = dct2(logs).head(cfg.n_ceps);
    }
    return seq;
}

} // namespace twinfuse
