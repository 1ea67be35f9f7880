#pragma once

#include <vector>

#include <Eigen/Dense>

#include "twinfuse/audio.hpp"

namespace twinfuse {

/// Frame and filter-bank geometry for the speech frontend.
struct FrameConfig {
    double frame_ms = 30.0;
    double step_ms = 10.0;
    int n_fft = 512;
    int n_filters = 20;
    double f_lo = 300.0;
    double f_hi = 3700.0;
    int n_ceps = 13;
};

/// Frame length / hop in samples at the given rate.
int frame_length(const FrameConfig& cfg, int sample_rate);
int frame_step(const FrameConfig& cfg, int sample_rate);

/// Throws InvalidArgument when the config is inconsistent with the rate
/// (step > frame, band outside (0, rate/2], n_ceps > n_filters,
/// n_fft < frame length).
void validate(const FrameConfig& cfg, int sample_rate);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular mel filters over FFT bins. Row m is zero outside
/// (left_m, right_m) and peaks at exactly 1.0 on its center bin.
struct MelFilterBank {
    Eigen::MatrixXd weights;       // n_filters x (n_fft/2 + 1)
    std::vector<int> center_bins;  // strictly increasing

    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& power) const {
        return weights * power;
    }
};

/// Places n_filters + 2 edge points equally spaced on the mel axis between
/// f_lo and f_hi, snaps them to FFT bins and builds one triangle per filter.
/// Throws BandTooNarrow when adjacent edges collapse onto the same bin.
MelFilterBank build_mel_filterbank(const FrameConfig& cfg, int sample_rate);

/// Slices the clip into frames of frame_ms every step_ms; frame i starts at
/// sample i*step and the last partial frame is dropped. Rows are frames.
/// Throws TooShort when the clip holds less than one frame.
Eigen::MatrixXd frame_signal(const AudioClip& clip, const FrameConfig& cfg);

/// w(n) = 0.54 - 0.46 cos(2 pi n / (N - 1)), n = 0..N-1. Requires N >= 2.
Eigen::VectorXd hamming_window(int n);

/// Orthonormal DCT-II of x.
Eigen::VectorXd dct2(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Cepstral frame matrix plus the config that produced it.
struct MfccSequence {
    Eigen::MatrixXd frames;  // T x n_ceps
    FrameConfig config;

    Eigen::Index size() const { return frames.rows(); }
};

/// Full frontend: frame, window, power spectrum, mel energies, log (floored
/// at 1e-10), DCT-II, keep c0..c(n_ceps-1).
MfccSequence mfcc(const AudioClip& clip, const FrameConfig& cfg);

} // namespace twinfuse
