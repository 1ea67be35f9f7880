#pragma once

#include <filesystem>

#include <Eigen/Dense>

namespace twinfuse {

/// Mono speech signal with amplitudes normalized to [-1, 1].
struct AudioClip {
    int sample_rate = 0;
    Eigen::VectorXd samples;
};

/// Reads a PCM 16-bit mono RIFF/WAVE file. Integer samples are divided by
/// 32768 so the result lies in [-1, 1).
/// Throws NotWav, UnsupportedFormat, Truncated.
AudioClip load_wav(const std::filesystem::path& path);

/// Writes a PCM 16-bit mono RIFF/WAVE file. Amplitudes are scaled by 32768,
/// rounded half away from zero and clamped to the int16 range, so a
/// load_wav round trip is within 1/32768 per sample.
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

} // namespace twinfuse
