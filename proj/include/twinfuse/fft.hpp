#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "twinfuse/errors.hpp"

namespace twinfuse {

constexpr bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 FFT (decimation in time). Length must be a
/// power of two. Throws BadFftSize.
template <typename Scalar>
void fft_radix2(std::vector<std::complex<Scalar>>& data) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw BadFftSize("fft length " + std::to_string(n) + " is not a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const Scalar ang = Scalar(-2) * std::numbers::pi_v<Scalar> / Scalar(len);
        const std::complex<Scalar> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<Scalar> w(1);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = data[i + k];
                const auto v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

/// |DFT|^2 of the zero-padded frame at bins 0..n_fft/2.
/// Throws BadFftSize if n_fft is not a power of two, InvalidArgument if the
/// frame is longer than n_fft.
Eigen::VectorXd power_spectrum(const Eigen::Ref<const Eigen::VectorXd>& frame, int n_fft);

} // namespace twinfuse
