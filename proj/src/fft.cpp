#include "twinfuse/fft.hpp"

namespace twinfuse {

Eigen::VectorXd power_spectrum(const Eigen::Ref<const Eigen::VectorXd>& frame, int n_fft) {
    if (n_fft <= 0 || !is_power_of_two(static_cast<std::size_t>(n_fft)))
        throw BadFftSize("n_fft " + std::to_string(n_fft) + " is not a power of two");
    if (frame.size() > n_fft)
        throw InvalidArgument("frame of " + std::to_string(frame.size()) +
                              " samples does not fit n_fft " + std::to_string(n_fft));

    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n_fft));
    for (Eigen::Index i = 0; i < frame.size(); ++i) buf[static_cast<std::size_t>(i)] = frame[i];
    fft_radix2(buf);

    Eigen::VectorXd power(n_fft / 2 + 1);
    for (int k = 0; k <= n_fft / 2; ++k) power[k] = std::norm(buf[static_cast<std::size_t>(k)]);
    return power;
}

} // namespace twinfuse
