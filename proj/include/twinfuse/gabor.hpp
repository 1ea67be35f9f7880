#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twinfuse/image.hpp"

namespace twinfuse {

struct GaborParams {
    double f;      // spatial frequency, cycles/pixel
    double theta;  // orientation, radians
    double psi;    // phase offset, radians
    double sigma;  // Gaussian std, pixels
    double gamma;  // spatial aspect ratio
    double eta;    // second aspect parameter of the f^2/(pi gamma eta) prefactor
};

struct GaborKernel {
    GaborParams params;
    Eigen::MatrixXcd values;  // square, odd-sized
};

/// Bank layout: theta_u = u*pi/n_orientations, f_v = f_max / sqrt(2)^v,
/// sigma = sigma_factor / f. Kernel side = smallest odd >= 6*sigma + 1,
/// capped at max_kernel_size (odd).
struct GaborBankConfig {
    int n_orientations = 32;
    int n_scales = 10;
    double f_max = 0.25;
    double sigma_factor = 0.56;
    double gamma = 0.5;
    double eta = 0.5;
    double psi = 0.0;
    int max_kernel_size = 69;
};

struct GaborBank {
    std::vector<GaborKernel> kernels;  // n_orientations * n_scales entries
    int n_orientations = 0;
    int n_scales = 0;
};

/// Samples G on the centered grid x, y in [-(size-1)/2, (size-1)/2]:
///   G(x,y) = f^2/(pi gamma eta) * exp(-(a^2 + (gamma b)^2) / (2 sigma^2))
///            * exp(j (2 pi f a + psi))
/// with a = x cos(theta) + y sin(theta), b = -x sin(theta) + y cos(theta).
/// Rows index y, columns index x. Throws BadSize unless size is odd and >= 3.
Eigen::MatrixXcd gabor_kernel(const GaborParams& p, int size);

GaborBank build_gabor_bank(const GaborBankConfig& cfg);

/// Zero-padded 2-D convolution of one plane with one kernel, evaluated at a
/// single pixel: sum over (u,v) of plane(row-u, col-v) * kernel(u, v).
std::complex<double> convolve_at(const Eigen::Ref<const Eigen::MatrixXd>& plane,
                                 const Eigen::MatrixXcd& kernel,
                                 Eigen::Index row, Eigen::Index col);

struct EarFeatureVector {
    std::string subject_id;
    Eigen::VectorXd values;
    bool normalized = false;
};

/// Gabor magnitude features: per channel (R, G, B), per kernel, the complex
/// convolution magnitude at every downsample-th pixel starting at (0,0),
/// row-major; channels outermost, then kernels. The concatenated vector is
/// z-normalized; a zero-variance vector is left all-zero with
/// normalized = false. When mirror is set the image is flipped horizontally
/// first. Throws ImageTooSmall when the image is under 8x8 or a kernel does
/// not fit.
EarFeatureVector extract_ear_features(const RgbImage& img, const GaborBank& bank,
                                      bool mirror, int downsample = 8);

/// Feature length for a W x H image: 3 * ceil(W/ds) * ceil(H/ds) * n_kernels.
Eigen::Index ear_feature_length(Eigen::Index width, Eigen::Index height,
                                std::size_t n_kernels, int downsample = 8);

} // namespace twinfuse
