#include "twinfuse/gabor.hpp"

#include <cmath>
#include <numbers>

#include "twinfuse/errors.hpp"

namespace twinfuse {

namespace {

void check_params(const GaborParams& p) {
    if (!(p.f > 0.0 && p.sigma > 0.0 && p.gamma > 0.0 && p.eta > 0.0))
        throw InvalidArgument("gabor parameters f, sigma, gamma, eta must be positive");
}

int odd_kernel_size(double sigma, int cap) {
    int size = static_cast<int>(std::ceil(6.0 * sigma + 1.0));
    if (size % 2 == 0) ++size;
    const int odd_cap = (cap % 2 == 0) ? cap - 1 : cap;
    size = std::min(size, odd_cap);
    return std::max(size, 3);
}

} // namespace

Eigen::MatrixXcd gabor_kernel(const GaborParams& p, int size) {
    if (size < 3 || size % 2 == 0)
        throw BadSize("kernel size must be odd and >= 3, got " + std::to_string(size));
    check_params(p);

    const int h = (size - 1) / 2;
    const double prefactor = p.f * p.f / (std::numbers::pi * p.gamma * p.eta);
    const double cos_t = std::cos(p.theta), sin_t = std::sin(p.theta);

    Eigen::MatrixXcd kernel(size, size);
    for (int iy = 0; iy < size; ++iy) {
        const double y = iy - h;
        for (int ix = 0; ix < size; ++ix) {
            const double x = ix - h;
            const double a = x * cos_t + y * sin_t;
            const double b = -x * sin_t + y * cos_t;
            const double envelope =
                std::exp(-(a * a + p.gamma * p.gamma * b * b) / (2.0 * p.sigma * p.sigma));
            const double phase = 2.0 * std::numbers::pi * p.f * a + p.psi;
            kernel(iy, ix) = prefactor * envelope *
                             std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return kernel;
}

GaborBank build_gabor_bank(const GaborBankConfig& cfg) {
    if (cfg.n_orientations < 1 || cfg.n_scales < 1)
        throw InvalidArgument("bank needs at least one orientation and one scale");
    if (cfg.max_kernel_size < 3) throw InvalidArgument("max_kernel_size must be >= 3");

    GaborBank bank;
    bank.n_orientations = cfg.n_orientations;
    bank.n_scales = cfg.n_scales;
    bank.kernels.reserve(static_cast<std::size_t>(cfg.n_orientations) * cfg.n_scales);
    for (int u = 0; u < cfg.n_orientations; ++u) {
        const double theta = u * std::numbers::pi / cfg.n_orientations;
        for (int v = 0; v < cfg.n_scales; ++v) {
            GaborParams p;
            p.f = cfg.f_max / std::pow(std::sqrt(2.0), v);
            p.theta = theta;
            p.psi = cfg.psi;
            p.sigma = cfg.sigma_factor / p.f;
            p.gamma = cfg.gamma;
            p.eta = cfg.eta;
            const int size = odd_kernel_size(p.sigma, cfg.max_kernel_size);
            bank.kernels.push_back({p, gabor_kernel(p, size)});
        }
    }
    return bank;
}

std::complex<double> convolve_at(const Eigen::Ref<const Eigen::MatrixXd>& plane,
                                 const Eigen::MatrixXcd& kernel,
                                 Eigen::Index row, Eigen::Index col) {
    const Eigen::Index h = (kernel.rows() - 1) / 2;
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index u = -h; u <= h; ++u) {
        const Eigen::Index p = row - u;
        if (p < 0 || p >= plane.rows()) continue;
        for (Eigen::Index v = -h; v <= h; ++v) {
            const Eigen::Index q = col - v;
            if (q < 0 || q >= plane.cols()) continue;
            acc += plane(p, q) * kernel(u + h, v + h);
        }
    }
    return acc;
}

Eigen::Index ear_feature_length(Eigen::Index width, Eigen::Index height,
                                std::size_t n_kernels, int downsample) {
    const auto cells = ((width + downsample - 1) / downsample) *
                       ((height + downsample - 1) / downsample);
    return 3 * cells * static_cast<Eigen::Index>(n_kernels);
}

EarFeatureVector extract_ear_features(const RgbImage& img, const GaborBank& bank,
                                      bool mirror, int downsample) {
    if (downsample < 1) throw InvalidArgument("downsample factor must be >= 1");
    const auto height = img.height(), width = img.width();
    if (width < 8 || height < 8)
        throw ImageTooSmall("ear image must be at least 8x8, got " + std::to_string(width) +
                            "x" + std::to_string(height));
    for (const auto& k : bank.kernels)
        if (k.values.rows() > height || k.values.cols() > width)
            throw ImageTooSmall("kernel of size " + std::to_string(k.values.rows()) +
                                " does not fit a " + std::to_string(width) + "x" +
                                std::to_string(height) + " image");

    const RgbImage flipped = mirror ? flip_horizontal(img) : RgbImage{};
    const RgbImage& src = mirror ? flipped : img;
    const Eigen::MatrixXd* planes[3] = {&src.r, &src.g, &src.b};

    const Eigen::Index n_r = (height + downsample - 1) / downsample;
    const Eigen::Index n_c = (width + downsample - 1) / downsample;
    const auto n_kernels = static_cast<Eigen::Index>(bank.kernels.size());

    EarFeatureVector out;
    out.values.resize(3 * n_r * n_c * n_kernels);

    for (Eigen::Index k = 0; k < n_kernels; ++k) {
        const auto& kernel = bank.kernels[static_cast<std::size_t>(k)].values;
        const Eigen::Index h = (kernel.rows() - 1) / 2;
        // Convolution at (r,c) is an aligned correlation with the reversed
        // kernel; materializing the reversed planes keeps the inner sums as
        // plain block dot products.
        const Eigen::MatrixXd rev_re = kernel.real().reverse();
        const Eigen::MatrixXd rev_im = kernel.imag().reverse();

        for (int ch = 0; ch < 3; ++ch) {
            const Eigen::MatrixXd& plane = *planes[ch];
            const Eigen::Index base = (ch * n_kernels + k) * n_r * n_c;
            for (Eigen::Index ri = 0; ri < n_r; ++ri) {
                const Eigen::Index r = ri * downsample;
                const Eigen::Index p0 = std::max<Eigen::Index>(0, r - h);
                const Eigen::Index p1 = std::min(height - 1, r + h);
                for (Eigen::Index ci = 0; ci < n_c; ++ci) {
                    const Eigen::Index c = ci * downsample;
                    const Eigen::Index q0 = std::max<Eigen::Index>(0, c - h);
                    const Eigen::Index q1 = std::min(width - 1, c + h);
                    const auto rows = p1 - p0 + 1, cols = q1 - q0 + 1;
                    const auto img_block = plane.block(p0, q0, rows, cols);
                    const double re =
                        img_block.cwiseProduct(rev_re.block(p0 - r + h, q0 - c + h, rows, cols))
                            .sum();
                    const double im =
                        img_block.cwiseProduct(rev_im.block(p0 - r + h, q0 - c + h, rows, cols))
                            .sum();
                    out.values[base + ri * n_c + ci] = std::abs(std::complex<double>(re, im));
                }
            }
        }
    }

    const double mean = out.values.mean();
    const double var = (out.values.array() - mean).square().sum() / out.values.size();
    if (var > 0.0) {
        out.values = (out.values.array() - mean) / std::sqrt(var);
        out.normalized = true;
    } else {
        out.values.setZero();
        out.normalized = false;
    }
    return out;
}

} // namespace twinfuse
