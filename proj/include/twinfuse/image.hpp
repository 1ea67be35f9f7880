#pragma once

#include <filesystem>

#include <Eigen/Dense>

namespace twinfuse {

/// Three-plane color image, intensities in [0, 1]. Planes are height x width.
struct RgbImage {
    Eigen::MatrixXd r, g, b;

    Eigen::Index height() const { return r.rows(); }
    Eigen::Index width() const { return r.cols(); }
};

/// Reads a binary PNM file with maxval 255. P6 fills all three planes;
/// P5 replicates the gray plane into R = G = B. Intensities are byte/255.
/// Throws NotPnm, BadHeader, Truncated.
RgbImage load_image(const std::filesystem::path& path);

/// Writes a binary P6 file, maxval 255; intensities are rounded to bytes,
/// so a load_image round trip is within 1/255 per pixel.
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

/// Mirrors the image about its vertical axis.
RgbImage flip_horizontal(const RgbImage& img);

} // namespace twinfuse
