#include "twinfuse/image.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "twinfuse/errors.hpp"

namespace twinfuse {

namespace {

// Reads one whitespace-separated PNM header token, skipping '#' comments.
std::string next_token(const std::vector<std::uint8_t>& data, std::size_t& off) {
    while (off < data.size()) {
        if (std::isspace(data[off])) {
            ++off;
        } else if (data[off] == '#') {
            while (off < data.size() && data[off] != '\n') ++off;
        } else {
            break;
        }
    }
    std::string token;
    while (off < data.size() && !std::isspace(data[off]) && data[off] != '#')
        token.push_back(static_cast<char>(data[off++]));
    return token;
}

long parse_dim(const std::string& token, const std::filesystem::path& path) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
        throw BadHeader(path.string() + ": bad header field '" + token + "'");
    return std::stol(token);
}

} // namespace

RgbImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

    if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6'))
        throw NotPnm(path.string() + ": not a binary PGM/PPM file");
    const bool color = data[1] == '6';

    std::size_t off = 2;
    const long width = parse_dim(next_token(data, off), path);
    const long height = parse_dim(next_token(data, off), path);
    const long maxval = parse_dim(next_token(data, off), path);
    if (width <= 0 || height <= 0)
        throw BadHeader(path.string() + ": non-positive dimensions");
    if (maxval != 255)
        throw BadHeader(path.string() + ": only maxval 255 is supported, got " +
                        std::to_string(maxval));
    if (off >= data.size() || !std::isspace(data[off]))
        throw Truncated(path.string() + ": missing pixel data");
    ++off;  // single whitespace byte separates header and payload

    const std::size_t n_pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t need = n_pixels * (color ? 3 : 1);
    if (data.size() - off < need)
        throw Truncated(path.string() + ": expected " + std::to_string(need) +
                        " payload bytes, got " + std::to_string(data.size() - off));

    RgbImage img;
    img.r.resize(height, width);
    img.g.resize(height, width);
    img.b.resize(height, width);
    const std::uint8_t* p = data.data() + off;
    for (long y = 0; y < height; ++y) {
        for (long x = 0; x < width; ++x) {
            if (color) {
                img.r(y, x) = *p++ / 255.0;
                img.g(y, x) = *p++ / 255.0;
                img.b(y, x) = *p++ / 255.0;
            } else {
                const double v = *p++ / 255.0;
                img.r(y, x) = img.g(y, x) = img.b(y, x) = v;
            }
        }
    }
    return img;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
    const auto h = img.height(), w = img.width();
    if (h <= 0 || w <= 0 || img.g.rows() != h || img.g.cols() != w || img.b.rows() != h ||
        img.b.cols() != w)
        throw InvalidArgument("write_ppm: planes must be non-empty and equally sized");

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << "P6\n" << w << " " << h << "\n255\n";
    auto byte = [](double v) {
        return static_cast<char>(std::clamp<long>(std::lround(v * 255.0), 0, 255));
    };
    std::vector<char> row(static_cast<std::size_t>(w) * 3);
    for (Eigen::Index y = 0; y < h; ++y) {
        for (Eigen::Index x = 0; x < w; ++x) {
            row[3 * x] = byte(img.r(y, x));
            row[3 * x + 1] = byte(img.g(y, x));
            row[3 * x + 2] = byte(img.b(y, x));
        }
        os.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!os) throw IoError("short write to " + path.string());
}

RgbImage flip_horizontal(const RgbImage& img) {
    return {img.r.rowwise().reverse(), img.g.rowwise().reverse(), img.b.rowwise().reverse()};
}

} // namespace twinfuse
