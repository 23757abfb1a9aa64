#include "mottbox/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mottbox/error.hpp"
#include "mottbox/parallel.hpp"

namespace mottbox::render {

namespace {

std::uint8_t to_byte(double x) { return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); }

}  // namespace

Vec3 PlaneSpec::point(int i, int j) const {
    const double d = spacing();
    return origin + u_axis.vec() * (-half_extent + i * d) + v_axis.vec() * (-half_extent + j * d);
}

void validate(const PlaneSpec& plane) {
    if (!plane.origin.finite()) throw ValidationError("PlaneSpec: origin must be finite");
    if (std::fabs(dot(plane.u_axis.vec(), plane.v_axis.vec())) > 1e-10) {
        throw ValidationError("PlaneSpec: u_axis and v_axis must be orthogonal");
    }
    if (!(std::isfinite(plane.half_extent) && plane.half_extent > 0.0)) {
        throw ValidationError("PlaneSpec: half_extent must be finite and > 0");
    }
    if (plane.resolution < 16) throw ValidationError("PlaneSpec: resolution must be >= 16");
}

FieldGrid sample_plane(const std::function<Complex(const Vec3&)>& field, const PlaneSpec& plane, unsigned threads) {
    validate(plane);
    const int n = plane.resolution;
    FieldGrid grid{n, n, std::vector<Complex>(static_cast<std::size_t>(n) * n), {}};
    std::vector<std::vector<PixelIndex>> masked_rows(static_cast<std::size_t>(n));
    parallel_chunks(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t row = begin; row < end; ++row) {
            const int j = static_cast<int>(row);
            for (int i = 0; i < n; ++i) {
                Complex v{0.0, 0.0};
                try {
                    v = field(plane.point(i, j));
                } catch (const SingularPoint&) {
                    masked_rows[row].push_back({i, j});
                }
                grid.values[row * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = v;
            }
        }
    });
    for (const auto& m : masked_rows) grid.masked.insert(grid.masked.end(), m.begin(), m.end());
    return grid;
}

Rgb colormap(Complex z, double modulus_scale) {
    if (!(modulus_scale > 0.0)) throw ValidationError("colormap: modulus_scale must be > 0");
    const double value = std::min(1.0, std::abs(z) / modulus_scale);
    if (value == 0.0) return {};
    double hue = std::arg(z) * 180.0 / std::numbers::pi;
    if (hue < 0.0) hue += 360.0;
    if (hue >= 360.0) hue -= 360.0;

    const double h6 = hue / 60.0;
    const int sector = std::min(5, static_cast<int>(h6));
    const double f = h6 - sector;
    const double p = 0.0;
    const double q = value * (1.0 - f);
    const double t = value * f;
    double r = 0.0, g = 0.0, b = 0.0;
    switch (sector) {
        case 0: r = value, g = t, b = p; break;
        case 1: r = q, g = value, b = p; break;
        case 2: r = p, g = value, b = t; break;
        case 3: r = p, g = q, b = value; break;
        case 4: r = t, g = p, b = value; break;
        default: r = value, g = p, b = q; break;
    }
    return {to_byte(r), to_byte(g), to_byte(b)};
}

double hue_degrees(const Rgb& px) {
    const double r = px.r, g = px.g, b = px.b;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double c = mx - mn;
    if (c == 0.0) return 0.0;
    double h = 0.0;
    if (mx == r) {
        h = std::fmod((g - b) / c, 6.0);
    } else if (mx == g) {
        h = (b - r) / c + 2.0;
    } else {
        h = (r - g) / c + 4.0;
    }
    h *= 60.0;
    return h < 0.0 ? h + 360.0 : h;
}

double brightness(const Rgb& px) { return std::max({px.r, px.g, px.b}) / 255.0; }

Rgb FieldImage::pixel(int col, int row) const {
    const auto k = 3 * static_cast<std::size_t>(row * width + col);
    return {rgb[k], rgb[k + 1], rgb[k + 2]};
}

FieldImage colorize(const FieldGrid& grid, double modulus_scale) {
    FieldImage image{grid.width, grid.height, {}};
    image.rgb.reserve(grid.values.size() * 3);
    for (const auto& z : grid.values) {
        const Rgb px = colormap(z, modulus_scale);
        image.rgb.insert(image.rgb.end(), {px.r, px.g, px.b});
    }
    return image;
}

std::vector<std::uint8_t> encode_ppm(const FieldImage& image, std::span<const std::string> comments) {
    if (image.width <= 0 || image.height <= 0 ||
        image.rgb.size() != 3 * static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height)) {
        throw ValidationError("write_ppm: pixel buffer does not match width x height x 3");
    }
    std::ostringstream header;
    header << "P6\n";
    for (const auto& c : comments) {
        if (c.find('\n') != std::string::npos) throw ValidationError("write_ppm: comment contains a newline");
        header << "# " << c << "\n";
    }
    header << image.width << " " << image.height << "\n255\n";
    const std::string h = header.str();
    std::vector<std::uint8_t> bytes(h.begin(), h.end());
    bytes.insert(bytes.end(), image.rgb.begin(), image.rgb.end());
    return bytes;
}

void write_ppm(const FieldImage& image, const std::filesystem::path& path, std::span<const std::string> comments) {
    const auto bytes = encode_ppm(image, comments);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_ppm: cannot open " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write_ppm: write failed for " + path.string());
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace mottbox::render
