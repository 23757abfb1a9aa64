#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mottbox/vec3.hpp"

// Domain colouring of complex wave fields: phase -> hue, modulus -> brightness.
namespace mottbox::render {

// Square sampling window in the plane spanned by u_axis and v_axis.
struct PlaneSpec {
    Vec3 origin;
    UnitVector u_axis;
    UnitVector v_axis;
    double half_extent;
    int resolution;  // samples per side

    double spacing() const { return 2.0 * half_extent / resolution; }
    // Sample (i, j) sits at origin + u (-h + i d) + v (-h + j d), d = 2h / resolution.
    // Doubling the resolution keeps every sample and adds one in between.
    Vec3 point(int i, int j) const;
};

// |u . v| <= 1e-10, half_extent > 0 and resolution >= 16.
void validate(const PlaneSpec& plane);

struct PixelIndex {
    int i;
    int j;
    bool operator==(const PixelIndex&) const = default;
};

struct FieldGrid {
    int width = 0;
    int height = 0;
    std::vector<Complex> values;      // row-major, index j * width + i
    std::vector<PixelIndex> masked;   // samples where the field was singular; stored as 0

    const Complex& at(int i, int j) const { return values[static_cast<std::size_t>(j * width + i)]; }
};

// Evaluates `field` at every sample of the plane. Points at which the field
// throws SingularPoint are set to zero and listed in `masked`. Rows may be
// split across `threads` workers; the result does not depend on it.
FieldGrid sample_plane(const std::function<Complex(const Vec3&)>& field, const PlaneSpec& plane,
                       unsigned threads = 1);

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    bool operator==(const Rgb&) const = default;
};

// Hue = arg(z) in degrees taken modulo 360 (arg 0 -> 0 deg red,
// arg pi/2 -> 90 deg, arg -pi/2 -> 270 deg), saturation 1,
// value = min(1, |z| / modulus_scale); standard HSV -> RGB with channels
// rounded to the nearest byte.
Rgb colormap(Complex z, double modulus_scale);

// Inverse of the byte encoding, for measuring rendered images: hue in
// degrees [0, 360) and value in [0, 1].
double hue_degrees(const Rgb& px);
double brightness(const Rgb& px);

struct FieldImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major byte triples

    Rgb pixel(int col, int row) const;
};

// Image row j, column i shows grid sample (i, j).
FieldImage colorize(const FieldGrid& grid, double modulus_scale);

// Binary PPM: "P6\n", optional "# <comment>\n" lines, "<w> <h>\n255\n",
// then the raw bytes. Throws std::runtime_error naming the path on I/O
// failure and ValidationError for an inconsistent image.
std::vector<std::uint8_t> encode_ppm(const FieldImage& image, std::span<const std::string> comments = {});
void write_ppm(const FieldImage& image, const std::filesystem::path& path,
               std::span<const std::string> comments = {});

// 64-bit FNV-1a, used for golden-file checks.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

}  // namespace mottbox::render
