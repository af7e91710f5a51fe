#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "poincare/polynomial.hpp"

namespace poincare {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb white{255, 255, 255};
inline constexpr Rgb black{0, 0, 0};
inline constexpr Rgb light_grey{214, 214, 214};
inline constexpr Rgb mid_grey{150, 150, 150};
inline constexpr Rgb dark_grey{90, 90, 90};

/// Complex rectangle shown by an image; the height follows from the pixel aspect.
struct Window {
    Complex center{};
    double width = 4.0;
};

/// Row-major 8-bit RGB raster. Pixel (x, y) covers the square whose upper-left
/// corner is left + x h + i (top - y h), h = width / pixels, so row height/2 lies on
/// Im z = Im center and the y axis points up.
class ImageBuffer {
public:
    ImageBuffer(int width, int height, Window window, Rgb fill = white);

    int width() const { return width_; }
    int height() const { return height_; }
    const Window& window() const { return window_; }
    double pixel_size() const { return window_.width / width_; }
    const std::vector<std::uint8_t>& bytes() const { return pixels_; }

    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb c);
    /// Sample point of pixel (x, y).
    Complex point(int x, int y) const;
    /// Pixel containing z, if inside the window.
    std::optional<std::pair<int, int>> pixel_of(Complex z) const;

    /// Filled disc of the given pixel radius with a one-pixel border.
    void draw_marker(Complex z, int radius, Rgb fill, Rgb border);

private:
    int width_, height_;
    Window window_;
    std::vector<std::uint8_t> pixels_;
};

/// Binary portable pixmap: "P6\n<w> <h>\n255\n" then raw RGB. Throws IoError.
void write_image(const ImageBuffer& img, const std::filesystem::path& path);

/// Square image, black where the orbit stays within the escape radius for iter_cap steps.
ImageBuffer render_julia_mask(const Polynomial& p, const Window& window, int resolution, int iter_cap);

}  // namespace poincare
