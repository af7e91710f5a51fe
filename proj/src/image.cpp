#include "poincare/image.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "poincare/dynamics.hpp"
#include "poincare/errors.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

ImageBuffer::ImageBuffer(int width, int height, Window window, Rgb fill)
    : width_(width), height_(height), window_(window) {
    if (width < 1 || height < 1) throw DomainError("image dimensions must be positive");
    if (!(window.width > 0)) throw DomainError("window width must be positive");
    pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < pixels_.size(); i += 3) {
        pixels_[i] = fill.r;
        pixels_[i + 1] = fill.g;
        pixels_[i + 2] = fill.b;
    }
}

Rgb ImageBuffer::at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    return {pixels_.at(i), pixels_.at(i + 1), pixels_.at(i + 2)};
}

void ImageBuffer::set(int x, int y, Rgb c) {
    const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    pixels_.at(i) = c.r;
    pixels_.at(i + 1) = c.g;
    pixels_.at(i + 2) = c.b;
}

Complex ImageBuffer::point(int x, int y) const {
    const double h = pixel_size();
    const double left = window_.center.real() - 0.5 * width_ * h;
    const double top = window_.center.imag() + 0.5 * height_ * h;
    return {left + x * h, top - y * h};
}

std::optional<std::pair<int, int>> ImageBuffer::pixel_of(Complex z) const {
    const double h = pixel_size();
    const double left = window_.center.real() - 0.5 * width_ * h;
    const double top = window_.center.imag() + 0.5 * height_ * h;
    const double fx = std::floor((z.real() - left) / h);
    const double fy = std::floor((top - z.imag()) / h);
    if (!(fx >= 0 && fx < width_ && fy >= 0 && fy < height_)) return std::nullopt;
    return std::pair{static_cast<int>(fx), static_cast<int>(fy)};
}

void ImageBuffer::draw_marker(Complex z, int radius, Rgb fill, Rgb border) {
    const auto px = pixel_of(z);
    if (!px) return;
    const auto [cx, cy] = *px;
    for (int dy = -radius - 1; dy <= radius + 1; ++dy) {
        for (int dx = -radius - 1; dx <= radius + 1; ++dx) {
            const int x = cx + dx, y = cy + dy;
            if (x < 0 || y < 0 || x >= width_ || y >= height_) continue;
            const double d = std::hypot(dx, dy);
            if (d <= radius - 0.5)
                set(x, y, fill);
            else if (d <= radius + 0.5)
                set(x, y, border);
        }
    }
}

void write_image(const ImageBuffer& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
    const std::string header = fmt::format("P6\n{} {}\n255\n", img.width(), img.height());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(img.bytes().data()), static_cast<std::streamsize>(img.bytes().size()));
    out.flush();
    if (!out) throw IoError(fmt::format("failed writing {}", path.string()));
}

ImageBuffer render_julia_mask(const Polynomial& p, const Window& window, int resolution, int iter_cap) {
    if (iter_cap < 100) throw DomainError("iteration cap must be at least 100");
    ImageBuffer img(resolution, resolution, window);
    const double R = escape_radius(p);
    parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t y) {
        for (int x = 0; x < resolution; ++x)
            if (!escapes(p, img.point(x, static_cast<int>(y)), iter_cap, R)) img.set(x, static_cast<int>(y), black);
    });
    return img;
}

}  // namespace poincare
