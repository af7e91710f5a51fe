#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>

#include "doctest.h"
#include "poincare/errors.hpp"
#include "poincare/export.hpp"
#include "poincare/figure.hpp"
#include "poincare/image.hpp"

using namespace poincare;
namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / "poincare_render_io_test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("pixel geometry") {
    const ImageBuffer img(8, 4, Window{Complex{1, 1}, 4.0});
    CHECK(img.pixel_size() == 0.5);
    CHECK(std::abs(img.point(0, 0) - Complex{-1, 2}) < 1e-15);
    CHECK(img.point(0, 2).imag() == 1.0);
    const auto px = img.pixel_of({1.1, 0.9});
    REQUIRE(px.has_value());
    CHECK(px->first == 4);
    CHECK(px->second == 2);
    CHECK_FALSE(img.pixel_of({10, 0}).has_value());
}

TEST_CASE("portable pixmap bytes") {
    const fs::path dir = scratch_dir();
    write_image(ImageBuffer(1, 1, Window{}, white), dir / "white.ppm");
    CHECK(read_bytes(dir / "white.ppm") == std::string("P6\n1 1\n255\n\xff\xff\xff", 14));
    ImageBuffer bw(2, 1, Window{}, white);
    bw.set(0, 0, black);
    write_image(bw, dir / "bw.ppm");
    CHECK(read_bytes(dir / "bw.ppm") == std::string("P6\n2 1\n255\n\x00\x00\x00\xff\xff\xff", 17));
    CHECK_THROWS_AS(write_image(bw, "/nonexistent-dir/x/y.ppm"), IoError);
}

TEST_CASE("markers") {
    ImageBuffer img(21, 21, Window{0.0, 21.0});
    img.draw_marker(0.0, 3, dark_grey, black);
    CHECK(img.at(10, 10) == dark_grey);
    CHECK(img.at(10, 10 + 3) == black);
    CHECK(img.at(0, 0) == white);
}

TEST_CASE("filled Julia set of z^2 is the unit disc") {
    const ImageBuffer img = render_julia_mask(Polynomial::monomial(2), Window{0.0, 4.0}, 1024, 100);
    std::size_t inside = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) inside += img.at(x, y) == black;
    const double area = static_cast<double>(inside) * img.pixel_size() * img.pixel_size();
    CHECK(std::abs(area - std::numbers::pi) <= 0.02 * std::numbers::pi);
    CHECK_THROWS_AS(render_julia_mask(Polynomial::monomial(2), Window{0.0, 4.0}, 64, 10), DomainError);
}

TEST_CASE("filled Julia set of z^2 - 2 is a segment") {
    const ImageBuffer img = render_julia_mask(Polynomial::quadratic(-2), Window{0.0, 6.0}, 1024, 400);
    int max_thickness = 0, columns = 0;
    for (int x = 0; x < img.width(); ++x) {
        int t = 0;
        for (int y = 0; y < img.height(); ++y) t += img.at(x, y) == black;
        max_thickness = std::max(max_thickness, t);
        if (t > 0) {
            ++columns;
            CHECK(std::abs(img.point(x, 0).real()) <= 2.0 + img.pixel_size());
        }
    }
    CHECK(max_thickness >= 1);
    CHECK(max_thickness <= 3);
    CHECK(columns >= static_cast<int>(4.0 / img.pixel_size()) - 2);
}

TEST_CASE("preimage figure for z^2") {
    const Lineariser L = koenigs_series(BaseMap(Polynomial::monomial(2)), 1.0);
    FigureSpec spec;
    spec.resolution = 256;
    spec.level_options.allow_core_target = true;
    const int n = 6;
    const FigurePanels f = render_preimage_figure(L, 4.0, n, spec);
    const double lo = L.r0 * std::pow(2.0, n), hi = 2 * lo;
    std::size_t oracle = 0;
    for (int k = -1000; k <= 1000; ++k) {
        const double r = std::abs(Complex{std::log(4.0), 2 * std::numbers::pi * k});
        oracle += r >= lo && r < hi;
    }
    CHECK(f.level.points.size() == oracle);
    CHECK(f.domain_markers == oracle);
    CHECK(f.range_markers == oracle);
    CHECK(f.domain.width() == 256);

    const FigurePanels again = render_preimage_figure(L, 4.0, n, spec);
    CHECK(again.domain.bytes() == f.domain.bytes());
    CHECK(again.range.bytes() == f.range.bytes());
    CHECK_THROWS_AS(render_preimage_figure(L, 1e6, 1, spec), EmptyLevelSet);
}

TEST_CASE("preimage figure panels agree for the rabbit") {
    const Polynomial rabbit = Polynomial::quadratic({-0.1226, 0.7449});
    const auto fps = fixed_points(rabbit);
    const Complex alpha = std::min_element(fps.begin(), fps.end(), [](const auto& a, const auto& b) {
                              return std::abs(a.multiplier) < std::abs(b.multiplier);
                          })->point;
    const Lineariser L = koenigs_series(BaseMap(rabbit), alpha);
    FigureSpec spec;
    spec.resolution = 256;
    const FigurePanels f = render_preimage_figure(L, {2, 2}, 8, spec);
    CHECK(f.domain_markers == f.level.points.size());
    CHECK(f.range_markers == f.domain_markers);
}

TEST_CASE("lineariser JSON round trip") {
    const Lineariser L = koenigs_series(BaseMap(Polynomial::quadratic(-2)), 2.0, 256);
    const Json j = to_json(L);
    const fs::path path = scratch_dir() / "lin.json";
    write_json(path, j);
    std::ifstream in(path);
    const Lineariser back = lineariser_from_json(Json::parse(in));
    CHECK(back.rho == L.rho);
    CHECK(back.r0 == L.r0);
    CHECK(back.series.order() == L.series.order());
    for (Complex z : {Complex{3, 1}, Complex{-200, 40}, Complex{1e4, -3e3}}) CHECK(evaluate(back, z) == evaluate(L, z));
    CHECK(back.base.describe() == L.base.describe());

    const Json e = to_json(BaseMap(ScaledExponential{Complex{0, 2}}));
    CHECK(base_map_from_json(e).describe() == BaseMap(ScaledExponential{Complex{0, 2}}).describe());
    CHECK(std::isinf(complex_from_json(to_json(Complex{std::numeric_limits<double>::infinity(), 0})).real()));
}

TEST_CASE("CSV layouts") {
    const auto tree = preimage_tree(Polynomial::monomial(2), 1.0, 2);
    const std::string csv = tree_csv(tree);
    CHECK(csv.rfind("depth,re,im,cum_deriv_re,cum_deriv_im\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 1 + 2 + 4);
    const std::string b = bowen_csv(bowen_dimension(std::vector<double>{0.5, 0.5}));
    CHECK(b.rfind("quantity,t,p,value\n", 0) == 0);
    CHECK(ifs_csv(synthetic_ifs({0.5, 0.25})).rfind("branch,m,norm_sup,", 0) == 0);
}
