#include "poincare/figure.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "poincare/dynamics.hpp"
#include "poincare/errors.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

FigurePanels render_preimage_figure(const Lineariser& L, Complex w, int n, const FigureSpec& spec) {
    const Polynomial& P = L.base.polynomial();
    LevelSet level = level_set(L, w, n, spec.level_options);
    if (level.points.empty()) throw EmptyLevelSet(fmt::format("no points of L^-1(w) in annulus {}", n));

    const double rho_abs = std::abs(L.rho);
    const Window dom = spec.domain_window.value_or(Window{0.0, 2.2 * L.r0 * std::pow(rho_abs, n + 1)});
    ImageBuffer left(spec.resolution, spec.resolution, dom);
    parallel_for(static_cast<std::size_t>(spec.resolution), [&](std::size_t yy) {
        const int y = static_cast<int>(yy);
        for (int x = 0; x < spec.resolution; ++x) {
            const double r = std::abs(left.point(x, y));
            if (r < L.r0) continue;
            const auto k = static_cast<int>(std::floor(std::log(r / L.r0) / std::log(rho_abs)));
            left.set(x, y, k == n ? dark_grey : (k % 2 == 0 ? white : light_grey));
        }
    });

    double extent = 2.0;
    for (const auto& p : level.points) extent = std::max(extent, std::abs(p.zeta));
    const Window ran = spec.range_window.value_or(Window{0.0, 2.2 * std::min(extent * 1.1, escape_radius(P))});
    ImageBuffer right(spec.resolution, spec.resolution, ran);
    const CoreInverter inverter(L);
    const double R = escape_radius(P);
    parallel_for(static_cast<std::size_t>(spec.resolution), [&](std::size_t yy) {
        const int y = static_cast<int>(yy);
        for (int x = 0; x < spec.resolution; ++x) {
            const Complex z = right.point(x, y);
            if (!escapes(P, z, spec.iter_cap, R))
                right.set(x, y, black);
            else if (inverter.invert_fundamental(z))
                right.set(x, y, mid_grey);
        }
    });

    FigurePanels out{std::move(left), std::move(right), std::move(level), 0, 0};
    for (const auto& p : out.level.points) {
        if (out.domain.pixel_of(p.z)) ++out.domain_markers;
        if (out.range.pixel_of(p.zeta)) ++out.range_markers;
        out.domain.draw_marker(p.z, spec.marker_radius, white, black);
        out.range.draw_marker(p.zeta, spec.marker_radius, white, black);
    }
    return out;
}

}  // namespace poincare
