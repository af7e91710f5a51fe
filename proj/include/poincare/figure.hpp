#pragma once

#include <complex>
#include <optional>

#include "poincare/image.hpp"
#include "poincare/lineariser.hpp"

namespace poincare {

struct FigureSpec {
    int resolution = 512;
    int iter_cap = 400;
    int marker_radius = 4;
    LevelSetOptions level_options;
    /// Left panel: domain of L. Defaults to a square around |rho|^{n+1} A_0.
    std::optional<Window> domain_window;
    /// Right panel: range of L. Defaults to a square around the filled Julia set.
    std::optional<Window> range_window;
};

struct FigurePanels {
    ImageBuffer domain;
    ImageBuffer range;
    LevelSet level;
    std::size_t domain_markers = 0;
    std::size_t range_markers = 0;
};

/// Left: annuli |rho|^k A_0 shaded white / light grey from k = 0, k = n in dark
/// grey, with the points of L^-1(w) in that annulus. Right: filled Julia set in
/// black, A_f in grey, with P^-n(w) cap A_f. Throws EmptyLevelSet.
FigurePanels render_preimage_figure(const Lineariser& L, Complex w, int n, const FigureSpec& spec = {});

}  // namespace poincare
