#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "poincare/base_map.hpp"
#include "poincare/dynamics.hpp"
#include "poincare/power_series.hpp"

namespace poincare {

/// Entire solution of L(rho z) = f(L(z)) with L(0) = xi0, built from its
/// Taylor series at 0 and extended by the functional equation.
struct Lineariser {
    BaseMap base;
    Complex xi0;
    Complex rho;
    PowerSeries series;
    /// Univalence radius: L is univalent on the disc of radius r0 |rho|.
    double r0 = 0.0;
    /// Radius inside which the truncated series is trusted; <= r0 |rho|.
    double safe_eval_radius = 0.0;
    /// Radius where the series tail drops below 1e-14.
    double tail_radius = 0.0;
    std::vector<std::string> warnings;

    Complex a1() const { return series.coeff(1); }
    double core_radius() const { return r0 * std::abs(rho); }
};

inline constexpr int default_series_order = 512;

/// Solves the Schroeder equation order by order:
/// a_n (rho^n - rho) = [z^n] of the nonlinear part of f(L(z)).
/// Also runs univalence_radius and a 100-sample functional-equation self-test,
/// whose failures are recorded as warnings.
/// Throws NotRepelling, ResonanceBlowup, DomainError if xi0 is not fixed.
Lineariser koenigs_series(const BaseMap& base, Complex xi0, int order = default_series_order, Complex a1 = 1.0);

/// Largest r = |rho| / 1.1^j such that L' has no zero on a 16x16 polar grid of the
/// disc of radius r |rho| and the image of its 1024-gon boundary is a simple
/// curve. Stores r0 and the safe evaluation radius in L.
/// Throws NoUnivalentDisc below 1e-6.
double univalence_radius(Lineariser& L);

/// The same lineariser conjugated by z -> lambda z: the lineariser of
/// lambda P(z / lambda) at lambda xi0 with derivative lambda a1, equal to lambda L.
Lineariser rescaled(const Lineariser& L, Complex lambda);

/// Smallest n >= 0 with |z / rho^n| <= safe_eval_radius.
int descent_depth(const Lineariser& L, Complex z);

/// f^n(series(z / rho^n)) with the descent depth of z.
Complex evaluate(const Lineariser& L, Complex z);
/// Same, with a forced descent depth n.
Complex evaluate_at_depth(const Lineariser& L, Complex z, int n);

/// rho^-n L'(z / rho^n) (f^n)'(zeta), zeta = L(z / rho^n), at the descent depth of z.
Complex lineariser_derivative(const Lineariser& L, Complex z);
void evaluate_both(const Lineariser& L, Complex z, Complex& value, Complex& derivative);

/// Numerical inverse of L restricted to the core disc D(0, r0 |rho|).
class CoreInverter {
public:
    explicit CoreInverter(const Lineariser& L);

    /// The point of the core disc mapped to zeta, if any.
    std::optional<Complex> invert(Complex zeta) const;
    /// zeta lies in L(A_0), A_0 = {r0 <= |z| < r0 |rho|}; returns the preimage in A_0.
    std::optional<Complex> invert_fundamental(Complex zeta) const;

    double image_radius() const { return image_radius_; }

private:
    const Lineariser* L_;
    double radius_;
    double image_radius_;
    std::vector<Complex> seeds_;
    std::vector<Complex> seed_values_;
};

struct LevelSetPoint {
    /// Point of L^-1(w) in the annulus |rho|^n A_0.
    Complex z;
    /// L(z / rho^n), a point of P^-n(w) in A_f.
    Complex zeta;
    /// L'(z) from the chain formula.
    Complex deriv_L;
    bool critical = false;
};

struct LevelSet {
    int n = 0;
    Complex w;
    std::vector<LevelSetPoint> points;
    bool truncated = false;
};

struct LevelSetOptions {
    std::size_t cap = default_tree_cap;
    /// Accept targets inside L(core). The annulus slices are still exact; only
    /// the point of L^-1(w) inside the core itself is not reported.
    bool allow_core_target = false;
};

/// L^-1(w) in the annulus |rho|^n A_0, as rho^n (L|core)^-1(P^-n(w) cap A_f).
/// Throws DomainError for a non-polynomial base, TargetInsideCore when w is in L(core).
LevelSet level_set(const Lineariser& L, Complex w, int n, const LevelSetOptions& opts = {});

/// Level sets n_min..n_max from a single preimage tree.
std::vector<LevelSet> level_sets(const Lineariser& L, Complex w, int n_min, int n_max,
                                 const LevelSetOptions& opts = {});

}  // namespace poincare
