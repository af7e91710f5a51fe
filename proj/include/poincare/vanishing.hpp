#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "poincare/lineariser.hpp"

namespace poincare {

struct CylPartition {
    double value = 0.0;
    std::vector<int> levels;
    std::vector<double> per_level;
    std::vector<std::size_t> counts;
    /// The last level contributes more than 1e-6 of the total.
    bool truncation_flag = false;
};

/// Sum over the level sets n_min..n_max of L^-1(w) of ||DL(z)||_cyl^-t,
/// ||DL(z)||_cyl = |L'(z)| |z| / |w|. Levels are summed in increasing n.
CylPartition cyl_partition_L(const Lineariser& L, double t, Complex w, int n_min, int n_max,
                             const LevelSetOptions& opts = {});
CylPartition cyl_partition_from_levels(const std::vector<LevelSet>& levels, double t);

enum class ThetaClass { vanishing, non_vanishing, inconclusive };
std::string_view to_string(ThetaClass c);

struct ThetaRow {
    double t = 0.0;
    /// One entry per target modulus.
    std::vector<double> values;
    /// Least-squares slope of log(per-level sum) over the upper half of the
    /// nonempty levels at the largest modulus; negative means the level series converges.
    double level_slope = 0.0;
    ThetaClass verdict = ThetaClass::inconclusive;
};

struct ThetaEstimate {
    double phi0 = 0.3;
    int n_max = 0;
    std::vector<double> w_moduli;
    std::vector<ThetaRow> rows;
    /// Largest non-vanishing t (0 if none) and smallest vanishing t (NaN if none).
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

/// Cylindrical partition sums of L at w = |w| e^{i phi0} for each t and |w|.
/// A t is vanishing when the sums decrease over the moduli and either the last
/// sum is below 0.5 or the level series decays geometrically (slope < -0.05);
/// it is non-vanishing when the sums increase, the last sum exceeds 2, or the
/// level series does not decay (slope >= 0).
ThetaEstimate theta_estimate(const Lineariser& L, const std::vector<double>& t_grid,
                             const std::vector<double>& w_moduli, int n_max, double phi0 = 0.3);

struct ElCheck {
    double R = 0.0;
    double singular_bound = 0.0;
    bool l0_inside = true;
    std::size_t samples = 0;
    std::size_t violations = 0;
    /// min of ||DL||_cyl - log|L/R| / 4; NaN when no sample had |L| > R.
    double min_margin = 0.0;
};

/// Samples z over the annuli |rho|^k A_0 and checks
/// ||DL(z)||_cyl >= log|L(z)/R| / 4 wherever |L(z)| > R.
/// Throws PreconditionUnverifiable if the postsingular orbit escapes and
/// DomainError if R does not exceed its bound.
ElCheck el_inequality_check(const Lineariser& L, double R, std::size_t samples, std::uint64_t seed = 1);

struct TrapCheck {
    Complex lambda;
    double radius = 0.0;
    bool contained = false;
    double max_boundary_dist = 0.0;
};

/// Image of the circle |z| = pi / (8 |lambda|) under the lineariser of
/// z -> 2 pi i e^z at 2 pi i with L'(0) = lambda, tested against D(2 pi i, pi / 2).
TrapCheck exp_lineariser_trap_check(Complex lambda);

}  // namespace poincare
