#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poincare/metric.hpp"
#include "poincare/polynomial.hpp"

namespace poincare {

enum class FixedPointKind { attracting, repelling, indifferent };

std::string_view to_string(FixedPointKind k);

struct FixedPointInfo {
    Complex point;
    Complex multiplier;
    FixedPointKind kind;
};

/// Roots of P(z) - z with their multipliers P'(z); requires degree >= 2.
std::vector<FixedPointInfo> fixed_points(const Polynomial& p);

/// R with |z| > R  =>  |P(z)| > 2|z|.
double escape_radius(const Polynomial& p);

/// True when the orbit of z leaves the disc of the escape radius within iter_cap steps.
bool escapes(const Polynomial& p, Complex z, int iter_cap, double radius);

/// Default evaluation point for partition functions and pressure.
inline constexpr Complex default_base_point{2.0, 2.0};

struct PreimageNode {
    Complex point;
    /// (P^depth)'(point), accumulated by the chain rule along the branch.
    Complex cum_deriv;
    int depth = 0;
    /// Index into the previous level; -1 for the root.
    std::int64_t parent = -1;
    /// cum_deriv vanishes: the branch passed through a critical point.
    bool critical = false;
};

struct PreimageTree {
    Complex target;
    int depth = 0;
    std::vector<std::vector<PreimageNode>> levels;
    bool truncated = false;

    const std::vector<PreimageNode>& level(int n) const { return levels.at(static_cast<std::size_t>(n)); }
    std::size_t critical_count(int n) const;
};

inline constexpr std::size_t default_tree_cap = std::size_t{1} << 22;

/// Breadth-first iterated preimages of w down to depth n. Each level solves
/// P(z) = y for every node y of the previous level; children of node i occupy
/// slots [d*i, d*i + d). If a level would exceed cap nodes it is cut to the
/// first cap nodes in tree order and `truncated` is set. When region is given
/// only the final level is filtered to it.
PreimageTree preimage_tree(const Polynomial& p, Complex w, int n, std::size_t cap = default_tree_cap,
                           const std::optional<Annulus>& region = std::nullopt);

/// Z^m(t, P^n, w) over the level-n nodes of a prebuilt tree, summed in tree order.
/// Throws CriticalValueOnOrbit if a level-n node is critical.
double partition_function(const PreimageTree& tree, int n, double t, MetricKind m);
/// log of the above, evaluated in log space.
double log_partition_function(const PreimageTree& tree, int n, double t, MetricKind m);

/// Builds the depth-n tree of w and evaluates Z^m(t, P^n, w).
double partition_function(const Polynomial& p, int n, Complex w, double t, MetricKind m);

struct PressureLevel {
    int n;
    double log_z;
};

struct PressureEstimate {
    double t = 0.0;
    std::vector<PressureLevel> levels;
    double pressure = 0.0;
    /// Levels used by the regression: the last ceil(n_max / 2).
    int retained = 0;
    std::string method = "tail-max-slope";
    Complex w_used;
};

/// Precomputed spherical derivative norms of a preimage tree; evaluates the
/// pressure for many t without rebuilding the tree.
class PressureModel {
public:
    PressureModel(const Polynomial& p, Complex w, int n_max, MetricKind metric = MetricKind::spherical);

    PressureEstimate estimate(double t) const;
    double pressure(double t) const { return estimate(t).pressure; }
    int n_max() const { return n_max_; }
    Complex w() const { return w_; }
    const PreimageTree& tree() const { return tree_; }

private:
    Complex w_;
    int n_max_;
    PreimageTree tree_;
    /// Per level: log of the derivative norm of each node.
    std::vector<std::vector<double>> log_norms_;
};

/// Slope of the least-squares line through (n, log Z_n) over the last ceil(n_max/2) levels.
PressureEstimate pressure_curve(const Polynomial& p, double t, Complex w, int n_max);

/// Smallest zero of the pressure on [0, 2], bisected to |dt| <= 1e-3.
/// Throws NoSignChange when the pressure stays positive on [0, 2].
double hypdim_estimate(const Polynomial& p, Complex w, int n_max);
double hypdim_estimate(const PressureModel& model);

enum class TceVerdict { consistent_with_tce, inconclusive };
std::string_view to_string(TceVerdict v);

struct TceDiagnostic {
    double t_probe = 4.0;
    double pressure_at_probe = 0.0;
    TceVerdict verdict = TceVerdict::inconclusive;
};

/// Pressure at t = 4; negative (below -0.05) pressure is consistent with TCE.
TceDiagnostic tce_diagnostic(const Polynomial& p, Complex w, int n_max);

/// Orbits of the critical points, iterated until they escape or repeat.
/// Returns the maximum modulus seen, or nullopt if some orbit escapes.
std::optional<double> postcritical_bound(const Polynomial& p, int iterations = 500);

}  // namespace poincare
