#include "poincare/vanishing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "poincare/errors.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

double level_slope(const CylPartition& c) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < c.per_level.size(); ++i) {
        if (c.per_level[i] > 0) {
            x.push_back(c.levels[i]);
            y.push_back(std::log(c.per_level[i]));
        }
    }
    if (x.size() < 2) return nan_value;
    const std::size_t keep = std::max<std::size_t>(2, (x.size() + 1) / 2);
    x.erase(x.begin(), x.end() - static_cast<std::ptrdiff_t>(keep));
    y.erase(y.begin(), y.end() - static_cast<std::ptrdiff_t>(keep));
    return slope(x, y);
}

ThetaClass classify(const std::vector<double>& v, double s) {
    const std::size_t k = v.size();
    const std::size_t from = k >= 3 ? k - 3 : 0;
    bool increasing = k >= 2, decreasing = k >= 2;
    for (std::size_t i = from + 1; i < k; ++i) {
        increasing = increasing && v[i] > v[i - 1];
        decreasing = decreasing && v[i] < v[i - 1];
    }
    if (increasing || v.back() > 2.0 || (std::isfinite(s) && s >= 0.0)) return ThetaClass::non_vanishing;
    if (decreasing && (v.back() < 0.5 || (std::isfinite(s) && s < -0.05))) return ThetaClass::vanishing;
    return ThetaClass::inconclusive;
}

std::optional<double> singular_bound(const Lineariser& L) {
    if (L.base.is_polynomial()) return postcritical_bound(L.base.polynomial());
    // The only singular value of a e^z is the asymptotic value 0.
    Complex z{};
    double bound = 0.0;
    for (int i = 0; i < 500; ++i) {
        z = L.base.eval(z);
        const double r = std::abs(z);
        if (!(r < 1e8)) return std::nullopt;
        bound = std::max(bound, r);
    }
    return bound;
}

}  // namespace

std::string_view to_string(ThetaClass c) {
    switch (c) {
        case ThetaClass::vanishing: return "vanishing";
        case ThetaClass::non_vanishing: return "non-vanishing";
        case ThetaClass::inconclusive: return "inconclusive";
    }
    return "?";
}

CylPartition cyl_partition_from_levels(const std::vector<LevelSet>& levels, double t) {
    CylPartition out;
    for (const auto& ls : levels) {
        std::vector<double> terms;
        terms.reserve(ls.points.size());
        const double aw = std::abs(ls.w);
        for (const auto& p : ls.points) {
            if (p.critical) throw CriticalValueOnOrbit(fmt::format("critical level-set point at level {}", ls.n));
            const double norm = std::abs(p.deriv_L) * std::abs(p.z) / aw;
            terms.push_back(t == 0.0 ? 1.0 : std::pow(norm, -t));
        }
        out.levels.push_back(ls.n);
        out.per_level.push_back(ordered_sum(terms));
        out.counts.push_back(ls.points.size());
    }
    out.value = ordered_sum(out.per_level);
    out.truncation_flag = !out.per_level.empty() && out.per_level.back() > 1e-6 * out.value;
    return out;
}

CylPartition cyl_partition_L(const Lineariser& L, double t, Complex w, int n_min, int n_max,
                             const LevelSetOptions& opts) {
    return cyl_partition_from_levels(level_sets(L, w, n_min, n_max, opts), t);
}

ThetaEstimate theta_estimate(const Lineariser& L, const std::vector<double>& t_grid,
                             const std::vector<double>& w_moduli, int n_max, double phi0) {
    if (t_grid.empty() || w_moduli.empty()) throw DomainError("empty t grid or modulus list");
    for (std::size_t i = 1; i < w_moduli.size(); ++i)
        if (!(w_moduli[i] > w_moduli[i - 1])) throw DomainError("target moduli must increase");
    ThetaEstimate est;
    est.phi0 = phi0;
    est.n_max = n_max;
    est.w_moduli = w_moduli;
    std::vector<std::vector<LevelSet>> sets;
    for (double m : w_moduli) sets.push_back(level_sets(L, std::polar(m, phi0), 1, n_max));
    double lo = 0.0, hi = nan_value;
    for (double t : t_grid) {
        ThetaRow row;
        row.t = t;
        CylPartition last;
        for (const auto& s : sets) {
            last = cyl_partition_from_levels(s, t);
            row.values.push_back(last.value);
        }
        row.level_slope = level_slope(last);
        row.verdict = t == 0.0 ? ThetaClass::non_vanishing : classify(row.values, row.level_slope);
        if (row.verdict == ThetaClass::non_vanishing) lo = std::max(lo, t);
        if (row.verdict == ThetaClass::vanishing && !(hi <= t)) hi = t;
        est.rows.push_back(std::move(row));
    }
    est.bracket_lo = lo;
    est.bracket_hi = hi;
    return est;
}

ElCheck el_inequality_check(const Lineariser& L, double R, std::size_t samples, std::uint64_t seed) {
    if (!(R > 0)) throw DomainError("R must be positive");
    const auto bound = singular_bound(L);
    if (!bound) throw PreconditionUnverifiable("postsingular orbit does not stay bounded");
    if (!(*bound < R)) throw DomainError(fmt::format("R = {} does not exceed the singular bound {}", R, *bound));
    ElCheck out;
    out.R = R;
    out.singular_bound = *bound;
    out.l0_inside = std::abs(evaluate(L, 0.0)) < R;
    out.min_margin = nan_value;

    constexpr int annuli = 6;
    const double rho_abs = std::abs(L.rho);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t attempts = 20 * samples;
    for (std::size_t i = 0; i < attempts && out.samples < samples; ++i) {
        const int k = static_cast<int>(i % annuli);
        const double r = L.r0 * std::pow(rho_abs, k + unit(rng));
        const Complex z = std::polar(r, 2.0 * std::numbers::pi * unit(rng));
        Complex v, d;
        evaluate_both(L, z, v, d);
        const double av = std::abs(v), ad = std::abs(d);
        if (!std::isfinite(av) || !std::isfinite(ad) || av <= R) continue;
        ++out.samples;
        const double margin = ad * r / av - 0.25 * std::log(av / R);
        if (margin < 0) ++out.violations;
        if (!(out.min_margin <= margin)) out.min_margin = margin;
    }
    return out;
}

TrapCheck exp_lineariser_trap_check(Complex lambda) {
    const double al = std::abs(lambda);
    if (!(al > 0 && al < 1)) throw DomainError("trap check needs 0 < |lambda| < 1");
    const Complex two_pi_i{0.0, 2.0 * std::numbers::pi};
    const Lineariser L = koenigs_series(BaseMap(ScaledExponential{two_pi_i}), two_pi_i, default_series_order, lambda);
    TrapCheck out;
    out.lambda = lambda;
    out.radius = std::numbers::pi / (8.0 * al);
    std::vector<double> dist(2048);
    parallel_for(dist.size(), [&](std::size_t k) {
        const Complex z = std::polar(out.radius, 2.0 * std::numbers::pi * static_cast<double>(k) / 2048.0);
        dist[k] = std::abs(evaluate(L, z) - two_pi_i);
    });
    out.max_boundary_dist = 0.0;
    out.contained = true;
    for (double d : dist) {
        if (!(d < std::numbers::pi / 2)) out.contained = false;
        out.max_boundary_dist = std::isfinite(d) ? std::max(out.max_boundary_dist, d)
                                                 : std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace poincare
