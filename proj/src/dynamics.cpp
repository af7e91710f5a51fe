#include "poincare/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poincare/errors.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

std::string_view to_string(FixedPointKind k) {
    switch (k) {
        case FixedPointKind::attracting: return "attracting";
        case FixedPointKind::repelling: return "repelling";
        case FixedPointKind::indifferent: return "indifferent";
    }
    return "unknown";
}

std::string_view to_string(TceVerdict v) {
    return v == TceVerdict::consistent_with_tce ? "consistent-with-TCE" : "inconclusive";
}

namespace {

void require_dynamical(const Polynomial& p) {
    if (p.degree() < 2) throw DomainError("dynamical operations need degree >= 2");
}

}  // namespace

std::vector<FixedPointInfo> fixed_points(const Polynomial& p) {
    require_dynamical(p);
    auto c = p.coeffs();
    c[1] -= 1.0;
    const auto pts = roots(Polynomial(std::move(c)));
    std::vector<FixedPointInfo> out;
    out.reserve(pts.size());
    for (auto z : pts) {
        const Complex mult = p.eval_derivative(z);
        const double m = std::abs(mult);
        FixedPointKind kind = FixedPointKind::indifferent;
        if (m < 1.0 - 1e-9) kind = FixedPointKind::attracting;
        else if (m > 1.0 + 1e-9) kind = FixedPointKind::repelling;
        out.push_back({z, mult, kind});
    }
    return out;
}

double escape_radius(const Polynomial& p) {
    require_dynamical(p);
    const auto& c = p.coeffs();
    double tail = 0.0;
    for (int i = 0; i < p.degree(); ++i) tail += std::abs(c[i]);
    const double lead = std::abs(p.leading());
    return std::max({2.0, 2.0 * tail / lead, (2.0 + tail) / lead});
}

bool escapes(const Polynomial& p, Complex z, int iter_cap, double radius) {
    for (int i = 0; i < iter_cap; ++i) {
        if (std::abs(z) > radius) return true;
        z = p.eval(z);
    }
    return std::abs(z) > radius;
}

std::size_t PreimageTree::critical_count(int n) const {
    const auto& lv = level(n);
    return static_cast<std::size_t>(std::count_if(lv.begin(), lv.end(), [](const auto& nd) { return nd.critical; }));
}

PreimageTree preimage_tree(const Polynomial& p, Complex w, int n, std::size_t cap,
                           const std::optional<Annulus>& region) {
    require_dynamical(p);
    if (n < 0) throw DomainError("preimage_tree: depth must be nonnegative");
    const auto d = static_cast<std::size_t>(p.degree());
    if (cap < d) throw DomainError("preimage_tree: cap must be at least the degree");

    PreimageTree tree;
    tree.target = w;
    tree.depth = n;
    tree.levels.reserve(static_cast<std::size_t>(n) + 1);
    tree.levels.push_back({PreimageNode{w, 1.0, 0, -1, false}});

    const double crit_scale = 1e-9 * std::abs(p.leading()) * static_cast<double>(d);
    for (int k = 1; k <= n; ++k) {
        const auto& parents = tree.levels.back();
        std::size_t n_parents = parents.size();
        if (n_parents * d > cap) {
            n_parents = cap / d;
            tree.truncated = true;
        }
        std::vector<PreimageNode> children(n_parents * d);
        parallel_for(n_parents, [&](std::size_t i) {
            const auto& parent = parents[i];
            const auto sols = roots(p.shifted(parent.point));
            for (std::size_t j = 0; j < d; ++j) {
                const Complex z = sols[j];
                const Complex dz = p.eval_derivative(z);
                const bool crit = parent.critical ||
                                  std::abs(dz) <= crit_scale * std::pow(1.0 + std::abs(z), static_cast<double>(d) - 1.0);
                children[i * d + j] =
                    PreimageNode{z, crit ? Complex{} : parent.cum_deriv * dz, k, static_cast<std::int64_t>(i), crit};
            }
        });
        tree.levels.push_back(std::move(children));
    }
    if (region && n > 0) {
        auto& last = tree.levels.back();
        std::erase_if(last, [&](const PreimageNode& nd) { return !region->contains(nd.point); });
    }
    return tree;
}

namespace {

std::vector<double> level_log_norms(const PreimageTree& tree, int n, MetricKind m) {
    const auto& lv = tree.level(n);
    std::vector<double> out(lv.size());
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const auto& nd = lv[i];
        if (nd.critical) throw CriticalValueOnOrbit("partition function: critical preimage at level " + std::to_string(n));
        out[i] = log_derivative_norm(m, std::log(std::abs(nd.cum_deriv)), nd.point, tree.target);
    }
    return out;
}

}  // namespace

double log_partition_function(const PreimageTree& tree, int n, double t, MetricKind m) {
    if (n == 0) return 0.0;
    auto logs = level_log_norms(tree, n, m);
    for (auto& v : logs) v *= -t;
    return ordered_log_sum_exp(logs);
}

double partition_function(const PreimageTree& tree, int n, double t, MetricKind m) {
    if (n == 0) return 1.0;
    auto logs = level_log_norms(tree, n, m);
    std::vector<double> terms(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) terms[i] = std::exp(-t * logs[i]);
    return ordered_sum(terms);
}

double partition_function(const Polynomial& p, int n, Complex w, double t, MetricKind m) {
    const auto tree = preimage_tree(p, w, n);
    return partition_function(tree, n, t, m);
}

PressureModel::PressureModel(const Polynomial& p, Complex w, int n_max, MetricKind metric)
    : w_(w), n_max_(n_max), tree_(preimage_tree(p, w, n_max)) {
    if (n_max < 2) throw DomainError("pressure needs n_max >= 2");
    log_norms_.resize(static_cast<std::size_t>(n_max) + 1);
    for (int n = 1; n <= n_max; ++n) log_norms_[n] = level_log_norms(tree_, n, metric);
}

namespace {

double regression_slope(const std::vector<PressureLevel>& pts) {
    const double k = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& p : pts) {
        sx += p.n;
        sy += p.log_z;
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        sxx += (p.n - mx) * (p.n - mx);
        sxy += (p.n - mx) * (p.log_z - my);
    }
    return sxy / sxx;
}

}  // namespace

PressureEstimate PressureModel::estimate(double t) const {
    PressureEstimate est;
    est.t = t;
    est.w_used = w_;
    std::vector<double> scaled;
    for (int n = 1; n <= n_max_; ++n) {
        const auto& logs = log_norms_[n];
        scaled.resize(logs.size());
        for (std::size_t i = 0; i < logs.size(); ++i) scaled[i] = -t * logs[i];
        est.levels.push_back({n, ordered_log_sum_exp(scaled)});
    }
    est.retained = std::max(2, (n_max_ + 1) / 2);
    const std::vector<PressureLevel> tail(est.levels.end() - est.retained, est.levels.end());
    est.pressure = regression_slope(tail);
    return est;
}

PressureEstimate pressure_curve(const Polynomial& p, double t, Complex w, int n_max) {
    return PressureModel(p, w, n_max).estimate(t);
}

double hypdim_estimate(const PressureModel& model) {
    constexpr double lo_t = 0.0, hi_t = 2.0, grid_step = 0.05, tol = 1e-3;
    double prev_t = lo_t;
    double prev_p = model.pressure(prev_t);
    if (prev_p == 0.0) return prev_t;
    for (double t = lo_t + grid_step; t <= hi_t + 1e-12; t += grid_step) {
        const double pt = model.pressure(t);
        if (pt == 0.0) return t;
        if ((prev_p > 0.0) != (pt > 0.0)) {
            double a = prev_t, b = t;
            const bool a_positive = prev_p > 0.0;
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                const double pm = model.pressure(mid);
                if (pm == 0.0) return mid;
                if ((pm > 0.0) == a_positive) a = mid;
                else b = mid;
            }
            return 0.5 * (a + b);
        }
        prev_t = t;
        prev_p = pt;
    }
    throw NoSignChange("pressure does not change sign on [0, 2]");
}

double hypdim_estimate(const Polynomial& p, Complex w, int n_max) {
    return hypdim_estimate(PressureModel(p, w, n_max));
}

TceDiagnostic tce_diagnostic(const Polynomial& p, Complex w, int n_max) {
    TceDiagnostic out;
    out.pressure_at_probe = pressure_curve(p, out.t_probe, w, n_max).pressure;
    out.verdict = out.pressure_at_probe < -0.05 ? TceVerdict::consistent_with_tce : TceVerdict::inconclusive;
    return out;
}

std::optional<double> postcritical_bound(const Polynomial& p, int iterations) {
    require_dynamical(p);
    const double radius = escape_radius(p);
    double bound = 0.0;
    for (auto c : roots(p.derivative())) {
        Complex z = p.eval(c);
        for (int i = 0; i < iterations; ++i) {
            bound = std::max(bound, std::abs(z));
            if (std::abs(z) > radius) return std::nullopt;
            z = p.eval(z);
        }
    }
    return bound;
}

}  // namespace poincare
