#include "poincare/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "poincare/dynamics.hpp"
#include "poincare/errors.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

namespace {

constexpr int boundary_samples = 32;
constexpr int continuation_steps = 16;

// Koebe-type inflation exp(4 rho_hyp), rho_hyp the hyperbolic distance from any
// boundary point to its nearest sample, measured in the disc of twice the radius.
const double distortion_inflation =
    std::exp(4.0 * (2.0 / (1.0 - 0.25)) * 0.5 * std::sin(std::numbers::pi / boundary_samples));

using MapFn = std::function<void(Complex, Complex&, Complex&)>;

struct Neumaier {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

bool newton(const MapFn& F, Complex target, Complex& z) {
    const double tol = 1e-10 * (1.0 + std::abs(target));
    Complex best = z;
    double best_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
        Complex v, d;
        F(z, v, d);
        const double res = std::abs(v - target);
        if (!(res < best_res)) break;
        best = z;
        best_res = res;
        if (res <= 1e-3 * tol) break;
        if (d == Complex{} || !std::isfinite(std::abs(d))) break;
        z -= (v - target) / d;
    }
    z = best;
    return best_res <= tol;
}

std::optional<Branch> trace_branch(const MapFn& F, int m, const Disc& D, Complex seed, MetricKind metric) {
    Branch b;
    b.m = m;
    b.domain = D;
    Complex at_center = seed;
    if (!newton(F, D.center, at_center)) return std::nullopt;
    double sup = 0.0, reach = 0.0;
    for (int j = 0; j < boundary_samples; ++j) {
        const Complex edge = D.center + std::polar(D.radius, 2.0 * std::numbers::pi * j / boundary_samples);
        Complex z = at_center;
        for (int s = 1; s <= continuation_steps; ++s) {
            const Complex target = D.center + (edge - D.center) * (static_cast<double>(s) / continuation_steps);
            if (!newton(F, target, z)) return std::nullopt;
        }
        if (!(std::abs(z - D.center) < D.radius)) return std::nullopt;
        Complex v, d;
        F(z, v, d);
        const Complex dphi = 1.0 / d;
        double norm = std::abs(dphi);
        if (metric != MetricKind::euclidean) norm = derivative_norm(metric, dphi, edge, z);
        sup = std::max(sup, norm);
        reach = std::max(reach, std::abs(z - at_center));
        b.samples.push_back({edge, z, dphi});
    }
    b.image_disc = {at_center, reach};
    b.norm_sup = sup * distortion_inflation;
    if (!(b.norm_sup < 1.0)) return std::nullopt;
    return b;
}

MapFn polynomial_iterate(const Polynomial& p, int n) {
    return [&p, n](Complex z, Complex& v, Complex& d) {
        d = 1.0;
        for (int i = 0; i < n; ++i) {
            Complex fv, fd;
            p.eval_both(z, fv, fd);
            d *= fd;
            z = fv;
        }
        v = z;
    };
}

FiniteIFS collect_branches(const MapFn& F, int m, const Disc& D, const std::vector<Complex>& seeds, int max_branches,
                           MetricKind metric) {
    std::vector<std::size_t> order(seeds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(seeds[a] - D.center) < std::abs(seeds[b] - D.center);
    });
    std::vector<std::optional<Branch>> traced(order.size());
    parallel_for(order.size(), [&](std::size_t i) { traced[i] = trace_branch(F, m, D, seeds[order[i]], metric); });
    FiniteIFS s;
    s.disc = D;
    s.metric = metric;
    for (auto& b : traced) {
        if (!b) continue;
        if (static_cast<int>(s.branches.size()) >= max_branches) break;
        s.branches.push_back(std::move(*b));
    }
    if (s.branches.empty()) throw NoBranches("no inverse branch maps the disc into itself");
    return s;
}

FiniteIFS ifs_on_disc(const Polynomial& p, const Disc& D, int n, int max_branches) {
    const PreimageTree tree = preimage_tree(p, D.center, n);
    std::vector<Complex> seeds;
    for (const auto& node : tree.level(n))
        if (!node.critical && std::abs(node.point - D.center) < D.radius) seeds.push_back(node.point);
    return collect_branches(polynomial_iterate(p, n), n, D, seeds, max_branches, MetricKind::euclidean);
}

double log_pressure_sum(const std::vector<double>& norms, double t) {
    std::vector<double> logs(norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i) logs[i] = t * std::log(norms[i]);
    return ordered_log_sum_exp(logs);
}

std::size_t word_count(std::size_t symbols, int p) {
    double count = std::pow(static_cast<double>(symbols), p);
    if (count > 1e7) throw WordBlowup(fmt::format("{}^{} words exceed 1e7", symbols, p));
    return static_cast<std::size_t>(std::llround(count));
}

// Calls visit(word) for every word of length p over `symbols` letters starting
// with `first`, in lexicographic order.
template <class Visit>
void for_each_word(std::size_t symbols, int p, std::size_t first, Visit&& visit) {
    std::vector<std::size_t> word(static_cast<std::size_t>(p), 0);
    word[0] = first;
    while (true) {
        visit(word);
        int pos = p - 1;
        while (pos >= 1 && ++word[static_cast<std::size_t>(pos)] == symbols) word[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 1) break;
    }
}

}  // namespace

std::vector<double> FiniteIFS::contraction_norms() const {
    std::vector<double> out;
    for (const auto& b : branches) out.push_back(b.norm_sup);
    return out;
}

FiniteIFS synthetic_ifs(const std::vector<double>& norms, const std::vector<int>& orders) {
    if (!orders.empty() && orders.size() != norms.size()) throw DomainError("orders and norms differ in length");
    FiniteIFS s;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (!(norms[i] > 0 && norms[i] < 1)) throw DomainError("contraction norms must lie in (0, 1)");
        Branch b;
        b.m = orders.empty() ? 1 : orders[i];
        b.norm_sup = norms[i];
        s.branches.push_back(b);
    }
    return s;
}

FiniteIFS build_ifs_near(const Polynomial& p, const Disc& U, int n, int max_branches) {
    if (n < 1 || max_branches < 1) throw DomainError("need n >= 1 and max_branches >= 1");
    const double R = escape_radius(p);
    std::vector<Complex> candidates{U.center};
    for (int i = 1; i < 8; ++i)
        for (int j = 0; j < 16; ++j)
            candidates.push_back(U.center + std::polar(U.radius * i / 8.0, 2.0 * std::numbers::pi * j / 16.0));
    for (Complex c : candidates) {
        if (escapes(p, c, 1000, R)) continue;
        const Disc D{c, U.radius - std::abs(c - U.center)};
        return ifs_on_disc(p, D, n, max_branches);
    }
    throw NoBranches("the region does not meet the filled Julia set");
}

FiniteIFS build_ifs_near(const Polynomial& p, const Annulus& U, int n, int max_branches) {
    if (n < 1 || max_branches < 1) throw DomainError("need n >= 1 and max_branches >= 1");
    const double R = escape_radius(p);
    const double mid = 0.5 * (U.r_inner + U.r_outer);
    for (int j = 0; j < 64; ++j) {
        const Complex c = U.center + std::polar(mid, 2.0 * std::numbers::pi * j / 64.0);
        if (escapes(p, c, 1000, R)) continue;
        return ifs_on_disc(p, Disc{c, 0.5 * (U.r_outer - U.r_inner)}, n, max_branches);
    }
    throw NoBranches("the region does not meet the filled Julia set");
}

double ifs_pressure(const FiniteIFS& s, double t, int p) {
    if (p < 1) throw DomainError("word length must be >= 1");
    if (s.branches.empty()) throw DomainError("empty system");
    word_count(s.branches.size(), p);
    return log_pressure_sum(s.contraction_norms(), t);
}

double all_words_sum(const std::vector<double>& lambdas, int p) {
    if (p < 1 || lambdas.empty()) throw DomainError("need p >= 1 and a nonempty alphabet");
    word_count(lambdas.size(), p);
    std::vector<double> partial(lambdas.size());
    parallel_for(lambdas.size(), [&](std::size_t first) {
        Neumaier acc;
        for_each_word(lambdas.size(), p, first, [&](const std::vector<std::size_t>& w) {
            double prod = 1.0;
            for (auto a : w) prod *= lambdas[a];
            acc.add(prod);
        });
        partial[first] = acc.value();
    });
    return ordered_sum(partial);
}

BowenResult bowen_dimension(const std::vector<double>& norms) {
    if (norms.empty()) throw DomainError("empty system");
    for (double l : norms)
        if (!(l > 0 && l < 1)) throw DomainError("contraction norms must lie in (0, 1)");
    BowenResult out;
    out.branch_count = norms.size();
    if (norms.size() == 1) {
        out.dim = 0.0;
        return out;
    }
    double lo = 0.0, hi = 1.0;
    while (log_pressure_sum(norms, hi) > 0) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (log_pressure_sum(norms, mid) > 0 ? lo : hi) = mid;
    }
    out.dim = 0.5 * (lo + hi);
    for (double t : {out.dim - 0.01, out.dim + 0.01}) {
        std::vector<double> per_p;
        for (int p = 1; p <= 3; ++p) per_p.push_back(log_pressure_sum(norms, t));
        out.pressure_samples[t] = per_p;
    }
    return out;
}

BowenResult bowen_dimension(const FiniteIFS& s) { return bowen_dimension(s.contraction_norms()); }

SpBound sp_lower_bound(const FiniteIFS& s, double t, int p, double C2) {
    const std::size_t I = s.branches.size();
    if (I < 2) throw Infeasible("S_p needs at least two branches");
    if (p < 1) throw DomainError("word length must be >= 1");
    word_count(I, p);
    std::vector<double> lambda(I);
    for (std::size_t i = 0; i < I; ++i) lambda[i] = std::pow(s.branches[i].norm_sup, t);
    const double Lambda = ordered_sum(lambda);

    SpBound out;
    out.k.assign(I, 0);
    std::vector<double> frac(I);
    int assigned = 0;
    for (std::size_t i = 0; i < I; ++i) {
        const double target = lambda[i] / Lambda * p;
        out.k[i] = static_cast<int>(std::floor(target));
        frac[i] = target - out.k[i];
        assigned += out.k[i];
    }
    std::vector<std::size_t> order(I);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t j = 0; assigned < p; ++j, ++assigned) ++out.k[order[j % I]];
    for (std::size_t i = 0; i < I; ++i) {
        const double target = lambda[i] / Lambda * p;
        if (!(target - 1.0 <= out.k[i] && out.k[i] < target + 1.0))
            throw Infeasible(fmt::format("no admissible k for symbol {} at p = {}", i, p));
        out.nu_p += static_cast<long long>(out.k[i]) * s.branches[i].m;
    }

    std::vector<double> sp_partial(I), full_partial(I);
    std::vector<std::size_t> count_partial(I);
    parallel_for(I, [&](std::size_t first) {
        Neumaier sp, full;
        std::size_t count = 0;
        std::vector<int> occ(I);
        for_each_word(I, p, first, [&](const std::vector<std::size_t>& w) {
            std::fill(occ.begin(), occ.end(), 0);
            double prod = 1.0;
            for (auto a : w) {
                prod *= lambda[a];
                ++occ[a];
            }
            full.add(prod);
            if (occ == out.k) {
                sp.add(prod);
                ++count;
            }
        });
        sp_partial[first] = sp.value();
        full_partial[first] = full.value();
        count_partial[first] = count;
    });
    out.sum_Sp = ordered_sum(sp_partial);
    out.full_sum = ordered_sum(full_partial);
    out.words = std::accumulate(count_partial.begin(), count_partial.end(), std::size_t{0});
    const double delta = (3.0 * static_cast<double>(I) - 1.0) / 2.0;
    out.ratio = out.sum_Sp / std::pow(Lambda, p);
    out.bound = C2 / std::pow(static_cast<double>(p), delta);
    out.rhs = out.bound * std::pow(Lambda, p);
    out.holds = out.ratio >= out.bound;
    return out;
}

FiniteIFS build_lineariser_far_ifs(const Lineariser& L, int k, int max_branches) {
    if (k < 1 || max_branches < 1) throw DomainError("need k >= 1 and max_branches >= 1");
    const double rho_abs = std::abs(L.rho);
    const double inner = L.r0 * std::pow(rho_abs, k);
    const double outer = inner * rho_abs;
    const double mid = inner * std::sqrt(rho_abs);
    const LevelSetOptions opts{default_tree_cap, true};

    // Move the centre onto the cluster of L^-1(c) in the annulus: a few rounds of
    // replacing c by its preimage closest to the middle radius.
    Complex c = std::polar(mid, 0.3);
    for (int round = 0; round < 4; ++round) {
        const LevelSet ls = level_set(L, c, k, opts);
        if (ls.points.empty()) throw NoBranches(fmt::format("L^-1 misses annulus {}", k));
        Complex best = ls.points.front().z;
        for (const auto& pt : ls.points)
            if (std::abs(std::log(std::abs(pt.z) / mid)) < std::abs(std::log(std::abs(best) / mid))) best = pt.z;
        c = best;
    }
    const double ac = std::abs(c);
    const double s = std::min(0.25 * ac, 0.95 * std::min(ac - inner, outer - ac));
    const Disc D{c, s};
    std::vector<Complex> seeds;
    for (const auto& pt : level_set(L, c, k, opts).points)
        if (std::abs(pt.z - c) < s) seeds.push_back(pt.z);
    const MapFn F = [&L](Complex z, Complex& v, Complex& d) { evaluate_both(L, z, v, d); };
    return collect_branches(F, 1, D, seeds, max_branches, MetricKind::cylindrical);
}

BowenResult lineariser_far_ifs(const Lineariser& L, int k, int max_branches) {
    return bowen_dimension(build_lineariser_far_ifs(L, k, max_branches));
}

}  // namespace poincare
