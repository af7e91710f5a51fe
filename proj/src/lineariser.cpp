#include "poincare/lineariser.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "poincare/errors.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Coefficients of u = L - xi0 for a polynomial base with Taylor coefficients b at xi0.
std::vector<Complex> koenigs_polynomial(const std::vector<Complex>& b, Complex rho, Complex a1, int order) {
    const int d = static_cast<int>(b.size()) - 1;
    const auto len = static_cast<std::size_t>(order) + 1;
    // pw[j][n] = [z^n] u^j
    std::vector<std::vector<Complex>> pw(static_cast<std::size_t>(d) + 1, std::vector<Complex>(len));
    pw[1][1] = a1;
    const double log_rho = std::log(std::abs(rho));
    Complex rho_n = rho;
    for (int n = 2; n <= order; ++n) {
        rho_n *= rho;
        Complex s{};
        for (int j = 2; j <= d; ++j) {
            Complex acc{};
            for (int k = 1; k < n; ++k) acc += pw[1][k] * pw[j - 1][n - k];
            pw[j][n] = acc;
            s += b[j] * acc;
        }
        Complex an{};
        if (n * log_rho < 700.0) {
            const Complex den = rho_n - rho;
            if (std::abs(den) < 1e-12) throw ResonanceBlowup(fmt::format("|rho^{} - rho| < 1e-12", n));
            an = s / den;
        }
        pw[1][n] = an;
    }
    return pw[1];
}

// Coefficients of u = L - xi0 for z -> a e^z, where a e^xi0 = rho; e = exp(u).
std::vector<Complex> koenigs_exponential(Complex rho, Complex a1, int order) {
    const auto len = static_cast<std::size_t>(order) + 1;
    std::vector<Complex> u(len), e(len);
    e[0] = 1.0;
    if (order >= 1) {
        u[1] = a1;
        e[1] = a1;
    }
    const double log_rho = std::log(std::abs(rho));
    Complex rho_n = rho;
    for (int n = 2; n <= order; ++n) {
        rho_n *= rho;
        Complex rest{};
        for (int k = 1; k < n; ++k) rest += static_cast<double>(k) * u[k] * e[n - k];
        rest /= static_cast<double>(n);
        Complex an{};
        if (n * log_rho < 700.0) {
            const Complex den = rho_n - rho;
            if (std::abs(den) < 1e-12) throw ResonanceBlowup(fmt::format("|rho^{} - rho| < 1e-12", n));
            an = rho * rest / den;
        }
        u[n] = an;
        e[n] = an + rest;
    }
    return u;
}

Complex divide_by_power(Complex z, Complex rho, int n) {
    for (int i = 0; i < n; ++i) z /= rho;
    return z;
}

Complex multiply_by_power(Complex z, Complex rho, int n) {
    for (int i = 0; i < n; ++i) z *= rho;
    return z;
}

double orient(Complex a, Complex b, Complex c) {
    return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

bool segments_cross(Complex p1, Complex p2, Complex p3, Complex p4) {
    const double d1 = orient(p3, p4, p1);
    const double d2 = orient(p3, p4, p2);
    const double d3 = orient(p1, p2, p3);
    const double d4 = orient(p1, p2, p4);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool closed_polygon_simple(const std::vector<Complex>& poly) {
    const std::size_t n = poly.size();
    for (auto p : poly)
        if (!finite(p)) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = poly[i], b = poly[(i + 1) % n];
        double xmin = std::min(a.real(), b.real()), xmax = std::max(a.real(), b.real());
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const Complex c = poly[j], d = poly[(j + 1) % n];
            if (std::max(c.real(), d.real()) < xmin || std::min(c.real(), d.real()) > xmax) continue;
            if (segments_cross(a, b, c, d)) return false;
        }
    }
    return true;
}

bool disc_is_univalent(const Lineariser& L, double radius) {
    const double floor = 1e-10 * std::abs(L.a1());
    for (int i = 0; i < 16; ++i) {
        const double r = radius * (i + 1) / 16.0;
        for (int j = 0; j < 16; ++j) {
            Complex v, d;
            evaluate_both(L, std::polar(r, two_pi * (j + 0.5 * (i % 2)) / 16.0), v, d);
            if (!finite(d) || std::abs(d) <= floor) return false;
        }
    }
    std::vector<Complex> boundary(1024);
    for (std::size_t k = 0; k < boundary.size(); ++k)
        boundary[k] = evaluate(L, std::polar(radius, two_pi * static_cast<double>(k) / 1024.0));
    return closed_polygon_simple(boundary);
}

void self_test(Lineariser& L) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double rmax = L.safe_eval_radius / std::abs(L.rho);
    int failures = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Complex z = std::polar(rmax * std::sqrt(unit(rng)), two_pi * unit(rng));
        const Complex lhs = evaluate(L, L.rho * z);
        const Complex rhs = L.base.eval(evaluate(L, z));
        const double err = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
        worst = std::max(worst, std::isfinite(err) ? err : 1.0);
        if (!(err <= 1e-10)) ++failures;
    }
    if (failures > 0)
        L.warnings.push_back(fmt::format("functional equation residual above 1e-10 at {} of 100 samples (worst {:.3e})",
                                         failures, worst));
}

}  // namespace

Lineariser koenigs_series(const BaseMap& base, Complex xi0, int order, Complex a1) {
    if (order < 1) throw DomainError("series order must be >= 1");
    if (a1 == Complex{}) throw DomainError("a1 must be nonzero");
    const Complex fx = base.eval(xi0);
    if (std::abs(fx - xi0) > 1e-8 * (1.0 + std::abs(xi0)))
        throw DomainError(fmt::format("xi0 is not a fixed point: |f(xi0) - xi0| = {:.3e}", std::abs(fx - xi0)));
    const Complex rho = base.derivative(xi0);
    if (std::abs(rho) <= 1.0 + 1e-9) throw NotRepelling(fmt::format("|f'(xi0)| = {:.12g} <= 1", std::abs(rho)));

    std::vector<Complex> u;
    if (base.is_polynomial()) {
        u = koenigs_polynomial(base.polynomial().taylor_at(xi0), rho, a1, order);
    } else {
        u = koenigs_exponential(rho, a1, order);
    }
    u[0] = xi0;
    Lineariser L{base, xi0, rho, PowerSeries(std::move(u)), 0.0, 0.0, 0.0, {}};
    L.tail_radius = L.series.tail_radius(1e-14);
    univalence_radius(L);
    self_test(L);
    return L;
}

double univalence_radius(Lineariser& L) {
    const double rho_abs = std::abs(L.rho);
    L.safe_eval_radius = L.tail_radius;
    for (double r = rho_abs; r >= 1e-6; r /= 1.1) {
        if (disc_is_univalent(L, r * rho_abs)) {
            L.r0 = r;
            L.safe_eval_radius = std::min(L.tail_radius, r * rho_abs);
            return r;
        }
    }
    throw NoUnivalentDisc("no univalent disc above radius 1e-6");
}

Lineariser rescaled(const Lineariser& L, Complex lambda) {
    if (lambda == Complex{}) throw DomainError("rescaling factor must be nonzero");
    BaseMap conj(L.base.polynomial().conjugated(lambda));
    return koenigs_series(conj, lambda * L.xi0, L.series.order(), lambda * L.a1());
}

int descent_depth(const Lineariser& L, Complex z) {
    const double rho_abs = std::abs(L.rho);
    double r = std::abs(z);
    int n = 0;
    while (r > L.safe_eval_radius) {
        r /= rho_abs;
        ++n;
    }
    return n;
}

Complex evaluate_at_depth(const Lineariser& L, Complex z, int n) {
    Complex v = L.series.eval(divide_by_power(z, L.rho, n));
    for (int i = 0; i < n; ++i) v = L.base.eval(v);
    return v;
}

Complex evaluate(const Lineariser& L, Complex z) { return evaluate_at_depth(L, z, descent_depth(L, z)); }

void evaluate_both(const Lineariser& L, Complex z, Complex& value, Complex& derivative) {
    const int n = descent_depth(L, z);
    Complex v, d;
    L.series.eval_both(divide_by_power(z, L.rho, n), v, d);
    d = divide_by_power(d, L.rho, n);
    for (int i = 0; i < n; ++i) {
        Complex fv, fd;
        L.base.eval_both(v, fv, fd);
        d *= fd;
        v = fv;
    }
    value = v;
    derivative = d;
}

Complex lineariser_derivative(const Lineariser& L, Complex z) {
    Complex v, d;
    evaluate_both(L, z, v, d);
    return d;
}

CoreInverter::CoreInverter(const Lineariser& L) : L_(&L), radius_(L.core_radius()), image_radius_(0.0) {
    constexpr int grid = 64;
    seeds_.reserve(grid * grid + 1);
    seeds_.push_back(0.0);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            seeds_.push_back(std::polar(radius_ * (i + 0.5) / grid, two_pi * (j + 0.5 * (i % 2)) / grid));
    seed_values_.resize(seeds_.size());
    parallel_for(seeds_.size(), [&](std::size_t k) { seed_values_[k] = evaluate(L, seeds_[k]); });
    std::vector<double> boundary(1024);
    parallel_for(boundary.size(), [&](std::size_t k) {
        boundary[k] = std::abs(evaluate(L, std::polar(radius_, two_pi * static_cast<double>(k) / 1024.0)) - L.xi0);
    });
    image_radius_ = 1.05 * *std::max_element(boundary.begin(), boundary.end());
}

std::optional<Complex> CoreInverter::invert(Complex zeta) const {
    if (!(std::abs(zeta - L_->xi0) <= image_radius_)) return std::nullopt;
    const double tol = 1e-11 * (1.0 + std::abs(zeta));
    std::vector<std::size_t> order(seeds_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    constexpr std::size_t tries = 4;
    std::partial_sort(order.begin(), order.begin() + tries, order.end(), [&](std::size_t a, std::size_t b) {
        const double da = std::abs(seed_values_[a] - zeta), db = std::abs(seed_values_[b] - zeta);
        return da < db || (da == db && a < b);
    });
    for (std::size_t t = 0; t < tries; ++t) {
        Complex z = seeds_[order[t]];
        Complex v, d;
        evaluate_both(*L_, z, v, d);
        double res = std::abs(v - zeta);
        for (int it = 0; it < 60 && res > tol; ++it) {
            if (d == Complex{} || !finite(d)) break;
            Complex step = (v - zeta) / d;
            bool improved = false;
            for (int h = 0; h < 20; ++h) {
                Complex zn = z - step, vn, dn;
                evaluate_both(*L_, zn, vn, dn);
                const double rn = std::abs(vn - zeta);
                if (rn < res) {
                    z = zn;
                    v = vn;
                    d = dn;
                    res = rn;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        if (res <= tol && std::abs(z) <= radius_ * (1.0 + 1e-12)) return z;
    }
    return std::nullopt;
}

std::optional<Complex> CoreInverter::invert_fundamental(Complex zeta) const {
    auto z = invert(zeta);
    if (!z) return std::nullopt;
    const double r = std::abs(*z);
    if (r < L_->r0 || r >= radius_) return std::nullopt;
    return z;
}

std::vector<LevelSet> level_sets(const Lineariser& L, Complex w, int n_min, int n_max, const LevelSetOptions& opts) {
    if (!L.base.is_polynomial()) throw DomainError("level sets need a polynomial base map");
    if (n_min < 1 || n_max < n_min) throw DomainError("level range must satisfy 1 <= n_min <= n_max");
    const CoreInverter inverter(L);
    if (!opts.allow_core_target && inverter.invert(w)) throw TargetInsideCore("w lies in the image of the core disc");
    const PreimageTree tree = preimage_tree(L.base.polynomial(), w, n_max, opts.cap);
    std::vector<LevelSet> out;
    for (int n = n_min; n <= n_max; ++n) {
        const auto& nodes = tree.level(n);
        std::vector<std::optional<Complex>> hits(nodes.size());
        parallel_for(nodes.size(), [&](std::size_t i) { hits[i] = inverter.invert_fundamental(nodes[i].point); });
        LevelSet ls;
        ls.n = n;
        ls.w = w;
        ls.truncated = tree.truncated;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!hits[i]) continue;
            const Complex u = *hits[i];
            Complex lu, du;
            evaluate_both(L, u, lu, du);
            LevelSetPoint p;
            p.z = multiply_by_power(u, L.rho, n);
            p.zeta = nodes[i].point;
            p.deriv_L = divide_by_power(du * nodes[i].cum_deriv, L.rho, n);
            p.critical = nodes[i].critical;
            ls.points.push_back(p);
        }
        out.push_back(std::move(ls));
    }
    return out;
}

LevelSet level_set(const Lineariser& L, Complex w, int n, const LevelSetOptions& opts) {
    return std::move(level_sets(L, w, n, n, opts).front());
}

}  // namespace poincare
