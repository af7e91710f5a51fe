#include "poincare/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "poincare/errors.hpp"

namespace poincare {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
    if (coeffs_.empty()) throw DomainError("zero polynomial");
}

Polynomial Polynomial::monomial(int degree, Complex lead) {
    std::vector<Complex> c(static_cast<std::size_t>(degree) + 1, Complex{});
    c.back() = lead;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::quadratic(Complex c) { return Polynomial({c, 0.0, 1.0}); }

Complex Polynomial::eval(Complex z) const {
    Complex acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Complex Polynomial::eval_derivative(Complex z) const {
    Complex value, deriv;
    eval_both(z, value, deriv);
    return deriv;
}

void Polynomial::eval_both(Complex z, Complex& value, Complex& derivative) const {
    Complex p = coeffs_.back();
    Complex dp{};
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    value = p;
    derivative = dp;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() == 1) throw DomainError("derivative of a constant is the zero polynomial");
    std::vector<Complex> d;
    d.reserve(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<double>(i));
    return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(Complex w) const {
    auto c = coeffs_;
    c[0] -= w;
    if (c.size() == 1 && c[0] == Complex{}) throw DomainError("shift produced the zero polynomial");
    return Polynomial(std::move(c));
}

Polynomial Polynomial::conjugated(Complex lambda) const {
    // lambda * sum c_i (z/lambda)^i = sum c_i lambda^(1-i) z^i
    auto c = coeffs_;
    Complex scale = lambda;
    for (auto& ci : c) {
        ci *= scale;
        scale /= lambda;
    }
    return Polynomial(std::move(c));
}

std::vector<Complex> Polynomial::taylor_at(Complex center) const {
    // Repeated synthetic division by (z - center).
    auto work = coeffs_;
    const auto n = work.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = n - 1; i > k; --i) work[i - 1] += center * work[i];
        out[k] = work[k];
    }
    return out;
}

double Polynomial::magnitude_scale(double abs_z) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * abs_z + std::abs(*it);
    return acc;
}

double root_residual_bound(const Polynomial& p, Complex z, double tol) {
    const double az = std::abs(z);
    const double spec_bound = std::pow(1.0 + az, p.degree());
    return tol * std::max(spec_bound, 16.0 * p.magnitude_scale(az));
}

namespace {

Complex newton_polish(const Polynomial& p, Complex z) {
    for (int i = 0; i < 3; ++i) {
        Complex v, d;
        p.eval_both(z, v, d);
        if (v == Complex{} || d == Complex{}) break;
        const Complex step = v / d;
        const Complex next = z - step;
        Complex nv, nd;
        p.eval_both(next, nv, nd);
        if (std::abs(nv) >= std::abs(v)) break;
        z = next;
    }
    return z;
}

std::vector<Complex> quadratic_roots(const Polynomial& p) {
    const auto& c = p.coeffs();
    const Complex a = c[2], b = c[1], cc = c[0];
    const Complex disc = std::sqrt(b * b - 4.0 * a * cc);
    // Pick the sign that avoids cancellation in -b -/+ sqrt(disc).
    const Complex q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
    if (q == Complex{}) return {Complex{}, Complex{}};
    return {q / a, cc / q};
}

void merge_clusters(std::vector<Complex>& r, double cluster) {
    double scale = 1.0;
    for (auto z : r) scale = std::max(scale, 1.0 + std::abs(z));
    const double eps = cluster * scale;
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = i + 1; j < r.size(); ++j) {
            if (std::abs(r[i] - r[j]) < eps) {
                const Complex mid = 0.5 * (r[i] + r[j]);
                r[i] = mid;
                r[j] = mid;
            }
        }
    }
}

std::vector<Complex> aberth(const Polynomial& p, const RootOptions& opts) {
    const int d = p.degree();
    const auto& c = p.coeffs();
    double max_ratio = 0.0;
    for (int i = 0; i < d; ++i) max_ratio = std::max(max_ratio, std::abs(c[i] / c[d]));
    const double radius = 1.0 + max_ratio;
    std::vector<Complex> z(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        // Offset angle keeps the seeds off any symmetry axis of the input.
        const double angle = 2.0 * std::numbers::pi * k / d + 0.4;
        z[k] = std::polar(radius, angle);
    }
    std::vector<bool> done(z.size(), false);
    for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
        bool all_done = true;
        for (int i = 0; i < d; ++i) {
            if (done[i]) continue;
            Complex v, dv;
            p.eval_both(z[i], v, dv);
            if (std::abs(v) <= root_residual_bound(p, z[i], opts.tol) * 1e-3) {
                done[i] = true;
                continue;
            }
            Complex repulsion{};
            for (int j = 0; j < d; ++j) {
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            }
            const Complex ratio = v / dv;
            const Complex step = ratio / (1.0 - ratio * repulsion);
            z[i] -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z[i]))) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if (all_done) {
            bool ok = true;
            for (auto zi : z) ok = ok && std::abs(p.eval(zi)) <= root_residual_bound(p, zi, opts.tol);
            if (ok) return z;
            // Converged in step size but not in residual: keep sweeping the laggards.
            for (std::size_t i = 0; i < z.size(); ++i) {
                done[i] = std::abs(p.eval(z[i])) <= root_residual_bound(p, z[i], opts.tol);
            }
        }
    }
    bool ok = true;
    for (auto zi : z) ok = ok && std::abs(p.eval(zi)) <= root_residual_bound(p, zi, opts.tol);
    if (!ok) throw NonConvergence("Aberth iteration did not converge within max_iter sweeps");
    return z;
}

}  // namespace

std::vector<Complex> roots(const Polynomial& p, const RootOptions& opts) {
    const int d = p.degree();
    if (d < 1) throw DomainError("roots: degree must be at least 1");
    std::vector<Complex> r;
    if (d == 1) {
        r = {-p.coeffs()[0] / p.coeffs()[1]};
    } else if (d == 2) {
        r = quadratic_roots(p);
        for (auto& z : r) z = newton_polish(p, z);
    } else {
        r = aberth(p, opts);
        for (auto& z : r) z = newton_polish(p, z);
    }
    merge_clusters(r, opts.cluster);
    return r;
}

}  // namespace poincare
