#include "poincare/power_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poincare/errors.hpp"

namespace poincare {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}

PowerSeries::PowerSeries(std::vector<Complex> coeffs, bool exact) : coeffs_(std::move(coeffs)), exact_(exact) {
    if (coeffs_.empty()) throw DomainError("empty power series");
    log_abs_.reserve(coeffs_.size());
    arg_.reserve(coeffs_.size());
    for (auto c : coeffs_) {
        log_abs_.push_back(c == Complex{} ? neg_inf : std::log(std::abs(c)));
        arg_.push_back(c == Complex{} ? 0.0 : std::arg(c));
    }
}

PowerSeries PowerSeries::from_log_coefficients(std::vector<double> log_abs, std::vector<double> arg, bool exact) {
    if (log_abs.empty() || log_abs.size() != arg.size()) throw DomainError("malformed log coefficients");
    PowerSeries s;
    s.exact_ = exact;
    s.coeffs_.reserve(log_abs.size());
    for (std::size_t i = 0; i < log_abs.size(); ++i) s.coeffs_.push_back(std::polar(std::exp(log_abs[i]), arg[i]));
    s.log_abs_ = std::move(log_abs);
    s.arg_ = std::move(arg);
    return s;
}

PowerSeries PowerSeries::from_polynomial(const Polynomial& p) { return PowerSeries(p.coeffs(), true); }

PowerSeries PowerSeries::exponential(int order) {
    std::vector<double> la(static_cast<std::size_t>(order) + 1), ar(la.size(), 0.0);
    for (int n = 0; n <= order; ++n) la[n] = -std::lgamma(n + 1.0);
    return from_log_coefficients(std::move(la), std::move(ar));
}

Complex PowerSeries::eval(Complex z) const {
    Complex acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Complex PowerSeries::eval_derivative(Complex z) const {
    Complex v, d;
    eval_both(z, v, d);
    return d;
}

void PowerSeries::eval_both(Complex z, Complex& value, Complex& derivative) const {
    Complex p = coeffs_.back();
    Complex dp{};
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    value = p;
    derivative = dp;
}

double PowerSeries::log_term(int n, double log_r) const {
    const double la = log_abs_[static_cast<std::size_t>(n)];
    if (la == neg_inf) return neg_inf;
    return la + n * log_r;
}

namespace {

LogComplex scaled_sum(const std::vector<double>& logs, const std::vector<double>& phases) {
    double peak = neg_inf;
    for (double l : logs) peak = std::max(peak, l);
    if (peak == neg_inf) return {neg_inf, 0.0};
    Complex acc{};
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (logs[i] == neg_inf) continue;
        const double mag = std::exp(logs[i] - peak);
        if (mag < 1e-300) continue;
        acc += std::polar(mag, phases[i]);
    }
    if (acc == Complex{}) return {neg_inf, 0.0};
    return {peak + std::log(std::abs(acc)), std::arg(acc)};
}

}  // namespace

LogComplex PowerSeries::log_eval(Complex z) const {
    if (z == Complex{}) return {log_abs_[0], arg_[0]};
    const double lr = std::log(std::abs(z));
    const double th = std::arg(z);
    std::vector<double> logs(log_abs_.size()), phases(log_abs_.size());
    for (std::size_t n = 0; n < log_abs_.size(); ++n) {
        logs[n] = log_term(static_cast<int>(n), lr);
        phases[n] = arg_[n] + static_cast<double>(n) * th;
    }
    return scaled_sum(logs, phases);
}

LogComplex PowerSeries::log_eval_derivative(Complex z) const {
    if (log_abs_.size() < 2) return {neg_inf, 0.0};
    if (z == Complex{}) return {log_abs_[1], arg_[1]};
    const double lr = std::log(std::abs(z));
    const double th = std::arg(z);
    const std::size_t m = log_abs_.size() - 1;
    std::vector<double> logs(m), phases(m);
    for (std::size_t n = 1; n <= m; ++n) {
        const double la = log_abs_[n];
        logs[n - 1] = la == neg_inf ? neg_inf : la + std::log(static_cast<double>(n)) + static_cast<double>(n - 1) * lr;
        phases[n - 1] = arg_[n] + static_cast<double>(n - 1) * th;
    }
    return scaled_sum(logs, phases);
}

double PowerSeries::tail_radius(double rel_tol) const {
    if (exact_) return std::numeric_limits<double>::infinity();
    const double ref = std::max(0.0, log_abs_[0] == neg_inf ? 0.0 : log_abs_[0]);
    // The last eight coefficients that are still normal doubles; beyond that the
    // stored values are underflow artefacts, not the true tail.
    constexpr double min_normal_log = -700.0;
    double radius = std::numeric_limits<double>::infinity();
    int used = 0;
    for (int n = order(); n >= 1 && used < 8; --n) {
        const double la = log_abs_[static_cast<std::size_t>(n)];
        if (la == neg_inf || la < min_normal_log) continue;
        radius = std::min(radius, std::exp((std::log(rel_tol) + ref - la) / n));
        ++used;
    }
    return radius;
}

}  // namespace poincare
