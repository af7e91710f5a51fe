#pragma once

#include <complex>
#include <vector>

#include "poincare/polynomial.hpp"

namespace poincare {

/// Complex number stored as log-modulus and argument, for values beyond the double range.
struct LogComplex {
    double log_abs = 0.0;
    double arg = 0.0;

    Complex value() const { return std::polar(std::exp(log_abs), arg); }
    Complex log() const { return {log_abs, arg}; }
};

/// Truncated power series a_0 + a_1 z + ... + a_N z^N.
///
/// Coefficients are kept both as complex doubles and as (log|a_n|, arg a_n), so
/// series whose coefficients underflow (1/n! past n = 170) can still be
/// evaluated in log space far outside the double range. A series built from a
/// polynomial is `exact`: it has no truncation error.
class PowerSeries {
public:
    PowerSeries() = default;
    explicit PowerSeries(std::vector<Complex> coeffs, bool exact = false);

    static PowerSeries from_log_coefficients(std::vector<double> log_abs, std::vector<double> arg, bool exact = false);
    static PowerSeries from_polynomial(const Polynomial& p);
    /// exp(z) truncated at order N, coefficients 1/n! stored through lgamma.
    static PowerSeries exponential(int order);

    int order() const { return static_cast<int>(log_abs_.size()) - 1; }
    bool exact() const { return exact_; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex coeff(int n) const { return coeffs_[static_cast<std::size_t>(n)]; }
    double log_abs_coeff(int n) const { return log_abs_[static_cast<std::size_t>(n)]; }
    double arg_coeff(int n) const { return arg_[static_cast<std::size_t>(n)]; }

    /// Horner evaluation in double precision.
    Complex eval(Complex z) const;
    Complex eval_derivative(Complex z) const;
    void eval_both(Complex z, Complex& value, Complex& derivative) const;

    /// Scaled summation in log space; valid far outside the double range.
    LogComplex log_eval(Complex z) const;
    LogComplex log_eval_derivative(Complex z) const;

    /// log(|a_n| r^n), -inf for vanishing coefficients.
    double log_term(int n, double log_r) const;

    /// Largest r at which the last retained terms stay below rel_tol relative
    /// to max(1, |a_0|); +inf for exact series.
    double tail_radius(double rel_tol = 1e-14) const;

private:
    std::vector<Complex> coeffs_;
    std::vector<double> log_abs_;
    std::vector<double> arg_;
    bool exact_ = false;
};

}  // namespace poincare
