#pragma once

#include <complex>
#include <vector>

namespace poincare {

using Complex = std::complex<double>;

/// Complex polynomial with coefficients in ascending degree order.
/// Trailing zero coefficients are stripped; the zero polynomial is rejected.
class Polynomial {
public:
    explicit Polynomial(std::vector<Complex> coeffs);

    /// Coefficients of z^d only, e.g. monomial(2) == z^2.
    static Polynomial monomial(int degree, Complex lead = 1.0);
    /// z^2 + c.
    static Polynomial quadratic(Complex c);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex leading() const { return coeffs_.back(); }

    Complex operator()(Complex z) const { return eval(z); }
    Complex eval(Complex z) const;
    Complex eval_derivative(Complex z) const;
    /// Evaluates value and derivative in one Horner sweep.
    void eval_both(Complex z, Complex& value, Complex& derivative) const;

    Polynomial derivative() const;
    /// P(z) - w.
    Polynomial shifted(Complex w) const;
    /// lambda * P(z / lambda); conjugating by z -> lambda z.
    Polynomial conjugated(Complex lambda) const;

    /// Taylor coefficients of P(center + u) in powers of u.
    std::vector<Complex> taylor_at(Complex center) const;

    /// sum |c_i| |z|^i, the rounding scale of a Horner evaluation at z.
    double magnitude_scale(double abs_z) const;

    bool operator==(const Polynomial&) const = default;

private:
    std::vector<Complex> coeffs_;
};

struct RootOptions {
    double tol = 1e-13;
    double cluster = 1e-8;
    int max_iter = 200;
};

/// All d roots with multiplicity. Degrees 1 and 2 are solved in closed form and
/// Newton-polished; higher degrees use Aberth simultaneous iteration seeded on a
/// perturbed circle of radius 1 + max|c_i|/|c_d|. Roots closer than
/// cluster * (1 + max|root|) are merged into repeated values.
/// Throws NonConvergence after max_iter sweeps.
std::vector<Complex> roots(const Polynomial& p, const RootOptions& opts = {});

/// Residual bound the root finder guarantees: tol * (1 + |z|)^d, widened to the
/// Horner rounding scale when coefficients are large.
double root_residual_bound(const Polynomial& p, Complex z, double tol = 1e-13);

}  // namespace poincare
