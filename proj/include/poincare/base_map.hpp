#pragma once

#include <complex>
#include <string>
#include <variant>

#include "poincare/polynomial.hpp"

namespace poincare {

/// z -> a e^z.
struct ScaledExponential {
    Complex a;
};

/// The entire map a lineariser conjugates to: a polynomial of degree >= 2 or a scaled exponential.
class BaseMap {
public:
    explicit BaseMap(Polynomial p);
    explicit BaseMap(ScaledExponential e);

    bool is_polynomial() const { return std::holds_alternative<Polynomial>(map_); }
    const Polynomial& polynomial() const;
    const ScaledExponential& exponential() const;

    Complex eval(Complex z) const;
    Complex derivative(Complex z) const;
    void eval_both(Complex z, Complex& value, Complex& derivative) const;

    /// Human-readable form: "poly:c0,c1,..." or "exp:a".
    std::string describe() const;

private:
    std::variant<Polynomial, ScaledExponential> map_;
};

}  // namespace poincare
