#include "poincare/base_map.hpp"

#include <fmt/format.h>

#include "poincare/errors.hpp"

namespace poincare {

BaseMap::BaseMap(Polynomial p) : map_(std::move(p)) {
    if (std::get<Polynomial>(map_).degree() < 2) throw DomainError("polynomial base map needs degree >= 2");
}

BaseMap::BaseMap(ScaledExponential e) : map_(e) {
    if (e.a == Complex{}) throw DomainError("scaled exponential needs a != 0");
}

const Polynomial& BaseMap::polynomial() const {
    if (!is_polynomial()) throw DomainError("base map is not a polynomial");
    return std::get<Polynomial>(map_);
}

const ScaledExponential& BaseMap::exponential() const {
    if (is_polynomial()) throw DomainError("base map is not a scaled exponential");
    return std::get<ScaledExponential>(map_);
}

Complex BaseMap::eval(Complex z) const {
    if (is_polynomial()) return std::get<Polynomial>(map_).eval(z);
    return std::get<ScaledExponential>(map_).a * std::exp(z);
}

Complex BaseMap::derivative(Complex z) const {
    if (is_polynomial()) return std::get<Polynomial>(map_).eval_derivative(z);
    return std::get<ScaledExponential>(map_).a * std::exp(z);
}

void BaseMap::eval_both(Complex z, Complex& value, Complex& derivative) const {
    if (is_polynomial()) {
        std::get<Polynomial>(map_).eval_both(z, value, derivative);
    } else {
        value = std::get<ScaledExponential>(map_).a * std::exp(z);
        derivative = value;
    }
}

std::string BaseMap::describe() const {
    auto num = [](Complex c) {
        if (c.imag() == 0.0) return fmt::format("{:.17g}", c.real());
        return fmt::format("{:.17g}{:+.17g}i", c.real(), c.imag());
    };
    if (!is_polynomial()) return "exp:" + num(std::get<ScaledExponential>(map_).a);
    std::string out = "poly:";
    const auto& c = std::get<Polynomial>(map_).coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + num(c[i]);
    return out;
}

}  // namespace poincare
