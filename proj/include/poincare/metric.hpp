#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace poincare {

using Complex = std::complex<double>;

enum class MetricKind { euclidean, spherical, cylindrical, one_sided_cylindrical };

std::string_view to_string(MetricKind m);
MetricKind metric_from_string(std::string_view name);

/// Conformal density: 1, 2/(1+|z|^2), 1/|z|, 1/max(|z|,1).
/// Throws DomainError for the cylindrical density at 0.
double metric_density(MetricKind m, Complex z);

/// |phi'(z)| * density(phi(z)) / density(z).
double derivative_norm(MetricKind m, Complex fprime, Complex z, Complex fz);

/// log of derivative_norm, robust when |fprime| over- or underflows.
double log_derivative_norm(MetricKind m, double log_abs_fprime, Complex z, Complex fz);

/// Round annulus r_inner <= |z - center| < r_outer.
struct Annulus {
    Complex center{};
    double r_inner = 0.0;
    double r_outer = 0.0;

    Annulus() = default;
    Annulus(Complex c, double inner, double outer);

    bool contains(Complex z) const {
        const double r = std::abs(z - center);
        return r_inner <= r && r < r_outer;
    }
};

/// Closed disc |z - center| <= radius.
struct Disc {
    Complex center{};
    double radius = 0.0;

    bool contains(Complex z) const { return std::abs(z - center) <= radius; }
};

}  // namespace poincare
