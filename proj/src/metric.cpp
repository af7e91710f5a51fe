#include "poincare/metric.hpp"

#include <algorithm>
#include <cmath>

#include "poincare/errors.hpp"

namespace poincare {

std::string_view to_string(MetricKind m) {
    switch (m) {
        case MetricKind::euclidean: return "euclidean";
        case MetricKind::spherical: return "spherical";
        case MetricKind::cylindrical: return "cylindrical";
        case MetricKind::one_sided_cylindrical: return "one-sided-cylindrical";
    }
    return "unknown";
}

MetricKind metric_from_string(std::string_view name) {
    if (name == "euclidean") return MetricKind::euclidean;
    if (name == "spherical") return MetricKind::spherical;
    if (name == "cylindrical") return MetricKind::cylindrical;
    if (name == "one-sided-cylindrical") return MetricKind::one_sided_cylindrical;
    throw UsageError("unknown metric '" + std::string(name) + "'");
}

double metric_density(MetricKind m, Complex z) {
    const double r = std::abs(z);
    switch (m) {
        case MetricKind::euclidean: return 1.0;
        case MetricKind::spherical: return 2.0 / (1.0 + r * r);
        case MetricKind::cylindrical:
            if (r == 0.0) throw DomainError("cylindrical density is undefined at 0");
            return 1.0 / r;
        case MetricKind::one_sided_cylindrical: return 1.0 / std::max(r, 1.0);
    }
    return 1.0;
}

namespace {

// log density, finite for |z| up to the double range.
double log_density(MetricKind m, Complex z) {
    const double r = std::abs(z);
    switch (m) {
        case MetricKind::euclidean: return 0.0;
        case MetricKind::spherical:
            return r > 1e150 ? std::log(2.0) - 2.0 * std::log(r) : std::log(2.0 / (1.0 + r * r));
        case MetricKind::cylindrical:
            if (r == 0.0) throw DomainError("cylindrical density is undefined at 0");
            return -std::log(r);
        case MetricKind::one_sided_cylindrical: return -std::log(std::max(r, 1.0));
    }
    return 0.0;
}

}  // namespace

double derivative_norm(MetricKind m, Complex fprime, Complex z, Complex fz) {
    return std::abs(fprime) * metric_density(m, fz) / metric_density(m, z);
}

double log_derivative_norm(MetricKind m, double log_abs_fprime, Complex z, Complex fz) {
    return log_abs_fprime + log_density(m, fz) - log_density(m, z);
}

Annulus::Annulus(Complex c, double inner, double outer) : center(c), r_inner(inner), r_outer(outer) {
    if (!(inner > 0.0) || !(outer > inner)) throw DomainError("annulus requires 0 < r_inner < r_outer");
}

}  // namespace poincare
