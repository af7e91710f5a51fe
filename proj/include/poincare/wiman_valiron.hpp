#pragma once

#include <complex>
#include <exception>
#include <string>
#include <vector>

#include "poincare/power_series.hpp"

namespace poincare {

/// Largest n maximising |a_n| r^n; near-ties (relative 1e-12) go to the larger n.
/// Throws TruncationTooSmall when the index reaches order/2 on a truncated series.
int central_index(const PowerSeries& s, double r);

struct MaxModulus {
    double log_M = 0.0;
    /// exp(log_M); infinite beyond the double range.
    double M = 0.0;
    Complex xi;
};

/// Maximum of |s| on |z| = r: a coarse angular grid, then a local grid of the
/// same size around the best coarse angle. Throws TruncationTooSmall when the
/// last retained term is not negligible at r.
MaxModulus max_modulus(const PowerSeries& s, double r, int angular_samples = 1024);

struct WvRecord {
    double r = 0.0;
    int N = 0;
    double log_M = 0.0;
    /// N(r) <= (log M(r))^2.
    bool bound_ok = false;
    /// Largest relative error of f'(z) ~ (N/z)(z/xi)^N f(xi) over 8 points of the
    /// sector |log(z/xi)| <= (4 + 2 m log|rho|) / N.
    double max_eps = 0.0;
};

std::vector<WvRecord> wv_diagnostics(const PowerSeries& s, const std::vector<double>& r_list, double m = 3.0,
                                     double rho_mod = 2.0);

struct ChainRecord {
    int k = 0;
    Complex xi;
    double r = 0.0;
    int N = 0;
    double log_M = 0.0;
    long long n = 0;
    /// log radii of A(|rho|^n R_f, |rho|^{n+m} R_f).
    double log_inner = 0.0;
    double log_outer = 0.0;
    /// M / (|rho|^2 R_f) <= |rho|^n <= M / (|rho| R_f).
    bool sandwich_ok = false;
};

struct ChainRun {
    std::vector<ChainRecord> records;
    /// Empty when all K steps completed, otherwise the error that stopped the chain.
    std::string stop_reason;
    std::exception_ptr error;
};

/// Iterates r_{k+1} = midpoint of A_k on the positive axis, with
/// n_k = floor(log|f(xi_k)/R_f| / log|rho|) - 1. Throws ChainBreak when
/// |f(xi_k)| <= R_f |rho|^2 or n_k fails to increase, and TruncationTooSmall
/// when r_k leaves the reach of the series.
std::vector<ChainRecord> wv_annulus_chain(const PowerSeries& s, double rho_mod, double R_f, double m, int K,
                                          double r0 = 10.0);
/// Same iteration, stopping at the first error instead of throwing.
ChainRun run_wv_chain(const PowerSeries& s, double rho_mod, double R_f, double m, int K, double r0 = 10.0);

}  // namespace poincare
