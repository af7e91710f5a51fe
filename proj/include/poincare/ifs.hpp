#pragma once

#include <complex>
#include <map>
#include <vector>

#include "poincare/lineariser.hpp"
#include "poincare/metric.hpp"
#include "poincare/polynomial.hpp"

namespace poincare {

/// (z, phi(z), phi'(z)) on the boundary of the domain disc.
struct BranchSample {
    Complex z;
    Complex phi;
    Complex dphi;
};

/// Inverse branch phi of f^m on a disc D with phi(D) inside D.
struct Branch {
    int m = 1;
    Disc domain;
    Disc image_disc;
    /// Sampled sup of ||phi'|| in the system metric, inflated by a distortion factor.
    double norm_sup = 0.0;
    std::vector<BranchSample> samples;
};

struct FiniteIFS {
    Disc disc;
    std::vector<Branch> branches;
    MetricKind metric = MetricKind::euclidean;

    std::vector<double> contraction_norms() const;
};

/// System with given contraction norms and no geometry, e.g. for Moran-type checks.
FiniteIFS synthetic_ifs(const std::vector<double>& norms, const std::vector<int>& orders = {});

/// Inverse branches of P^n on a disc D centred at a non-escaping point of U
/// that map D into itself. Keeps at most max_branches, nearest to the centre first.
/// Throws NoBranches when U misses the filled Julia set or no branch returns into D.
FiniteIFS build_ifs_near(const Polynomial& p, const Disc& U, int n, int max_branches);
FiniteIFS build_ifs_near(const Polynomial& p, const Annulus& U, int n, int max_branches);

/// (1/p) log of the sum over all words of length p of prod ||phi'||^t, which for a
/// full shift equals log sum_i lambda_i^t. Throws WordBlowup when I^p > 1e7.
double ifs_pressure(const FiniteIFS& s, double t, int p);

/// Sum over all I^p words of prod lambda_{alpha_j}, enumerated word by word.
double all_words_sum(const std::vector<double>& lambdas, int p);

struct BowenResult {
    double dim = 0.0;
    int p_used = 1;
    std::size_t branch_count = 0;
    /// Pressure at dim - 0.01 and dim + 0.01 for p = 1, 2, 3.
    std::map<double, std::vector<double>> pressure_samples;
};

/// Zero of t -> log sum lambda_i^t, bisected to 1e-6. A single branch gives 0.
BowenResult bowen_dimension(const FiniteIFS& s);
BowenResult bowen_dimension(const std::vector<double>& norms);

struct SpBound {
    std::vector<int> k;
    long long nu_p = 0;
    std::size_t words = 0;
    double sum_Sp = 0.0;
    double full_sum = 0.0;
    /// sum_Sp / Lambda^p.
    double ratio = 0.0;
    /// C2 / p^delta, delta = (3I - 1) / 2.
    double bound = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Words of length p with exactly k_i occurrences of symbol i, k_i from
/// largest-remainder rounding of eps_i p, eps_i = lambda_i / Lambda,
/// lambda_i = ||phi_i'||^t. Throws Infeasible if the rounding leaves
/// eps_i p - 1 <= k_i < eps_i p + 1, or for fewer than two branches.
SpBound sp_lower_bound(const FiniteIFS& s, double t, int p, double C2 = 0.3);

/// Inverse branches of L from a disc in the annulus |rho|^k A_0 into itself, in
/// the cylindrical metric. Keeps at most max_branches. Throws NoBranches.
FiniteIFS build_lineariser_far_ifs(const Lineariser& L, int k, int max_branches);
BowenResult lineariser_far_ifs(const Lineariser& L, int k, int max_branches);

}  // namespace poincare
