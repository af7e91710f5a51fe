#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "poincare/errors.hpp"
#include "poincare/ifs.hpp"
#include "poincare/vanishing.hpp"

using namespace poincare;

namespace {

double multinomial_weight(const std::vector<int>& k, const std::vector<double>& lambda) {
    double log_w = std::lgamma(1.0 + std::accumulate(k.begin(), k.end(), 0));
    for (std::size_t i = 0; i < k.size(); ++i) log_w += k[i] * std::log(lambda[i]) - std::lgamma(1.0 + k[i]);
    return std::exp(log_w);
}

std::vector<double> random_norms(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(0.05, 0.45);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& x : out) x = u(rng);
    return out;
}

// Solves P^m(x) = z by Newton continuation from a known pair (z0, x0).
Complex invert_iterate(const Polynomial& p, int m, Complex z0, Complex x0, Complex z) {
    Complex x = x0;
    for (int step = 1; step <= 32; ++step) {
        const Complex target = z0 + (z - z0) * (step / 32.0);
        for (int it = 0; it < 50; ++it) {
            Complex v = x, d = 1.0;
            for (int i = 0; i < m; ++i) {
                d *= p.eval_derivative(v);
                v = p.eval(v);
            }
            const Complex dx = (v - target) / d;
            x -= dx;
            if (std::abs(dx) < 1e-15 * (1 + std::abs(x))) break;
        }
    }
    return x;
}

}  // namespace

TEST_CASE("IFS pressure examples") {
    const FiniteIFS moran = synthetic_ifs({1.0 / 3, 1.0 / 3});
    const double d = std::log(2.0) / std::log(3.0);
    for (int p : {1, 3, 7}) CHECK(std::abs(ifs_pressure(moran, d, p)) <= 1e-12);
    const FiniteIFS half = synthetic_ifs({0.5, 0.5});
    CHECK(std::abs(ifs_pressure(half, 1.0, 5)) <= 1e-12);
    CHECK(ifs_pressure(half, 0.0, 4) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(ifs_pressure(synthetic_ifs({0.5, 0.5, 0.5, 0.5}), 1.0, 12), WordBlowup);
}

TEST_CASE("Bowen dimension examples") {
    CHECK(std::abs(bowen_dimension(std::vector<double>{1.0 / 3, 1.0 / 3}).dim - std::log(2.0) / std::log(3.0)) <= 1e-6);
    CHECK(std::abs(bowen_dimension(std::vector<double>{0.5, 0.5}).dim - 1.0) <= 1e-6);
    CHECK(std::abs(bowen_dimension(std::vector<double>{0.5, 0.25, 0.25}).dim - 1.0) <= 1e-6);
    CHECK(bowen_dimension(std::vector<double>{0.3}).dim == 0.0);
    const BowenResult b = bowen_dimension(synthetic_ifs({0.2, 0.3, 0.4}));
    CHECK(b.branch_count == 3);
    double sum = 0.0;
    for (double l : {0.2, 0.3, 0.4}) sum += std::pow(l, b.dim);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Bowen dimension grows with added branches") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto norms = random_norms(rng, 8);
        double prev = 0.0;
        for (std::size_t k = 1; k <= norms.size(); ++k) {
            const double d = bowen_dimension(std::vector<double>(norms.begin(), norms.begin() + k)).dim;
            CHECK(d >= prev);
            prev = d;
        }
    }
}

TEST_CASE("Bowen dimension drops when every branch contracts more") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 3; ++trial) {
        auto norms = random_norms(rng, 5);
        const double before = bowen_dimension(norms).dim;
        for (auto& x : norms) x *= 0.5;
        CHECK(bowen_dimension(norms).dim < before);
    }
}

TEST_CASE("word sums") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const auto l = random_norms(rng, 3);
        const double Lambda = l[0] + l[1] + l[2];
        for (int p : {1, 4, 9}) CHECK(std::abs(all_words_sum(l, p) - std::pow(Lambda, p)) <= 1e-12 * std::pow(Lambda, p));
    }
}

TEST_CASE("balanced word sums") {
    const FiniteIFS half = synthetic_ifs({0.5, 0.5});
    for (int p = 4; p <= 14; ++p) {
        const SpBound b = sp_lower_bound(half, 1.0, p);
        CAPTURE(p);
        CHECK(b.holds);
        CHECK(b.ratio >= 0.3 * std::pow(p, -2.5));
        CHECK(std::abs(b.full_sum - 1.0) <= 1e-12);
        CHECK(b.sum_Sp <= b.full_sum);
        CHECK(b.sum_Sp == doctest::Approx(multinomial_weight(b.k, {0.5, 0.5})).epsilon(1e-12));
        CHECK(b.nu_p == p);
    }
    const FiniteIFS mixed = synthetic_ifs({0.5, 0.3, 0.2}, {1, 2, 3});
    for (int p : {5, 8}) {
        const SpBound b = sp_lower_bound(mixed, 0.8, p);
        std::vector<double> lam{std::pow(0.5, 0.8), std::pow(0.3, 0.8), std::pow(0.2, 0.8)};
        const double Lambda = lam[0] + lam[1] + lam[2];
        CHECK(std::accumulate(b.k.begin(), b.k.end(), 0) == p);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(b.k[i] >= lam[i] / Lambda * p - 1);
            CHECK(b.k[i] < lam[i] / Lambda * p + 1);
        }
        CHECK(b.nu_p == b.k[0] + 2 * b.k[1] + 3 * b.k[2]);
        CHECK(b.sum_Sp == doctest::Approx(multinomial_weight(b.k, lam)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(sp_lower_bound(synthetic_ifs({0.5}), 1.0, 4), Infeasible);
}

TEST_CASE("inverse branches near the Chebyshev interval") {
    const Polynomial p = Polynomial::quadratic(-2);
    const FiniteIFS s = build_ifs_near(p, Disc{1.0, 0.5}, 4, 16);
    CHECK(s.branches.size() >= 2);
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> r(0, 1), a(-std::numbers::pi, std::numbers::pi);
    for (const auto& br : s.branches) {
        CHECK(br.m == 4);
        REQUIRE_FALSE(br.samples.empty());
        for (const auto& sm : br.samples) {
            Complex v = sm.phi;
            for (int i = 0; i < br.m; ++i) v = p.eval(v);
            CHECK(std::abs(v - sm.z) <= 1e-8);
        }
        for (int i = 0; i < 8; ++i) {
            const Complex z = br.domain.center + std::polar(br.domain.radius * std::sqrt(r(rng)), a(rng));
            const BranchSample& near = *std::min_element(br.samples.begin(), br.samples.end(),
                                                         [&](auto& x, auto& y) { return std::abs(x.z - z) < std::abs(y.z - z); });
            const Complex x = invert_iterate(p, br.m, near.z, near.phi, z);
            Complex v = x, d = 1.0;
            for (int k = 0; k < br.m; ++k) {
                d *= p.eval_derivative(v);
                v = p.eval(v);
            }
            CHECK(std::abs(v - z) <= 1e-8);
            CHECK(br.image_disc.contains(x));
            CHECK(br.domain.contains(x));
            CHECK(1.0 / std::abs(d) <= br.norm_sup);
        }
    }
    const double dim = bowen_dimension(s).dim;
    CHECK(dim > 0.0);
    CHECK(dim < 1.0);
}

TEST_CASE("branches need the region to meet the Julia set") {
    CHECK_THROWS_AS(build_ifs_near(Polynomial::quadratic(-2), Disc{10.0, 1.0}, 3, 8), NoBranches);
    CHECK_THROWS_AS(build_ifs_near(Polynomial::quadratic(-2), Annulus(0.0, 5.0, 6.0), 3, 8), NoBranches);
    const FiniteIFS ring = build_ifs_near(Polynomial::monomial(2), Annulus(0.0, 0.8, 1.2), 4, 8);
    CHECK_FALSE(ring.branches.empty());
}

TEST_CASE("far IFS of linearisers") {
    const Lineariser E = koenigs_series(BaseMap(Polynomial::monomial(2)), 1.0);
    const Lineariser C = koenigs_series(BaseMap(Polynomial::quadratic(-2)), 2.0);
    CHECK_THROWS_AS(lineariser_far_ifs(E, 1, 16), NoBranches);
    for (const Lineariser* L : {&E, &C}) {
        double prev = 0.0;
        for (int cap : {4, 8, 16, 32}) {
            const BowenResult b = lineariser_far_ifs(*L, 8, cap);
            CHECK(b.branch_count <= static_cast<std::size_t>(cap));
            CHECK(b.dim >= prev);
            prev = b.dim;
        }
        const FiniteIFS s = build_lineariser_far_ifs(*L, 8, 16);
        CHECK(s.metric == MetricKind::cylindrical);
        for (const auto& br : s.branches) {
            for (const auto& sm : br.samples) {
                CHECK(std::abs(evaluate(*L, sm.phi) - sm.z) <= 1e-8 * std::abs(sm.z));
                CHECK(std::abs(sm.dphi * lineariser_derivative(*L, sm.phi) - 1.0) <= 1e-7);
                CHECK(std::abs(sm.dphi) * std::abs(sm.z) / std::abs(sm.phi) <= br.norm_sup);
                CHECK(s.disc.contains(sm.phi));
            }
        }
        const ThetaEstimate theta = theta_estimate(*L, {0.7, 1.3}, {1e2, 1e3}, 12);
        REQUIRE_FALSE(std::isnan(theta.bracket_hi));
        CHECK(prev <= theta.bracket_hi + 0.05);
    }
}
