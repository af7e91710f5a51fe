#include "poincare/wiman_valiron.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "poincare/errors.hpp"
#include "poincare/parallel.hpp"

namespace poincare {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

int maximal_term(const PowerSeries& s, double r) {
    const double lr = std::log(r);
    double best = -std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int n = 0; n <= s.order(); ++n) {
        const double l = s.log_term(n, lr);
        if (l == -std::numeric_limits<double>::infinity()) continue;
        if (l >= best - 1e-12 * std::max(1.0, std::abs(best))) {
            if (l > best) best = l;
            arg = n;
        }
    }
    return arg;
}

void require_reach(const PowerSeries& s, double r, double log_M) {
    if (s.exact()) return;
    const double tail = s.log_term(s.order(), std::log(r));
    if (tail > log_M + std::log(1e-14))
        throw TruncationTooSmall(fmt::format("series of order {} does not reach r = {:.6g}", s.order(), r));
}

}  // namespace

int central_index(const PowerSeries& s, double r) {
    if (!(r > 0)) throw DomainError("central index needs r > 0");
    const int n = maximal_term(s, r);
    if (!s.exact() && 2 * n >= s.order())
        throw TruncationTooSmall(fmt::format("central index {} at r = {:.6g} reaches half the order {}", n, r, s.order()));
    return n;
}

MaxModulus max_modulus(const PowerSeries& s, double r, int angular_samples) {
    if (!(r > 0) || angular_samples < 1) throw DomainError("max modulus needs r > 0 and a positive sample count");
    const auto n = static_cast<std::size_t>(angular_samples);
    auto argmax = [&](const std::vector<double>& angles) {
        std::vector<double> vals(angles.size());
        parallel_for(angles.size(), [&](std::size_t i) { vals[i] = s.log_eval(std::polar(r, angles[i])).log_abs; });
        std::size_t best = 0;
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[i] > vals[best] + 1e-13 * std::max(1.0, std::abs(vals[best]))) best = i;
        return std::pair{angles[best], vals[best]};
    };
    std::vector<double> coarse(n), local(n);
    for (std::size_t i = 0; i < n; ++i) coarse[i] = two_pi * static_cast<double>(i) / static_cast<double>(n);
    const auto [theta0, v0] = argmax(coarse);
    const double half = two_pi / static_cast<double>(n);
    const double mid = static_cast<double>(n / 2);
    for (std::size_t i = 0; i < n; ++i) local[i] = theta0 + half * (static_cast<double>(i) - mid) / mid;
    auto [theta, v] = argmax(local);
    if (!(v > v0 + 1e-13 * std::max(1.0, std::abs(v0)))) {
        theta = theta0;
        v = v0;
    }
    require_reach(s, r, v);
    return {v, std::exp(v), std::polar(r, theta)};
}

std::vector<WvRecord> wv_diagnostics(const PowerSeries& s, const std::vector<double>& r_list, double m,
                                     double rho_mod) {
    std::vector<WvRecord> out;
    const double sector = 4.0 + 2.0 * m * std::log(rho_mod);
    for (double r : r_list) {
        WvRecord rec;
        rec.r = r;
        rec.N = central_index(s, r);
        const MaxModulus mm = max_modulus(s, r);
        rec.log_M = mm.log_M;
        rec.bound_ok = rec.N <= rec.log_M * rec.log_M;
        const Complex log_fxi = s.log_eval(mm.xi).log();
        for (int j = 0; j < 8 && rec.N > 0; ++j) {
            const Complex tau = std::polar(sector / rec.N, two_pi * j / 8.0);
            const Complex z = mm.xi * std::exp(tau);
            const Complex log_fp = s.log_eval_derivative(z).log();
            const Complex log_model = std::log(static_cast<double>(rec.N)) - std::log(z) + static_cast<double>(rec.N) * tau + log_fxi;
            rec.max_eps = std::max(rec.max_eps, std::abs(std::exp(log_fp - log_model) - 1.0));
        }
        out.push_back(rec);
    }
    return out;
}

ChainRun run_wv_chain(const PowerSeries& s, double rho_mod, double R_f, double m, int K, double r0) {
    if (!(rho_mod > 1) || !(m > 2) || K < 1 || !(R_f > 0) || !(r0 > 0))
        throw DomainError("chain needs rho_mod > 1, m > 2, K >= 1, R_f > 0, r0 > 0");
    ChainRun run;
    const double lrho = std::log(rho_mod), lR = std::log(R_f);
    double r = r0;
    try {
        for (int k = 0; k < K; ++k) {
            ChainRecord rec;
            rec.k = k;
            rec.r = r;
            rec.N = central_index(s, r);
            const MaxModulus mm = max_modulus(s, r);
            rec.xi = mm.xi;
            rec.log_M = mm.log_M;
            if (mm.log_M <= lR + 2.0 * lrho)
                throw ChainBreak(fmt::format("k = {}: |f(xi)| <= R_f |rho|^2", k));
            rec.n = static_cast<long long>(std::floor((mm.log_M - lR) / lrho)) - 1;
            if (!run.records.empty() && rec.n <= run.records.back().n)
                throw ChainBreak(fmt::format("k = {}: n_k did not increase", k));
            rec.log_inner = static_cast<double>(rec.n) * lrho + lR;
            rec.log_outer = rec.log_inner + m * lrho;
            const double lp = static_cast<double>(rec.n) * lrho;
            const double slack = 1e-12 * std::max(1.0, std::abs(mm.log_M));
            rec.sandwich_ok = mm.log_M - 2.0 * lrho - lR <= lp + slack && lp <= mm.log_M - lrho - lR + slack;
            run.records.push_back(rec);
            // Midpoint of (e^inner, e^outer), in log form.
            const double log_next = rec.log_inner + std::log((1.0 + std::exp(m * lrho)) / 2.0);
            if (k + 1 < K) {
                if (log_next > 700.0)
                    throw TruncationTooSmall(
                        fmt::format("k = {}: next radius e^{:.6g} is outside the double range", k + 1, log_next));
                r = std::exp(log_next);
            }
        }
    } catch (const Error& e) {
        run.stop_reason = e.what();
        run.error = std::current_exception();
    }
    return run;
}

std::vector<ChainRecord> wv_annulus_chain(const PowerSeries& s, double rho_mod, double R_f, double m, int K,
                                          double r0) {
    ChainRun run = run_wv_chain(s, rho_mod, R_f, m, K, r0);
    if (run.error) std::rethrow_exception(run.error);
    return run.records;
}

}  // namespace poincare
