#include "poincare/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "poincare/errors.hpp"
#include "poincare/export.hpp"
#include "poincare/ifs.hpp"
#include "poincare/image.hpp"
#include "poincare/lineariser.hpp"
#include "poincare/metric.hpp"
#include "poincare/vanishing.hpp"

namespace poincare {

namespace {

class Suite {
public:
    void check(std::string name, bool ok, std::string detail) {
        report_.checks.push_back({std::move(name), ok, std::move(detail)});
    }
    template <class F>
    void guarded(const std::string& name, F&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            check(name, false, fmt::format("exception: {}", e.what()));
        }
    }
    SelftestReport& report() { return report_; }

private:
    SelftestReport report_;
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

bool SelftestReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

SelftestReport run_selftest(const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    Suite s;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto artifact = [&](const std::string& name) {
        s.report().artifacts.push_back(out_dir / name);
        return out_dir / name;
    };

    s.guarded("roots.residual", [&] {
        double worst = 0.0;
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<Complex> c(static_cast<std::size_t>(2 + trial % 7) + 1);
            for (auto& x : c) x = {unit(rng), unit(rng)};
            const Polynomial p(c);
            for (auto r : roots(p)) worst = std::max(worst, std::abs(p.eval(r)) / root_residual_bound(p, r));
        }
        s.check("roots.residual", worst <= 1.0, fmt::format("max residual / bound = {:.3e}", worst));
    });

    s.guarded("metric.chain_rule", [&] {
        const Polynomial f = Polynomial::quadratic({0.3, 0.1}), g({Complex{1, 0}, Complex{0, 2}, Complex{0, 0}, Complex{0.5, 0}});
        double worst = 0.0;
        for (auto m : {MetricKind::euclidean, MetricKind::spherical, MetricKind::cylindrical, MetricKind::one_sided_cylindrical}) {
            for (int i = 0; i < 50; ++i) {
                const Complex z{2 * unit(rng) + 0.1, 2 * unit(rng)};
                const Complex fz = f.eval(z), gfz = g.eval(fz);
                const double a = derivative_norm(m, f.eval_derivative(z), z, fz);
                const double b = derivative_norm(m, g.eval_derivative(fz), fz, gfz);
                const double ab = derivative_norm(m, g.eval_derivative(fz) * f.eval_derivative(z), z, gfz);
                worst = std::max(worst, std::abs(a * b - ab) / ab);
            }
        }
        s.check("metric.chain_rule", worst <= 1e-12, fmt::format("max relative error {:.3e}", worst));
    });

    s.guarded("tree.counting_and_chain", [&] {
        const Polynomial p = Polynomial::quadratic({0.1, 0.2});
        const PreimageTree tree = preimage_tree(p, default_base_point, 8);
        bool counts = true;
        for (int n = 0; n <= 8; ++n) counts = counts && tree.level(n).size() == (std::size_t{1} << n);
        double worst = 0.0;
        for (const auto& node : tree.level(8)) {
            Complex z = node.point, d = 1.0;
            for (int i = 0; i < 8; ++i) {
                d *= p.eval_derivative(z);
                z = p.eval(z);
            }
            worst = std::max(worst, rel(node.cum_deriv, d));
        }
        s.check("tree.counting_and_chain", counts && worst <= 1e-9 * 8, fmt::format("chain error {:.3e}", worst));
        write_text(artifact("tree.csv"), tree_csv(preimage_tree(p, default_base_point, 5)));
    });

    s.guarded("partition.examples", [&] {
        const Polynomial z2 = Polynomial::monomial(2);
        const double a = partition_function(z2, 3, 1.0, 1.0, MetricKind::euclidean);
        const double b = partition_function(z2, 5, 1.0, 2.0, MetricKind::euclidean);
        const double c = partition_function(Polynomial::quadratic(-2), 0, default_base_point, 1.3, MetricKind::spherical);
        s.check("partition.examples", std::abs(a - 1.0) < 1e-12 && std::abs(b - 1.0 / 32) < 1e-12 && c == 1.0,
                fmt::format("{:.15g} {:.15g} {:.15g}", a, b, c));
    });

    s.guarded("pressure.line_and_monotone", [&] {
        const PressureModel model(Polynomial::monomial(2), default_base_point, 12);
        std::vector<PressureEstimate> curves;
        double worst = 0.0, prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) {
            curves.push_back(model.estimate(t));
            const double p = curves.back().pressure;
            worst = std::max(worst, std::abs(p - (1.0 - t) * std::numbers::ln2));
            monotone = monotone && p <= prev;
            prev = p;
        }
        s.check("pressure.line_and_monotone", worst < 0.03 && monotone, fmt::format("max deviation {:.4f}", worst));
        write_text(artifact("pressure.csv"), pressure_csv(curves));
    });

    const Lineariser E = koenigs_series(BaseMap(Polynomial::monomial(2)), 1.0);
    const Lineariser C = koenigs_series(BaseMap(Polynomial::quadratic(-2)), 2.0);
    write_json(artifact("lineariser.json"), to_json(C));

    s.guarded("koenigs.exp_coefficients", [&] {
        double err = 0.0, fact = 1.0;
        for (int n = 1; n <= 30; ++n) {
            fact *= n;
            err = std::max(err, std::abs(E.series.coeff(n) - 1.0 / fact));
        }
        s.check("koenigs.exp_coefficients", err <= 1e-12, fmt::format("max error {:.3e}", err));
    });

    s.guarded("lineariser.schroeder", [&] {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Complex z = std::polar(C.safe_eval_radius * std::abs(unit(rng)), std::numbers::pi * unit(rng));
            const Complex fz = C.base.eval(evaluate(C, z));
            worst = std::max(worst, std::abs(evaluate(C, C.rho * z) - fz) / (1.0 + std::abs(fz)));
        }
        s.check("lineariser.schroeder", worst <= 1e-9, fmt::format("max residual {:.3e}", worst));
    });

    s.guarded("lineariser.descent", [&] {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const Complex z = std::polar(40.0 * std::abs(unit(rng)), std::numbers::pi * unit(rng));
            const int n = descent_depth(C, z);
            worst = std::max(worst, rel(evaluate_at_depth(C, z, n + 1), evaluate_at_depth(C, z, n)));
        }
        s.check("lineariser.descent", worst <= 1e-10, fmt::format("max relative gap {:.3e}", worst));
    });

    s.guarded("levels.exp_oracle", [&] {
        const Complex w = 4.0;
        const int n = 5;
        const LevelSet ls = level_set(E, w, n, {default_tree_cap, true});
        const double lo = E.r0 * std::pow(2.0, n), hi = lo * 2.0;
        std::vector<Complex> oracle;
        for (int k = -1000; k <= 1000; ++k) {
            const Complex z{std::log(std::abs(w)), std::arg(w) + 2.0 * std::numbers::pi * k};
            if (std::abs(z) >= lo && std::abs(z) < hi) oracle.push_back(z);
        }
        bool matched = ls.points.size() == oracle.size();
        double chain = 0.0;
        for (const auto& p : ls.points) {
            double best = 1e300;
            for (auto o : oracle) best = std::min(best, std::abs(p.z - o));
            matched = matched && best <= 1e-9;
            chain = std::max(chain, rel(p.deriv_L, lineariser_derivative(E, p.z)));
        }
        s.check("levels.exp_oracle", matched && chain <= 1e-8,
                fmt::format("{} points, chain formula error {:.3e}", ls.points.size(), chain));
    });

    s.guarded("levels.partition", [&] {
        const auto levels = level_sets(C, std::polar(1000.0, 0.3), 1, 8);
        write_text(artifact("levels.csv"), level_sets_csv(levels));
        std::size_t count = 0;
        for (const auto& l : levels) count += l.points.size();
        const CylPartition zero = cyl_partition_from_levels(levels, 0.0);
        const CylPartition z3 = cyl_partition_from_levels(levels, 1.5);
        std::vector<double> rev(z3.per_level.rbegin(), z3.per_level.rend());
        double rsum = 0.0;
        for (double v : rev) rsum += v;
        s.check("levels.partition",
                zero.value == static_cast<double>(count) && std::abs(rsum - z3.value) <= 1e-12 * z3.value,
                fmt::format("{} points, Z(1.5) = {:.12g}", count, z3.value));
    });

    s.guarded("lineariser.rescaling", [&] {
        double worst = 0.0;
        for (Complex lam : {Complex{0.5, 0}, Complex{0, 2}}) {
            const Lineariser S = rescaled(C, lam);
            for (int i = 0; i < 3; ++i) {
                const double t = 1.0 + 0.5 * unit(rng);
                const Complex w = std::polar(200.0 + 100.0 * unit(rng), std::numbers::pi * unit(rng));
                const double a = cyl_partition_L(S, t, w, 1, 8).value;
                const double b = cyl_partition_L(C, t, w / lam, 1, 8).value;
                worst = std::max(worst, std::abs(a - b) / b);
            }
        }
        s.check("lineariser.rescaling", worst <= 1e-12, fmt::format("max relative gap {:.3e}", worst));
    });

    s.guarded("ifs.bowen", [&] {
        const double moran = bowen_dimension(std::vector<double>{1.0 / 3, 1.0 / 3}).dim;
        bool monotone = true;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> l;
            double prev = 0.0;
            for (int i = 0; i < 6; ++i) {
                l.push_back(0.05 + 0.4 * std::abs(unit(rng)));
                const double d = bowen_dimension(l).dim;
                monotone = monotone && d >= prev;
                prev = d;
            }
        }
        const FiniteIFS sys = build_ifs_near(Polynomial::quadratic(-2), Disc{1.0, 0.5}, 4, 8);
        const BowenResult b = bowen_dimension(sys);
        write_json(artifact("ifs.json"), to_json(sys));
        write_text(artifact("bowen.csv"), bowen_csv(b));
        s.check("ifs.bowen", std::abs(moran - std::log(2.0) / std::log(3.0)) <= 1e-6 && monotone && b.dim > 0,
                fmt::format("moran {:.10f}, z^2-2 system dim {:.6f} with {} branches", moran, b.dim, sys.branches.size()));
    });

    s.guarded("ifs.sp_bound", [&] {
        const FiniteIFS sys = synthetic_ifs({0.5, 0.5});
        bool holds = true;
        double worst = 0.0;
        for (int p = 4; p <= 14; ++p) {
            const SpBound b = sp_lower_bound(sys, 1.0, p);
            holds = holds && b.holds;
            worst = std::max(worst, std::abs(b.full_sum - 1.0));
        }
        s.check("ifs.sp_bound", holds && worst <= 1e-12, fmt::format("full-sum error {:.3e}", worst));
    });

    s.guarded("exp.trap", [&] {
        const TrapCheck t = exp_lineariser_trap_check(0.04);
        s.check("exp.trap", t.contained, fmt::format("max boundary distance {:.6f}", t.max_boundary_dist));
    });

    s.guarded("el.inequality", [&] {
        const ElCheck el = el_inequality_check(C, 5.0, 1000, 7);
        s.check("el.inequality", el.violations == 0 && el.samples > 0,
                fmt::format("{} samples, min margin {:.6f}", el.samples, el.min_margin));
    });

    s.guarded("image.julia", [&] {
        const ImageBuffer img = render_julia_mask(Polynomial::monomial(2), Window{0.0, 4.0}, 128, 100);
        write_image(img, artifact("julia.ppm"));
        std::size_t inside = 0;
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x) inside += img.at(x, y) == black;
        const double area = static_cast<double>(inside) * img.pixel_size() * img.pixel_size();
        s.check("image.julia", std::abs(area - std::numbers::pi) < 0.05 * std::numbers::pi,
                fmt::format("mask area {:.6f}", area));
    });

    Json summary;
    summary["passed"] = s.report().passed();
    summary["checks"] = Json::array();
    for (const auto& c : s.report().checks)
        summary["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    write_json(artifact("selftest.json"), summary);
    return s.report();
}

}  // namespace poincare
