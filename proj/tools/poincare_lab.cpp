#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "poincare/config.hpp"
#include "poincare/errors.hpp"
#include "poincare/export.hpp"
#include "poincare/figure.hpp"
#include "poincare/ifs.hpp"
#include "poincare/image.hpp"
#include "poincare/lineariser.hpp"
#include "poincare/parallel.hpp"
#include "poincare/selftest.hpp"
#include "poincare/vanishing.hpp"
#include "poincare/wiman_valiron.hpp"

namespace fs = std::filesystem;
using namespace poincare;

namespace {

struct Context {
    RunConfig cfg;
    fs::path out;
    Json summary = Json::object();
};

using Handler = std::function<int(Context&)>;

Polynomial polynomial_base(const RunConfig& cfg) {
    const BaseMap base = base_map_from_config(cfg);
    if (!base.is_polynomial()) throw UsageError("base: this command needs a polynomial, got " + base.describe());
    return base.polynomial();
}

Lineariser lineariser_from(const RunConfig& cfg) {
    if (!cfg.get("lineariser").empty()) {
        std::ifstream in(cfg.get("lineariser"));
        if (!in) throw IoError("cannot read lineariser file " + cfg.get("lineariser"));
        return lineariser_from_json(Json::parse(in));
    }
    const BaseMap base = base_map_from_config(cfg);
    const Complex xi0 = fixed_point_from_config(cfg, base);
    Lineariser L = koenigs_series(base, xi0, cfg.get_int("order"), cfg.get_complex("a1"));
    if (!cfg.get("rho").empty()) {
        const Complex rho = cfg.get_complex("rho");
        if (std::abs(rho - L.rho) > 1e-8 * std::abs(L.rho))
            throw DomainError(fmt::format("rho: requested {}{:+}i but the fixed point has multiplier {}{:+}i", rho.real(),
                                          rho.imag(), L.rho.real(), L.rho.imag()));
    }
    return L;
}

LevelSetOptions level_options(const RunConfig& cfg) {
    return {static_cast<std::size_t>(cfg.get_long("cap")), cfg.get_int("allow_core_target") != 0};
}

std::string cplx(Complex z) { return fmt::format("{:.17g},{:.17g}", z.real(), z.imag()); }

int cmd_fixed_points(Context& c) {
    const Polynomial p = polynomial_base(c.cfg);
    std::string csv = "index,re,im,multiplier_re,multiplier_im,abs_multiplier,kind\n";
    Json list = Json::array();
    int i = 0;
    for (const auto& f : fixed_points(p)) {
        csv += fmt::format("{},{},{},{:.17g},{}\n", i, cplx(f.point), cplx(f.multiplier), std::abs(f.multiplier),
                           to_string(f.kind));
        fmt::print("{}  z = {:.12g}{:+.12g}i  |rho| = {:.12g}  {}\n", i, f.point.real(), f.point.imag(),
                   std::abs(f.multiplier), to_string(f.kind));
        list.push_back({{"point", to_json(f.point)}, {"multiplier", to_json(f.multiplier)}, {"kind", to_string(f.kind)}});
        ++i;
    }
    write_text(c.out / "fixed_points.csv", csv);
    c.summary["fixed_points"] = list;
    return 0;
}

int cmd_preimages(Context& c) {
    const Polynomial p = polynomial_base(c.cfg);
    const PreimageTree tree = preimage_tree(p, c.cfg.get_complex("w"), c.cfg.get_int("n"),
                                            static_cast<std::size_t>(c.cfg.get_long("cap")));
    write_text(c.out / "tree.csv", tree_csv(tree));
    const auto& last = tree.level(c.cfg.get_int("n"));
    fmt::print("{} preimages at depth {}\n", last.size(), c.cfg.get_int("n"));
    c.summary["count"] = last.size();
    return 0;
}

int cmd_partition(Context& c) {
    const Polynomial p = polynomial_base(c.cfg);
    const double z = partition_function(p, c.cfg.get_int("n"), c.cfg.get_complex("w"), c.cfg.get_double("t"),
                                        metric_from_string(c.cfg.get("metric")));
    fmt::print("Z = {:.17g}\n", z);
    c.summary["value"] = z;
    write_json(c.out / "partition.json", c.summary);
    return 0;
}

int cmd_pressure(Context& c) {
    const Polynomial p = polynomial_base(c.cfg);
    const PressureModel model(p, c.cfg.get_complex("w"), c.cfg.get_int("pressure_n_max"),
                              metric_from_string(c.cfg.get("metric")));
    std::vector<PressureEstimate> curves;
    Json list = Json::array();
    for (double t : c.cfg.get_doubles("t_grid")) {
        curves.push_back(model.estimate(t));
        list.push_back(to_json(curves.back()));
        fmt::print("P({:g}) = {:.12g}\n", t, curves.back().pressure);
    }
    write_text(c.out / "pressure.csv", pressure_csv(curves));
    c.summary["estimates"] = list;
    return 0;
}

int cmd_hypdim(Context& c) {
    const Polynomial p = polynomial_base(c.cfg);
    const double d = hypdim_estimate(p, c.cfg.get_complex("w"), c.cfg.get_int("pressure_n_max"));
    fmt::print("hypdim = {:.6f}\n", d);
    c.summary["hypdim"] = d;
    return 0;
}

int cmd_lineariser_build(Context& c) {
    const Lineariser L = lineariser_from(c.cfg);
    write_json(c.out / "lineariser.json", to_json(L));
    fmt::print("rho = {:.12g}{:+.12g}i  r0 = {:.6g}  safe radius = {:.6g}\n", L.rho.real(), L.rho.imag(), L.r0,
               L.safe_eval_radius);
    for (const auto& w : L.warnings) fmt::print(stderr, "warning: {}\n", w);
    c.summary["rho"] = to_json(L.rho);
    c.summary["r0"] = L.r0;
    return 0;
}

int cmd_lineariser_eval(Context& c) {
    const Lineariser L = lineariser_from(c.cfg);
    std::string csv = "z_re,z_im,L_re,L_im,dL_re,dL_im\n";
    for (Complex z : c.cfg.get_complexes("z")) {
        Complex v, d;
        evaluate_both(L, z, v, d);
        csv += fmt::format("{},{},{}\n", cplx(z), cplx(v), cplx(d));
        fmt::print("L({:.12g}{:+.12g}i) = {:.15g}{:+.15g}i\n", z.real(), z.imag(), v.real(), v.imag());
    }
    write_text(c.out / "eval.csv", csv);
    return 0;
}

int cmd_lineariser_levels(Context& c) {
    const Lineariser L = lineariser_from(c.cfg);
    const auto levels = level_sets(L, c.cfg.get_complex("w"), c.cfg.get_int("n_min"), c.cfg.get_int("n_max"),
                                   level_options(c.cfg));
    write_text(c.out / "levels.csv", level_sets_csv(levels));
    Json counts = Json::array();
    for (const auto& l : levels) {
        fmt::print("n = {:3d}  points = {}{}\n", l.n, l.points.size(), l.truncated ? " (truncated)" : "");
        counts.push_back({{"n", l.n}, {"points", l.points.size()}, {"truncated", l.truncated}});
    }
    c.summary["levels"] = counts;
    return 0;
}

int cmd_theta(Context& c) {
    const Lineariser L = lineariser_from(c.cfg);
    const ThetaEstimate est = theta_estimate(L, c.cfg.get_doubles("t_grid"), c.cfg.get_doubles("w_moduli"),
                                             c.cfg.get_int("theta_n_max"), c.cfg.get_double("phi0"));
    write_text(c.out / "theta.csv", theta_csv(est));
    write_json(c.out / "theta.json", to_json(est));
    for (const auto& row : est.rows) fmt::print("t = {:g}: {}\n", row.t, to_string(row.verdict));
    if (std::isnan(est.bracket_lo))
        fmt::print("no bracket\n");
    else
        fmt::print("theta in [{:g}, {:g}]\n", est.bracket_lo, est.bracket_hi);
    c.summary["theta"] = to_json(est);
    return 0;
}

int cmd_ifs_build(Context& c) {
    const Polynomial p = polynomial_base(c.cfg);
    const FiniteIFS s = build_ifs_near(p, Disc{c.cfg.get_complex("disc_center"), c.cfg.get_double("disc_radius")},
                                       c.cfg.get_int("n"), c.cfg.get_int("max_branches"));
    write_json(c.out / "ifs.json", to_json(s));
    write_text(c.out / "ifs.csv", ifs_csv(s));
    fmt::print("{} branches\n", s.branches.size());
    c.summary["branches"] = s.branches.size();
    return 0;
}

int cmd_ifs_bowen(Context& c) {
    BowenResult b;
    if (!c.cfg.get("lambdas").empty()) {
        b = bowen_dimension(c.cfg.get_doubles("lambdas"));
    } else {
        const Polynomial p = polynomial_base(c.cfg);
        const FiniteIFS s = build_ifs_near(p, Disc{c.cfg.get_complex("disc_center"), c.cfg.get_double("disc_radius")},
                                           c.cfg.get_int("n"), c.cfg.get_int("max_branches"));
        write_json(c.out / "ifs.json", to_json(s));
        b = bowen_dimension(s);
    }
    write_text(c.out / "bowen.csv", bowen_csv(b));
    fmt::print("dim = {:.10f}\n", b.dim);
    c.summary["bowen"] = to_json(b);
    return 0;
}

int cmd_ifs_sp_check(Context& c) {
    const std::string lam = c.cfg.get("lambdas").empty() ? "0.5,0.5" : c.cfg.get("lambdas");
    const FiniteIFS s = synthetic_ifs(parse_double_list(lam));
    std::string csv = "p,nu_p,words,sum_Sp,full_sum,ratio,bound,holds\n";
    bool all = true;
    for (double pd : c.cfg.get_doubles("p")) {
        const int p = static_cast<int>(pd);
        const SpBound b = sp_lower_bound(s, c.cfg.get_double("t"), p);
        csv += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", p, b.nu_p, b.words, b.sum_Sp, b.full_sum,
                           b.ratio, b.bound, b.holds ? 1 : 0);
        fmt::print("p = {:2d}  ratio = {:.6f}  bound = {:.6f}  {}\n", p, b.ratio, b.bound, b.holds ? "holds" : "fails");
        all = all && b.holds;
    }
    write_text(c.out / "sp.csv", csv);
    c.summary["holds"] = all;
    return 0;
}

int cmd_ifs_far(Context& c) {
    const Lineariser L = lineariser_from(c.cfg);
    const FiniteIFS s = build_lineariser_far_ifs(L, c.cfg.get_int("k"), c.cfg.get_int("max_branches"));
    const BowenResult b = bowen_dimension(s);
    write_json(c.out / "ifs.json", to_json(s));
    write_text(c.out / "bowen.csv", bowen_csv(b));
    fmt::print("{} branches, dim = {:.6f}\n", s.branches.size(), b.dim);
    c.summary["bowen"] = to_json(b);
    return 0;
}

int cmd_wv(Context& c) {
    const PowerSeries s = PowerSeries::exponential(c.cfg.get_int("wv_order"));
    const double m = c.cfg.get_double("m");
    std::string csv = "r,N,log_M,bound_ok,max_eps\n";
    for (const auto& r : wv_diagnostics(s, c.cfg.get_doubles("r_list"), m, c.cfg.get_double("rho_mod"))) {
        csv += fmt::format("{:.17g},{},{:.17g},{},{:.17g}\n", r.r, r.N, r.log_M, r.bound_ok ? 1 : 0, r.max_eps);
        fmt::print("r = {:g}  N = {}  log M = {:.6f}  {}\n", r.r, r.N, r.log_M, r.bound_ok ? "ok" : "violated");
    }
    write_text(c.out / "wv.csv", csv);
    const ChainRun run = run_wv_chain(s, c.cfg.get_double("rho_mod"), c.cfg.get_double("R_f"), m, c.cfg.get_int("K"),
                                      c.cfg.get_double("r_start"));
    std::string chain = "k,r,N,log_M,n,log_inner,log_outer,sandwich_ok\n";
    for (const auto& r : run.records)
        chain += fmt::format("{},{:.17g},{},{:.17g},{},{:.17g},{:.17g},{}\n", r.k, r.r, r.N, r.log_M, r.n, r.log_inner,
                             r.log_outer, r.sandwich_ok ? 1 : 0);
    write_text(c.out / "chain.csv", chain);
    fmt::print("chain: {} steps{}\n", run.records.size(), run.stop_reason.empty() ? "" : " (" + run.stop_reason + ")");
    c.summary["chain_steps"] = run.records.size();
    c.summary["chain_stop"] = run.stop_reason;
    return 0;
}

int cmd_render(Context& c) {
    const RunConfig& cfg = c.cfg;
    const Window window{cfg.get_complex("window_center"), cfg.get_double("window_width")};
    const BaseMap base = base_map_from_config(cfg);
    if (base.is_polynomial()) {
        const ImageBuffer julia = render_julia_mask(base.polynomial(), window, cfg.get_int("resolution"),
                                                    cfg.get_int("iter_cap"));
        write_image(julia, c.out / "julia.ppm");
    }
    FigureSpec spec;
    spec.resolution = cfg.get_int("resolution");
    spec.iter_cap = cfg.get_int("iter_cap");
    spec.level_options = level_options(cfg);
    const FigurePanels panels = render_preimage_figure(lineariser_from(cfg), cfg.get_complex("w"), cfg.get_int("n"), spec);
    write_image(panels.domain, c.out / "domain.ppm");
    write_image(panels.range, c.out / "range.ppm");
    fmt::print("markers: domain {}, range {}\n", panels.domain_markers, panels.range_markers);
    c.summary["domain_markers"] = panels.domain_markers;
    c.summary["range_markers"] = panels.range_markers;
    return 0;
}

int cmd_trap_check(Context& c) {
    std::string csv = "lambda_re,lambda_im,radius,contained,max_boundary_dist\n";
    bool all = true;
    for (Complex lam : c.cfg.get_complexes("lambda")) {
        const TrapCheck t = exp_lineariser_trap_check(lam);
        csv += fmt::format("{},{:.17g},{},{:.17g}\n", cplx(lam), t.radius, t.contained ? 1 : 0, t.max_boundary_dist);
        fmt::print("lambda = {:g}{:+g}i  {}  max distance {:.6f}\n", lam.real(), lam.imag(),
                   t.contained ? "contained" : "escapes", t.max_boundary_dist);
        all = all && t.contained;
    }
    write_text(c.out / "trap.csv", csv);
    c.summary["contained"] = all;
    return all ? 0 : 1;
}

int cmd_selftest(Context& c) {
    const SelftestReport report = run_selftest(c.out);
    for (const auto& ch : report.checks) fmt::print("{} {}: {}\n", ch.passed ? "PASS" : "FAIL", ch.name, ch.detail);
    c.summary["passed"] = report.passed();
    return report.passed() ? 0 : 1;
}

std::string program_version() { return POINCARE_LAB_VERSION; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical experiments on Poincare functions of polynomials"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_file, out_dir, poly, exp_a, fixed_point;
    std::optional<int> jobs;
    std::optional<long long> seed;
    std::vector<std::string> overrides;
    app.add_option("--config", config_file, "key=value configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--set", overrides, "override a configuration key (key=value)");
    app.add_option("--poly", poly, "ascending polynomial coefficients, e.g. \"-2,0,1\"")->allow_extra_args(false);
    app.add_option("--exp", exp_a, "base map a*exp(z)");
    app.add_option("--fixed-point", fixed_point, "auto, index:<i> or a complex value");
    app.add_option("--seed", seed, "seed for sampled checks");

    std::map<std::string, std::optional<std::string>> flag_values;
    auto bind = [&](CLI::App* sub, const std::string& flag, const std::string& key) {
        sub->add_option(flag, flag_values[key], "sets " + key)->allow_extra_args(false);
    };

    Handler handler;
    std::string command;
    auto add = [&](CLI::App* parent, const std::string& name, const std::string& help, Handler h,
                   std::vector<std::pair<std::string, std::string>> flags) {
        CLI::App* sub = parent->add_subcommand(name, help);
        for (const auto& [flag, key] : flags) bind(sub, flag, key);
        sub->callback([&handler, &command, h, sub] {
            handler = h;
            command = sub->get_parent() && sub->get_parent()->get_parent()
                          ? sub->get_parent()->get_name() + " " + sub->get_name()
                          : sub->get_name();
        });
        return sub;
    };

    const std::vector<std::pair<std::string, std::string>> depth = {{"--n", "n"}, {"--w", "w"}, {"--cap", "cap"}};
    add(&app, "fixed-points", "fixed points and multipliers", cmd_fixed_points, {});
    add(&app, "preimages", "preimage tree of w", cmd_preimages, depth);
    add(&app, "partition", "partition function Z(t, P^n, w)", cmd_partition,
        {{"--n", "n"}, {"--w", "w"}, {"--t", "t"}, {"--metric", "metric"}});
    add(&app, "pressure", "pressure over a t grid", cmd_pressure,
        {{"--tgrid", "t_grid"}, {"--n-max", "pressure_n_max"}, {"--w", "w"}, {"--metric", "metric"}});
    add(&app, "hypdim", "smallest zero of the pressure", cmd_hypdim, {{"--n-max", "pressure_n_max"}, {"--w", "w"}});

    CLI::App* lin = app.add_subcommand("lineariser", "Poincare function of the base map");
    lin->require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> lin_flags = {{"--order", "order"}, {"--a1", "a1"}, {"--rho", "rho"},
                                                                         {"--lineariser", "lineariser"}};
    auto with = [](std::vector<std::pair<std::string, std::string>> a, std::vector<std::pair<std::string, std::string>> b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    add(lin, "build", "Koenigs series and univalence radius", cmd_lineariser_build, lin_flags);
    add(lin, "eval", "evaluate L and L' at z", cmd_lineariser_eval, with(lin_flags, {{"--z", "z"}}));
    add(lin, "levels", "level sets L^-1(w) by annulus", cmd_lineariser_levels,
        with(lin_flags, {{"--w", "w"}, {"--n-min", "n_min"}, {"--n-max", "n_max"}, {"--cap", "cap"},
                         {"--allow-core-target", "allow_core_target"}}));
    add(&app, "theta", "vanishing threshold of the cylindrical partition function", cmd_theta,
        with(lin_flags, {{"--tgrid", "t_grid"}, {"--w-moduli", "w_moduli"}, {"--n-max", "theta_n_max"}, {"--phi0", "phi0"}}));

    CLI::App* ifs = app.add_subcommand("ifs", "finite iterated function systems");
    ifs->require_subcommand(1);
    const std::vector<std::pair<std::string, std::string>> disc = {{"--disc-center", "disc_center"},
                                                                    {"--disc-radius", "disc_radius"},
                                                                    {"--n", "n"},
                                                                    {"--max-branches", "max_branches"}};
    add(ifs, "build", "inverse branches of P^n on a disc", cmd_ifs_build, disc);
    add(ifs, "bowen", "Bowen dimension of a system", cmd_ifs_bowen, with(disc, {{"--lambdas", "lambdas"}}));
    add(ifs, "sp-check", "lower bound for balanced word sums", cmd_ifs_sp_check,
        {{"--lambdas", "lambdas"}, {"--p", "p"}, {"--t", "t"}});
    add(ifs, "far", "system of L-branches far from the origin", cmd_ifs_far,
        with(lin_flags, {{"--k", "k"}, {"--max-branches", "max_branches"}}));

    add(&app, "wv", "Wiman-Valiron diagnostics for exp", cmd_wv,
        {{"--order", "wv_order"}, {"--r-list", "r_list"}, {"--rho-mod", "rho_mod"}, {"--R-f", "R_f"}, {"--m", "m"},
         {"--K", "K"}, {"--r-start", "r_start"}});
    add(&app, "render", "Julia set and level-set panels", cmd_render,
        with(lin_flags, {{"--w", "w"}, {"--n", "n"}, {"--resolution", "resolution"}, {"--iter-cap", "iter_cap"},
                         {"--window-center", "window_center"}, {"--window-width", "window_width"}}));
    add(&app, "trap-check", "disc trap for the exponential lineariser", cmd_trap_check, {{"--lambda", "lambda"}});
    add(&app, "selftest", "invariant suites with deterministic artifacts", cmd_selftest, {});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    Context ctx;
    try {
        if (config_file) ctx.cfg.load_file(*config_file);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
            ctx.cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (poly) ctx.cfg.set("base", *poly);
        if (exp_a) ctx.cfg.set("base", "exp a=" + *exp_a);
        if (fixed_point) ctx.cfg.set("fixed_point", *fixed_point);
        if (seed) ctx.cfg.set("seed", std::to_string(*seed));
        if (jobs) ctx.cfg.set("jobs", std::to_string(*jobs));
        for (const auto& [key, value] : flag_values)
            if (value) ctx.cfg.set(key, *value);
        if (const char* env = std::getenv("POINCARE_LAB_OUT"); env && *env) ctx.cfg.set("out", env);
        if (out_dir) ctx.cfg.set("out", *out_dir);
        set_worker_count(ctx.cfg.get_int("jobs"));
        ctx.out = ctx.cfg.get("out");
        fs::create_directories(ctx.out);
    } catch (const UsageError& e) {
        fmt::print(stderr, "usage error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }

    int code = 0;
    std::string error;
    try {
        code = handler(ctx);
    } catch (const UsageError& e) {
        fmt::print(stderr, "usage error: {}\n", e.what());
        code = 2;
        error = e.what();
    } catch (const Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        code = 1;
        error = e.what();
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        code = 1;
        error = e.what();
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json manifest;
    manifest["command"] = command;
    manifest["argv"] = std::vector<std::string>(argv, argv + argc);
    Json config = Json::object();
    for (const auto& [key, _] : RunConfig::defaults()) config[key] = ctx.cfg.get(key);
    manifest["config"] = config;
    manifest["versions"] = {{"poincare_lab", program_version()},
                            {"compiler", __VERSION__},
                            {"fmt", FMT_VERSION},
                            {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                                          NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)}};
    manifest["exit_code"] = code;
    if (!error.empty()) manifest["error"] = error;
    manifest["summary"] = ctx.summary;
    manifest["wall_time_s"] = wall;
    try {
        write_json(ctx.out / "run-manifest.json", manifest);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        if (code == 0) code = 1;
    }
    return code;
}
