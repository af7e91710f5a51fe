#include "poincare/export.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "poincare/errors.hpp"

namespace poincare {

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double double_or_inf(const Json& j) { return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>(); }

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
    out << text;
    out.flush();
    if (!out) throw IoError(fmt::format("failed writing {}", path.string()));
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::string tree_csv(const PreimageTree& tree) {
    std::string out = "depth,re,im,cum_deriv_re,cum_deriv_im\n";
    for (const auto& level : tree.levels)
        for (const auto& n : level)
            out += fmt::format("{},{},{},{},{}\n", n.depth, num(n.point.real()), num(n.point.imag()),
                               num(n.cum_deriv.real()), num(n.cum_deriv.imag()));
    return out;
}

std::string pressure_csv(const std::vector<PressureEstimate>& curves) {
    std::string out = "t,n,logZ\n";
    for (const auto& c : curves)
        for (const auto& l : c.levels) out += fmt::format("{},{},{}\n", num(c.t), l.n, num(l.log_z));
    return out;
}

std::string level_sets_csv(const std::vector<LevelSet>& levels) {
    std::string out = "n,z_re,z_im,zeta_re,zeta_im,deriv_re,deriv_im,critical\n";
    for (const auto& ls : levels)
        for (const auto& p : ls.points)
            out += fmt::format("{},{},{},{},{},{},{},{}\n", ls.n, num(p.z.real()), num(p.z.imag()), num(p.zeta.real()),
                               num(p.zeta.imag()), num(p.deriv_L.real()), num(p.deriv_L.imag()), p.critical ? 1 : 0);
    return out;
}

std::string theta_csv(const ThetaEstimate& est) {
    std::string out = "t,w_modulus,value,level_slope,verdict\n";
    for (const auto& row : est.rows)
        for (std::size_t i = 0; i < row.values.size(); ++i)
            out += fmt::format("{},{},{},{},{}\n", num(row.t), num(est.w_moduli[i]), num(row.values[i]),
                               num(row.level_slope), to_string(row.verdict));
    return out;
}

std::string ifs_csv(const FiniteIFS& s) {
    std::string out = "branch,m,norm_sup,center_re,center_im,image_radius\n";
    for (std::size_t i = 0; i < s.branches.size(); ++i) {
        const auto& b = s.branches[i];
        out += fmt::format("{},{},{},{},{},{}\n", i, b.m, num(b.norm_sup), num(b.image_disc.center.real()),
                           num(b.image_disc.center.imag()), num(b.image_disc.radius));
    }
    return out;
}

std::string bowen_csv(const BowenResult& b) {
    std::string out = "quantity,t,p,value\n";
    out += fmt::format("dim,,{},{}\n", b.p_used, num(b.dim));
    for (const auto& [t, per_p] : b.pressure_samples)
        for (std::size_t p = 0; p < per_p.size(); ++p) out += fmt::format("pressure,{},{},{}\n", num(t), p + 1, num(per_p[p]));
    return out;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const BaseMap& base) {
    Json j;
    if (base.is_polynomial()) {
        j["kind"] = "polynomial";
        j["coeffs"] = Json::array();
        for (auto c : base.polynomial().coeffs()) j["coeffs"].push_back(to_json(c));
    } else {
        j["kind"] = "scaled-exponential";
        j["a"] = to_json(base.exponential().a);
    }
    return j;
}

Json to_json(const Lineariser& L) {
    Json j;
    j["base"] = to_json(L.base);
    j["xi0"] = to_json(L.xi0);
    j["rho"] = to_json(L.rho);
    j["r0"] = L.r0;
    j["safe_eval_radius"] = finite_or_null(L.safe_eval_radius);
    j["tail_radius"] = finite_or_null(L.tail_radius);
    j["warnings"] = L.warnings;
    j["coefficients"] = Json::array();
    for (auto c : L.series.coeffs()) j["coefficients"].push_back(to_json(c));
    return j;
}

Json to_json(const PressureEstimate& e) {
    Json j;
    j["t"] = e.t;
    j["pressure"] = e.pressure;
    j["retained"] = e.retained;
    j["method"] = e.method;
    j["w"] = to_json(e.w_used);
    j["levels"] = Json::array();
    for (const auto& l : e.levels) j["levels"].push_back({{"n", l.n}, {"logZ", l.log_z}});
    return j;
}

Json to_json(const ThetaEstimate& e) {
    Json j;
    j["phi0"] = e.phi0;
    j["n_max"] = e.n_max;
    j["w_moduli"] = e.w_moduli;
    j["bracket_lo"] = e.bracket_lo;
    j["bracket_hi"] = finite_or_null(e.bracket_hi);
    j["rows"] = Json::array();
    for (const auto& r : e.rows)
        j["rows"].push_back({{"t", r.t},
                             {"values", r.values},
                             {"level_slope", finite_or_null(r.level_slope)},
                             {"verdict", std::string(to_string(r.verdict))}});
    return j;
}

Json to_json(const FiniteIFS& s) {
    Json j;
    j["disc"] = {{"center", to_json(s.disc.center)}, {"radius", s.disc.radius}};
    j["metric"] = std::string(to_string(s.metric));
    j["branches"] = Json::array();
    for (const auto& b : s.branches) {
        Json jb;
        jb["m"] = b.m;
        jb["lambda"] = b.norm_sup;
        jb["image_disc"] = {{"center", to_json(b.image_disc.center)}, {"radius", b.image_disc.radius}};
        jb["samples"] = Json::array();
        for (const auto& smp : b.samples)
            jb["samples"].push_back({{"z", to_json(smp.z)}, {"phi", to_json(smp.phi)}, {"dphi", to_json(smp.dphi)}});
        j["branches"].push_back(std::move(jb));
    }
    return j;
}

Json to_json(const BowenResult& b) {
    Json j;
    j["dim"] = b.dim;
    j["p_used"] = b.p_used;
    j["branch_count"] = b.branch_count;
    j["pressure_samples"] = Json::array();
    for (const auto& [t, per_p] : b.pressure_samples) j["pressure_samples"].push_back({{"t", t}, {"per_p", per_p}});
    return j;
}

Complex complex_from_json(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

BaseMap base_map_from_json(const Json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "polynomial") {
        std::vector<Complex> c;
        for (const auto& x : j.at("coeffs")) c.push_back(complex_from_json(x));
        return BaseMap(Polynomial(std::move(c)));
    }
    if (kind == "scaled-exponential") return BaseMap(ScaledExponential{complex_from_json(j.at("a"))});
    throw DomainError(fmt::format("unknown base map kind '{}'", kind));
}

Lineariser lineariser_from_json(const Json& j) {
    try {
        std::vector<Complex> coeffs;
        for (const auto& x : j.at("coefficients")) coeffs.push_back(complex_from_json(x));
        Lineariser L{base_map_from_json(j.at("base")), complex_from_json(j.at("xi0")), complex_from_json(j.at("rho")),
                     PowerSeries(std::move(coeffs)), j.at("r0").get<double>(),
                     double_or_inf(j.at("safe_eval_radius")), double_or_inf(j.at("tail_radius")),
                     j.value("warnings", std::vector<std::string>{})};
        return L;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(fmt::format("malformed lineariser document: {}", e.what()));
    }
}

}  // namespace poincare
