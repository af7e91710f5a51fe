#include "poincare/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "poincare/dynamics.hpp"
#include "poincare/errors.hpp"

namespace poincare {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view s, std::string_view whole) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError(fmt::format("cannot parse number '{}'", whole));
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& RunConfig::defaults() {
    static const std::vector<std::pair<std::string, std::string>> d{
        {"base", "0,0,1"},
        {"fixed_point", "auto"},
        {"a1", "1"},
        {"rho", ""},
        {"order", "512"},
        {"n", "3"},
        {"n_min", "1"},
        {"n_max", "18"},
        {"pressure_n_max", "16"},
        {"theta_n_max", "16"},
        {"cap", "4194304"},
        {"t", "1"},
        {"t_grid", "0.7,1.3"},
        {"metric", "spherical"},
        {"w", "2+2i"},
        {"w_moduli", "100,1000,10000"},
        {"phi0", "0.3"},
        {"z", "1"},
        {"lineariser", ""},
        {"allow_core_target", "0"},
        {"disc_center", "1"},
        {"disc_radius", "0.2"},
        {"max_branches", "64"},
        {"k", "8"},
        {"p", "4"},
        {"lambdas", ""},
        {"wv_order", "4096"},
        {"r_list", "10,100,1000"},
        {"rho_mod", "2"},
        {"R_f", "1"},
        {"m", "3"},
        {"K", "6"},
        {"r_start", "10"},
        {"R", "5"},
        {"samples", "10000"},
        {"lambda", "0.04"},
        {"resolution", "512"},
        {"iter_cap", "400"},
        {"window_center", "0"},
        {"window_width", "4"},
        {"out", "out"},
        {"seed", "1"},
        {"jobs", "1"},
    };
    return d;
}

RunConfig::RunConfig() {
    for (const auto& [k, v] : defaults()) values_.emplace(k, v);
}

void RunConfig::set(std::string_view key, std::string value) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UsageError(fmt::format("unknown configuration key '{}'", key));
    it->second = std::move(value);
}

void RunConfig::load_text(std::string_view text, std::string_view origin) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw UsageError(fmt::format("{}:{}: expected key=value, got '{}'", origin, lineno, s));
        const auto key = trim(s.substr(0, eq));
        if (values_.find(key) == values_.end())
            throw UsageError(fmt::format("{}:{}: unknown configuration key '{}'", origin, lineno, key));
        set(key, std::string(trim(s.substr(eq + 1))));
    }
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(fmt::format("cannot read configuration file {}", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    load_text(buf.str(), path.string());
}

const std::string& RunConfig::get(std::string_view key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UsageError(fmt::format("unknown configuration key '{}'", key));
    return it->second;
}

double RunConfig::get_double(std::string_view key) const {
    try {
        return parse_real(get(key), get(key));
    } catch (const UsageError&) {
        throw UsageError(fmt::format("key '{}': expected a number, got '{}'", key, get(key)));
    }
}

long long RunConfig::get_long(std::string_view key) const {
    const auto s = trim(get(key));
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError(fmt::format("key '{}': expected an integer, got '{}'", key, get(key)));
    return v;
}

int RunConfig::get_int(std::string_view key) const {
    const long long v = get_long(key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw UsageError(fmt::format("key '{}': integer out of range", key));
    return static_cast<int>(v);
}

Complex RunConfig::get_complex(std::string_view key) const {
    try {
        return parse_complex(get(key));
    } catch (const UsageError&) {
        throw UsageError(fmt::format("key '{}': expected a complex number, got '{}'", key, get(key)));
    }
}

std::vector<double> RunConfig::get_doubles(std::string_view key) const {
    try {
        return parse_double_list(get(key));
    } catch (const UsageError&) {
        throw UsageError(fmt::format("key '{}': expected a list of numbers, got '{}'", key, get(key)));
    }
}

std::vector<Complex> RunConfig::get_complexes(std::string_view key) const {
    try {
        return parse_complex_list(get(key));
    } catch (const UsageError&) {
        throw UsageError(fmt::format("key '{}': expected a list of complex numbers, got '{}'", key, get(key)));
    }
}

Complex parse_complex(std::string_view text) {
    const auto s = trim(text);
    if (s.empty()) throw UsageError("empty complex number");
    if (s.back() != 'i') return {parse_real(s, text), 0.0};
    // Split before the last sign that is not an exponent sign.
    std::size_t split_at = 0;
    for (std::size_t i = s.size() - 1; i > 0; --i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split_at = i;
            break;
        }
    }
    const auto re_part = s.substr(0, split_at);
    auto im_part = s.substr(split_at, s.size() - split_at - 1);
    double im;
    if (im_part.empty() || im_part == "+")
        im = 1.0;
    else if (im_part == "-")
        im = -1.0;
    else
        im = parse_real(im_part, text);
    return {re_part.empty() ? 0.0 : parse_real(re_part, text), im};
}

std::vector<Complex> parse_complex_list(std::string_view text) {
    std::vector<Complex> out;
    for (auto item : split(text, ',')) out.push_back(parse_complex(item));
    return out;
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (auto item : split(text, ',')) out.push_back(parse_real(item, text));
    return out;
}

BaseMap base_map_from_config(const RunConfig& cfg) {
    const auto spec = trim(cfg.get("base"));
    try {
        if (spec.substr(0, 3) == "exp") {
            const auto eq = spec.find("a=");
            if (eq == std::string_view::npos) throw UsageError("key 'base': expected 'exp a=<complex>'");
            return BaseMap(ScaledExponential{parse_complex(spec.substr(eq + 2))});
        }
        return BaseMap(Polynomial(parse_complex_list(spec)));
    } catch (const UsageError& e) {
        throw UsageError(fmt::format("key 'base': {}", e.what()));
    } catch (const DomainError& e) {
        throw UsageError(fmt::format("key 'base': {}", e.what()));
    }
}

Complex fixed_point_from_config(const RunConfig& cfg, const BaseMap& base) {
    const auto sel = trim(cfg.get("fixed_point"));
    if (!base.is_polynomial()) {
        const Complex a = base.exponential().a;
        if (sel == "auto") {
            if (std::abs(std::exp(a) - 1.0) > 1e-12) throw UsageError("key 'fixed_point': required for this base map");
            return a;
        }
        return parse_complex(sel);
    }
    const auto fps = fixed_points(base.polynomial());
    if (sel == "auto") {
        const FixedPointInfo* best = nullptr;
        for (const auto& fp : fps)
            if (fp.kind == FixedPointKind::repelling && (!best || std::abs(fp.multiplier) > std::abs(best->multiplier)))
                best = &fp;
        if (!best) throw UsageError("key 'fixed_point': the polynomial has no repelling fixed point");
        return best->point;
    }
    if (sel.substr(0, 6) == "index:") {
        const auto idx = static_cast<std::size_t>(parse_real(sel.substr(6), sel));
        if (idx >= fps.size()) throw UsageError(fmt::format("key 'fixed_point': index {} out of range", idx));
        return fps[idx].point;
    }
    const Complex want = parse_complex(sel);
    const FixedPointInfo* best = &fps.front();
    for (const auto& fp : fps)
        if (std::abs(fp.point - want) < std::abs(best->point - want)) best = &fp;
    return best->point;
}

}  // namespace poincare
