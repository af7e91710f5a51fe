#pragma once

#include <complex>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "poincare/base_map.hpp"

namespace poincare {

/// Flat key=value run configuration. Every key has a default; unknown keys
/// raise UsageError naming the key.
class RunConfig {
public:
    RunConfig();

    /// Known keys with their default values, in a fixed order.
    static const std::vector<std::pair<std::string, std::string>>& defaults();

    void set(std::string_view key, std::string value);
    /// Lines of key=value; blank lines and lines starting with '#' are skipped.
    void load_file(const std::filesystem::path& path);
    void load_text(std::string_view text, std::string_view origin = "config");

    const std::string& get(std::string_view key) const;
    double get_double(std::string_view key) const;
    int get_int(std::string_view key) const;
    long long get_long(std::string_view key) const;
    Complex get_complex(std::string_view key) const;
    std::vector<double> get_doubles(std::string_view key) const;
    std::vector<Complex> get_complexes(std::string_view key) const;

    const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

private:
    std::map<std::string, std::string, std::less<>> values_;
};

/// "3", "-0.5i", "2+2i", "1e-3-4.5i".
Complex parse_complex(std::string_view text);
std::vector<Complex> parse_complex_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

/// "base" holds ascending polynomial coefficients or "exp a=<complex>".
BaseMap base_map_from_config(const RunConfig& cfg);

/// "fixed_point": "auto" (repelling fixed point of largest multiplier for
/// polynomials; a itself for a e^z with e^a = 1), "index:<i>" into the fixed
/// points, or a complex value snapped to the nearest fixed point.
Complex fixed_point_from_config(const RunConfig& cfg, const BaseMap& base);

}  // namespace poincare
