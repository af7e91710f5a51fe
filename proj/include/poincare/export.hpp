#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "poincare/dynamics.hpp"
#include "poincare/ifs.hpp"
#include "poincare/lineariser.hpp"
#include "poincare/vanishing.hpp"

namespace poincare {

using Json = nlohmann::ordered_json;

/// Writes text verbatim; throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);

/// depth,re,im,cum_deriv_re,cum_deriv_im
std::string tree_csv(const PreimageTree& tree);
/// t,n,logZ
std::string pressure_csv(const std::vector<PressureEstimate>& curves);
/// n,z_re,z_im,zeta_re,zeta_im,deriv_re,deriv_im,critical
std::string level_sets_csv(const std::vector<LevelSet>& levels);
/// t,w_modulus,value,level_slope,verdict
std::string theta_csv(const ThetaEstimate& est);
/// branch,m,norm_sup,center_re,center_im,image_radius
std::string ifs_csv(const FiniteIFS& s);
/// quantity,t,p,value
std::string bowen_csv(const BowenResult& b);

Json to_json(Complex z);
Json to_json(const BaseMap& base);
Json to_json(const Lineariser& L);
Json to_json(const PressureEstimate& e);
Json to_json(const ThetaEstimate& e);
Json to_json(const FiniteIFS& s);
Json to_json(const BowenResult& b);

Complex complex_from_json(const Json& j);
BaseMap base_map_from_json(const Json& j);
/// Rebuilds a lineariser from its stored coefficients without recomputing them.
Lineariser lineariser_from_json(const Json& j);

}  // namespace poincare
