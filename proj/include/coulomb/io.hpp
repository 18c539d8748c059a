#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coulomb/analysis.hpp"
#include "coulomb/core.hpp"
#include "coulomb/energy.hpp"
#include "coulomb/equilibrium.hpp"

namespace coulomb::io {

/// 17 significant digits; round-trips doubles exactly.
std::string format_double(double x);

/// Comma-separated, header row, LF endings, UTF-8.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

/// Configurations as CSV with columns x, y.
void save_configuration_csv(const std::string& path, const Configuration& cfg);
Configuration load_configuration_csv(const std::string& path);

nlohmann::json configuration_to_json(const Configuration& cfg);
Configuration configuration_from_json(const nlohmann::json& j);

nlohmann::json energy_report_to_json(const EnergyReport& rep);

/// Deviation-moment and field-norm results with their full parameter echo.
nlohmann::json moment_record(const Rect& window, double R, double grid_step,
                             Eigen::Index n_points, double value);
nlohmann::json field_norm_record(const Rect& window, double q,
                                 double grid_step, double exclusion,
                                 Eigen::Index n_points, double value);

/// Equilibrium measure: JSON document {kind, R_star or grid, c, I0, L0};
/// grid arrays go to sidecar binary files (header: two little-endian
/// uint32 dims, then row-major little-endian doubles).
void save_equilibrium(const EquilibriumMeasure& em, const std::string& json_path);

void write_grid_binary(const std::string& path, const Eigen::ArrayXXd& a);
Eigen::ArrayXXd read_grid_binary(const std::string& path);

/// FNV-1a of a canonical (sorted-key) JSON dump; used for deterministic
/// output file names.
std::string config_hash(const nlohmann::json& j);

}  // namespace coulomb::io
