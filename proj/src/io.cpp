#include "coulomb/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coulomb::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  write_text(path, out.str());
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
  return nlohmann::json::parse(read_text(path));
}

void save_configuration_csv(const std::string& path, const Configuration& cfg) {
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(cfg.rows()));
  for (Eigen::Index i = 0; i < cfg.rows(); ++i)
    rows.push_back({cfg(i, 0), cfg(i, 1)});
  write_csv(path, {"x", "y"}, rows);
}

Configuration load_configuration_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw Error("empty configuration file: " + path);
  std::vector<Vec2> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error("bad configuration row: " + line);
    pts.emplace_back(std::stod(line.substr(0, comma)),
                     std::stod(line.substr(comma + 1)));
  }
  Configuration cfg(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    cfg.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return cfg;
}

nlohmann::json configuration_to_json(const Configuration& cfg) {
  nlohmann::json pts = nlohmann::json::array();
  for (Eigen::Index i = 0; i < cfg.rows(); ++i)
    pts.push_back({cfg(i, 0), cfg(i, 1)});
  return pts;
}

Configuration configuration_from_json(const nlohmann::json& j) {
  Configuration cfg(static_cast<Eigen::Index>(j.size()), 2);
  Eigen::Index i = 0;
  for (const auto& p : j) {
    cfg(i, 0) = p.at(0).get<double>();
    cfg(i, 1) = p.at(1).get<double>();
    ++i;
  }
  return cfg;
}

nlohmann::json energy_report_to_json(const EnergyReport& rep) {
  return nlohmann::json{{"w_n", rep.w_n},
                        {"F_n_splitting", rep.F_n_splitting},
                        {"F_n_direct", rep.F_n_direct},
                        {"F_hat_n", rep.F_hat_n},
                        {"zeta_sum", rep.zeta_sum},
                        {"residual", rep.residual}};
}

namespace {
nlohmann::json rect_to_json(const Rect& w) {
  return {{"lo", {w.lo.x(), w.lo.y()}}, {"hi", {w.hi.x(), w.hi.y()}}};
}
}  // namespace

nlohmann::json moment_record(const Rect& window, double R, double grid_step,
                             Eigen::Index n_points, double value) {
  return nlohmann::json{{"window", rect_to_json(window)},
                        {"R", R},
                        {"grid_step", grid_step},
                        {"n", n_points},
                        {"moment", value}};
}

nlohmann::json field_norm_record(const Rect& window, double q,
                                 double grid_step, double exclusion,
                                 Eigen::Index n_points, double value) {
  return nlohmann::json{{"window", rect_to_json(window)},
                        {"q", q},
                        {"grid_step", grid_step},
                        {"exclusion", exclusion},
                        {"n", n_points},
                        {"norm", value}};
}

void write_grid_binary(const std::string& path, const Eigen::ArrayXXd& a) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  const std::uint32_t dims[2] = {static_cast<std::uint32_t>(a.rows()),
                                 static_cast<std::uint32_t>(a.cols())};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      f.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
}

Eigen::ArrayXXd read_grid_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open: " + path);
  std::uint32_t dims[2];
  f.read(reinterpret_cast<char*>(dims), sizeof(dims));
  Eigen::ArrayXXd a(dims[0], dims[1]);
  for (std::uint32_t i = 0; i < dims[0]; ++i)
    for (std::uint32_t j = 0; j < dims[1]; ++j) {
      double v;
      f.read(reinterpret_cast<char*>(&v), sizeof(v));
      a(i, j) = v;
    }
  if (!f) throw Error("truncated grid file: " + path);
  return a;
}

void save_equilibrium(const EquilibriumMeasure& em, const std::string& json_path) {
  nlohmann::json j;
  j["c"] = em.c();
  j["I0"] = em.I0();
  j["L0"] = em.L0();
  if (em.radial()) {
    j["kind"] = "radial";
    j["R_star"] = em.support_radius();
  } else {
    j["kind"] = "grid";
    j["R_star_area"] = em.support_radius();
    j["origin"] = {em.grid_origin().x(), em.grid_origin().y()};
    j["spacing"] = em.grid_spacing();
    const std::string base =
        json_path.substr(0, json_path.find_last_of('.'));
    j["u_grid"] = base + ".u.bin";
    j["m0_grid"] = base + ".m0.bin";
    write_grid_binary(base + ".u.bin", em.grid_u());
    write_grid_binary(base + ".m0.bin", em.grid_density());
  }
  write_json(json_path, j);
}

std::string config_hash(const nlohmann::json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace coulomb::io
