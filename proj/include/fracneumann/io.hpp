#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracneumann/basis.hpp"
#include "fracneumann/diagnostics.hpp"
#include "fracneumann/run_config.hpp"
#include "fracneumann/solver.hpp"
#include "fracneumann/version.hpp"

namespace fracneumann {

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> comments;  // "# key = value" lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string render_csv(const CsvTable& t) {
  std::string out;
  out += "# schema = " + std::to_string(artifact_schema) + "\n";
  out += std::string("# version = ") + artifact_version + "\n";
  for (const auto& [k, v] : t.comments) out += "# " + k + " = " + v + "\n";
  for (std::size_t c = 0; c < t.header.size(); ++c) out += (c ? "," : "") + t.header[c];
  out += "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw std::invalid_argument("render_csv: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
    out += "\n";
  }
  return out;
}

// Full-content write through a temp file; partial artifacts never land on disk.
inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_file: cannot open " + tmp.string());
    f.write(content.data(), std::streamsize(content.size()));
    if (!f) throw std::runtime_error("write_file: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_file: cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

inline nlohmann::json json_header(const RunConfig& cfg) {
  nlohmann::json j;
  j["schema"] = artifact_schema;
  j["version"] = artifact_version;
  nlohmann::json c;
  for (const auto& [k, v] : config_echo(cfg)) c[k] = v;
  j["config"] = c;
  return j;
}

inline nlohmann::json report_to_json(const SolutionReport& rep) {
  nlohmann::json j;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations;
  j["residual"] = rep.residual;
  j["energy"] = rep.energy_value;
  j["classification"] = to_string(rep.classification);
  j["positive"] = rep.positive;
  j["l1"] = rep.l1;
  j["l2"] = rep.l2;
  j["lp1"] = rep.lp1;
  j["linf"] = rep.linf;
  j["hessian_fallbacks"] = rep.hessian_fallbacks;
  j["start"] = rep.start_label;
  j["residual_history"] = rep.residual_history;
  return j;
}

inline CsvTable grid_to_csv(const GridField& g, const RunConfig& cfg) {
  CsvTable t;
  for (const auto& [k, v] : config_echo(cfg)) t.comments.emplace_back(k, v);
  const BasisSpec& b = *g.basis;
  const bool planar = b.domain().kind == ModelDomain::Kind::rectangle;
  t.header = planar ? std::vector<std::string>{"x", "y", "u"} : std::vector<std::string>{"x", "u"};
  t.rows.reserve(std::size_t(b.node_count()));
  for (int i = 0; i < b.node_count(); ++i) {
    std::vector<std::string> row;
    row.push_back(fmt_double(b.node_x(i)));
    if (planar) row.push_back(fmt_double(b.node_y(i)));
    row.push_back(fmt_double(g.values[std::size_t(i)]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline CsvTable sweep_to_csv(const SweepResult& res, const RunConfig& cfg) {
  CsvTable t;
  for (const auto& [k, v] : config_echo(cfg)) t.comments.emplace_back(k, v);
  t.comments.emplace_back("eta", fmt_double(res.eta));
  t.comments.emplace_back("measurement_grid", std::to_string(res.fine_grid));
  t.header = {"eps",     "s",       "p",          "converged",  "classification", "positive",
              "energy",  "l1",      "l2",         "lp1",        "linf",           "cube_count",
              "harnack", "residual", "iterations", "cluster_diameter", "mean_gap", "start"};
  for (const SweepRow& r : res.rows) {
    t.rows.push_back({fmt_double(r.eps), fmt_double(r.s), fmt_double(r.p),
                      r.converged ? "1" : "0", to_string(r.classification), r.positive ? "1" : "0",
                      fmt_double(r.energy), fmt_double(r.l1), fmt_double(r.l2), fmt_double(r.lp1),
                      fmt_double(r.linf), std::to_string(r.cube_count), fmt_double(r.harnack),
                      fmt_double(r.residual), std::to_string(r.iterations),
                      fmt_double(r.cluster_diameter), fmt_double(r.mean_gap), r.start_label});
  }
  return t;
}

}  // namespace fracneumann
