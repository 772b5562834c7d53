#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracneumann/domain.hpp"

namespace fracneumann {

// Shortest round-trip text for a double.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

// "interval:L" or "rectangle:LXxLY", e.g. "interval:1" / "rectangle:2x0.5".
inline ModelDomain parse_domain(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string dims = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "interval") {
      std::size_t used = 0;
      const double lx = std::stod(dims, &used);
      if (used != dims.size()) throw std::invalid_argument(spec);
      return ModelDomain::interval(lx);
    }
    if (kind == "rectangle") {
      const auto cross = dims.find('x');
      if (cross == std::string::npos) throw std::invalid_argument(spec);
      std::size_t ux = 0, uy = 0;
      const std::string sx = dims.substr(0, cross), sy = dims.substr(cross + 1);
      const double lx = std::stod(sx, &ux);
      const double ly = std::stod(sy, &uy);
      if (ux != sx.size() || uy != sy.size()) throw std::invalid_argument(spec);
      return ModelDomain::rectangle(lx, ly);
    }
  } catch (const std::invalid_argument&) {
    // fall through to the uniform message
  } catch (const std::out_of_range&) {
  }
  throw std::invalid_argument("parse_domain: expected \"interval:L\" or \"rectangle:LxW\", got \"" + spec + "\"");
}

inline std::string format_domain(const ModelDomain& dom) {
  if (dom.kind == ModelDomain::Kind::interval) return "interval:" + fmt_double(dom.lx);
  return "rectangle:" + fmt_double(dom.lx) + "x" + fmt_double(dom.ly);
}

// Log-spaced ascending grid with exact endpoints.
inline std::vector<double> make_eps_list(double eps_min, double eps_max, int count) {
  if (!(eps_min > 0.0) || !(eps_max >= eps_min)) {
    throw std::invalid_argument("make_eps_list: need 0 < eps_min <= eps_max");
  }
  if (count < 1) throw std::invalid_argument("make_eps_list: count must be >= 1");
  if (count == 1) {
    if (eps_min != eps_max) throw std::invalid_argument("make_eps_list: count 1 needs eps_min == eps_max");
    return {eps_min};
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  const double lo = std::log(eps_min), hi = std::log(eps_max);
  for (int i = 0; i < count; ++i) out[std::size_t(i)] = std::exp(lo + (hi - lo) * i / (count - 1));
  out.front() = eps_min;
  out.back() = eps_max;
  return out;
}

// Everything a CLI run needs; defaults give a quick interval demo.
struct RunConfig {
  std::string domain_spec = "interval:1";
  int num_modes = 64;
  int grid_size = 0;     // 0: twice the mode count
  double s = 0.5;
  double p = 2.0;
  double eps = 1e-2;     // solve / extend
  double eps_min = 1e-4; // sweep
  double eps_max = 1e-2;
  int eps_count = 6;
  double eta_rel = 0.5;
  int fine_grid = 0;
  int y_nodes = 400;
  int threads = 1;
  std::uint64_t seed = 12345;
  double tol = 1e-10;
  std::string out_dir = "out";
};

// Sorted key = value view of the configuration, echoed into every artifact.
inline std::map<std::string, std::string> config_echo(const RunConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["domain"] = cfg.domain_spec;
  kv["num_modes"] = std::to_string(cfg.num_modes);
  kv["grid_size"] = std::to_string(cfg.grid_size);
  kv["s"] = fmt_double(cfg.s);
  kv["p"] = fmt_double(cfg.p);
  kv["eps"] = fmt_double(cfg.eps);
  kv["eps_min"] = fmt_double(cfg.eps_min);
  kv["eps_max"] = fmt_double(cfg.eps_max);
  kv["eps_count"] = std::to_string(cfg.eps_count);
  kv["eta_rel"] = fmt_double(cfg.eta_rel);
  kv["fine_grid"] = std::to_string(cfg.fine_grid);
  kv["y_nodes"] = std::to_string(cfg.y_nodes);
  kv["threads"] = std::to_string(cfg.threads);
  kv["seed"] = std::to_string(cfg.seed);
  kv["tol"] = fmt_double(cfg.tol);
  kv["out_dir"] = cfg.out_dir;
  return kv;
}

}  // namespace fracneumann
