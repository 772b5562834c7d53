#pragma once

#include <exception>
#include <filesystem>
#include <ostream>
#include <string>

#include "fracneumann/diagnostics.hpp"
#include "fracneumann/extension.hpp"
#include "fracneumann/io.hpp"
#include "fracneumann/run_config.hpp"
#include "fracneumann/solver.hpp"

namespace fracneumann {

// Exit codes shared by the CLI subcommands.
inline constexpr int exit_ok = 0;
inline constexpr int exit_runtime = 1;
inline constexpr int exit_config = 2;

namespace detail {

inline BasisPtr basis_from_config(const RunConfig& cfg) {
  const ModelDomain dom = parse_domain(cfg.domain_spec);
  const int grid = cfg.grid_size > 0 ? cfg.grid_size : 2 * cfg.num_modes;
  return build_basis(dom, cfg.num_modes, grid);
}

inline SolverConfig solver_from_config(const RunConfig& cfg) {
  SolverConfig sc;
  sc.tol = cfg.tol;
  sc.seed = cfg.seed;
  return sc;
}

template <typename Fn>
int run_command(std::ostream& err, Fn&& body) {
  try {
    body();
    return exit_ok;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_runtime;
  }
}

}  // namespace detail

// Solve one instance and write solution.json + solution.csv under out_dir.
inline int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::run_command(err, [&] {
    const BasisPtr basis = detail::basis_from_config(cfg);
    SemilinearProblem prob(basis, FracParams{cfg.eps, cfg.s}, cfg.p);
    const SolutionReport rep = solve_mountain_pass(prob, detail::solver_from_config(cfg));

    nlohmann::json j = json_header(cfg);
    j["report"] = report_to_json(rep);
    j["solution"] = {{"num_modes", basis->size()}, {"coeffs", rep.solution.coeffs}};
    const std::string json_text = j.dump(2) + "\n";
    const std::string csv_text = render_csv(grid_to_csv(synthesize(rep.solution), cfg));

    const std::filesystem::path dir(cfg.out_dir);
    write_file(dir / "solution.json", json_text);
    write_file(dir / "solution.csv", csv_text);
    out << "solve: converged=" << (rep.converged ? 1 : 0) << " class=" << to_string(rep.classification)
        << " energy=" << fmt_double(rep.energy_value) << " residual=" << fmt_double(rep.residual)
        << " out=" << (dir / "solution.json").string() << "\n";
    if (!rep.converged) throw std::runtime_error("cmd_solve: solver did not reach tolerance");
  });
}

// Sweep eps and write sweep.csv + sweep_summary.json under out_dir.
inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::run_command(err, [&] {
    SweepConfig sw;
    sw.domain = parse_domain(cfg.domain_spec);
    sw.num_modes = cfg.num_modes;
    sw.grid_size = cfg.grid_size;
    sw.s = cfg.s;
    sw.p = cfg.p;
    sw.eps_list = make_eps_list(cfg.eps_min, cfg.eps_max, cfg.eps_count);
    sw.eta_rel = cfg.eta_rel;
    sw.fine_grid = cfg.fine_grid;
    sw.threads = cfg.threads;
    sw.solver = detail::solver_from_config(cfg);
    const SweepResult res = run_sweep(sw);

    nlohmann::json j = json_header(cfg);
    j["eta"] = res.eta;
    j["measurement_grid"] = res.fine_grid;
    int converged = 0, nonconstant = 0;
    for (const SweepRow& r : res.rows) {
      converged += r.converged ? 1 : 0;
      nonconstant += r.classification == Classification::nonconstant ? 1 : 0;
    }
    j["rows"] = res.rows.size();
    j["converged_rows"] = converged;
    j["nonconstant_rows"] = nonconstant;
    try {
      const ScalingFit fit = fit_scaling(res.rows);
      j["scaling"] = {{"energy_slope", fit.energy_slope},
                      {"l1_slope", fit.l1_slope},
                      {"l2sq_slope", fit.l2sq_slope},
                      {"nonlinear_slope", fit.nonlinear_slope},
                      {"rows_used", fit.rows_used}};
    } catch (const std::invalid_argument&) {
      j["scaling"] = nullptr;
    }
    try {
      j["sup_ratio"] = sup_ratio(res.rows);
    } catch (const std::invalid_argument&) {
      j["sup_ratio"] = nullptr;
    }
    const std::string json_text = j.dump(2) + "\n";
    const std::string csv_text = render_csv(sweep_to_csv(res, cfg));

    const std::filesystem::path dir(cfg.out_dir);
    write_file(dir / "sweep.csv", csv_text);
    write_file(dir / "sweep_summary.json", json_text);
    out << "sweep: rows=" << res.rows.size() << " converged=" << converged
        << " nonconstant=" << nonconstant << " out=" << (dir / "sweep.csv").string() << "\n";
    if (converged != int(res.rows.size())) throw std::runtime_error("cmd_sweep: not all rows converged");
  });
}

// Solve, lift into the half-space cylinder, and write extension.csv plus an
// energy summary under out_dir.
inline int cmd_extend(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::run_command(err, [&] {
    const BasisPtr basis = detail::basis_from_config(cfg);
    const FracParams P{cfg.eps, cfg.s};
    SemilinearProblem prob(basis, P, cfg.p);
    const SolutionReport rep = solve_mountain_pass(prob, detail::solver_from_config(cfg));
    if (!rep.converged) throw std::runtime_error("cmd_extend: solver did not reach tolerance");

    const std::vector<double> ygrid = default_extension_ygrid(*basis, P, cfg.y_nodes);
    const ExtensionField U = extend(rep.solution, P, ygrid);
    const double energy_cyl = cylinder_energy(U, P);
    const double tail = extension_tail_fraction(*basis, P, ygrid.back());
    const SpectralField flux = dtn_map(rep.solution, P);

    CsvTable t;
    for (const auto& [k, v] : config_echo(cfg)) t.comments.emplace_back(k, v);
    const bool planar = basis->domain().kind == ModelDomain::Kind::rectangle;
    t.header = planar ? std::vector<std::string>{"x", "y", "t", "value"}
                      : std::vector<std::string>{"x", "t", "value"};
    const int nodes = basis->node_count();
    for (std::size_t jy = 0; jy < ygrid.size(); ++jy) {
      for (int i = 0; i < nodes; ++i) {
        std::vector<std::string> row;
        row.push_back(fmt_double(basis->node_x(i)));
        if (planar) row.push_back(fmt_double(basis->node_y(i)));
        row.push_back(fmt_double(ygrid[jy]));
        row.push_back(fmt_double(U.values[jy * std::size_t(nodes) + std::size_t(i)]));
        t.rows.push_back(std::move(row));
      }
    }
    nlohmann::json j = json_header(cfg);
    j["report"] = report_to_json(rep);
    j["cylinder_energy"] = energy_cyl;
    j["tail_fraction"] = tail;
    j["flux_l2"] = l2_norm_coeffs(flux);
    j["cs"] = cs_constant(cfg.s);
    j["Cs"] = trace_constant_Cs(cfg.s);
    j["y_max"] = ygrid.back();
    const std::string json_text = j.dump(2) + "\n";
    const std::string csv_text = render_csv(t);

    const std::filesystem::path dir(cfg.out_dir);
    write_file(dir / "extension.csv", csv_text);
    write_file(dir / "extend_summary.json", json_text);
    out << "extend: cylinder_energy=" << fmt_double(energy_cyl) << " tail_fraction=" << fmt_double(tail)
        << " out=" << (dir / "extension.csv").string() << "\n";
  });
}

}  // namespace fracneumann
