#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "ntt/runner.hpp"

namespace {

void dump_matrices(ntt::TowingTank& tank, const std::string& dir) {
  const auto& d = tank.dofs();
  const int n = d.n_dofs;
  const ntt::BemGeometry g =
      ntt::bem_geometry(d, tank.state().tail(n));
  std::vector<int> rows(n), cells(d.mesh->n_cells());
  for (int i = 0; i < n; ++i) rows[i] = i;
  for (int c = 0; c < d.mesh->n_cells(); ++c) cells[c] = c;
  ntt::Mat N = ntt::Mat::Zero(n, n), D = ntt::Mat::Zero(n, n);
  ntt::assemble_influence(d, g, rows, cells, 1.0, N, D);
  for (const auto& [name, M] : {std::pair<const char*, const ntt::Mat&>{"N", N},
                                {"D", D}}) {
    std::ofstream out(dir + "/matrix_" + name + ".txt");
    out.precision(12);
    out << M << "\n";
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical towing tank"};
  std::string scenario_path, mode_override, output_dir;
  int cycles = -1, threads = 1;
  double dt = -1, t_end = -1;
  bool dump = false;
  app.add_option("--scenario", scenario_path, "scenario file (key = value)");
  app.add_option("--mode", mode_override, "steady | unsteady | ramped");
  app.add_option("--cycles", cycles, "refinement cycles (steady mode)");
  app.add_option("--dt", dt, "initial time step");
  app.add_option("--t-end", t_end, "end time for transients");
  app.add_option("--output-dir", output_dir, "output directory");
  app.add_option("--threads", threads, "reserved; runs are single-threaded");
  app.add_flag("--dump-matrices", dump, "write influence matrices as text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ntt::Scenario sc;
  try {
    if (!scenario_path.empty()) sc = ntt::parse_scenario_file(scenario_path);
    if (!mode_override.empty()) {
      if (mode_override == "steady") sc.mode = ntt::RunMode::Steady;
      else if (mode_override == "unsteady") sc.mode = ntt::RunMode::Unsteady;
      else if (mode_override == "ramped") sc.mode = ntt::RunMode::Ramped;
      else throw ntt::ScenarioError("unknown mode " + mode_override);
    }
    if (cycles >= 0) sc.cycles = cycles;
    if (dt > 0) sc.dt = dt;
    if (t_end > 0) sc.t_end = t_end;
    if (!output_dir.empty()) sc.output_dir = output_dir;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return 3;
  }

  try {
    std::filesystem::create_directories(sc.output_dir);
    ntt::TowingTank tank(sc);
    std::printf("mesh: %d nodes, %d cells, %d dofs\n", tank.mesh().n_nodes(),
                tank.mesh().n_cells(), tank.dofs().n_dofs);
    if (dump) dump_matrices(tank, sc.output_dir);
    if (sc.mode == ntt::RunMode::Steady) {
      const auto rows = tank.steady_cycles(sc.cycles, stdout);
      ntt::write_cycles_csv(sc.output_dir + "/cycles.csv", rows);
    } else {
      const auto samples = tank.transient(stdout);
      ntt::write_history_csv(sc.output_dir + "/history.csv", samples);
    }
    tank.write_vtk_snapshot(sc.output_dir + "/final.vtk");
  } catch (const ntt::ScenarioError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 4;
  }
  return 0;
}
