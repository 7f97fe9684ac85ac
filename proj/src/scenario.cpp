#include "ntt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ntt {

double Scenario::resolved_speed() const {
  if (speed >= 0) return speed;
  if (froude >= 0) return froude * std::sqrt(gravity * length);
  return 0.0;
}

double Scenario::resolved_wavenumber() const {
  if (amplitude <= 0) return 0.0;
  return 2.0 * M_PI / wavelength;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string value;
  int line;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ScenarioError("line " + std::to_string(line) + ": " + msg);
}

double num(const std::pair<const std::string, Entry>& kv) {
  try {
    size_t pos;
    const double v = std::stod(kv.second.value, &pos);
    if (pos != kv.second.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(kv.second.line, "invalid number for '" + kv.first + "'");
  }
}

int integer(const std::pair<const std::string, Entry>& kv) {
  const double v = num(kv);
  if (v != std::floor(v)) fail(kv.second.line, "'" + kv.first + "' must be an integer");
  return static_cast<int>(v);
}

} // namespace

Scenario parse_scenario_text(const std::string& text) {
  std::map<std::string, Entry> kv;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  bool have_wavenumber = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
    const std::string key =
        (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail(lineno, "empty value for '" + key + "'");
    if (kv.count(key)) fail(lineno, "duplicate key '" + key + "'");
    kv[key] = {value, lineno};
  }

  Scenario sc;
  const auto take_num = [&](const char* key, double& dst) {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    dst = num(*it);
    kv.erase(it);
    return true;
  };
  const auto take_int = [&](const char* key, int& dst) {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    dst = integer(*it);
    kv.erase(it);
    return true;
  };

  take_num("hull.length", sc.length);
  take_num("hull.radius", sc.radius);
  take_num("hull.submergence", sc.submergence);

  const bool have_speed = take_num("flow.speed", sc.speed);
  const bool have_froude = take_num("flow.froude", sc.froude);
  take_num("flow.amplitude", sc.amplitude);
  const bool have_wavelength = take_num("flow.wavelength", sc.wavelength);
  {
    double k = 0;
    if (take_num("flow.wavenumber", k)) {
      have_wavenumber = true;
      if (k <= 0) throw ScenarioError("flow.wavenumber must be positive");
      sc.wavelength = 2.0 * M_PI / k;
    }
  }
  take_num("flow.depth", sc.depth);
  take_num("flow.gravity", sc.gravity);

  take_num("domain.width", sc.width);
  take_num("domain.upstream", sc.upstream);
  take_num("domain.downstream", sc.downstream);
  take_int("domain.nx", sc.nx);
  take_int("domain.ny", sc.ny);
  take_int("domain.nz", sc.nz);
  take_int("domain.curvature_cycles", sc.curvature_cycles);
  take_num("domain.curvature_angle", sc.curvature_angle);
  take_int("domain.fs_cycles", sc.fs_cycles);
  take_num("domain.fs_focus_radius", sc.fs_focus_radius);
  take_num("domain.max_aspect", sc.max_aspect);

  take_num("beach.x_d", sc.beach.x_d);
  take_num("beach.L_d", sc.beach.L_d);
  take_num("beach.gain", sc.beach.gain);

  take_num("solver.tol", sc.tol);
  take_num("solver.rho", sc.rho);
  take_num("solver.supg_c", sc.supg_c);
  take_num("solver.fd_eps", sc.fd_eps);
  take_num("solver.dt", sc.dt);
  take_num("solver.min_dt", sc.min_dt);
  take_num("solver.max_dt", sc.max_dt);
  take_int("solver.bdf_order", sc.bdf_order);

  take_num("refine.fraction", sc.fraction);
  take_int("refine.cycles", sc.cycles);

  if (auto it = kv.find("run.mode"); it != kv.end()) {
    const std::string& v = it->second.value;
    if (v == "steady") sc.mode = RunMode::Steady;
    else if (v == "unsteady") sc.mode = RunMode::Unsteady;
    else if (v == "ramped") sc.mode = RunMode::Ramped;
    else fail(it->second.line, "run.mode must be steady, unsteady, or ramped");
    kv.erase(it);
  }
  take_num("run.t_ramp", sc.t_ramp);
  take_num("run.t_end", sc.t_end);
  if (auto it = kv.find("run.output_dir"); it != kv.end()) {
    sc.output_dir = it->second.value;
    kv.erase(it);
  }
  take_int("run.output_every", sc.output_every);

  if (!kv.empty()) {
    const auto& first = *kv.begin();
    fail(first.second.line, "unknown key '" + first.first + "'");
  }

  if (have_speed && have_froude)
    throw ScenarioError("give either flow.speed or flow.froude, not both");
  if (sc.amplitude < 0) throw ScenarioError("flow.amplitude must be >= 0");
  if (have_wavelength && have_wavenumber)
    throw ScenarioError("give either flow.wavelength or flow.wavenumber");
  if (sc.amplitude > 0 && sc.wavelength <= 0)
    throw ScenarioError("a wavelength is required when flow.amplitude > 0");
  if (sc.mode != RunMode::Steady && sc.t_end <= 0)
    throw ScenarioError("run.t_end must be positive in unsteady modes");
  if (sc.submergence <= sc.radius)
    throw ScenarioError("hull.submergence must exceed hull.radius");
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

DomainParams domain_params(const Scenario& sc) {
  DomainParams p;
  p.hull_length = sc.length;
  p.hull_radius = sc.radius;
  p.submergence = sc.submergence;
  p.width = sc.width;
  p.depth = sc.depth;
  p.upstream = sc.upstream;
  p.downstream = sc.downstream;
  p.nx = sc.nx;
  p.ny = sc.ny;
  p.nz = sc.nz;
  p.hull_curvature_cycles = sc.curvature_cycles;
  p.curvature_angle = sc.curvature_angle;
  p.fs_cycles = sc.fs_cycles;
  p.fs_focus_radius = sc.fs_focus_radius;
  p.max_aspect = sc.max_aspect;
  return p;
}

AsymptoticFlow make_flow(const Scenario& sc, bool ramped) {
  AsymptoticFlow f;
  f.speed = sc.resolved_speed();
  f.amplitude = sc.amplitude;
  f.wavenumber = sc.resolved_wavenumber();
  f.depth = sc.depth;
  f.gravity = sc.gravity;
  f.ramp_time = ramped ? sc.t_ramp : 0.0;
  return f;
}

SystemParams system_params(const Scenario& sc, bool unsteady) {
  SystemParams p;
  p.fs.gravity = sc.gravity;
  p.fs.rho = sc.rho;
  p.fs.supg_c = sc.supg_c;
  p.fs.beach = sc.beach;
  p.unsteady = unsteady;
  p.fd_eps = sc.fd_eps;
  return p;
}

} // namespace ntt
