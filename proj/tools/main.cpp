// kamlab: numerical laboratory for partially integrable Hamiltonian systems
// in partial action-angle coordinates.  One subcommand per construction:
// validate, flow, reduce, freqmap, scan, diophantine.

#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kamlab/analysis.hpp"
#include "kamlab/config.hpp"
#include "kamlab/integrate.hpp"
#include "kamlab/io.hpp"
#include "kamlab/reduction.hpp"

namespace {

using namespace kamlab;

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty number in list '" + s + "'");
    out.push_back(std::stod(item));
  }
  return out;
}

// "I_1,..,I_k;z_1,..,z_m;phi_1,..,phi_k"
PhasePoint parse_ic(const std::string& s, const ChartSpec& chart) {
  std::vector<std::string> groups;
  std::string cur;
  for (char c : s) {
    if (c == ';') {
      groups.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  groups.push_back(cur);
  if (groups.size() != 3)
    throw std::invalid_argument("--ic must have three ';'-separated groups I;z;phi");
  PhasePoint x;
  x.I = parse_doubles(groups[0]);
  x.z = parse_doubles(groups[1]);
  x.phi = parse_doubles(groups[2]);
  if (static_cast<int>(x.I.size()) != chart.k ||
      static_cast<int>(x.z.size()) != chart.zdim() ||
      static_cast<int>(x.phi.size()) != chart.k)
    throw std::invalid_argument("--ic group lengths do not match the chart");
  for (auto& p : x.phi) p = wrap_angle(p);
  return x;
}

std::vector<int> parse_grid_counts(const std::string& s, int k) {
  std::vector<int> counts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, 'x')) counts.push_back(std::stoi(item));
  if (static_cast<int>(counts.size()) != k)
    throw std::invalid_argument("--grid must give " + std::to_string(k) + " counts like 50x50");
  return counts;
}

GridSpec default_grid(const SystemConfig& cfg, const std::vector<int>& counts,
                      const std::string& phi0_str, const std::string& z0_str) {
  GridSpec grid;
  grid.I_range = cfg.chart.V_box;
  grid.counts = counts;
  grid.phi0 = phi0_str.empty() ? std::vector<double>(cfg.chart.k, 0.0) : parse_doubles(phi0_str);
  if (z0_str.empty()) {
    grid.z0.resize(cfg.chart.zdim());
    for (int mu = 0; mu < cfg.chart.zdim(); ++mu)
      grid.z0[mu] = 0.5 * (cfg.chart.W_box[mu].lo + cfg.chart.W_box[mu].hi);
  } else {
    grid.z0 = parse_doubles(z0_str);
  }
  if (static_cast<int>(grid.phi0.size()) != cfg.chart.k ||
      static_cast<int>(grid.z0.size()) != cfg.chart.zdim())
    throw std::invalid_argument("--phi0 / --z0 lengths do not match the chart");
  for (auto& p : grid.phi0) p = wrap_angle(p);
  return grid;
}

int cmd_validate(const std::string& cfg_path, int samples, long seed_override) {
  const SystemConfig cfg = parse_config(cfg_path);
  const std::uint64_t seed = seed_override >= 0 ? seed_override : cfg.seed;
  const FormValidationReport rep = validate_form(cfg.form, samples, seed);
  std::cout << "chart: k=" << cfg.chart.k << " n=" << cfg.chart.n
            << " dim=" << cfg.chart.dim() << "\n";
  std::cout << "closed:        " << (rep.closed ? "yes" : "NO")
            << "  (worst cyclic residual " << format_double(rep.worst_closedness_residual)
            << ")\n";
  std::cout << "nondegenerate: " << (rep.nondegenerate ? "yes" : "NO") << "  (min |det M| "
            << format_double(rep.min_abs_det) << ")\n";
  return rep.closed && rep.nondegenerate ? 0 : 1;
}

int cmd_flow(const std::string& cfg_path, const std::string& structure, const std::string& ic,
             const std::string& out) {
  const SystemConfig cfg = parse_config(cfg_path);
  const PhasePoint x0 = parse_ic(ic, cfg.chart);
  Trajectory traj;
  if (structure == "w") {
    traj = integrate_w(cfg.hamiltonian, x0, cfg.integrator);
  } else if (structure == "omega") {
    IntegratorConfig ic2 = cfg.integrator;
    ic2.method = Method::midpoint;
    traj = integrate_omega(cfg.hamiltonian, cfg.form, x0, ic2);
  } else {
    throw std::invalid_argument("--structure must be 'w' or 'omega'");
  }
  std::ostringstream os;
  write_trajectory_csv(traj, os);
  atomic_write(out, os.str());
  std::cout << "wrote " << traj.size() << " records to " << out << "\n";
  return 0;
}

int cmd_reduce(const std::string& cfg_path, const std::string& section_str,
               const std::string& out) {
  const SystemConfig cfg = parse_config(cfg_path);
  Section section{parse_doubles(section_str)};
  const nlohmann::json doc = reduced_config_json(cfg, section);
  atomic_write(out, doc.dump(2) + "\n");
  std::cout << "wrote reduced system config to " << out << "\n";
  return 0;
}

int cmd_freqmap(const std::string& cfg_path, const std::string& grid_str,
                const std::string& phi0, const std::string& z0, const std::string& out,
                int jobs) {
  const SystemConfig cfg = parse_config(cfg_path);
  const GridSpec grid = default_grid(cfg, parse_grid_counts(grid_str, cfg.chart.k), phi0, z0);
  const auto records = classify_grid(cfg.hamiltonian, cfg.chart, grid, cfg.analysis.T_total,
                                     cfg.integrator, cfg.analysis.tolerances, jobs);
  std::ostringstream os;
  const int k = cfg.chart.k;
  for (int i = 1; i <= k; ++i) os << (i > 1 ? "," : "") << "I_" << i;
  for (int i = 1; i <= k; ++i) os << ",phi_" << i;
  for (int i = 1; i <= k; ++i) os << ",omega_" << i;
  os << ",diffusion,verdict\n";
  for (const auto& r : records) {
    for (int i = 0; i < k; ++i) os << (i ? "," : "") << format_double(r.I0[i]);
    for (int i = 0; i < k; ++i) os << "," << format_double(r.phi0[i]);
    for (int i = 0; i < k; ++i) os << "," << format_double(r.omega.omega[i]);
    os << "," << format_double(r.diffusion) << "," << to_string(r.verdict) << "\n";
  }
  atomic_write(out, os.str());
  std::cout << "classified " << records.size() << " orbits -> " << out << "\n";
  return 0;
}

int cmd_scan(const std::string& cfg_path, const std::string& eps_str,
             const std::string& grid_str, const std::string& phi0, const std::string& z0,
             const std::string& out, int jobs) {
  const SystemConfig cfg = parse_config(cfg_path);
  const std::vector<double> eps_list = parse_doubles(eps_str);
  if (eps_list.empty()) throw std::invalid_argument("--eps list is empty");
  const GridSpec grid = default_grid(cfg, parse_grid_counts(grid_str, cfg.chart.k), phi0, z0);

  nlohmann::json results = nlohmann::json::array();
  std::ostringstream trend;
  trend << "eps,fraction_non_torus\n";
  for (double eps : eps_list) {
    const MeasureScanResult r =
        scan_measure(cfg.hamiltonian, cfg.chart, eps, grid, cfg.analysis.T_total,
                     cfg.integrator, cfg.analysis.tolerances, jobs);
    nlohmann::json e;
    e["epsilon"] = r.epsilon;
    e["grid_size"] = r.grid_size;
    e["fraction_torus"] = r.fraction_torus;
    e["fraction_resonant"] = r.fraction_resonant;
    e["fraction_non_torus"] = r.fraction_non_torus;
    results.push_back(std::move(e));
    trend << format_double(eps) << "," << format_double(r.fraction_non_torus) << "\n";
    std::cout << "eps=" << eps << " torus=" << r.fraction_torus
              << " resonant=" << r.fraction_resonant << " non_torus=" << r.fraction_non_torus
              << "\n";
  }
  atomic_write(out, results.dump(2) + "\n");
  atomic_write(out + ".trend.csv", trend.str());
  std::cout << "wrote " << out << " and " << out << ".trend.csv\n";
  return 0;
}

int cmd_diophantine(const std::string& cfg_path, const std::string& omega_str, double gamma,
                    double tau, int kmax) {
  const SystemConfig cfg = parse_config(cfg_path);
  FrequencyVector omega{parse_doubles(omega_str)};
  DiophantineParams params = cfg.analysis.diophantine;
  if (gamma > 0.0) params.gamma = gamma;
  if (tau > 0.0) params.tau = tau;
  if (kmax > 0) params.K_max = kmax;
  const DiophantineResult res = diophantine_check(omega, params);
  std::cout << (res.pass ? "PASS" : "FAIL") << "  min |<m,omega>| |m|_1^tau = "
            << format_double(res.worst_value) << " at m = (";
  for (std::size_t i = 0; i < res.worst_m.size(); ++i)
    std::cout << (i ? "," : "") << res.worst_m[i];
  std::cout << ")  [gamma=" << params.gamma << " tau=" << params.tau
            << " K_max=" << params.K_max << "]\n";
  return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical engine for partially integrable Hamiltonian systems"};
  app.require_subcommand(1);

  std::string cfg_path, ic, out, structure = "w", section_str, grid_str = "50x50";
  std::string eps_str, omega_str, phi0_str, z0_str;
  int samples = 200;
  long seed_override = -1;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  double gamma = -1.0, tau = -1.0;
  int kmax = -1;

  auto* v = app.add_subcommand("validate", "check closedness and nondegeneracy of the form");
  v->add_option("config", cfg_path)->required();
  v->add_option("--samples", samples, "sample points");
  v->add_option("--seed", seed_override, "override the config seed");

  auto* f = app.add_subcommand("flow", "integrate one orbit and export CSV");
  f->add_option("config", cfg_path)->required();
  f->add_option("--structure", structure, "w or omega");
  f->add_option("--ic", ic, "initial condition 'I;z;phi'")->required();
  f->add_option("--out", out)->required();

  auto* r = app.add_subcommand("reduce", "emit the reduced system on a constant-z section");
  r->add_option("config", cfg_path)->required();
  r->add_option("--section", section_str, "z values, comma separated")->required();
  r->add_option("--out", out)->required();

  auto* fm = app.add_subcommand("freqmap", "frequency map over an action grid");
  fm->add_option("config", cfg_path)->required();
  fm->add_option("--grid", grid_str, "counts per action, e.g. 50x50");
  fm->add_option("--phi0", phi0_str, "fixed initial angles");
  fm->add_option("--z0", z0_str, "fixed transverse coordinates");
  fm->add_option("--out", out)->required();
  fm->add_option("--jobs", jobs, "worker threads");

  auto* sc = app.add_subcommand("scan", "surviving-torus measure over an epsilon sweep");
  sc->add_option("config", cfg_path)->required();
  sc->add_option("--eps", eps_str, "epsilon values, comma separated")->required();
  sc->add_option("--grid", grid_str, "counts per action, e.g. 50x50");
  sc->add_option("--phi0", phi0_str, "fixed initial angles");
  sc->add_option("--z0", z0_str, "fixed transverse coordinates");
  sc->add_option("--out", out)->required();
  sc->add_option("--jobs", jobs, "worker threads");

  auto* di = app.add_subcommand("diophantine", "check a frequency vector");
  di->add_option("config", cfg_path)->required();
  di->add_option("--omega", omega_str, "frequencies, comma separated")->required();
  di->add_option("--gamma", gamma);
  di->add_option("--tau", tau);
  di->add_option("--kmax", kmax);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*v) return cmd_validate(cfg_path, samples, seed_override);
    if (*f) return cmd_flow(cfg_path, structure, ic, out);
    if (*r) return cmd_reduce(cfg_path, section_str, out);
    if (*fm) return cmd_freqmap(cfg_path, grid_str, phi0_str, z0_str, out, jobs);
    if (*sc) return cmd_scan(cfg_path, eps_str, grid_str, phi0_str, z0_str, out, jobs);
    if (*di) return cmd_diophantine(cfg_path, omega_str, gamma, tau, kmax);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
