#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "kamlab/analysis.hpp"
#include "kamlab/chart.hpp"
#include "kamlab/dynamics.hpp"
#include "kamlab/integrate.hpp"
#include "kamlab/symplectic_form.hpp"

namespace kamlab {

struct AnalysisConfig {
  double T_total = 2000.0;
  ClassificationTolerances tolerances;
  DiophantineParams diophantine;
};

/// Fully validated in-memory system description; see the JSON schema in the
/// repository README.
struct SystemConfig {
  ChartSpec chart;
  SymplecticFormSpec form;
  HamiltonianSpec hamiltonian;
  IntegratorConfig integrator;
  AnalysisConfig analysis;
  std::uint64_t seed = 0;
};

/// Thrown on schema violations; the message names the offending JSON path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SystemConfig parse_config(const std::filesystem::path& path);
SystemConfig parse_config_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const SystemConfig& cfg);

/// Standalone config for the system reduced along the section, in the same
/// schema (classical chart k = n, canonical form).
nlohmann::json reduced_config_json(const SystemConfig& cfg, const Section& section);

}  // namespace kamlab
