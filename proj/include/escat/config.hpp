#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "escat/corner_probe.hpp"
#include "escat/fem.hpp"

namespace escat {

using Json = nlohmann::json;

struct ProbeSpec {
  std::string mode = "manufactured"; // or "solver"
  int corner_id = 0;
  std::vector<double> s_list; // empty = default {5,10,20,40}/(h delta_W)
  // manufactured fixture parameters
  double opening_rad = M_PI / 2;
  double h_length = 1.0;
  double q1 = 1.0;
  double delta_q = 0.0;
  double delta_eta = 0.0;
  ComplexVec2 apex_value{Complex(0.8, 0.0), Complex(0.3, 0.0)};
  double admissibility_tol = 0.5;
};

struct SceneConfig {
  Partition partition;
  std::vector<double> q_values;
  std::vector<double> eta_values;
  LameParameters lame;
  double omega = 1.0;
  PlaneWave::Kind incident_kind = PlaneWave::Compressional;
  double incident_angle = 0.0;
  double R = 0.0;      // 0 = auto: 1.5 x circumradius
  double h_mesh = 0.1;
  int dtn_modes = 0;   // 0 = auto
  double corner_grading = 0.5;
  int farfield_samples = 360;
  ProbeSpec probe;
  std::string output_dir = "out";

  Json canonical;      // normalized document the hash is computed from
  std::string hash;

  double radius() const;
  MediumConfig medium() const;
  PlaneWave incident(const Wavenumbers &k) const;
  int truncation(double ks_R) const;
};

SceneConfig parse_config(const Json &doc);
SceneConfig load_config(const std::string &path);
std::string config_hash(const Json &doc);

struct SimulationResult {
  Mesh mesh;
  MediumConfig medium;
  DtnOperator dtn;
  ScatteredField field;
  PlaneWave incident;
};

SimulationResult run_simulation(const SceneConfig &config);
FarFieldPattern compute_farfield(const SceneConfig &config, const SimulationResult &sim);

struct RunManifest {
  std::string config_hash;
  std::string version;
  std::string timestamp_utc;
  std::vector<std::string> files;
  Json scalars;

  Json to_json() const;
};

RunManifest make_manifest(const SceneConfig &config);
void write_text_file(const std::string &path, const std::string &content);

// Corner data in the corner's local frame taken from a solved scene (u1 = u2).
CornerData corner_data_from_solution(const SceneConfig &config,
                                     const SimulationResult &sim, int corner_id);

CornerData manufactured_corner_from_spec(const ProbeSpec &spec,
                                         const LameParameters &lame, double omega);

Json probe_report_json(const ProbeResult &result, const CornerData &data,
                       const std::vector<double> &s_list);

} // namespace escat
