#include "escat/config.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "escat/version.hpp"

namespace escat {

namespace {

const Json &require(const Json &j, const std::string &key, const std::string &where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("missing field '" + where + (where.empty() ? "" : ".") + key + "'");
  return *it;
}

double number(const Json &j, const std::string &key, const std::string &where) {
  const Json &v = require(j, key, where);
  if (!v.is_number())
    throw ConfigError("field '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

std::vector<SimplePolygon> parse_polygons(const Json &arr) {
  if (!arr.is_array() || arr.empty())
    throw ConfigError("partition.polygons_xy must be a nonempty array");
  std::vector<SimplePolygon> out;
  for (const Json &poly : arr) {
    SimplePolygon p;
    for (const Json &vtx : poly) {
      if (!vtx.is_array() || vtx.size() != 2)
        throw ConfigError("polygon vertex must be [x, y]");
      p.vertices.push_back({vtx[0].get<double>(), vtx[1].get<double>()});
    }
    out.push_back(std::move(p));
  }
  return out;
}

} // namespace

std::string config_hash(const Json &doc) {
  // nlohmann objects keep keys sorted, so dump() is canonical up to number
  // formatting; FNV-1a 64 over the canonical dump
  std::string s = doc.dump();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

SceneConfig parse_config(const Json &doc) {
  const Json &scene = require(doc, "scene", "");
  SceneConfig cfg;

  const Json &part = require(scene, "partition", "scene");
  std::string kind = require(part, "kind", "scene.partition").get<std::string>();
  auto polys = parse_polygons(require(part, "polygons_xy", "scene.partition"));
  if (kind == "nest") cfg.partition = make_partition_nest(std::move(polys));
  else if (kind == "cell") cfg.partition = make_partition_cell(std::move(polys));
  else throw ConfigError("scene.partition.kind must be 'nest' or 'cell'");

  const Json &mat = require(scene, "material", "scene");
  cfg.lame.lambda = number(mat, "lambda_stress", "scene.material");
  cfg.lame.mu = number(mat, "mu_stress", "scene.material");
  cfg.omega = number(mat, "omega_rad_per_time", "scene.material");
  cfg.q_values = require(mat, "q_per_region", "scene.material").get<std::vector<double>>();
  cfg.eta_values =
      require(mat, "eta_per_interface", "scene.material").get<std::vector<double>>();

  if (scene.contains("incident")) {
    const Json &inc = scene["incident"];
    std::string ik = require(inc, "kind", "scene.incident").get<std::string>();
    if (ik == "p") cfg.incident_kind = PlaneWave::Compressional;
    else if (ik == "s") cfg.incident_kind = PlaneWave::Shear;
    else throw ConfigError("scene.incident.kind must be 'p' or 's'");
    cfg.incident_angle = number(inc, "direction_angle_rad", "scene.incident");
  }

  if (scene.contains("solver")) {
    const Json &sol = scene["solver"];
    if (sol.contains("radius_R_length")) cfg.R = sol["radius_R_length"].get<double>();
    if (sol.contains("h_mesh_length")) cfg.h_mesh = sol["h_mesh_length"].get<double>();
    if (sol.contains("dtn_modes")) cfg.dtn_modes = sol["dtn_modes"].get<int>();
    if (sol.contains("corner_grading"))
      cfg.corner_grading = sol["corner_grading"].get<double>();
    if (sol.contains("farfield_samples"))
      cfg.farfield_samples = sol["farfield_samples"].get<int>();
  }

  if (scene.contains("probe")) {
    const Json &pr = scene["probe"];
    ProbeSpec &ps = cfg.probe;
    if (pr.contains("mode")) ps.mode = pr["mode"].get<std::string>();
    if (pr.contains("corner_id")) ps.corner_id = pr["corner_id"].get<int>();
    if (pr.contains("s_list")) ps.s_list = pr["s_list"].get<std::vector<double>>();
    if (pr.contains("opening_rad")) ps.opening_rad = pr["opening_rad"].get<double>();
    if (pr.contains("h_length")) ps.h_length = pr["h_length"].get<double>();
    if (pr.contains("q1")) ps.q1 = pr["q1"].get<double>();
    if (pr.contains("delta_q")) ps.delta_q = pr["delta_q"].get<double>();
    if (pr.contains("delta_eta")) ps.delta_eta = pr["delta_eta"].get<double>();
    if (pr.contains("apex_value_re")) {
      auto re = pr["apex_value_re"].get<std::vector<double>>();
      std::vector<double> im{0.0, 0.0};
      if (pr.contains("apex_value_im")) im = pr["apex_value_im"].get<std::vector<double>>();
      if (re.size() != 2 || im.size() != 2)
        throw ConfigError("apex value must have two components");
      ps.apex_value = {Complex(re[0], im[0]), Complex(re[1], im[1])};
    }
    if (pr.contains("admissibility_tol"))
      ps.admissibility_tol = pr["admissibility_tol"].get<double>();
  }

  if (scene.contains("output") && scene["output"].contains("dir"))
    cfg.output_dir = scene["output"]["dir"].get<std::string>();

  // validation through the module constructors
  (void)cfg.medium();
  (void)wavenumbers(cfg.lame, cfg.omega);
  if (!(cfg.h_mesh > 0)) throw ConfigError("scene.solver.h_mesh_length must be > 0");

  cfg.canonical = doc;
  cfg.hash = config_hash(doc);
  return cfg;
}

SceneConfig load_config(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  Json doc;
  try {
    is >> doc;
  } catch (const std::exception &e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(doc);
}

double SceneConfig::radius() const {
  if (R > 0) return R;
  return 1.5 * partition.circumradius();
}

MediumConfig SceneConfig::medium() const {
  return make_medium_config(partition, q_values, eta_values);
}

PlaneWave SceneConfig::incident(const Wavenumbers &k) const {
  PlaneWave w;
  w.kind = incident_kind;
  w.direction = {std::cos(incident_angle), std::sin(incident_angle)};
  w.k = k;
  w.lame = lame;
  return w;
}

int SceneConfig::truncation(double ks_R) const {
  return dtn_modes > 0 ? dtn_modes : default_dtn_truncation(ks_R);
}

SimulationResult run_simulation(const SceneConfig &config) {
  SimulationResult sim;
  double R = config.radius();
  Wavenumbers k = wavenumbers(config.lame, config.omega);
  sim.medium = config.medium();
  sim.mesh = generate_mesh(config.partition, R, config.h_mesh, config.corner_grading);
  // the boundary ring resolves modes up to (nb - 1) / 2; cap the truncation
  int nb = static_cast<int>(sim.mesh.boundary_vertices.size());
  int N = std::min(config.truncation(k.k_s * R), (nb - 1) / 2);
  sim.dtn = build_dtn(config.lame, config.omega, R, N);
  sim.incident = config.incident(k);

  AssembledSystem sys = assemble(sim.mesh, sim.medium, config.lame, config.omega, sim.dtn);
  sys.b = rhs_from_incident(sim.mesh, sim.medium, config.lame, sim.incident);
  sim.field = solve(sys);

  // stability report of Remark-type: load vs H1 norm
  sim.field.info.h1_norm = field_h1_norm(sim.mesh, sim.field.nodal);
  double max_1mq = 0, max_eta = 0;
  for (double q : config.q_values) max_1mq = std::max(max_1mq, std::fabs(1.0 - q));
  for (double e : config.eta_values) max_eta = std::max(max_eta, std::fabs(e));
  // ||u^i||_{L2(Omega)}: |u^i| = 1, so this is sqrt(scatterer area)
  double area = 0;
  for (int t = 0; t < sim.mesh.triangle_count(); ++t)
    if (sim.mesh.region[t] != 0) area += sim.mesh.triangle_area(t);
  sim.field.info.incident_l2 = std::sqrt(area);
  sim.field.info.stability_load =
      (config.omega * config.omega * max_1mq + max_eta) * std::sqrt(area);
  return sim;
}

FarFieldPattern compute_farfield(const SceneConfig &config, const SimulationResult &sim) {
  RadiatingSolution sol = circle_trace_modes(sim.mesh, sim.field, sim.dtn);
  FarFieldPattern p = far_field_from_solution(sol, config.farfield_samples);
  p.R = sim.dtn.R;
  return p;
}

Json RunManifest::to_json() const {
  Json j;
  j["config_hash"] = config_hash;
  j["version"] = version;
  j["timestamp_utc"] = timestamp_utc;
  j["files"] = files;
  j["scalars"] = scalars;
  return j;
}

RunManifest make_manifest(const SceneConfig &config) {
  RunManifest m;
  m.config_hash = config.hash;
  m.version = kVersion;
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  m.timestamp_utc = buf;
  m.scalars = Json::object();
  return m;
}

void write_text_file(const std::string &path, const std::string &content) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  os << content;
}

CornerData corner_data_from_solution(const SceneConfig &config,
                                     const SimulationResult &sim, int corner_id) {
  auto corners = extract_corners(config.partition);
  if (corner_id < 0 || corner_id >= static_cast<int>(corners.size()))
    throw ConfigError("corner_id out of range (have " +
                      std::to_string(corners.size()) + " corners)");
  const CornerDescriptor &corner = corners[corner_id];

  // the lambda outlives `sim`; give it shared ownership of a mesh copy
  auto mesh_copy = std::make_shared<Mesh>(sim.mesh);
  auto fem = std::make_shared<FemField>(*mesh_copy, sim.field.nodal);
  PlaneWave wave = sim.incident;
  RigidMotion motion = corner.rigid_motion;

  FieldFunction local_total = [mesh_copy, fem, wave, motion](Point2 xl) {
    Point2 xw = motion.apply(xl);
    FieldSample fs = fem->eval(xw);
    FieldSample fi = plane_wave_eval(wave, xw);
    fs.value = fs.value + fi.value;
    for (int j = 0; j < 2; ++j)
      for (int kk = 0; kk < 2; ++kk) fs.gradient[j][kk] += fi.gradient[j][kk];
    // rotate into the local frame: u_l = R^T u_w, grad_l = R^T grad_w R
    double ang = motion.angle, cc = std::cos(ang), ss = std::sin(ang);
    double Rm[2][2] = {{cc, -ss}, {ss, cc}};
    FieldSample out;
    for (int j = 0; j < 2; ++j)
      out.value[j] = Rm[0][j] * fs.value[0] + Rm[1][j] * fs.value[1];
    for (int j = 0; j < 2; ++j)
      for (int kk = 0; kk < 2; ++kk) {
        Complex acc = 0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            acc += Rm[a][j] * fs.gradient[a][b] * Rm[b][kk];
        out.gradient[j][kk] = acc;
      }
    out.divergence = out.gradient[0][0] + out.gradient[1][1];
    return out;
  };

  CornerData data;
  data.sector = corner.sector;
  data.u1_minus = local_total;
  data.u2_minus = local_total;
  data.u2_at_apex = local_total({0, 0}).value;
  MediumConfig medium = config.medium();
  RegionLabel owner;
  owner.kind = config.partition.kind == Partition::Nest ? RegionLabel::Shell
                                                        : RegionLabel::Cell;
  owner.index = corner.owner;
  data.q1 = q_of_region(medium, owner);
  data.q2 = data.q1;
  int iface = config.partition.kind == Partition::Nest ? corner.owner : 0;
  data.eta1 = sample_eta(medium, iface);
  data.eta2 = data.eta1;
  data.omega = config.omega;
  data.lame = config.lame;
  data.trace_tol = 1e-9;
  return data;
}

CornerData manufactured_corner_from_spec(const ProbeSpec &spec,
                                         const LameParameters &lame, double omega) {
  SectorGeometry sector;
  sector.theta_m = -0.5 * spec.opening_rad;
  sector.theta_M = 0.5 * spec.opening_rad;
  sector.h = spec.h_length;
  sector.delta_W = std::cos(0.5 * spec.opening_rad);
  return make_manufactured_corner(sector, spec.apex_value, spec.q1, spec.delta_q,
                                  spec.delta_eta, omega, lame);
}

Json probe_report_json(const ProbeResult &result, const CornerData &data,
                       const std::vector<double> &s_list) {
  Json j;
  j["eta_diff_hat"] = result.eta_diff_hat;
  j["q_diff_hat"] = result.q_diff_hat;
  j["eta_fit"] = {{"imag_value", result.eta_fit.imag_value},
                  {"stderr", result.eta_fit.stderr_value}};
  j["q_fit"] = {{"imag_value", result.q_fit.imag_value},
                {"stderr", result.q_fit.stderr_value}};
  j["s_list"] = s_list;
  Json rows = Json::array();
  double dq = data.q2 ? *data.q2 - data.q1 : 0.0;
  for (const IdentityTerms &T : result.terms) {
    Json row;
    row["s"] = T.s;
    row["balance_residual"] = T.balance_residual(data.omega, data.q1, dq);
    row["max_term"] = T.max_term();
    row["abs"] = {{"lhs", std::abs(T.lhs)},     {"I1", std::abs(T.I1)},
                  {"I2", std::abs(T.I2)},       {"I3_plus", std::abs(T.I3_plus)},
                  {"I3_minus", std::abs(T.I3_minus)}, {"I4", std::abs(T.I4)},
                  {"I5", std::abs(T.I5)},       {"I6", std::abs(T.I6)}};
    rows.push_back(row);
  }
  j["per_s"] = rows;
  return j;
}

} // namespace escat
