#include <CLI11.hpp>

#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "escat/config.hpp"
#include "escat/version.hpp"

namespace fs = std::filesystem;
using namespace escat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerify = 4;

void prepare_output(const SceneConfig &cfg) {
  fs::create_directories(cfg.output_dir);
}

std::string path_in(const SceneConfig &cfg, const std::string &name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void emit_manifest(const SceneConfig &cfg, RunManifest &m) {
  write_text_file(path_in(cfg, "manifest.json"), m.to_json().dump(2) + "\n");
}

int cmd_simulate(const std::string &config_path) {
  SceneConfig cfg = load_config(config_path);
  prepare_output(cfg);
  SimulationResult sim = run_simulation(cfg);

  // total field u = u^i + u^sc
  VecC total = sim.field.nodal;
  for (int i = 0; i < sim.mesh.vertex_count(); ++i) {
    ComplexVec2 ui = plane_wave_eval(sim.incident, sim.mesh.vertices[i]).value;
    total[2 * i] += ui[0];
    total[2 * i + 1] += ui[1];
  }
  std::ostringstream field_os;
  write_field(field_os, sim.mesh, total);
  write_text_file(path_in(cfg, "field.txt"), field_os.str());

  std::ostringstream sc_os;
  write_field(sc_os, sim.mesh, sim.field.nodal);
  write_text_file(path_in(cfg, "field_scattered.txt"), sc_os.str());

  std::ostringstream mesh_os;
  write_mesh(mesh_os, sim.mesh);
  write_text_file(path_in(cfg, "mesh.txt"), mesh_os.str());

  RunManifest m = make_manifest(cfg);
  m.files = {"field.txt", "field_scattered.txt", "mesh.txt"};
  m.scalars["residual_rel"] = sim.field.info.residual_rel;
  m.scalars["u_sc_h1_norm"] = sim.field.info.h1_norm;
  m.scalars["stability_load"] = sim.field.info.stability_load;
  m.scalars["vertices"] = sim.mesh.vertex_count();
  m.scalars["triangles"] = sim.mesh.triangle_count();
  if (sim.field.info.eta_positive_warning)
    std::cerr << "warning: eta > 0 on some interface; well-posedness of the solve "
                 "is not guaranteed\n";
  emit_manifest(cfg, m);
  std::cout << "simulate: " << sim.mesh.vertex_count() << " vertices, residual "
            << sim.field.info.residual_rel << "\n";
  return kExitOk;
}

int cmd_farfield(const std::string &config_path, const std::string &beta) {
  SceneConfig cfg = load_config(config_path);
  prepare_output(cfg);
  SimulationResult sim = run_simulation(cfg);
  FarFieldPattern p = compute_farfield(cfg, sim);

  std::ostringstream os;
  write_farfield(os, p);
  write_text_file(path_in(cfg, "farfield.txt"), os.str());

  RunManifest m = make_manifest(cfg);
  m.files = {"farfield.txt"};
  m.scalars["farfield_l2"] = p.l2_norm();
  double up2 = 0, us2 = 0;
  for (int j = 0; j < p.M; ++j) {
    up2 += std::norm(p.up[j]);
    us2 += std::norm(p.us[j]);
  }
  m.scalars["up_l2"] = std::sqrt(up2 * 2 * M_PI / p.M);
  m.scalars["us_l2"] = std::sqrt(us2 * 2 * M_PI / p.M);
  m.scalars["beta"] = beta;
  emit_manifest(cfg, m);
  std::cout << "farfield: |u_" << beta << "^inf| written, L2 = "
            << (beta == "p" ? m.scalars["up_l2"].get<double>()
                : beta == "s" ? m.scalars["us_l2"].get<double>()
                              : p.l2_norm())
            << "\n";
  return kExitOk;
}

int cmd_cgo_verify(double theta_m, double theta_M, double h,
                   std::vector<double> s_list) {
  SectorGeometry sector;
  sector.theta_m = theta_m;
  sector.theta_M = theta_M;
  sector.h = h;
  sector.delta_W = std::cos(0.5 * (theta_M - theta_m));
  if (s_list.empty()) s_list = {5, 10, 20, 40};

  LameParameters lame;
  bool all_pass = true;
  std::cout << std::setprecision(6);
  std::cout << "# quantity s closed_form/bound quadrature rel_or_ratio pass\n";
  for (double s : s_list) {
    CGOProbe p = make_probe(sector, s); // throws InvalidSector on bad opening

    auto row = [&](const std::string &name, Complex closed, Complex quad, double tol) {
      double rel = std::abs(closed - quad) / std::max(std::abs(closed), 1e-300);
      bool pass = rel <= tol;
      all_pass = all_pass && pass;
      std::cout << name << " " << s << " " << std::abs(closed) << " " << std::abs(quad)
                << " " << rel << " " << (pass ? "PASS" : "FAIL") << "\n";
    };
    row("sector_integral", cgo_sector_integral_exact(p), cgo_sector_integral_quad(p),
        1e-8);
    row("edge_plus", cgo_boundary_integral_exact(p, SectorEdge::Plus),
        cgo_boundary_integral_quad(p, SectorEdge::Plus), 1e-8);
    row("edge_minus", cgo_boundary_integral_exact(p, SectorEdge::Minus),
        cgo_boundary_integral_quad(p, SectorEdge::Minus), 1e-8);

    auto bound_row = [&](const std::string &name, double value, double bound,
                         bool enforce) {
      bool pass = value <= bound || !enforce;
      all_pass = all_pass && pass;
      std::cout << name << " " << s << " " << bound << " " << value << " "
                << (bound > 0 ? value / bound : 0.0) << " "
                << (pass ? (enforce ? "PASS" : "INFO") : "FAIL") << "\n";
    };
    bool asym = p.in_asymptotic_regime();
    bound_row("moment_alpha0", cgo_moment_quad(p, 0.0), cgo_moment_bound(p, 0.0), asym);
    bound_row("moment_alpha1", cgo_moment_quad(p, 1.0), cgo_moment_bound(p, 1.0), asym);
    bound_row("tail_alpha0", cgo_tail_quad(p, 0.0), cgo_tail_bound(p), asym);
    CgoNormBounds nb = cgo_norm_bounds(p, lame);
    CgoNormBounds nq = cgo_norms_quad(p, lame);
    bound_row("u0_H1_arc", nq.h1_on_arc, nb.h1_on_arc, asym);
    bound_row("Tu0_L2_arc", nq.traction_on_arc, nb.traction_on_arc, asym);
  }
  std::cout << (all_pass ? "cgo-verify: all rows pass\n"
                         : "cgo-verify: FAILURES present\n");
  return all_pass ? kExitOk : kExitVerify;
}

int cmd_probe(const std::string &config_path) {
  SceneConfig cfg = load_config(config_path);
  prepare_output(cfg);

  CornerData data;
  if (cfg.probe.mode == "manufactured") {
    data = manufactured_corner_from_spec(cfg.probe, cfg.lame, cfg.omega);
  } else if (cfg.probe.mode == "solver") {
    SimulationResult sim = run_simulation(cfg);
    data = corner_data_from_solution(cfg, sim, cfg.probe.corner_id);
  } else {
    throw ConfigError("probe.mode must be 'manufactured' or 'solver'");
  }

  std::vector<double> s_list =
      cfg.probe.s_list.empty() ? default_s_list(data.sector) : cfg.probe.s_list;
  ProbeResult result = run_probe(data, s_list);

  Json report = probe_report_json(result, data, s_list);
  write_text_file(path_in(cfg, "probe_report.json"), report.dump(2) + "\n");

  bool balanced = true;
  double dq = data.q2 ? *data.q2 - data.q1 : 0.0;
  for (const IdentityTerms &T : result.terms)
    balanced = balanced && T.balance_residual(data.omega, data.q1, dq) <=
                               1e-6 * T.max_term() + 1e-18;
  std::cout << "probe: eta_diff " << result.eta_diff_hat << ", q_diff "
            << result.q_diff_hat << ", identity "
            << (balanced ? "balanced" : "UNBALANCED") << "\n";
  return balanced ? kExitOk : kExitVerify;
}

int cmd_compare(const std::string &file_a, const std::string &file_b) {
  std::ifstream ia(file_a), ib(file_b);
  if (!ia) throw ConfigError("cannot open " + file_a);
  if (!ib) throw ConfigError("cannot open " + file_b);
  FarFieldPattern A = read_farfield(ia), B = read_farfield(ib);
  double d = farfield_distance(A, B);
  std::cout << std::setprecision(17) << d << "\n";
  return kExitOk;
}

int cmd_admissibility(const std::string &config_path) {
  SceneConfig cfg = load_config(config_path);
  prepare_output(cfg);
  SimulationResult sim = run_simulation(cfg);

  auto corners = extract_corners(cfg.partition);
  FemField fem(sim.mesh, sim.field.nodal);
  PlaneWave wave = sim.incident;
  FieldFunction total = [&](Point2 x) {
    FieldSample f = fem.eval(x);
    FieldSample fi = plane_wave_eval(wave, x);
    f.value = f.value + fi.value;
    return f;
  };
  std::vector<Point2> verts;
  for (const auto &c : corners) verts.push_back(c.vertex);
  AdmissibilityReport rep =
      admissibility_check(total, verts, cfg.probe.admissibility_tol, 1.0);

  Json j;
  j["omega_diam"] = cfg.omega * cfg.partition.diameter();
  j["threshold"] = rep.threshold;
  j["floor_ratio"] = rep.floor_ratio;
  j["admissible"] = rep.admissible;
  Json rows = Json::array();
  for (const auto &r : rep.rows)
    rows.push_back({{"corner", r.corner},
                    {"x", r.vertex.x1},
                    {"y", r.vertex.x2},
                    {"magnitude", r.magnitude},
                    {"pass", r.pass}});
  j["corners"] = rows;
  write_text_file(path_in(cfg, "admissibility.json"), j.dump(2) + "\n");
  std::cout << "admissibility: floor " << rep.floor_ratio << " vs tol "
            << cfg.probe.admissibility_tol << " -> "
            << (rep.admissible ? "PASS" : "FAIL") << "\n";
  return rep.admissible ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char **argv) {
  if (const char *threads = std::getenv("ESCAT_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"escat: 2D elastic wave scattering toolkit for polygonal media"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, file_a, file_b, beta = "t";
  double theta_m = -M_PI / 4, theta_M = M_PI / 4, h = 1.0;
  std::vector<double> s_list;

  CLI::App *sim = app.add_subcommand("simulate", "solve and dump the scattered field");
  sim->add_option("config", config_path, "scene config (json)")->required();

  CLI::App *far = app.add_subcommand("farfield", "full pipeline to the far-field table");
  far->add_option("config", config_path, "scene config (json)")->required();
  far->add_option("--beta", beta, "pattern component: t, p or s")
      ->check(CLI::IsMember({"t", "p", "s"}));

  CLI::App *cgo = app.add_subcommand("cgo-verify",
                                     "closed forms and bounds vs quadrature");
  cgo->add_option("--theta-m", theta_m, "sector lower angle (rad)");
  cgo->add_option("--theta-M", theta_M, "sector upper angle (rad)");
  cgo->add_option("--radius", h, "sector radius");
  cgo->add_option("--s", s_list, "s sweep values");

  CLI::App *prb = app.add_subcommand("probe", "corner integral identity probe");
  prb->add_option("config", config_path, "scene config (json)")->required();

  CLI::App *cmp = app.add_subcommand("compare", "L2 distance of two far-field files");
  cmp->add_option("fileA", file_a)->required();
  cmp->add_option("fileB", file_b)->required();

  CLI::App *adm = app.add_subcommand("admissibility", "corner non-vanishing check");
  adm->add_option("config", config_path, "scene config (json)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path);
    if (far->parsed()) return cmd_farfield(config_path, beta);
    if (cgo->parsed()) return cmd_cgo_verify(theta_m, theta_M, h, s_list);
    if (prb->parsed()) return cmd_probe(config_path);
    if (cmp->parsed()) return cmd_compare(file_a, file_b);
    if (adm->parsed()) return cmd_admissibility(config_path);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError &e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
