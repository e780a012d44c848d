#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "escat/config.hpp"
#include "escat/version.hpp"

namespace py = pybind11;
using namespace escat;

namespace {

SectorGeometry make_sector(double theta_m, double theta_M, double h) {
  SectorGeometry s;
  s.theta_m = theta_m;
  s.theta_M = theta_M;
  s.h = h;
  s.delta_W = std::cos(0.5 * (theta_M - theta_m));
  return s;
}

SceneConfig config_from_json_str(const std::string &text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception &e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

Partition partition_from_lists(const std::string &kind,
                               const std::vector<std::vector<std::pair<double, double>>> &polys) {
  std::vector<SimplePolygon> ps;
  for (const auto &poly : polys) {
    SimplePolygon p;
    for (auto [x, y] : poly) p.vertices.push_back({x, y});
    ps.push_back(std::move(p));
  }
  if (kind == "nest") return make_partition_nest(std::move(ps));
  if (kind == "cell") return make_partition_cell(std::move(ps));
  throw ConfigError("kind must be 'nest' or 'cell'");
}

} // namespace

PYBIND11_MODULE(_escat, m) {
  m.doc() = "2D elastic wave scattering toolkit for polygonal media";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def(
      "wavenumbers",
      [](double lambda, double mu, double omega) {
        Wavenumbers k = wavenumbers({lambda, mu}, omega);
        return std::make_pair(k.k_p, k.k_s);
      },
      py::arg("lambda_"), py::arg("mu"), py::arg("omega"),
      "compressional and shear wavenumbers (k_p, k_s)");

  m.def(
      "validate_partition",
      [](const std::string &kind,
         const std::vector<std::vector<std::pair<double, double>>> &polys) {
        Partition p = partition_from_lists(kind, polys);
        return p.region_count();
      },
      py::arg("kind"), py::arg("polygons"),
      "validate a nest/cell partition, returning the region count");

  m.def(
      "extract_corners",
      [](const std::string &kind,
         const std::vector<std::vector<std::pair<double, double>>> &polys) {
        Partition p = partition_from_lists(kind, polys);
        py::list out;
        for (const CornerDescriptor &c : extract_corners(p)) {
          py::dict d;
          d["owner"] = c.owner;
          d["vertex"] = std::make_pair(c.vertex.x1, c.vertex.x2);
          d["theta_m"] = c.sector.theta_m;
          d["theta_M"] = c.sector.theta_M;
          d["h"] = c.sector.h;
          d["delta_W"] = c.sector.delta_W;
          out.append(d);
        }
        return out;
      },
      py::arg("kind"), py::arg("polygons"));

  // CGO closed forms, bounds and quadrature counterparts
  m.def(
      "cgo_sector_integral",
      [](double theta_m, double theta_M, double h, double s) {
        CGOProbe p = make_probe(make_sector(theta_m, theta_M, h), s);
        return std::make_pair(cgo_sector_integral_exact(p), cgo_sector_integral_quad(p));
      },
      py::arg("theta_m"), py::arg("theta_M"), py::arg("h"), py::arg("s"),
      "(closed form, quadrature) of the full-sector CGO integral");

  m.def(
      "cgo_edge_integral",
      [](double theta_m, double theta_M, double h, double s, bool plus) {
        CGOProbe p = make_probe(make_sector(theta_m, theta_M, h), s);
        SectorEdge e = plus ? SectorEdge::Plus : SectorEdge::Minus;
        return std::make_pair(cgo_boundary_integral_exact(p, e),
                              cgo_boundary_integral_quad(p, e));
      },
      py::arg("theta_m"), py::arg("theta_M"), py::arg("h"), py::arg("s"),
      py::arg("plus") = true);

  m.def(
      "cgo_bounds",
      [](double theta_m, double theta_M, double h, double s, double lambda, double mu) {
        CGOProbe p = make_probe(make_sector(theta_m, theta_M, h), s);
        CgoNormBounds nb = cgo_norm_bounds(p, {lambda, mu});
        py::dict d;
        d["moment_alpha0"] = cgo_moment_bound(p, 0.0);
        d["tail_alpha0"] = cgo_tail_bound(p);
        d["h1_on_arc"] = nb.h1_on_arc;
        d["traction_on_arc"] = nb.traction_on_arc;
        d["asymptotic"] = nb.asymptotic;
        return d;
      },
      py::arg("theta_m"), py::arg("theta_M"), py::arg("h"), py::arg("s"),
      py::arg("lambda_") = 1.0, py::arg("mu") = 1.0);

  m.def("laplace_moment", &laplace_moment, py::arg("alpha"), py::arg("gamma"));

  m.def(
      "simulate",
      [](const std::string &config_json) {
        SceneConfig cfg = config_from_json_str(config_json);
        SimulationResult sim = run_simulation(cfg);
        py::dict d;
        d["vertices"] = sim.mesh.vertex_count();
        d["triangles"] = sim.mesh.triangle_count();
        d["residual_rel"] = sim.field.info.residual_rel;
        d["u_sc_l2"] = field_l2_norm(sim.mesh, sim.field.nodal);
        d["u_sc_h1"] = field_h1_norm(sim.mesh, sim.field.nodal);
        d["config_hash"] = cfg.hash;
        return d;
      },
      py::arg("config_json"), "mesh + assemble + solve; returns summary scalars");

  m.def(
      "farfield",
      [](const std::string &config_json) {
        SceneConfig cfg = config_from_json_str(config_json);
        SimulationResult sim = run_simulation(cfg);
        FarFieldPattern p = compute_farfield(cfg, sim);
        std::vector<double> angles(p.M);
        for (int j = 0; j < p.M; ++j) angles[j] = 2.0 * M_PI * j / p.M;
        py::dict d;
        d["theta"] = angles;
        d["up"] = p.up;
        d["us"] = p.us;
        d["l2_norm"] = p.l2_norm();
        return d;
      },
      py::arg("config_json"), "full pipeline to the far-field pattern");

  m.def(
      "probe_manufactured",
      [](double opening, double h, double q1, double delta_q, double delta_eta,
         double omega, double lambda, double mu, std::vector<double> s_list) {
        ProbeSpec spec;
        spec.opening_rad = opening;
        spec.h_length = h;
        spec.q1 = q1;
        spec.delta_q = delta_q;
        spec.delta_eta = delta_eta;
        CornerData data = manufactured_corner_from_spec(spec, {lambda, mu}, omega);
        if (s_list.empty()) s_list = default_s_list(data.sector);
        ProbeResult res = run_probe(data, s_list);
        py::dict d;
        d["eta_diff_hat"] = res.eta_diff_hat;
        d["q_diff_hat"] = res.q_diff_hat;
        double worst = 0;
        for (const IdentityTerms &T : res.terms)
          worst = std::max(worst, T.balance_residual(omega, q1, delta_q) /
                                      std::max(T.max_term(), 1e-300));
        d["balance_residual_rel"] = worst;
        return d;
      },
      py::arg("opening"), py::arg("h"), py::arg("q1"), py::arg("delta_q"),
      py::arg("delta_eta"), py::arg("omega") = 1.0, py::arg("lambda_") = 1.0,
      py::arg("mu") = 1.0, py::arg("s_list") = std::vector<double>{},
      "corner-identity recovery on a manufactured fixture");

  m.def("config_hash", [](const std::string &config_json) {
    return config_hash(Json::parse(config_json));
  });
}
