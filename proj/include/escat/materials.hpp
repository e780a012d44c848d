#pragma once

#include <vector>

#include "escat/geometry.hpp"

namespace escat {

// Background Lame constants, strong convexity mu > 0, lambda + mu > 0.
struct LameParameters {
  double lambda = 1.0;
  double mu = 1.0;

  bool strongly_convex() const { return mu > 0.0 && lambda + mu > 0.0; }
};

struct Wavenumbers {
  double k_p = 0.0;
  double k_s = 0.0;
  double omega = 0.0;
};

Wavenumbers wavenumbers(const LameParameters &lame, double omega);

// Piecewise-constant medium attached to a partition: q per shell/cell,
// eta per interface (cell partitions share a single eta*). Exterior q = 1.
struct MediumConfig {
  Partition partition;
  std::vector<double> q_values;   // size = region_count
  std::vector<double> eta_values; // size = interface_count
  bool eta_positive_warning = false;
};

MediumConfig make_medium_config(Partition partition, std::vector<double> q_values,
                                std::vector<double> eta_values);

double sample_q(const MediumConfig &config, Point2 x);
double sample_eta(const MediumConfig &config, int interface_id);

// q for an already-known region label (used by assembly).
double q_of_region(const MediumConfig &config, const RegionLabel &label);

} // namespace escat
