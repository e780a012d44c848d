#include "escat/materials.hpp"

#include <cmath>
#include <string>

namespace escat {

Wavenumbers wavenumbers(const LameParameters &lame, double omega) {
  if (!lame.strongly_convex())
    throw ConvexityViolation("mu = " + std::to_string(lame.mu) +
                             ", lambda + mu = " + std::to_string(lame.lambda + lame.mu));
  if (!(omega > 0)) throw ConfigError("omega must be positive");
  Wavenumbers k;
  k.omega = omega;
  k.k_p = omega / std::sqrt(2.0 * lame.mu + lame.lambda);
  k.k_s = omega / std::sqrt(lame.mu);
  return k;
}

MediumConfig make_medium_config(Partition partition, std::vector<double> q_values,
                                std::vector<double> eta_values) {
  MediumConfig cfg;
  if (static_cast<int>(q_values.size()) != partition.region_count())
    throw ConfigError("expected " + std::to_string(partition.region_count()) +
                      " q values, got " + std::to_string(q_values.size()));
  if (static_cast<int>(eta_values.size()) != partition.interface_count())
    throw ConfigError("expected " + std::to_string(partition.interface_count()) +
                      " eta values, got " + std::to_string(eta_values.size()));
  for (double q : q_values)
    if (q == 0.0) throw ConfigError("q must be nonzero in every region");
  for (double eta : eta_values)
    if (eta > 0.0) cfg.eta_positive_warning = true;
  cfg.partition = std::move(partition);
  cfg.q_values = std::move(q_values);
  cfg.eta_values = std::move(eta_values);
  return cfg;
}

double q_of_region(const MediumConfig &config, const RegionLabel &label) {
  switch (label.kind) {
  case RegionLabel::Exterior: return 1.0;
  case RegionLabel::Shell: return config.q_values.at(label.index - 1);
  case RegionLabel::Cell: return config.q_values.at(label.index);
  case RegionLabel::OnInterface:
    throw OnInterface("q sampled on interface " + std::to_string(label.interface_id));
  }
  return 1.0;
}

double sample_q(const MediumConfig &config, Point2 x) {
  return q_of_region(config, locate(config.partition, x));
}

double sample_eta(const MediumConfig &config, int interface_id) {
  if (config.partition.kind == Partition::Nest) {
    if (interface_id < 1 || interface_id > config.partition.interface_count())
      throw UnknownInterface(std::to_string(interface_id));
    return config.eta_values.at(interface_id - 1);
  }
  if (interface_id != 0) throw UnknownInterface(std::to_string(interface_id));
  return config.eta_values.at(0);
}

} // namespace escat
