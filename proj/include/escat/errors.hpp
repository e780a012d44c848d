#pragma once

#include <stdexcept>
#include <string>

namespace escat {

// Error taxonomy shared by all modules. Each condition gets its own type so
// callers (and the CLI exit-code mapping) can dispatch on it.
struct Error : std::runtime_error {
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Configuration / input errors (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// Numerical failures (CLI exit code 3).
struct NumericalError : Error {
  using Error::Error;
};

#define ESCAT_ERROR_TYPE(NAME, BASE)                                           \
  struct NAME : BASE {                                                         \
    explicit NAME(const std::string &msg) : BASE(std::string(#NAME ": ") + msg) {} \
  }

// geometry
ESCAT_ERROR_TYPE(NotConvex, ConfigError);
ESCAT_ERROR_TYPE(NotStrictlyNested, ConfigError);
ESCAT_ERROR_TYPE(SelfIntersecting, ConfigError);
ESCAT_ERROR_TYPE(OverlappingCells, ConfigError);
ESCAT_ERROR_TYPE(NoExteriorCorner, ConfigError);
ESCAT_ERROR_TYPE(DegenerateCorner, ConfigError);

// materials
ESCAT_ERROR_TYPE(ConvexityViolation, ConfigError);
ESCAT_ERROR_TYPE(OnInterface, ConfigError);
ESCAT_ERROR_TYPE(UnknownInterface, ConfigError);

// elastic_core
ESCAT_ERROR_TYPE(InvalidSector, ConfigError);
ESCAT_ERROR_TYPE(DomainError, ConfigError);
ESCAT_ERROR_TYPE(GridTooCoarse, ConfigError);

// dtn_farfield
ESCAT_ERROR_TYPE(ModeSingular, NumericalError);
ESCAT_ERROR_TYPE(BesselFailure, NumericalError);
ESCAT_ERROR_TYPE(GridMismatch, ConfigError);

// fem_solver
ESCAT_ERROR_TYPE(GeometryOutsideDisk, ConfigError);
ESCAT_ERROR_TYPE(MeshingFailed, NumericalError);
ESCAT_ERROR_TYPE(RegionMismatch, ConfigError);
ESCAT_ERROR_TYPE(SingularSystem, NumericalError);
ESCAT_ERROR_TYPE(ResidualTooLarge, NumericalError);

// corner_probe
ESCAT_ERROR_TYPE(SectorMismatch, ConfigError);
ESCAT_ERROR_TYPE(TraceMismatch, NumericalError);
ESCAT_ERROR_TYPE(DegenerateAngle, ConfigError);
ESCAT_ERROR_TYPE(ApexDegenerate, NumericalError);
ESCAT_ERROR_TYPE(NotAsymptotic, NumericalError);

#undef ESCAT_ERROR_TYPE

} // namespace escat
