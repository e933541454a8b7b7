#pragma once

#include <stdexcept>
#include <string>

namespace pharm {

enum class ErrorCode {
  grid_too_coarse,
  origin_not_interior,
  not_convex,
  degenerate_wulff,
  invalid_qsum,
  grid_mismatch,
  obstacle_clearance,
  no_convergence,
  mesh_degenerate,
  geometry_inconsistent,
  zeta_not_interior,
  center_no_convergence,
  parameter_domain,
  hemisphere_concentrated,
  normalization_undefined,
  degenerate_body,
  rescale_undefined,
  io_error,
  parse_error,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::grid_too_coarse: return "grid-too-coarse";
    case ErrorCode::origin_not_interior: return "origin-not-interior";
    case ErrorCode::not_convex: return "not-convex";
    case ErrorCode::degenerate_wulff: return "degenerate-wulff";
    case ErrorCode::invalid_qsum: return "invalid-qsum";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::obstacle_clearance: return "obstacle-clearance";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::mesh_degenerate: return "mesh-degenerate";
    case ErrorCode::geometry_inconsistent: return "geometry-inconsistent";
    case ErrorCode::zeta_not_interior: return "zeta-not-interior";
    case ErrorCode::center_no_convergence: return "center-no-convergence";
    case ErrorCode::parameter_domain: return "parameter-domain";
    case ErrorCode::hemisphere_concentrated: return "hemisphere-concentrated";
    case ErrorCode::normalization_undefined: return "normalization-undefined";
    case ErrorCode::degenerate_body: return "degenerate-body";
    case ErrorCode::rescale_undefined: return "rescale-undefined";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown-error";
}

}  // namespace pharm
