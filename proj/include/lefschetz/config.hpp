#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "lefschetz/geometry.hpp"
#include "lefschetz/integrand.hpp"
#include "lefschetz/maps.hpp"
#include "lefschetz/quadrature.hpp"

namespace lefschetz {

struct RunConfig {
  std::string manifold;  // empty: inferred from the map
  std::string map = "identity";
  ProfileKind profile = ProfileKind::Secant;
  double epsilon_fraction = 0.45;
  bool cut_tube = false;  // "--epsilon-frac cut"
  int resolution = 256;
  std::vector<double> t = {1.0};
  std::string out;
  std::uint64_t seed = 1;
  std::string format = "json";
  TimeProfileKind time_profile = TimeProfileKind::Rational;
  int workers = 0;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  bool operator==(const RunConfig&) const = default;
};

// "circle[:r]", "torus[:p1,p2,...]", "sphere", "hyperbolic_patch", or a JSON object.
ModelGeometry parse_geometry(const std::string& descriptor);
// Natural home of a map descriptor when no manifold is given.
ModelGeometry default_geometry_for(const SmoothSelfMap& f);
ModelGeometry resolve_geometry(const RunConfig& config, const SmoothSelfMap& f);

enum ExitCode : int { kOk = 0, kParseError = 2, kNumericalError = 3, kAcceptanceFailure = 4 };

// Runs one subcommand, writes the artifact to config.out (if set) and echoes
// it to `out`. Errors are mapped to exit codes and described on `err`.
int run(const std::string& subcommand, const RunConfig& config, std::ostream& out,
        std::ostream& err);

}  // namespace lefschetz
