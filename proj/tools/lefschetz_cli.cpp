#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "lefschetz/config.hpp"
#include "lefschetz/errors.hpp"

namespace {

struct Flags {
  std::string config_file;
  std::string manifold;
  std::string map;
  std::string profile;
  std::string epsilon;
  int resolution = 0;
  std::string t;
  std::string out;
  std::uint64_t seed = 0;
  std::string format;
  std::string time_profile;
  int workers = -1;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "JSON run configuration");
  cmd->add_option("--manifold", f.manifold, "circle[:r] | torus[:p1,p2,..] | sphere | hyperbolic_patch");
  cmd->add_option("--map", f.map, "map descriptor, e.g. circle_power:3");
  cmd->add_option("--profile", f.profile, "sec | tan | rational");
  cmd->add_option("--epsilon-frac", f.epsilon, "tube radius over injectivity radius, or 'cut'");
  cmd->add_option("--res", f.resolution, "grid resolution");
  cmd->add_option("--t", f.t, "deformation parameter or comma-separated list");
  cmd->add_option("--out", f.out, "artifact path");
  cmd->add_option("--seed", f.seed, "seed for randomized checks");
  cmd->add_option("--format", f.format, "json | csv");
  cmd->add_option("--time-profile", f.time_profile, "rational | tangent_half");
  cmd->add_option("--workers", f.workers, "worker threads (0: LEFSCHETZ_THREADS or all cores)");
}

lefschetz::RunConfig build_config(const Flags& f, const std::string& subcommand) {
  using namespace lefschetz;
  RunConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw ParseError("cannot read '" + f.config_file + "'");
    try {
      c = RunConfig::from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad config file: ") + e.what());
    }
  }
  if (subcommand == "sweep" && f.format.empty() && f.config_file.empty()) c.format = "csv";
  if (subcommand == "cutlocus" && f.format.empty() && f.config_file.empty()) c.format = "csv";
  if (!f.manifold.empty()) c.manifold = f.manifold;
  if (!f.map.empty()) c.map = f.map;
  if (!f.profile.empty()) c.profile = parse_profile(f.profile);
  if (!f.epsilon.empty()) {
    if (f.epsilon == "cut") {
      c.cut_tube = true;
    } else {
      const auto v = parse_numbers(f.epsilon);
      if (v.size() != 1) throw ParseError("--epsilon-frac takes one number or 'cut'");
      c.epsilon_fraction = v[0];
      c.cut_tube = false;
    }
  }
  if (f.resolution != 0) c.resolution = f.resolution;
  if (!f.t.empty()) c.t = parse_numbers(f.t);
  if (!f.out.empty()) c.out = f.out;
  if (f.seed != 0) c.seed = f.seed;
  if (!f.format.empty()) {
    if (f.format != "json" && f.format != "csv") throw ParseError("format must be json or csv");
    c.format = f.format;
  }
  if (!f.time_profile.empty()) {
    c.time_profile = f.time_profile == "tangent_half" ? TimeProfileKind::TangentHalf
                     : f.time_profile == "rational"
                         ? TimeProfileKind::Rational
                         : throw ParseError("unknown time profile '" + f.time_profile + "'");
  }
  if (f.workers >= 0) c.workers = f.workers;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lefschetz numbers from Thom-form integrals on model geometries"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"compute", "sweep", "verify", "cutlocus", "bounds", "bounds-hodge", "suite"})
    add_flags(app.add_subcommand(name), flags);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lefschetz::kParseError;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();
  lefschetz::RunConfig config;
  try {
    config = build_config(flags, subcommand);
  } catch (const lefschetz::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return lefschetz::kParseError;
  }
  return lefschetz::run(subcommand, config, std::cout, std::cerr);
}
