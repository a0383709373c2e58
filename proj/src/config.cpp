#include "lefschetz/config.hpp"

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "lefschetz/bounds.hpp"
#include "lefschetz/cutflow.hpp"
#include "lefschetz/errors.hpp"
#include "lefschetz/oracles.hpp"
#include "lefschetz/suite.hpp"

namespace lefschetz {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::string time_profile_name(TimeProfileKind k) {
  return k == TimeProfileKind::Rational ? "rational" : "tangent_half";
}

TimeProfileKind parse_time_profile(const std::string& s) {
  if (s == "rational") return TimeProfileKind::Rational;
  if (s == "tangent_half") return TimeProfileKind::TangentHalf;
  throw ParseError("unknown time profile '" + s + "'");
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (!config.out.empty()) {
    std::ofstream file(config.out);
    if (!file) throw ParseError("cannot write '" + config.out + "'");
    file << text;
  }
  out << text;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

double epsilon_fraction(const RunConfig& config) {
  if (config.cut_tube)
    throw ParseError("the cut-locus tube only applies to cutlocus and bounds subcommands");
  if (!(config.epsilon_fraction > 0.0 && config.epsilon_fraction <= 0.5))
    throw ParseError("epsilon fraction must lie in (0, 0.5]");
  return config.epsilon_fraction;
}

LefschetzOptions options_from(const RunConfig& config) {
  LefschetzOptions o;
  o.profile = config.profile;
  o.epsilon_fraction = epsilon_fraction(config);
  o.resolution = config.resolution;
  o.t = config.t.empty() ? 1.0 : config.t.front();
  o.time_profile = config.time_profile;
  o.workers = config.workers;
  return o;
}

std::string run_compute(const RunConfig& config) {
  const SmoothSelfMap f = parse_map(config.map);
  const ModelGeometry M = resolve_geometry(config, f);
  return json_text(compute_lefschetz(M, f, options_from(config)).to_json());
}

std::string run_sweep(const RunConfig& config) {
  const SmoothSelfMap f = parse_map(config.map);
  const ModelGeometry M = resolve_geometry(config, f);
  const auto reports = sweep_t(M, f, options_from(config), config.t);
  if (config.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) j.push_back(r.to_json());
    return json_text(j);
  }
  std::ostringstream os;
  os << "t,integral,oracle,residual,mass_fraction\n";
  for (const auto& r : reports)
    os << format_number(r.t) << "," << format_number(r.integral) << ","
       << (r.oracle ? std::to_string(*r.oracle) : "") << ","
       << (r.residual ? format_number(*r.residual) : "") << ","
       << (r.mass_fraction ? format_number(*r.mass_fraction) : "") << "\n";
  return os.str();
}

std::string run_verify(const RunConfig& config) {
  const SmoothSelfMap f = parse_map(config.map);
  const ModelGeometry M = resolve_geometry(config, f);
  const int fp = fixed_set_lefschetz(find_fixed_points(M, f));
  const auto cohom = cohomological_lefschetz(M, f);
  nlohmann::json j;
  j["oracle_fp"] = fp;
  j["oracle_cohom"] = cohom ? nlohmann::json(*cohom) : nlohmann::json(nullptr);
  j["agree"] = cohom.has_value() && *cohom == fp;
  return json_text(j);
}

std::string run_cutlocus(const RunConfig& config) {
  const SmoothSelfMap f = parse_map(config.map);
  const ModelGeometry M = resolve_geometry(config, f);
  const CutSetEstimate est = cut_set_estimate(M, f, build_grid(M, config.resolution));
  if (config.format == "json") {
    nlohmann::json j;
    j["tolerance"] = est.tolerance;
    j["measure"] = est.measure;
    j["classification"] = to_string(est.classification);
    j["clusters"] = est.clusters.size();
    return json_text(j);
  }
  std::ostringstream os;
  const int dim = static_cast<int>(est.samples.empty() ? 0 : est.samples[0].x.coords.size());
  for (int i = 0; i < dim; ++i) os << "x" << i << ",";
  os << "margin,in_C_f\n";
  for (const auto& s : est.samples) {
    for (int i = 0; i < dim; ++i) os << format_number(s.x.coords(i)) << ",";
    os << format_number(s.margin) << "," << (s.in_C_f ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string run_bounds(const RunConfig& config) {
  const SmoothSelfMap f = parse_map(config.map);
  const ModelGeometry M = resolve_geometry(config, f);
  return json_text(bound_check(M, f, std::min(config.resolution, 128)).to_json());
}

std::string run_bounds_hodge(const RunConfig& config) {
  const SmoothSelfMap f = parse_map(config.map);
  const ModelGeometry M = resolve_geometry(config, f);
  const auto L = cohomological_lefschetz(M, f);
  if (!L) throw UnsupportedManifold("no Lefschetz oracle for this map");
  const RadialProfile p{config.profile, epsilon_fraction(config) * M.injectivity_radius()};
  const double fb = flat_bound(M, f, p);
  const double hb = hodge_bound_flat_torus(M, f);
  nlohmann::json j;
  j["L"] = *L;
  j["flat_bound"] = fb;
  j["hodge_bound"] = hb;
  j["satisfied"] = std::abs(*L) <= fb && std::abs(*L) <= hb;
  return json_text(j);
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["manifold"] = manifold;
  j["map"] = map;
  j["profile"] = to_string(profile);
  if (cut_tube)
    j["epsilon_fraction"] = "cut";
  else
    j["epsilon_fraction"] = epsilon_fraction;
  j["resolution"] = resolution;
  j["t"] = t;
  j["out"] = out;
  j["seed"] = seed;
  j["format"] = format;
  j["time_profile"] = time_profile_name(time_profile);
  j["workers"] = workers;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.manifold = j.value("manifold", c.manifold);
    c.map = j.value("map", c.map);
    if (j.contains("profile")) c.profile = parse_profile(j.at("profile").get<std::string>());
    if (j.contains("epsilon_fraction")) {
      const auto& e = j.at("epsilon_fraction");
      if (e.is_string()) {
        if (e.get<std::string>() != "cut") throw ParseError("epsilon fraction must be a number or 'cut'");
        c.cut_tube = true;
      } else {
        c.epsilon_fraction = e.get<double>();
      }
    }
    c.resolution = j.value("resolution", c.resolution);
    if (j.contains("t")) {
      const auto& t = j.at("t");
      c.t = t.is_array() ? t.get<std::vector<double>>() : std::vector<double>{t.get<double>()};
    }
    c.out = j.value("out", c.out);
    c.seed = j.value("seed", c.seed);
    c.format = j.value("format", c.format);
    if (j.contains("time_profile"))
      c.time_profile = parse_time_profile(j.at("time_profile").get<std::string>());
    c.workers = j.value("workers", c.workers);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad run config: ") + e.what());
  }
  if (c.format != "json" && c.format != "csv") throw ParseError("format must be json or csv");
  return c;
}

ModelGeometry parse_geometry(const std::string& descriptor) {
  if (!descriptor.empty() && descriptor.front() == '{') {
    try {
      return ModelGeometry::from_json(nlohmann::json::parse(descriptor));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad geometry JSON: ") + e.what());
    }
  }
  const auto colon = descriptor.find(':');
  const std::string head = descriptor.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  if (head == "circle") {
    if (rest.empty()) return ModelGeometry::circle();
    const auto r = parse_numbers(rest);
    if (r.size() != 1 || !(r[0] > 0)) throw ParseError("circle radius must be one positive number");
    return ModelGeometry::circle(r[0]);
  }
  if (head == "torus") {
    if (rest.empty()) return ModelGeometry::flat_torus({kTwoPi, kTwoPi});
    return ModelGeometry::flat_torus(parse_numbers(rest));
  }
  if ((head == "sphere" || head == "sphere2") && rest.empty()) return ModelGeometry::sphere2();
  if (head == "hyperbolic_patch" && rest.empty()) return ModelGeometry::hyperbolic_patch();
  throw ParseError("unknown manifold '" + descriptor + "'");
}

ModelGeometry default_geometry_for(const SmoothSelfMap& f) {
  return std::visit(
      [](const auto& fam) -> ModelGeometry {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, CirclePower> || std::is_same_v<T, Identity>) {
          return ModelGeometry::circle();
        } else if constexpr (std::is_same_v<T, TorusLinear>) {
          return ModelGeometry::flat_torus(
              std::vector<double>(static_cast<std::size_t>(fam.matrix.rows()), kTwoPi));
        } else if constexpr (std::is_same_v<T, GenericChartMap>) {
          throw ParseError("a generic map needs an explicit manifold");
        } else {
          return ModelGeometry::sphere2();
        }
      },
      f.family);
}

ModelGeometry resolve_geometry(const RunConfig& config, const SmoothSelfMap& f) {
  const ModelGeometry M =
      config.manifold.empty() ? default_geometry_for(f) : parse_geometry(config.manifold);
  check_compatible(M, f);
  return M;
}

int run(const std::string& subcommand, const RunConfig& config, std::ostream& out,
        std::ostream& err) {
  try {
    if (config.resolution < 8) throw ParseError("resolution must be at least 8");
    if (subcommand == "compute") {
      emit(config, run_compute(config), out);
    } else if (subcommand == "sweep") {
      emit(config, run_sweep(config), out);
    } else if (subcommand == "verify") {
      emit(config, run_verify(config), out);
    } else if (subcommand == "cutlocus") {
      emit(config, run_cutlocus(config), out);
    } else if (subcommand == "bounds") {
      emit(config, run_bounds(config), out);
    } else if (subcommand == "bounds-hodge") {
      emit(config, run_bounds_hodge(config), out);
    } else if (subcommand == "suite") {
      SuiteOptions o;
      o.seed = config.seed;
      o.workers = config.workers;
      bool all = true;
      const auto results = run_suite(o, [&](const CriterionResult& c) {
        all = all && c.pass;
        err << "criterion " << c.id << " " << (c.pass ? "PASS" : "FAIL") << ": " << c.title
            << " (" << c.summary << ")\n";
      });
      const std::string table = format_row_table(results);
      out << table;
      if (!config.out.empty()) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : results) j.push_back(c.to_json());
        std::ofstream file(config.out);
        file << (config.format == "json" ? json_text(j) : table);
      }
      return all ? kOk : kAcceptanceFailure;
    } else {
      throw ParseError("unknown subcommand '" + subcommand + "'");
    }
    return kOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const UnsupportedManifold& e) {
    err << "unsupported: " << e.what() << "\n";
    return kParseError;
  } catch (const NonFiniteDensity& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace lefschetz
