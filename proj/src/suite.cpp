#include "lefschetz/suite.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "lefschetz/bounds.hpp"
#include "lefschetz/cutflow.hpp"
#include "lefschetz/integrand.hpp"
#include "lefschetz/mqthom.hpp"
#include "lefschetz/oracles.hpp"
#include "lefschetz/quadrature.hpp"

namespace lefschetz {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

ModelGeometry square_torus() { return ModelGeometry::flat_torus({kTwoPi, kTwoPi}); }

std::vector<int> circle_exponents() { return {-3, -2, -1, 0, 2, 3, 4, 5}; }

std::string fmt(double x, int digits = 10) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(digits) << x;
  return os.str();
}

SuiteRow row(std::string item, double oracle, double value, double tol) {
  SuiteRow r;
  r.item = std::move(item);
  r.oracle = fmt(oracle);
  r.value = fmt(value);
  r.residual = std::abs(value - oracle);
  r.pass = std::isfinite(value) && r.residual <= tol;
  return r;
}

SuiteRow check(std::string item, std::string oracle, std::string value, bool pass,
               double residual = 0.0) {
  return {std::move(item), std::move(oracle), std::move(value), residual, pass};
}

Eigen::MatrixXd random_skew(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      A(i, j) = g(rng);
      A(j, i) = -A(i, j);
    }
  return A;
}

LefschetzOptions circle_options(ProfileKind p, int workers) {
  LefschetzOptions o;
  o.profile = p;
  o.resolution = 65536;
  o.workers = workers;
  return o;
}

LefschetzOptions torus_options(int workers) {
  LefschetzOptions o;
  o.resolution = 509;
  o.workers = workers;
  return o;
}

LefschetzOptions sphere_options(int res, int workers) {
  LefschetzOptions o;
  o.resolution = res;
  o.workers = workers;
  return o;
}

void criterion1(CriterionResult& c, const SuiteOptions& o) {
  std::mt19937_64 rng(o.seed);
  for (int n = 1; n <= 4; ++n)
    for (int s = 0; s < 20; ++s) {
      const Eigen::MatrixXd omega = random_skew(n, rng);
      c.rows.push_back(row("fiber n=" + std::to_string(n) + " #" + std::to_string(s), 1.0,
                           fiber_integral(n, omega), 1e-6));
    }
}

void criterion2(CriterionResult& c, const SuiteOptions& o) {
  const ModelGeometry S = ModelGeometry::sphere2();
  const QuadratureGrid grid = build_grid(S, 256);
  Eigen::MatrixXd omega(2, 2);
  omega << 0.0, S.curvature(), -S.curvature(), 0.0;
  const double pf = pfaffian(omega);
  const double gb = integrate_density(grid, [&](const ManifoldPoint&) { return pf / kTwoPi; },
                                      o.workers);
  c.rows.push_back(row("(1/2pi) int Pf(Omega), res 256", 2.0, gb, 1e-6));
  const auto rep = compute_lefschetz(S, make_map(Identity{}), sphere_options(256, o.workers));
  c.rows.push_back(row("L(Id) via Thom form, res 256", 2.0, rep.integral, 1e-6));
}

void criterion3(CriterionResult& c, const SuiteOptions& o) {
  const ModelGeometry C = ModelGeometry::circle();
  for (int n : circle_exponents()) {
    const auto f = make_map(CirclePower{n});
    const double sec = compute_lefschetz(C, f, circle_options(ProfileKind::Secant, o.workers)).integral;
    const double rat =
        compute_lefschetz(C, f, circle_options(ProfileKind::RationalOdd, o.workers)).integral;
    const std::string name = "z^" + std::to_string(n);
    c.rows.push_back(row(name + " sec", 1 - n, sec, 1e-4));
    c.rows.push_back(row(name + " rational", 1 - n, rat, 1e-4));
    c.rows.push_back(row(name + " sec vs rational", sec, rat, 2e-3));
  }
}

void criterion4(CriterionResult& c, const SuiteOptions& o) {
  const ModelGeometry T = square_torus();
  for (const auto& m : torus_acceptance_maps(o.seed)) {
    const auto f = parse_map(m);
    const double I = compute_lefschetz(T, f, torus_options(o.workers)).integral;
    const int cohom = *cohomological_lefschetz(T, f);
    const int fp = fixed_set_lefschetz(find_fixed_points(T, f));
    c.rows.push_back(row(m + " vs det(I-M)", cohom, I, 1e-3));
    c.rows.push_back(check(m + " fixed-point oracle", std::to_string(cohom), std::to_string(fp),
                           fp == cohom));
  }
}

void criterion5(CriterionResult& c, const SuiteOptions& o) {
  const ModelGeometry S = ModelGeometry::sphere2();
  const LefschetzOptions opt = sphere_options(512, o.workers);
  const std::pair<const char*, std::pair<int, double>> cases[] = {
      {"sphere_rotation:0,0,1:1.57", {2, 1e-3}},
      {"sphere_reflection:0,0,1", {0, 1e-3}},
      {"suspension:2", {3, 1e-2}},
  };
  for (const auto& [m, expect] : cases)
    c.rows.push_back(row(m, expect.first, compute_lefschetz(S, parse_map(m), opt).integral,
                         expect.second));
}

void criterion6(CriterionResult& c, const SuiteOptions& o) {
  const std::vector<double> ts = {0.25, 0.5, 1.0, 2.0, 4.0};
  auto spread_row = [&](const std::string& name, const ModelGeometry& M, const SmoothSelfMap& f,
                        const LefschetzOptions& opt) {
    double lo = INFINITY, hi = -INFINITY;
    for (double t : ts) {
      LefschetzOptions ot = opt;
      ot.t = t;
      const double I = compute_lefschetz(M, f, ot).integral;
      lo = std::min(lo, I);
      hi = std::max(hi, I);
    }
    c.rows.push_back(check(name + " spread over t", "<= 2e-3", fmt(hi - lo, 3),
                           std::isfinite(hi - lo) && hi - lo <= 2e-3, hi - lo));
  };
  const ModelGeometry C = ModelGeometry::circle();
  for (int n : circle_exponents())
    for (ProfileKind p : {ProfileKind::Secant, ProfileKind::RationalOdd})
      spread_row("z^" + std::to_string(n) + " " + to_string(p), C, make_map(CirclePower{n}),
                 circle_options(p, o.workers));
  const ModelGeometry T = square_torus();
  for (const auto& m : torus_acceptance_maps(o.seed))
    spread_row(m, T, parse_map(m), torus_options(o.workers));

  auto localization = [&](const std::string& name, const ModelGeometry& M, const SmoothSelfMap& f,
                          LefschetzOptions opt) {
    opt.t = 32.0;
    const double mf = localization_mass(M, f, opt, 0.1 * M.injectivity_radius());
    c.rows.push_back(
        check(name + " mass near Fix(f), t=32", ">= 0.99", fmt(mf, 6), mf >= 0.99, 1.0 - mf));
  };
  for (int n : {-3, 0, 3, 5})
    localization("z^" + std::to_string(n), C, make_map(CirclePower{n}),
                 circle_options(ProfileKind::Secant, o.workers));
  for (const auto& m : torus_acceptance_maps(o.seed))
    localization(m, T, parse_map(m), torus_options(o.workers));
  const ModelGeometry S = ModelGeometry::sphere2();
  for (const char* m : {"sphere_rotation:0,0,1:1.57", "sphere_reflection:0,0,1", "suspension:2"})
    localization(m, S, parse_map(m), sphere_options(256, o.workers));

  // The reflection fixes a great circle: chi(S^1) = 0 weighted by sgn det(Id - df_nu) = +1.
  const auto refl = parse_map("sphere_reflection:0,0,1");
  const int sub = fixed_set_lefschetz(find_fixed_points(S, refl));
  c.rows.push_back(check("reflection submanifold oracle", "0", std::to_string(sub), sub == 0));
}

void criterion7(CriterionResult& c, const SuiteOptions& o) {
  const ModelGeometry S = ModelGeometry::sphere2();
  for (int n : {2, 3, 4}) {
    const auto f = make_map(SphereSuspension{n});
    const std::string name = "suspension:" + std::to_string(n);
    const BoundReport b = bound_check(S, f);
    const auto pts = sphere_cut_points(S, f);
    const int count = b.cut_count.value_or(-1);
    c.rows.push_back(check(name + " |C(f)| (clusters, Newton)", std::to_string(n - 1),
                           std::to_string(count) + ", " + std::to_string(pts.size()),
                           b.cut_class == CutClass::Finite && count == n - 1 &&
                               static_cast<int>(pts.size()) == n - 1));
    c.rows.push_back(check(name + " |L - chi| = |C(f)|", std::to_string(count),
                           std::to_string(std::abs(b.L - b.chi)),
                           std::abs(b.L - b.chi) == count && b.inequality_holds));
    c.rows.push_back(check(name + " sum sgn_x = L - chi", std::to_string(b.L - b.chi),
                           b.sgn_sum ? std::to_string(*b.sgn_sum) : "none",
                           b.sgn_sum && *b.sgn_sum == b.L - b.chi));
  }
  const ModelGeometry T = square_torus();
  std::vector<std::string> maps = {"torus_linear:2,0,0,3", "torus_linear:0,1,-1,0"};
  for (const auto& m : torus_acceptance_maps(o.seed)) maps.push_back(m);
  for (const auto& m : maps) {
    const auto f = parse_map(m);
    const CutSetSummary s = classify_cut_set(T, f, 128);
    c.rows.push_back(check(m + " C(f) class", "curve-like", to_string(s.classification),
                           s.classification == CutClass::CurveLike));
  }
}

void criterion8(CriterionResult& c, const SuiteOptions& o) {
  const ModelGeometry S = ModelGeometry::sphere2();
  const auto susp = make_map(SphereSuspension{2});
  const std::vector<double> ts = {0.05, 0.1, 0.2};
  const double expected = *cohomological_lefschetz(S, susp) - S.euler_characteristic();
  const double quad = singular_current_quadrature(S, susp, sphere_options(256, o.workers), ts);
  c.rows.push_back(row("suspension:2 C^f(1) by quadrature", expected, quad, 0.05));
  const int wind = singular_current_winding(S, susp);
  c.rows.push_back(row("suspension:2 C^f(1) by winding", expected, wind, 0.05));
  const ModelGeometry C = ModelGeometry::circle();
  const double deg = degree_current_estimate(C, make_map(CirclePower{3}), 65536, ts);
  c.rows.push_back(row("z^3 D^f(1)/vol", 2.0, deg, 0.05));
}

void criterion9(CriterionResult& c, const SuiteOptions& o) {
  const ModelGeometry C = ModelGeometry::circle();
  const ModelGeometry T = square_torus();
  auto bounds_row = [&](const std::string& name, const ModelGeometry& M, const SmoothSelfMap& f,
                        ProfileKind p) {
    const int L = *cohomological_lefschetz(M, f);
    const RadialProfile prof{p, 0.45 * M.injectivity_radius()};
    const double fb = flat_bound(M, f, prof);
    const double hb = hodge_bound_flat_torus(M, f);
    c.rows.push_back(check(name + " " + to_string(p) + " |L| <= flat, hodge",
                           std::to_string(std::abs(L)), fmt(fb, 6) + ", " + fmt(hb, 6),
                           std::abs(L) <= fb && std::abs(L) <= hb));
  };
  for (int n : circle_exponents())
    for (ProfileKind p : {ProfileKind::Secant, ProfileKind::RationalOdd})
      bounds_row("z^" + std::to_string(n), C, make_map(CirclePower{n}), p);
  for (const auto& m : torus_acceptance_maps(o.seed))
    bounds_row(m, T, parse_map(m), ProfileKind::Secant);

  std::mt19937_64 rng(o.seed);
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= n; ++k) {
      const LemmaConstants lc = lemma_constants(k, n, 10000, 0, o.seed);
      int bad = 0, printed_bad = 0;
      double worst = 0.0;
      for (int s = 0; s < 1000; ++s) {
        const AlternatingForm a = AlternatingForm::random(k, n, rng);
        const double l2 = norm_l2(a);
        const double inf = *norm_linf_exact(a);
        if (inf < lc.lower * l2 * (1 - 1e-12) || inf > lc.upper * l2 * (1 + 1e-12)) ++bad;
        if (inf > lc.printed_upper * l2 * (1 + 1e-12)) ++printed_bad;
        worst = std::max(worst, inf / l2);
      }
      c.rows.push_back(check("sandwich k=" + std::to_string(k) + " n=" + std::to_string(n),
                             "[" + fmt(lc.lower, 4) + ", " + fmt(lc.upper, 4) + "]",
                             "max ratio " + fmt(worst, 6) + "; printed constant " +
                                 fmt(lc.printed_upper, 4) + " exceeded by " +
                                 std::to_string(printed_bad) + "/1000",
                             bad == 0));
    }
}

void criterion10(CriterionResult& c, const SuiteOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double pf_err = 0.0;
  for (int s = 0; s < 200; ++s) {
    const int n = 2 * (1 + s % 4);
    const Eigen::MatrixXd A = random_skew(n, rng);
    const double pf = pfaffian(A), det = A.determinant();
    pf_err = std::max(pf_err, std::abs(pf * pf - det) / std::max(1.0, std::abs(det)));
  }
  c.rows.push_back(check("Pf^2 = det (200 matrices, n <= 8)", "<= 1e-9", fmt(pf_err, 3),
                         pf_err <= 1e-9, pf_err));

  double lin_err = 0.0;
  for (int s = 0; s < 200; ++s) {
    const double kappa = (s % 3) - 1.0;
    const double d = 0.1 + 2.5 * (u(rng) + 1.0) / 2.0;
    const int n = 2 + s % 2;
    Eigen::VectorXd q1(n), q2(n), w1(n), w2(n);
    for (int i = 0; i < n; ++i) {
      q1(i) = u(rng);
      q2(i) = u(rng);
      w1(i) = u(rng);
      w2(i) = u(rng);
    }
    const double a = u(rng), b = u(rng);
    const auto D1 = jacobi_decompose(kappa, d, q1, w1);
    const auto D2 = jacobi_decompose(kappa, d, q2, w2);
    const auto D = jacobi_decompose(kappa, d, a * q1 + b * q2, a * w1 + b * w2);
    auto diff = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y1,
                    const Eigen::VectorXd& y2) { return (x - a * y1 - b * y2).cwiseAbs().maxCoeff(); };
    lin_err = std::max({lin_err, diff(D.X1, D1.X1, D2.X1), diff(D.Z1, D1.Z1, D2.Z1),
                        diff(D.Xt1, D1.Xt1, D2.Xt1), diff(D.Zt1, D1.Zt1, D2.Zt1)});
  }
  c.rows.push_back(check("VH decomposition linearity", "<= 1e-10", fmt(lin_err, 3),
                         lin_err <= 1e-10, lin_err));

  double closed_err = 0.0, assembly_err = 0.0;
  const RadialProfile prof{ProfileKind::Secant, 1.2};
  for (int s = 0; s < 1000; ++s) {
    const double d = 1.6 * (u(rng) + 1.0) / 2.0;
    Eigen::MatrixXd W(2, 2);
    W << 2 * u(rng), 2 * u(rng), 2 * u(rng), 2 * u(rng);
    const double generic = integrand_from_frame(-1.0, d, W, prof);
    const double scale = std::max(1.0, std::abs(generic));
    closed_err = std::max(closed_err,
                          std::abs(integrand_surface_closed_form(-1.0, d, W, prof) - generic) / scale);
    assembly_err = std::max(
        assembly_err, std::abs(integrand_permutation_assembly(-1.0, d, W, prof) - generic) / scale);
  }
  c.rows.push_back(check("hyperbolic closed form vs generic (1000 samples)", "<= 1e-10",
                         fmt(closed_err, 3), closed_err <= 1e-10, closed_err));
  c.rows.push_back(check("hyperbolic assembly vs generic (1000 samples)", "<= 1e-10",
                         fmt(assembly_err, 3), assembly_err <= 1e-10, assembly_err));

  const ModelGeometry S = ModelGeometry::sphere2();
  const auto f = make_map(SphereSuspension{2});
  std::vector<double> values;
  for (int w : {1, 2, 8}) values.push_back(compute_lefschetz(S, f, sphere_options(128, w)).integral);
  const bool same = values[0] == values[1] && values[1] == values[2];
  c.rows.push_back(check("bit-identical across 1/2/8 workers", fmt(values[0], 17),
                         fmt(values[1], 17) + ", " + fmt(values[2], 17), same));
}

struct CriterionSpec {
  const char* title;
  double budget;
  void (*body)(CriterionResult&, const SuiteOptions&);
};

const CriterionSpec kCriteria[kCriteriaCount] = {
    {"Thom form integrates to 1 on fibers", 5.0, criterion1},
    {"Chern-Gauss-Bonnet on S^2", 5.0, criterion2},
    {"circle maps z^n", 10.0, criterion3},
    {"flat torus linear maps", 60.0, criterion4},
    {"sphere maps", 120.0, criterion5},
    {"t-invariance and localization", 0.0, criterion6},
    {"cut-locus bound", 60.0, criterion7},
    {"singular and degree currents", 0.0, criterion8},
    {"flat, Hodge and norm bounds", 0.0, criterion9},
    {"property suites", 0.0, criterion10},
};

}  // namespace

nlohmann::json CriterionResult::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["title"] = title;
  j["pass"] = pass;
  j["seconds"] = seconds;
  j["budget"] = budget;
  j["summary"] = summary;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"item", r.item},
                         {"oracle", r.oracle},
                         {"value", r.value},
                         {"residual", r.residual},
                         {"pass", r.pass}});
  return j;
}

std::vector<std::string> torus_acceptance_maps(std::uint64_t seed, int count) {
  std::vector<std::string> out = {"torus_linear:2,0,0,3", "torus_linear:2,1,1,1"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> e(-3, 3);
  while (static_cast<int>(out.size()) < count) {
    const int a = e(rng), b = e(rng), c = e(rng), d = e(rng);
    if ((1 - a) * (1 - d) - b * c == 0) continue;
    const std::string m = "torus_linear:" + std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(c) + "," + std::to_string(d);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  out.resize(count);
  return out;
}

CriterionResult run_criterion(int id, const SuiteOptions& options) {
  if (id < 1 || id > kCriteriaCount) throw std::out_of_range("criterion id");
  const CriterionSpec& spec = kCriteria[id - 1];
  CriterionResult c;
  c.id = id;
  c.title = spec.title;
  c.budget = spec.budget;
  const auto start = std::chrono::steady_clock::now();
  try {
    spec.body(c, options);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    int failed = 0;
    for (const auto& r : c.rows) failed += r.pass ? 0 : 1;
    const bool in_time = c.budget <= 0.0 || c.seconds < c.budget;
    c.pass = failed == 0 && !c.rows.empty() && in_time;
    std::ostringstream s;
    s << c.rows.size() - failed << "/" << c.rows.size() << " checks, " << std::fixed
      << std::setprecision(2) << c.seconds << " s";
    if (c.budget > 0) s << " (budget " << c.budget << " s)";
    c.summary = s.str();
  } catch (const std::exception& e) {
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.pass = false;
    c.summary = std::string("error: ") + e.what();
  }
  return c;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& options,
                                       const std::function<void(const CriterionResult&)>& on_done) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteriaCount; ++id) {
    out.push_back(run_criterion(id, options));
    if (on_done) on_done(out.back());
  }
  return out;
}

std::string format_row_table(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  os << std::left << std::setw(4) << "id" << std::setw(52) << "map / check" << std::setw(22)
     << "oracle" << std::setw(34) << "integral / value" << std::setw(12) << "residual"
     << "result\n";
  for (const auto& c : results)
    for (const auto& r : c.rows)
      os << std::left << std::setw(4) << c.id << std::setw(52) << r.item << std::setw(22)
         << r.oracle << std::setw(34) << r.value << std::setw(12) << fmt(r.residual, 3)
         << (r.pass ? "pass" : "FAIL") << "\n";
  return os.str();
}

}  // namespace lefschetz
