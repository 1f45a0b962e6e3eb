#include "tw/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "tw/fibermap.hpp"
#include "tw/twistor.hpp"

namespace tw {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

enum class Kind { flat, scalar_flat_kahler, fubini_study, non_kahler };

Kind kind_of(const std::string& metric) {
  if (metric == "flat") return Kind::flat;
  if (metric == "fubini_study") return Kind::fubini_study;
  if (metric == "hermitian_perturbed") return Kind::non_kahler;
  return Kind::scalar_flat_kahler;
}

bool scalar_flat_kahler(Kind k) { return k == Kind::flat || k == Kind::scalar_flat_kahler; }

const std::vector<std::string> kSuites = {"curvature", "integrability", "structure_identities",
                                          "balanced",  "cone",          "fibermap",
                                          "completeness"};

int default_points(const std::string& suite) {
  if (suite == "structure_identities") return 20;
  if (suite == "balanced") return 30;
  if (suite == "fibermap") return 100;
  return 50;
}

std::string power_pole_text(double p) {
  if (p == 0.0) return "0";
  return "-" + num(p) + "*log(1 - zeta^2)";
}

class Recorder {
 public:
  Recorder(const SuiteConfig& cfg, VerificationReport& rep) : cfg_(cfg), rep_(rep) {}

  void upper(const std::string& id, const std::string& anchor, int points, double value,
             double threshold, std::string note = {}) {
    add(id, anchor, points, value, threshold, true, std::move(note));
  }
  void lower(const std::string& id, const std::string& anchor, int points, double value,
             double threshold, std::string note = {}) {
    add(id, anchor, points, value, threshold, false, std::move(note));
  }
  void skip(const std::string& id, const std::string& reason) {
    rep_.skipped.push_back({id, reason});
  }

 private:
  void add(const std::string& id, const std::string& anchor, int points, double value,
           double threshold, bool is_upper, std::string note) {
    if (auto it = cfg_.tolerances.find(id); it != cfg_.tolerances.end()) threshold = it->second;
    else if (is_upper && cfg_.tol_tier == "loose") threshold *= 100.0;
    CheckRecord r;
    r.check_id = id;
    r.anchor = anchor;
    r.points_tested = points;
    r.max_residual = value;
    r.threshold = threshold;
    r.upper = is_upper;
    r.pass = std::isfinite(value) && (is_upper ? value < threshold : value > threshold);
    r.note = std::move(note);
    rep_.checks.push_back(std::move(r));
  }
  const SuiteConfig& cfg_;
  VerificationReport& rep_;
};

// Index-ordered max over a per-point vector.
template <class T, class F>
double max_of(const std::vector<T>& v, F f) {
  double m = 0.0;
  for (const auto& x : v) {
    const double y = f(x);
    if (std::isnan(y)) return y;
    m = std::max(m, y);
  }
  return m;
}

template <class T, class F>
double min_of(const std::vector<T>& v, F f) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : v) m = std::min(m, f(x));
  return m;
}

class SuiteRunner {
 public:
  explicit SuiteRunner(const SuiteConfig& cfg, VerificationReport& rep)
      : cfg_(cfg), rec_(cfg, rep), rep_(rep), base_(make_fixture(cfg.metric, cfg.params)),
        kind_(kind_of(cfg.metric)) {}

  void run(const std::string& suite) {
    n_ = cfg_.sample_count > 0 ? cfg_.sample_count : default_points(suite);
    if (kind_ == Kind::non_kahler && (suite == "integrability" || suite == "structure_identities" ||
                                      suite == "balanced" || suite == "cone")) {
      rec_.skip(suite, "twistor lift needs a Kahler base (U(1) reduction of the frame bundle)");
      return;
    }
    try {
      if (suite == "curvature") curvature();
      else if (suite == "integrability") integrability();
      else if (suite == "structure_identities") structure();
      else if (suite == "balanced") balanced();
      else if (suite == "cone") cone();
      else if (suite == "fibermap") fibermap();
      else if (suite == "completeness") completeness();
    } catch (const UsageError&) {
      throw;
    } catch (const ConfigurationError&) {
      throw;
    } catch (const Error& e) {
      rec_.upper(suite + ".error", "numeric failure", 0, std::numeric_limits<double>::infinity(),
                 0.0, e.what());
    }
  }

 private:
  template <class Fn>
  auto map(int n, Fn fn) {
    return map_points(n, fn, cfg_.execution);
  }

  std::uint64_t point_seed(int i) const { return cfg_.seed * 1000003ULL + static_cast<std::uint64_t>(i); }

  TwistorChart twistor_chart() const { return TwistorChart::twistor(base_); }

  TwistorChart sm_chart(double perturb) const {
    const SurfaceProfile pr = make_profile(cfg_.fiber.profile);
    EquivariantMap m = solve_phi(pr, cfg_.fiber.c, cfg_.fiber.sign, Branch::quadrature);
    if (perturb != 0.0) m = m.perturbed(perturb);
    return TwistorChart::modified(base_, pr, m);
  }

  void curvature() {
    struct P {
      double sym, traceless, trace_pp, trace_mm, scal, wplus, nabla_omega, d_omega, r23, s1_third,
          s1_quarter;
    };
    const auto pts = sample_points(base_.chart(), n_, cfg_.seed);
    const auto res = map(n_, [&](int i) {
      const auto geo = local_geometry(base_.metric(), pts[i]);
      const auto op = curvature_operator(geo, sd_basis(adapted_frame(base_, pts[i]), geo.metric()));
      const auto rs = riemann_symmetry_residuals(geo.r_down);
      const Mat6& m = op.matrix();
      P p{};
      p.sym = std::max({rs.first_pair, rs.second_pair, rs.pair_swap, rs.bianchi});
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) p.sym = std::max(p.sym, std::abs(m[a][b] - m[b][a]));
      const auto wp = op.w_plus(), wm = op.w_minus();
      p.traceless = std::max(std::abs(wp[0][0] + wp[1][1] + wp[2][2]),
                             std::abs(wm[0][0] + wm[1][1] + wm[2][2]));
      p.trace_pp = std::abs(m[0][0] + m[1][1] + m[2][2] - geo.scal / 4);
      p.trace_mm = std::abs(m[3][3] + m[4][4] + m[5][5] - geo.scal / 4);
      p.scal = geo.scal;
      for (const auto& row : wp)
        for (double v : row) p.wplus = std::max(p.wplus, std::abs(v));
      const auto kr = kahler_residuals(base_, pts[i]);
      p.nabla_omega = kr.nabla_omega;
      p.d_omega = kr.d_omega;
      for (int a = 1; a <= 2; ++a)
        for (int b = 0; b < 6; ++b) p.r23 = std::max(p.r23, std::abs(m[a][b]));
      p.s1_third = std::abs(m[0][0] - geo.scal / 3);
      p.s1_quarter = std::abs(m[0][0] - geo.scal / 4);
      return p;
    });
    const std::string block = "curvature operator block form";
    rec_.upper("curvature.symmetry", block, n_, max_of(res, [](auto& p) { return p.sym; }), 1e-9);
    rec_.upper("curvature.weyl_traceless", block, n_,
               max_of(res, [](auto& p) { return p.traceless; }), 1e-9);
    rec_.upper("curvature.trace_plus_block", block, n_,
               max_of(res, [](auto& p) { return p.trace_pp; }), 1e-8, "trace(++) - Scal/4");
    rec_.upper("curvature.trace_minus_block", block, n_,
               max_of(res, [](auto& p) { return p.trace_mm; }), 1e-8, "trace(--) - Scal/4");
    if (scalar_flat_kahler(kind_)) {
      const std::string sf = "scalar-flat Kahler curvature";
      rec_.upper("curvature.scalar_flat", sf, n_, max_of(res, [](auto& p) { return std::abs(p.scal); }), 1e-7);
      rec_.upper("curvature.w_plus", sf, n_, max_of(res, [](auto& p) { return p.wplus; }), 1e-7);
      rec_.upper("curvature.nabla_omega", sf, n_, max_of(res, [](auto& p) { return p.nabla_omega; }), 1e-8);
      rec_.upper("curvature.r_s2_s3", sf, n_, max_of(res, [](auto& p) { return p.r23; }), 1e-8,
                 "curvature operator rows of s2 and s3");
    } else {
      rec_.skip("curvature.scalar_flat", "fixture is not scalar-flat Kahler");
    }
    if (kind_ == Kind::non_kahler) {
      const std::string nk = "Kahler condition";
      rec_.lower("curvature.nabla_omega_negative_control", nk, n_,
                 max_of(res, [](auto& p) { return p.nabla_omega; }), 1e-3);
      rec_.lower("curvature.d_omega_negative_control", nk, n_,
                 max_of(res, [](auto& p) { return p.d_omega; }), 1e-3);
    }
    if (kind_ == Kind::fubini_study) {
      const std::string fs = "Fubini-Study curvature";
      rec_.upper("curvature.fs_scalar", fs, n_,
                 max_of(res, [](auto& p) { return std::abs(p.scal - 24.0); }), 1e-6);
      rec_.upper("curvature.fs_s1_scal_third", fs, n_,
                 max_of(res, [](auto& p) { return p.s1_third; }), 1e-8, "g(R s1, s1) - Scal/3");
      rec_.upper("curvature.fs_s1_scal_quarter", fs, n_,
                 max_of(res, [](auto& p) { return p.s1_quarter; }), 1e-8,
                 "diagnostic: g(R s1, s1) - Scal/4");
      rec_.upper("curvature.fs_nabla_omega", fs, n_,
                 max_of(res, [](auto& p) { return p.nabla_omega; }), 1e-8);
    }
  }

  double max_w_plus(const std::vector<Point6>& pts) {
    const auto w = map(static_cast<int>(pts.size()), [&](int i) {
      const Point4 x{pts[i][0], pts[i][1], pts[i][2], pts[i][3]};
      const auto geo = local_geometry(base_.metric(), x);
      const auto wp = curvature_operator(geo, sd_basis(adapted_frame(base_, x), geo.metric())).w_plus();
      double m = 0.0;
      for (const auto& row : wp)
        for (double v : row) m = std::max(m, std::abs(v));
      return m;
    });
    return max_of(w, [](double v) { return v; });
  }

  double max_nijenhuis(const TwistorChart& ch, const std::vector<Point6>& pts) {
    const auto r = map(static_cast<int>(pts.size()),
                       [&](int i) { return max_abs(nijenhuis_bracket(ch, pts[i])); });
    return max_of(r, [](double v) { return v; });
  }

  void integrability() {
    const std::string anchor = "twistor integrability criterion";
    const auto tw = twistor_chart();
    const auto pts = tw.sample(n_, cfg_.seed);
    const double wplus = max_w_plus(pts);
    const std::string wnote = "max |W+| = " + num(wplus);
    auto dichotomy = [&](const std::string& id, const TwistorChart& ch,
                         const std::vector<Point6>& p) {
      const double n = max_nijenhuis(ch, p);
      if (wplus < 1e-7) rec_.upper(id, anchor, n_, n, 1e-6, wnote);
      else if (wplus > 0.1) rec_.lower(id + "_negative_control", anchor, n_, n, 1e-3, wnote);
      else rec_.skip(id, "W+ neither vanishing nor large: " + wnote);
    };
    dichotomy("integrability.twistor", tw, pts);
    const auto sm = sm_chart(0.0);
    dichotomy("integrability.modified", sm, sm.sample(n_, cfg_.seed));
    const auto bad = sm_chart(0.1);
    rec_.lower("integrability.modified_perturbed_negative_control", "holomorphic fiber map", n_,
               max_nijenhuis(bad, bad.sample(n_, cfg_.seed)), 1e-3,
               "phi -> phi + 0.1 (1 - phi^2)");
    const auto cal = calibrate_epsilon(base_, 6, cfg_.seed);
    if (!cal.calibrated) {
      rec_.skip("integrability.epsilon_calibration", "connection form vanishes at every probe");
    } else {
      const std::string a = "horizontal lift sign";
      rec_.upper("integrability.epsilon_calibration", a, cal.probes, cal.residual, 1e-6,
                 "epsilon = " + std::to_string(cal.epsilon) +
                     (cal.consistent ? "" : ", probes disagree"));
      rec_.lower("integrability.epsilon_flipped", a, cal.probes, cal.flipped_residual, 1e-3);
    }
  }

  void structure() {
    const std::string anchor = "twistor structure formulas";
    const auto tw = twistor_chart();
    const auto pts = tw.sample(n_, cfg_.seed);
    struct P {
      StructureResiduals s;
      double routes;
    };
    const auto res = map(n_, [&](int i) {
      P p;
      p.s = verify_structure_identities(tw, pts[i], point_seed(i));
      const auto f = tw.fields(pts[i]);
      Rng rng(point_seed(i) ^ 0x9e3779b97f4a7c15ULL);
      Vec6 A, B, C;
      for (auto* v : {&A, &B, &C})
        for (auto& c : *v) c = rng.uniform(-1.0, 1.0);
      const Vec6 n = contract(nijenhuis_bracket(f), A, B);
      const Mat6 h = values_of(f.h);
      double lhs = 0.0;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) lhs += h[a][b] * n[a] * C[b];
      p.routes = std::abs(lhs - DOmega(f)(A, B, C));
      return p;
    });
    rec_.upper("structure.identity1", anchor, n_, max_of(res, [](auto& p) { return p.s.id1; }), 1e-9);
    rec_.upper("structure.identity2", anchor, n_, max_of(res, [](auto& p) { return p.s.id2; }), 1e-6);
    rec_.upper("structure.identity3", anchor, n_, max_of(res, [](auto& p) { return p.s.id3; }), 1e-6);
    rec_.upper("structure.identity4", anchor, n_, max_of(res, [](auto& p) { return p.s.id4; }), 1e-6);
    rec_.upper("structure.identity5", "mixed Nijenhuis component", n_,
               max_of(res, [](auto& p) { return p.s.id5; }), 1e-6);
    rec_.upper("structure.identity2_opposite_sign", anchor, n_,
               max_of(res, [](auto& p) { return p.s.id2_opposite_sign; }), 1e-6,
               "diagnostic: rho term with the opposite sign");
    rec_.upper("structure.horizontal_nijenhuis", "horizontal Nijenhuis component", n_,
               max_of(res, [](auto& p) { return p.s.horizontal_nijenhuis; }), 1e-6);
    rec_.upper("structure.horizontal_nijenhuis_opposite_sign", "horizontal Nijenhuis component",
               n_, max_of(res, [](auto& p) { return p.s.horizontal_nijenhuis_opposite_sign; }),
               1e-6, "diagnostic: curvature term with the opposite sign");
    rec_.upper("structure.nijenhuis_routes", "Nijenhuis tensor via D Omega", n_,
               max_of(res, [](auto& p) { return p.routes; }), 1e-6);
    const auto bad = sm_chart(0.1);
    const auto sp = bad.sample(n_, cfg_.seed);
    const auto r5 = map(n_, [&](int i) { return verify_structure_identities(bad, sp[i], point_seed(i)).id5; });
    rec_.upper("structure.identity5_modified", "mixed Nijenhuis component", n_,
               max_of(r5, [](double v) { return v; }), 1e-6, "non-holomorphic fiber map");
  }

  void balanced() {
    const std::string anchor = "balanced Omega_h";
    const auto tw = twistor_chart();
    const auto pts = tw.sample(n_, cfg_.seed);
    std::vector<std::string> weights{power_pole_text(0), power_pole_text(1), power_pole_text(2)};
    const std::string configured = cfg_.fiber.h ? *cfg_.fiber.h : power_pole_text(cfg_.fiber.p);
    if (std::find(weights.begin(), weights.end(), configured) == weights.end())
      weights.push_back(configured);
    auto run = [&](const std::string& h) {
      OmegaOptions opt;
      opt.h = Expression::parse(h);
      return map(n_, [&, opt](int i) { return balanced_at(tw, pts[i], opt, point_seed(i)); });
    };
    for (const auto& h : weights) {
      const auto res = run(h);
      const std::string tag = "[h=" + h + "]";
      const double d2 = max_of(res, [](auto& b) { return b.d_omega2; });
      const double ps = max_of(res, [](auto& b) { return b.proof_step; });
      if (scalar_flat_kahler(kind_)) {
        rec_.upper("balanced.d_omega2" + tag, anchor, n_, d2, 1e-7);
        rec_.upper("balanced.proof_step" + tag, anchor, n_, ps, 1e-7,
                   "d(e^h omega_FS) ^ pi^* omega");
      } else {
        rec_.lower("balanced.d_omega2_negative_control" + tag, anchor, n_, d2, 1e-3,
                   "base is not scalar-flat");
      }
      rec_.lower("balanced.positivity" + tag, "Hermitian positivity", n_,
                 min_of(res, [](auto& b) { return b.positivity; }), 0.0,
                 "min Omega(v, Jv) / h(v, v)");
    }
    const auto ctl = run("x1");
    rec_.lower("balanced.x_dependent_weight_negative_control", anchor, n_,
               max_of(ctl, [](auto& b) { return b.d_omega2; }), 1e-3, "weight e^{x1}");
  }

  void cone() {
    const std::string anchor = "cone of balanced metrics";
    const auto tw = twistor_chart();
    const auto pts = tw.sample(n_, cfg_.seed);
    std::vector<std::pair<double, double>> grid{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    const std::pair<double, double> conf{cfg_.fiber.a, cfg_.fiber.b};
    if (std::find(grid.begin(), grid.end(), conf) == grid.end()) grid.push_back(conf);
    double var1 = 0.0, var2 = 0.0, val1 = 0.0, val2 = 0.0, sc1 = 0.0, sc2 = 0.0;
    double ref1 = 0.0, ref2 = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto [a, b] = grid[g];
      const auto res = map(n_, [&, a = a, b = b](int i) { return cone_at(tw, pts[i], a, b); });
      double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
      for (const auto& c : res) {
        lo1 = std::min(lo1, c.c1);
        hi1 = std::max(hi1, c.c1);
        lo2 = std::min(lo2, c.c2);
        hi2 = std::max(hi2, c.c2);
        val1 = std::max(val1, std::abs(c.c1 / (2 * a * a) - 1));
        val2 = std::max(val2, std::abs(c.c2 / (4 * a * b) - 1));
      }
      var1 = std::max(var1, (hi1 - lo1) / std::abs(hi1));
      var2 = std::max(var2, (hi2 - lo2) / std::abs(hi2));
      const double s1 = res[0].c1 / (a * a), s2 = res[0].c2 / (a * b);
      if (g == 0) {
        ref1 = s1;
        ref2 = s2;
      }
      sc1 = std::max(sc1, std::abs(s1 / ref1 - 1));
      sc2 = std::max(sc2, std::abs(s2 / ref2 - 1));
    }
    const int pts_tested = n_ * static_cast<int>(grid.size());
    rec_.upper("cone.c1_constancy", anchor, pts_tested, var1, 1e-6, "relative variation");
    rec_.upper("cone.c2_constancy", anchor, pts_tested, var2, 1e-6, "relative variation");
    rec_.upper("cone.c1_scaling", anchor, pts_tested, sc1, 1e-9, "c1 / a^2 across the (a, b) grid");
    rec_.upper("cone.c2_scaling", anchor, pts_tested, sc2, 1e-9, "c2 / (a b) across the (a, b) grid");
    rec_.upper("cone.c1_value", anchor, pts_tested, val1, 1e-9, "c1 = 2 a^2");
    rec_.upper("cone.c2_value", anchor, pts_tested, val2, 1e-9, "c2 = 4 a b");
  }

  void fibermap() {
    const std::string anchor = "equivariant holomorphic fiber map";
    int reversed = 0;
    for (const char* name : {"sphere", "cylinder", "cosh"}) {
      const auto pr = make_profile(name);
      const auto rep = conformality_check(pr, solve_phi(pr, 0.0, 1, Branch::quadrature), n_);
      rec_.upper(std::string("fibermap.quadrature_conformality[") + name + "]", anchor,
                 rep.points_tested, rep.max_anisotropy, 1e-6);
      if (!rep.orientation_preserving) ++reversed;
    }
    rec_.upper("fibermap.quadrature_orientation", anchor, 3, reversed, 0.5,
               "profiles with a reversed orientation");
    {
      const auto pr = make_profile("sphere");
      const auto m = solve_phi(pr, 0.0, 1, Branch::alternate_closed_form);
      double dev = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double z = -0.99 + 1.98 * (i + 0.5) / n_;
        dev = std::max(dev, std::abs(m.value(z) - z));
      }
      rec_.upper("fibermap.sphere_alternate_identity", anchor, n_, dev, 1e-12, "max |phi(z) - z|");
    }
    for (const char* name : {"cylinder", "wide_cylinder"}) {
      const auto pr = make_profile(name);
      const auto m = solve_phi(pr, 0.0, 1, Branch::paper_closed_form);
      const auto rep = conformality_check(pr, m, n_);
      double slope = 0.0;
      for (const auto& s : rep.samples)
        if (!s.skipped) slope = std::max(slope, std::abs(s.dphi));
      rec_.upper(std::string("fibermap.paper_branch_degenerate[") + name + "]", anchor,
                 rep.points_tested, slope, 1e-12,
                 std::string(rep.degenerate_constant ? "degenerate constant map detected"
                                                     : "not flagged degenerate") +
                     ", phi = " + num(m.value(0.0)));
    }
    {
      const auto pr = make_profile("sphere");
      const double c1 = 0.3, c2 = 0.4;
      const auto m1 = solve_phi(pr, c1, 1, Branch::quadrature);
      const auto m12 = solve_phi(pr, c1 + c2, 1, Branch::quadrature);
      double dev = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double z = -0.95 + 1.9 * (i + 0.5) / n_;
        const double p = m1.value(z), t = std::tanh(c2);
        dev = std::max(dev, std::abs(m12.value(z) - (p + t) / (1 + p * t)));
      }
      rec_.upper("fibermap.mobius_closure", anchor, n_, dev, 1e-9);
    }
    {
      const auto pr = make_profile(cfg_.fiber.profile);
      const auto m = solve_phi(pr, cfg_.fiber.c, cfg_.fiber.sign, parse_branch(cfg_.fiber.branch));
      const auto rep = conformality_check(pr, m, n_);
      rec_.upper("fibermap.configured_conformality", anchor, rep.points_tested,
                 rep.degenerate_constant ? std::numeric_limits<double>::infinity() : rep.max_anisotropy,
                 1e-6,
                 cfg_.fiber.profile + ", " + cfg_.fiber.branch + ", c = " + num(cfg_.fiber.c) +
                     (rep.degenerate_constant ? ", degenerate constant map" : ""));
    }
  }

  // int_0^{pi/2} cos^{-p}: antiderivatives phi, log(sec + tan), tan for
  // p = 0, 1, 2; in general compare with int_0 t^{-p} dt at the pole.
  static bool oracle_complete(double p) { return p >= 1.0; }

  void completeness() {
    const std::string anchor = "completeness criterion";
    std::vector<double> grid{0.0, 0.5, 1.0, 1.1, 2.0};
    if (cfg_.fiber.h_family == "power_pole" &&
        std::find(grid.begin(), grid.end(), cfg_.fiber.p) == grid.end())
      grid.push_back(cfg_.fiber.p);
    int mismatches = 0, expr_mismatches = 0;
    double q_dev = 0.0;
    for (double p : grid) {
      const auto r = completeness_power_pole(p);
      const bool want = oracle_complete(p);
      if ((r.verdict == Completeness::complete) != want) ++mismatches;
      const auto e = completeness_expression(Expression::parse(power_pole_text(p)));
      q_dev = std::max({q_dev, std::abs(e.exponent_north - p), std::abs(e.exponent_south - p)});
      if (e.verdict != Completeness::inconclusive &&
          (e.verdict == Completeness::complete) != want)
        ++expr_mismatches;
      rep_.classifications.push_back({{"family", "power_pole"},
                                      {"p", p},
                                      {"verdict", completeness_name(r.verdict)},
                                      {"expression_verdict", completeness_name(e.verdict)},
                                      {"exponent_north", e.exponent_north},
                                      {"exponent_south", e.exponent_south}});
    }
    const int n = static_cast<int>(grid.size());
    rec_.upper("completeness.power_pole_verdicts", anchor, n, mismatches, 0.5,
               "disagreements with the antiderivative oracle");
    rec_.upper("completeness.expression_verdicts", anchor, n, expr_mismatches, 0.5,
               "fitted route; inconclusive allowed");
    rec_.upper("completeness.expression_exponent", anchor, n, q_dev, 1e-3,
               "fitted growth exponent vs p");
    if (cfg_.fiber.h) {
      const auto e = completeness_expression(Expression::parse(*cfg_.fiber.h));
      rep_.classifications.push_back({{"family", "expression"},
                                      {"h", *cfg_.fiber.h},
                                      {"verdict", completeness_name(e.verdict)},
                                      {"exponent_north", e.exponent_north},
                                      {"exponent_south", e.exponent_south}});
    }
  }

  const SuiteConfig& cfg_;
  Recorder rec_;
  VerificationReport& rep_;
  HermitianSurface base_;
  Kind kind_;
  int n_ = 0;
};

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigurationError(std::string("config key '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigurationError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigurationError("unknown config key '" + it.key() + "' in " + where);
  }
}

}  // namespace

std::vector<std::string> suite_names() {
  auto v = kSuites;
  v.push_back("all");
  return v;
}

SuiteConfig SuiteConfig::from_json(const json& j) {
  reject_unknown(j, {"metric", "params", "suite", "sample_count", "seed", "jet_order", "tol_tier",
                     "tolerances", "fiber", "execution"},
                 "config");
  SuiteConfig c;
  if (j.contains("metric")) c.metric = get<std::string>(j["metric"], "metric");
  if (j.contains("params")) c.params = get<FixtureParams>(j["params"], "params");
  if (j.contains("suite")) c.suite = get<std::string>(j["suite"], "suite");
  if (j.contains("sample_count")) c.sample_count = get<int>(j["sample_count"], "sample_count");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j["seed"], "seed");
  if (j.contains("jet_order")) c.jet_order = get<int>(j["jet_order"], "jet_order");
  if (j.contains("tol_tier")) c.tol_tier = get<std::string>(j["tol_tier"], "tol_tier");
  if (j.contains("tolerances"))
    c.tolerances = get<std::map<std::string, double>>(j["tolerances"], "tolerances");
  if (j.contains("execution")) {
    const auto e = get<std::string>(j["execution"], "execution");
    if (e == "serial") c.execution = Execution::serial;
    else if (e == "parallel") c.execution = Execution::parallel;
    else throw ConfigurationError("execution must be 'serial' or 'parallel'");
  }
  if (j.contains("fiber")) {
    const json& f = j["fiber"];
    reject_unknown(f, {"profile", "branch", "c", "sign", "h_family", "p", "h", "a", "b"}, "fiber");
    auto& o = c.fiber;
    if (f.contains("profile")) o.profile = get<std::string>(f["profile"], "fiber.profile");
    if (f.contains("branch")) o.branch = get<std::string>(f["branch"], "fiber.branch");
    if (f.contains("c")) o.c = get<double>(f["c"], "fiber.c");
    if (f.contains("sign")) o.sign = get<int>(f["sign"], "fiber.sign");
    if (f.contains("h_family")) o.h_family = get<std::string>(f["h_family"], "fiber.h_family");
    if (f.contains("p")) o.p = get<double>(f["p"], "fiber.p");
    if (f.contains("h")) o.h = get<std::string>(f["h"], "fiber.h");
    if (f.contains("a")) o.a = get<double>(f["a"], "fiber.a");
    if (f.contains("b")) o.b = get<double>(f["b"], "fiber.b");
  }
  return c;
}

json SuiteConfig::to_json() const {
  json f = {{"profile", fiber.profile}, {"branch", fiber.branch}, {"c", fiber.c},
            {"sign", fiber.sign},       {"h_family", fiber.h_family}, {"p", fiber.p},
            {"a", fiber.a},             {"b", fiber.b}};
  if (fiber.h) f["h"] = *fiber.h;
  return {{"metric", metric},
          {"params", params},
          {"suite", suite},
          {"sample_count", sample_count},
          {"seed", seed},
          {"jet_order", jet_order},
          {"tol_tier", tol_tier},
          {"tolerances", tolerances},
          {"fiber", f},
          {"execution", execution == Execution::serial ? "serial" : "parallel"}};
}

void SuiteConfig::validate() const {
  if (!is_known_fixture(metric)) throw UsageError("unknown metric '" + metric + "'");
  const auto suites = suite_names();
  if (std::find(suites.begin(), suites.end(), suite) == suites.end())
    throw UsageError("unknown suite '" + suite + "'");
  if (sample_count < 0) throw ConfigurationError("sample_count must be non-negative");
  if (jet_order != 4)
    throw ConfigurationError("jet_order: only 4 is supported (potential order; metric order 2)");
  if (tol_tier != "strict" && tol_tier != "loose")
    throw ConfigurationError("tol_tier must be 'strict' or 'loose'");
  const auto profiles = profile_names();
  if (std::find(profiles.begin(), profiles.end(), fiber.profile) == profiles.end())
    throw ConfigurationError("unknown fiber profile '" + fiber.profile + "'");
  parse_branch(fiber.branch);
  if (fiber.sign != 1 && fiber.sign != -1) throw ConfigurationError("fiber.sign must be +1 or -1");
  if (fiber.h_family != "power_pole") throw ConfigurationError("fiber.h_family must be power_pole");
  if (!(fiber.a > 0.0 && fiber.b > 0.0)) throw ConfigurationError("fiber.a and fiber.b must be positive");
  if (fiber.h) {
    try {
      const auto e = Expression::parse(*fiber.h);
      if (e.uses(Expression::alpha)) throw ConfigurationError("fiber.h must not depend on alpha");
    } catch (const InputError& err) {
      throw ConfigurationError(std::string("fiber.h: ") + err.what());
    }
  }
  make_fixture(metric, params);  // parameter validation
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.pass; });
}

const CheckRecord* VerificationReport::find(const std::string& id) const {
  for (const auto& r : checks)
    if (r.check_id == id) return &r;
  return nullptr;
}

json VerificationReport::to_json() const {
  json checks_j = json::array();
  for (const auto& r : checks) {
    auto value = [](double v) -> json {
      if (std::isfinite(v)) return v;
      return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    };
    json c = {{"check_id", r.check_id},
              {"anchor", r.anchor},
              {"points_tested", r.points_tested},
              {"max_residual", value(r.max_residual)},
              {"threshold", r.threshold},
              {"bound", r.upper ? "upper" : "lower"},
              {"pass", r.pass}};
    if (!r.note.empty()) c["note"] = r.note;
    checks_j.push_back(std::move(c));
  }
  json skipped_j = json::array();
  for (const auto& s : skipped) skipped_j.push_back({{"check_id", s.check_id}, {"reason", s.reason}});
  return {{"config", config.to_json()},
          {"environment", {{"seed", config.seed}, {"jet_order", config.jet_order}, {"version", kVersion}}},
          {"checks", checks_j},
          {"skipped", skipped_j},
          {"classifications", classifications},
          {"pass", pass()}};
}

std::string VerificationReport::dump() const { return to_json().dump(2) + "\n"; }

VerificationReport run_suite(const SuiteConfig& config) {
  config.validate();
  VerificationReport rep;
  rep.config = config;
  SuiteRunner runner(config, rep);
  if (config.suite == "all") {
    for (const auto& s : kSuites) runner.run(s);
  } else {
    runner.run(config.suite);
  }
  return rep;
}

}  // namespace tw
