#include "lgf/verify.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "lgf/axial.hpp"
#include "lgf/free_space.hpp"
#include "lgf/poisson.hpp"
#include "lgf/quadrature.hpp"
#include "lgf/series.hpp"

namespace lgf {

namespace {

const double kPi = std::acos(-1.0);

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

SuiteReport finish(std::string name, nlohmann::json report, std::vector<std::string> failures) {
  SuiteReport r;
  r.suite = std::move(name);
  r.pass = failures.empty();
  r.failures = std::move(failures);
  r.report = std::move(report);
  return r;
}

std::vector<double> quad_breaks(int n) {
  std::vector<double> b{1e-4, 1e-3, 1e-2, 0.1};
  for (int j = 1; j <= n; ++j) b.push_back(j * kPi / (n + 1));
  std::sort(b.begin(), b.end());
  return b;
}

// Parameters covering every split regime.
std::vector<double> regime_parameters(const SplitStencil& st) {
  const double hi = 2 * to_double(st.sigma_max);
  std::vector<double> cs{0.0, 5e-4, 0.5, hi / 2, hi};
  if (st.id == "lgf4" || st.id == "lgf8") {
    const double cs_star = locate_c_star(st);
    for (double d : {-1e-3, -5e-6, 5e-6, 1e-3}) cs.push_back(cs_star + d);
  }
  std::sort(cs.begin(), cs.end());
  return cs;
}

double split_recurrence(const SplitStencil& st, double c, int nmax) {
  auto G = axial_eval_split_range(st, c, nmax + st.width + 1);
  double worst = 0;
  for (int n = 0; n <= nmax; ++n) {
    long double r = c * static_cast<long double>(G[n]);
    for (int j = -st.width; j <= st.width; ++j) r += static_cast<long double>(st.a_double(j)) * G[std::abs(n + j)];
    if (n == 0) r -= 1;
    worst = std::max(worst, static_cast<double>(std::abs(r)));
  }
  return worst;
}

double mehr_recurrence(const std::string& id, double y2, double y3, int nmax) {
  const auto ch = axial_characteristic(id);
  const std::array<double, 2> y{y2, y3};
  auto G = axial_eval_mehr_range(mehrstellen_pair(id), y2, y3, nmax + ch.w_L + 1);
  double worst = 0;
  for (int n = 0; n <= nmax; ++n) {
    long double r = 0;
    for (int j = -ch.w_L; j <= ch.w_L; ++j) r += static_cast<long double>(ch.a[std::abs(j)].eval(y)) * G[std::abs(n + j)];
    if (n <= ch.w_R) r -= ch.b[n].eval(y);
    worst = std::max(worst, static_cast<double>(std::abs(r)));
  }
  return worst;
}

double split_or_mehr_order(const std::string& id) {
  return is_split_id(id) ? split_stencil(id).order : mehrstellen_pair(id).order;
}

}  // namespace

double residual1_threshold(const std::string& id) {
  if (id == "meh4") return 1.5e-13;
  if (id == "meh6") return 2e-14;
  return 5e-15;
}

double axial_quadrature_split(const SplitStencil& st, int n, double c, double tol) {
  auto f = [&](double k) {
    const long double s = split_symbol(st, static_cast<long double>(k));
    return static_cast<double>(std::cos(static_cast<long double>(n) * k) / (s + c));
  };
  return integrate_1d(f, 0, kPi, tol, tol, quad_breaks(n), 50000).value / kPi;
}

double axial_quadrature_mehr(const MehrstellenPair& mp, int n, double y2, double y3, double tol) {
  auto f = [&](double k) {
    const double s = std::sin(k / 2);
    auto [sl, sr] = mehr_symbols(mp, {s * s, y2, y3});
    return std::cos(n * k) * sr / sl;
  };
  return integrate_1d(f, 0, kPi, tol, tol, quad_breaks(n), 50000).value / kPi;
}

SuiteReport verify_residual3(const VerifyOptions& opt) {
  nlohmann::json rep = nlohmann::json::object();
  std::vector<std::string> fails;
  for (const auto& id : split_ids()) {
    const auto& st = split_stencil(id);
    const int need = opt.region + st.width;
    if (need > opt.extent)
      throw DomainError("region " + std::to_string(opt.region) + " needs table extent " + std::to_string(need));
    IEvaluator ev(st, make_expansion_pack(st, 10, std::max(12, opt.extent), 1e-15, 1e-15));
    LgfTable t = build_table(ev, opt.extent, 3, opt.threads);
    ResidualReport r = residual_3unb(t, opt.region);
    nlohmann::json j = to_json(r);
    j["threshold"] = 5e-14;
    rep[id] = j;
    if (!(r.R_max <= 5e-14)) fails.push_back(id + ": R_max " + fmt(r.R_max) + " > 5e-14");
  }
  return finish("residual3", rep, fails);
}

SuiteReport verify_residual1(const VerifyOptions& opt) {
  nlohmann::json rep = nlohmann::json::object();
  std::vector<std::string> fails;
  std::vector<std::string> ids = split_ids();
  for (const auto& m : mehrstellen_ids()) ids.push_back(m);
  for (const auto& id : ids) {
    ResidualReport r = residual_1unb(id, opt.N, opt.threads);
    nlohmann::json j = to_json(r);
    const double thr = residual1_threshold(id);
    j["threshold"] = thr;
    rep[id] = j;
    if (!(r.R_max <= thr)) fails.push_back(id + ": R_max " + fmt(r.R_max) + " > " + fmt(thr));
  }
  nlohmann::json out;
  out["N"] = opt.N;
  out["stencils"] = rep;
  return finish("residual1", out, fails);
}

SuiteReport verify_seams(const VerifyOptions&) {
  nlohmann::json rep = nlohmann::json::object();
  std::vector<std::string> fails;
  // Taylor expansion against the factorized form near c*.
  for (const std::string id : {"lgf4", "lgf8"}) {
    const auto& st = split_stencil(id);
    const auto& tp = taylor_pack(st);
    double worst = 0;
    for (double d : {-1e-4, -1e-5, -1e-6, 1e-6, 1e-5, 1e-4})
      for (int n = 0; n <= 50; ++n)
        worst = std::max(worst, std::abs(taylor_eval(tp, n, d) - axial_eval_split_factorized(st, n, tp.c_star + d)));
    rep["taylor_vs_factorized"][id] = worst;
    if (!(worst <= 1e-12)) fails.push_back(id + ": Taylor vs factorized " + fmt(worst));
  }
  // Left and right of every regime boundary.
  for (const auto& id : split_ids()) {
    const auto& st = split_stencil(id);
    std::vector<double> seams{kSmallC};
    if (id == "lgf4" || id == "lgf8") {
      const double cs = taylor_pack(st).c_star;
      seams.push_back(cs - kTaylorWindow);
      seams.push_back(cs + kTaylorWindow);
    }
    double worst = 0;
    for (double c : seams) {
      auto a = axial_eval_split_range(st, std::nextafter(c, 0.0), 101);
      auto b = axial_eval_split_range(st, std::nextafter(c, 10.0), 101);
      for (int n = 0; n <= 100; ++n)
        if (b[n] != 0) worst = std::max(worst, std::abs(a[n] - b[n]) / std::abs(b[n]));
    }
    rep["seam_relative"][id] = worst;
    if (!(worst <= 1e-12)) fails.push_back(id + ": seam jump " + fmt(worst));
  }
  // Defining recurrence in every regime.
  for (const auto& id : split_ids()) {
    const auto& st = split_stencil(id);
    double worst = 0;
    for (double c : regime_parameters(st)) worst = std::max(worst, split_recurrence(st, c, 60));
    rep["recurrence"][id] = worst;
    if (!(worst <= 1e-13)) fails.push_back(id + ": recurrence " + fmt(worst));
  }
  for (const auto& id : mehrstellen_ids()) {
    double worst = 0;
    for (auto [y2, y3] : std::vector<std::pair<double, double>>{{0, 0}, {1e-6, 0}, {0.3, 0.6}, {0.75, 0.75}, {1, 1}})
      worst = std::max(worst, mehr_recurrence(id, y2, y3, 60));
    rep["recurrence"][id] = worst;
    if (!(worst <= 1e-13)) fails.push_back(id + ": recurrence " + fmt(worst));
  }
  return finish("seams", rep, fails);
}

SuiteReport verify_oracle(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::vector<std::string> ids = split_ids();
  for (const auto& m : mehrstellen_ids()) ids.push_back(m);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::string> fails;
  nlohmann::json cases = nlohmann::json::array();
  double worst_abs = 0;
  for (int i = 0; i < opt.samples; ++i) {
    const std::string id = ids[rng() % ids.size()];
    const int n = static_cast<int>(rng() % 41);
    double g, ref;
    nlohmann::json param;
    if (is_split_id(id)) {
      const auto& st = split_stencil(id);
      const double c = unit(rng) * 2 * to_double(st.sigma_max);
      g = axial_eval_split(st, n, c);
      ref = c > 0 ? axial_quadrature_split(st, n, c) : g;
      param = {{"c", c}};
    } else {
      const double y2 = unit(rng), y3 = unit(rng);
      g = axial_eval_mehr(mehrstellen_pair(id), n, y2, y3);
      ref = axial_quadrature_mehr(mehrstellen_pair(id), n, y2, y3);
      param = {{"y2", y2}, {"y3", y3}};
    }
    const double err = std::abs(g - ref);
    worst_abs = std::max(worst_abs, err);
    const bool ok = err <= 1e-12 || err <= 1e-11 * std::abs(ref);
    cases.push_back({{"stencil", id}, {"n", n}, {"param", param}, {"value", g}, {"oracle", ref}, {"ok", ok}});
    if (!ok) fails.push_back(id + " n=" + std::to_string(n) + ": error " + fmt(err));
  }
  nlohmann::json rep;
  rep["seed"] = opt.seed;
  rep["samples"] = opt.samples;
  rep["max_abs_error"] = worst_abs;
  rep["cases"] = cases;
  return finish("oracle", rep, fails);
}

SuiteReport verify_convergence(const VerifyOptions& opt) {
  std::vector<std::string> fails;
  nlohmann::json rep;
  auto run = [&](const std::vector<std::string>& ids, DomainKind kind, const std::vector<int>& Ns, double tol,
                 const char* key) {
    auto rows = convergence_study(ids, kind, Ns, opt.threads);
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      nlohmann::json j{{"stencil", r.stencil}, {"N", r.N}, {"eps_inf", r.eps_inf}};
      if (!std::isnan(r.order)) j["order"] = r.order;
      arr.push_back(j);
      const bool last = i + 1 == rows.size() || rows[i + 1].stencil != r.stencil;
      if (last && !std::isnan(r.order)) {
        const double expected = split_or_mehr_order(r.stencil);
        if (!(std::abs(r.order - expected) <= tol))
          fails.push_back(std::string(key) + " " + r.stencil + ": order " + fmt(r.order) + " expected " +
                          std::to_string(static_cast<int>(expected)));
      }
    }
    rep[key] = arr;
  };
  if (!opt.Ns.empty()) run({"lgf2", "lgf4", "meh4", "lgf6", "meh6"}, DomainKind::one_unbounded, opt.Ns, 0.5, "one_unbounded");
  if (!opt.Ns_unbounded.empty()) run({"lgf2", "lgf4"}, DomainKind::fully_unbounded, opt.Ns_unbounded, 0.6, "fully_unbounded");
  return finish("convergence", rep, fails);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"residual3", "residual1", "seams", "oracle", "convergence"};
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& opt) {
  if (name == "residual3") return verify_residual3(opt);
  if (name == "residual1") return verify_residual1(opt);
  if (name == "seams") return verify_seams(opt);
  if (name == "oracle") return verify_oracle(opt);
  if (name == "convergence") return verify_convergence(opt);
  throw DomainError("unknown suite '" + name + "'");
}

nlohmann::json to_json(const SuiteReport& r) {
  return {{"suite", r.suite}, {"pass", r.pass}, {"failures", r.failures}, {"report", r.report}};
}

}  // namespace lgf
