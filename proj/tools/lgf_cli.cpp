// Command-line front end: precompute | eval | verify | export-pack.

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "lgf/axial.hpp"
#include "lgf/free_space.hpp"
#include "lgf/series.hpp"
#include "lgf/verify.hpp"

using namespace lgf;

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << text;
}

struct Common {
  std::string stencil;
  int J = 10;
  double eps_a = 1e-15, eps_r = 1e-15;
  int threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--stencil", c.stencil, "stencil id (lgf2, lgf4, lgf6, lgf8, meh4, meh6)")->required();
  app->add_option("--J", c.J, "number of large-t series terms")->check(CLI::Range(1, 40));
  app->add_option("--eps-a", c.eps_a, "absolute tolerance")->check(CLI::PositiveNumber);
  app->add_option("--eps-r", c.eps_r, "relative tolerance")->check(CLI::PositiveNumber);
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 1024));
}

const SplitStencil& require_split(const std::string& id, const char* what) {
  if (is_mehrstellen_id(id))
    throw UsageError(std::string(what) + " for Mehrstellen stencils is out of scope: fully unbounded Mehrstellen tables "
                                         "bring no improvement over split stencils");
  if (!is_split_id(id)) throw UsageError("unknown stencil '" + id + "'");
  return split_stencil(id);
}

// ---------------------------------------------------------------------------

struct PrecomputeArgs {
  Common c;
  int dim = 3;
  int extent = 8;
  std::string out, csv;
  std::uint64_t timestamp = 0;
};

int cmd_precompute(const PrecomputeArgs& a) {
  const auto& st = require_split(a.c.stencil, "precompute");
  const auto t0 = std::chrono::steady_clock::now();
  IEvaluator ev(st, make_expansion_pack(st, a.c.J, std::max(12, a.extent), a.c.eps_a, a.c.eps_r));
  LgfTable t = build_table(ev, a.extent, a.dim, a.c.threads, a.timestamp);
  const std::string path =
      a.out.empty() ? a.c.stencil + "_" + std::to_string(a.dim) + "d_" + std::to_string(a.extent) + ".lgft" : a.out;
  write_table(t, path);
  if (!a.csv.empty()) write_text(a.csv, table_csv(t));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "entries " << t.values.size() << "\nN_evals " << t.values.size() << "\nwall_time_s " << std::fixed
            << std::setprecision(3) << secs << "\npath " << path << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  Common c;
  bool axial = false, free3d = false, free2d = false, stable = false;
  std::vector<int> n;
  std::optional<double> cpar, k2, k3, y2, y3;
  std::string batch, table;
};

std::vector<std::vector<int>> eval_points(const EvalArgs& a, std::size_t arity) {
  std::vector<std::vector<int>> pts;
  if (!a.batch.empty()) {
    std::ifstream is(a.batch);
    if (!is) throw UsageError("cannot read batch file '" + a.batch + "'");
    std::string line;
    while (std::getline(is, line)) {
      for (char& ch : line)
        if (ch == ',') ch = ' ';
      std::istringstream ls(line);
      std::vector<int> p;
      int v;
      while (ls >> v) p.push_back(v);
      if (p.empty()) continue;
      if (p.size() != arity) throw UsageError("batch line '" + line + "' needs " + std::to_string(arity) + " indices");
      pts.push_back(p);
    }
  } else {
    if (a.n.size() != arity) throw UsageError("--n needs " + std::to_string(arity) + " indices");
    pts.push_back(a.n);
  }
  return pts;
}

int cmd_eval(const EvalArgs& a) {
  const int modes = int(a.axial) + int(a.free3d) + int(a.free2d);
  if (modes != 1) throw UsageError("choose exactly one of --axial, --free3d, --free2d");
  std::vector<double> out;
  if (a.axial) {
    auto pts = eval_points(a, 1);
    const bool split = is_split_id(a.c.stencil);
    if (!split && !is_mehrstellen_id(a.c.stencil)) throw UsageError("unknown stencil '" + a.c.stencil + "'");
    auto y_of = [](double k) { return std::pow(std::sin(k / 2), 2); };
    double y2 = 0, y3 = 0;
    bool have_y = false;
    if (a.k2 || a.k3) {
      if (!(a.k2 && a.k3)) throw UsageError("--k2 and --k3 go together");
      y2 = y_of(*a.k2);
      y3 = y_of(*a.k3);
      have_y = true;
    } else if (a.y2 || a.y3) {
      if (!(a.y2 && a.y3)) throw UsageError("--y2 and --y3 go together");
      y2 = *a.y2;
      y3 = *a.y3;
      have_y = true;
    }
    if (split) {
      const auto& st = split_stencil(a.c.stencil);
      double c;
      if (a.cpar) {
        if (have_y) throw UsageError("give either --c or wavenumbers");
        c = *a.cpar;
      } else if (have_y) {
        c = split_symbol_y(st, y2) + split_symbol_y(st, y3);
      } else {
        throw UsageError("split axial evaluation needs --c or --k2/--k3");
      }
      AxialOptions opt{a.stable};
      for (const auto& p : pts) out.push_back(axial_eval_split(st, p[0], c, opt));
    } else {
      if (a.cpar) throw UsageError("Mehrstellen axial evaluation takes --k2/--k3 or --y2/--y3, not --c");
      if (!have_y) throw UsageError("Mehrstellen axial evaluation needs --k2/--k3 or --y2/--y3");
      for (const auto& p : pts) out.push_back(axial_eval_mehr(mehrstellen_pair(a.c.stencil), p[0], y2, y3));
    }
  } else {
    const std::size_t dim = a.free3d ? 3 : 2;
    auto pts = eval_points(a, dim);
    if (!a.table.empty()) {
      LgfTable t = read_table(a.table);
      if (t.dimension != static_cast<int>(dim)) throw UsageError("table dimension does not match the mode");
      for (const auto& p : pts) out.push_back(t.lookup(p));
    } else {
      const auto& st = require_split(a.c.stencil, "free-space evaluation");
      int nmax = 12;
      for (const auto& p : pts)
        for (int v : p) nmax = std::max(nmax, std::abs(v));
      IEvaluator ev(st, make_expansion_pack(st, a.c.J, nmax, a.c.eps_a, a.c.eps_r));
      if (dim == 3) {
        std::vector<Index3> idx;
        for (const auto& p : pts) idx.push_back({p[0], p[1], p[2]});
        out = lgf3_eval_many(ev, idx);
      } else {
        std::vector<Index2> idx;
        for (const auto& p : pts) idx.push_back({p[0], p[1]});
        out = lgf2_eval_many(ev, idx);
      }
    }
  }
  for (double v : out) std::cout << format17(v) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  VerifyOptions opt;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  SuiteReport r = run_suite(a.suite, a.opt);
  const std::string text = to_json(r).dump(2) + "\n";
  if (!a.out.empty()) write_text(a.out, text);
  std::cout << text;
  if (!r.pass) {
    for (const auto& f : r.failures) std::cerr << "FAIL " << f << '\n';
    return kExitVerify;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ExportArgs {
  Common c;
  std::string kind = "expansion";
  int n_max = 12;
  int N = 8, rows = 0;
  std::string out;
};

int cmd_export(const ExportArgs& a) {
  std::string text;
  if (a.kind == "expansion") {
    const auto& st = require_split(a.c.stencil, "expansion packs");
    text = to_json(make_expansion_pack(st, a.c.J, a.n_max, a.c.eps_a, a.c.eps_r)).dump(2) + "\n";
  } else if (a.kind == "taylor") {
    if (a.c.stencil != "lgf4" && a.c.stencil != "lgf8") throw UsageError("no repeated root for stencil " + a.c.stencil);
    text = to_json(taylor_pack(split_stencil(a.c.stencil))).dump(2) + "\n";
  } else {
    if (!is_split_id(a.c.stencil) && !is_mehrstellen_id(a.c.stencil))
      throw UsageError("unknown stencil '" + a.c.stencil + "'");
    text = spectral_csv(a.c.stencil, a.N, a.rows > 0 ? a.rows : a.N);
  }
  if (a.out.empty())
    std::cout << text;
  else
    write_text(a.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice Green's function toolkit"};
  app.require_subcommand(1);

  PrecomputeArgs pre;
  auto* p = app.add_subcommand("precompute", "build a free-space LGF table");
  add_common(p, pre.c);
  p->add_option("--dim", pre.dim, "2 or 3")->check(CLI::IsMember({2, 3}));
  p->add_option("--extent", pre.extent, "box extent")->check(CLI::Range(0, 4096));
  p->add_option("--out", pre.out, "output table path");
  p->add_option("--csv", pre.csv, "also write a CSV export");
  p->add_option("--timestamp", pre.timestamp, "header timestamp in seconds (0 = unset)");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "evaluate LGF values");
  add_common(e, ev.c);
  e->add_flag("--axial", ev.axial, "one unbounded direction, closed forms");
  e->add_flag("--free3d", ev.free3d, "fully unbounded, 3D");
  e->add_flag("--free2d", ev.free2d, "fully unbounded, 2D relative");
  e->add_flag("--stable-small-c", ev.stable, "full-precision path for 0 < c < 1e-3");
  e->add_option("--n", ev.n, "lattice index (1, 2 or 3 integers)")->allow_extra_args(false)->expected(1, 3);
  e->add_option("--c", ev.cpar, "split parameter c");
  e->add_option("--k2", ev.k2, "wavenumber along axis 2");
  e->add_option("--k3", ev.k3, "wavenumber along axis 3");
  e->add_option("--y2", ev.y2, "sin^2(k2/2)");
  e->add_option("--y3", ev.y3, "sin^2(k3/2)");
  e->add_option("--batch", ev.batch, "file of index tuples, one per line");
  e->add_option("--table", ev.table, "look values up in a precomputed table");

  VerifyArgs va;
  auto* v = app.add_subcommand("verify", "run a verification suite");
  v->add_option("suite", va.suite, "residual3 | residual1 | seams | oracle | convergence")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  v->add_option("--N", va.opt.N, "grid size for residual1")->check(CLI::Range(2, 4096));
  v->add_option("--samples", va.opt.samples, "oracle sample count")->check(CLI::Range(1, 100000));
  v->add_option("--seed", va.opt.seed, "oracle seed");
  v->add_option("--threads", va.opt.threads, "worker threads")->check(CLI::Range(1, 1024));
  v->add_option("--extent", va.opt.extent, "residual3 table extent")->check(CLI::Range(1, 4096));
  v->add_option("--region", va.opt.region, "residual3 region")->check(CLI::Range(0, 4096));
  v->add_option("--sizes", va.opt.Ns, "one-unbounded convergence sizes");
  v->add_option("--sizes-unbounded", va.opt.Ns_unbounded, "fully unbounded convergence sizes");
  v->add_option("--out", va.out, "also write the JSON report here");
  va.opt.threads = std::max(1u, std::thread::hardware_concurrency());

  ExportArgs ex;
  auto* x = app.add_subcommand("export-pack", "export expansion, Taylor or spectral data");
  add_common(x, ex.c);
  x->add_option("--kind", ex.kind, "expansion | taylor | spectral")->check(CLI::IsMember({"expansion", "taylor", "spectral"}));
  x->add_option("--n-max", ex.n_max, "largest index of the expansion pack")->check(CLI::Range(0, 4096));
  x->add_option("--N", ex.N, "spectral grid size")->check(CLI::Range(2, 4096));
  x->add_option("--rows", ex.rows, "spectral rows along the unbounded axis");
  x->add_option("--out", ex.out, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }
  try {
    if (*p) return cmd_precompute(pre);
    if (*e) return cmd_eval(ev);
    if (*v) return cmd_verify(va);
    if (*x) return cmd_export(ex);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
