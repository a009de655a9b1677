#pragma once

// Verification suites behind the command-line "verify" command. Each suite
// returns a deterministic JSON report and a pass flag.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgf/stencil.hpp"

namespace lgf {

struct VerifyOptions {
  int N = 30;                // residual1 grid size
  int samples = 50;          // oracle sample count
  std::uint64_t seed = 7;    // oracle sampling seed
  int threads = 1;
  int extent = 22;           // residual3 table extent
  int region = 16;           // residual3 region [0, region]^3
  std::vector<int> Ns{16, 32, 64, 128};  // one-unbounded convergence sizes
  std::vector<int> Ns_unbounded{16, 32};  // fully unbounded convergence sizes
};

struct SuiteReport {
  std::string suite;
  bool pass = false;
  std::vector<std::string> failures;
  nlohmann::json report;
};

/// Threshold on the one-unbounded residual for a stencil id.
double residual1_threshold(const std::string& id);

/// Adaptive Gauss-Kronrod evaluation of (1/pi) int_0^pi cos(n k) sigma_R / sigma_L dk.
double axial_quadrature_split(const SplitStencil& st, int n, double c, double tol = 1e-13);
double axial_quadrature_mehr(const MehrstellenPair& mp, int n, double y2, double y3, double tol = 1e-13);

SuiteReport verify_residual3(const VerifyOptions& opt);
SuiteReport verify_residual1(const VerifyOptions& opt);
SuiteReport verify_seams(const VerifyOptions& opt);
SuiteReport verify_oracle(const VerifyOptions& opt);
SuiteReport verify_convergence(const VerifyOptions& opt);

const std::vector<std::string>& suite_names();
/// Runs a suite by name; throws DomainError for unknown names.
SuiteReport run_suite(const std::string& name, const VerifyOptions& opt);

/// {"suite", "pass", "failures", "report"} with sorted keys.
nlohmann::json to_json(const SuiteReport& r);

}  // namespace lgf
