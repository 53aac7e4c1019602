#pragma once

#include <string>
#include <vector>

#include "cbflab/model.hpp"

namespace cbflab::verify {

/// Knobs for the oracle cross-check suite. Everything is seeded; the
/// suite is deterministic for fixed options.
struct SuiteOptions {
  unsigned seed = 7;
  int n_states = 10000;    // random states for the filter-vs-QP check
  int n_scenarios = 100;   // scenarios per corpus class
  int n_ellipses = 30;     // ellipse scenarios for the reduction round trip
  int scan_samples = 1024; // starting angular resolution of the boundary scan
};

struct CheckResult {
  std::string name;
  bool pass = false;
  int count = 0;       // units exercised
  int failures = 0;
  double worst = 0.0;  // worst deviation observed, in the check's own metric
  std::string note;
};

/// Closed-form filter vs the bordered-KKT reference QP (tolerance 1e-8).
CheckResult filter_vs_qp(const SuiteOptions& options);

/// Analytic equilibrium sets vs brute-force boundary scans, multiset match
/// within 1e-6, across all corpus classes (both actuations, eigenvector
/// centers, complex spectra, ellipses).
CheckResult equilibria_vs_scan(const SuiteOptions& options);

/// Left-eigenvector identity J^T grad_h = -alpha0 grad_h (relative residual
/// 1e-8) and invariance of the second eigenvalue under alpha0 -> 10 alpha0.
CheckResult jacobian_identities(const SuiteOptions& options);

/// Ellipse scenarios: equilibria of the transported-weighting reduction
/// map back through E^-1 onto the direct brute-force set (1e-6), with
/// Jacobian spectra preserved (1e-9).
CheckResult reduction_roundtrip(const SuiteOptions& options);

/// Count claims: single-input corpora have exactly one undesirable
/// equilibrium (a saddle); invertible-B corpora have 1..3 plus at least
/// one positive-indicator candidate, and for real spectra away from the
/// eigenvector case some indicator below lambda1 / 2.
CheckResult count_claims(const SuiteOptions& options);

std::vector<CheckResult> run_all(const SuiteOptions& options);

}  // namespace cbflab::verify
