#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tauhedge/gen.hpp"

namespace tauhedge {

struct VerifyResult {
  long checks = 0;
  long nontrivial_z = 0;  // instances with a nontrivial {Z = 0} (esssup suite)
  std::vector<std::string> failures;
  std::vector<std::string> lines;

  bool ok() const { return failures.empty(); }
  void merge(const VerifyResult& other);
};

// Fixture models (canonical serialized form, shipped in fixtures/ as well).
const std::string& fixture_m1_json();
const std::string& fixture_m2_json();
const std::string& fixture_m3_json();

// Bundled hand-derived fixture regressions; runs regardless of model count.
VerifyResult suite_fixtures();

// Change-of-prior/filtration laws, tower/positive-part/indicator lemmas, the
// Qtilde corollaries, the G-vs-F theorem, and the esssup-to-expectation
// identity on randomized instances.
VerifyResult suite_esssup(int instances, std::uint64_t seed, int threads);

// AIP equivalences across the three models, the no-jump corollary, the
// counterexample constructions, and the predictable-AIP lemma.
VerifyResult suite_aip(int models, int predictable, std::uint64_t seed, int threads);

// Universal preservation: stopping preserves AIP on z_identity horizons;
// the constructed counterexample violates it on deadzone horizons.
VerifyResult suite_preservation(int z_models, int procs_each, int deadzone_models,
                                std::uint64_t seed, int threads);

// One-step three-way equality for the four claim classes.
VerifyResult suite_onestep(int models, std::uint64_t seed, int threads);

// Backward pricing vs global LP oracle, and the G-price shape
// Keff_tau 1{tau<=t} + F_t 1{tau>t} for every class.
VerifyResult suite_multistep(int models, std::uint64_t seed, int threads);

// Telescoping decompositions, martingale checks, and the two pathwise
// identities on randomized (M, V).
VerifyResult suite_decomp(int models, int gmart_pairs, std::uint64_t seed, int threads);

// Vulnerable options: simplified max-form recursions, the class-3 dominance,
// and the nonnegativity lemma.
VerifyResult suite_options(int models, std::uint64_t seed, int threads);

struct VerifyOptions {
  std::string suite = "all";  // esssup|aip|onestep|multistep|decomp|options|all
  int models = 60;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: TAUHEDGE_THREADS env var, else hardware concurrency
};

VerifyResult run_verify(const VerifyOptions& opt);

int resolve_threads(int requested);

}  // namespace tauhedge
