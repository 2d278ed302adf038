#pragma once

#include <cstdint>
#include <random>

#include "tauhedge/model_io.hpp"

namespace tauhedge {

enum class TauRegime { Independent, Correlated, WithDeadzone, ZIdentity };

std::string regime_name(TauRegime r);
TauRegime regime_from_name(const std::string& name);

struct GenConfig {
  std::uint64_t seed = 1;
  int max_outcomes = 16;
  int max_T = 3;
  int max_d = 2;
  int denom_bound = 12;
  TauRegime regime = TauRegime::Correlated;
  bool force_aip_tilde = false;  // redraw prices until (Stilde, F, Qtilde) satisfies AIP
  bool nonneg_claims = false;
  bool with_claim = true;
};

// Deterministic per seed. Regime postconditions are verified on the output;
// if a regime is unreachable under the bounds, throws after bounded retries.
ModelFile gen_model(const GenConfig& cfg);

// Deterministic helpers shared with the verification driver.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  // uniform in [lo, hi], inclusive
  int pick(int lo, int hi) {
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(int num = 1, int den = 2) { return pick(1, den) <= num; }
  Rat small_rat(int denom_bound, int max_abs_num, bool allow_negative) {
    int den = pick(1, denom_bound);
    int num = pick(allow_negative ? -max_abs_num : 0, max_abs_num);
    return Rat(num, den);
  }

 private:
  std::mt19937_64 eng_;
};

// Random F-adapted process with increments of both signs; used for generic
// price-process sweeps.
Process gen_adapted_process(Rng& rng, const FilteredSpace& space, bool nonneg, int denom_bound);

}  // namespace tauhedge
