#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tauhedge/rational.hpp"

namespace tauhedge {

// A partition of {0,...,n-1} into nonempty disjoint blocks covering everything.
// Blocks are kept in canonical order (sorted by smallest member) so that atom
// enumeration is deterministic.
class Partition {
 public:
  Partition() = default;
  Partition(int n_outcomes, std::vector<std::vector<int>> blocks);

  int n_outcomes() const { return n_outcomes_; }
  int n_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int b) const { return blocks_[b]; }
  int block_of(int outcome) const { return block_of_[outcome]; }

  // True if every block of *this lies inside a single block of `coarser`.
  bool refines(const Partition& coarser) const;

  static Partition trivial(int n_outcomes);
  static Partition singletons(int n_outcomes);

 private:
  int n_outcomes_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

using Filtration = std::vector<Partition>;  // one partition per time 0..T

// Finite outcome set with strictly positive rational base weights and a
// refining sequence of partitions.
struct FilteredSpace {
  std::vector<std::string> outcome_ids;
  std::vector<Rat> prob;  // base weights, all > 0, sum exactly 1
  int horizon = 0;        // T
  Filtration filtration;  // T+1 partitions, filtration[t+1] refines filtration[t]

  int n_outcomes() const { return static_cast<int>(outcome_ids.size()); }
  const Partition& at(int t) const { return filtration[t]; }

  // Validates all invariants; throws std::invalid_argument naming the problem.
  static FilteredSpace create(std::vector<std::string> outcome_ids, std::vector<Rat> prob,
                              Filtration filtration);
};

// Random variable with one extended-rational value per outcome.
struct RandVar {
  std::vector<XRat> v;

  RandVar() = default;
  explicit RandVar(int n) : v(n) {}
  RandVar(std::vector<XRat> values) : v(std::move(values)) {}

  int size() const { return static_cast<int>(v.size()); }
  const XRat& operator[](int i) const { return v[i]; }
  XRat& operator[](int i) { return v[i]; }

  bool all_finite() const;
  bool is_measurable(const Partition& part) const;

  static RandVar constant(int n, const XRat& c);
  // 1 on the given outcomes, 0 elsewhere.
  static RandVar indicator(int n, std::span<const int> outcomes);

  RandVar positive_part() const;
  RandVar negative_part() const;

  friend RandVar operator+(const RandVar& a, const RandVar& b);
  friend RandVar operator-(const RandVar& a, const RandVar& b);
  friend RandVar operator*(const RandVar& a, const RandVar& b);
  friend RandVar operator-(const RandVar& a);
  friend bool operator==(const RandVar& a, const RandVar& b) { return a.v == b.v; }
};

// Smallest t with X measurable w.r.t. filtration[t]; nullopt if not even at T.
std::optional<int> measurable_level(const RandVar& x, const Filtration& filtration);

// Probability measure on the same outcome set, absolutely continuous w.r.t.
// the base: weights >= 0 summing to 1, optional density Z against base_prob.
struct Measure {
  std::vector<Rat> w;
  std::optional<RandVar> density;

  int size() const { return static_cast<int>(w.size()); }

  static Measure base(const FilteredSpace& space);
  // Builds Z * base_prob; validates that the weights sum to 1.
  static Measure from_density(const FilteredSpace& space, const RandVar& z);

  Rat block_mass(const std::vector<int>& block) const;
};

// Value plus per-outcome definedness. Operations that condition on a mu-null
// block return a masked sentinel there: the value slot holds 0 but must never
// be compared; reads through get() throw on masked entries.
struct MaskedVar {
  RandVar value;
  std::vector<bool> defined;

  MaskedVar() = default;
  explicit MaskedVar(int n) : value(n), defined(n, true) {}
  MaskedVar(RandVar v, std::vector<bool> d) : value(std::move(v)), defined(std::move(d)) {}
  static MaskedVar all_defined(RandVar v);

  int size() const { return value.size(); }
  bool is_defined(int i) const { return defined[i]; }
  bool all_defined_everywhere() const;
  const XRat& get(int i) const {
    if (!defined[i]) throw std::domain_error("MaskedVar: read of masked (mu-null) entry");
    return value[i];
  }
  // Product with a finite factor under the convention masked * 0 = 0; a masked
  // entry met with a nonzero factor is a logic error.
  XRat get_times(int i, const XRat& factor) const;
};

// Adapted process: one RandVar per time 0..T.
using Process = std::vector<RandVar>;

bool is_adapted(const Process& x, const Filtration& filtration);

// E[X_t | F_{t-1}] == X_{t-1} for every t >= 1, exactly, on mu-positive blocks.
bool is_martingale(const Process& x, const Filtration& filtration, const Measure& mu);

// E[X | part] under mu. X must be finite-valued. On blocks with mu-mass zero
// the result is 0 and the mask flags the block as mu-null.
MaskedVar cond_expect(const RandVar& x, const Partition& part, const Measure& mu);

// Blockwise max of the family over mu-positive outcomes; the conditional
// essential supremum on a finite space. Masked on mu-null blocks.
MaskedVar cond_esssup(std::span<const RandVar> family, const Partition& part, const Measure& mu);
MaskedVar cond_essinf(std::span<const RandVar> family, const Partition& part, const Measure& mu);

// Singleton-family conveniences.
MaskedVar cond_esssup(const RandVar& x, const Partition& part, const Measure& mu);
MaskedVar cond_essinf(const RandVar& x, const Partition& part, const Measure& mu);

}  // namespace tauhedge
