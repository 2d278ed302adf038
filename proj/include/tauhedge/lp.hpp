#pragma once

#include <optional>
#include <vector>

#include "tauhedge/rational.hpp"

namespace tauhedge {

enum class LPStatus { Optimal, Unbounded, Infeasible };

// min c.x  subject to  A x >= b,  x free. Exact rational simplex, Bland's
// anti-cycling rule, ties broken by lowest index.
struct GeneralLP {
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  std::vector<Rat> c;
};

struct GeneralLPResult {
  LPStatus status = LPStatus::Infeasible;
  Rat value;
  std::vector<Rat> x;    // optimal point when Optimal
  std::vector<Rat> ray;  // when Unbounded: A.ray >= 0 componentwise and c.ray < 0
};

GeneralLPResult solve_general(const GeneralLP& lp);

// One-period super-hedging subproblem on one atom:
//   min over theta in R^d of max_j (payoff_j - theta . exposure_j).
struct MinimaxInstance {
  struct Row {
    Rat payoff;
    std::vector<Rat> exposure;  // length d
  };
  int d = 0;
  std::vector<Row> rows;
};

struct LPOutcome {
  XRat value;
  std::optional<std::vector<Rat>> argmin;       // theta* when bounded
  std::optional<std::vector<Rat>> certificate;  // w with w.exposure_j > 0 for all j when -inf
};

// Always feasible in the epigraph form; value is finite or -inf. Both the
// optimum and the unboundedness certificate are re-verified by substitution.
LPOutcome minimax(const MinimaxInstance& inst);

struct HullResult {
  bool contains_zero = false;
  std::vector<Rat> weights;    // convex weights with sum 1 reproducing 0
  std::vector<Rat> separator;  // x with x . v_j > 0 for every j otherwise
};

// Does 0 lie in the convex hull of the given d-vectors?
HullResult hull_contains_zero(const std::vector<std::vector<Rat>>& vectors);

}  // namespace tauhedge
