#include <doctest.h>

#include "tauhedge/gen.hpp"
#include "tauhedge/lp.hpp"

using namespace tauhedge;

namespace {

// Independent oracle for the minimax value by LP duality: the dual feasible
// set { lambda >= 0, sum lambda = 1, sum lambda a_j = 0 } is a polytope inside
// the simplex, so the optimum max lambda.c is attained at a vertex, whose
// support solves a square full-rank system of size <= d+1. Enumerate all
// supports, solve exactly by Gaussian elimination, keep feasible solutions.
// No feasible lambda at all <=> the primal is unbounded (-inf).
std::optional<std::vector<Rat>> solve_square(std::vector<std::vector<Rat>> a,
                                             std::vector<Rat> b) {
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(a[0].size());
  int rank = 0;
  std::vector<int> pivot_col;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int p = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c] != 0) {
        p = r;
        break;
      }
    if (p == -1) return std::nullopt;  // rank-deficient: not a vertex support
    std::swap(a[p], a[rank]);
    std::swap(b[p], b[rank]);
    Rat inv = Rat(1) / a[rank][c];
    for (int j = 0; j < cols; ++j) a[rank][j] *= inv;
    b[rank] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rat f = a[r][c];
      for (int j = 0; j < cols; ++j) a[r][j] -= f * a[rank][j];
      b[r] -= f * b[rank];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (b[r] != 0) return std::nullopt;  // inconsistent
  std::vector<Rat> x(cols, Rat(0));
  for (int r = 0; r < rank; ++r) x[pivot_col[r]] = b[r];
  return x;
}

XRat oracle_minimax(const MinimaxInstance& inst) {
  const int d = inst.d;
  const int k = static_cast<int>(inst.rows.size());
  std::optional<Rat> best;
  std::vector<int> support;
  std::function<void()> visit = [&] {
    if (!support.empty()) {
      int s = static_cast<int>(support.size());
      // rows of the system: sum lambda = 1 and sum lambda a_j = 0
      std::vector<std::vector<Rat>> a(d + 1, std::vector<Rat>(s, Rat(0)));
      std::vector<Rat> b(d + 1, Rat(0));
      for (int j = 0; j < s; ++j) {
        a[0][j] = 1;
        for (int i = 0; i < d; ++i) a[i + 1][j] = inst.rows[support[j]].exposure[i];
      }
      b[0] = 1;
      if (auto lambda = solve_square(a, b)) {
        bool nonneg = true;
        Rat value(0);
        for (int j = 0; j < s; ++j) {
          if ((*lambda)[j] < 0) nonneg = false;
          value += (*lambda)[j] * inst.rows[support[j]].payoff;
        }
        if (nonneg && (!best || value > *best)) best = value;
      }
    }
  };
  // all supports of size <= d+1
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    visit();
    if (remaining == 0) return;
    for (int j = start; j < k; ++j) {
      support.push_back(j);
      rec(j + 1, remaining - 1);
      support.pop_back();
    }
  };
  rec(0, d + 1);
  return best ? XRat(*best) : XRat::neg_inf();
}

bool oracle_hull(const std::vector<std::vector<Rat>>& vectors) {
  MinimaxInstance inst;
  inst.d = static_cast<int>(vectors[0].size());
  for (const auto& v : vectors) inst.rows.push_back({Rat(0), v});
  return !oracle_minimax(inst).is_neg_inf();
}

MinimaxInstance inst1(std::vector<std::pair<Rat, Rat>> rows) {
  MinimaxInstance inst;
  inst.d = 1;
  for (auto& [c, a] : rows) inst.rows.push_back({c, {a}});
  return inst;
}

}  // namespace

TEST_CASE("minimax: hand-worked instances") {
  LPOutcome out = minimax(inst1({{Rat(1), Rat(1)}, {Rat(0), Rat(-1, 2)}}));
  CHECK(out.value == XRat(Rat(1, 3)));
  REQUIRE(out.argmin);
  CHECK((*out.argmin)[0] == Rat(2, 3));

  out = minimax(inst1({{Rat(0), Rat(1)}, {Rat(0), Rat(-1)}}));
  CHECK(out.value == XRat(0));
  CHECK((*out.argmin)[0] == Rat(0));

  out = minimax(inst1({{Rat(0), Rat(1)}, {Rat(0), Rat(2)}}));
  CHECK(out.value.is_neg_inf());
  REQUIRE(out.certificate);
  CHECK((*out.certificate)[0] > 0);
}

TEST_CASE("hull membership: hand-worked instances") {
  HullResult h = hull_contains_zero({{Rat(1)}, {Rat(-1)}});
  CHECK(h.contains_zero);
  CHECK(h.weights[0] == Rat(1, 2));
  CHECK(h.weights[1] == Rat(1, 2));

  h = hull_contains_zero({{Rat(1)}, {Rat(2)}});
  CHECK_FALSE(h.contains_zero);
  CHECK(h.separator[0] > 0);  // x.v_j > 0 for all j

  h = hull_contains_zero({{Rat(0)}});
  CHECK(h.contains_zero);
  CHECK(h.weights[0] == Rat(1));
}

TEST_CASE("general LP solves simple programs") {
  GeneralLP lp;  // min x s.t. x >= 3
  lp.A = {{Rat(1)}};
  lp.b = {Rat(3)};
  lp.c = {Rat(1)};
  GeneralLPResult r = solve_general(lp);
  CHECK(r.status == LPStatus::Optimal);
  CHECK(r.value == Rat(3));

  lp.c = {Rat(-1)};  // now unbounded upward in x
  r = solve_general(lp);
  CHECK(r.status == LPStatus::Unbounded);
  CHECK(r.ray[0] > 0);
}

TEST_CASE("minimax and hull agree with the dual enumeration oracle") {
  Rng rng(4242);
  for (int it = 0; it < 400; ++it) {
    MinimaxInstance inst;
    inst.d = rng.pick(1, 2);
    int k = rng.pick(1, 6);
    for (int j = 0; j < k; ++j) {
      MinimaxInstance::Row row;
      row.payoff = rng.small_rat(4, 3, true);
      for (int i = 0; i < inst.d; ++i) row.exposure.push_back(rng.small_rat(3, 2, true));
      inst.rows.push_back(std::move(row));
    }
    LPOutcome out = minimax(inst);
    XRat want = oracle_minimax(inst);
    CHECK(out.value == want);

    std::vector<std::vector<Rat>> vecs;
    for (const auto& row : inst.rows) vecs.push_back(row.exposure);
    HullResult h = hull_contains_zero(vecs);
    CHECK(h.contains_zero == oracle_hull(vecs));

    // duality link: zero payoffs price to 0 iff 0 is in the exposure hull
    MinimaxInstance zero = inst;
    for (auto& row : zero.rows) row.payoff = 0;
    LPOutcome zout = minimax(zero);
    if (h.contains_zero) CHECK(zout.value == XRat(0));
    else CHECK(zout.value.is_neg_inf());

    // certificates re-verify by substitution
    if (h.contains_zero) {
      Rat total(0);
      std::vector<Rat> combo(inst.d, Rat(0));
      for (size_t j = 0; j < vecs.size(); ++j) {
        total += h.weights[j];
        for (int i = 0; i < inst.d; ++i) combo[i] += h.weights[j] * vecs[j][i];
      }
      CHECK(total == Rat(1));
      for (const Rat& c : combo) CHECK(c == Rat(0));
    } else {
      for (const auto& v : vecs) {
        Rat dot(0);
        for (int i = 0; i < inst.d; ++i) dot += h.separator[i] * v[i];
        CHECK(dot > 0);
      }
    }
  }
}
