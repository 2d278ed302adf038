#include "tauhedge/lp.hpp"

#include <algorithm>

namespace tauhedge {
namespace {

// Dense exact simplex on standard form: min c.y s.t. E y = f, y >= 0.
// Phase I with artificials, Phase II with Bland's rule throughout.
class StandardSimplex {
 public:
  StandardSimplex(std::vector<std::vector<Rat>> E, std::vector<Rat> f, std::vector<Rat> c)
      : E_(std::move(E)), f_(std::move(f)), c_(std::move(c)) {
    m_ = static_cast<int>(E_.size());
    n_ = m_ > 0 ? static_cast<int>(E_[0].size()) : static_cast<int>(c_.size());
  }

  LPStatus solve() {
    build_phase1();
    run(/*phase1=*/true);
    if (obj_rhs_ != 0) return LPStatus::Infeasible;
    purge_artificials();
    build_objective(c_);
    bool bounded = run(/*phase1=*/false);
    return bounded ? LPStatus::Optimal : LPStatus::Unbounded;
  }

  Rat objective() const { return -obj_rhs_; }

  std::vector<Rat> solution() const {
    std::vector<Rat> y(n_, Rat(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) y[basis_[i]] = tab_[i][ncols_];
    return y;
  }

  // Improving ray from the column that certified unboundedness.
  std::vector<Rat> ray() const {
    std::vector<Rat> r(n_, Rat(0));
    r[ray_col_] = 1;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) r[basis_[i]] = -tab_[i][ray_col_];
    return r;
  }

 private:
  void build_phase1() {
    ncols_ = n_ + m_;  // structurals + one artificial per row
    tab_.assign(m_, std::vector<Rat>(ncols_ + 1, Rat(0)));
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      int sign = f_[i] < 0 ? -1 : 1;
      for (int j = 0; j < n_; ++j) tab_[i][j] = sign * E_[i][j];
      tab_[i][ncols_] = sign * f_[i];
      tab_[i][n_ + i] = 1;
      basis_[i] = n_ + i;
    }
    std::vector<Rat> phase1_cost(ncols_, Rat(0));
    for (int i = 0; i < m_; ++i) phase1_cost[n_ + i] = 1;
    build_objective(phase1_cost);
  }

  // obj_row_[j] = c_j - c_B . (B^-1 A)_j; obj_rhs_ = -c_B . (B^-1 f)
  void build_objective(const std::vector<Rat>& cost) {
    obj_row_.assign(ncols_, Rat(0));
    obj_rhs_ = 0;
    for (int j = 0; j < ncols_; ++j) obj_row_[j] = j < static_cast<int>(cost.size()) ? cost[j] : Rat(0);
    for (int i = 0; i < m_; ++i) {
      const Rat& cb = basis_[i] < static_cast<int>(cost.size()) ? cost[basis_[i]] : kZero;
      if (cb == 0) continue;
      for (int j = 0; j < ncols_; ++j) obj_row_[j] -= cb * tab_[i][j];
      obj_rhs_ -= cb * tab_[i][ncols_];
    }
  }

  void pivot(int row, int col) {
    Rat inv = Rat(1) / tab_[row][col];
    for (int j = 0; j <= ncols_; ++j) tab_[row][j] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == row || tab_[i][col] == 0) continue;
      Rat factor = tab_[i][col];
      for (int j = 0; j <= ncols_; ++j) tab_[i][j] -= factor * tab_[row][j];
    }
    if (obj_row_[col] != 0) {
      Rat factor = obj_row_[col];
      for (int j = 0; j < ncols_; ++j) obj_row_[j] -= factor * tab_[row][j];
      obj_rhs_ -= factor * tab_[row][ncols_];
    }
    basis_[row] = col;
  }

  // Returns false when unbounded (ray_col_ set). In phase 2 the artificial
  // columns are excluded from entering.
  bool run(bool phase1) {
    const int limit = phase1 ? ncols_ : n_;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (obj_row_[j] < 0) {
          enter = j;
          break;
        }
      if (enter == -1) return true;
      int leave = -1;
      Rat best_ratio;
      for (int i = 0; i < m_; ++i) {
        if (tab_[i][enter] <= 0) continue;
        Rat ratio = tab_[i][ncols_] / tab_[i][enter];
        if (leave == -1 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == -1) {
        ray_col_ = enter;
        return false;
      }
      pivot(leave, enter);
    }
  }

  // After phase 1 at value 0, drive any artificial still basic (at level 0)
  // out of the basis, or drop its row as redundant.
  void purge_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j)
        if (tab_[i][j] != 0) {
          col = j;
          break;
        }
      if (col != -1) {
        pivot(i, col);
      } else {
        // redundant constraint row
        tab_.erase(tab_.begin() + i);
        basis_.erase(basis_.begin() + i);
        --m_;
        --i;
      }
    }
  }

  inline static const Rat kZero{0};

  std::vector<std::vector<Rat>> E_;
  std::vector<Rat> f_;
  std::vector<Rat> c_;
  int m_ = 0, n_ = 0, ncols_ = 0;
  std::vector<std::vector<Rat>> tab_;
  std::vector<Rat> obj_row_;
  Rat obj_rhs_;
  std::vector<int> basis_;
  int ray_col_ = -1;
};

}  // namespace

GeneralLPResult solve_general(const GeneralLP& lp) {
  const int m = static_cast<int>(lp.A.size());
  const int nx = static_cast<int>(lp.c.size());
  // x = u - v with u,v >= 0; A x - s = b with slack s >= 0.
  std::vector<std::vector<Rat>> E(m, std::vector<Rat>(2 * nx + m, Rat(0)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nx; ++j) {
      E[i][j] = lp.A[i][j];
      E[i][nx + j] = -lp.A[i][j];
    }
    E[i][2 * nx + i] = -1;
  }
  std::vector<Rat> cost(2 * nx + m, Rat(0));
  for (int j = 0; j < nx; ++j) {
    cost[j] = lp.c[j];
    cost[nx + j] = -lp.c[j];
  }
  StandardSimplex solver(std::move(E), lp.b, std::move(cost));
  GeneralLPResult res;
  res.status = solver.solve();
  if (res.status == LPStatus::Optimal) {
    res.value = solver.objective();
    auto y = solver.solution();
    res.x.resize(nx);
    for (int j = 0; j < nx; ++j) res.x[j] = y[j] - y[nx + j];
  } else if (res.status == LPStatus::Unbounded) {
    auto y = solver.ray();
    res.ray.resize(nx);
    for (int j = 0; j < nx; ++j) res.ray[j] = y[j] - y[nx + j];
  }
  return res;
}

static Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

LPOutcome minimax(const MinimaxInstance& inst) {
  if (inst.rows.empty()) throw std::invalid_argument("minimax: no rows");
  for (const auto& row : inst.rows)
    if (static_cast<int>(row.exposure.size()) != inst.d)
      throw std::invalid_argument("minimax: exposure dimension mismatch");

  // epigraph: min z s.t. z + theta.a_j >= c_j over (z, theta)
  GeneralLP lp;
  lp.c.assign(inst.d + 1, Rat(0));
  lp.c[0] = 1;
  for (const auto& row : inst.rows) {
    std::vector<Rat> arow(inst.d + 1);
    arow[0] = 1;
    for (int k = 0; k < inst.d; ++k) arow[k + 1] = row.exposure[k];
    lp.A.push_back(std::move(arow));
    lp.b.push_back(row.payoff);
  }
  GeneralLPResult r = solve_general(lp);
  LPOutcome out;
  if (r.status == LPStatus::Optimal) {
    std::vector<Rat> theta(r.x.begin() + 1, r.x.end());
    Rat check = inst.rows[0].payoff - dot(theta, inst.rows[0].exposure);
    for (const auto& row : inst.rows) check = std::max(check, row.payoff - dot(theta, row.exposure));
    if (check != r.value) throw std::logic_error("minimax: optimum failed substitution check");
    out.value = XRat(r.value);
    out.argmin = std::move(theta);
  } else if (r.status == LPStatus::Unbounded) {
    std::vector<Rat> w(r.ray.begin() + 1, r.ray.end());
    for (const auto& row : inst.rows)
      if (dot(w, row.exposure) <= 0)
        throw std::logic_error("minimax: certificate failed substitution check");
    out.value = XRat::neg_inf();
    out.certificate = std::move(w);
  } else {
    throw std::logic_error("minimax: epigraph LP reported infeasible");
  }
  return out;
}

HullResult hull_contains_zero(const std::vector<std::vector<Rat>>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("hull_contains_zero: empty list");
  const int d = static_cast<int>(vectors[0].size());
  const int k = static_cast<int>(vectors.size());
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != d) throw std::invalid_argument("hull: dimension mismatch");

  // feasibility of { lambda >= 0, sum lambda = 1, sum lambda v = 0 }
  std::vector<std::vector<Rat>> E(d + 1, std::vector<Rat>(k, Rat(0)));
  std::vector<Rat> f(d + 1, Rat(0));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < d; ++i) E[i][j] = vectors[j][i];
    E[d][j] = 1;
  }
  f[d] = 1;
  StandardSimplex feas(E, f, std::vector<Rat>(k, Rat(0)));
  HullResult out;
  if (feas.solve() == LPStatus::Optimal) {
    out.contains_zero = true;
    out.weights = feas.solution();
    Rat total(0);
    std::vector<Rat> combo(d, Rat(0));
    for (int j = 0; j < k; ++j) {
      if (out.weights[j] < 0) throw std::logic_error("hull: negative weight");
      total += out.weights[j];
      for (int i = 0; i < d; ++i) combo[i] += out.weights[j] * vectors[j][i];
    }
    if (total != 1 || std::any_of(combo.begin(), combo.end(), [](const Rat& q) { return q != 0; }))
      throw std::logic_error("hull: weights failed substitution check");
    return out;
  }

  // separated: reuse the minimax route, whose ray gives w with w.v_j > 0
  MinimaxInstance inst;
  inst.d = d;
  for (const auto& v : vectors) inst.rows.push_back({Rat(0), v});
  LPOutcome mm = minimax(inst);
  if (!mm.certificate)
    throw std::logic_error("hull: infeasible weights but bounded support LP");
  out.contains_zero = false;
  out.separator = *mm.certificate;
  return out;
}

}  // namespace tauhedge
