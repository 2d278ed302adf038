#include "tauhedge/market.hpp"

namespace tauhedge {

Process stopped(const Process& x, const RandomTime& tau) {
  Process out(x.size());
  for (size_t t = 0; t < x.size(); ++t) {
    out[t] = RandVar(x[t].size());
    for (int w = 0; w < x[t].size(); ++w)
      out[t][w] = x[std::min<size_t>(t, tau.value[w])][w];
  }
  return out;
}

PriceSystem build_derived(const FilteredSpace& space, const AzemaPair& az, const RandomTime& tau,
                          const std::vector<Process>& S) {
  const int n = space.n_outcomes();
  const int T = space.horizon;
  PriceSystem ps;
  ps.d = static_cast<int>(S.size());
  ps.S = S;
  for (int a = 0; a < ps.d; ++a) {
    if (static_cast<int>(S[a].size()) != T + 1) throw std::invalid_argument("prices: length mismatch");
    if (!is_adapted(S[a], space.filtration)) throw std::invalid_argument("prices: S not F-adapted");
    for (int t = 0; t <= T; ++t)
      for (int w = 0; w < n; ++w)
        if (S[a][t][w] < XRat(0)) throw std::invalid_argument("prices: negative asset price");
  }
  ps.Sbar.resize(ps.d);
  ps.Stilde.resize(ps.d);
  ps.Stau.resize(ps.d);
  for (int a = 0; a < ps.d; ++a) {
    ps.Sbar[a].assign(T + 1, RandVar(n));
    ps.Stilde[a].assign(T + 1, RandVar(n));
    ps.Sbar[a][0] = S[a][0];
    ps.Stilde[a][0] = S[a][0];
    for (int t = 1; t <= T; ++t) {
      RandVar dS = S[a][t] - S[a][t - 1];
      for (int w = 0; w < n; ++w) {
        ps.Sbar[a][t][w] = ps.Sbar[a][t - 1][w] +
                           (az.Gtilde[t][w] > XRat(0) ? dS[w] : XRat(0));
        ps.Stilde[a][t][w] = ps.Stilde[a][t - 1][w] +
                             (az.G[t - 1][w] > XRat(0) ? dS[w] : XRat(0));
      }
    }
    ps.Stau[a] = stopped(S[a], tau);
    // composition identity: Sbar_t = S_0 + sum 1{Gtilde_s>0} dStilde_s
    RandVar acc = S[a][0];
    for (int t = 1; t <= T; ++t) {
      RandVar dSt = ps.Stilde[a][t] - ps.Stilde[a][t - 1];
      for (int w = 0; w < n; ++w) {
        if (az.Gtilde[t][w] > XRat(0)) acc[w] += dSt[w];
        if (!(acc[w] == ps.Sbar[a][t][w]))
          throw std::logic_error("prices: Sbar composition identity failed");
      }
    }
  }
  return ps;
}

static void check_lengths(const Process& a, const Process& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("process length mismatch");
}

Process sint(const Process& h, const Process& x) {
  check_lengths(h, x);
  const int n = x[0].size();
  Process out(x.size());
  out[0] = RandVar::constant(n, XRat(0));
  for (size_t t = 1; t < x.size(); ++t) out[t] = out[t - 1] + h[t] * (x[t] - x[t - 1]);
  return out;
}

Process bracket(const Process& x, const Process& y) {
  check_lengths(x, y);
  const int n = x[0].size();
  Process out(x.size());
  out[0] = RandVar::constant(n, XRat(0));
  for (size_t t = 1; t < x.size(); ++t)
    out[t] = out[t - 1] + (x[t] - x[t - 1]) * (y[t] - y[t - 1]);
  return out;
}

Process angle(const Process& x, const Process& y, const FilteredSpace& space) {
  check_lengths(x, y);
  Measure P = Measure::base(space);
  const int n = x[0].size();
  Process out(x.size());
  out[0] = RandVar::constant(n, XRat(0));
  for (size_t t = 1; t < x.size(); ++t)
    out[t] = out[t - 1] +
             cond_expect((x[t] - x[t - 1]) * (y[t] - y[t - 1]), space.at(static_cast<int>(t) - 1), P).value;
  return out;
}

Process pred_proj(const Process& x, const FilteredSpace& space) {
  Measure P = Measure::base(space);
  Process out(x.size());
  out[0] = x[0];
  for (size_t t = 1; t < x.size(); ++t)
    out[t] = cond_expect(x[t], space.at(static_cast<int>(t) - 1), P).value;
  return out;
}

}  // namespace tauhedge
