#include "tauhedge/horizon.hpp"

#include <map>

namespace tauhedge {

RandomTime RandomTime::validated(std::vector<int> v, int horizon) {
  for (int t : v)
    if (t != kNever && (t < 0 || t > horizon))
      throw std::invalid_argument("random time: value outside {0..T, inf}");
  return RandomTime{std::move(v)};
}

static RandVar alive_indicator(const RandomTime& tau, int t, bool strict) {
  RandVar r(tau.size());
  for (int w = 0; w < tau.size(); ++w)
    r[w] = XRat((strict ? tau.survives(w, t) : tau.alive_at(w, t)) ? 1 : 0);
  return r;
}

AzemaPair azema(const FilteredSpace& space, const RandomTime& tau) {
  Measure P = Measure::base(space);
  AzemaPair az;
  az.G.resize(space.horizon + 1);
  az.Gtilde.resize(space.horizon + 1);
  for (int t = 0; t <= space.horizon; ++t) {
    az.G[t] = cond_expect(alive_indicator(tau, t, /*strict=*/true), space.at(t), P).value;
    az.Gtilde[t] = cond_expect(alive_indicator(tau, t, /*strict=*/false), space.at(t), P).value;
    for (int w = 0; w < space.n_outcomes(); ++w)
      if (az.G[t][w] > az.Gtilde[t][w] || az.Gtilde[t][w] > XRat(1) || az.G[t][w] < XRat(0))
        throw std::logic_error("azema: 0 <= G <= Gtilde <= 1 violated");
  }
  return az;
}

Filtration enlarge(const FilteredSpace& space, const RandomTime& tau) {
  Filtration g(space.horizon + 1);
  for (int t = 0; t <= space.horizon; ++t) {
    std::vector<std::vector<int>> blocks;
    for (const auto& blk : space.at(t).blocks()) {
      // key: tau value if <= t, else "still alive" bucket
      std::map<int, std::vector<int>> split;
      for (int w : blk) {
        int key = tau.occurs_by(w, t) ? tau.value[w] : -1;
        split[key].push_back(w);
      }
      for (auto& [key, ws] : split) blocks.push_back(std::move(ws));
    }
    g[t] = Partition(space.n_outcomes(), std::move(blocks));
    if (!g[t].refines(space.at(t))) throw std::logic_error("enlarge: does not refine F");
    if (t > 0 && !g[t].refines(g[t - 1])) throw std::logic_error("enlarge: not refining in t");
  }
  return g;
}

RandVar reduce(const FilteredSpace& space, const Filtration& enlarged, const RandomTime& tau,
               const RandVar& x, int t) {
  if (t < 1 || t > space.horizon) throw std::invalid_argument("reduce: t out of range");
  if (!x.is_measurable(enlarged[t - 1]))
    throw std::invalid_argument("reduce: input not measurable w.r.t. G_{t-1}");
  RandVar out(space.n_outcomes());
  for (const auto& blk : space.at(t - 1).blocks()) {
    XRat val(0);
    for (int w : blk)
      if (tau.alive_at(w, t)) {
        // B n {tau >= t} is a single G_{t-1} block, so x is constant there.
        val = x[w];
        break;
      }
    for (int w : blk) out[w] = val;
  }
  return out;
}

Deflator deflator(const FilteredSpace& space, const AzemaPair& az) {
  Measure P = Measure::base(space);
  const int n = space.n_outcomes();
  Deflator d;
  d.ZF.resize(space.horizon + 1);
  d.ZF[0] = RandVar::constant(n, XRat(1));
  for (int s = 1; s <= space.horizon; ++s) {
    RandVar pos(n);
    for (int w = 0; w < n; ++w) pos[w] = XRat(az.Gtilde[s][w] > XRat(0) ? 1 : 0);
    RandVar p = cond_expect(pos, space.at(s - 1), P).value;
    RandVar factor(n);
    for (int w = 0; w < n; ++w) {
      XRat term(0);
      if (pos[w] == XRat(1)) {
        if (p[w].sign() == 0)
          throw std::logic_error("deflator: P(Gtilde_s>0|F_{s-1}) = 0 on {Gtilde_s>0}");
        term = XRat(Rat(1) / p[w].rat());
      }
      if (az.G[s - 1][w].sign() == 0) term += XRat(1);
      factor[w] = term;
    }
    d.ZF[s] = d.ZF[s - 1] * factor;
  }
  if (!is_martingale(d.ZF, space.filtration, P))
    throw std::logic_error("deflator: Z^F is not an F-martingale");
  d.tildeQ = Measure::from_density(space, d.ZF[space.horizon]);
  return d;
}

HazardTriplet hazard(const FilteredSpace& space, const RandomTime& tau, const AzemaPair& az) {
  Measure P = Measure::base(space);
  const int n = space.n_outcomes();
  const int T = space.horizon;
  HazardTriplet h;
  h.m.assign(T + 1, RandVar(n));
  h.NG.assign(T + 1, RandVar(n));
  h.DoF.assign(T + 1, RandVar(n));

  // d_s = P(tau = s | F_s)
  Process d(T + 1);
  for (int s = 0; s <= T; ++s) {
    RandVar at_s(n);
    for (int w = 0; w < n; ++w) at_s[w] = XRat(tau.value[w] == s ? 1 : 0);
    d[s] = cond_expect(at_s, space.at(s), P).value;
  }

  h.m[0] = RandVar::constant(n, XRat(1));
  h.DoF[0] = d[0];
  for (int w = 0; w < n; ++w) h.NG[0][w] = XRat(tau.value[w] == 0 ? 1 : 0);

  for (int t = 1; t <= T; ++t) {
    RandVar drift = cond_expect(az.Gtilde[t], space.at(t - 1), P).value;
    h.m[t] = h.m[t - 1] + az.Gtilde[t] - drift;
    h.DoF[t] = h.DoF[t - 1] + d[t];
    for (int w = 0; w < n; ++w) {
      XRat acc(0);
      for (int s = 1; s <= std::min(t, tau.value[w]); ++s) {
        if (az.Gtilde[s][w].sign() == 0)
          throw std::logic_error("hazard: Gtilde_s = 0 on {tau >= s}");
        acc += XRat(d[s][w].rat() / az.Gtilde[s][w].rat());
      }
      h.NG[t][w] = XRat(tau.occurs_by(w, t) ? 1 : 0) - acc;
    }
  }

  // reconstruction convention: 1{tau<=t} = NG_t + sum_{s<=t^tau} dDoF_s / Gtilde_s
  for (int t = 0; t <= T; ++t)
    for (int w = 0; w < n; ++w) {
      XRat acc(0);
      for (int s = 1; s <= std::min(t, tau.value[w]); ++s)
        acc += XRat((d[s][w].rat()) / az.Gtilde[s][w].rat());
      if (!(h.NG[t][w] + acc == XRat(tau.occurs_by(w, t) ? 1 : 0)))
        throw std::logic_error("hazard: default-indicator reconstruction identity failed");
    }
  return h;
}

Process transform_T(const FilteredSpace& space, const RandomTime& tau, const AzemaPair& az,
                    const Process& M) {
  Measure P = Measure::base(space);
  const int n = space.n_outcomes();
  const int T = space.horizon;
  if (static_cast<int>(M.size()) != T + 1) throw std::invalid_argument("transform_T: length mismatch");
  Process out(T + 1, RandVar(n));
  out[0] = RandVar::constant(n, XRat(0));
  for (int u = 1; u <= T; ++u) {
    RandVar dM = M[u] - M[u - 1];
    RandVar dead_part(n);  // 1{Gtilde_u = 0} dM_u
    for (int w = 0; w < n; ++w)
      dead_part[w] = az.Gtilde[u][w].sign() == 0 ? dM[w] : XRat(0);
    RandVar comp = cond_expect(dead_part, space.at(u - 1), P).value;
    for (int w = 0; w < n; ++w) {
      out[u][w] = out[u - 1][w];
      if (!tau.alive_at(w, u)) continue;  // increments only on [[1, tau]]
      out[u][w] += XRat(az.G[u - 1][w].rat() / az.Gtilde[u][w].rat()) * dM[w] + comp[w];
    }
  }
  return out;
}

}  // namespace tauhedge
