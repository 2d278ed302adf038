#include "tauhedge/decomp.hpp"

namespace tauhedge {

Process zero_fill(const std::vector<MaskedVar>& x) {
  Process out(x.size());
  for (size_t t = 0; t < x.size(); ++t) {
    out[t] = RandVar(x[t].size());
    for (int w = 0; w < x[t].size(); ++w)
      out[t][w] = x[t].defined[w] ? x[t].value[w] : XRat(0);
  }
  return out;
}

// sum_{s<=t} weight(s, w) * dx_s(w), where terms with dx_s(w) == 0 are skipped
// before the weight is evaluated (the weight may divide by G_{s-1} or
// Gtilde_s, which are positive wherever the increment is nonzero).
template <typename WeightFn>
static Process weighted_sint(const Process& x, WeightFn weight) {
  const int n = x[0].size();
  Process out(x.size());
  out[0] = RandVar::constant(n, XRat(0));
  for (size_t s = 1; s < x.size(); ++s) {
    out[s] = out[s - 1];
    for (int w = 0; w < n; ++w) {
      XRat dx = x[s][w] - x[s - 1][w];
      if (dx.sign() == 0) continue;
      out[s][w] += weight(static_cast<int>(s), w) * dx;
    }
  }
  return out;
}

Quadruplet quadruplet(ClaimClass cls, const Process& price_F, const Process& K,
                      const FilteredSpace& space, const AzemaPair& az, const HazardTriplet& hz) {
  Measure P = Measure::base(space);
  const int n = space.n_outcomes();
  const int T = space.horizon;
  const bool survival = (cls == ClaimClass::SurvivalStrict || cls == ClaimClass::SurvivalIncl);

  Quadruplet q;
  q.M.assign(T + 1, RandVar::constant(n, XRat(0)));
  q.A.assign(T + 1, RandVar::constant(n, XRat(0)));
  q.Vtilde.assign(T + 1, RandVar::constant(n, XRat(0)));
  q.N.assign(T + 1, RandVar::constant(n, XRat(0)));
  q.Nbar.assign(T + 1, RandVar::constant(n, XRat(0)));
  q.xi.assign(T + 1, RandVar(n));
  q.xi[0] = price_F[0];

  for (int s = 1; s <= T; ++s) {
    RandVar pred = cond_expect(price_F[s], space.at(s - 1), P).value;
    q.xi[s] = pred;
    q.M[s] = q.M[s - 1] + price_F[s] - pred;
    q.A[s] = q.A[s - 1] + pred - price_F[s - 1];

    // survival classes: dVtilde = E[price (Gtilde - G) | F_{s-1}];
    // recovery classes: dVtilde = E[(K - price)(Gtilde - G) | F_{s-1}]
    RandVar weightand(n);
    for (int w = 0; w < n; ++w) {
      XRat gap = az.Gtilde[s][w] - az.G[s][w];
      weightand[w] = (survival ? price_F[s][w] : K[s][w] - price_F[s][w]) * gap;
    }
    q.Vtilde[s] = q.Vtilde[s - 1] + cond_expect(weightand, space.at(s - 1), P).value;

    // dN = integrand dDoF - dVtilde, integrand = price (survival) or K - price
    RandVar dDoF = hz.DoF[s] - hz.DoF[s - 1];
    RandVar integrand(n);
    for (int w = 0; w < n; ++w)
      integrand[w] = survival ? price_F[s][w] : K[s][w] - price_F[s][w];
    q.N[s] = q.N[s - 1] + integrand * dDoF - (q.Vtilde[s] - q.Vtilde[s - 1]);

    // dNbar = (price Gtilde - E[price Gtilde | F_{s-1}]) - G_{s-1} dM - xi dm
    RandVar pg = price_F[s] * az.Gtilde[s];
    RandVar pg_pred = cond_expect(pg, space.at(s - 1), P).value;
    RandVar dm = hz.m[s] - hz.m[s - 1];
    RandVar dM = q.M[s] - q.M[s - 1];
    for (int w = 0; w < n; ++w)
      q.Nbar[s][w] = q.Nbar[s - 1][w] + pg[w] - pg_pred[w] - az.G[s - 1][w] * dM[w] -
                     q.xi[s][w] * dm[w];
  }

  for (int t = 0; t <= T; ++t)
    for (int w = 0; w < n; ++w)
      if (!(price_F[0][w] + q.M[t][w] + q.A[t][w] == price_F[t][w]))
        throw std::logic_error("quadruplet: price != price_0 + M + A");
  if (!is_martingale(q.M, space.filtration, P))
    throw std::logic_error("quadruplet: M is not an F-martingale");
  for (int s = 1; s <= T; ++s)
    if (!(q.A[s] - q.A[s - 1]).is_measurable(space.at(s - 1)))
      throw std::logic_error("quadruplet: A is not predictable");
  return q;
}

DecompositionReport decompose(ClaimClass cls, bool survival_alt_flow_sign,
                              const FilteredSpace& space, const RandomTime& tau,
                              const AzemaPair& az, const HazardTriplet& hz,
                              const Process& price_F, const Process& recovery_used,
                              const Process& price_G) {
  Measure P = Measure::base(space);
  const int n = space.n_outcomes();
  const int T = space.horizon;
  const bool survival = (cls == ClaimClass::SurvivalStrict || cls == ClaimClass::SurvivalIncl);
  const Process& K = recovery_used;

  // internal machinery always in the recovery form (K - price); the survival
  // class is the same objects with flipped signs
  Quadruplet qk = quadruplet(ClaimClass::Mixed, price_F, K, space, az, hz);

  DecompositionReport rep;
  rep.survival_alt_flow_sign = survival && survival_alt_flow_sign;

  rep.initial = RandVar(n);
  for (int w = 0; w < n; ++w)
    rep.initial[w] = tau.value[w] == 0 ? K[0][w] : price_F[0][w];

  // trend_t = sum_{s<=tau^t} E[K_s(Gtilde_s-G_s) + price_s G_s | F_{s-1}]/G_{s-1} - price_{s-1}
  rep.trend.assign(T + 1, RandVar::constant(n, XRat(0)));
  for (int s = 1; s <= T; ++s) {
    RandVar inner(n);
    for (int w = 0; w < n; ++w)
      inner[w] = K[s][w] * (az.Gtilde[s][w] - az.G[s][w]) + price_F[s][w] * az.G[s][w];
    RandVar e = cond_expect(inner, space.at(s - 1), P).value;
    rep.trend[s] = rep.trend[s - 1];
    for (int w = 0; w < n; ++w) {
      if (!tau.alive_at(w, s)) continue;
      rep.trend[s][w] += XRat(e[w].rat() / az.G[s - 1][w].rat()) - price_F[s - 1][w];
    }
  }

  rep.pf_risk = transform_T(space, tau, az, qk.M);

  // (K - price) . N^G; with K = 0 this is -price . N^G for the survival claim
  rep.pure_default.assign(T + 1, RandVar::constant(n, XRat(0)));
  for (int s = 1; s <= T; ++s) {
    rep.pure_default[s] = rep.pure_default[s - 1];
    for (int w = 0; w < n; ++w) {
      XRat dN = hz.NG[s][w] - hz.NG[s - 1][w];
      if (dN.sign() == 0) continue;
      rep.pure_default[s][w] += (K[s][w] - price_F[s][w]) * dN;
    }
  }

  Process tN = transform_T(space, tau, az, qk.N);
  auto inv_Gminus = [&](int s, int w) { return XRat(Rat(1) / az.G[s - 1][w].rat()); };
  rep.cr_benefit = weighted_sint(tN, inv_Gminus);

  Process tNbar = transform_T(space, tau, az, qk.Nbar);
  Process angleMm = angle(qk.M, hz.m, space);
  Process tm = transform_T(space, tau, az, hz.m);
  Process flow1 = weighted_sint(tNbar, inv_Gminus);
  // the survival-class form carries the opposite sign of dVtilde here
  int vsign = rep.survival_alt_flow_sign ? -1 : 1;
  Process flow2 = weighted_sint(tm, [&](int s, int w) {
    XRat dV = qk.Vtilde[s][w] - qk.Vtilde[s - 1][w];
    XRat dA = angleMm[s][w] - angleMm[s - 1][w];
    Rat g = az.G[s - 1][w].rat();
    return (XRat(vsign) * dV + dA) * XRat(Rat(1) / (g * g));
  });
  rep.cr_flow.assign(T + 1, RandVar(n));
  for (int t = 0; t <= T; ++t) rep.cr_flow[t] = flow1[t] - flow2[t];

  rep.total.assign(T + 1, RandVar(n));
  rep.telescopes = true;
  for (int t = 0; t <= T; ++t) {
    for (int w = 0; w < n; ++w) {
      rep.total[t][w] = rep.initial[w] + rep.trend[t][w] + rep.pf_risk[t][w] +
                        rep.pure_default[t][w] + rep.cr_benefit[t][w] + rep.cr_flow[t][w];
      if (!(rep.total[t][w] == price_G[t][w])) rep.telescopes = false;
    }
  }
  return rep;
}

GmartResiduals gmart_identities(const Process& M, const Process& V, const FilteredSpace& space,
                                const RandomTime& tau, const AzemaPair& az,
                                const HazardTriplet& hz) {
  const int n = space.n_outcomes();
  const int T = space.horizon;
  for (int s = 1; s <= T; ++s)
    if (!(V[s] - V[s - 1]).is_measurable(space.at(s - 1)))
      throw std::invalid_argument("gmart_identities: V is not predictable");

  Process proj_pos = pred_proj([&] {
    Process ind(T + 1, RandVar(n));
    for (int t = 0; t <= T; ++t)
      for (int w = 0; w < n; ++w) ind[t][w] = XRat(az.Gtilde[t][w] > XRat(0) ? 1 : 0);
    return ind;
  }(), space);

  Process Vtau = stopped(V, tau);
  Process tm = transform_T(space, tau, az, hz.m);

  GmartResiduals res;
  auto inv_Gminus = [&](int s, int w) { return XRat(Rat(1) / az.G[s - 1][w].rat()); };

  // r1 = G_- Gtilde^{-1} . V^tau - ^{p,F}(1{Gtilde>0}) . V^tau + G_-^{-1} dV . T(m)
  Process lhs1 = weighted_sint(Vtau, [&](int s, int w) {
    return XRat(az.G[s - 1][w].rat() / az.Gtilde[s][w].rat());
  });
  Process rhs1a = weighted_sint(Vtau, [&](int s, int w) { return proj_pos[s][w]; });
  Process rhs1b = weighted_sint(tm, [&](int s, int w) {
    return (V[s][w] - V[s - 1][w]) * inv_Gminus(s, w);
  });
  res.r1.assign(T + 1, RandVar(n));
  for (int t = 0; t <= T; ++t) res.r1[t] = lhs1[t] - rhs1a[t] + rhs1b[t];

  // r2 = M^tau - M_0 - T(M) - G_-^{-1} . T([M,m]-<M,m>) + G_-^{-2} d<M,m> . T(m)
  //      - G_-^{-1} . <M,m>^tau
  Process Mtau = stopped(M, tau);
  Process tM = transform_T(space, tau, az, M);
  Process brMm = bracket(M, hz.m);
  Process angMm = angle(M, hz.m, space);
  Process diff(T + 1, RandVar(n));
  for (int t = 0; t <= T; ++t) diff[t] = brMm[t] - angMm[t];
  Process tdiff = transform_T(space, tau, az, diff);
  Process term2 = weighted_sint(tdiff, inv_Gminus);
  Process term3 = weighted_sint(tm, [&](int s, int w) {
    XRat dA = angMm[s][w] - angMm[s - 1][w];
    Rat g = az.G[s - 1][w].rat();
    return dA * XRat(Rat(1) / (g * g));
  });
  Process angTau = stopped(angMm, tau);
  Process term4 = weighted_sint(angTau, inv_Gminus);
  res.r2.assign(T + 1, RandVar(n));
  for (int t = 0; t <= T; ++t)
    for (int w = 0; w < n; ++w)
      res.r2[t][w] = Mtau[t][w] - M[0][w] - tM[t][w] - term2[t][w] + term3[t][w] - term4[t][w];

  res.all_zero = true;
  for (int t = 0; t <= T; ++t)
    for (int w = 0; w < n; ++w)
      if (res.r1[t][w].sign() != 0 || res.r2[t][w].sign() != 0) res.all_zero = false;
  return res;
}

}  // namespace tauhedge
