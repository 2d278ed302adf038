#pragma once

#include "tauhedge/pricing.hpp"

namespace tauhedge {

// The (M, N, Nbar, Vtilde) quadruplet attached to an F-price process, with the
// drift A and the predictable level xi_s = E[price_s | F_{s-1}]. Recovery
// classes use (K - price) in Vtilde/N; the survival class uses the price
// alone, with the minus signs moved onto the terms instead.
struct Quadruplet {
  Process M;       // martingale part of the price
  Process A;       // predictable drift, price = price_0 + M + A
  Process xi;      // xi[0] = price_0
  Process Vtilde;
  Process N;
  Process Nbar;
};

Quadruplet quadruplet(ClaimClass cls, const Process& price_F, const Process& K,
                      const FilteredSpace& space, const AzemaPair& az, const HazardTriplet& hz);

// Labelled decomposition terms, signed as they enter the telescoping sum
//   priceG_t = initial + trend_t + pf_risk_t + pure_default_t
//              + cr_benefit_t + cr_flow_t       (exact, every (t, omega)).
struct DecompositionReport {
  RandVar initial;
  Process trend;
  Process pf_risk;       // T(M)
  Process pure_default;  // (K - price) . N^G, which is -price . N^G for survival claims
  Process cr_benefit;    // +/- G_-^{-1} . T(N)
  Process cr_flow;       // G_-^{-1} . T(Nbar) - G_-^{-2}(dVtilde + d<M,m>) . T(m)
  Process total;
  bool telescopes = false;
  bool survival_alt_flow_sign = false;
};

// recovery_used: K for the recovery classes, the zero process for
// SurvivalStrict, g_T paid only at T for SurvivalIncl. price_F entries that
// were masked must be zero-filled by the caller (they are only read where a
// vanishing factor multiplies them or on [[0,tau]] where they are defined).
// When survival_alt_flow_sign is set the T(m) integrand uses the survival
// class's own sign of dVtilde instead of the one obtained from the recovery
// classes at K = 0 (only the latter telescopes; see the decomp suite).
DecompositionReport decompose(ClaimClass cls, bool survival_alt_flow_sign,
                              const FilteredSpace& space, const RandomTime& tau,
                              const AzemaPair& az, const HazardTriplet& hz,
                              const Process& price_F, const Process& recovery_used,
                              const Process& price_G);

// Residuals of the two pathwise identities behind the decomposition:
//   r1 = G_- Gtilde^{-1} . V^tau - ^{p,F}(1{Gtilde>0}) . V^tau + G_-^{-1} dV . T(m)
//   r2 = M^tau - M_0 - T(M) - G_-^{-1} . T([M,m] - <M,m>)
//        + G_-^{-2} d<M,m> . T(m) - G_-^{-1} . <M,m>^tau
// Both must be identically zero for any adapted M and predictable V.
struct GmartResiduals {
  Process r1;
  Process r2;
  bool all_zero = false;
};

GmartResiduals gmart_identities(const Process& M, const Process& V, const FilteredSpace& space,
                                const RandomTime& tau, const AzemaPair& az, const HazardTriplet& hz);

// Zero-fills masked entries; the canonical version choice for decomposition
// inputs.
Process zero_fill(const std::vector<MaskedVar>& x);

}  // namespace tauhedge
