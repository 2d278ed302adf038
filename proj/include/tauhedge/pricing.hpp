#pragma once

#include <string>

#include "tauhedge/lp.hpp"
#include "tauhedge/market.hpp"

namespace tauhedge {

// The four vulnerable-claim payoff shapes:
//   SurvivalStrict: g_T 1{tau >  T}
//   SurvivalIncl:   g_T 1{tau >= T}
//   AtDefault:      K_tau 1{tau <= T}
//   Mixed:          g_T 1{tau > T} + K_tau 1{tau <= T}
enum class ClaimClass { SurvivalStrict, SurvivalIncl, AtDefault, Mixed };

std::string claim_class_name(ClaimClass cls);
ClaimClass claim_class_from_name(const std::string& name);

// kappa(g,K) = g 1{Gtilde=G>0} + K 1{Gtilde>G=0} + max(g,K) 1{Gtilde>G>0}.
RandVar kappa_splice(const RandVar& g, const RandVar& k, const RandVar& G, const RandVar& Gt);

// A claim plus its derived F-payoffs: ghat = kappa(g,0), kappa0 = kappa(0,K),
// kappag = kappa(g,K), gbar = g 1{Gtilde>0} = kappa(g,g).
struct ClaimKit {
  ClaimClass cls = ClaimClass::SurvivalStrict;
  Process g;
  Process K;
  Process ghat, kappa0, kappag, gbar;
};

ClaimKit claim_kit(ClaimClass cls, const Process& g, const Process& K, const FilteredSpace& space,
                   const AzemaPair& az);

// f_R(t, x) = x 1{Gtilde_t=G_t>0} + R_t 1{Gtilde_t>G_t=0} + max(x,R_t) 1{Gtilde_t>G_t>0}.
// Masked x entries are only legal where Gtilde_t = 0, where the splice is 0.
RandVar f_recovery(const Process& R, int t, const MaskedVar& x, const AzemaPair& az);

// A market model (X, H, mu) to price under.
struct PricingModel {
  std::vector<Process> assets;
  Filtration filt;
  Measure mu;
  std::string name;
};

PricingModel model_stopped(const FilteredSpace& space, const PriceSystem& ps, const Filtration& gfilt);
PricingModel model_tilde(const FilteredSpace& space, const PriceSystem& ps, const Deflator& defl);
PricingModel model_bar(const FilteredSpace& space, const PriceSystem& ps);

// --- AIP ----------------------------------------------------------------

struct AipAtomVerdict {
  int t = 0;     // verdict is about the step t -> t+1, attached to (t, atom)
  int atom = 0;  // block index in filt[t]
  bool defined = false;  // false on mu-null atoms
  bool ok = true;
  HullResult hull;
};

struct AipReport {
  bool overall = true;
  std::vector<AipAtomVerdict> verdicts;
  const AipAtomVerdict* first_violation() const;
};

// Verdict at (t, A): 0 in conv hull of {dX_{t+1}(w) : w in A, mu(w) > 0}.
AipReport aip(const PricingModel& model, const FilteredSpace& space);

// --- super-hedging ------------------------------------------------------

struct OneStepAtom {
  int t = 0;
  int atom_index = 0;
  bool defined = false;
  XRat price;
  std::optional<std::vector<Rat>> theta;
  std::optional<std::vector<Rat>> certificate;  // when price = -inf by unboundedness
};

struct OneStepResult {
  MaskedVar price;                  // time-t values per outcome
  std::vector<OneStepAtom> atoms;   // per filt[t] block
};

// One-period super-hedging price of xi (known at t+1) at time t. Minimax per
// mu-positive atom; -inf rows of xi are vacuous constraints and are dropped.
OneStepResult one_step(const PricingModel& model, const FilteredSpace& space, int t,
                       const MaskedVar& xi);

struct PriceReport {
  std::vector<MaskedVar> prices;               // per time 0..T
  std::vector<std::vector<OneStepAtom>> steps; // steps[t] = atoms at level t, t = 0..T-1
  AipReport aip;
  std::vector<std::string> violations;         // AIP violations encountered
};

PriceReport backward_price(const PricingModel& model, const FilteredSpace& space, const RandVar& xi_T);

// Independent oracle: one LP per time-0 atom for the whole horizon, with one
// strategy vector per (time, block) and one super-hedging constraint per
// mu-positive outcome.
MaskedVar global_oracle(const PricingModel& model, const FilteredSpace& space, const RandVar& xi_T);

// --- vulnerable claims ----------------------------------------------------

struct VulnerableModels {
  const FilteredSpace* space;
  const RandomTime* tau;
  const AzemaPair* az;
  const Filtration* gfilt;
  const PriceSystem* ps;
  const Deflator* defl;
};

// The class payoff at level t as a G_t claim (uses g_t / K_tau up to t).
RandVar one_step_claim(ClaimClass cls, int t, const ClaimKit& kit, const VulnerableModels& vm);

struct OneStepVulnerable {
  MaskedVar lhs;        // one-step price under (S^tau, G, P)
  MaskedVar rhs_qtilde; // F-formula via (Stilde, F, Qtilde) plus recovery carry
  MaskedVar rhs_delta;  // joint (theta, delta) LP over dSbar under P plus carry
};

OneStepVulnerable one_step_vulnerable(ClaimClass cls, int t, const ClaimKit& kit,
                                      const VulnerableModels& vm);

// Recovery schedule the G-price carries after tau: zero for SurvivalStrict,
// g_T paid only at tau = T for SurvivalIncl, K for the recovery classes.
Process effective_recovery(ClaimClass cls, const ClaimKit& kit, const FilteredSpace& space);

struct VulnerablePrice {
  PriceReport g_report;                  // direct backward pricing under (S^tau, G, P)
  std::vector<MaskedVar> f_process;      // backward f_R recursion under (Stilde, F, Qtilde)
  bool relation_ok = false;              // G price == Keff_tau 1{tau<=t} + F_t 1{tau>t}
  std::vector<std::string> discrepancies;
  // Whether the G-price also matches F_t on {tau = t} (the 1{tau>=t} on-set
  // convention); recorded per the backward check, not assumed.
  bool matches_geq_convention = true;
};

// Error carrying the violating (t, atom) when AIP fails for (Stilde, F, Qtilde).
struct AipViolation : std::runtime_error {
  int t;
  int atom;
  AipViolation(int t_, int atom_, const std::string& what) : std::runtime_error(what), t(t_), atom(atom_) {}
};

VulnerablePrice price_vulnerable(ClaimClass cls, const ClaimKit& kit, const VulnerableModels& vm);

// For g,K >= 0: the max-form recursion payoffs (f_K(t,x) collapses to
// max(x 1{G_t>0}, K_t 1{Gtilde_t>G_t}), and plain x for the survival class).
// Returns the simplified F-processes; equality with the general path is the
// caller's check.
std::vector<MaskedVar> options_simplify(ClaimClass cls, const ClaimKit& kit, const VulnerableModels& vm);

}  // namespace tauhedge
