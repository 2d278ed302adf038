#include "tauhedge/pricing.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace tauhedge {

std::string claim_class_name(ClaimClass cls) {
  switch (cls) {
    case ClaimClass::SurvivalStrict: return "survival_strict";
    case ClaimClass::SurvivalIncl: return "survival_incl";
    case ClaimClass::AtDefault: return "at_default";
    case ClaimClass::Mixed: return "mixed";
  }
  throw std::logic_error("unknown claim class");
}

ClaimClass claim_class_from_name(const std::string& name) {
  if (name == "survival_strict") return ClaimClass::SurvivalStrict;
  if (name == "survival_incl") return ClaimClass::SurvivalIncl;
  if (name == "at_default") return ClaimClass::AtDefault;
  if (name == "mixed") return ClaimClass::Mixed;
  throw std::invalid_argument("unknown claim class '" + name + "'");
}

RandVar kappa_splice(const RandVar& g, const RandVar& k, const RandVar& G, const RandVar& Gt) {
  RandVar out(g.size());
  for (int w = 0; w < g.size(); ++w) {
    bool g_pos = G[w] > XRat(0);
    bool strictly_above = Gt[w] > G[w];
    if (!strictly_above && g_pos) out[w] = g[w];                    // {Gtilde = G > 0}
    else if (strictly_above && !g_pos) out[w] = k[w];               // {Gtilde > G = 0}
    else if (strictly_above && g_pos) out[w] = max(g[w], k[w]);     // {Gtilde > G > 0}
    else out[w] = XRat(0);                                          // {Gtilde = G = 0}
  }
  return out;
}

ClaimKit claim_kit(ClaimClass cls, const Process& g, const Process& K, const FilteredSpace& space,
                   const AzemaPair& az) {
  if (!is_adapted(g, space.filtration) || !is_adapted(K, space.filtration))
    throw std::invalid_argument("claim_kit: g and K must be F-adapted");
  ClaimKit kit;
  kit.cls = cls;
  kit.g = g;
  kit.K = K;
  const int n = space.n_outcomes();
  RandVar zero = RandVar::constant(n, XRat(0));
  for (int t = 0; t <= space.horizon; ++t) {
    kit.ghat.push_back(kappa_splice(g[t], zero, az.G[t], az.Gtilde[t]));
    kit.kappa0.push_back(kappa_splice(zero, K[t], az.G[t], az.Gtilde[t]));
    kit.kappag.push_back(kappa_splice(g[t], K[t], az.G[t], az.Gtilde[t]));
    RandVar gb(n);
    for (int w = 0; w < n; ++w) gb[w] = az.Gtilde[t][w] > XRat(0) ? g[t][w] : XRat(0);
    kit.gbar.push_back(gb);
  }
  return kit;
}

RandVar f_recovery(const Process& R, int t, const MaskedVar& x, const AzemaPair& az) {
  const int n = x.size();
  RandVar out(n);
  for (int w = 0; w < n; ++w) {
    const XRat& G = az.G[t][w];
    const XRat& Gt = az.Gtilde[t][w];
    if (Gt.sign() == 0) {
      out[w] = XRat(0);  // all three regions empty
    } else if (Gt == G) {
      out[w] = x.get(w);                       // {Gtilde = G > 0}
    } else if (G.sign() == 0) {
      out[w] = R[t][w];                        // {Gtilde > G = 0}
    } else {
      out[w] = max(x.get(w), R[t][w]);         // {Gtilde > G > 0}
    }
  }
  return out;
}

PricingModel model_stopped(const FilteredSpace& space, const PriceSystem& ps, const Filtration& gfilt) {
  return PricingModel{ps.Stau, gfilt, Measure::base(space), "stopped"};
}

PricingModel model_tilde(const FilteredSpace& space, const PriceSystem& ps, const Deflator& defl) {
  return PricingModel{ps.Stilde, space.filtration, defl.tildeQ, "tilde"};
}

PricingModel model_bar(const FilteredSpace& space, const PriceSystem& ps) {
  return PricingModel{ps.Sbar, space.filtration, Measure::base(space), "bar"};
}

const AipAtomVerdict* AipReport::first_violation() const {
  for (const auto& v : verdicts)
    if (v.defined && !v.ok) return &v;
  return nullptr;
}

AipReport aip(const PricingModel& model, const FilteredSpace& space) {
  AipReport report;
  const int T = space.horizon;
  const int d = static_cast<int>(model.assets.size());
  for (int t = 0; t < T; ++t) {
    const Partition& part = model.filt[t];
    for (int b = 0; b < part.n_blocks(); ++b) {
      AipAtomVerdict v;
      v.t = t;
      v.atom = b;
      std::vector<std::vector<Rat>> exposures;
      for (int w : part.block(b)) {
        if (model.mu.w[w] == 0) continue;
        std::vector<Rat> e(d);
        for (int a = 0; a < d; ++a)
          e[a] = (model.assets[a][t + 1][w] - model.assets[a][t][w]).rat();
        exposures.push_back(std::move(e));
      }
      if (exposures.empty()) {
        v.defined = false;
      } else {
        v.defined = true;
        v.hull = hull_contains_zero(exposures);
        v.ok = v.hull.contains_zero;
        if (!v.ok) report.overall = false;
      }
      report.verdicts.push_back(std::move(v));
    }
  }
  return report;
}

OneStepResult one_step(const PricingModel& model, const FilteredSpace& space, int t,
                       const MaskedVar& xi) {
  if (t < 0 || t >= space.horizon) throw std::invalid_argument("one_step: t out of range");
  const Partition& part = model.filt[t];
  const int d = static_cast<int>(model.assets.size());
  OneStepResult res;
  res.price = MaskedVar(space.n_outcomes());
  res.atoms.resize(part.n_blocks());
  for (int b = 0; b < part.n_blocks(); ++b) {
    OneStepAtom& atom = res.atoms[b];
    atom.t = t;
    atom.atom_index = b;
    MinimaxInstance inst;
    inst.d = d;
    bool any_positive = false;
    for (int w : part.block(b)) {
      if (model.mu.w[w] == 0) continue;
      any_positive = true;
      const XRat& payoff = xi.get(w);
      if (payoff.is_pos_inf()) throw std::domain_error("one_step: +inf claim");
      if (payoff.is_neg_inf()) continue;  // vacuous constraint
      MinimaxInstance::Row row;
      row.payoff = payoff.rat();
      row.exposure.resize(d);
      for (int a = 0; a < d; ++a)
        row.exposure[a] = (model.assets[a][t + 1][w] - model.assets[a][t][w]).rat();
      inst.rows.push_back(std::move(row));
    }
    if (!any_positive) {
      atom.defined = false;
      for (int w : part.block(b)) {
        res.price.value[w] = XRat(0);
        res.price.defined[w] = false;
      }
      continue;
    }
    atom.defined = true;
    if (inst.rows.empty()) {
      atom.price = XRat::neg_inf();  // every scenario requirement was -inf
    } else {
      LPOutcome out = minimax(inst);
      atom.price = out.value;
      atom.theta = std::move(out.argmin);
      atom.certificate = std::move(out.certificate);
    }
    for (int w : part.block(b)) {
      res.price.value[w] = atom.price;
      res.price.defined[w] = true;
    }
  }
  return res;
}

PriceReport backward_price(const PricingModel& model, const FilteredSpace& space, const RandVar& xi_T) {
  const int T = space.horizon;
  PriceReport report;
  report.aip = aip(model, space);
  report.prices.resize(T + 1);
  report.steps.resize(T);

  MaskedVar terminal(space.n_outcomes());
  for (int w = 0; w < space.n_outcomes(); ++w) {
    terminal.value[w] = xi_T[w];
    terminal.defined[w] = model.mu.w[w] > 0 ||
                          model.mu.block_mass(model.filt[T].block(model.filt[T].block_of(w))) > 0;
    if (!terminal.defined[w]) terminal.value[w] = XRat(0);
  }
  report.prices[T] = std::move(terminal);

  for (int t = T - 1; t >= 0; --t) {
    OneStepResult step = one_step(model, space, t, report.prices[t + 1]);
    for (const auto& atom : step.atoms)
      if (atom.defined && atom.price.is_neg_inf()) {
        std::ostringstream os;
        os << "AIP violated at t=" << t << " atom=" << atom.atom_index;
        report.violations.push_back(os.str());
      }
    report.prices[t] = std::move(step.price);
    report.steps[t] = std::move(step.atoms);
  }
  return report;
}

MaskedVar global_oracle(const PricingModel& model, const FilteredSpace& space, const RandVar& xi_T) {
  const int T = space.horizon;
  const int d = static_cast<int>(model.assets.size());
  MaskedVar out(space.n_outcomes());
  for (int b0 = 0; b0 < model.filt[0].n_blocks(); ++b0) {
    const auto& atom0 = model.filt[0].block(b0);
    std::vector<int> live;
    for (int w : atom0)
      if (model.mu.w[w] > 0) live.push_back(w);
    if (live.empty()) {
      for (int w : atom0) {
        out.value[w] = XRat(0);
        out.defined[w] = false;
      }
      continue;
    }
    // variable layout: p, then a d-vector per (s, block) actually used
    std::map<std::pair<int, int>, int> theta_base;
    int nvars = 1;
    for (int w : live)
      for (int s = 0; s < T; ++s) {
        auto key = std::make_pair(s, model.filt[s].block_of(w));
        if (!theta_base.count(key)) {
          theta_base[key] = nvars;
          nvars += d;
        }
      }
    GeneralLP lp;
    lp.c.assign(nvars, Rat(0));
    lp.c[0] = 1;
    for (int w : live) {
      if (xi_T[w].is_pos_inf()) throw std::domain_error("global_oracle: +inf claim");
      if (xi_T[w].is_neg_inf()) continue;
      std::vector<Rat> row(nvars, Rat(0));
      row[0] = 1;
      for (int s = 1; s <= T; ++s) {
        int base = theta_base.at({s - 1, model.filt[s - 1].block_of(w)});
        for (int a = 0; a < d; ++a)
          row[base + a] += (model.assets[a][s][w] - model.assets[a][s - 1][w]).rat();
      }
      lp.A.push_back(std::move(row));
      lp.b.push_back(xi_T[w].rat());
    }
    XRat value;
    if (lp.A.empty()) {
      value = XRat::neg_inf();
    } else {
      GeneralLPResult res = solve_general(lp);
      if (res.status == LPStatus::Optimal) value = XRat(res.value);
      else if (res.status == LPStatus::Unbounded) value = XRat::neg_inf();
      else throw std::logic_error("global_oracle: LP infeasible");
    }
    for (int w : atom0) {
      out.value[w] = value;
      out.defined[w] = true;
    }
  }
  return out;
}

RandVar one_step_claim(ClaimClass cls, int t, const ClaimKit& kit, const VulnerableModels& vm) {
  const int n = vm.space->n_outcomes();
  RandVar xi(n);
  for (int w = 0; w < n; ++w) {
    int tw = vm.tau->value[w];
    XRat val(0);
    switch (cls) {
      case ClaimClass::SurvivalStrict:
        if (tw > t) val = kit.g[t][w];
        break;
      case ClaimClass::SurvivalIncl:
        if (tw >= t) val = kit.g[t][w];
        break;
      case ClaimClass::AtDefault:
        if (tw <= t) val = kit.K[tw][w];
        break;
      case ClaimClass::Mixed:
        if (tw > t) val = kit.g[t][w];
        else val = kit.K[tw][w];
        break;
    }
    xi[w] = val;
  }
  return xi;
}

static const Process& f_side_claim(ClaimClass cls, const ClaimKit& kit) {
  switch (cls) {
    case ClaimClass::SurvivalStrict: return kit.ghat;
    case ClaimClass::SurvivalIncl: return kit.gbar;
    case ClaimClass::AtDefault: return kit.kappa0;
    case ClaimClass::Mixed: return kit.kappag;
  }
  throw std::logic_error("unknown claim class");
}

static bool has_recovery_carry(ClaimClass cls) {
  return cls == ClaimClass::AtDefault || cls == ClaimClass::Mixed;
}

OneStepVulnerable one_step_vulnerable(ClaimClass cls, int t, const ClaimKit& kit,
                                      const VulnerableModels& vm) {
  if (t < 1 || t > vm.space->horizon) throw std::invalid_argument("one_step_vulnerable: t out of range");
  const FilteredSpace& space = *vm.space;
  const int n = space.n_outcomes();

  PricingModel stopped_m = model_stopped(space, *vm.ps, *vm.gfilt);
  PricingModel tilde_m = model_tilde(space, *vm.ps, *vm.defl);

  RandVar xi = one_step_claim(cls, t, kit, vm);
  OneStepVulnerable res;
  res.lhs = one_step(stopped_m, space, t - 1, MaskedVar::all_defined(xi)).price;

  const RandVar& y = f_side_claim(cls, kit)[t];
  MaskedVar q = one_step(tilde_m, space, t - 1, MaskedVar::all_defined(y)).price;

  auto carry = [&](int w) -> XRat {
    if (has_recovery_carry(cls)) return kit.K[vm.tau->value[w]][w];
    return XRat(0);
  };

  res.rhs_qtilde = MaskedVar(n);
  for (int w = 0; w < n; ++w)
    res.rhs_qtilde.value[w] = vm.tau->alive_at(w, t) ? q.get(w) : carry(w);

  // joint (theta, delta) LP per F_{t-1} atom: exposures (dSbar_t, 1{Gtilde_t=0})
  res.rhs_delta = MaskedVar(n);
  const int d = vm.ps->d;
  for (int b = 0; b < space.at(t - 1).n_blocks(); ++b) {
    const auto& blk = space.at(t - 1).block(b);
    MinimaxInstance inst;
    inst.d = d + 1;
    for (int w : blk) {
      MinimaxInstance::Row row;
      row.payoff = y[w].rat();
      row.exposure.resize(d + 1);
      for (int a = 0; a < d; ++a)
        row.exposure[a] = (vm.ps->Sbar[a][t][w] - vm.ps->Sbar[a][t - 1][w]).rat();
      row.exposure[d] = vm.az->Gtilde[t][w].sign() == 0 ? Rat(1) : Rat(0);
      inst.rows.push_back(std::move(row));
    }
    LPOutcome lp = minimax(inst);
    for (int w : blk)
      res.rhs_delta.value[w] = vm.tau->alive_at(w, t) ? lp.value : carry(w);
  }
  return res;
}

Process effective_recovery(ClaimClass cls, const ClaimKit& kit, const FilteredSpace& space) {
  const int n = space.n_outcomes();
  const int T = space.horizon;
  Process k(T + 1, RandVar::constant(n, XRat(0)));
  switch (cls) {
    case ClaimClass::SurvivalStrict: break;
    case ClaimClass::SurvivalIncl: k[T] = kit.g[T]; break;
    case ClaimClass::AtDefault:
    case ClaimClass::Mixed: k = kit.K; break;
  }
  return k;
}

static RandVar terminal_f_claim(ClaimClass cls, const ClaimKit& kit, const VulnerableModels& vm) {
  const FilteredSpace& space = *vm.space;
  const int n = space.n_outcomes();
  const int T = space.horizon;
  RandVar xi(n);
  for (int w = 0; w < n; ++w) {
    switch (cls) {
      case ClaimClass::SurvivalStrict:
      case ClaimClass::Mixed:
        xi[w] = vm.az->G[T][w] > XRat(0) ? kit.g[T][w] : XRat(0);
        break;
      case ClaimClass::SurvivalIncl:
        xi[w] = vm.az->Gtilde[T][w] > XRat(0) ? kit.g[T][w] : XRat(0);
        break;
      case ClaimClass::AtDefault:
        xi[w] = XRat(0);
        break;
    }
  }
  return xi;
}

static MaskedVar mask_by_measure(const RandVar& x, const Partition& part, const Measure& mu) {
  MaskedVar out(x.size());
  for (int b = 0; b < part.n_blocks(); ++b) {
    bool pos = mu.block_mass(part.block(b)) > 0;
    for (int w : part.block(b)) {
      out.defined[w] = pos;
      out.value[w] = pos ? x[w] : XRat(0);
    }
  }
  return out;
}

VulnerablePrice price_vulnerable(ClaimClass cls, const ClaimKit& kit, const VulnerableModels& vm) {
  const FilteredSpace& space = *vm.space;
  const int T = space.horizon;
  const int n = space.n_outcomes();

  PricingModel tilde_m = model_tilde(space, *vm.ps, *vm.defl);
  AipReport tilde_aip = aip(tilde_m, space);
  if (!tilde_aip.overall) {
    const AipAtomVerdict* v = tilde_aip.first_violation();
    std::ostringstream os;
    os << "AIP fails for (Stilde, F, Qtilde) at t=" << v->t << " atom=" << v->atom;
    throw AipViolation(v->t, v->atom, os.str());
  }

  VulnerablePrice out;

  // F-side backward recursion X_t = P^(Stilde,Qtilde)_{t,t+1}(f_R(t+1, X_{t+1})).
  // R is the effective recovery: zero for the strict survival claim, but
  // g_T paid at tau = T for the inclusive one (its payment at {tau = T} is a
  // recovery payment; a zero R would wrongly strip negative payoffs there and
  // drop the {Gtilde > G = 0} payment at the final step).
  Process recovery = effective_recovery(cls, kit, space);
  out.f_process.resize(T + 1);
  out.f_process[T] = mask_by_measure(terminal_f_claim(cls, kit, vm), space.at(T), tilde_m.mu);
  for (int t = T - 1; t >= 0; --t) {
    RandVar payoff = f_recovery(recovery, t + 1, out.f_process[t + 1], *vm.az);
    out.f_process[t] = one_step(tilde_m, space, t, MaskedVar::all_defined(payoff)).price;
  }

  // direct G-side pricing of the vulnerable claim
  PricingModel stopped_m = model_stopped(space, *vm.ps, *vm.gfilt);
  RandVar xi_G = one_step_claim(cls, T, kit, vm);
  out.g_report = backward_price(stopped_m, space, xi_G);

  // relation: G price == Keff_tau 1{tau<=t} + X_t 1{tau>t}
  Process keff = effective_recovery(cls, kit, space);
  out.relation_ok = true;
  for (int t = 0; t <= T; ++t) {
    for (int w = 0; w < n; ++w) {
      XRat expected = vm.tau->occurs_by(w, t) ? keff[vm.tau->value[w]][w] : out.f_process[t].get(w);
      const XRat& actual = out.g_report.prices[t].get(w);
      if (!(expected == actual)) {
        out.relation_ok = false;
        std::ostringstream os;
        os << "t=" << t << " outcome=" << space.outcome_ids[w] << " expected=" << expected.str()
           << " direct=" << actual.str();
        out.discrepancies.push_back(os.str());
      }
      if (vm.tau->value[w] == t && !(out.g_report.prices[t].get(w) == out.f_process[t].get(w)))
        out.matches_geq_convention = false;
    }
  }
  return out;
}

std::vector<MaskedVar> options_simplify(ClaimClass cls, const ClaimKit& kit,
                                        const VulnerableModels& vm) {
  const FilteredSpace& space = *vm.space;
  const int T = space.horizon;
  const int n = space.n_outcomes();
  for (int t = 0; t <= T; ++t)
    for (int w = 0; w < n; ++w)
      if (kit.g[t][w] < XRat(0) || kit.K[t][w] < XRat(0))
        throw std::invalid_argument("options_simplify: g and K must be nonnegative");

  PricingModel tilde_m = model_tilde(space, *vm.ps, *vm.defl);
  std::vector<MaskedVar> x(T + 1);
  x[T] = mask_by_measure(terminal_f_claim(cls, kit, vm), space.at(T), tilde_m.mu);
  const bool survival = (cls == ClaimClass::SurvivalStrict || cls == ClaimClass::SurvivalIncl);
  for (int t = T - 1; t >= 0; --t) {
    MaskedVar payoff(n);
    for (int w = 0; w < n; ++w) {
      payoff.defined[w] = x[t + 1].defined[w];
      if (!payoff.defined[w]) continue;
      if (survival) {
        payoff.value[w] = x[t + 1].value[w];
      } else {
        XRat kbar = vm.az->Gtilde[t + 1][w] > vm.az->G[t + 1][w] ? kit.K[t + 1][w] : XRat(0);
        payoff.value[w] = max(x[t + 1].value[w], kbar);
      }
    }
    x[t] = one_step(tilde_m, space, t, payoff).price;
  }
  return x;
}

}  // namespace tauhedge
