#include "tauhedge/verify.hpp"

#include "tauhedge/decomp.hpp"
#include "tauhedge/model_io.hpp"

namespace tauhedge {

namespace {

Process const_process(int T, int n, const XRat& c) {
  return Process(T + 1, RandVar::constant(n, c));
}

ModelFile make_m1() {
  ModelFile m;
  Filtration filt;
  filt.push_back(Partition::trivial(2));
  filt.push_back(Partition::singletons(2));
  m.space = FilteredSpace::create({"u", "d"}, {Rat(1, 2), Rat(1, 2)}, filt);
  m.tau = RandomTime{{RandomTime::kNever, RandomTime::kNever}};
  m.d = 1;
  Process s(2, RandVar(2));
  s[0] = RandVar::constant(2, XRat(1));
  s[1][0] = XRat(2);
  s[1][1] = XRat(Rat(1, 2));
  m.S.push_back(s);
  ClaimSection c;
  c.cls = ClaimClass::SurvivalStrict;
  c.g = const_process(1, 2, XRat(0));
  c.g[1][0] = XRat(1);  // (S_1 - 1)^+
  c.K = const_process(1, 2, XRat(0));
  m.claim = c;
  return m;
}

ModelFile make_m2() {
  ModelFile m;
  Filtration filt;
  filt.push_back(Partition::trivial(4));
  filt.push_back(Partition(4, {{0, 1}, {2, 3}}));
  m.space = FilteredSpace::create({"u1", "u2", "d1", "d2"},
                                  {Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)}, filt);
  m.tau = RandomTime{{1, RandomTime::kNever, 1, RandomTime::kNever}};
  m.d = 1;
  Process s(2, RandVar(4));
  s[0] = RandVar::constant(4, XRat(1));
  s[1][0] = s[1][1] = XRat(2);
  s[1][2] = s[1][3] = XRat(Rat(1, 2));
  m.S.push_back(s);
  ClaimSection c;
  c.cls = ClaimClass::SurvivalStrict;
  c.g = const_process(1, 4, XRat(0));
  c.g[1][0] = c.g[1][1] = XRat(1);
  c.K = const_process(1, 4, XRat(0));
  m.claim = c;
  return m;
}

ModelFile make_m3() {
  ModelFile m;
  Filtration filt;
  filt.push_back(Partition::trivial(2));
  filt.push_back(Partition::singletons(2));
  m.space = FilteredSpace::create({"a", "b"}, {Rat(1, 2), Rat(1, 2)}, filt);
  m.tau = RandomTime{{1, 0}};
  m.d = 1;
  Process s(2, RandVar(2));
  s[0] = RandVar::constant(2, XRat(1));
  s[1][0] = XRat(Rat(1, 2));   // dS_1 = 1{Gtilde_1=0<G_0} - P(...|F_0) = (-1/2, +1/2)
  s[1][1] = XRat(Rat(3, 2));
  m.S.push_back(s);
  return m;
}

struct Check {
  VerifyResult& res;
  std::string where;
  void operator()(bool ok, const std::string& tag) {
    ++res.checks;
    if (!ok) res.failures.push_back(where + " " + tag);
  }
  void eq(const XRat& got, const XRat& want, const std::string& tag) {
    ++res.checks;
    if (!(got == want))
      res.failures.push_back(where + " " + tag + " got=" + got.str() + " want=" + want.str());
  }
};

void check_m1(VerifyResult& res) {
  Check ck{res, "fixture=m1"};
  ModelBundle b = bundle(parse_model(fixture_m1_json()));
  const ClaimKit& kit = *b.kit;
  RandVar xi = one_step_claim(ClaimClass::SurvivalStrict, 1, kit, b.views());

  PricingModel stopped_m = model_stopped(b.file.space, b.ps, b.gfilt);
  OneStepResult step = one_step(stopped_m, b.file.space, 0, MaskedVar::all_defined(xi));
  ck.eq(step.price.get(0), XRat(Rat(1, 3)), "one_step price");
  ck(step.atoms[0].theta && step.atoms[0].theta->at(0) == Rat(2, 3), "one_step theta=2/3");

  PriceReport rep = backward_price(stopped_m, b.file.space, xi);
  ck.eq(rep.prices[0].get(0), XRat(Rat(1, 3)), "backward price");
  ck(rep.aip.overall, "stopped AIP holds");

  MaskedVar oracle = global_oracle(stopped_m, b.file.space, xi);
  ck.eq(oracle.get(0), XRat(Rat(1, 3)), "global oracle price");

  for (auto make : {model_tilde(b.file.space, b.ps, b.defl), model_bar(b.file.space, b.ps)}) {
    ck.eq(global_oracle(make, b.file.space, kit.ghat[1]).get(0), XRat(Rat(1, 3)),
          "oracle under " + make.name);
  }

  VulnerablePrice vp = price_vulnerable(ClaimClass::SurvivalStrict, kit, b.views());
  ck.eq(vp.f_process[0].get(0), XRat(Rat(1, 3)), "F-process price");
  ck.eq(vp.g_report.prices[0].get(0), XRat(Rat(1, 3)), "G price");
  ck(vp.relation_ok, "relation G = F 1{tau>t}");
}

void check_m2(VerifyResult& res) {
  Check ck{res, "fixture=m2"};
  ModelBundle b = bundle(parse_model(fixture_m2_json()));
  const FilteredSpace& sp = b.file.space;
  for (int w = 0; w < 4; ++w) {
    ck.eq(b.az.G[1][w], XRat(Rat(1, 2)), "G_1 = 1/2");
    ck.eq(b.az.Gtilde[1][w], XRat(1), "Gtilde_1 = 1");
    ck.eq(b.az.G[0][w], XRat(1), "G_0 = 1");
    ck.eq(b.az.Gtilde[0][w], XRat(1), "Gtilde_0 = 1");
    ck.eq(b.hz.DoF[1][w], XRat(Rat(1, 2)), "DoF_1 = 1/2");
    ck.eq(b.defl.ZF[1][w], XRat(1), "Z^F = 1");
    ck(b.defl.tildeQ.w[w] == sp.prob[w], "Qtilde = P");
  }
  ck(b.gfilt[0].n_blocks() == 1, "G_0 trivial");
  ck(b.gfilt[1].n_blocks() == 4, "G_1 has four blocks");
  Process mm = bracket(b.hz.m, b.hz.m);
  ck.eq(mm[1][0], XRat(0), "[m,m]_1 = 0");

  OneStepVulnerable osv = one_step_vulnerable(ClaimClass::SurvivalStrict, 1, *b.kit, b.views());
  for (int w = 0; w < 4; ++w) {
    ck.eq(osv.lhs.get(w), XRat(Rat(1, 3)), "lhs = 1/3");
    ck.eq(osv.rhs_qtilde.get(w), XRat(Rat(1, 3)), "rhs_qtilde = 1/3");
    ck.eq(osv.rhs_delta.get(w), XRat(Rat(1, 3)), "rhs_delta = 1/3");
  }

  RandVar xi = one_step_claim(ClaimClass::SurvivalStrict, 1, *b.kit, b.views());
  MaskedVar oracle = global_oracle(model_stopped(sp, b.ps, b.gfilt), sp, xi);
  ck.eq(oracle.get(0), XRat(Rat(1, 3)), "G oracle = 1/3");

  // Vtilde^(1)_1 = E[P_1 (Gtilde_1 - G_1) | F_0] = 1/2 E[P_1|F_0] = 1/4
  VulnerablePrice vp = price_vulnerable(ClaimClass::SurvivalStrict, *b.kit, b.views());
  Process priceF = zero_fill(vp.f_process);
  Quadruplet q = quadruplet(ClaimClass::SurvivalStrict, priceF, b.kit->K, sp, b.az, b.hz);
  ck.eq(q.Vtilde[1][0], XRat(Rat(1, 4)), "Vtilde_1 = 1/4");
}

void check_m3(VerifyResult& res) {
  Check ck{res, "fixture=m3"};
  ModelBundle b = bundle(parse_model(fixture_m3_json()));
  const FilteredSpace& sp = b.file.space;

  ck.eq(b.defl.ZF[1][0], XRat(2), "Z^F_1(a) = 2");
  ck.eq(b.defl.ZF[1][1], XRat(0), "Z^F_1(b) = 0");
  ck(b.defl.tildeQ.w[0] == Rat(1) && b.defl.tildeQ.w[1] == Rat(0), "Qtilde = (1, 0)");

  ck.eq(b.ps.Sbar[0][1][0] - b.ps.Sbar[0][0][0], XRat(Rat(-1, 2)), "dSbar_1(a) = -1/2");
  ck.eq(b.ps.Sbar[0][1][1] - b.ps.Sbar[0][0][1], XRat(0), "dSbar_1(b) = 0");
  ck.eq(b.ps.Stilde[0][1][0] - b.ps.Stilde[0][0][0], XRat(Rat(-1, 2)), "dStilde_1(a) = -1/2");
  ck.eq(b.ps.Stilde[0][1][1] - b.ps.Stilde[0][0][1], XRat(Rat(1, 2)), "dStilde_1(b) = 1/2");

  ck(b.gfilt[0].n_blocks() == 2, "G_0 = {{a},{b}}");

  AipReport a_bar = aip(model_bar(sp, b.ps), sp);
  AipReport a_stop = aip(model_stopped(sp, b.ps, b.gfilt), sp);
  AipReport a_tilde = aip(model_tilde(sp, b.ps, b.defl), sp);
  ck(a_bar.overall, "(Sbar, F, P) satisfies AIP");
  ck(!a_stop.overall, "(S^tau, G, P) violates AIP");
  ck(!a_tilde.overall, "(Stilde, F, Qtilde) violates AIP");
  const AipAtomVerdict* v = a_stop.first_violation();
  ck(v && v->t == 0 && !v->hull.separator.empty(), "violation at t=0 with certificate");

  // reduce: X G_0-measurable with X(a)=5, X(b)=7 -> X' = 5 everywhere
  RandVar x(2);
  x[0] = XRat(5);
  x[1] = XRat(7);
  RandVar red = reduce(sp, b.gfilt, b.file.tau, x, 1);
  ck.eq(red[0], XRat(5), "reduce(a)");
  ck.eq(red[1], XRat(5), "reduce(b)");

  // survival claim with g = 1: every route prices -inf on {tau >= 1} = {a}
  // (the stopped model has an immediate profit there), 0 elsewhere
  ClaimKit kit = claim_kit(ClaimClass::SurvivalStrict, const_process(1, 2, XRat(1)),
                           const_process(1, 2, XRat(0)), sp, b.az);
  ck.eq(kit.ghat[1][0], XRat(0), "ghat_1(a) = 0");
  ck.eq(kit.ghat[1][1], XRat(0), "ghat_1(b) = 0");
  OneStepVulnerable osv = one_step_vulnerable(ClaimClass::SurvivalStrict, 1, kit, b.views());
  ck(osv.lhs.get(0).is_neg_inf(), "lhs(a) = -inf");
  ck(osv.rhs_qtilde.get(0).is_neg_inf(), "rhs_qtilde(a) = -inf");
  ck(osv.rhs_delta.get(0).is_neg_inf(), "rhs_delta(a) = -inf");
  ck.eq(osv.lhs.get(1), XRat(0), "lhs(b) = 0");
}

void check_degenerate_horizons(VerifyResult& res) {
  Check ck{res, "fixture=degenerate"};
  Filtration filt;
  filt.push_back(Partition::trivial(2));
  filt.push_back(Partition::singletons(2));
  FilteredSpace sp = FilteredSpace::create({"x", "y"}, {Rat(1, 2), Rat(1, 2)}, filt);

  {  // tau = infinity: G = Gtilde = 1, G = F, T(M) = M - M_0 when G = Gtilde = 1
    RandomTime tau{{RandomTime::kNever, RandomTime::kNever}};
    AzemaPair az = azema(sp, tau);
    for (int t = 0; t <= 1; ++t)
      for (int w = 0; w < 2; ++w) {
        ck.eq(az.G[t][w], XRat(1), "tau=inf G=1");
        ck.eq(az.Gtilde[t][w], XRat(1), "tau=inf Gtilde=1");
      }
    Filtration g = enlarge(sp, tau);
    ck(g[1].n_blocks() == sp.at(1).n_blocks(), "tau=inf: G = F");
    HazardTriplet hz = hazard(sp, tau, az);
    for (int t = 0; t <= 1; ++t)
      for (int w = 0; w < 2; ++w) {
        ck.eq(hz.NG[t][w], XRat(0), "tau=inf NG=0");
        ck.eq(hz.DoF[t][w], XRat(0), "tau=inf DoF=0");
      }
    Process M(2, RandVar(2));
    M[0] = RandVar::constant(2, XRat(3));
    M[1][0] = XRat(5);
    M[1][1] = XRat(1);
    Process tm = transform_T(sp, tau, az, M);
    for (int w = 0; w < 2; ++w) ck.eq(tm[1][w], M[1][w] - M[0][w], "tau=inf T(M)=M-M_0");
  }
  {  // tau = 0: Gtilde_0 = 1, G_0 = 0, everything 0 afterwards, Z^F = 1
    RandomTime tau{{0, 0}};
    AzemaPair az = azema(sp, tau);
    ck.eq(az.Gtilde[0][0], XRat(1), "tau=0 Gtilde_0=1");
    ck.eq(az.G[0][0], XRat(0), "tau=0 G_0=0");
    ck.eq(az.G[1][0], XRat(0), "tau=0 G_1=0");
    ck.eq(az.Gtilde[1][0], XRat(0), "tau=0 Gtilde_1=0");
    Deflator d = deflator(sp, az);
    for (int w = 0; w < 2; ++w) ck.eq(d.ZF[1][w], XRat(1), "tau=0 Z^F=1");
    // stopped prices freeze at S_0
    Process s(2, RandVar(2));
    s[0] = RandVar::constant(2, XRat(1));
    s[1][0] = XRat(2);
    s[1][1] = XRat(Rat(1, 2));
    PriceSystem ps = build_derived(sp, az, tau, {s});
    for (int w = 0; w < 2; ++w) ck.eq(ps.Stau[0][1][w], XRat(1), "tau=0: S^tau = S_0");
  }
}

// The change-of-prior counterexample: P(Z=0 < Z^{H1}) > 0 and
// Gamma = {-1{P(Z=0|H1)>0}} gives gamma~ = 0 but gamma~^Q = -1 < 0 on Q.
void check_counterexample(VerifyResult& res) {
  Check ck{res, "fixture=prior-counterexample"};
  Filtration filt;
  filt.push_back(Partition::trivial(2));
  filt.push_back(Partition::singletons(2));
  FilteredSpace sp = FilteredSpace::create({"a", "b"}, {Rat(1, 2), Rat(1, 2)}, filt);
  Measure P = Measure::base(sp);
  RandVar z(2);
  z[0] = XRat(2);
  z[1] = XRat(0);
  Measure Q = Measure::from_density(sp, z);
  RandVar gamma = RandVar::constant(2, XRat(-1));  // -eps 1{P(Z=0|H1)>0}, eps = 1
  RandVar gamma_on_pos(2);
  for (int w = 0; w < 2; ++w) gamma_on_pos[w] = z[w] > XRat(0) ? gamma[w] : XRat(0);
  MaskedVar tilde = cond_esssup(gamma_on_pos, sp.at(0), P);
  MaskedVar tildeQ = cond_esssup(gamma, sp.at(0), Q);
  ck.eq(tilde.get(0), XRat(0), "esssup(Gamma 1{Z>0}) = 0");
  ck(tildeQ.get(0) == XRat(-1), "Q-esssup(Gamma) = -1 < 0");
}

}  // namespace

const std::string& fixture_m1_json() {
  static const std::string s = serialize_model(make_m1());
  return s;
}
const std::string& fixture_m2_json() {
  static const std::string s = serialize_model(make_m2());
  return s;
}
const std::string& fixture_m3_json() {
  static const std::string s = serialize_model(make_m3());
  return s;
}

VerifyResult suite_fixtures() {
  VerifyResult res;
  check_m1(res);
  check_m2(res);
  check_m3(res);
  check_degenerate_horizons(res);
  check_counterexample(res);
  for (const auto& [name, text] :
       {std::pair<std::string, const std::string*>{"m1", &fixture_m1_json()},
        {"m2", &fixture_m2_json()},
        {"m3", &fixture_m3_json()}}) {
    ++res.checks;
    if (serialize_model(parse_model(*text)) != *text)
      res.failures.push_back("fixture=" + name + " canonical round-trip failed");
  }
  res.lines.push_back("suite=fixtures checks=" + std::to_string(res.checks) +
                      " failures=" + std::to_string(res.failures.size()));
  return res;
}

}  // namespace tauhedge
