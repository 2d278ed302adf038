#include <doctest.h>

#include "tauhedge/model_io.hpp"
#include "tauhedge/verify.hpp"

using namespace tauhedge;

namespace {

Process const_process(int T, int n, const XRat& c) {
  return Process(T + 1, RandVar::constant(n, c));
}

}  // namespace

TEST_CASE("claim kit splices") {
  ModelBundle b = bundle(parse_model(fixture_m3_json()));
  const FilteredSpace& sp = b.file.space;
  // g >= 0 gives ghat = g 1{G > 0}
  Process g = const_process(1, 2, XRat(2));
  Process k = const_process(1, 2, XRat(1));
  ClaimKit kit = claim_kit(ClaimClass::Mixed, g, k, sp, b.az);
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 2; ++w) {
      XRat want = b.az.G[t][w] > XRat(0) ? g[t][w] : XRat(0);
      CHECK(kit.ghat[t][w] == want);
    }
  // K = g collapses kappa(g,K) to gbar, and gbar is itself kappa(g,g)
  ClaimKit same = claim_kit(ClaimClass::Mixed, g, g, sp, b.az);
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 2; ++w) {
      CHECK(same.kappag[t][w] == same.gbar[t][w]);
      CHECK(kappa_splice(g[t], g[t], b.az.G[t], b.az.Gtilde[t])[w] == same.gbar[t][w]);
    }
  // on {Gtilde = G} the splice keeps only g 1{G>0}
  ModelBundle b2 = bundle(parse_model(fixture_m1_json()));  // tau never occurs
  ClaimKit kit2 = claim_kit(ClaimClass::Mixed, g, k, b2.file.space, b2.az);
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 2; ++w) CHECK(kit2.kappag[t][w] == g[t][w]);

  Process off = g;
  off[0][0] = XRat(5);  // breaks F_0-measurability
  CHECK_THROWS_AS(claim_kit(ClaimClass::Mixed, off, k, sp, b.az), std::invalid_argument);
}

TEST_CASE("recovery splice f_R") {
  ModelBundle b = bundle(parse_model(fixture_m3_json()));
  Process r = const_process(1, 2, XRat(3));
  MaskedVar x = MaskedVar::all_defined(RandVar::constant(2, XRat(1)));
  // outcome a: Gtilde_1 = 1 > G_1 = 0 -> recovery; outcome b: Gtilde_1 = 0 -> 0
  RandVar f = f_recovery(r, 1, x, b.az);
  CHECK(f[0] == XRat(3));
  CHECK(f[1] == XRat(0));
  // with R >= 0 and x >= 0 the splice is max(x 1{G>0}, R 1{Gtilde > G})
  for (int w = 0; w < 2; ++w) {
    XRat xg = b.az.G[1][w] > XRat(0) ? x.get(w) : XRat(0);
    XRat rg = b.az.Gtilde[1][w] > b.az.G[1][w] ? r[1][w] : XRat(0);
    CHECK(f[w] == max(xg, rg));
  }
  // zero recovery keeps x on {Gtilde = G > 0} and x+ on {Gtilde > G > 0}
  ModelBundle b2 = bundle(parse_model(fixture_m2_json()));
  MaskedVar neg = MaskedVar::all_defined(RandVar::constant(4, XRat(-2)));
  RandVar f0 = f_recovery(const_process(1, 4, XRat(0)), 1, neg, b2.az);
  for (int w = 0; w < 4; ++w) CHECK(f0[w] == XRat(0));  // Gtilde_1 > G_1 > 0: (-2)^+ = 0
}

TEST_CASE("one-step prices: degenerate atoms") {
  ModelBundle b = bundle(parse_model(fixture_m2_json()));
  const FilteredSpace& sp = b.file.space;
  PricingModel stopped_m = model_stopped(sp, b.ps, b.gfilt);

  // cash claims price to the cash amount when AIP holds on the atom
  OneStepResult cash =
      one_step(stopped_m, sp, 0, MaskedVar::all_defined(RandVar::constant(4, XRat(7))));
  for (int w = 0; w < 4; ++w) CHECK(cash.price.get(w) == XRat(7));

  // no hedging power on a zero-increment atom: the price is the claim's max
  Process flat = const_process(1, 4, XRat(1));
  PricingModel flat_m{{flat}, sp.filtration, Measure::base(sp), "flat"};
  RandVar xi(4);
  for (int w = 0; w < 4; ++w) xi[w] = XRat(w);
  OneStepResult sup = one_step(flat_m, sp, 0, MaskedVar::all_defined(xi));
  for (int w = 0; w < 4; ++w) CHECK(sup.price.get(w) == XRat(3));
}

TEST_CASE("backward, one-step, and the global oracle agree on the binomial fixture") {
  ModelBundle b = bundle(parse_model(fixture_m1_json()));
  const FilteredSpace& sp = b.file.space;
  RandVar xi = one_step_claim(ClaimClass::SurvivalStrict, 1, *b.kit, b.views());
  PricingModel stopped_m = model_stopped(sp, b.ps, b.gfilt);

  OneStepResult step = one_step(stopped_m, sp, 0, MaskedVar::all_defined(xi));
  PriceReport rep = backward_price(stopped_m, sp, xi);
  MaskedVar oracle = global_oracle(stopped_m, sp, xi);
  CHECK(step.price.get(0) == XRat(Rat(1, 3)));
  CHECK(rep.prices[0].get(0) == XRat(Rat(1, 3)));
  CHECK(oracle.get(0) == XRat(Rat(1, 3)));
  // T = 1: the oracle is the one-step operator by construction
  CHECK(step.price.get(0) == oracle.get(0));

  // a zero claim prices to the zero process under AIP
  PriceReport zero = backward_price(stopped_m, sp, RandVar::constant(2, XRat(0)));
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 2; ++w) CHECK(zero.prices[t].get(w) == XRat(0));
}

TEST_CASE("AIP verdicts per atom") {
  ModelBundle b = bundle(parse_model(fixture_m3_json()));
  const FilteredSpace& sp = b.file.space;
  AipReport stop = aip(model_stopped(sp, b.ps, b.gfilt), sp);
  // atom {a} has single exposure -1/2, atom {b} has exposure 0
  REQUIRE(stop.verdicts.size() == 2);
  CHECK_FALSE(stop.verdicts[0].ok);
  CHECK(stop.verdicts[1].ok);
  AipReport bar = aip(model_bar(sp, b.ps), sp);
  CHECK(bar.overall);  // exposures {-1/2, 0}: 0 is in the hull
}

TEST_CASE("price_vulnerable refuses when the tilde model has an immediate profit") {
  ModelBundle b = bundle(parse_model(fixture_m3_json()));
  ClaimKit kit = claim_kit(ClaimClass::SurvivalStrict, const_process(1, 2, XRat(1)),
                           const_process(1, 2, XRat(0)), b.file.space, b.az);
  CHECK_THROWS_AS(price_vulnerable(ClaimClass::SurvivalStrict, kit, b.views()), AipViolation);
}

TEST_CASE("vulnerable pricing degenerate cases") {
  // the mixed claim with g = K = 0 prices to zero everywhere
  ModelBundle b = bundle(parse_model(fixture_m2_json()));
  ClaimKit zero = claim_kit(ClaimClass::Mixed, const_process(1, 4, XRat(0)),
                            const_process(1, 4, XRat(0)), b.file.space, b.az);
  VulnerablePrice vp = price_vulnerable(ClaimClass::Mixed, zero, b.views());
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 4; ++w) {
      CHECK(vp.g_report.prices[t].get(w) == XRat(0));
      CHECK(vp.f_process[t].get(w) == XRat(0));
    }
  CHECK(vp.relation_ok);

  // recovery claims never pay when tau never occurs
  ModelBundle b1 = bundle(parse_model(fixture_m1_json()));
  ClaimKit kit1 = claim_kit(ClaimClass::AtDefault, const_process(1, 2, XRat(0)),
                            const_process(1, 2, XRat(5)), b1.file.space, b1.az);
  VulnerablePrice vp1 = price_vulnerable(ClaimClass::AtDefault, kit1, b1.views());
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 2; ++w) CHECK(vp1.g_report.prices[t].get(w) == XRat(0));
  CHECK(vp1.relation_ok);
}

TEST_CASE("options simplification collapses and saturates") {
  ModelBundle b = bundle(parse_model(fixture_m2_json()));
  const FilteredSpace& sp = b.file.space;
  // K = 0: the recursion is the plain backward chain of the Qtilde prices
  ClaimKit kit = claim_kit(ClaimClass::Mixed, b.file.claim->g, const_process(1, 4, XRat(0)),
                           sp, b.az);
  VulnerablePrice general = price_vulnerable(ClaimClass::Mixed, kit, b.views());
  std::vector<MaskedVar> simp = options_simplify(ClaimClass::Mixed, kit, b.views());
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 4; ++w) CHECK(general.f_process[t].get(w) == simp[t].get(w));

  // a recovery dominating every price saturates the max
  ClaimKit big = claim_kit(ClaimClass::AtDefault, const_process(1, 4, XRat(0)),
                           const_process(1, 4, XRat(50)), sp, b.az);
  VulnerablePrice vp_big = price_vulnerable(ClaimClass::AtDefault, big, b.views());
  // Kbar_1 = 50 1{Gtilde_1 > G_1} = 50 everywhere; Qtilde price of 50 is 50
  CHECK(vp_big.f_process[0].get(0) == XRat(50));

  ClaimKit negative = claim_kit(ClaimClass::Mixed, const_process(1, 4, XRat(-1)),
                                const_process(1, 4, XRat(0)), sp, b.az);
  CHECK_THROWS_AS(options_simplify(ClaimClass::Mixed, negative, b.views()),
                  std::invalid_argument);
}

TEST_CASE("zero increments on an extinct branch do not restore the survivor equivalence") {
  // Minimal pinned regression: tau = (0, 1), dS_1 = (0, 1/2). The extinct
  // branch moves nothing, so the only price jump sits on the survivors. Under
  // P the extinct state's zero exposure keeps 0 in the conditional hull; the
  // survivor-conditioned measure excludes that state, so the tilde model (and,
  // by the equivalence theorem, the stopped model) has an immediate profit
  // even though every increment vanishes on {Gtilde = 0 < G_-}.
  Filtration filt;
  filt.push_back(Partition::trivial(2));
  filt.push_back(Partition::singletons(2));
  ModelFile m;
  m.space = FilteredSpace::create({"dead", "alive"}, {Rat(11, 16), Rat(5, 16)}, filt);
  m.tau = RandomTime{{0, 1}};
  m.d = 1;
  Process s(2, RandVar(2));
  s[0] = RandVar::constant(2, XRat(1));
  s[1][0] = XRat(1);
  s[1][1] = XRat(Rat(3, 2));
  m.S.push_back(s);
  ModelBundle b = bundle(parse_model(serialize_model(m)));
  // the hypothesis of the three-way corollary holds: no jumps on the dead zone
  for (int w = 0; w < 2; ++w) {
    bool dz = b.az.Gtilde[1][w].sign() == 0 && b.az.G[0][w] > XRat(0);
    if (dz) CHECK(m.S[0][1][w] == m.S[0][0][w]);
  }
  CHECK(aip(model_bar(b.file.space, b.ps), b.file.space).overall);
  CHECK_FALSE(aip(model_tilde(b.file.space, b.ps, b.defl), b.file.space).overall);
  CHECK_FALSE(aip(model_stopped(b.file.space, b.ps, b.gfilt), b.file.space).overall);
}

TEST_CASE("backward recursion flags immediate profits instead of aborting") {
  ModelBundle b = bundle(parse_model(fixture_m3_json()));
  const FilteredSpace& sp = b.file.space;
  PricingModel stopped_m = model_stopped(sp, b.ps, b.gfilt);
  PriceReport rep = backward_price(stopped_m, sp, RandVar::constant(2, XRat(0)));
  CHECK_FALSE(rep.aip.overall);
  CHECK(rep.prices[0].get(0).is_neg_inf());
  CHECK(rep.prices[0].get(1) == XRat(0));
  CHECK_FALSE(rep.violations.empty());
}
