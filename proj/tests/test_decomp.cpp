#include <doctest.h>

#include "tauhedge/decomp.hpp"
#include "tauhedge/model_io.hpp"
#include "tauhedge/verify.hpp"

using namespace tauhedge;

namespace {

Process const_process(int T, int n, const XRat& c) {
  return Process(T + 1, RandVar::constant(n, c));
}

// 5 outcomes, T = 1, flat prices (AIP trivially), with a dead branch, a mixed
// branch, and a fully alive branch, so that m carries real correlation risk:
//   w0: tau=0 alone in its F_1 block (dead zone), w1: tau=0, w2: tau=1 share a
//   block, w3: tau=1 and w4: never share a block.
ModelFile adjudication_model() {
  ModelFile m;
  Filtration filt;
  filt.push_back(Partition::trivial(5));
  filt.push_back(Partition(5, {{0}, {1, 2}, {3, 4}}));
  m.space = FilteredSpace::create(
      {"w0", "w1", "w2", "w3", "w4"},
      {Rat(1, 5), Rat(1, 5), Rat(1, 5), Rat(1, 5), Rat(1, 5)}, filt);
  m.tau = RandomTime{{0, 0, 1, 1, RandomTime::kNever}};
  m.d = 1;
  m.S.push_back(const_process(1, 5, XRat(1)));
  ClaimSection c;
  c.cls = ClaimClass::SurvivalStrict;
  c.g = const_process(1, 5, XRat(1));
  c.K = const_process(1, 5, XRat(0));
  m.claim = c;
  return m;
}

}  // namespace

TEST_CASE("quadruplet splits the price into martingale and drift") {
  ModelBundle b = bundle(parse_model(fixture_m2_json()));
  const FilteredSpace& sp = b.file.space;
  // a deterministic price process has no martingale part
  Process det(2, RandVar(4));
  det[0] = RandVar::constant(4, XRat(3));
  det[1] = RandVar::constant(4, XRat(5));
  Quadruplet q = quadruplet(ClaimClass::Mixed, det, b.kit->K, sp, b.az, b.hz);
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 4; ++w) CHECK(q.M[t][w] == XRat(0));
  CHECK(q.A[1][0] == XRat(2));

  // frozen fixture value: Vtilde^(1)_1 = 1/2 E[P_1 | F_0] = 1/4
  VulnerablePrice vp = price_vulnerable(ClaimClass::SurvivalStrict, *b.kit, b.views());
  Quadruplet q1 = quadruplet(ClaimClass::SurvivalStrict, zero_fill(vp.f_process), b.kit->K, sp,
                             b.az, b.hz);
  CHECK(q1.Vtilde[1][0] == XRat(Rat(1, 4)));
}

TEST_CASE("telescoping on fixtures with trivial horizon interaction") {
  for (const std::string* text : {&fixture_m1_json(), &fixture_m2_json()}) {
    ModelBundle b = bundle(parse_model(*text));
    const FilteredSpace& sp = b.file.space;
    VulnerablePrice vp = price_vulnerable(ClaimClass::SurvivalStrict, *b.kit, b.views());
    DecompositionReport rep = decompose(
        ClaimClass::SurvivalStrict, /*survival_alt_flow_sign=*/false, sp, b.file.tau, b.az, b.hz,
        zero_fill(vp.f_process), effective_recovery(ClaimClass::SurvivalStrict, *b.kit, sp),
        zero_fill(vp.g_report.prices));
    CHECK(rep.telescopes);
    // tau never occurring kills the pure-default term entirely
    if (text == &fixture_m1_json())
      for (int t = 0; t <= sp.horizon; ++t)
        for (int w = 0; w < sp.n_outcomes(); ++w) CHECK(rep.pure_default[t][w] == XRat(0));
  }
}

TEST_CASE("survival flow term: only the recovery-class sign of dVtilde telescopes") {
  ModelBundle b = bundle(parse_model(serialize_model(adjudication_model())));
  const FilteredSpace& sp = b.file.space;
  VulnerablePrice vp = price_vulnerable(ClaimClass::SurvivalStrict, *b.kit, b.views());
  REQUIRE(vp.relation_ok);
  Process priceF = zero_fill(vp.f_process);
  Process priceG = zero_fill(vp.g_report.prices);
  Process recovery = effective_recovery(ClaimClass::SurvivalStrict, *b.kit, sp);

  DecompositionReport specialized = decompose(ClaimClass::SurvivalStrict, false, sp, b.file.tau,
                                              b.az, b.hz, priceF, recovery, priceG);
  DecompositionReport alt_sign = decompose(ClaimClass::SurvivalStrict, true, sp, b.file.tau,
                                           b.az, b.hz, priceF, recovery, priceG);
  CHECK(specialized.telescopes);
  // the two variants genuinely differ on this model, and only one telescopes
  bool differ = false;
  for (int t = 0; t <= sp.horizon; ++t)
    for (int w = 0; w < sp.n_outcomes(); ++w)
      if (!(specialized.cr_flow[t][w] == alt_sign.cr_flow[t][w])) differ = true;
  CHECK(differ);
  CHECK_FALSE(alt_sign.telescopes);
}

TEST_CASE("immersion collapses the correlation-flow term") {
  // independent tau (fixture m2) is immersion: m is constant, so T(m) = 0 and
  // Nbar = 0, matching the reduced decomposition of the remark
  ModelBundle b = bundle(parse_model(fixture_m2_json()));
  const FilteredSpace& sp = b.file.space;
  REQUIRE(is_martingale(b.hz.m, sp.filtration, Measure::base(sp)));
  for (int w = 0; w < 4; ++w) CHECK(b.hz.m[1][w] == XRat(1));

  VulnerablePrice vp = price_vulnerable(ClaimClass::SurvivalStrict, *b.kit, b.views());
  DecompositionReport rep = decompose(
      ClaimClass::SurvivalStrict, false, sp, b.file.tau, b.az, b.hz, zero_fill(vp.f_process),
      effective_recovery(ClaimClass::SurvivalStrict, *b.kit, sp), zero_fill(vp.g_report.prices));
  CHECK(rep.telescopes);

  // independence: the whole middle collapses to (G/G_-) . T(M)
  Quadruplet q = quadruplet(ClaimClass::Mixed, zero_fill(vp.f_process),
                            effective_recovery(ClaimClass::SurvivalStrict, *b.kit, sp), sp,
                            b.az, b.hz);
  Process tM = transform_T(sp, b.file.tau, b.az, q.M);
  Process weighted(2, RandVar(4));
  weighted[0] = RandVar::constant(4, XRat(0));
  for (int w = 0; w < 4; ++w) {
    XRat dT = tM[1][w] - tM[0][w];
    weighted[1][w] = dT.sign() == 0
                         ? weighted[0][w]
                         : weighted[0][w] + XRat(b.az.G[1][w].rat() / b.az.G[0][w].rat()) * dT;
  }
  for (int t = 0; t <= 1; ++t)
    for (int w = 0; w < 4; ++w) {
      XRat combined = rep.pf_risk[t][w] + rep.cr_benefit[t][w] + rep.cr_flow[t][w];
      CHECK(combined == weighted[t][w]);
    }
}

TEST_CASE("pathwise identities vanish for constant inputs") {
  ModelBundle b = bundle(parse_model(fixture_m2_json()));
  const FilteredSpace& sp = b.file.space;
  Process c(2, RandVar::constant(4, XRat(4)));
  GmartResiduals gm = gmart_identities(c, c, sp, b.file.tau, b.az, b.hz);
  CHECK(gm.all_zero);

  Process not_pred = c;
  not_pred[1][0] = XRat(5);
  CHECK_THROWS_AS(gmart_identities(c, not_pred, sp, b.file.tau, b.az, b.hz),
                  std::invalid_argument);
}

TEST_CASE("survival-inclusive decomposition needs the default-at-maturity recovery") {
  // the G-price of g_T 1{tau >= T} pays at {tau = T}; the effective recovery
  // g_T 1{s=T} carries that payment through the recovery-class machinery
  ModelBundle b = bundle(parse_model(serialize_model(adjudication_model())));
  const FilteredSpace& sp = b.file.space;
  VulnerablePrice vp = price_vulnerable(ClaimClass::SurvivalIncl, *b.kit, b.views());
  REQUIRE(vp.relation_ok);
  Process keff = effective_recovery(ClaimClass::SurvivalIncl, *b.kit, sp);
  CHECK(keff[1][0] == b.kit->g[1][0]);
  CHECK(keff[0][0] == XRat(0));
  DecompositionReport rep =
      decompose(ClaimClass::SurvivalIncl, false, sp, b.file.tau, b.az, b.hz,
                zero_fill(vp.f_process), keff, zero_fill(vp.g_report.prices));
  CHECK(rep.telescopes);
}
