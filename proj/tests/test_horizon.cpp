#include <doctest.h>

#include "tauhedge/gen.hpp"
#include "tauhedge/market.hpp"
#include "tauhedge/model_io.hpp"
#include "tauhedge/verify.hpp"

using namespace tauhedge;

namespace {

FilteredSpace two_period_space() {
  // 4 outcomes, T = 2, binary split then singletons
  Filtration filt;
  filt.push_back(Partition::trivial(4));
  filt.push_back(Partition(4, {{0, 1}, {2, 3}}));
  filt.push_back(Partition::singletons(4));
  return FilteredSpace::create({"uu", "ud", "du", "dd"},
                               {Rat(1, 4), Rat(1, 8), Rat(1, 8), Rat(1, 2)}, filt);
}

}  // namespace

TEST_CASE("azema pair by direct enumeration") {
  FilteredSpace sp = two_period_space();
  RandomTime tau{{1, 2, RandomTime::kNever, 0}};
  AzemaPair az = azema(sp, tau);
  // oracle: average the survival indicators per block by hand
  // t=1, block {uu,ud}: {tau>1} = {ud} -> (1/8)/(3/8) = 1/3
  CHECK(az.G[1][0] == XRat(Rat(1, 3)));
  CHECK(az.G[1][1] == XRat(Rat(1, 3)));
  // t=1, block {du,dd}: {tau>1} = {du} -> (1/8)/(5/8) = 1/5
  CHECK(az.G[1][2] == XRat(Rat(1, 5)));
  // Gtilde_1 on {uu,ud}: {tau>=1} = both -> 1
  CHECK(az.Gtilde[1][0] == XRat(1));
  // Gtilde_1 on {du,dd}: {tau>=1} = {du} -> 1/5
  CHECK(az.Gtilde[1][2] == XRat(Rat(1, 5)));
  // G_0 = P(tau > 0) = 1/2, Gtilde_0 = 1
  CHECK(az.G[0][0] == XRat(Rat(1, 2)));
  CHECK(az.Gtilde[0][0] == XRat(1));
}

TEST_CASE("enlargement structure") {
  FilteredSpace sp = two_period_space();
  RandomTime tau{{1, 2, RandomTime::kNever, 0}};
  Filtration g = enlarge(sp, tau);
  CHECK(g[0].n_blocks() == 2);  // {tau=0} vs {tau>0}
  // every G_t refines both F_t and G_{t-1}; 1{tau<=t} is G_t-measurable
  for (int t = 0; t <= sp.horizon; ++t) {
    CHECK(g[t].refines(sp.at(t)));
    if (t > 0) CHECK(g[t].refines(g[t - 1]));
    RandVar ind(sp.n_outcomes());
    for (int w = 0; w < sp.n_outcomes(); ++w) ind[w] = XRat(tau.occurs_by(w, t) ? 1 : 0);
    CHECK(ind.is_measurable(g[t]));
  }
  // tau = never: enlargement collapses to F
  RandomTime never{{RandomTime::kNever, RandomTime::kNever, RandomTime::kNever,
                    RandomTime::kNever}};
  Filtration gf = enlarge(sp, never);
  for (int t = 0; t <= sp.horizon; ++t) CHECK(gf[t].n_blocks() == sp.at(t).n_blocks());
}

TEST_CASE("reduction to the public filtration") {
  FilteredSpace sp = two_period_space();
  RandomTime tau{{1, 2, RandomTime::kNever, 0}};
  Filtration g = enlarge(sp, tau);

  RandVar c = RandVar::constant(4, XRat(9));
  RandVar r = reduce(sp, g, tau, c, 1);
  for (int w = 0; w < 4; ++w) CHECK(r[w] == XRat(9));  // every F_0 block meets {tau>=1}

  // X = 1{tau <= t-1} vanishes on blocks meeting {tau >= t}
  RandVar ind(4);
  for (int w = 0; w < 4; ++w) ind[w] = XRat(tau.occurs_by(w, 0) ? 1 : 0);
  RandVar r2 = reduce(sp, g, tau, ind, 1);
  for (int w = 0; w < 4; ++w) CHECK(r2[w] == XRat(0));

  // G_0 has blocks {tau=0} = {dd} and {tau>0} = {uu,ud,du}; this variable is
  // not constant on the alive block
  RandVar not_meas(4);
  not_meas[0] = XRat(1);
  CHECK_THROWS_AS(reduce(sp, g, tau, not_meas, 1), std::invalid_argument);
}

TEST_CASE("deflator martingale and support identities") {
  // Gtilde > 0 everywhere (every singleton F_2 block still alive at 2)
  // forces Z^F = 1 and Qtilde = P
  FilteredSpace sp = two_period_space();
  RandomTime tau{{2, 2, RandomTime::kNever, 2}};
  AzemaPair az = azema(sp, tau);
  Deflator d = deflator(sp, az);
  for (int t = 0; t <= 2; ++t)
    for (int w = 0; w < 4; ++w) CHECK(d.ZF[t][w] == XRat(1));
  for (int w = 0; w < 4; ++w) CHECK(d.tildeQ.w[w] == sp.prob[w]);

  // correlated tau with a deadzone: Z^F is a martingale and reweights
  RandomTime tau2{{1, 2, RandomTime::kNever, 0}};
  Deflator d2 = deflator(sp, azema(sp, tau2));
  CHECK(is_martingale(d2.ZF, sp.filtration, Measure::base(sp)));
  Rat total(0);
  for (int w = 0; w < 4; ++w) total += d2.tildeQ.w[w];
  CHECK(total == Rat(1));
}

TEST_CASE("hazard triplet on degenerate and correlated horizons") {
  FilteredSpace sp = two_period_space();
  Measure P = Measure::base(sp);
  RandomTime tau{{1, 2, RandomTime::kNever, 0}};
  AzemaPair az = azema(sp, tau);
  HazardTriplet hz = hazard(sp, tau, az);
  CHECK(hz.m[0][0] == XRat(1));
  CHECK(is_martingale(hz.m, sp.filtration, P));
  Filtration g = enlarge(sp, tau);
  CHECK(is_martingale(hz.NG, g, P));
  // DoF is nondecreasing and F-adapted
  for (int t = 1; t <= 2; ++t) {
    CHECK((hz.DoF[t] - hz.DoF[t - 1]).is_measurable(sp.at(t)));
    for (int w = 0; w < 4; ++w) CHECK(hz.DoF[t][w] >= hz.DoF[t - 1][w]);
  }
}

TEST_CASE("transform carries martingales to the enlarged filtration") {
  FilteredSpace sp = two_period_space();
  Measure P = Measure::base(sp);
  RandomTime tau{{1, 2, RandomTime::kNever, 0}};
  AzemaPair az = azema(sp, tau);
  Filtration g = enlarge(sp, tau);

  Process c(3, RandVar::constant(4, XRat(5)));
  Process tc = transform_T(sp, tau, az, c);
  for (int t = 0; t <= 2; ++t)
    for (int w = 0; w < 4; ++w) CHECK(tc[t][w] == XRat(0));

  Rng rng(7);
  for (int it = 0; it < 40; ++it) {
    Process m(3, RandVar(4));
    for (int w = 0; w < 4; ++w) m[0][w] = XRat(rng.small_rat(4, 3, true));
    // make m[0] F_0-measurable (trivial F_0: constant)
    m[0] = RandVar::constant(4, m[0][0]);
    for (int t = 1; t <= 2; ++t) {
      RandVar raw(4);
      for (int w = 0; w < 4; ++w) raw[w] = XRat(rng.small_rat(4, 3, true));
      // project to F_t-measurable values
      for (const auto& blk : sp.at(t).blocks())
        for (int w : blk) raw[w] = raw[blk.front()];
      RandVar drift = cond_expect(raw, sp.at(t - 1), P).value;
      m[t] = m[t - 1] + raw - drift;
    }
    REQUIRE(is_martingale(m, sp.filtration, P));
    CHECK(is_martingale(transform_T(sp, tau, az, m), g, P));
  }
}

TEST_CASE("universal-preservation equivalence (b) <=> (c) on generated horizons") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.regime = seed % 2 ? TauRegime::Correlated : TauRegime::WithDeadzone;
    cfg.with_claim = false;
    ModelFile m = gen_model(cfg);
    AzemaPair az = azema(m.space, m.tau);
    Deflator d = deflator(m.space, az);
    bool z_one = true;
    for (int t = 1; t <= m.space.horizon; ++t)
      for (int w = 0; w < m.space.n_outcomes(); ++w)
        if (!(d.ZF[t][w] == XRat(1))) z_one = false;
    bool sets_equal = true;
    for (int t = 1; t <= m.space.horizon; ++t)
      for (int w = 0; w < m.space.n_outcomes(); ++w) {
        bool g_zero = az.G[t - 1][w].sign() == 0;
        bool gt_zero = az.Gtilde[t][w].sign() == 0;
        if (g_zero != gt_zero) sets_equal = false;
      }
    CHECK(z_one == sets_equal);
  }
}
