#include <doctest.h>

#include "tauhedge/gen.hpp"
#include "tauhedge/prob.hpp"

using namespace tauhedge;

namespace {

FilteredSpace four_equal() {
  Filtration filt;
  filt.push_back(Partition::trivial(4));
  filt.push_back(Partition(4, {{0, 1}, {2, 3}}));
  return FilteredSpace::create({"a", "b", "c", "d"},
                               {Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)}, filt);
}

RandVar rv(std::vector<int> xs) {
  RandVar r(static_cast<int>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) r[static_cast<int>(i)] = XRat(xs[i]);
  return r;
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
  CHECK(rat_from_string("3/6") == Rat(1, 2));
  CHECK(rat_from_string("-4/2") == Rat(-2));
  CHECK(rat_to_string(Rat(6, 4)) == "3/2");
  CHECK(rat_to_string(Rat(5)) == "5");
  CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("abc"), std::invalid_argument);
}

TEST_CASE("extended rationals order and guard against undefined arithmetic") {
  XRat ni = XRat::neg_inf(), pi = XRat::pos_inf();
  CHECK(ni < XRat(Rat(-1000000)));
  CHECK(XRat(Rat(1000000)) < pi);
  CHECK(ni < pi);
  CHECK((pi + XRat(5)).is_pos_inf());
  CHECK((ni * XRat(-2)).is_pos_inf());
  CHECK_THROWS_AS(pi + ni, std::domain_error);
  CHECK_THROWS_AS(pi * XRat(0), std::domain_error);
  CHECK(XRat(Rat(-3, 2)).negative_part() == XRat(Rat(3, 2)));
}

TEST_CASE("partition validation and refinement") {
  CHECK_THROWS_AS(Partition(3, {{0, 1}, {1, 2}}), std::invalid_argument);  // overlap
  CHECK_THROWS_AS(Partition(3, {{0, 1}}), std::invalid_argument);          // not covering
  CHECK_THROWS_AS(Partition(3, {{0, 1, 2}, {}}), std::invalid_argument);   // empty block
  Partition coarse(4, {{0, 1}, {2, 3}});
  Partition fine = Partition::singletons(4);
  CHECK(fine.refines(coarse));
  CHECK_FALSE(coarse.refines(fine));
  Partition cross(4, {{0, 2}, {1, 3}});
  CHECK_FALSE(cross.refines(coarse));
}

TEST_CASE("filtered space invariants") {
  Filtration filt;
  filt.push_back(Partition::trivial(2));
  filt.push_back(Partition::singletons(2));
  CHECK_THROWS_WITH_AS(
      FilteredSpace::create({"a", "b"}, {Rat(1, 2), Rat(1, 3)}, filt),
      doctest::Contains("sum"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(FilteredSpace::create({"a", "b"}, {Rat(1), Rat(0)}, filt),
                       doctest::Contains("zero-mass"), std::invalid_argument);
  Filtration bad;
  bad.push_back(Partition::singletons(2));
  bad.push_back(Partition::trivial(2));  // coarsens instead of refining
  CHECK_THROWS_WITH_AS(FilteredSpace::create({"a", "b"}, {Rat(1, 2), Rat(1, 2)}, bad),
                       doctest::Contains("refine"), std::invalid_argument);
}

TEST_CASE("conditional expectation per block") {
  FilteredSpace sp = four_equal();
  Measure P = Measure::base(sp);
  MaskedVar e = cond_expect(rv({1, 2, 3, 4}), sp.at(1), P);
  CHECK(e.get(0) == XRat(Rat(3, 2)));
  CHECK(e.get(1) == XRat(Rat(3, 2)));
  CHECK(e.get(2) == XRat(Rat(7, 2)));
  CHECK(e.get(3) == XRat(Rat(7, 2)));

  // constant stays constant under any measure with positive block mass
  RandVar z(4);
  z[0] = XRat(4);  // density concentrated on the first outcome
  Measure Q = Measure::from_density(sp, z);
  MaskedVar c = cond_expect(RandVar::constant(4, XRat(7)), sp.at(1), Q);
  CHECK(c.get(0) == XRat(7));
  CHECK_FALSE(c.is_defined(2));  // mu-null block is masked
  CHECK_THROWS_AS(c.get(2), std::domain_error);

  RandVar with_inf(4);
  with_inf[0] = XRat::pos_inf();
  CHECK_THROWS_AS(cond_expect(with_inf, sp.at(1), P), std::domain_error);
}

TEST_CASE("conditional essential supremum and infimum") {
  Filtration filt;
  filt.push_back(Partition::trivial(3));
  filt.push_back(Partition::singletons(3));
  FilteredSpace sp =
      FilteredSpace::create({"x", "y", "z"}, {Rat(1, 3), Rat(1, 3), Rat(1, 3)}, filt);
  Measure P = Measure::base(sp);

  CHECK(cond_esssup(rv({1, 2, 3}), sp.at(0), P).get(0) == XRat(3));
  CHECK(cond_essinf(rv({1, 2, 3}), sp.at(0), P).get(0) == XRat(1));

  std::vector<RandVar> fam = {rv({1, -1, 0}), -rv({1, -1, 0})};
  MaskedVar s = cond_esssup(std::span(fam), sp.at(1), P);
  CHECK(s.get(0) == XRat(1));
  CHECK(s.get(1) == XRat(1));
  CHECK(s.get(2) == XRat(0));

  CHECK_THROWS_AS(cond_esssup(std::span<const RandVar>{}, sp.at(0), P), std::domain_error);
}

TEST_CASE("null outcomes are excluded from the conditional support") {
  Filtration filt;
  filt.push_back(Partition::trivial(2));
  filt.push_back(Partition::trivial(2));
  FilteredSpace sp = FilteredSpace::create({"a", "b"}, {Rat(1, 2), Rat(1, 2)}, filt);
  RandVar z(2);
  z[1] = XRat(2);  // weight 0 on the first outcome
  Measure Q = Measure::from_density(sp, z);
  CHECK(cond_esssup(rv({5, 0}), sp.at(0), Q).get(0) == XRat(0));
}

TEST_CASE("essinf is -esssup(-Gamma) on randomized inputs") {
  Rng rng(99);
  for (int it = 0; it < 60; ++it) {
    GenConfig cfg;
    cfg.seed = 1000 + it;
    cfg.with_claim = false;
    ModelFile m = gen_model(cfg);
    const FilteredSpace& sp = m.space;
    Measure P = Measure::base(sp);
    int t = rng.pick(0, sp.horizon);
    std::vector<RandVar> fam;
    std::vector<RandVar> neg;
    for (int k = rng.pick(1, 3); k > 0; --k) {
      RandVar x(sp.n_outcomes());
      for (int w = 0; w < sp.n_outcomes(); ++w) x[w] = XRat(rng.small_rat(6, 4, true));
      neg.push_back(-x);
      fam.push_back(std::move(x));
    }
    MaskedVar lhs = cond_essinf(std::span(fam), sp.at(t), P);
    MaskedVar rhs = cond_esssup(std::span(neg), sp.at(t), P);
    for (int w = 0; w < sp.n_outcomes(); ++w) CHECK(lhs.get(w) == -rhs.get(w));
  }
}

TEST_CASE("measurability levels") {
  FilteredSpace sp = four_equal();
  CHECK(measurable_level(rv({5, 5, 5, 5}), sp.filtration) == 0);
  CHECK(measurable_level(rv({1, 1, 2, 2}), sp.filtration) == 1);
  CHECK(measurable_level(rv({1, 2, 3, 4}), sp.filtration) == std::nullopt);
  CHECK(rv({1, 1, 2, 2}).is_measurable(sp.at(1)));
  CHECK_FALSE(rv({1, 2, 2, 2}).is_measurable(sp.at(1)));
}

TEST_CASE("masked reads with vanishing factors") {
  MaskedVar m(2);
  m.defined[1] = false;
  CHECK(m.get_times(1, XRat(0)) == XRat(0));
  CHECK_THROWS_AS(m.get_times(1, XRat(1)), std::logic_error);
}
