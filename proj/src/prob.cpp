#include "tauhedge/prob.hpp"

#include <algorithm>
#include <sstream>

namespace tauhedge {

Rat rat_from_string(const std::string& s) {
  auto bad = [&] { throw std::invalid_argument("malformed rational: '" + s + "'"); };
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (s.empty()) bad();
      return Rat(boost::multiprecision::cpp_int(s));
    }
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in rational: '" + s + "'");
    return Rat(num, den);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    bad();
  }
  return Rat(0);
}

std::string rat_to_string(const Rat& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

std::string XRat::str() const {
  switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "+inf";
    default: return rat_to_string(q_);
  }
}

Partition::Partition(int n_outcomes, std::vector<std::vector<int>> blocks)
    : n_outcomes_(n_outcomes), blocks_(std::move(blocks)) {
  block_of_.assign(n_outcomes_, -1);
  for (auto& blk : blocks_) {
    if (blk.empty()) throw std::invalid_argument("partition: empty block");
    std::sort(blk.begin(), blk.end());
    for (int w : blk) {
      if (w < 0 || w >= n_outcomes_) throw std::invalid_argument("partition: outcome out of range");
      if (block_of_[w] != -1) throw std::invalid_argument("partition: overlapping blocks");
      block_of_[w] = 0;  // provisional; re-indexed below
    }
  }
  for (int w = 0; w < n_outcomes_; ++w)
    if (block_of_[w] == -1) throw std::invalid_argument("partition: does not cover outcome set");
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (int b = 0; b < static_cast<int>(blocks_.size()); ++b)
    for (int w : blocks_[b]) block_of_[w] = b;
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.n_outcomes() != n_outcomes_) return false;
  for (const auto& blk : blocks_) {
    int target = coarser.block_of(blk.front());
    for (int w : blk)
      if (coarser.block_of(w) != target) return false;
  }
  return true;
}

Partition Partition::trivial(int n_outcomes) {
  std::vector<int> all(n_outcomes);
  for (int i = 0; i < n_outcomes; ++i) all[i] = i;
  return Partition(n_outcomes, {all});
}

Partition Partition::singletons(int n_outcomes) {
  std::vector<std::vector<int>> blocks;
  blocks.reserve(n_outcomes);
  for (int i = 0; i < n_outcomes; ++i) blocks.push_back({i});
  return Partition(n_outcomes, blocks);
}

FilteredSpace FilteredSpace::create(std::vector<std::string> outcome_ids, std::vector<Rat> prob,
                                    Filtration filtration) {
  FilteredSpace s;
  s.outcome_ids = std::move(outcome_ids);
  s.prob = std::move(prob);
  s.filtration = std::move(filtration);
  const int n = s.n_outcomes();
  if (n == 0) throw std::invalid_argument("space: no outcomes");
  if (static_cast<int>(s.prob.size()) != n)
    throw std::invalid_argument("space: weight count != outcome count");
  Rat total(0);
  for (int i = 0; i < n; ++i) {
    if (s.prob[i] <= 0)
      throw std::invalid_argument("space: outcome '" + s.outcome_ids[i] +
                                  "' has non-positive weight (zero-mass base outcomes rejected)");
    total += s.prob[i];
  }
  if (total != 1) throw std::invalid_argument("space: weights sum to " + rat_to_string(total) + ", not 1");
  if (s.filtration.empty()) throw std::invalid_argument("space: empty filtration");
  s.horizon = static_cast<int>(s.filtration.size()) - 1;
  for (int t = 0; t <= s.horizon; ++t) {
    if (s.filtration[t].n_outcomes() != n)
      throw std::invalid_argument("space: partition at t=" + std::to_string(t) + " has wrong outcome count");
    if (t > 0 && !s.filtration[t].refines(s.filtration[t - 1])) {
      std::string blocks;
      for (const auto& blk : s.filtration[t].blocks()) {
        int target = s.filtration[t - 1].block_of(blk.front());
        for (int w : blk)
          if (s.filtration[t - 1].block_of(w) != target) {
            blocks = "{";
            for (size_t i = 0; i < blk.size(); ++i)
              blocks += (i ? "," : "") + s.outcome_ids[blk[i]];
            blocks += "} straddles the time-" + std::to_string(t - 1) + " blocks of " +
                      s.outcome_ids[blk.front()] + " and " + s.outcome_ids[w];
            break;
          }
        if (!blocks.empty()) break;
      }
      throw std::invalid_argument("space: partition at t=" + std::to_string(t) +
                                  " does not refine partition at t=" + std::to_string(t - 1) +
                                  ": block " + blocks);
    }
  }
  return s;
}

bool RandVar::all_finite() const {
  return std::all_of(v.begin(), v.end(), [](const XRat& x) { return x.is_finite(); });
}

bool RandVar::is_measurable(const Partition& part) const {
  if (part.n_outcomes() != size()) return false;
  for (const auto& blk : part.blocks())
    for (int w : blk)
      if (!(v[w] == v[blk.front()])) return false;
  return true;
}

RandVar RandVar::constant(int n, const XRat& c) {
  RandVar r(n);
  std::fill(r.v.begin(), r.v.end(), c);
  return r;
}

RandVar RandVar::indicator(int n, std::span<const int> outcomes) {
  RandVar r(n);
  for (int w : outcomes) r.v[w] = XRat(1);
  return r;
}

RandVar RandVar::positive_part() const {
  RandVar r(size());
  for (int i = 0; i < size(); ++i) r.v[i] = v[i].positive_part();
  return r;
}

RandVar RandVar::negative_part() const {
  RandVar r(size());
  for (int i = 0; i < size(); ++i) r.v[i] = v[i].negative_part();
  return r;
}

static void check_same_size(const RandVar& a, const RandVar& b) {
  if (a.size() != b.size()) throw std::invalid_argument("RandVar: size mismatch");
}

RandVar operator+(const RandVar& a, const RandVar& b) {
  check_same_size(a, b);
  RandVar r(a.size());
  for (int i = 0; i < a.size(); ++i) r.v[i] = a.v[i] + b.v[i];
  return r;
}

RandVar operator-(const RandVar& a, const RandVar& b) {
  check_same_size(a, b);
  RandVar r(a.size());
  for (int i = 0; i < a.size(); ++i) r.v[i] = a.v[i] - b.v[i];
  return r;
}

RandVar operator*(const RandVar& a, const RandVar& b) {
  check_same_size(a, b);
  RandVar r(a.size());
  for (int i = 0; i < a.size(); ++i) r.v[i] = a.v[i] * b.v[i];
  return r;
}

RandVar operator-(const RandVar& a) {
  RandVar r(a.size());
  for (int i = 0; i < a.size(); ++i) r.v[i] = -a.v[i];
  return r;
}

std::optional<int> measurable_level(const RandVar& x, const Filtration& filtration) {
  for (int t = 0; t < static_cast<int>(filtration.size()); ++t)
    if (x.is_measurable(filtration[t])) return t;
  return std::nullopt;
}

bool is_adapted(const Process& x, const Filtration& filtration) {
  if (x.size() != filtration.size()) return false;
  for (size_t t = 0; t < x.size(); ++t)
    if (!x[t].is_measurable(filtration[t])) return false;
  return true;
}

bool is_martingale(const Process& x, const Filtration& filtration, const Measure& mu) {
  for (size_t t = 1; t < x.size(); ++t) {
    MaskedVar e = cond_expect(x[t], filtration[t - 1], mu);
    for (int w = 0; w < e.size(); ++w)
      if (e.is_defined(w) && !(e.value[w] == x[t - 1][w])) return false;
  }
  return true;
}

Measure Measure::base(const FilteredSpace& space) {
  Measure mu;
  mu.w = space.prob;
  return mu;
}

Measure Measure::from_density(const FilteredSpace& space, const RandVar& z) {
  if (z.size() != space.n_outcomes()) throw std::invalid_argument("measure: density size mismatch");
  Measure mu;
  mu.w.resize(z.size());
  Rat total(0);
  for (int i = 0; i < z.size(); ++i) {
    const Rat& zi = z[i].rat();
    if (zi < 0) throw std::invalid_argument("measure: negative density");
    mu.w[i] = zi * space.prob[i];
    total += mu.w[i];
  }
  if (total != 1)
    throw std::invalid_argument("measure: density integrates to " + rat_to_string(total) + ", not 1");
  mu.density = z;
  return mu;
}

Rat Measure::block_mass(const std::vector<int>& block) const {
  Rat m(0);
  for (int idx : block) m += w[idx];
  return m;
}

MaskedVar MaskedVar::all_defined(RandVar v) {
  MaskedVar m;
  m.defined.assign(v.size(), true);
  m.value = std::move(v);
  return m;
}

bool MaskedVar::all_defined_everywhere() const {
  return std::all_of(defined.begin(), defined.end(), [](bool b) { return b; });
}

XRat MaskedVar::get_times(int i, const XRat& factor) const {
  if (!defined[i]) {
    if (factor.sign() != 0)
      throw std::logic_error("MaskedVar: masked entry multiplied by nonzero factor");
    return XRat(0);
  }
  return value[i] * factor;
}

MaskedVar cond_expect(const RandVar& x, const Partition& part, const Measure& mu) {
  if (!x.all_finite()) throw std::domain_error("cond_expect: non-finite input value");
  if (x.size() != part.n_outcomes() || x.size() != mu.size())
    throw std::invalid_argument("cond_expect: size mismatch");
  MaskedVar out(x.size());
  for (const auto& blk : part.blocks()) {
    Rat mass = mu.block_mass(blk);
    if (mass == 0) {
      for (int w : blk) {
        out.value[w] = XRat(0);
        out.defined[w] = false;
      }
      continue;
    }
    Rat acc(0);
    for (int w : blk) acc += mu.w[w] * x[w].rat();
    XRat val{acc / mass};
    for (int w : blk) out.value[w] = val;
  }
  return out;
}

static MaskedVar blockwise_extremum(std::span<const RandVar> family, const Partition& part,
                                    const Measure& mu, bool take_max) {
  if (family.empty()) throw std::domain_error("cond_esssup/essinf: empty family");
  const int n = part.n_outcomes();
  for (const auto& g : family)
    if (g.size() != n) throw std::invalid_argument("cond_esssup/essinf: size mismatch");
  if (mu.size() != n) throw std::invalid_argument("cond_esssup/essinf: measure size mismatch");
  MaskedVar out(n);
  for (const auto& blk : part.blocks()) {
    bool seen = false;
    XRat best;
    for (int w : blk) {
      if (mu.w[w] == 0) continue;
      for (const auto& g : family) {
        if (!seen) {
          best = g[w];
          seen = true;
        } else if (take_max ? best < g[w] : g[w] < best) {
          best = g[w];
        }
      }
    }
    for (int w : blk) {
      out.value[w] = seen ? best : XRat(0);
      out.defined[w] = seen;
    }
  }
  return out;
}

MaskedVar cond_esssup(std::span<const RandVar> family, const Partition& part, const Measure& mu) {
  return blockwise_extremum(family, part, mu, /*take_max=*/true);
}

MaskedVar cond_essinf(std::span<const RandVar> family, const Partition& part, const Measure& mu) {
  return blockwise_extremum(family, part, mu, /*take_max=*/false);
}

MaskedVar cond_esssup(const RandVar& x, const Partition& part, const Measure& mu) {
  return cond_esssup(std::span<const RandVar>(&x, 1), part, mu);
}

MaskedVar cond_essinf(const RandVar& x, const Partition& part, const Measure& mu) {
  return cond_essinf(std::span<const RandVar>(&x, 1), part, mu);
}

}  // namespace tauhedge
