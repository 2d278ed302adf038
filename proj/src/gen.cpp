#include "tauhedge/gen.hpp"

#include <algorithm>
#include <numeric>

namespace tauhedge {

std::string regime_name(TauRegime r) {
  switch (r) {
    case TauRegime::Independent: return "independent";
    case TauRegime::Correlated: return "correlated";
    case TauRegime::WithDeadzone: return "with_deadzone";
    case TauRegime::ZIdentity: return "z_identity";
  }
  throw std::logic_error("unknown regime");
}

TauRegime regime_from_name(const std::string& name) {
  if (name == "independent") return TauRegime::Independent;
  if (name == "correlated") return TauRegime::Correlated;
  if (name == "with_deadzone") return TauRegime::WithDeadzone;
  if (name == "z_identity") return TauRegime::ZIdentity;
  throw std::invalid_argument("unknown tau regime '" + name + "'");
}

namespace {

// A filtration tree: node lists per level, each node knows its parent.
struct Tree {
  int T;
  std::vector<std::vector<int>> parent;      // parent[t][node] for t >= 1
  std::vector<int> level_count;              // nodes per level
  std::vector<std::vector<int>> outcome_of;  // outcome_of[leafnode] = outcome ids (level T)
};

Tree grow_tree(Rng& rng, int T, int max_leaves) {
  Tree tr;
  tr.T = T;
  tr.level_count.assign(T + 1, 0);
  tr.parent.assign(T + 1, {});
  tr.level_count[0] = rng.coin(1, 3) ? 2 : 1;
  if (tr.level_count[0] > max_leaves) tr.level_count[0] = 1;
  for (int t = 1; t <= T; ++t) {
    int budget = max_leaves;
    // reserve one leaf for every remaining node so the tree always completes
    std::vector<int> kids(tr.level_count[t - 1], 1);
    int count = tr.level_count[t - 1];
    for (int node = 0; node < tr.level_count[t - 1]; ++node) {
      int extra = rng.coin(3, 4) ? rng.pick(1, 2) : 0;
      while (extra > 0 && count < budget) {
        ++kids[node];
        ++count;
        --extra;
      }
    }
    for (int node = 0; node < tr.level_count[t - 1]; ++node)
      for (int c = 0; c < kids[node]; ++c) tr.parent[t].push_back(node);
    tr.level_count[t] = count;
  }
  return tr;
}

Filtration tree_filtration(const Tree& tr, const std::vector<int>& leaf_of_outcome, int n) {
  // node index of each outcome per level, walking parents up from the leaf
  std::vector<std::vector<int>> node_at(tr.T + 1, std::vector<int>(n));
  for (int w = 0; w < n; ++w) {
    int node = leaf_of_outcome[w];
    node_at[tr.T][w] = node;
    for (int t = tr.T; t >= 1; --t) {
      node = tr.parent[t][node];
      node_at[t - 1][w] = node;
    }
  }
  Filtration filt;
  for (int t = 0; t <= tr.T; ++t) {
    std::vector<std::vector<int>> blocks(tr.level_count[t]);
    for (int w = 0; w < n; ++w) blocks[node_at[t][w]].push_back(w);
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                                [](const auto& b) { return b.empty(); }),
                 blocks.end());
    filt.emplace_back(n, std::move(blocks));
  }
  return filt;
}

std::vector<Rat> normalized_weights(Rng& rng, int n, int denom_bound) {
  std::vector<int> w(n);
  long total = 0;
  for (int i = 0; i < n; ++i) {
    w[i] = rng.pick(1, denom_bound);
    total += w[i];
  }
  std::vector<Rat> p(n);
  for (int i = 0; i < n; ++i) p[i] = Rat(w[i], total);
  return p;
}

int random_tau_value(Rng& rng, int T) {
  // bias toward "never" so survival sets stay rich
  if (rng.coin(2, 5)) return RandomTime::kNever;
  return rng.pick(0, T);
}

bool has_deadzone(const FilteredSpace& space, const AzemaPair& az) {
  for (int t = 1; t <= space.horizon; ++t)
    for (int w = 0; w < space.n_outcomes(); ++w)
      if (az.Gtilde[t][w].sign() == 0 && az.G[t - 1][w].sign() > 0) return true;
  return false;
}

std::vector<int> stopping_time_tau(Rng& rng, const FilteredSpace& space) {
  const int n = space.n_outcomes();
  std::vector<int> tau(n, RandomTime::kNever);
  for (int t = 0; t <= space.horizon; ++t)
    for (const auto& blk : space.at(t).blocks()) {
      if (tau[blk.front()] != RandomTime::kNever) continue;
      bool all_unset = std::all_of(blk.begin(), blk.end(),
                                   [&](int w) { return tau[w] == RandomTime::kNever; });
      if (all_unset && rng.coin(1, 4))
        for (int w : blk) tau[w] = t;
    }
  return tau;
}

}  // namespace

Process gen_adapted_process(Rng& rng, const FilteredSpace& space, bool nonneg, int denom_bound) {
  const int n = space.n_outcomes();
  Process p(space.horizon + 1, RandVar(n));
  for (int t = 0; t <= space.horizon; ++t)
    for (const auto& blk : space.at(t).blocks()) {
      XRat prev = t == 0 ? XRat(rng.small_rat(denom_bound, 3, !nonneg)) : p[t - 1][blk.front()];
      XRat val = t == 0 ? prev : prev + XRat(rng.small_rat(denom_bound, 2, true));
      if (nonneg && val < XRat(0)) val = XRat(0);
      for (int w : blk) p[t][w] = val;
    }
  return p;
}

ModelFile gen_model(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  const int max_retries = 400;

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    int T = rng.pick(1, cfg.max_T);
    int d = rng.pick(1, cfg.max_d);

    std::vector<int> tau_vals;
    std::vector<int> leaf_of_outcome;
    std::optional<std::vector<Rat>> product_weights;
    Tree tr;
    int n = 0;

    if (cfg.regime == TauRegime::Independent) {
      // product construction: market tree x independent tau coordinate, with
      // product weights so tau is genuinely independent of F
      std::vector<int> support;
      for (int v = 0; v <= T; ++v)
        if (rng.coin(1, 3)) support.push_back(v);
      support.push_back(RandomTime::kNever);
      if (static_cast<int>(support.size()) < 2) support.insert(support.begin(), rng.pick(0, T));
      int k = static_cast<int>(support.size());
      tr = grow_tree(rng, T, std::max(2, cfg.max_outcomes / k));
      int leaves = tr.level_count[T];
      n = leaves * k;
      std::vector<int> wl(leaves), wt(k);
      long total_l = 0, total_t = 0;
      for (int& v : wl) total_l += (v = rng.pick(1, cfg.denom_bound));
      for (int& v : wt) total_t += (v = rng.pick(1, cfg.denom_bound));
      product_weights.emplace();
      for (int leaf = 0; leaf < leaves; ++leaf)
        for (int j = 0; j < k; ++j) {
          leaf_of_outcome.push_back(leaf);
          tau_vals.push_back(support[j]);
          product_weights->push_back(Rat(wl[leaf], total_l) * Rat(wt[j], total_t));
        }
    } else {
      tr = grow_tree(rng, T, cfg.max_outcomes);
      int leaves = tr.level_count[T];
      // occasional leaf multiplicity 2 so F_T blocks are not all singletons
      for (int leaf = 0; leaf < leaves; ++leaf) {
        int copies = (n + (leaves - leaf) < cfg.max_outcomes && rng.coin(1, 3)) ? 2 : 1;
        for (int c = 0; c < copies; ++c) {
          leaf_of_outcome.push_back(leaf);
          ++n;
        }
      }
      n = static_cast<int>(leaf_of_outcome.size());
      tau_vals.assign(n, 0);
      for (int w = 0; w < n; ++w) tau_vals[w] = random_tau_value(rng, T);
    }
    if (n < 2) continue;

    std::vector<std::string> ids(n);
    for (int w = 0; w < n; ++w) ids[w] = "w" + std::to_string(w);
    Filtration filt = tree_filtration(tr, leaf_of_outcome, n);
    FilteredSpace space = FilteredSpace::create(
        ids, product_weights ? *product_weights : normalized_weights(rng, n, cfg.denom_bound),
        filt);

    if (cfg.regime == TauRegime::ZIdentity && rng.coin(1, 2))
      tau_vals = stopping_time_tau(rng, space);

    if (cfg.regime == TauRegime::WithDeadzone) {
      // force an F_{t*-1} block whose children split into an all-dead branch
      // and a surviving sibling
      int tstar = rng.pick(1, T);
      bool placed = false;
      for (const auto& blk : space.at(tstar - 1).blocks()) {
        std::vector<int> child_blocks;
        for (int w : blk) child_blocks.push_back(space.at(tstar).block_of(w));
        std::sort(child_blocks.begin(), child_blocks.end());
        child_blocks.erase(std::unique(child_blocks.begin(), child_blocks.end()),
                           child_blocks.end());
        if (child_blocks.size() < 2) continue;
        int dead = child_blocks[rng.pick(0, static_cast<int>(child_blocks.size()) - 1)];
        for (int w : blk) {
          if (space.at(tstar).block_of(w) == dead) tau_vals[w] = rng.pick(0, tstar - 1);
          else if (tau_vals[w] != RandomTime::kNever && tau_vals[w] < tstar)
            tau_vals[w] = rng.coin() ? RandomTime::kNever : tstar == T ? T : rng.pick(tstar, T);
        }
        placed = true;
        break;
      }
      if (!placed) continue;
    }

    RandomTime tau = RandomTime::validated(tau_vals, T);
    AzemaPair az = azema(space, tau);

    // regime postconditions
    if (cfg.regime == TauRegime::WithDeadzone && !has_deadzone(space, az)) continue;
    if (cfg.regime == TauRegime::ZIdentity && has_deadzone(space, az)) continue;

    ModelFile m;
    m.space = space;
    m.tau = tau;
    m.d = d;

    bool priced = false;
    for (int s_attempt = 0; s_attempt < 60 && !priced; ++s_attempt) {
      m.S.clear();
      for (int a = 0; a < d; ++a) m.S.push_back(gen_adapted_process(rng, space, true, 4));
      if (!cfg.force_aip_tilde) {
        priced = true;
        break;
      }
      Deflator defl = deflator(space, az);
      PriceSystem ps = build_derived(space, az, tau, m.S);
      priced = aip(model_tilde(space, ps, defl), space).overall;
    }
    if (!priced) continue;

    if (cfg.with_claim) {
      ClaimSection c;
      static const ClaimClass kClasses[] = {ClaimClass::SurvivalStrict, ClaimClass::SurvivalIncl,
                                            ClaimClass::AtDefault, ClaimClass::Mixed};
      c.cls = kClasses[rng.pick(0, 3)];
      c.g = gen_adapted_process(rng, space, cfg.nonneg_claims, cfg.denom_bound);
      c.K = gen_adapted_process(rng, space, cfg.nonneg_claims, cfg.denom_bound);
      m.claim = std::move(c);
    }
    return m;
  }
  throw std::invalid_argument("gen_model: regime '" + regime_name(cfg.regime) +
                              "' unreachable under the given bounds");
}

}  // namespace tauhedge
