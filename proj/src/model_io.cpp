#include "tauhedge/model_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace tauhedge {

using nlohmann::json;

static std::string tau_to_json(int t) { return t == RandomTime::kNever ? "inf" : std::to_string(t); }

static Process parse_process(const json& arr, const std::map<std::string, int>& index,
                             const std::vector<std::string>& ids, int T, const std::string& what) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != T + 1)
    throw std::invalid_argument(what + ": expected " + std::to_string(T + 1) + " time slices");
  Process p(T + 1, RandVar(static_cast<int>(ids.size())));
  for (int t = 0; t <= T; ++t) {
    const json& slice = arr[t];
    if (!slice.is_array() || slice.size() != ids.size())
      throw std::invalid_argument(what + ": time " + std::to_string(t) + " has wrong outcome count");
    for (size_t w = 0; w < ids.size(); ++w)
      p[t][static_cast<int>(w)] = XRat(rat_from_string(slice[w].get<std::string>()));
  }
  return p;
}

ModelFile parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model: not valid JSON: ") + e.what());
  }
  try {
    ModelFile m;
    int T = j.at("horizon").get<int>();
    m.d = j.at("assets").get<int>();
    if (T < 0 || m.d < 1) throw std::invalid_argument("model: horizon/assets out of range");

    std::vector<std::string> ids;
    std::vector<Rat> prob;
    std::vector<int> tau;
    for (const auto& o : j.at("outcomes")) {
      ids.push_back(o.at("id").get<std::string>());
      prob.push_back(rat_from_string(o.at("prob").get<std::string>()));
      const json& tv = o.at("tau");
      if (tv.is_string()) {
        if (tv.get<std::string>() != "inf")
          throw std::invalid_argument("model: tau must be an integer or \"inf\"");
        tau.push_back(RandomTime::kNever);
      } else {
        tau.push_back(tv.get<int>());
      }
    }
    std::map<std::string, int> index;
    for (size_t i = 0; i < ids.size(); ++i) {
      if (index.count(ids[i])) throw std::invalid_argument("model: duplicate outcome id '" + ids[i] + "'");
      index[ids[i]] = static_cast<int>(i);
    }

    const json& filt = j.at("filtration");
    if (!filt.is_array() || static_cast<int>(filt.size()) != T + 1)
      throw std::invalid_argument("model: filtration must have horizon+1 partitions");
    Filtration filtration;
    for (const auto& part : filt) {
      std::vector<std::vector<int>> blocks;
      for (const auto& blk : part) {
        std::vector<int> b;
        for (const auto& id : blk) {
          auto it = index.find(id.get<std::string>());
          if (it == index.end())
            throw std::invalid_argument("model: unknown outcome id '" + id.get<std::string>() +
                                        "' in filtration");
          b.push_back(it->second);
        }
        blocks.push_back(std::move(b));
      }
      filtration.emplace_back(static_cast<int>(ids.size()), std::move(blocks));
    }

    m.space = FilteredSpace::create(ids, std::move(prob), std::move(filtration));
    m.tau = RandomTime::validated(std::move(tau), T);

    const json& prices = j.at("prices");
    if (!prices.is_array() || static_cast<int>(prices.size()) != m.d)
      throw std::invalid_argument("model: prices must hold one block per asset");
    for (int a = 0; a < m.d; ++a)
      m.S.push_back(parse_process(prices[a], index, ids, T, "prices[" + std::to_string(a) + "]"));

    if (j.contains("claim")) {
      ClaimSection c;
      c.cls = claim_class_from_name(j["claim"].at("class").get<std::string>());
      c.g = parse_process(j["claim"].at("g"), index, ids, T, "claim.g");
      c.K = parse_process(j["claim"].at("K"), index, ids, T, "claim.K");
      m.claim = std::move(c);
    }
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("model: schema violation: ") + e.what());
  }
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

static json process_to_json(const Process& p) {
  json arr = json::array();
  for (const auto& slice : p) {
    json row = json::array();
    for (int w = 0; w < slice.size(); ++w) row.push_back(rat_to_string(slice[w].rat()));
    arr.push_back(std::move(row));
  }
  return arr;
}

std::string serialize_model(const ModelFile& m) {
  json j;
  j["schema"] = "market-model/1";
  j["horizon"] = m.space.horizon;
  j["assets"] = m.d;
  json outs = json::array();
  for (int w = 0; w < m.space.n_outcomes(); ++w) {
    json o;
    o["id"] = m.space.outcome_ids[w];
    o["prob"] = rat_to_string(m.space.prob[w]);
    if (m.tau.value[w] == RandomTime::kNever) o["tau"] = "inf";
    else o["tau"] = m.tau.value[w];
    outs.push_back(std::move(o));
  }
  j["outcomes"] = std::move(outs);
  json filt = json::array();
  for (const auto& part : m.space.filtration) {
    json p = json::array();
    for (const auto& blk : part.blocks()) {
      json b = json::array();
      for (int w : blk) b.push_back(m.space.outcome_ids[w]);
      p.push_back(std::move(b));
    }
    filt.push_back(std::move(p));
  }
  j["filtration"] = std::move(filt);
  json prices = json::array();
  for (const auto& asset : m.S) prices.push_back(process_to_json(asset));
  j["prices"] = std::move(prices);
  if (m.claim) {
    json c;
    c["class"] = claim_class_name(m.claim->cls);
    c["g"] = process_to_json(m.claim->g);
    c["K"] = process_to_json(m.claim->K);
    j["claim"] = std::move(c);
  }
  return j.dump(2) + "\n";
}

void save_model(const ModelFile& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << serialize_model(m);
}

VulnerableModels ModelBundle::views() const {
  return VulnerableModels{&file.space, &file.tau, &az, &gfilt, &ps, &defl};
}

ModelBundle bundle(ModelFile m) {
  ModelBundle b;
  b.file = std::move(m);
  b.az = azema(b.file.space, b.file.tau);
  b.gfilt = enlarge(b.file.space, b.file.tau);
  b.defl = deflator(b.file.space, b.az);
  b.hz = hazard(b.file.space, b.file.tau, b.az);
  b.ps = build_derived(b.file.space, b.az, b.file.tau, b.file.S);
  if (b.file.claim)
    b.kit = claim_kit(b.file.claim->cls, b.file.claim->g, b.file.claim->K, b.file.space, b.az);
  return b;
}

}  // namespace tauhedge
