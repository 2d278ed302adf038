#pragma once

#include <optional>
#include <string>

#include "tauhedge/pricing.hpp"

namespace tauhedge {

struct ClaimSection {
  ClaimClass cls = ClaimClass::SurvivalStrict;
  Process g;
  Process K;
};

// On-disk model: an exact finite market plus random horizon, with rationals
// serialized as strings so nothing ever round-trips through floats.
struct ModelFile {
  FilteredSpace space;
  RandomTime tau;
  int d = 0;
  std::vector<Process> S;
  std::optional<ClaimSection> claim;
};

ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);
std::string serialize_model(const ModelFile& m);  // canonical form
void save_model(const ModelFile& m, const std::string& path);

// Everything derived from a model file that the suites need.
struct ModelBundle {
  ModelFile file;
  AzemaPair az;
  Filtration gfilt;
  Deflator defl;
  HazardTriplet hz;
  PriceSystem ps;
  std::optional<ClaimKit> kit;

  VulnerableModels views() const;
};

ModelBundle bundle(ModelFile m);

}  // namespace tauhedge
