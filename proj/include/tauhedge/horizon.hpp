#pragma once

#include <limits>

#include "tauhedge/prob.hpp"

namespace tauhedge {

// Random time valued in {0,...,T} or "never" (tau > T). The sentinel never
// enters arithmetic: every use is a comparison against a time in {0..T}.
struct RandomTime {
  static constexpr int kNever = std::numeric_limits<int>::max();
  std::vector<int> value;  // per outcome

  int size() const { return static_cast<int>(value.size()); }
  bool occurs_by(int w, int t) const { return value[w] <= t; }          // {tau <= t}
  bool alive_at(int w, int t) const { return value[w] >= t; }           // {tau >= t}
  bool survives(int w, int t) const { return value[w] > t; }            // {tau > t}
  static RandomTime validated(std::vector<int> v, int horizon);
};

// The Azema supermartingale pair: G_t = P(tau > t | F_t), Gtilde_t = P(tau >= t | F_t).
struct AzemaPair {
  Process G;
  Process Gtilde;
};

AzemaPair azema(const FilteredSpace& space, const RandomTime& tau);

// Progressive enlargement: block of G_t = (F_t block) n ({tau = s}, s <= t, or {tau > t}).
Filtration enlarge(const FilteredSpace& space, const RandomTime& tau);

// The F-reduction of a G_{t-1}-measurable variable: X' is F_{t-1}-measurable
// with X' 1{tau>=t} = X 1{tau>=t}; on F_{t-1} blocks disjoint from {tau>=t},
// X' := 0 by convention.
RandVar reduce(const FilteredSpace& space, const Filtration& enlarged, const RandomTime& tau,
               const RandVar& x, int t);

// Z^F_t = prod_{s<=t} [ 1{Gtilde_s>0} / P(Gtilde_s>0 | F_{s-1}) + 1{G_{s-1}=0} ],
// an F-martingale; tildeQ = Z^F_T . P.
struct Deflator {
  Process ZF;
  Measure tildeQ;
};

Deflator deflator(const FilteredSpace& space, const AzemaPair& az);

// m_t = 1 + sum_{s<=t} (Gtilde_s - E[Gtilde_s|F_{s-1}])        (F-martingale)
// NG_t = 1{tau<=t} - sum_{s<=t^tau} P(tau=s|F_s)/Gtilde_s      (G-martingale)
// DoF_t = sum_{s=0..t} P(tau=s|F_s)                            (nondecreasing, F-adapted)
struct HazardTriplet {
  Process m;
  Process NG;
  Process DoF;
};

HazardTriplet hazard(const FilteredSpace& space, const RandomTime& tau, const AzemaPair& az);

// T(M)_t = sum_{u<=tau^t} (G_{u-1}/Gtilde_u) dM_u + sum_{u<=tau^t} E[1{Gtilde_u=0} dM_u | F_{u-1}].
// Carries F-martingales to G-martingales on the stopped horizon.
Process transform_T(const FilteredSpace& space, const RandomTime& tau, const AzemaPair& az,
                    const Process& M);

}  // namespace tauhedge
