#pragma once

#include "tauhedge/horizon.hpp"

namespace tauhedge {

// The four linked price processes per asset:
//   dSbar_t   = 1{Gtilde_t > 0}  dS_t   (F-adapted)
//   dStilde_t = 1{G_{t-1} > 0}   dS_t   (F-adapted)
//   Stau_t    = S_{t ^ tau}              (G-adapted)
struct PriceSystem {
  int d = 0;
  std::vector<Process> S;       // [asset][time]
  std::vector<Process> Sbar;
  std::vector<Process> Stilde;
  std::vector<Process> Stau;
};

PriceSystem build_derived(const FilteredSpace& space, const AzemaPair& az, const RandomTime& tau,
                          const std::vector<Process>& S);

Process stopped(const Process& x, const RandomTime& tau);

// (H . X)_t = sum_{s<=t} H_s dX_s, (H . X)_0 = 0.
Process sint(const Process& h, const Process& x);

// [X,Y]_t = sum_{s<=t} dX_s dY_s.
Process bracket(const Process& x, const Process& y);

// <X,Y>_t = sum_{s<=t} E[dX_s dY_s | F_{s-1}].
Process angle(const Process& x, const Process& y, const FilteredSpace& space);

// (^{p,F} X)_t = E[X_t | F_{t-1}] for t >= 1; entry 0 is X_0.
Process pred_proj(const Process& x, const FilteredSpace& space);

}  // namespace tauhedge
