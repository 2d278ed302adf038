// tauhedge: exact-arithmetic super-hedging engine for market models with a
// random horizon. Commands: validate, aip, price, decompose, gen, verify.
#include <iostream>

#include <CLI11.hpp>

#include "tauhedge/decomp.hpp"
#include "tauhedge/model_io.hpp"
#include "tauhedge/verify.hpp"

namespace {

using namespace tauhedge;

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailure = 1;
constexpr int kExitInputError = 2;

std::string atom_ids(const FilteredSpace& sp, const Partition& part, int atom) {
  std::string s = "{";
  const auto& blk = part.block(atom);
  for (size_t i = 0; i < blk.size(); ++i) {
    if (i) s += ",";
    s += sp.outcome_ids[blk[i]];
  }
  return s + "}";
}

std::string vec_str(const std::vector<Rat>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += rat_to_string(v[i]);
  }
  return s + ")";
}

int cmd_validate(const std::string& path) {
  ModelFile m = load_model(path);
  ModelBundle b = bundle(std::move(m));
  std::cout << "file=" << path << " status=valid\n"
            << "outcomes=" << b.file.space.n_outcomes() << " horizon=" << b.file.space.horizon
            << " assets=" << b.file.d << "\n";
  if (b.file.claim)
    std::cout << "claim=" << claim_class_name(b.file.claim->cls) << "\n";
  std::cout << "qtilde=";
  for (int w = 0; w < b.file.space.n_outcomes(); ++w)
    std::cout << (w ? "," : "") << rat_to_string(b.defl.tildeQ.w[w]);
  std::cout << "\n";
  return kExitPass;
}

int cmd_aip(const std::string& path, const std::string& which) {
  ModelBundle b = bundle(load_model(path));
  const FilteredSpace& sp = b.file.space;
  PricingModel model = which == "stopped" ? model_stopped(sp, b.ps, b.gfilt)
                       : which == "tilde" ? model_tilde(sp, b.ps, b.defl)
                                          : model_bar(sp, b.ps);
  AipReport rep = aip(model, sp);
  for (const auto& v : rep.verdicts) {
    std::cout << "model=" << model.name << " t=" << v.t << " atom="
              << atom_ids(sp, model.filt[v.t], v.atom);
    if (!v.defined) {
      std::cout << " verdict=null-atom\n";
    } else if (v.ok) {
      std::cout << " verdict=ok weights=" << vec_str(v.hull.weights) << "\n";
    } else {
      std::cout << " verdict=violated certificate=" << vec_str(v.hull.separator) << "\n";
    }
  }
  std::cout << "overall=" << (rep.overall ? "aip" : "immediate-profit") << "\n";
  return rep.overall ? kExitPass : kExitAssertionFailure;
}

void print_masked(const FilteredSpace& sp, const std::string& label, int t, const MaskedVar& x) {
  std::cout << label << " t=" << t;
  for (int w = 0; w < sp.n_outcomes(); ++w) {
    std::cout << " " << sp.outcome_ids[w] << "=";
    std::cout << (x.is_defined(w) ? x.get(w).str() : "null");
  }
  std::cout << "\n";
}

int cmd_price(const std::string& path, std::string cls_name) {
  ModelBundle b = bundle(load_model(path));
  if (!b.file.claim && cls_name.empty()) {
    std::cerr << "error: model has no claim section; pass --claim-class\n";
    return kExitInputError;
  }
  ClaimClass cls = cls_name.empty() ? b.file.claim->cls : claim_class_from_name(cls_name);
  ClaimKit kit = b.kit ? *b.kit
                       : claim_kit(cls, Process(b.file.space.horizon + 1,
                                                RandVar::constant(b.file.space.n_outcomes(), XRat(0))),
                                   Process(b.file.space.horizon + 1,
                                           RandVar::constant(b.file.space.n_outcomes(), XRat(0))),
                                   b.file.space, b.az);
  try {
    VulnerablePrice vp = price_vulnerable(cls, kit, b.views());
    std::cout << "claim_class=" << claim_class_name(cls) << "\n";
    for (int t = 0; t <= b.file.space.horizon; ++t) {
      print_masked(b.file.space, "price_G", t, vp.g_report.prices[t]);
      print_masked(b.file.space, "price_F", t, vp.f_process[t]);
    }
    for (const auto& step : vp.g_report.steps)
      for (const auto& atom : step)
        if (atom.defined && atom.theta)
          std::cout << "theta t=" << atom.t << " atom="
                    << atom_ids(b.file.space, b.gfilt[atom.t], atom.atom_index) << " value="
                    << vec_str(*atom.theta) << "\n";
    std::cout << "relation=" << (vp.relation_ok ? "ok" : "violated") << "\n";
    for (const auto& d : vp.discrepancies) std::cout << "discrepancy " << d << "\n";
    return vp.relation_ok ? kExitPass : kExitAssertionFailure;
  } catch (const AipViolation& e) {
    std::cout << "refused: " << e.what() << "\n";
    return kExitAssertionFailure;
  }
}

int cmd_decompose(const std::string& path, std::string cls_name) {
  ModelBundle b = bundle(load_model(path));
  if (!b.file.claim && cls_name.empty()) {
    std::cerr << "error: model has no claim section; pass --claim-class\n";
    return kExitInputError;
  }
  ClaimClass cls = cls_name.empty() ? b.file.claim->cls : claim_class_from_name(cls_name);
  if (!b.kit) {
    std::cerr << "error: decompose needs a claim section\n";
    return kExitInputError;
  }
  try {
    VulnerablePrice vp = price_vulnerable(cls, *b.kit, b.views());
    Process priceF = zero_fill(vp.f_process);
    Process priceG = zero_fill(vp.g_report.prices);
    Process recovery = effective_recovery(cls, *b.kit, b.file.space);
    DecompositionReport rep = decompose(cls, false, b.file.space, b.file.tau, b.az, b.hz,
                                        priceF, recovery, priceG);
    const FilteredSpace& sp = b.file.space;
    auto dump = [&](const std::string& label, const Process& p) {
      for (int t = 0; t <= sp.horizon; ++t) {
        std::cout << label << " t=" << t;
        for (int w = 0; w < sp.n_outcomes(); ++w)
          std::cout << " " << sp.outcome_ids[w] << "=" << p[t][w].str();
        std::cout << "\n";
      }
    };
    std::cout << "claim_class=" << claim_class_name(cls) << "\n";
    std::cout << "initial";
    for (int w = 0; w < sp.n_outcomes(); ++w)
      std::cout << " " << sp.outcome_ids[w] << "=" << rep.initial[w].str();
    std::cout << "\n";
    dump("trend", rep.trend);
    dump("pf_risk", rep.pf_risk);
    dump("pure_default", rep.pure_default);
    dump("cr_benefit", rep.cr_benefit);
    dump("cr_flow", rep.cr_flow);
    dump("total", rep.total);
    std::cout << "telescopes=" << (rep.telescopes ? "exact" : "violated") << "\n";
    return rep.telescopes ? kExitPass : kExitAssertionFailure;
  } catch (const AipViolation& e) {
    std::cout << "refused: " << e.what() << "\n";
    return kExitAssertionFailure;
  }
}

int cmd_gen(const GenConfig& cfg, const std::string& out) {
  ModelFile m = gen_model(cfg);
  std::string text = serialize_model(m);
  if (out.empty()) std::cout << text;
  else save_model(m, out);
  return kExitPass;
}

int cmd_verify(const VerifyOptions& opt) {
  VerifyResult res = run_verify(opt);
  for (const auto& f : res.failures) std::cout << "FAIL " << f << "\n";
  for (const auto& l : res.lines) std::cout << l << "\n";
  return res.ok() ? kExitPass : kExitAssertionFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact super-hedging pricing under a random horizon"};
  app.require_subcommand(1);

  std::string file, model_kind = "stopped", claim_cls, out_path;

  auto* validate = app.add_subcommand("validate", "check a model file against the schema");
  validate->add_option("--file", file, "model file")->required();

  auto* aip_cmd = app.add_subcommand("aip", "immediate-profit verdicts per (t, atom)");
  aip_cmd->add_option("--file", file, "model file")->required();
  aip_cmd->add_option("--model", model_kind, "stopped|tilde|bar")
      ->check(CLI::IsMember({"stopped", "tilde", "bar"}));

  auto* price = app.add_subcommand("price", "super-hedging prices of the vulnerable claim");
  price->add_option("--file", file, "model file")->required();
  price->add_option("--claim-class", claim_cls,
                    "survival_strict|survival_incl|at_default|mixed");

  auto* decomp_cmd = app.add_subcommand("decompose", "risk decomposition of the G-price");
  decomp_cmd->add_option("--file", file, "model file")->required();
  decomp_cmd->add_option("--claim-class", claim_cls, "claim class override");

  GenConfig cfg;
  std::string regime = "correlated";
  auto* gen = app.add_subcommand("gen", "generate a random model");
  gen->add_option("--seed", cfg.seed, "generator seed");
  gen->add_option("--outcomes", cfg.max_outcomes, "max outcome count");
  gen->add_option("--horizon", cfg.max_T, "max horizon");
  gen->add_option("--assets", cfg.max_d, "max asset count");
  gen->add_option("--denom", cfg.denom_bound, "denominator bound");
  gen->add_option("--regime", regime, "independent|correlated|with_deadzone|z_identity");
  gen->add_flag("--aip", cfg.force_aip_tilde, "redraw prices until (Stilde,F,Qtilde) is AIP");
  gen->add_flag("--nonneg-claims", cfg.nonneg_claims, "nonnegative claim processes");
  gen->add_option("--out", out_path, "output path (stdout if omitted)");

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "run the theorem-verification suites");
  verify->add_option("--suite", vopt.suite, "esssup|aip|onestep|multistep|decomp|options|all")
      ->check(CLI::IsMember({"esssup", "aip", "onestep", "multistep", "decomp", "options", "all"}));
  verify->add_option("--models", vopt.models, "generated models per suite");
  verify->add_option("--seed", vopt.seed, "sweep seed");
  verify->add_option("--threads", vopt.threads, "worker cap (also TAUHEDGE_THREADS)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(file);
    if (*aip_cmd) return cmd_aip(file, model_kind);
    if (*price) return cmd_price(file, claim_cls);
    if (*decomp_cmd) return cmd_decompose(file, claim_cls);
    if (*gen) {
      cfg.regime = regime_from_name(regime);
      return cmd_gen(cfg, out_path);
    }
    if (*verify) return cmd_verify(vopt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertionFailure;
  }
  return kExitInputError;
}
