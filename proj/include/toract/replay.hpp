#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toract/certificate.hpp"
#include "toract/dual_dynamics.hpp"
#include "toract/errors.hpp"
#include "toract/group_model.hpp"
#include "toract/int_polynomial.hpp"
#include "toract/serialize.hpp"
#include "toract/spectral.hpp"
#include "toract/witness.hpp"

namespace toract {

struct ReplayOptions {
  std::size_t bound = 100000;
  long radius = 12;
  double tolerance = 1e-8;
  std::size_t window = 128;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::size_t freeness_length = 6;
  std::vector<std::size_t> witness_windows{16, 32, 64, 128, 256};
};

// End-to-end profile of one cyclic-lambda family: rigidity certificate,
// ergodicity verdict, strong ergodicity with a witness decay table, and the
// freeness word sweep, each compared against the profile the construction
// advertises for the chosen generator.
struct ReplayResult {
  GroupPresentation presentation;
  RelTCertificate certificate;
  CertificateCheckReport cert_check;
  ErgodicityVerdict ergodicity;
  StrongErgodicityReport strong;
  std::vector<ASIWitness> witness_table;
  FreenessReport freeness;

  bool rigid_ok = false;
  bool free_ok = false;
  bool expect_ergodic = false;
  bool expect_gap_evidence = false;  // k == 0 path
  bool consistent = false;
  int exit_code = 1;
};

inline ReplayResult run_theorem1_replay(std::size_t k, std::size_t n, const IntMatrix& a,
                                        const ReplayOptions& opt = {}) {
  std::vector<IntMatrix> lambda;
  if (k > 0) lambda.push_back(a);
  ReplayResult res;
  res.presentation = build_theorem1_family(k, n, lambda);

  res.certificate = build_certificate(res.presentation);
  res.cert_check = check_certificate(res.certificate, res.presentation, opt.samples, opt.seed);
  res.rigid_ok = res.cert_check.all_pass;

  res.ergodicity = ergodicity_check(res.presentation, opt.bound, opt.radius);

  StrongErgodicityOptions sopt;
  sopt.radius = std::min<long>(opt.radius, 8);
  sopt.window = opt.window;
  sopt.tolerance = opt.tolerance * 1e-4;
  sopt.seed = opt.seed;
  res.strong = strong_ergodicity_verdict(res.presentation, sopt);

  if (k >= 1 && !has_root_of_unity_eigenvalue(a).yes) {
    Vec xi(k);
    xi[0] = 1;
    for (std::size_t l : opt.witness_windows) {
      ASIWitness w = asi_witness(a, xi, l);
      w.per_generator = lifted_witness_deviations(w, res.presentation);
      res.witness_table.push_back(std::move(w));
    }
  } else if (k >= 1) {
    res.witness_table.push_back(invariant_orbit_witness(a));
  }

  res.freeness = freeness_check(res.presentation, opt.freeness_length);
  res.free_ok = res.freeness.all_proper && !res.freeness.truncated;

  res.expect_ergodic = k == 0 || !has_root_of_unity_eigenvalue(a).yes;
  res.expect_gap_evidence = k == 0;

  bool ergodic_match =
      res.expect_ergodic ? res.ergodicity.outcome == ErgodicityOutcome::ergodic
                         : res.ergodicity.outcome == ErgodicityOutcome::not_ergodic;
  bool strong_match = res.expect_gap_evidence
                          ? res.strong.outcome == StrongErgodicityOutcome::strongly_ergodic_evidence
                          : res.strong.outcome == StrongErgodicityOutcome::not_strongly_ergodic;
  bool witness_decay_ok = true;
  for (std::size_t i = 1; i < res.witness_table.size(); ++i)
    if (res.witness_table[i].deviation >= res.witness_table[i - 1].deviation)
      witness_decay_ok = false;

  bool inconclusive = res.ergodicity.outcome == ErgodicityOutcome::inconclusive ||
                      res.strong.outcome == StrongErgodicityOutcome::inconclusive;
  res.consistent =
      res.rigid_ok && ergodic_match && strong_match && res.free_ok && witness_decay_ok;
  res.exit_code = res.consistent ? 0 : inconclusive ? 2 : 1;
  return res;
}

inline Json replay_to_json(const ReplayResult& r) {
  Json j;
  Json rigidity;
  rigidity["claim"] =
      "the translation lattice sits rigidly in the block group: bounded generation over pairs "
      "with relative property (T)";
  rigidity["pass"] = r.rigid_ok;
  rigidity["check"] = check_report_to_json(r.cert_check);
  j["rigidity"] = std::move(rigidity);

  Json ergodicity;
  ergodicity["claim"] =
      "the dual action is ergodic exactly when every nonzero lambda-orbit on Z^k is infinite";
  ergodicity["pass"] = r.expect_ergodic
                           ? r.ergodicity.outcome == ErgodicityOutcome::ergodic
                           : r.ergodicity.outcome == ErgodicityOutcome::not_ergodic;
  ergodicity["verdict"] = ergodicity_verdict_to_json(r.ergodicity);
  j["ergodicity"] = std::move(ergodicity);

  Json strong;
  strong["claim"] =
      "strong ergodicity of the full action reduces to the lambda block; amenable cyclic blocks "
      "admit explicit almost-invariant witnesses";
  strong["report"] = strong_report_to_json(r.strong);
  if (!r.witness_table.empty()) {
    Json table = Json::array();
    for (const ASIWitness& w : r.witness_table) {
      Json row;
      row["window"] = w.window;
      row["deviation"] = json_real(w.deviation);
      if (w.deviation_sq_exact) row["deviation_sq"] = json_rat(w.deviation_sq);
      table.push_back(std::move(row));
    }
    strong["witness_decay"] = std::move(table);
  }
  j["strong_ergodicity"] = std::move(strong);

  Json freeness;
  freeness["claim"] =
      "every nonidentity element fixes a proper subtorus only: the action is essentially free";
  freeness["pass"] = r.free_ok;
  freeness["report"] = freeness_report_to_json(r.freeness);
  j["freeness"] = std::move(freeness);

  Json profile;
  profile["rigid"] = r.rigid_ok;
  profile["ergodic"] = outcome_name(r.ergodicity.outcome);
  profile["strongly_ergodic"] = strong_outcome_name(r.strong.outcome);
  profile["free"] = r.free_ok;
  profile["consistent_with_advertised_profile"] = r.consistent;
  j["profile"] = std::move(profile);
  j["exit_code"] = r.exit_code;
  return j;
}

}  // namespace toract
