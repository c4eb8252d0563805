#pragma once

#include <json.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/certificate.hpp"
#include "toract/dual_dynamics.hpp"
#include "toract/errors.hpp"
#include "toract/families.hpp"
#include "toract/group_model.hpp"
#include "toract/int_matrix.hpp"
#include "toract/measure_validator.hpp"
#include "toract/small_n.hpp"
#include "toract/spectral.hpp"
#include "toract/witness.hpp"

namespace toract {

using Json = nlohmann::ordered_json;

// Reals carry 12 significant digits and integers their full decimal
// expansion; both are emitted as strings so no consumer loses precision.
inline std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline Json json_real(double x) { return Json(fmt_real(x)); }
inline Json json_int(const Int& x) { return Json(x.get_str()); }
inline Json json_rat(const Rat& x) { return Json(x.get_str()); }

inline Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(json_int(x));
  return a;
}

inline Vec vec_from_json(const Json& a) {
  Vec v;
  for (const auto& x : a) {
    if (x.is_string())
      v.emplace_back(x.get<std::string>());
    else
      v.emplace_back(static_cast<long>(x.get<long long>()));
  }
  return v;
}

inline Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(json_int(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const Json& rows) {
  if (!rows.is_array()) throw precondition_error("matrix_from_json: expected an array of rows");
  std::size_t r = rows.size();
  std::size_t c = r == 0 ? 0 : rows[0].size();
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw precondition_error("matrix_from_json: ragged rows");
    for (std::size_t j = 0; j < c; ++j) {
      const auto& x = rows[i][j];
      m.at(i, j) = x.is_string() ? Int(x.get<std::string>()) : Int(static_cast<long>(x.get<long long>()));
    }
  }
  return m;
}

// Presentation file schema:
//   {"k": int, "n": int, "lambda": [matrix...], "family": "theorem1" | ...}
// with matrices as arrays of rows of decimal strings. The remark4 family
// carries {"n", "alpha": {"num", "den", "error_bound"}} instead of lambda.
inline Json presentation_to_json(const GroupPresentation& p) {
  Json j;
  j["k"] = p.spec.k;
  j["n"] = p.spec.n;
  Json lam = Json::array();
  for (const IntMatrix& a : p.lambda_generators) lam.push_back(matrix_to_json(a));
  j["lambda"] = std::move(lam);
  j["family"] = family_name(p.family);
  return j;
}

inline Json remark4_to_json(const RemarkFourFamily& fam) {
  Json j;
  j["n"] = fam.n;
  j["family"] = "remark4";
  j["alpha"] = Json{{"num", fam.alpha.value.get_num().get_str()},
                    {"den", fam.alpha.value.get_den().get_str()},
                    {"error_bound", json_real(fam.alpha.error_bound)}};
  return j;
}

inline GroupPresentation presentation_from_json(const Json& j) {
  std::string family = j.value("family", std::string("theorem1"));
  if (family != "theorem1" && family != "quotient" && family != "diagonal")
    throw precondition_error("presentation_from_json: family '" + family +
                             "' is not a matrix presentation");
  std::vector<IntMatrix> lambda;
  if (j.contains("lambda"))
    for (const auto& a : j["lambda"]) lambda.push_back(matrix_from_json(a));
  GroupPresentation p = build_theorem1_family(j.at("k").get<std::size_t>(),
                                              j.at("n").get<std::size_t>(), std::move(lambda));
  if (family == "quotient")
    p.family = FamilyTag::quotient;
  else if (family == "diagonal")
    p.family = FamilyTag::diagonal;
  return p;
}

inline RemarkFourFamily remark4_from_json(const Json& j) {
  const Json& a = j.at("alpha");
  AlphaSurrogate alpha;
  alpha.value = Rat(Int(a.at("num").get<std::string>()), Int(a.at("den").get<std::string>()));
  alpha.value.canonicalize();
  if (a.contains("error_bound")) {
    const auto& e = a["error_bound"];
    alpha.error_bound = e.is_string() ? std::stod(e.get<std::string>()) : e.get<double>();
  }
  return build_remark4_family(j.at("n").get<std::size_t>(), alpha);
}

inline Json orbit_report_to_json(const OrbitReport& r) {
  Json j;
  j["seed"] = vec_to_json(r.seed);
  j["status"] = r.status == OrbitStatus::finite ? "finite" : "exceeded_bound";
  j["visited"] = r.visited;
  j["bound"] = r.bound;
  j["generators"] = r.generator_count;
  if (r.status == OrbitStatus::finite) {
    Json orb = Json::array();
    for (const Vec& x : r.orbit) orb.push_back(vec_to_json(x));
    j["orbit"] = std::move(orb);
  }
  return j;
}

inline Json ergodicity_verdict_to_json(const ErgodicityVerdict& v) {
  Json j;
  j["outcome"] = outcome_name(v.outcome);
  j["certificate"] = v.certificate;
  j["exact"] = v.exact;
  if (v.rou_order) j["root_of_unity_order"] = v.rou_order;
  if (v.witness) j["witness"] = vec_to_json(*v.witness);
  if (v.witness_orbit) j["orbit"] = orbit_report_to_json(*v.witness_orbit);
  if (v.bound) j["bound"] = v.bound;
  if (v.radius) j["radius"] = v.radius;
  return j;
}

inline Json spectral_report_to_json(const SpectralReport& r) {
  Json j;
  j["dimension"] = r.dimension;
  j["excluded"] = r.excluded;
  j["radius"] = r.radius;
  j["generators"] = r.generator_count;
  j["points"] = r.points;
  j["norm_estimate"] = json_real(r.norm_estimate);
  j["iterations"] = r.iterations;
  j["tolerance"] = json_real(r.tolerance);
  j["converged"] = r.converged;
  j["seed"] = r.seed;
  return j;
}

inline Json asi_witness_to_json(const ASIWitness& w) {
  Json j;
  j["family"] = w.family;
  j["seed"] = vec_to_json(w.seed);
  j["window"] = w.window;
  j["mean"] = json_real(w.mean);
  j["l2_norm"] = json_real(w.l2_norm);
  j["deviation"] = json_real(w.deviation);
  if (w.deviation_sq_exact) j["deviation_sq"] = json_rat(w.deviation_sq);
  Json pts = Json::array();
  for (const Vec& p : w.points) pts.push_back(vec_to_json(p));
  j["points"] = std::move(pts);
  Json ws = Json::array();
  for (const Rat& c : w.weights) ws.push_back(json_rat(c));
  j["weights"] = std::move(ws);
  j["norm_sq"] = json_rat(w.norm_sq);
  Json per = Json::array();
  for (const GeneratorDeviation& d : w.per_generator) {
    Json e;
    e["generator"] = d.label;
    e["deviation"] = json_real(d.deviation);
    e["deviation_sq"] = json_rat(d.deviation_sq);
    per.push_back(std::move(e));
  }
  j["per_generator"] = std::move(per);
  return j;
}

inline Json group_element_to_json(const GroupElement& g) {
  Json j;
  j["k"] = g.spec.k;
  j["n"] = g.spec.n;
  j["mat"] = matrix_to_json(g.mat);
  return j;
}

inline Json klkl_witness_to_json(const KLKLWitness& w) {
  Json j;
  j["target"] = group_element_to_json(w.target);
  j["k1"] = group_element_to_json(w.k1);
  j["l1"] = group_element_to_json(w.l1);
  j["k2"] = group_element_to_json(w.k2);
  j["l2"] = group_element_to_json(w.l2);
  return j;
}

inline Json certificate_to_json(const RelTCertificate& c) {
  Json j;
  j["k"] = c.spec.k;
  j["n"] = c.spec.n;
  Json steps = Json::array();
  for (const CertStep& st : c.steps) {
    Json s;
    s["kind"] = step_kind_name(st.kind);
    s["premises"] = st.premises;
    s["statement"] = st.statement;
    if (st.embedding) {
      Json e;
      e["target"] = tag_name(st.embedding->target_small);
      e["row"] = st.embedding->row_index;
      Json li = Json::array();
      for (const GroupElement& g : st.embedding->lattice_images)
        li.push_back(group_element_to_json(g));
      e["lattice_images"] = std::move(li);
      Json si = Json::array();
      for (const GroupElement& g : st.embedding->sl_images)
        si.push_back(group_element_to_json(g));
      e["sl_images"] = std::move(si);
      s["embedding"] = std::move(e);
    }
    if (st.bounded_generation) {
      Json b;
      b["product_length"] = st.bounded_generation->product_length;
      Json samples = Json::array();
      for (const KLKLWitness& w : st.bounded_generation->samples)
        samples.push_back(klkl_witness_to_json(w));
      b["samples"] = std::move(samples);
      s["bounded_generation"] = std::move(b);
    }
    if (st.monotonicity) {
      s["monotonicity"] = Json{{"from_small", tag_name(st.monotonicity->from_small)},
                               {"from_large", tag_name(st.monotonicity->from_large)},
                               {"to_small", tag_name(st.monotonicity->to_small)},
                               {"to_large", tag_name(st.monotonicity->to_large)}};
    }
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  j["conclusion"] = c.conclusion;
  return j;
}

inline Json check_report_to_json(const CertificateCheckReport& r) {
  Json j;
  j["all_pass"] = r.all_pass;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  Json steps = Json::array();
  for (const StepCheck& s : r.steps) {
    steps.push_back(Json{{"index", s.index}, {"kind", s.kind}, {"pass", s.pass},
                         {"detail", s.detail}});
  }
  j["steps"] = std::move(steps);
  return j;
}

inline Json freeness_report_to_json(const FreenessReport& r) {
  Json j;
  j["word_length"] = r.word_length;
  j["elements_checked"] = r.elements_checked;
  j["max_fixed_dim"] = r.max_fixed_dim;
  j["full_dim"] = r.full_dim;
  j["all_proper"] = r.all_proper;
  j["truncated"] = r.truncated;
  return j;
}

inline Json strong_report_to_json(const StrongErgodicityReport& r) {
  Json j;
  j["outcome"] = strong_outcome_name(r.outcome);
  j["reduction"] = r.reduction;
  j["basis"] = r.basis;
  if (r.witness) j["witness"] = asi_witness_to_json(*r.witness);
  if (r.spectral) j["spectral"] = spectral_report_to_json(*r.spectral);
  return j;
}

inline Json classification_to_json(const ClassificationReport& r) {
  Json j;
  j["n"] = r.n;
  j["side"] = side_name(r.side);
  j["degenerate"] = r.degenerate;
  if (r.certificate) {
    Json c;
    c["w"] = vec_to_json(r.certificate->w);
    c["signs"] = r.certificate->signs;
    j["certificate"] = std::move(c);
  }
  if (r.conjugation) {
    Json c;
    c["conjugator"] = matrix_to_json(r.conjugation->conjugator);
    Json gens = Json::array();
    for (const IntMatrix& m : r.conjugation->conjugated) gens.push_back(matrix_to_json(m));
    c["conjugated"] = std::move(gens);
    j["conjugation"] = std::move(c);
  }
  if (r.nonergodicity_witness)
    j["nonergodicity_witness"] = orbit_report_to_json(*r.nonergodicity_witness);
  Json lines = Json::array();
  for (const NarrativeLine& l : r.narrative)
    lines.push_back(Json{{"status", l.status}, {"text", l.text}});
  j["narrative"] = std::move(lines);
  return j;
}

inline Json measure_validation_to_json(const MeasureValidationReport& r) {
  Json j;
  Json per = Json::array();
  for (const MeasureBulletReport& b : r.per_measure) {
    Json m;
    m["bullet1_marginals"] = Json{{"max_deviation", json_real(b.marginal_max_dev)},
                                  {"total_mass_1", json_real(b.marginal_total_1)},
                                  {"total_mass_2", json_real(b.marginal_total_2)},
                                  {"pass", b.marginals_uniform}};
    m["bullet2_diagonal"] = Json{{"mass", json_real(b.diagonal_mass)}, {"pass", b.diagonal_null}};
    m["bullet3_correlation"] = Json{{"gap", json_real(b.correlation_gap)},
                                    {"pass", b.correlation_ok}};
    Json tv = Json::array();
    for (double t : b.pushforward_tv) tv.push_back(json_real(t));
    m["bullet4_invariance"] = Json{{"tv_distances", std::move(tv)},
                                   {"pass", b.asymptotically_invariant}};
    per.push_back(std::move(m));
  }
  j["per_measure"] = std::move(per);
  j["correlation_gap_decreasing"] = r.correlation_gap_decreasing;
  j["pushforward_tv_decreasing"] = r.pushforward_tv_decreasing;
  j["summary"] = r.summary;
  return j;
}

inline DiscreteMeasure measure_from_json(const Json& j, std::size_t dimension,
                                         std::size_t resolution) {
  DiscreteMeasure m;
  m.dimension = dimension;
  m.resolution = resolution;
  for (const auto& e : j.at("entries")) {
    std::uint64_t x = e.at(0).get<std::uint64_t>();
    std::uint64_t y = e.at(1).get<std::uint64_t>();
    const auto& w = e.at(2);
    m.weights.emplace_back(DiscreteMeasure::pair_key(x, y, m.cells()),
                           w.is_string() ? std::stod(w.get<std::string>()) : w.get<double>());
  }
  m.normalize_storage();
  return m;
}

inline std::vector<DiscreteMeasure> measures_from_json(const Json& j) {
  std::size_t dim = j.at("dimension").get<std::size_t>();
  std::size_t res = j.at("resolution").get<std::size_t>();
  std::vector<DiscreteMeasure> out;
  for (const auto& m : j.at("measures")) out.push_back(measure_from_json(m, dim, res));
  return out;
}

// Stable serialization: json as indented dump of the ordered document, text
// as an indented key/value rendering. Two runs with the same inputs produce
// byte-identical bytes either way.
inline void render_text(const Json& j, std::string& out, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || value.is_array()) {
        out += pad + key + ":\n";
        render_text(value, out, depth + 1);
      } else {
        out += pad + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) +
               "\n";
      }
    }
  } else if (j.is_array()) {
    bool scalars = true;
    for (const auto& v : j)
      if (v.is_object() || v.is_array()) scalars = false;
    if (scalars) {
      out += pad + "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ", ";
        first = false;
        out += v.is_string() ? v.get<std::string>() : v.dump();
      }
      out += "]\n";
    } else {
      std::size_t idx = 0;
      for (const auto& v : j) {
        out += pad + "- [" + std::to_string(idx++) + "]\n";
        render_text(v, out, depth + 1);
      }
    }
  } else {
    out += pad + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
  }
}

inline std::string emit_report(const Json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  if (format == "text") {
    std::string out;
    render_text(j, out, 0);
    return out;
  }
  throw domain_error("emit_report: unknown format '" + format + "'");
}

}  // namespace toract
