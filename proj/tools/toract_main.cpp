// toract: construct block matrix groups acting on tori and check everything
// checkable about them: dual-orbit ergodicity with exact certificates,
// almost-invariant witnesses against strong ergodicity, compression-norm
// spectral evidence, bounded-generation rigidity certificates and their
// verification, coupling-measure validation, and the small-dimension
// eigenvector classification.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "toract/replay.hpp"
#include "toract/serialize.hpp"

using namespace toract;

namespace {

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open input file: " + path);
  Json j;
  in >> j;
  return j;
}

void write_output(const Json& report, const std::string& format, const std::string& out_path) {
  std::string rendered = emit_report(report, format);
  if (out_path.empty()) {
    std::fputs(rendered.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw domain_error("cannot open output file: " + out_path);
    out << rendered;
  }
}

IntMatrix parse_matrix_arg(const std::string& text) {
  return matrix_from_json(Json::parse(text));
}

std::vector<double> coordinate_cosine(std::size_t dimension, std::size_t resolution) {
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < dimension; ++i) cells *= resolution;
  std::vector<double> f(cells);
  std::uint64_t stride = cells / resolution;
  for (std::uint64_t x = 0; x < cells; ++x)
    f[x] = std::cos(2.0 * M_PI * static_cast<double>(x / stride) /
                    static_cast<double>(resolution));
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and numeric checks for block matrix-group actions on tori"};
  app.require_subcommand(1);
  app.fallthrough();  // --format/--out/--seed are accepted after any subcommand

  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 0;
  app.add_option("--format", format, "output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", out_path, "write the report to a file instead of stdout");
  app.add_option("--seed", seed, "seed for all randomized verification");

  // build
  auto* build = app.add_subcommand("build", "construct a presentation file");
  std::size_t b_k = 0, b_n = 2;
  std::string b_lambda = "[]", b_family = "theorem1";
  unsigned long b_alpha_den = 1000000;
  build->add_option("--k", b_k, "lambda block size");
  build->add_option("--n", b_n, "SL block size");
  build->add_option("--lambda", b_lambda, "lambda generators as a JSON array of matrices");
  build->add_option("--family", b_family, "theorem1 | remark4 | quotient | diagonal")
      ->check(CLI::IsMember({"theorem1", "remark4", "quotient", "diagonal"}));
  build->add_option("--alpha-min-den", b_alpha_den,
                    "minimal denominator of the rotation surrogate (remark4)");

  // ergodicity
  auto* erg = app.add_subcommand("ergodicity", "dual-orbit ergodicity verdict");
  std::string e_pres;
  std::size_t e_bound = 100000;
  long e_radius = 12;
  erg->add_option("presentation", e_pres, "presentation file")->required();
  erg->add_option("--bound", e_bound, "orbit exploration cap (visited nodes)");
  erg->add_option("--radius", e_radius, "primitive-seed sweep radius");

  // spectral
  auto* spec = app.add_subcommand("spectral", "compression-norm spectral evidence");
  std::string s_pres, s_space = "offk";
  long s_radius = 12;
  double s_tol = 1e-8;
  std::size_t s_iter = 50000;
  spec->add_option("presentation", s_pres, "presentation file")->required();
  spec->add_option("--radius", s_radius, "max-norm ball radius");
  spec->add_option("--tol", s_tol, "Rayleigh convergence tolerance");
  spec->add_option("--max-iter", s_iter, "power iteration cap");
  spec->add_option("--space", s_space,
                   "offk: Z^(k+n) minus Z^k x 0 under the full group; sln: Z^n minus 0 under "
                   "the SL block")
      ->check(CLI::IsMember({"offk", "sln"}));

  // witness
  auto* wit = app.add_subcommand("witness", "almost-invariant witness construction");
  std::string w_pres, w_xi;
  std::size_t w_window = 128;
  wit->add_option("presentation", w_pres, "presentation file")->required();
  wit->add_option("--window", w_window, "window length L");
  wit->add_option("--xi", w_xi, "seed character, comma separated integers (default e_1)");

  // validate-nu
  auto* nu = app.add_subcommand("validate-nu", "validate a coupling-measure sequence");
  std::string nu_pres, nu_measures;
  std::size_t nu_grid = 0;
  double nu_tol_marginal = 1e-9, nu_tol_diag = 1e-9, nu_tol_corr = 1e-6, nu_tol_push = 1e-9;
  nu->add_option("presentation", nu_pres, "presentation file")->required();
  nu->add_option("measures", nu_measures, "grid-weight file")->required();
  nu->add_option("--grid", nu_grid, "expected grid resolution (cross-checked when given)");
  nu->add_option("--tol-marginal", nu_tol_marginal, "bullet 1 tolerance");
  nu->add_option("--tol-diagonal", nu_tol_diag, "bullet 2 tolerance");
  nu->add_option("--tol-correlation", nu_tol_corr, "bullet 3 tolerance");
  nu->add_option("--tol-pushforward", nu_tol_push, "bullet 4 tolerance");

  // decompose
  auto* dec = app.add_subcommand("decompose", "KLKL bounded-generation decomposition");
  std::string d_pres, d_element;
  std::size_t d_random = 0;
  dec->add_option("presentation", d_pres, "presentation file")->required();
  dec->add_option("--element", d_element,
                  "element of H1 as JSON {\"m\": rows, \"u\": ints, \"w\": ints}");
  dec->add_option("--random", d_random, "decompose this many random H1 elements instead");

  // certify
  auto* cert = app.add_subcommand("certify", "build and verify the rigidity certificate");
  std::string c_pres;
  std::size_t c_samples = 1000;
  cert->add_option("presentation", c_pres, "presentation file")->required();
  cert->add_option("--samples", c_samples, "random samples per checked step");

  // classify
  auto* cls = app.add_subcommand("classify", "small-dimension eigenvector classification");
  std::string cl_gens;
  std::size_t cl_n = 0;
  cls->add_option("generators", cl_gens, "generator-list file")->required();
  cls->add_option("--n", cl_n, "torus dimension (2 or 3, cross-checked when given)");

  // freeness
  auto* fre = app.add_subcommand("freeness", "essential-freeness word sweep");
  std::string f_pres;
  std::size_t f_length = 6;
  fre->add_option("presentation", f_pres, "presentation file")->required();
  fre->add_option("--length", f_length, "maximal word length");

  // replay
  auto* rep = app.add_subcommand("replay", "full profile of one cyclic-lambda family");
  std::size_t r_k = 2, r_n = 2;
  std::string r_a = "[[2,1],[1,1]]";
  ReplayOptions ropt;
  rep->add_option("--k", r_k, "lambda block size");
  rep->add_option("--n", r_n, "SL block size");
  rep->add_option("--A", r_a, "cyclic lambda generator as a JSON matrix");
  rep->add_option("--bound", ropt.bound, "orbit exploration cap");
  rep->add_option("--radius", ropt.radius, "seed sweep / compression radius");
  rep->add_option("--tol", ropt.tolerance, "numeric tolerance");
  rep->add_option("--window", ropt.window, "witness window length");
  rep->add_option("--samples", ropt.samples, "certificate check samples");
  rep->add_option("--length", ropt.freeness_length, "freeness word length");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      Json report;
      if (b_family == "remark4") {
        report = remark4_to_json(build_remark4_family(b_n, golden_mean_surrogate(b_alpha_den)));
      } else {
        std::vector<IntMatrix> lambda;
        for (const auto& m : Json::parse(b_lambda)) lambda.push_back(matrix_from_json(m));
        GroupPresentation p = build_theorem1_family(b_k, b_n, std::move(lambda));
        if (b_family == "quotient") p.family = FamilyTag::quotient;
        if (b_family == "diagonal") p.family = FamilyTag::diagonal;
        report = presentation_to_json(p);
      }
      write_output(report, format, out_path);
      return 0;
    }

    if (*erg) {
      GroupPresentation p = presentation_from_json(load_json(e_pres));
      ErgodicityVerdict v = ergodicity_check(p, e_bound, e_radius);
      write_output(ergodicity_verdict_to_json(v), format, out_path);
      return v.outcome == ErgodicityOutcome::inconclusive ? 2 : 0;
    }

    if (*spec) {
      GroupPresentation p = presentation_from_json(load_json(s_pres));
      SpectralReport r;
      if (s_space == "sln") {
        r = compression_norm(sl_generators(p.spec.n), p.spec.n, {ExclusionKind::origin},
                             s_radius, s_tol, s_iter, seed);
      } else {
        std::vector<IntMatrix> gens;
        for (const GroupElement& g : p.gamma_generators) gens.push_back(g.linear_part());
        r = compression_norm(gens, p.spec.dim(),
                             {ExclusionKind::leading_sublattice, p.spec.k}, s_radius, s_tol,
                             s_iter, seed);
      }
      write_output(spectral_report_to_json(r), format, out_path);
      return 0;
    }

    if (*wit) {
      Json doc = load_json(w_pres);
      if (doc.value("family", "theorem1") == std::string("remark4")) {
        RemarkFourFamily fam = remark4_from_json(doc);
        write_output(asi_witness_to_json(affine_asi_witness(fam, w_window)), format, out_path);
        return 0;
      }
      GroupPresentation p = presentation_from_json(doc);
      if (p.lambda_kind != LambdaKind::trivial && p.lambda_kind != LambdaKind::cyclic)
        throw precondition_error("witness: cyclic lambda required");
      IntMatrix a = p.cyclic_lambda();
      Vec xi(p.spec.k);
      if (!w_xi.empty()) {
        xi = vec_from_json(Json::parse("[" + w_xi + "]"));
      } else if (p.spec.k > 0) {
        xi[0] = 1;
      }
      ASIWitness w = has_root_of_unity_eigenvalue(a).yes ? invariant_orbit_witness(a)
                                                         : asi_witness(a, xi, w_window);
      w.per_generator = lifted_witness_deviations(w, p);
      write_output(asi_witness_to_json(w), format, out_path);
      return 0;
    }

    if (*nu) {
      GroupPresentation p = presentation_from_json(load_json(nu_pres));
      Json doc = load_json(nu_measures);
      std::vector<DiscreteMeasure> measures = measures_from_json(doc);
      if (nu_grid && !measures.empty() && measures[0].resolution != nu_grid)
        throw precondition_error("validate-nu: file resolution differs from --grid");
      std::size_t dim = measures.at(0).dimension;
      std::vector<IntMatrix> gens;
      if (dim == p.spec.dim()) {
        for (const GroupElement& g : p.gamma_generators) gens.push_back(g.linear_part());
      } else if (dim == p.spec.k) {
        gens = p.lambda_generators;
      } else {
        throw dimension_error("validate-nu: measure dimension matches neither k+n nor k");
      }
      std::vector<double> f = coordinate_cosine(dim, measures[0].resolution);
      MeasureTolerances tol{nu_tol_marginal, nu_tol_diag, nu_tol_corr, nu_tol_push};
      MeasureValidationReport r = validate_measure_sequence(measures, gens, f, f, tol);
      write_output(measure_validation_to_json(r), format, out_path);
      return 0;
    }

    if (*dec) {
      GroupPresentation p = presentation_from_json(load_json(d_pres));
      Json out = Json::array();
      if (!d_element.empty()) {
        Json e = Json::parse(d_element);
        GroupElement h = element_from_blocks(
            p.spec, IntMatrix::identity(p.spec.k), matrix_from_json(e.at("m")),
            IntMatrix::identity(p.spec.n), vec_from_json(e.at("u")), vec_from_json(e.at("w")));
        out.push_back(klkl_witness_to_json(klkl_decompose(h)));
      } else {
        Rng rng(seed);
        std::size_t count = d_random ? d_random : 1;
        for (std::size_t t = 0; t < count; ++t) {
          GroupElement h = element_from_blocks(
              p.spec, IntMatrix::identity(p.spec.k),
              testing::random_matrix(rng, p.spec.k, p.spec.n, 1000000),
              IntMatrix::identity(p.spec.n), testing::random_vector(rng, p.spec.k, 1000000),
              testing::random_vector(rng, p.spec.n, 1000000));
          out.push_back(klkl_witness_to_json(klkl_decompose(h)));
        }
      }
      write_output(Json{{"witnesses", std::move(out)}}, format, out_path);
      return 0;
    }

    if (*cert) {
      GroupPresentation p = presentation_from_json(load_json(c_pres));
      RelTCertificate c = build_certificate(p);
      CertificateCheckReport r = check_certificate(c, p, c_samples, seed);
      Json j;
      j["certificate"] = certificate_to_json(c);
      j["check"] = check_report_to_json(r);
      write_output(j, format, out_path);
      return r.all_pass ? 0 : 1;
    }

    if (*cls) {
      Json doc = load_json(cl_gens);
      std::vector<IntMatrix> gens;
      for (const auto& m : doc.at("generators")) gens.push_back(matrix_from_json(m));
      if (cl_n && !gens.empty() && gens[0].rows() != cl_n)
        throw precondition_error("classify: generator size differs from --n");
      ClassificationReport r = classify_small_n(gens);
      write_output(classification_to_json(r), format, out_path);
      return 0;
    }

    if (*fre) {
      GroupPresentation p = presentation_from_json(load_json(f_pres));
      FreenessReport r = freeness_check(p, f_length);
      write_output(freeness_report_to_json(r), format, out_path);
      return r.all_proper && !r.truncated ? 0 : 1;
    }

    if (*rep) {
      ropt.seed = seed;
      ReplayResult r = run_theorem1_replay(r_k, r_n, parse_matrix_arg(r_a), ropt);
      write_output(replay_to_json(r), format, out_path);
      return r.exit_code;
    }
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
