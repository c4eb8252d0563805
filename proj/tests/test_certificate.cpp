#include <catch2/catch_amalgamated.hpp>

#include "toract/certificate.hpp"
#include "toract/testing_random.hpp"

using namespace toract;

namespace {

GroupPresentation concrete_example() {
  return build_theorem1_family(2, 2, {IntMatrix::from_rows({{2, 1}, {1, 1}})});
}

GroupElement random_h1(Rng& rng, const BlockSpec& s, long bound) {
  return element_from_blocks(s, IntMatrix::identity(s.k),
                             testing::random_matrix(rng, s.k, s.n, bound),
                             IntMatrix::identity(s.n), testing::random_vector(rng, s.k, bound),
                             testing::random_vector(rng, s.n, bound));
}

}  // namespace

TEST_CASE("klkl decomposition on the pinned example") {
  // k = 1, n = 2, M = [3 5], u = (7), w = (2, 4)
  BlockSpec s{1, 2};
  IntMatrix m(1, 2);
  m.at(0, 0) = 3;
  m.at(0, 1) = 5;
  GroupElement h = element_from_blocks(s, IntMatrix::identity(1), m, IntMatrix::identity(2),
                                       Vec{Int(7)}, Vec{Int(2), Int(4)});
  KLKLWitness w = klkl_decompose(h);
  CHECK(w.l1.w_col() == Vec{Int(1), Int(0)});
  CHECK(w.l2.w_col() == Vec{Int(1), Int(4)});
  CHECK(w.k1.m_block().at(0, 0) == -16);
  CHECK(w.k1.m_block().at(0, 1) == 0);
  CHECK(w.k2.m_block().at(0, 0) == 19);
  CHECK(w.k2.m_block().at(0, 1) == 5);
  // composition-law oracle: u = M1 w + M2 w2 = -32 + 39 = 7
  Int lhs = w.k1.m_block().apply(Vec{Int(2), Int(4)})[0] +
            w.k2.m_block().apply(Vec{Int(1), Int(4)})[0];
  CHECK(lhs == 7);
  CHECK(w.k1 * w.l1 * w.k2 * w.l2 == h);
}

TEST_CASE("klkl decomposition of the identity and of K elements") {
  BlockSpec s{2, 2};
  GroupElement id = GroupElement::identity(s);
  KLKLWitness w = klkl_decompose(id);
  CHECK(w.k1 * w.l1 * w.k2 * w.l2 == id);
  CHECK(w.l1.w_col() == Vec{Int(1), Int(0)});
  CHECK(w.l2.w_col() == Vec{Int(-1), Int(0)});

  IntMatrix m(2, 2);
  m.at(0, 0) = 4;
  m.at(1, 1) = -9;
  GroupElement kk = element_from_blocks(s, IntMatrix::identity(2), m, IntMatrix::identity(2),
                                        Vec(2), Vec(2));
  KLKLWitness wk = klkl_decompose(kk);
  // w = 0, u = 0: the formula puts the first column of M into M1
  // (u - M(w - e1) = M e1) and the rest into M2.
  CHECK(wk.k1.m_block().at(0, 0) == 4);
  CHECK(wk.k1.m_block().at(1, 0) == 0);
  CHECK(wk.k1.m_block().at(0, 1) == 0);
  CHECK(wk.k2.m_block() == m - wk.k1.m_block());
  CHECK(wk.k1 * wk.l1 * wk.k2 * wk.l2 == kk);
}

TEST_CASE("transvection words recompose exactly") {
  Rng rng(54);
  for (int t = 0; t < 120; ++t) {
    std::size_t n = static_cast<std::size_t>(rng.range(2, 4));
    IntMatrix s = testing::random_unimodular(rng, n, 14);
    IntMatrix prod = IntMatrix::identity(n);
    for (const TransvectionLetter& letter : transvection_word(s)) {
      REQUIRE(letter.exponent.fits_slong_p());
      prod = prod * pow(transvection(n, letter.i, letter.j, 1), letter.exponent.get_si());
    }
    CHECK(prod == s);
  }
  CHECK(transvection_word(IntMatrix::identity(3)).empty());
  CHECK_THROWS_AS(transvection_word(IntMatrix::from_rows({{1, 0}, {0, -1}})),
                  precondition_error);
}

TEST_CASE("klkl decomposition: random elements recompose with membership and bounds") {
  Rng rng(51);
  for (int t = 0; t < 1000; ++t) {
    std::size_t k = static_cast<std::size_t>(rng.range(0, 4));
    std::size_t n = static_cast<std::size_t>(rng.range(2, 4));
    BlockSpec s{k, n};
    GroupElement h = random_h1(rng, s, 1000000);
    KLKLWitness w = klkl_decompose(h);
    CHECK(w.k1 * w.l1 * w.k2 * w.l2 == h);
    CHECK(membership(w.k1, SubgroupTag::K));
    CHECK(membership(w.k2, SubgroupTag::K));
    CHECK(membership(w.l1, SubgroupTag::L));
    CHECK(membership(w.l2, SubgroupTag::L));

    // entry bound |u|_inf + |M|_inf (|w|_1 + 1) for both M factors
    Int u_inf = 0, m_inf = 0, w_1 = 0;
    for (const Int& x : h.u_col()) u_inf = std::max(u_inf, abs(x));
    IntMatrix m = h.m_block();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) m_inf = std::max(m_inf, abs(m.at(i, j)));
    for (const Int& x : h.w_col()) w_1 += abs(x);
    Int bound = u_inf + m_inf * (w_1 + 1);
    for (const GroupElement* f : {&w.k1, &w.k2}) {
      IntMatrix fm = f->m_block();
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK(abs(fm.at(i, j)) <= bound);
    }
  }
}

TEST_CASE("klkl rejects elements outside H1") {
  GroupPresentation p = concrete_example();
  CHECK_THROWS_AS(klkl_decompose(p.gamma_generators[0]), membership_error);
}

TEST_CASE("row decomposition of K") {
  BlockSpec s{2, 3};
  GroupElement id = GroupElement::identity(s);
  auto factors = k_row_decompose(id);
  CHECK(factors.size() == 2);
  for (const auto& f : factors) CHECK(f == id);

  Rng rng(52);
  for (int t = 0; t < 100; ++t) {
    GroupElement g = element_from_blocks(s, IntMatrix::identity(2),
                                         testing::random_matrix(rng, 2, 3, 500),
                                         IntMatrix::identity(3), Vec(2), Vec(3));
    auto fs = k_row_decompose(g);
    REQUIRE(fs.size() == 2);
    CHECK(membership(fs[0], SubgroupTag::Ki, 0));
    CHECK(membership(fs[1], SubgroupTag::Ki, 1));
    CHECK(fs[0] * fs[1] == g);
    CHECK(fs[0] * fs[1] == fs[1] * fs[0]);  // the row factors commute
  }

  CHECK_THROWS_AS(k_row_decompose(element_from_blocks(s, IntMatrix::identity(2), IntMatrix(2, 3),
                                                      IntMatrix::identity(3), Vec{Int(1), Int(0)},
                                                      Vec(3))),
                  membership_error);
}

TEST_CASE("certificates build and verify for the three example shapes") {
  for (auto [k, n] : {std::pair<std::size_t, std::size_t>{0, 2}, {1, 2}, {2, 2}}) {
    GroupPresentation p =
        k == 0 ? build_theorem1_family(0, n, {})
        : k == 1 ? build_theorem1_family(1, n, {IntMatrix::identity(1)})
                 : concrete_example();
    RelTCertificate cert = build_certificate(p);
    // one embedding per Ki plus the L embedding
    std::size_t embeds = 0;
    for (const CertStep& st : cert.steps)
      if (st.kind == StepKind::embedding) ++embeds;
    CHECK(embeds == k + 1);
    CertificateCheckReport rep = check_certificate(cert, p, 60, 7);
    INFO("k = " << k);
    for (const StepCheck& sc : rep.steps) {
      INFO(sc.index << " " << sc.kind << ": " << sc.detail);
      CHECK(sc.pass);
    }
    CHECK(rep.all_pass);
  }
}

TEST_CASE("corrupted certificates are caught with named counterexamples") {
  GroupPresentation p = concrete_example();
  RelTCertificate cert = build_certificate(p);
  REQUIRE(check_certificate(cert, p, 40, 3).all_pass);

  SECTION("perturbed embedding generator image") {
    RelTCertificate bad = cert;
    for (CertStep& st : bad.steps) {
      if (st.kind == StepKind::embedding && st.embedding->target_small == SubgroupTag::Ki) {
        // swap in the image of the wrong transvection
        std::swap(st.embedding->sl_images[0], st.embedding->sl_images[1]);
        break;
      }
    }
    CertificateCheckReport rep = check_certificate(bad, p, 40, 3);
    CHECK_FALSE(rep.all_pass);
    bool found = false;
    for (const StepCheck& sc : rep.steps)
      if (!sc.pass && sc.kind == std::string("embedding")) {
        found = true;
        CHECK(sc.detail.find("pair") != std::string::npos);
      }
    CHECK(found);
  }

  SECTION("centrally perturbed embedding image is still caught") {
    RelTCertificate bad = cert;
    for (CertStep& st : bad.steps) {
      if (st.kind == StepKind::embedding && st.embedding->target_small == SubgroupTag::Ki) {
        // add a central u-translation to one stored SL image: the canonical
        // word evaluation makes this break some pair identity
        st.embedding->sl_images[0].mat.at(0, p.spec.dim()) += 1;
        break;
      }
    }
    CertificateCheckReport rep = check_certificate(bad, p, 200, 3);
    CHECK_FALSE(rep.all_pass);
  }

  SECTION("reversed monotonicity containment") {
    RelTCertificate bad = cert;
    for (CertStep& st : bad.steps) {
      if (st.kind == StepKind::monotonicity &&
          st.monotonicity->from_small == SubgroupTag::H1) {
        // claim H2 <= H1 instead of H <= H1
        st.monotonicity->to_small = SubgroupTag::H2;
        break;
      }
    }
    CertificateCheckReport rep = check_certificate(bad, p, 10, 3);
    CHECK_FALSE(rep.all_pass);
    for (const StepCheck& sc : rep.steps)
      if (!sc.pass && sc.kind == std::string("monotonicity")) {
        // the counterexample is an SL-block generator of H2: index k*n ..
        // k*n + 2n(n-1) - 1 in the H2 generator list
        CHECK(sc.detail.find("is not in H1") != std::string::npos);
        std::size_t first_sl = p.spec.k * p.spec.n;
        CHECK(sc.detail.find("generator " + std::to_string(first_sl)) != std::string::npos);
      }
  }

  SECTION("broken decomposition factor in a stored witness") {
    RelTCertificate bad = cert;
    for (CertStep& st : bad.steps) {
      if (st.kind == StepKind::bounded_generation) {
        st.bounded_generation->samples[2].k2.mat.at(0, p.spec.k) += 5;
        break;
      }
    }
    CertificateCheckReport rep = check_certificate(bad, p, 10, 3);
    CHECK_FALSE(rep.all_pass);
    bool found = false;
    for (const StepCheck& sc : rep.steps)
      if (!sc.pass && sc.kind == std::string("bounded_generation")) {
        found = true;
        CHECK(sc.detail.find("witness 2") != std::string::npos);
      }
    CHECK(found);
  }
}

TEST_CASE("certificate construction refuses without the axiom") {
  GroupPresentation p = concrete_example();
  p.spec.n = 1;  // simulate a spec without the axiom
  CHECK_THROWS_AS(build_certificate(p), hypothesis_error);
}

TEST_CASE("certificate output always passes its own check") {
  Rng rng(53);
  for (int t = 0; t < 3; ++t) {
    std::size_t k = static_cast<std::size_t>(rng.range(1, 3));
    std::vector<IntMatrix> lambda{testing::random_unimodular(rng, k, 10)};
    GroupPresentation p = build_theorem1_family(k, 2 + static_cast<std::size_t>(t % 2), lambda);
    RelTCertificate cert = build_certificate(p);
    CHECK(check_certificate(cert, p, 25, static_cast<std::uint64_t>(t)).all_pass);
  }
}
