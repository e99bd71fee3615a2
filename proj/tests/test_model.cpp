#include "doctest.h"
#include "model_fixtures.hpp"
#include "stm/error.hpp"
#include "stm/model.hpp"

#include <numeric>

using namespace stm;
using namespace stm::testing;

namespace {

void check_invariants(const ModelState& st, const TrainingData& data) {
  const auto& c = st.counts;
  CHECK(c.all_non_negative());
  CHECK(c.n_doc_type.sum() == data.num_docs());
  CHECK(static_cast<std::size_t>(c.n_word_by_topic.sum()) == data.num_tokens());
  CHECK(c.n_word_by_topic.colwise().sum().transpose() == c.n_topic_total);
  CHECK(c.n_topic_by_doc.colwise().sum().transpose() == c.n_bg_total_by_doc);
  CHECK(c.n_topic_by_src.colwise().sum().transpose() == c.n_srcword_total);
  CHECK(c.n_src_by_doc.rowwise().sum() == c.n_src_total_by_doc);
  CHECK(rebuild_counts(st.latent, data, st.hyper) == st.counts);
}

}  // namespace

TEST_CASE("a sourceless, wordless document has the prior as its doc-type conditional") {
  auto data = TrainingData::from_arrays(1, {{}}, {{}}, {0});
  auto st = init_state(data, Hyperparameters::symmetric(2, 1, 1), 1);
  auto p = doc_type_conditional(st, data, 0);
  CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("doc-type conditional with the other document pinned") {
  // doc 0: one source, two background words, type 0. doc 1: one source, one background word.
  // With S = K = 1 every source and word factor is 1, leaving (H_T + n_t) = (2, 1).
  oracle::Instance in;
  in.T = 2, in.S = 1, in.K = 1, in.V = 1;
  in.words = {{0, 0}, {0}};
  in.gamma = {{-1, -1}, {-1}};
  in.sources = {1, 1};
  auto data = data_of(in);
  for (auto rule : {BlockRule::AsPrinted, BlockRule::Exact}) {
    auto st = init_state(data, hyper_of(in), 3, rule);
    set_assignment(st, data, in, {0, 1, 0, 0, 0, 0, 0});
    auto p = doc_type_conditional(st, data, 1);
    CHECK(p(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("source-type conditional against hand enumeration") {
  // One doc of type 0; source 0 has two words in topic 0, source 1 (type 0) has words in topics 0 and 1.
  oracle::Instance in;
  in.T = 1, in.S = 2, in.K = 2, in.V = 1;
  in.words = {{0, 0, 0, 0}};
  in.gamma = {{0, 0, 1, 1}};
  in.sources = {2};
  auto data = data_of(in);
  const oracle::Assignment x = {0, /*sources*/ 1, 0, /*topics*/ 0, 0, 0, 1};

  auto st = init_state(data, hyper_of(in), 5, BlockRule::AsPrinted);
  set_assignment(st, data, in, x);
  auto p = source_type_conditional(st, data, 0, 0);
  // w(0) = (0.1 + 1) (1.1 / 2.2)^2, w(1) = 0.1 (0.1 / 0.2)^2
  const double a0 = 1.1 * 0.25, a1 = 0.1 * 0.25;
  CHECK(p(0) == doctest::Approx(a0 / (a0 + a1)).epsilon(1e-13));

  st = init_state(data, hyper_of(in), 5, BlockRule::Exact);
  set_assignment(st, data, in, x);
  p = source_type_conditional(st, data, 0, 0);
  // ascending: w(0) = 1.1 (1.1/2.2)(2.1/3.2), w(1) = 0.1 (0.1/0.2)(1.1/1.2)
  const double e0 = 1.1 * (1.1 / 2.2) * (2.1 / 3.2), e1 = 0.1 * (0.1 / 0.2) * (1.1 / 1.2);
  CHECK(p(0) == doctest::Approx(e0 / (e0 + e1)).epsilon(1e-13));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("source with no words and zero counts: uniform over source-types") {
  auto data = TrainingData::from_arrays(1, {{}}, {{}}, {1});
  auto st = init_state(data, Hyperparameters::symmetric(1, 3, 2), 2);
  auto p = source_type_conditional(st, data, 0, 0);
  for (int s = 0; s < 3; ++s) CHECK(p(s) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("word-topic conditional against hand enumeration") {
  // words [0, 1, 0], gamma [bg, src0, bg], topics [0, 1, 0], T = S = 1, K = V = 2.
  oracle::Instance in;
  in.T = 1, in.S = 1, in.K = 2, in.V = 2;
  in.words = {{0, 1, 0}};
  in.gamma = {{-1, 0, -1}};
  in.sources = {1};
  auto data = data_of(in);
  auto st = init_state(data, hyper_of(in), 9);
  set_assignment(st, data, in, {0, 0, 0, 1, 0});

  auto p = word_topic_conditional(st, data, 0, 2);
  const double w0 = 1.1 * 1.01 / 1.02, w1 = 0.1 * 0.01 / 1.02;
  CHECK(p(0) == doctest::Approx(w0 / (w0 + w1)).epsilon(1e-13));

  p = word_topic_conditional(st, data, 0, 1);
  const double v0 = 0.1 * 0.01 / 2.02, v1 = 0.1 * 0.01 / 0.02;
  CHECK(p(1) == doctest::Approx(v1 / (v0 + v1)).epsilon(1e-13));
  CHECK(p(1) == doctest::Approx(101.0 / 102.0).epsilon(1e-13));
}

TEST_CASE("word-topic conditional is uniform when every count is zero") {
  for (int g : {-1, 0}) {
    auto data = TrainingData::from_arrays(3, {{2}}, {{g}}, {1});
    auto st = init_state(data, Hyperparameters::symmetric(1, 1, 2), 4);
    auto p = word_topic_conditional(st, data, 0, 0);
    CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("rich get richer") {
  for (int g : {-1, 0}) {
    auto data = TrainingData::from_arrays(2, {{1, 1}}, {{g, g}}, {1});
    auto st = init_state(data, Hyperparameters::symmetric(1, 1, 2), 4);
    st.latent.word_topic[0] << 0, 1;
    st.counts = rebuild_counts(st.latent, data, st.hyper);
    auto p = word_topic_conditional(st, data, 0, 1);
    CHECK(p(0) > p(1));
  }
}

TEST_CASE("every conditional matches the brute-force oracle") {
  std::vector<oracle::Instance> instances = {oracle::enumerable_instance(), random_instance(11, 4, 3, 3, 4, 5, 6),
                                             random_instance(12, 6, 2, 4, 3, 4, 8)};
  Rng rng(2024);
  for (const auto& in : instances) {
    const auto data = data_of(in);
    const int D = in.num_docs(), N = in.num_sources();
    for (bool exact : {false, true}) {
      auto st = init_state(data, hyper_of(in), 1, exact ? BlockRule::Exact : BlockRule::AsPrinted);
      for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_assignment(in, rng);
        set_assignment(st, data, in, x);
        const auto before = st.counts;
        for (int site = 0; site < in.num_sites(); ++site) {
          Eigen::VectorXd p;
          if (site < D) {
            p = doc_type_conditional(st, data, site);
          } else if (site < D + N) {
            int d = 0;
            while (in.source_offset(d + 1) <= site - D) ++d;
            p = source_type_conditional(st, data, d, site - D - in.source_offset(d));
          } else {
            int d = 0;
            while (in.token_offset(d + 1) <= site - D - N) ++d;
            p = word_topic_conditional(st, data, d, site - D - N - in.token_offset(d));
          }
          const auto q = oracle::conditional(in, x, site, exact);
          REQUIRE(static_cast<std::size_t>(p.size()) == q.size());
          for (std::size_t v = 0; v < q.size(); ++v) CHECK(p(static_cast<Eigen::Index>(v)) == doctest::Approx(q[v]).epsilon(1e-12));
          CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
        }
        CHECK(st.counts == before);
      }
    }
  }
}

TEST_CASE("log_joint matches the oracle and is finite") {
  auto hyper = Hyperparameters::symmetric(2, 2, 2);
  CHECK(log_joint(CountTables::zeros(2, 2, 2, 3), hyper) == 0.0);

  Rng rng(7);
  for (const auto& in : {oracle::enumerable_instance(), random_instance(21, 5, 3, 2, 4, 6, 7)}) {
    const auto data = data_of(in);
    auto st = init_state(data, hyper_of(in), 1);
    for (int trial = 0; trial < 30; ++trial) {
      const auto x = random_assignment(in, rng);
      set_assignment(st, data, in, x);
      const double lj = log_joint(st);
      CHECK(std::isfinite(lj));
      CHECK(lj == doctest::Approx(oracle::log_joint(in, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log_joint is invariant under relabeling") {
  const auto in = random_instance(31, 6, 3, 3, 4, 6, 9);
  const auto data = data_of(in);
  auto st = init_state(data, hyper_of(in), 17);
  for (int i = 0; i < 5; ++i) sweep(st, data);
  const double before = log_joint(st);

  auto permuted = st;
  const std::vector<int> topic_perm = {2, 0, 3, 1}, type_perm = {1, 2, 0}, src_perm = {2, 0, 1};
  for (auto& z : permuted.latent.word_topic)
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = topic_perm[static_cast<std::size_t>(z(j))];
  for (Eigen::Index d = 0; d < permuted.latent.doc_type.size(); ++d)
    permuted.latent.doc_type(d) = type_perm[static_cast<std::size_t>(permuted.latent.doc_type(d))];
  for (Eigen::Index g = 0; g < permuted.latent.source_type.size(); ++g)
    permuted.latent.source_type(g) = src_perm[static_cast<std::size_t>(permuted.latent.source_type(g))];
  permuted.counts = rebuild_counts(permuted.latent, data, permuted.hyper);
  CHECK(log_joint(permuted) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("init_state") {
  const auto in = random_instance(41, 10, 3, 4, 5, 8, 12);
  const auto data = data_of(in);
  auto a = init_state(data, hyper_of(in), 99);
  auto b = init_state(data, hyper_of(in), 99);
  CHECK(a == b);
  CHECK(rebuild_counts(a.latent, data, a.hyper) == a.counts);
  CHECK_FALSE(init_state(data, hyper_of(in), 100) == a);

  TrainingData empty;
  empty.vocab_size = 1;
  CHECK_THROWS_AS(init_state(empty, hyper_of(in), 1), ValidationError);

  auto clamped = TrainingData::from_arrays(in.V, in.words, in.gamma, in.sources,
                                           std::vector<int>(static_cast<std::size_t>(in.num_sources()), 2));
  auto st = init_state(clamped, hyper_of(in), 5);
  CHECK((st.latent.source_type.array() == 2).all());
  auto bad = TrainingData::from_arrays(in.V, in.words, in.gamma, in.sources,
                                       std::vector<int>(static_cast<std::size_t>(in.num_sources()), 4));
  CHECK_THROWS_AS(init_state(bad, hyper_of(in), 5), ValidationError);
  CHECK_THROWS_AS(Hyperparameters::symmetric(0, 1, 1), ValidationError);
  CHECK_THROWS_AS(Hyperparameters::symmetric(1, 1, 1, 1.0, -0.1), ValidationError);
}

TEST_CASE("no background words leaves n_topic_by_doc empty") {
  auto data = TrainingData::from_arrays(3, {{0, 1}, {2}}, {{0, 0}, {0}}, {1, 1});
  auto st = init_state(data, Hyperparameters::symmetric(2, 2, 2), 1);
  for (int i = 0; i < 10; ++i) sweep(st, data);
  CHECK(st.counts.n_topic_by_doc.isZero());
  CHECK(rebuild_counts(st.latent, data, st.hyper).n_topic_by_doc.isZero());
}

TEST_CASE("sweeps conserve counts and are deterministic") {
  const auto in = random_instance(51, 30, 4, 5, 6, 20, 25);
  const auto data = data_of(in);
  for (auto rule : {BlockRule::AsPrinted, BlockRule::Exact}) {
    auto a = init_state(data, hyper_of(in), 3, rule);
    auto b = init_state(data, hyper_of(in), 3, rule);
    for (int i = 0; i < 100; ++i) {
      sweep(a, data);
      sweep(b, data);
    }
    CHECK(a.sweep == 100);
    check_invariants(a, data);
    CHECK(a == b);
  }
}

TEST_CASE("clamped sources never move") {
  const auto in = random_instance(61, 20, 3, 4, 5, 10, 15);
  std::vector<int> clamp(static_cast<std::size_t>(in.num_sources()), -1);
  for (std::size_t g = 0; g < clamp.size(); g += 3) clamp[g] = static_cast<int>(g % 4);
  const auto data = TrainingData::from_arrays(in.V, in.words, in.gamma, in.sources, clamp);
  auto st = init_state(data, hyper_of(in), 8);

  // Sampling a clamped source is a no-op, generator included.
  const auto before = st;
  sample_source_type(st, data, 0, 0);
  CHECK(st == before);

  for (int i = 0; i < 50; ++i) {
    sweep(st, data);
    for (std::size_t g = 0; g < clamp.size(); ++g)
      if (clamp[g] >= 0) CHECK(st.latent.source_type(static_cast<Eigen::Index>(g)) == clamp[g]);
  }
  check_invariants(st, data);
}
