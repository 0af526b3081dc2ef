#include "doctest.h"

#include <commonlines/cluster.hpp>
#include <commonlines/metrics.hpp>
#include <commonlines/synth.hpp>

#include <algorithm>
#include <cmath>
#include <set>

using namespace clines;

namespace {

Mat cliques(const std::vector<int> &sizes, double inside, double across) {
  int n = 0;
  for (int s : sizes)
    n += s;
  std::vector<int> lab;
  for (int c = 0; c < static_cast<int>(sizes.size()); ++c)
    lab.insert(lab.end(), sizes[c], c);
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = i == j ? 0.0 : (lab[i] == lab[j] ? inside : across);
  return g;
}

std::vector<int> planted_labels(const std::vector<int> &sizes) {
  std::vector<int> lab;
  for (int c = 0; c < static_cast<int>(sizes.size()); ++c)
    lab.insert(lab.end(), sizes[c], c);
  return lab;
}

// Members of each truth cluster, in image order.
std::vector<std::vector<int>> members(const Partition &p) {
  std::vector<std::vector<int>> m(p.num_clusters());
  for (int i = 0; i < p.n(); ++i)
    m[p.labels()[i]].push_back(i);
  return m;
}

} // namespace

TEST_CASE("default_n_samples: expected pair coverage of at least 25, rounded up") {
  CHECK(default_n_samples(50) == 5105);
  CHECK(default_n_samples(8) == 70);
  CHECK(default_n_samples(12) == 495);
  CHECK(default_n_samples(20) == 792);
}

TEST_CASE("draw_samples") {
  auto all = draw_samples(8, 1000, 1);
  CHECK(all.size() == 70);
  std::set<Sample> distinct(all.begin(), all.end());
  CHECK(distinct.size() == 70);

  auto some = draw_samples(30, 500, 7);
  CHECK(some.size() == 500);
  CHECK(std::set<Sample>(some.begin(), some.end()).size() == 500);
  for (const auto &s : some) {
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(s[0] >= 0);
    CHECK(s[3] < 30);
  }
  CHECK(draw_samples(30, 500, 7) == some);
  CHECK_THROWS_AS(draw_samples(3, 10, 1), InvalidArgument);
}

TEST_CASE("build_affinity") {
  Mat g = build_affinity({{{0, 1, 2, 3}, std::exp(-10.0)}}, 5);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(g(i, j) == doctest::Approx(i == j ? 0.0 : 10.0).epsilon(1e-14));
  CHECK(g.row(4).isZero(0.0));

  Mat h = build_affinity({{{0, 1, 2, 3}, 1e-3}, {{0, 1, 4, 5}, 1e-6}}, 6);
  CHECK(h(0, 1) == doctest::Approx(-std::log(1e-6)));
  CHECK(h(2, 3) == doctest::Approx(-std::log(1e-3)));
  CHECK(h(2, 4) == 0.0);

  Mat f = build_affinity({{{0, 1, 2, 3}, 1e-30}}, 4);
  CHECK(f.maxCoeff() == doctest::Approx(-std::log(1e-12)));
  CHECK(f.maxCoeff() <= 27.632);
  CHECK(f == f.transpose());
}

TEST_CASE("lfm: disconnected cliques, alpha sweep") {
  Mat g = cliques({6, 9}, 1.0, 0.0);
  Partition truth(planted_labels({6, 9}));
  for (double alpha : {0.8, 0.9, 1.0, 1.1, 1.2, 1.85}) {
    LfmResult r = lfm_communities(g, alpha, 3);
    CAPTURE(alpha);
    CHECK(r.partition.num_clusters() == 2);
    CHECK(adjusted_rand_index(truth, r.partition) == 1.0);
  }
}

TEST_CASE("lfm: planted weighted partition") {
  const std::vector<int> sizes{17, 17, 16};
  Partition truth(planted_labels(sizes));
  Mat g = cliques(sizes, 10.0, 1.0);
  for (double alpha : {1.0, ClusterConfig{}.lfm_alpha}) {
    double worst = 1.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      // Shuffle node order so seeds and ties differ between runs.
      std::vector<int> perm(50);
      for (int i = 0; i < 50; ++i)
        perm[i] = i;
      Rng rng(seed);
      for (int i = 49; i > 0; --i)
        std::swap(perm[i], perm[rng() % (i + 1)]);
      Mat gp(50, 50);
      std::vector<int> lab(50);
      for (int i = 0; i < 50; ++i) {
        lab[i] = truth.labels()[perm[i]];
        for (int j = 0; j < 50; ++j)
          gp(i, j) = g(perm[i], perm[j]);
      }
      LfmResult r = lfm_communities(gp, alpha, seed);
      worst = std::min(worst, adjusted_rand_index(Partition::canonical(lab), r.partition));
    }
    CAPTURE(alpha);
    CHECK(worst >= 0.95);
  }
}

TEST_CASE("lfm: input validation and determinism") {
  Mat g = cliques({4, 4}, 1.0, 0.1);
  CHECK(lfm_communities(g, 1.0, 5).partition.labels() == lfm_communities(g, 1.0, 5).partition.labels());
  Mat bad = g;
  bad(0, 1) = 2.0;
  CHECK_THROWS_AS(lfm_communities(bad, 1.0, 1), InvalidArgument);
}

TEST_CASE("sample_error: within-cluster samples score near zero") {
  HeteroSpec spec{{5, 30, 15}, 4, {}};
  HeteroResult h = heterogeneous(spec);
  ClusterConfig cfg;
  auto m = members(h.truth);
  Rng rng(9);
  int accepted = 0;
  for (int t = 0; t < 60; ++t) {
    const auto &c = m[t % 3];
    std::vector<int> pick = c;
    for (int k = 0; k < 4; ++k)
      std::swap(pick[k], pick[k + rng() % (pick.size() - k)]);
    Sample s{pick[0], pick[1], pick[2], pick[3]};
    std::sort(s.begin(), s.end());
    SampleOutcome o = sample_error(h.matrix, s, cfg);
    if (o.accepted()) {
      ++accepted;
      CHECK(o.record.e <= 1e-10);
    }
  }
  CHECK(accepted >= 54);
}

TEST_CASE("sample_error: cross-cluster samples score high or are rejected") {
  HeteroSpec spec{{5, 30, 15}, 6, {}};
  HeteroResult h = heterogeneous(spec);
  ClusterConfig cfg;
  const auto &lab = h.truth.labels();
  int good = 0, total = 0;
  for (const Sample &s : draw_samples(50, 3000, 2)) {
    std::set<int> seen{lab[s[0]], lab[s[1]], lab[s[2]], lab[s[3]]};
    if (seen.size() < 2)
      continue;
    SampleOutcome o = sample_error(h.matrix, s, cfg);
    good += !o.accepted() || o.record.e >= 1e-4;
    if (++total == 500)
      break;
  }
  REQUIRE(total == 500);
  CHECK(good >= 475);
}

TEST_CASE("sample_error: preconditions and relabeling") {
  HeteroResult h = heterogeneous(HeteroSpec{{6, 6}, 1, {}});
  ClusterConfig cfg;
  CHECK_THROWS_AS(sample_error(h.matrix, Sample{0, 1, 1, 2}, cfg), InvalidArgument);
  CHECK_THROWS_AS(sample_error(h.matrix, Sample{0, 1, 2, 12}, cfg), InvalidArgument);

  // Relabel images by a permutation; the same sample under new labels scores the same.
  std::vector<int> perm{3, 7, 0, 11, 5, 1, 9, 2, 10, 4, 8, 6};
  Mat f = Mat::Zero(24, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      if (i != j)
        f.block<2, 1>(2 * perm[i], perm[j]) = h.matrix.block(i, j);
  CommonLinesMatrix relabeled(f);
  for (const Sample &s : draw_samples(12, 40, 3)) {
    SampleOutcome a = sample_error(h.matrix, s, cfg);
    SampleOutcome b = sample_error(relabeled, Sample{perm[s[0]], perm[s[1]], perm[s[2]], perm[s[3]]}, cfg);
    CHECK(a.cause == b.cause);
    if (a.accepted() && b.accepted())
      CHECK(std::abs(a.record.e - b.record.e) <= 1e-10);
  }
}

TEST_CASE("clusters: homogeneous input forms one community") {
  CommonLinesMatrix a = pure_common_lines(random_rotations(12, 5));
  ClusterConfig cfg;
  cfg.threads = 1;
  ClusterResult r = clusters(a, cfg);
  auto sizes = r.partition.sizes();
  CHECK(*std::max_element(sizes.begin(), sizes.end()) >= 11);
  CHECK(r.diag.requested == 495);
  CHECK(r.diag.acceptance_rate > 0.9);
}

TEST_CASE("clusters: deterministic across thread counts") {
  HeteroResult h = heterogeneous(HeteroSpec{{6, 6}, 2, {}});
  ClusterConfig cfg;
  cfg.seed = 4;
  cfg.threads = 1;
  ClusterResult a = clusters(h.matrix, cfg);
  cfg.threads = 3;
  ClusterResult b = clusters(h.matrix, cfg);
  CHECK(a.partition.labels() == b.partition.labels());
  CHECK(a.diag.G == b.diag.G);
  CHECK(a.diag.error_histogram == b.diag.error_histogram);
  const Mat &g = a.diag.G;
  CHECK(g == g.transpose());
  CHECK(g.diagonal().isZero(0.0));
  CHECK(g.minCoeff() >= 0.0);
  CHECK(g.maxCoeff() <= -std::log(cfg.error_floor) + 1e-12);
  CHECK(adjusted_rand_index(h.truth, a.partition) == 1.0);
}

TEST_CASE("clusters: argument checks and insufficient samples") {
  CHECK_THROWS_AS(clusters(pure_common_lines(random_rotations(7, 1)), ClusterConfig{}), InvalidArgument);
  HeteroResult h = heterogeneous(HeteroSpec{{3, 3, 3}, 2, {}});
  ClusterConfig cfg;
  cfg.rank_gap_max = 1e-300;
  CHECK_THROWS_AS(clusters(h.matrix, cfg), InsufficientSamples);
}
