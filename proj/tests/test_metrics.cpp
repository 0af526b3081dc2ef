#include "doctest.h"
#include "oracles.hpp"

#include <commonlines/metrics.hpp>
#include <commonlines/synth.hpp>

#include <cmath>
#include <numbers>

using namespace clines;

TEST_CASE("procrustes: exact alignment and single image") {
  RotationSet gt = random_rotations(10, 1);
  Mat3 q = random_rotations(1, 2)[0].matrix();
  RotationSet est;
  for (const auto &r : gt)
    est.emplace_back(r.matrix() * q.transpose());
  ProcrustesResult p = procrustes_error(gt, est);
  CHECK(p.error <= 1e-12);
  CHECK((p.Q - q).norm() <= 1e-12);

  ProcrustesResult one = procrustes_error({gt[0]}, {gt[0]});
  CHECK(one.error == doctest::Approx(0.0));
  CHECK(std::acos(std::clamp((3.0 - one.error / 2.0 - 1.0) / 2.0, -1.0, 1.0)) == doctest::Approx(0.0));

  CHECK_THROWS_AS(procrustes_error(gt, random_rotations(3, 1)), InvalidArgument);
  CHECK_THROWS_AS(procrustes_error({}, {}), InvalidArgument);
}

TEST_CASE("procrustes: closed form beats random rotations") {
  Rng rng(77);
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    RotationSet a = random_rotations(6, inst), b = random_rotations(6, inst + 500);
    ProcrustesResult p = procrustes_error(a, b);
    CHECK(Rotation::is_valid(p.Q, 1e-12));
    for (int t = 0; t < 200; ++t) {
      Mat3 q = oracle::random_rotation(rng);
      double e = 0.0;
      for (int i = 0; i < 6; ++i)
        e += (a[i].matrix() - b[i].matrix() * q).squaredNorm();
      CHECK(p.error <= e / 6.0 + 1e-12);
    }
  }
}

TEST_CASE("procrustes: invariant to a common right rotation") {
  RotationSet a = random_rotations(7, 3), b = random_rotations(7, 4);
  Mat3 q = random_rotations(1, 5)[0].matrix();
  RotationSet aq, bq;
  for (int i = 0; i < 7; ++i) {
    aq.emplace_back(a[i].matrix() * q);
    bq.emplace_back(b[i].matrix() * q);
  }
  CHECK(procrustes_error(aq, bq).error == doctest::Approx(procrustes_error(a, b).error).epsilon(1e-12));
}

TEST_CASE("procrustes over both chiralities") {
  const Mat3 j = Vec3(-1.0, -1.0, 1.0).asDiagonal();
  RotationSet gt = random_rotations(9, 21);
  Mat3 q = oracle::rot_z(0.3) * oracle::rot_x(1.1);
  RotationSet same, mirrored;
  for (const auto &r : gt) {
    same.emplace_back(r.matrix() * q);
    mirrored.emplace_back(j * r.matrix() * q);
  }
  // A mirrored estimate is far from the truth under rotation alignment alone.
  CHECK(procrustes_error(gt, mirrored).error > 0.1);

  ChiralProcrustesResult a = procrustes_error_any_chirality(gt, same);
  CHECK(!a.flipped);
  CHECK(a.alignment.error <= 1e-28);
  CHECK((a.alignment.Q - q.transpose()).norm() <= 1e-14);

  ChiralProcrustesResult b = procrustes_error_any_chirality(gt, mirrored);
  CHECK(b.flipped);
  CHECK(b.alignment.error <= 1e-28);
  for (int i = 0; i < 9; ++i)
    CHECK((b.aligned_est[i].matrix() * b.alignment.Q - gt[i].matrix()).norm() <= 1e-13);

  // Never worse than either single-chirality alignment.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RotationSet x = random_rotations(6, seed), y = random_rotations(6, seed + 50);
    ChiralProcrustesResult c = procrustes_error_any_chirality(x, y);
    CHECK(c.alignment.error <= procrustes_error(x, y).error);
  }
}

TEST_CASE("angular_error") {
  Mat3 r = random_rotations(1, 9)[0].matrix();
  CHECK(angular_error(r, r) == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(angular_error(r, r * oracle::rot_z(std::numbers::pi / 2)) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    Mat3 a = oracle::random_rotation(rng), b = oracle::random_rotation(rng);
    CHECK(std::abs(angular_error(a, b) - angular_error_frobenius(a, b)) <= 1e-12);
    CHECK(angular_error(a, b) == doctest::Approx(angular_error(b, a)).epsilon(1e-14));
  }
}

TEST_CASE("denoising_error") {
  CommonLinesMatrix a = pure_common_lines(random_rotations(6, 1));
  Mat bf = a.flat() * -2.5;
  CHECK(denoising_error(a, CommonLinesMatrix(bf)) <= 1e-28);

  // A block supported where A is zero-padded gives a zero inner product.
  Mat orth = Mat::Zero(12, 6);
  Mat af = a.flat();
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 6; ++i)
      if (i != j)
        orth.block<2, 1>(2 * i, j) = Vec2(-af(2 * i + 1, j), af(2 * i, j));
  CHECK(denoising_error(a, CommonLinesMatrix(orth)) == doctest::Approx(af.squaredNorm() / 6.0));

  Rng rng(2);
  CommonLinesMatrix b = pure_common_lines(random_rotations(6, 2));
  const double d = denoising_error(a, b);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    double lam = g(rng);
    CHECK(d <= (af - lam * b.flat()).squaredNorm() / 6.0 + 1e-14);
  }
  CHECK(denoising_error(a, CommonLinesMatrix(b.flat() * -3.0)) == doctest::Approx(d).epsilon(1e-12));
  CHECK_THROWS_AS(denoising_error(a, CommonLinesMatrix(6)), ZeroMatrix);
}

TEST_CASE("adjusted_rand_index: examples and symmetry") {
  Partition p({0, 0, 1, 1}), q({1, 1, 0, 0});
  CHECK(adjusted_rand_index(p, p) == 1.0);
  CHECK(adjusted_rand_index(p, q) == 1.0);
  Partition x({0, 1, 0, 1, 2, 2, 0}), y({0, 0, 1, 1, 1, 2, 2});
  CHECK(adjusted_rand_index(x, y) == doctest::Approx(adjusted_rand_index(y, x)).epsilon(1e-15));
  CHECK(adjusted_rand_index(x, y) == doctest::Approx(oracle::ari_float(x.labels(), y.labels())));
  CHECK_THROWS_AS(adjusted_rand_index(Partition({0}), Partition({0})), UndefinedMetric);
  CHECK_THROWS_AS(adjusted_rand_index(p, x), InvalidArgument);
}

TEST_CASE("adjusted_rand_index: chance level") {
  std::vector<int> base(40);
  for (int i = 0; i < 40; ++i)
    base[i] = i < 20 ? 0 : 1;
  Partition p(base);
  Rng rng(11);
  double sum = 0.0;
  for (int t = 0; t < 2000; ++t) {
    std::vector<int> lab(40);
    for (auto &l : lab)
      l = static_cast<int>(rng() % 2);
    sum += adjusted_rand_index(p, Partition::canonical(lab));
  }
  CHECK(std::abs(sum / 2000.0) <= 0.05);
}

TEST_CASE("adjusted_rand_index: exact at large n") {
  const int n = 10000;
  std::vector<int> a(n), b(n);
  Rng rng(5);
  for (int i = 0; i < n; ++i) {
    a[i] = i % 7;
    b[i] = rng() % 100 < 95 ? a[i] : static_cast<int>(rng() % 7);
  }
  Partition pa = Partition::canonical(a), pb = Partition::canonical(b);
  CHECK(adjusted_rand_index(pa, pb) == doctest::Approx(oracle::ari_float(pa.labels(), pb.labels())).epsilon(1e-9));
}
