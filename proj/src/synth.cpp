#include <commonlines/synth.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace clines {

double standard_normal(Rng &rng) {
  // Box–Muller on our own uniforms keeps streams portable.
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rotation random_rotation(Rng &rng) {
  Eigen::Vector4d q;
  double nq = 0.0;
  do {
    for (int k = 0; k < 4; ++k)
      q(k) = standard_normal(rng);
    nq = q.norm();
  } while (nq < 1e-8);
  q /= nq;
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  Mat3 m;
  m << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return Rotation(m);
}

RotationSet random_rotations(int n, std::uint64_t seed) {
  if (n < 1)
    throw InvalidArgument("random_rotations needs n >= 1");
  Rng rng(seed);
  RotationSet out;
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(random_rotation(rng));
  return out;
}

std::pair<CommonLinesMatrix, ScaleMatrix> random_scales(const CommonLinesMatrix &a,
                                                        std::uint64_t seed, double lo,
                                                        double hi) {
  if (!(lo > 0.0 && lo < hi))
    throw InvalidArgument("random_scales needs 0 < lo < hi");
  const int n = a.n();
  Rng rng(seed);
  Mat l = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double mag = lo + (hi - lo) * uniform01(rng);
      double sign = (rng() >> 63) ? -1.0 : 1.0;
      l(i, j) = l(j, i) = sign * mag;
    }
  return {apply_scales(a, l), ScaleMatrix(l)};
}

CommonLinesMatrix perturb(const CommonLinesMatrix &a, const NoiseSpec &spec) {
  if (!(spec.angle_sigma >= 0.0) || !(spec.outlier_rate >= 0.0 && spec.outlier_rate <= 1.0))
    throw InvalidArgument("invalid noise spec");
  const int n = a.n();
  Rng rng(spec.seed);
  CommonLinesMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j)
        continue;
      Vec2 b = a.block(i, j);
      double r = b.norm();
      if (!(r > 0.0))
        throw DegenerateBlock(i, j);
      // Always draw both variates so the stream layout is independent of the rates.
      bool outlier = uniform01(rng) < spec.outlier_rate;
      double g = standard_normal(rng);
      double u = uniform01(rng);
      if (outlier) {
        double th = 2.0 * std::numbers::pi * u;
        out.set_block(i, j, r * Vec2(std::cos(th), std::sin(th)));
      } else if (spec.angle_sigma > 0.0) {
        double d = spec.angle_sigma * g;
        double c = std::cos(d), s = std::sin(d);
        Vec2 v(c * b.x() - s * b.y(), s * b.x() + c * b.y());
        out.set_block(i, j, v * (r / v.norm()));
      } else {
        out.set_block(i, j, b);
      }
    }
  return out;
}

HeteroResult heterogeneous(const HeteroSpec &spec) {
  const auto &sizes = spec.cluster_sizes;
  if (sizes.empty())
    throw InvalidArgument("heterogeneous needs at least one cluster");
  if (!spec.cluster_seeds.empty() && spec.cluster_seeds.size() != sizes.size())
    throw InvalidArgument("one rotation seed per cluster expected");
  for (int s : sizes)
    if (s < 3)
      throw InvalidArgument("cluster sizes must be >= 3");
  const int n = std::accumulate(sizes.begin(), sizes.end(), 0);
  const int nc = static_cast<int>(sizes.size());

  HeteroResult res;
  std::vector<int> label(n);
  RotationSet by_image(n);
  Mat flat = Mat::Zero(2 * n, n);
  int off = 0;
  for (int c = 0; c < nc; ++c) {
    std::uint64_t cs =
        spec.cluster_seeds.empty() ? derive_seed(spec.seed, 100 + c) : spec.cluster_seeds[c];
    RotationSet rs = random_rotations(sizes[c], cs);
    CommonLinesMatrix p = pure_common_lines(rs);
    flat.block(2 * off, off, 2 * sizes[c], sizes[c]) = p.flat();
    for (int k = 0; k < sizes[c]; ++k) {
      label[off + k] = c;
      by_image[off + k] = rs[k];
    }
    res.rotations.push_back(std::move(rs));
    off += sizes[c];
  }

  Rng cross(derive_seed(spec.seed, 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (label[i] != label[j]) {
        double th = 2.0 * std::numbers::pi * uniform01(cross);
        flat.block<2, 1>(2 * i, j) = Vec2(std::cos(th), std::sin(th));
      }

  // Fisher–Yates with our own uniforms (std::shuffle is not portable).
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng shuf(derive_seed(spec.seed, 2));
  for (int k = n - 1; k > 0; --k) {
    int r = static_cast<int>(uniform01(shuf) * (k + 1));
    std::swap(perm[k], perm[r]);
  }

  CommonLinesMatrix shuffled(n);
  std::vector<int> shuffled_label(n);
  res.image_rotations.resize(n);
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < n; ++p)
      if (p != q)
        shuffled.set_block(p, q, flat.block<2, 1>(2 * perm[p], perm[q]));
    shuffled_label[q] = label[perm[q]];
    res.image_rotations[q] = by_image[perm[q]];
  }
  res.matrix = std::move(shuffled);
  res.truth = Partition(shuffled_label);
  res.permutation = std::move(perm);
  return res;
}

} // namespace clines
