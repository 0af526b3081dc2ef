#pragma once

#include <commonlines/core.hpp>
#include <commonlines/random.hpp>

#include <utility>

namespace clines {

struct NoiseSpec {
  double angle_sigma = 0.0;   // std of in-plane jitter, radians
  double outlier_rate = 0.0;  // probability a representative is replaced
  std::uint64_t seed = 0;
};

struct HeteroSpec {
  std::vector<int> cluster_sizes;
  std::uint64_t seed = 0;
  // Optional per-cluster rotation seeds; derived from seed when empty.
  std::vector<std::uint64_t> cluster_seeds;
};

struct HeteroResult {
  CommonLinesMatrix matrix;
  Partition truth;
  std::vector<RotationSet> rotations;  // per cluster, in cluster order
  RotationSet image_rotations;         // rotation of each (shuffled) image
  std::vector<int> permutation;        // image p came from unshuffled index permutation[p]
};

double standard_normal(Rng &rng);
Rotation random_rotation(Rng &rng);
RotationSet random_rotations(int n, std::uint64_t seed);

// Multiplies block (i,j) by λ_ij with |λ_ij| ∈ [lo,hi], random sign, Λ symmetric.
std::pair<CommonLinesMatrix, ScaleMatrix> random_scales(const CommonLinesMatrix &a,
                                                        std::uint64_t seed, double lo = 0.2,
                                                        double hi = 5.0);

CommonLinesMatrix perturb(const CommonLinesMatrix &a, const NoiseSpec &spec);

HeteroResult heterogeneous(const HeteroSpec &spec);

} // namespace clines
