#pragma once

#include <commonlines/core.hpp>
#include <commonlines/scaler_admm.hpp>
#include <commonlines/scaler_sinkhorn.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace clines {

class InsufficientSamples : public Error {
public:
  using Error::Error;
};

struct ClusterConfig {
  int n_samples = 0;  // 0 selects default_n_samples(n)
  double rank_gap_max = 0.1;
  double error_floor = 1e-12;
  double min_block_ratio = 0.05;  // reject if smallest/largest fitted block norm is below
  double lfm_alpha = 1.85;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
  AdmmConfig admm = sample_admm_defaults();
  SinkhornConfig sinkhorn = sample_sinkhorn_defaults();

  static AdmmConfig sample_admm_defaults();
  static SinkhornConfig sample_sinkhorn_defaults();
};

// max(500, 25·C(n,2)/C(4,2)), capped at C(n,4).
long long default_n_samples(int n);

enum class RejectCause { none, diverged, not_converged, rank_gap_too_large, degenerate };
std::string to_string(RejectCause c);

using Sample = std::array<int, 4>;

struct SampleRecord {
  Sample S{};
  double e = 0.0;
};

struct SampleOutcome {
  SampleRecord record;
  RejectCause cause = RejectCause::none;
  bool accepted() const { return cause == RejectCause::none; }
};

// Runs IRLS-ADMM then Sinkhorn on the 8×4 principal submatrix (indices in
// the given order). The score is the quadratic error of the observed
// directions carrying the block norms of the nearest pure matrix, rescaled
// to unit mean squared block norm.
SampleOutcome sample_error(const CommonLinesMatrix &a, const Sample &s, const ClusterConfig &cfg);

Mat build_affinity(const std::vector<SampleRecord> &records, int n, double error_floor = 1e-12);

struct LfmResult {
  Partition partition;
  std::vector<std::vector<int>> communities;  // possibly overlapping, sorted members
};

LfmResult lfm_communities(const Mat &g, double alpha, std::uint64_t seed);

// Distinct 4-subsets (sorted indices): all of them when count ≥ C(n,4),
// otherwise a uniform sample without replacement.
std::vector<Sample> draw_samples(int n, long long count, std::uint64_t seed);

struct ClusterDiagnostics {
  long long requested = 0;
  long long accepted = 0;
  long long rejected_diverged = 0;
  long long rejected_not_converged = 0;
  long long rejected_rank_gap = 0;
  long long rejected_degenerate = 0;
  double acceptance_rate = 0.0;
  // counts of accepted errors per decade: bin b holds log10(e) ∈ [b−12, b−11)
  std::vector<long long> error_histogram;
  Mat G;
  std::vector<std::vector<int>> communities;
};

struct ClusterResult {
  Partition partition;
  ClusterDiagnostics diag;
};

ClusterResult clusters(const CommonLinesMatrix &a, const ClusterConfig &cfg);

} // namespace clines
