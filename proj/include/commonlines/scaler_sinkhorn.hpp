#pragma once

#include <commonlines/core.hpp>
#include <commonlines/scaler_admm.hpp>

#include <string>
#include <vector>

namespace clines {

// Relative weights of the norm operator N and determinant operator D1 + D2
// in the row and column steps.
struct SinkhornWeights {
  double row_norm = 0.0;
  double row_det = 1.0;
  double col_norm = 1.0;
  double col_det = 0.0;
};

struct SinkhornConfig {
  int max_iter = 500;
  double tol = 1e-10;
  double blowup = 1e8;
  double min_scale = 1e-10;
  int stagnation_window = 10;
  double stagnation_rel = 1e-14;
  SinkhornWeights weights;
};

struct NormMatrices {
  Mat N_L, N_R;
};

struct DetMatrices {
  Mat D_L1, D_L2, D_R1, D_R2;
};

struct SinkhornResult {
  CommonLinesMatrix A;
  SolverStatus status = SolverStatus::converged;
  std::vector<double> error;  // quadratic error before each sweep, then final
  int iterations = 0;
  int increases = 0;          // sweeps where the error went up
  std::string message;
};

NormMatrices assemble_norm_matrices(const Mat &m);
DetMatrices assemble_det_matrices(const CommonLinesMatrix &a);

// Right singular vector of the smallest singular value; the largest-magnitude
// entry is made positive (lowest index wins ties).
Vec min_unit_vector(const Mat &k);

SinkhornResult sinkhorn(const CommonLinesMatrix &a, const SinkhornConfig &cfg = {});

} // namespace clines
