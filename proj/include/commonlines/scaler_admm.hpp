#pragma once

#include <commonlines/core.hpp>

#include <string>
#include <vector>

namespace clines {

enum class SolverStatus { converged, not_converged, stagnated, diverged };
std::string to_string(SolverStatus s);

// How irls_admm seeds A and Λ.
//  determinant: solve the linear determinant system for the inverse scales
//               (exact on noiseless scaled data);
//  ones:        A = Â, Λ = 1.
enum class AdmmInit { determinant, ones };

struct AdmmConfig {
  double delta = 1e-8;
  int irls_max = 100;
  int admm_max = 200;
  int alt_max = 50;
  double tol_rel = 1e-10;
  double primal_tol = 1e-8;
  AdmmInit init = AdmmInit::determinant;
  // Divergence bounds on matrix norms.
  double blowup = 1e8;
  double vanish = 1e-12;
};

struct AdmmState {
  Mat A, B, Gamma;  // 2n×n
  Mat Lambda;       // n×n, symmetric, zero diagonal
  Mat W;            // n×n, zero diagonal
  double tau = 0.0;
};

struct AdmmDiagnostics {
  SolverStatus status = SolverStatus::converged;
  std::vector<double> objective;  // Σ‖â_ij − λ_ij a_ij‖ after each IRLS step
  int irls_iterations = 0;
  long admm_iterations = 0;
  double rank_gap = 0.0;
  bool cap_hit = false;
  std::string message;
};

struct AdmmResult {
  CommonLinesMatrix A;
  ScaleMatrix Lambda;
  AdmmDiagnostics diag;
};

Mat irls_weights(const Mat &a_hat, const Mat &lambda, const Mat &a, double delta);
Mat update_A(const AdmmState &s, const Mat &a_hat);
Mat update_lambda(const AdmmState &s, const Mat &a_hat);
Mat svp3(const Mat &m);
Mat update_gamma(const Mat &gamma, const Mat &a, const Mat &b);

// Σ_{i≠j} ‖â_ij − λ_ij a_ij‖₂, the robust objective.
double robust_objective(const Mat &a_hat, const Mat &lambda, const Mat &a);

// Scales Λ0 with Â ⊘ Λ0 satisfying the determinant equalities in the
// least-squares sense (null vector of the linearized system).
ScaleMatrix determinant_scales(const CommonLinesMatrix &a_hat);

AdmmResult irls_admm(const CommonLinesMatrix &a_hat, const AdmmConfig &cfg = {});

} // namespace clines
