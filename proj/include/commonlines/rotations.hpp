#pragma once

#include <commonlines/core.hpp>

#include <string>
#include <vector>

namespace clines {

enum class Chirality { plus, minus };
std::string to_string(Chirality c);

struct RecoveryCandidate {
  RotationSet rotations;
  double residual = 0.0;
  bool indefinite_x = false;  // clamping removed a significant negative eigenvalue
};

struct RecoveryResult {
  RotationSet rotations;
  Chirality chirality = Chirality::plus;
  double residual = 0.0;
  RecoveryCandidate plus, minus;
  std::vector<std::string> warnings;
};

// 9×9 operator with L·vec(X) = Σ_m G_m X G_m for symmetric X, G_m = B_mᵀB_m
// (B_m the m-th pair of rows). vec is row-major: index 3i + j.
Mat assemble_L(const Mat &b);
// Symmetric X minimizing Σ_m ‖B_m X B_mᵀ − I₂‖²_F, via the 6×6 reduction.
Mat3 solve_gram(const Mat &b);

// min over c ≥ 0 of ‖A − c·ψ(R)‖_F.
double psi_residual(const CommonLinesMatrix &a, const RotationSet &r);

// One run of the recovery on A as given (no chirality selection).
RecoveryCandidate recover_candidate(const CommonLinesMatrix &a);
RecoveryResult recover_rotations(const CommonLinesMatrix &a);

} // namespace clines
