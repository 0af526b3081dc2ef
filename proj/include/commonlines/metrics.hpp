#pragma once

#include <commonlines/core.hpp>

namespace clines {

struct ProcrustesResult {
  Mat3 Q;             // proper rotation aligning R_est to R_gt
  double error = 0.0; // (1/n) Σ ‖R_gt,i − R_est,i Q‖²_F
};

ProcrustesResult procrustes_error(const RotationSet &r_gt, const RotationSet &r_est);

// Common lines fix rotations only up to handedness: R_est and J·R_est,
// J = diag(−1, −1, 1), explain the same data up to sign. Aligns whichever fits.
struct ChiralProcrustesResult {
  ProcrustesResult alignment;
  bool flipped = false;   // true if J·R_est was the better fit
  RotationSet aligned_est; // R_est or J·R_est, before multiplication by Q
};

ChiralProcrustesResult procrustes_error_any_chirality(const RotationSet &r_gt, const RotationSet &r_est);

// θ = arccos((tr(RᵀS) − 1)/2), argument clamped to [−1, 1].
double angular_error(const Mat3 &r, const Mat3 &s);
inline double angular_error(const Rotation &r, const Rotation &s) {
  return angular_error(r.matrix(), s.matrix());
}
// Same angle through the identity ‖R − S‖²_F = 6 − 2 tr(RᵀS).
double angular_error_frobenius(const Mat3 &r, const Mat3 &s);

// min over λ of (1/n)‖A − λB‖²_F.
double denoising_error(const CommonLinesMatrix &a_gt, const CommonLinesMatrix &a_rec);

double adjusted_rand_index(const Partition &p, const Partition &q);

} // namespace clines
