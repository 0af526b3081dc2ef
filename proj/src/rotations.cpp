#include <commonlines/rotations.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>

namespace clines {

std::string to_string(Chirality c) { return c == Chirality::plus ? "plus" : "minus"; }

namespace {

constexpr int kSym[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

void check_factor(const Mat &b) {
  if (b.cols() != 3 || b.rows() % 2 != 0 || b.rows() == 0)
    throw InvalidArgument("factor must be 2n x 3");
  Vec s = singular_values(b);
  if (!(s(2) > 1e-12 * s(0)))
    throw RankDeficient("factor has numerical rank < 3");
}

// Flip singular vector pairs so each right vector has its largest entry positive.
void canonical_signs(Mat &u, Mat &v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < v.rows(); ++r)
      if (std::abs(v(r, c)) > std::abs(v(best, c)) + 1e-12)
        best = r;
    if (v(best, c) < 0.0) {
      v.col(c) *= -1.0;
      u.col(c) *= -1.0;
    }
  }
}

} // namespace

Mat assemble_L(const Mat &b) {
  check_factor(b);
  const Eigen::Index n = b.rows() / 2;
  Mat l = Mat::Zero(9, 9);
  for (Eigen::Index m = 0; m < n; ++m) {
    Mat3 g = b.middleRows(2 * m, 2).transpose() * b.middleRows(2 * m, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int q = 0; q < 3; ++q)
            l(3 * i + j, 3 * k + q) += g(i, q) * g(j, k);
  }
  return l;
}

Mat3 solve_gram(const Mat &b) {
  Mat l = assemble_L(b);
  Mat3 rhs = b.transpose() * b;
  Eigen::Matrix<double, 6, 6> l6;
  Eigen::Matrix<double, 6, 1> r6;
  for (int p = 0; p < 6; ++p) {
    const int i = kSym[p][0], j = kSym[p][1];
    r6(p) = rhs(i, j);
    for (int q = 0; q < 6; ++q) {
      const int k = kSym[q][0], m = kSym[q][1];
      l6(p, q) = l(3 * i + j, 3 * k + m) + (k != m ? l(3 * i + j, 3 * m + k) : 0.0);
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 6, 6>> qr(l6);
  if (qr.rank() < 6)
    throw RankDeficient("normal equations for X are singular");
  Eigen::Matrix<double, 6, 1> x = qr.solve(r6);
  Mat3 out;
  for (int p = 0; p < 6; ++p) {
    out(kSym[p][0], kSym[p][1]) = x(p);
    out(kSym[p][1], kSym[p][0]) = x(p);
  }
  return out;
}

double psi_residual(const CommonLinesMatrix &a, const RotationSet &r) {
  Mat p = pure_common_lines(r).flat();
  double pp = p.squaredNorm();
  double c = pp > 0.0 ? std::max(0.0, a.flat().cwiseProduct(p).sum() / pp) : 0.0;
  return (a.flat() - c * p).norm();
}

RecoveryCandidate recover_candidate(const CommonLinesMatrix &a) {
  const int n = a.n();
  if (n < 3)
    throw InvalidArgument("recover_rotations needs n >= 3");
  Eigen::BDCSVD<Mat> svd(a.flat(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec s = svd.singularValues();
  if (s.size() < 3 || !(s(2) > 1e-12 * s(0)))
    throw RankDeficient("common lines matrix has numerical rank < 3");
  Mat u = svd.matrixU().leftCols(3), v = svd.matrixV().leftCols(3);
  canonical_signs(u, v);
  Vec root = s.head(3).cwiseSqrt();
  Mat b = u * root.asDiagonal();
  Mat c = v * root.asDiagonal();

  RecoveryCandidate out;
  Mat3 x = solve_gram(b);
  Eigen::SelfAdjointEigenSolver<Mat3> es(x);
  Vec3 d = es.eigenvalues();
  const double xnorm = x.norm();
  if (d.minCoeff() < -1e-6 * xnorm)
    out.indefinite_x = true;
  d = d.cwiseMax(0.0);
  // Symmetric square root: any Q with QQᵀ = X works, this one is canonical.
  Mat3 q = es.eigenvectors() * d.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  Mat bq = b * q;

  Mat third(n, 3);
  const bool invertible = d.minCoeff() > 1e-12 * d.maxCoeff();
  if (invertible) {
    third = c * q.inverse().transpose();
    double rms = std::sqrt(third.squaredNorm() / n);
    if (rms > 0.0)
      third /= rms;
  }
  std::vector<Mat3> raw(n);
  double det_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec3 q1 = bq.row(2 * i).transpose(), q2 = bq.row(2 * i + 1).transpose();
    Vec3 q3 = invertible ? Vec3(third.row(i).transpose()) : Vec3(q1.cross(q2));
    raw[i].row(0) = q2.transpose();
    raw[i].row(1) = -q1.transpose();
    raw[i].row(2) = q3.transpose();
    det_sum += raw[i].determinant();
  }
  const double sign = det_sum < 0.0 ? -1.0 : 1.0;
  out.rotations.reserve(n);
  for (int i = 0; i < n; ++i)
    out.rotations.push_back(Rotation::nearest(sign * raw[i]));
  out.residual = psi_residual(a, out.rotations);
  return out;
}

RecoveryResult recover_rotations(const CommonLinesMatrix &a) {
  RecoveryResult r;
  double gap = rank_gap(a.flat());
  if (gap > 1e-3)
    r.warnings.push_back("input is not near rank 3 (sigma4/sigma3 = " + std::to_string(gap) + ")");
  r.plus = recover_candidate(a);
  r.minus = recover_candidate(CommonLinesMatrix(Mat(-a.flat())));
  // Both candidates are judged as explanations of A itself; the minus run
  // fits −A by construction.
  r.minus.residual = psi_residual(a, r.minus.rotations);
  const bool use_minus = r.minus.residual < r.plus.residual;
  const RecoveryCandidate &best = use_minus ? r.minus : r.plus;
  r.rotations = best.rotations;
  r.residual = best.residual;
  r.chirality = use_minus ? Chirality::minus : Chirality::plus;
  if (best.indefinite_x)
    r.warnings.push_back("IndefiniteX: clamping removed a significant negative eigenvalue");
  for (const auto &w : r.warnings)
    warn(w);
  return r;
}

} // namespace clines
