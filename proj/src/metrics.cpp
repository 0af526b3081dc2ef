#include <commonlines/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <map>

namespace clines {

namespace {

double clamped_acos(double x) {
  if (x > 1.0 + 1e-9 || x < -1.0 - 1e-9)
    warn("arccos argument " + std::to_string(x) + " outside [-1, 1]");
  return std::acos(std::clamp(x, -1.0, 1.0));
}

using i128 = __int128;

i128 choose2(long long m) { return static_cast<i128>(m) * (m - 1) / 2; }

} // namespace

ProcrustesResult procrustes_error(const RotationSet &r_gt, const RotationSet &r_est) {
  if (r_gt.size() != r_est.size() || r_gt.empty())
    throw InvalidArgument("procrustes_error needs equal, nonzero lengths");
  Mat3 k = Mat3::Zero();
  for (size_t i = 0; i < r_gt.size(); ++i)
    k += r_est[i].matrix().transpose() * r_gt[i].matrix();
  Eigen::JacobiSVD<Mat3> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0)
    d(2, 2) = -1.0;
  ProcrustesResult r;
  r.Q = svd.matrixU() * d * svd.matrixV().transpose();
  for (size_t i = 0; i < r_gt.size(); ++i)
    r.error += (r_gt[i].matrix() - r_est[i].matrix() * r.Q).squaredNorm();
  r.error /= static_cast<double>(r_gt.size());
  return r;
}

ChiralProcrustesResult procrustes_error_any_chirality(const RotationSet &r_gt, const RotationSet &r_est) {
  const Mat3 j = Vec3(-1.0, -1.0, 1.0).asDiagonal();
  RotationSet mirrored;
  mirrored.reserve(r_est.size());
  for (const auto &r : r_est)
    mirrored.emplace_back(j * r.matrix());
  ChiralProcrustesResult res{procrustes_error(r_gt, r_est), false, r_est};
  ProcrustesResult other = procrustes_error(r_gt, mirrored);
  // Strict comparison: ties keep the estimate as given.
  if (other.error < res.alignment.error)
    res = {other, true, std::move(mirrored)};
  return res;
}

double angular_error(const Mat3 &r, const Mat3 &s) {
  return clamped_acos(((r.transpose() * s).trace() - 1.0) / 2.0);
}

double angular_error_frobenius(const Mat3 &r, const Mat3 &s) {
  const double f = (r - s).squaredNorm();
  return clamped_acos((3.0 - f / 2.0 - 1.0) / 2.0);
}

double denoising_error(const CommonLinesMatrix &a_gt, const CommonLinesMatrix &a_rec) {
  if (a_gt.n() != a_rec.n())
    throw InvalidArgument("denoising_error needs equal sizes");
  const Mat &a = a_gt.flat();
  const Mat &b = a_rec.flat();
  const double bb = b.squaredNorm();
  if (!(std::sqrt(bb) > 1e-14))
    throw ZeroMatrix("denoising_error: reconstruction is zero");
  const double lambda = a.cwiseProduct(b).sum() / bb;
  return (a - lambda * b).squaredNorm() / a_gt.n();
}

double adjusted_rand_index(const Partition &p, const Partition &q) {
  if (p.n() != q.n())
    throw InvalidArgument("adjusted_rand_index needs equal lengths");
  const long long n = p.n();
  if (n < 2)
    throw UndefinedMetric("adjusted Rand index undefined for n < 2");
  std::map<std::pair<int, int>, long long> table;
  for (long long k = 0; k < n; ++k)
    ++table[{p.labels()[k], q.labels()[k]}];
  i128 index = 0, a = 0, b = 0;
  for (const auto &[key, c] : table)
    index += choose2(c);
  for (int s : p.sizes())
    a += choose2(s);
  for (int s : q.sizes())
    b += choose2(s);
  const i128 total = choose2(n);
  // ARI = (index − ab/N) / ((a+b)/2 − ab/N), scaled by 2N to stay integral.
  const i128 num = 2 * (index * total - a * b);
  const i128 den = (a + b) * total - 2 * a * b;
  if (den == 0) {
    if (num == 0)
      return 1.0;  // both partitions trivial and identical in pair structure
    throw UndefinedMetric("adjusted Rand index undefined for these partitions");
  }
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

} // namespace clines
