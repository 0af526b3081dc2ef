#include <commonlines/core.hpp>

#include <cmath>
#include <map>
#include <mutex>

namespace clines {

namespace {
std::mutex sink_mutex;
WarningSink sink;
} // namespace

void set_warning_sink(WarningSink s) {
  std::lock_guard lock(sink_mutex);
  sink = std::move(s);
}

void warn(const std::string &msg) {
  std::lock_guard lock(sink_mutex);
  if (sink)
    sink(msg);
}

DegenerateBlock::DegenerateBlock(int i_, int j_)
    : Error("degenerate block (" + std::to_string(i_) + "," + std::to_string(j_) + ")"),
      i(i_), j(j_) {}

DegenerateDenominator::DegenerateDenominator(int i_, int j_)
    : Error("degenerate scale denominator at (" + std::to_string(i_) + "," +
            std::to_string(j_) + ")"),
      i(i_), j(j_) {}

bool Rotation::is_valid(const Mat3 &m, double tol) {
  if (!m.allFinite())
    return false;
  if ((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() > tol)
    return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

Rotation::Rotation(const Mat3 &m, double tol) : m_(m) {
  if (!is_valid(m, tol))
    throw InvalidArgument("matrix is not a proper rotation");
}

Rotation Rotation::nearest(const Mat3 &m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0)
    d(2, 2) = -1.0;
  Rotation r;
  r.m_ = svd.matrixU() * d * svd.matrixV().transpose();
  return r;
}

CommonLinesMatrix::CommonLinesMatrix(int n) : a_(Mat::Zero(2 * n, n)) {
  if (n < 0)
    throw InvalidArgument("negative size");
}

CommonLinesMatrix::CommonLinesMatrix(Mat flat) : a_(std::move(flat)) {
  if (a_.rows() != 2 * a_.cols())
    throw InvalidArgument("common lines matrix must be 2n x n");
  if (!a_.allFinite())
    throw InvalidArgument("common lines matrix has non-finite entries");
  for (int i = 0; i < n(); ++i)
    if (block(i, i).squaredNorm() != 0.0)
      throw InvalidArgument("diagonal block " + std::to_string(i) + " is nonzero");
}

void CommonLinesMatrix::set_block(int i, int j, const Vec2 &v) {
  if (i == j && v.squaredNorm() != 0.0)
    throw InvalidArgument("diagonal blocks must stay zero");
  if (!v.allFinite())
    throw InvalidArgument("non-finite block");
  a_.block<2, 1>(2 * i, j) = v;
}

ScaleMatrix::ScaleMatrix(Mat values, double sym_tol) : l_(std::move(values)) {
  if (l_.rows() != l_.cols())
    throw InvalidArgument("scale matrix must be square");
  for (int i = 0; i < n(); ++i) {
    if (l_(i, i) != 0.0)
      throw InvalidArgument("scale matrix diagonal must be zero");
    for (int j = i + 1; j < n(); ++j)
      if (std::abs(l_(i, j) - l_(j, i)) > sym_tol)
        throw InvalidArgument("scale matrix must be symmetric");
  }
}

Partition::Partition(std::vector<int> labels) : labels_(std::move(labels)) {
  int mx = -1;
  for (int l : labels_) {
    if (l < 0)
      throw InvalidArgument("negative cluster id");
    mx = std::max(mx, l);
  }
  std::vector<char> seen(mx + 1, 0);
  for (int l : labels_)
    seen[l] = 1;
  for (char s : seen)
    if (!s)
      throw InvalidArgument("cluster ids must be contiguous from 0");
  k_ = mx + 1;
}

Partition Partition::canonical(const std::vector<int> &labels) {
  std::map<int, int> remap;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto it = remap.try_emplace(l, static_cast<int>(remap.size())).first;
    out.push_back(it->second);
  }
  return Partition(std::move(out));
}

std::vector<int> Partition::sizes() const {
  std::vector<int> s(k_, 0);
  for (int l : labels_)
    ++s[l];
  return s;
}

std::vector<Triple> triples(int n) {
  std::vector<Triple> t;
  if (n >= 3)
    t.reserve(static_cast<size_t>(n) * (n - 1) * (n - 2) / 6);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        t.push_back({i, j, k});
  return t;
}

int pair_index(int a, int b, int n) {
  if (a > b)
    std::swap(a, b);
  // pairs (0,1..n-1), (1,2..n-1), ...
  return a * (2 * n - a - 1) / 2 + (b - a - 1);
}

CommonLinesMatrix pure_common_lines(const RotationSet &rotations) {
  const int n = static_cast<int>(rotations.size());
  if (n < 3)
    throw InvalidArgument("pure_common_lines needs n >= 3");
  for (const auto &r : rotations)
    if (!Rotation::is_valid(r.matrix()))
      throw InvalidArgument("invalid rotation");
  CommonLinesMatrix a(n);
  for (int i = 0; i < n; ++i) {
    const Mat3 &ri = rotations[i].matrix();
    for (int j = 0; j < n; ++j) {
      if (i == j)
        continue;
      Vec3 r3j = rotations[j].matrix().row(2).transpose();
      a.set_block(i, j, Vec2(-ri.row(1).dot(r3j), ri.row(0).dot(r3j)));
    }
  }
  return a;
}

CommonLinesMatrix normalize_blocks(const CommonLinesMatrix &a, double threshold) {
  CommonLinesMatrix out(a.n());
  for (int j = 0; j < a.n(); ++j)
    for (int i = 0; i < a.n(); ++i) {
      if (i == j)
        continue;
      Vec2 b = a.block(i, j);
      double nb = b.norm();
      if (!(nb > threshold))
        throw DegenerateBlock(i, j);
      out.set_block(i, j, b / nb);
    }
  return out;
}

Mat norm_residual_matrix(const CommonLinesMatrix &a) {
  const int n = a.n();
  Mat m = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j)
        m(i, j) = a.block(i, j).squaredNorm();
  return m;
}

DetVectors det_triple_vectors(const CommonLinesMatrix &a) {
  auto ts = triples(a.n());
  DetVectors d{Vec(ts.size()), Vec(ts.size()), Vec(ts.size())};
  for (size_t t = 0; t < ts.size(); ++t) {
    auto [i, j, k] = ts[t];
    d.v1(t) = det2(a.block(i, j), a.block(i, k));
    d.v2(t) = -det2(a.block(j, i), a.block(j, k));
    d.v3(t) = det2(a.block(k, i), a.block(k, j));
  }
  return d;
}

Vec singular_values(const Mat &a) {
  if (a.size() == 0)
    return Vec();
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues();
}

double rank_gap(const Mat &a) {
  Vec s = singular_values(a);
  if (s.size() < 4 || s(2) <= 0.0)
    return s.size() < 4 ? 0.0 : 1.0;
  return std::min(1.0, s(3) / s(2));
}

ConstraintReport constraint_report(const CommonLinesMatrix &a) {
  ConstraintReport r;
  Vec s = singular_values(a.flat());
  for (int k = 0; k < 4 && k < s.size(); ++k)
    r.sigma[k] = s(k);
  if (r.sigma[2] > 0.0)
    r.rank_gap = std::min(1.0, r.sigma[3] / r.sigma[2]);
  else
    r.rank_gap = s.size() >= 4 ? 1.0 : 0.0;
  Mat m = norm_residual_matrix(a);
  r.norm_residual = (m - m.transpose()).squaredNorm();
  DetVectors d = det_triple_vectors(a);
  r.det_residual = (d.v1 - d.v2).squaredNorm() + (d.v2 - d.v3).squaredNorm();
  r.quadratic_error = r.norm_residual + r.det_residual;
  return r;
}

double quadratic_error(const CommonLinesMatrix &a) {
  Mat m = norm_residual_matrix(a);
  DetVectors d = det_triple_vectors(a);
  return (m - m.transpose()).squaredNorm() + (d.v1 - d.v2).squaredNorm() +
         (d.v2 - d.v3).squaredNorm();
}

CommonLinesMatrix submatrix(const CommonLinesMatrix &a, const std::vector<int> &idx) {
  const int m = static_cast<int>(idx.size());
  for (int x : idx)
    if (x < 0 || x >= a.n())
      throw InvalidArgument("submatrix index out of range");
  CommonLinesMatrix out(m);
  for (int q = 0; q < m; ++q)
    for (int p = 0; p < m; ++p)
      if (p != q) {
        if (idx[p] == idx[q])
          throw InvalidArgument("submatrix indices must be distinct");
        out.set_block(p, q, a.block(idx[p], idx[q]));
      }
  return out;
}

CommonLinesMatrix apply_scales(const CommonLinesMatrix &a, const Mat &lambda) {
  if (lambda.rows() != a.n() || lambda.cols() != a.n())
    throw InvalidArgument("scale matrix size mismatch");
  CommonLinesMatrix out(a.n());
  for (int j = 0; j < a.n(); ++j)
    for (int i = 0; i < a.n(); ++i)
      if (i != j)
        out.set_block(i, j, lambda(i, j) * a.block(i, j));
  return out;
}

} // namespace clines
