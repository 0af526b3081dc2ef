#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clines {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Base for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DegenerateBlock : public Error {
public:
  DegenerateBlock(int i, int j);
  int i, j;
};

class DegenerateDenominator : public Error {
public:
  DegenerateDenominator(int i, int j);
  int i, j;
};

class RankDeficient : public Error {
public:
  using Error::Error;
};

class ZeroMatrix : public Error {
public:
  using Error::Error;
};

class UndefinedMetric : public Error {
public:
  using Error::Error;
};

// Non-fatal numerical warnings go through a process-wide sink (default: dropped).
using WarningSink = std::function<void(const std::string &)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string &msg);

inline constexpr double kDegenerateBlockNorm = 1e-10;
inline constexpr double kRotationTol = 1e-12;

// A proper rotation; rows r1, r2, r3.
class Rotation {
public:
  Rotation() : m_(Mat3::Identity()) {}
  // Throws InvalidArgument unless RᵀR = I and det R = 1 within tol.
  explicit Rotation(const Mat3 &m, double tol = kRotationTol);

  static bool is_valid(const Mat3 &m, double tol = kRotationTol);
  // Nearest rotation in Frobenius norm (det-corrected SVD).
  static Rotation nearest(const Mat3 &m);

  const Mat3 &matrix() const { return m_; }
  Vec3 row(int k) const { return m_.row(k).transpose(); }

private:
  Mat3 m_;
};

using RotationSet = std::vector<Rotation>;

// 2n×n matrix of 2-vector blocks; block (i,j) = rows 2i, 2i+1 of column j.
// Eigen's column-major storage keeps every block contiguous.
class CommonLinesMatrix {
public:
  CommonLinesMatrix() = default;
  explicit CommonLinesMatrix(int n);
  // Throws InvalidArgument on bad shape, non-finite entries or nonzero
  // diagonal blocks.
  explicit CommonLinesMatrix(Mat flat);

  int n() const { return static_cast<int>(a_.cols()); }
  Vec2 block(int i, int j) const { return a_.block<2, 1>(2 * i, j); }
  void set_block(int i, int j, const Vec2 &v);
  const Mat &flat() const { return a_; }

  bool operator==(const CommonLinesMatrix &o) const { return a_ == o.a_; }

private:
  Mat a_;
};

// Symmetric n×n block scales with zero diagonal.
class ScaleMatrix {
public:
  ScaleMatrix() = default;
  explicit ScaleMatrix(Mat values, double sym_tol = 0.0);

  int n() const { return static_cast<int>(l_.cols()); }
  double operator()(int i, int j) const { return l_(i, j); }
  const Mat &values() const { return l_; }

private:
  Mat l_;
};

struct ConstraintReport {
  std::array<double, 4> sigma{};  // leading singular values (zero-padded)
  double rank_gap = 0.0;          // σ4/σ3
  double norm_residual = 0.0;     // ‖M − Mᵀ‖²_F
  double det_residual = 0.0;      // ‖v1 − v2‖² + ‖v2 − v3‖²
  double quadratic_error = 0.0;
};

struct DetVectors {
  Vec v1, v2, v3;
};

// Hard cluster assignment with ids 0..k-1.
class Partition {
public:
  Partition() = default;
  // Throws InvalidArgument unless ids are contiguous from 0.
  explicit Partition(std::vector<int> labels);
  // Relabels arbitrary ids by order of first appearance.
  static Partition canonical(const std::vector<int> &labels);

  int n() const { return static_cast<int>(labels_.size()); }
  int num_clusters() const { return k_; }
  const std::vector<int> &labels() const { return labels_; }
  std::vector<int> sizes() const;

private:
  std::vector<int> labels_;
  int k_ = 0;
};

struct Triple {
  int i, j, k;
};

// Lexicographic i<j<k enumeration shared by every module.
std::vector<Triple> triples(int n);
// Position of pair (a,b), a≠b, in the lexicographic list of unordered pairs.
int pair_index(int a, int b, int n);

inline double det2(const Vec2 &a, const Vec2 &b) { return a.x() * b.y() - a.y() * b.x(); }

CommonLinesMatrix pure_common_lines(const RotationSet &rotations);
CommonLinesMatrix normalize_blocks(const CommonLinesMatrix &a,
                                   double threshold = kDegenerateBlockNorm);
Mat norm_residual_matrix(const CommonLinesMatrix &a);
DetVectors det_triple_vectors(const CommonLinesMatrix &a);
ConstraintReport constraint_report(const CommonLinesMatrix &a);
// Norm plus determinant residual, without the SVD.
double quadratic_error(const CommonLinesMatrix &a);

// Singular values of the flat 2n×n matrix, descending.
Vec singular_values(const Mat &a);
double rank_gap(const Mat &a);

// Principal block submatrix on the given image indices.
CommonLinesMatrix submatrix(const CommonLinesMatrix &a, const std::vector<int> &idx);
// Blocks multiplied by lambda_ij.
CommonLinesMatrix apply_scales(const CommonLinesMatrix &a, const Mat &lambda);

} // namespace clines
