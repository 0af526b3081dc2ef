#include <commonlines/scaler_sinkhorn.hpp>

#include <cmath>
#include <limits>

namespace clines {

namespace {

double signed_root(double v) { return std::copysign(std::sqrt(std::abs(v)), v); }

// Adds the Gram matrix of (x·u_p − y·u_q)² to g.
void add_pair(Mat &g, int p, double x, int q, double y) {
  g(p, p) += x * x;
  g(q, q) += y * y;
  g(p, q) -= x * y;
  g(q, p) -= x * y;
}

double block_norm_ratio(const Mat &a) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      if (i == j)
        continue;
      double b = a.block<2, 1>(2 * i, j).norm();
      hi = std::max(hi, b);
      lo = std::min(lo, b);
    }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

} // namespace

NormMatrices assemble_norm_matrices(const Mat &m) {
  const Eigen::Index n = m.rows();
  NormMatrices r{Mat(n, n), Mat(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        r.N_L(i, i) = m.row(i).squaredNorm() - m(i, i) * m(i, i);
        r.N_R(i, i) = m.col(i).squaredNorm() - m(i, i) * m(i, i);
      } else {
        r.N_L(i, j) = r.N_R(i, j) = -m(i, j) * m(j, i);
      }
    }
  return r;
}

DetMatrices assemble_det_matrices(const CommonLinesMatrix &a) {
  const int n = a.n();
  if (n < 3)
    throw InvalidArgument("assemble_det_matrices needs n >= 3");
  DetMatrices d{Mat::Zero(n, n), Mat::Zero(n, n), Mat::Zero(n, n), Mat::Zero(n, n)};
  DetVectors v = det_triple_vectors(a);
  auto ts = triples(n);
  for (size_t t = 0; t < ts.size(); ++t) {
    auto [i, j, k] = ts[t];
    // Row scales enter v1, v2, v3 as μ_i², μ_j², μ_k²: compare signed roots.
    double x1 = signed_root(v.v1(t)), x2 = signed_root(v.v2(t)), x3 = signed_root(v.v3(t));
    add_pair(d.D_L1, i, x1, j, x2);
    add_pair(d.D_L2, j, x2, k, x3);
    // Column scales enter as τ_jτ_k, τ_iτ_k, τ_iτ_j.
    add_pair(d.D_R1, j, v.v1(t), i, v.v2(t));
    add_pair(d.D_R2, k, v.v2(t), j, v.v3(t));
  }
  return d;
}

Vec min_unit_vector(const Mat &k) {
  if (!k.allFinite())
    throw InvalidArgument("min_unit_vector: non-finite input");
  Eigen::JacobiSVD<Mat> svd(k, Eigen::ComputeFullV);
  // Singular values are sorted descending; pick the last column.
  Vec u = svd.matrixV().col(k.cols() - 1);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < u.size(); ++i)
    if (std::abs(u(i)) > std::abs(u(best)) + 1e-14)
      best = i;
  if (u(best) < 0.0)
    u = -u;
  return u / u.norm();
}

SinkhornResult sinkhorn(const CommonLinesMatrix &a_in, const SinkhornConfig &cfg) {
  const int n = a_in.n();
  if (n < 3)
    throw InvalidArgument("sinkhorn needs n >= 3");
  if (cfg.max_iter < 1 || !(cfg.tol > 0.0) || !(cfg.blowup > 0.0))
    throw InvalidArgument("invalid Sinkhorn configuration");
  const auto &w = cfg.weights;
  Mat a = a_in.flat();
  const double fro = a.norm();
  if (!(fro > 0.0))
    throw ZeroMatrix("sinkhorn on a zero matrix");

  SinkhornResult res;
  auto finish = [&](SolverStatus st, std::string msg) {
    res.status = st;
    res.message = std::move(msg);
    if (!a.allFinite())
      a = a_in.flat();
    res.A = CommonLinesMatrix(a);
    return res;
  };
  auto apply = [&](const Vec &s, bool rows) -> bool {
    if (s.cwiseAbs().minCoeff() < cfg.min_scale)
      return false;
    if (rows)
      for (int i = 0; i < n; ++i)
        a.middleRows(2 * i, 2) *= s(i);
    else
      a = a * s.asDiagonal();
    double f = a.norm();
    if (!(f > 0.0) || !std::isfinite(f))
      return false;
    a *= fro / f;
    return block_norm_ratio(a) <= cfg.blowup;
  };

  double e = quadratic_error(CommonLinesMatrix(a));
  int flat = 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    res.error.push_back(e);
    if (e <= cfg.tol)
      return finish(SolverStatus::converged, "");
    res.iterations = it + 1;

    CommonLinesMatrix cur(a);
    Mat m = norm_residual_matrix(cur);
    NormMatrices nm = assemble_norm_matrices(m);
    DetMatrices dm = assemble_det_matrices(cur);
    Vec mu = min_unit_vector(w.row_norm * nm.N_L + w.row_det * (dm.D_L1 + dm.D_L2));
    if (!apply(mu, true))
      return finish(SolverStatus::diverged, "row scale vanished or blew up");

    cur = CommonLinesMatrix(a);
    m = norm_residual_matrix(cur);
    nm = assemble_norm_matrices(m);
    dm = assemble_det_matrices(cur);
    Vec tau = min_unit_vector(w.col_norm * nm.N_R + w.col_det * (dm.D_R1 + dm.D_R2));
    if (!apply(tau, false))
      return finish(SolverStatus::diverged, "column scale vanished or blew up");

    double e_new = quadratic_error(CommonLinesMatrix(a));
    if (e_new > e)
      ++res.increases;
    flat = std::abs(e_new - e) <= cfg.stagnation_rel * std::max(e, e_new) ? flat + 1 : 0;
    e = e_new;
    if (flat >= cfg.stagnation_window) {
      res.error.push_back(e);
      if (e <= cfg.tol)
        return finish(SolverStatus::converged, "");
      return finish(SolverStatus::stagnated, "error stagnated");
    }
  }
  res.error.push_back(e);
  if (e <= cfg.tol)
    return finish(SolverStatus::converged, "");
  return finish(SolverStatus::not_converged, "iteration cap hit");
}

} // namespace clines
