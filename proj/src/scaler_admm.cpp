#include <commonlines/scaler_admm.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>

namespace clines {

std::string to_string(SolverStatus s) {
  switch (s) {
  case SolverStatus::converged: return "converged";
  case SolverStatus::not_converged: return "not_converged";
  case SolverStatus::stagnated: return "stagnated";
  case SolverStatus::diverged: return "diverged";
  }
  return "unknown";
}

namespace {

// Expand an n×n matrix to 2n×n by repeating each row (X ⊗ 1_{2×1}).
Mat kron_rows(const Mat &x) {
  Mat out(2 * x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.row(2 * i) = x.row(i);
    out.row(2 * i + 1) = x.row(i);
  }
  return out;
}

void zero_diagonal_blocks(Mat &a) {
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    a.block<2, 1>(2 * i, i).setZero();
}

double rel_change(const Mat &now, const Mat &before) {
  double d = (now - before).norm();
  double s = now.norm();
  return s > 0.0 ? d / s : d;
}

bool out_of_range(double v, const AdmmConfig &cfg) {
  return !std::isfinite(v) || v > cfg.blowup || v < cfg.vanish;
}

} // namespace

Mat irls_weights(const Mat &a_hat, const Mat &lambda, const Mat &a, double delta) {
  const Eigen::Index n = a.cols();
  Mat w = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j)
        continue;
      double r = (a_hat.block<2, 1>(2 * i, j) - lambda(i, j) * a.block<2, 1>(2 * i, j)).norm();
      w(i, j) = 1.0 / std::max(delta, r);
    }
  return w;
}

Mat update_A(const AdmmState &s, const Mat &a_hat) {
  Mat kw = kron_rows(s.W);
  Mat kl = kron_rows(s.Lambda);
  const double rho = s.tau / 4.0;
  Mat num = kw.cwiseProduct(kl).cwiseProduct(a_hat) + rho * (s.B + s.Gamma);
  Mat den = kw.cwiseProduct(kl).cwiseProduct(kl).array() + rho;
  Mat a = num.cwiseQuotient(den);
  zero_diagonal_blocks(a);
  return a;
}

Mat update_lambda(const AdmmState &s, const Mat &a_hat) {
  const Eigen::Index n = s.A.cols();
  Mat num = Mat::Zero(n, n), den = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j)
        continue;
      auto aij = s.A.block<2, 1>(2 * i, j);
      num(i, j) = s.W(i, j) * a_hat.block<2, 1>(2 * i, j).dot(aij);
      den(i, j) = s.W(i, j) * aij.squaredNorm();
    }
  Mat l = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double d = den(i, j) + den(j, i);
      if (!(d > 1e-14))
        throw DegenerateDenominator(static_cast<int>(i), static_cast<int>(j));
      l(i, j) = l(j, i) = (num(i, j) + num(j, i)) / d;
    }
  return l;
}

Mat svp3(const Mat &m) {
  const Eigen::Index r = std::min<Eigen::Index>(3, std::min(m.rows(), m.cols()));
  if (m.cols() <= 16) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() *
           svd.matrixV().leftCols(r).transpose();
  }
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() *
         svd.matrixV().leftCols(r).transpose();
}

Mat update_gamma(const Mat &gamma, const Mat &a, const Mat &b) { return gamma + (b - a); }

double robust_objective(const Mat &a_hat, const Mat &lambda, const Mat &a) {
  double f = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      if (i != j)
        f += (a_hat.block<2, 1>(2 * i, j) - lambda(i, j) * a.block<2, 1>(2 * i, j)).norm();
  return f;
}

ScaleMatrix determinant_scales(const CommonLinesMatrix &a_hat) {
  const int n = a_hat.n();
  if (n < 3)
    throw InvalidArgument("determinant_scales needs n >= 3");
  const int np = n * (n - 1) / 2;
  // Unknowns c_ab = 1/λ_ab. For each triple the two equalities
  //   c_ik d_i + c_jk d_j = 0,   c_ij d_i − c_jk d_k = 0
  // hold exactly when Â ⊙ C is pure. Accumulate the normal matrix directly.
  Mat g = Mat::Zero(np, np);
  auto add_row = [&g](int p, double x, int q, double y) {
    g(p, p) += x * x;
    g(q, q) += y * y;
    g(p, q) += x * y;
    g(q, p) += x * y;
  };
  for (auto [i, j, k] : triples(n)) {
    double di = det2(a_hat.block(i, j), a_hat.block(i, k));
    double dj = det2(a_hat.block(j, i), a_hat.block(j, k));
    double dk = det2(a_hat.block(k, i), a_hat.block(k, j));
    add_row(pair_index(i, k, n), di, pair_index(j, k, n), dj);
    add_row(pair_index(i, j, n), di, pair_index(j, k, n), -dk);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  Vec c = es.eigenvectors().col(0);
  c /= std::sqrt(c.squaredNorm() / np);
  // The null vector's sign is arbitrary; prefer mostly positive scales.
  if (c.sum() < 0.0)
    c = -c;
  const double floor = 1e-3 * c.cwiseAbs().maxCoeff();
  Mat l = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      double v = c(pair_index(a, b, n));
      if (std::abs(v) < floor)
        v = v < 0.0 ? -floor : floor;
      l(a, b) = l(b, a) = 1.0 / v;
    }
  return ScaleMatrix(l);
}

AdmmResult irls_admm(const CommonLinesMatrix &a_hat_in, const AdmmConfig &cfg) {
  if (!(cfg.delta > 0.0) || !(cfg.tol_rel > 0.0) || cfg.irls_max < 1 || cfg.admm_max < 1 ||
      cfg.alt_max < 1)
    throw InvalidArgument("invalid ADMM configuration");
  const int n = a_hat_in.n();
  if (n < 3)
    throw InvalidArgument("irls_admm needs n >= 3");
  const Mat &a_hat = a_hat_in.flat();

  AdmmState s;
  s.W = Mat::Ones(n, n) - Mat::Identity(n, n);
  if (cfg.init == AdmmInit::determinant) {
    s.Lambda = determinant_scales(a_hat_in).values();
    s.A = a_hat.cwiseQuotient(kron_rows(s.Lambda));
    zero_diagonal_blocks(s.A);
  } else {
    s.Lambda = Mat::Ones(n, n) - Mat::Identity(n, n);
    s.A = a_hat;
  }

  AdmmDiagnostics d;
  auto finish = [&](SolverStatus st, std::string msg) {
    d.status = st;
    d.message = std::move(msg);
    d.rank_gap = st == SolverStatus::diverged || !s.A.allFinite() ? 1.0 : rank_gap(s.A);
    Mat lam = s.Lambda;
    Mat a = s.A;
    if (!a.allFinite() || !lam.allFinite()) {
      a.setZero();
      lam.setZero();
    }
    return AdmmResult{CommonLinesMatrix(a), ScaleMatrix(lam), d};
  };

  bool irls_done = false;
  try {
    for (int t = 0; t < cfg.irls_max; ++t) {
      s.B = s.A;
      s.Gamma = Mat::Zero(2 * n, n);
      s.tau = s.W.sum();
      const Mat a_outer = s.A, l_outer = s.Lambda;
      bool admm_done = false;
      for (int k = 0; k < cfg.admm_max; ++k) {
        const Mat a_k = s.A;
        for (int kp = 0; kp < cfg.alt_max; ++kp) {
          const Mat a_old = s.A, l_old = s.Lambda;
          s.A = update_A(s, a_hat);
          s.Lambda = update_lambda(s, a_hat);
          if (rel_change(s.A, a_old) <= cfg.tol_rel && rel_change(s.Lambda, l_old) <= cfg.tol_rel)
            break;
        }
        s.B = svp3(s.A - s.Gamma);
        s.Gamma = update_gamma(s.Gamma, s.A, s.B);
        ++d.admm_iterations;
        const double an = s.A.norm(), ln = s.Lambda.norm();
        if (out_of_range(an, cfg) || out_of_range(ln, cfg) || !s.B.allFinite())
          return finish(SolverStatus::diverged, "matrix norm left [" + std::to_string(cfg.vanish) +
                                                    ", " + std::to_string(cfg.blowup) + "]");
        if ((s.B - s.A).norm() <= cfg.primal_tol * an && rel_change(s.A, a_k) <= cfg.primal_tol) {
          admm_done = true;
          break;
        }
      }
      if (!admm_done)
        d.cap_hit = true;
      s.W = irls_weights(a_hat, s.Lambda, s.A, cfg.delta);
      d.objective.push_back(robust_objective(a_hat, s.Lambda, s.A));
      d.irls_iterations = t + 1;
      if (rel_change(s.A, a_outer) <= cfg.tol_rel && rel_change(s.Lambda, l_outer) <= cfg.tol_rel) {
        irls_done = true;
        break;
      }
    }
  } catch (const DegenerateDenominator &e) {
    return finish(SolverStatus::diverged, e.what());
  }
  if (!irls_done)
    d.cap_hit = true;
  double gap = rank_gap(s.A);
  if (d.cap_hit && gap > 1e-3)
    return finish(SolverStatus::not_converged, "iteration cap hit with rank gap " +
                                                   std::to_string(gap));
  return finish(SolverStatus::converged, d.cap_hit ? "iteration cap hit" : "");
}

} // namespace clines
