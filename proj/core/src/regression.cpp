#include "pvfc/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvfc/csv.hpp"

namespace pvfc {

namespace {

struct Standardized {
  Eigen::MatrixXd Xs;        // standardized columns (zeroed where excluded)
  Eigen::VectorXd yc;        // centered target
  Eigen::VectorXd mean, std;  // std 0 marks an excluded constant column
  double y_mean = 0.0;
};

Standardized standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const auto n = X.rows();
  const auto p = X.cols();
  Standardized s;
  s.mean = X.colwise().mean();
  s.std.resize(p);
  s.Xs.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::VectorXd c = X.col(j).array() - s.mean(j);
    const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(n));
    s.std(j) = sd > 0.0 ? sd : 0.0;
    s.Xs.col(j) = s.std(j) > 0.0 ? (c / s.std(j)).eval() : Eigen::VectorXd::Zero(n);
  }
  s.y_mean = y.mean();
  s.yc = y.array() - s.y_mean;
  return s;
}

void check_shapes(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<std::string>& names) {
  if (X.rows() != y.size()) throw std::invalid_argument("regression: X/y row mismatch");
  if (static_cast<std::size_t>(X.cols()) != names.size())
    throw std::invalid_argument("regression: X/names column mismatch");
  if (X.rows() < 2) throw std::invalid_argument("regression: need at least 2 rows");
}

}  // namespace

void LassoConfig::validate() const {
  if (lambda < 0.0) throw std::invalid_argument("LassoConfig: lambda must be >= 0");
  if (tol <= 0.0) throw std::invalid_argument("LassoConfig: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("LassoConfig: max_iter must be >= 1");
  if (path_length < 1) throw std::invalid_argument("LassoConfig: path_length must be >= 1");
  if (path_ratio <= 0.0 || path_ratio >= 1.0)
    throw std::invalid_argument("LassoConfig: path_ratio must lie in (0, 1)");
}

Coefficients ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const std::vector<std::string>& names) {
  check_shapes(X, y, names);
  const auto n = X.rows();
  const auto p = X.cols();
  if (n < p + 1)
    throw std::runtime_error("ols_fit: " + std::to_string(n) + " rows for " + std::to_string(p) +
                             " columns; use lasso_fit for underdetermined systems");

  Coefficients out;
  out.names = names;
  out.col_mean = X.colwise().mean();
  out.col_std = Eigen::VectorXd::Ones(p);
  Eigen::MatrixXd Xc = X.rowwise() - out.col_mean.transpose();
  const double ym = y.mean();
  const Eigen::VectorXd yc = y.array() - ym;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xc);
  const auto rank = qr.rank();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (rank > 0) {
    // solve on the first `rank` pivoted columns, leave the rest at zero
    const Eigen::MatrixXd R11 =
        qr.matrixR().topLeftCorner(rank, rank).template triangularView<Eigen::Upper>();
    const Eigen::VectorXd qty = (qr.householderQ().transpose() * yc).head(rank);
    const Eigen::VectorXd b1 = R11.triangularView<Eigen::Upper>().solve(qty);
    Eigen::VectorXd permuted = Eigen::VectorXd::Zero(p);
    permuted.head(rank) = b1;
    beta = qr.colsPermutation() * permuted;
  }
  if (rank < p) {
    std::string dropped;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index k = rank; k < p; ++k)
      dropped += (dropped.empty() ? "" : ", ") + names[static_cast<std::size_t>(perm(k))];
    out.warnings.push_back("rank-deficient fit: zero weight for " + dropped);
  }
  out.weights = beta;
  out.intercept = ym - beta.dot(out.col_mean);
  return out;
}

Coefficients ols_fit(const DesignMatrix& dm) { return ols_fit(dm.X, dm.y, dm.columns); }

double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Standardized s = standardize(X, y);
  return (s.Xs.transpose() * s.yc).cwiseAbs().maxCoeff() / static_cast<double>(X.rows());
}

namespace {

/// Cyclic coordinate descent in standardized space. Uses covariance (Gram)
/// updates when n > p, residual updates otherwise.
Eigen::VectorXd descend(const Standardized& s, double lambda, const LassoConfig& cfg,
                        Eigen::VectorXd beta, bool& converged, std::vector<double>& objective) {
  const auto n = s.Xs.rows();
  const auto p = s.Xs.cols();
  const double nd = static_cast<double>(n);
  converged = false;

  const bool use_gram = n > p;
  Eigen::MatrixXd G;
  Eigen::VectorXd b, q;
  Eigen::VectorXd resid;
  double yc_sq = s.yc.squaredNorm() / nd;
  if (use_gram) {
    G = s.Xs.transpose() * s.Xs / nd;
    b = s.Xs.transpose() * s.yc / nd;
    q = G * beta;
  } else {
    resid = s.yc - s.Xs * beta;
  }

  for (int sweep = 0; sweep < cfg.max_iter; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (s.std(j) == 0.0) continue;  // excluded constant column
      double rho;
      if (use_gram)
        rho = b(j) - q(j) + G(j, j) * beta(j);
      else
        rho = s.Xs.col(j).dot(resid) / nd + beta(j);
      const double updated = soft_threshold(rho, lambda);
      const double delta = updated - beta(j);
      if (delta != 0.0) {
        beta(j) = updated;
        if (use_gram)
          q += G.col(j) * delta;
        else
          resid -= s.Xs.col(j) * delta;
        max_delta = std::max(max_delta, std::fabs(delta));
      }
    }
    double rss_term;
    if (use_gram)
      rss_term = 0.5 * (yc_sq - 2.0 * b.dot(beta) + beta.dot(q));
    else
      rss_term = 0.5 * resid.squaredNorm() / nd;
    objective.push_back(rss_term + lambda * beta.lpNorm<1>());
    if (max_delta < cfg.tol) {
      converged = true;
      break;
    }
  }
  return beta;
}

}  // namespace

Coefficients lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const std::vector<std::string>& names, const LassoConfig& cfg) {
  check_shapes(X, y, names);
  cfg.validate();
  const Standardized s = standardize(X, y);
  const auto p = X.cols();

  Coefficients out;
  out.names = names;
  out.col_mean = s.mean;
  out.col_std = s.std;
  for (Eigen::Index j = 0; j < p; ++j)
    if (s.std(j) == 0.0)
      out.warnings.push_back("zero-variance column '" + names[static_cast<std::size_t>(j)] +
                             "' excluded");

  bool converged = false;
  const Eigen::VectorXd beta_std = descend(s, cfg.lambda, cfg, Eigen::VectorXd::Zero(p), converged,
                                           out.objective_history);
  out.converged = converged;
  if (!converged)
    out.warnings.push_back("coordinate descent hit max_iter=" + std::to_string(cfg.max_iter));

  out.weights.resize(p);
  for (Eigen::Index j = 0; j < p; ++j)
    out.weights(j) = s.std(j) > 0.0 ? beta_std(j) / s.std(j) : 0.0;
  out.intercept = s.y_mean - out.weights.dot(s.mean);
  return out;
}

Coefficients lasso_fit(const DesignMatrix& dm, const LassoConfig& cfg) {
  return lasso_fit(dm.X, dm.y, dm.columns, cfg);
}

std::vector<double> lambda_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const LassoConfig& cfg) {
  cfg.validate();
  const double lmax = lambda_max(X, y);
  std::vector<double> path;
  path.reserve(static_cast<std::size_t>(cfg.path_length));
  if (cfg.path_length == 1) {
    path.push_back(lmax);
    return path;
  }
  for (int i = 0; i < cfg.path_length; ++i)
    path.push_back(lmax *
                   std::pow(cfg.path_ratio, static_cast<double>(i) / (cfg.path_length - 1)));
  return path;
}

namespace {

double validation_rmse(const Eigen::MatrixXd& Xv, const Eigen::VectorXd& yv,
                       const Eigen::VectorXd& weights, double intercept) {
  const Eigen::VectorXd pred = (Xv * weights).array() + intercept;
  return std::sqrt((pred - yv).squaredNorm() / static_cast<double>(yv.size()));
}

}  // namespace

LambdaSelection select_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const std::vector<std::string>& names, const LassoConfig& cfg) {
  check_shapes(X, y, names);
  cfg.validate();
  LambdaSelection sel;
  const auto n = X.rows();

  if (n < 100) {
    LassoConfig fallback = cfg;
    fallback.lambda = 0.01 * lambda_max(X, y);
    sel.lambda = fallback.lambda;
    sel.coefficients = lasso_fit(X, y, names, fallback);
    sel.warnings.push_back("fewer than 100 rows: fell back to lambda = 0.01*lambda_max");
    return sel;
  }

  const auto n_train = static_cast<Eigen::Index>(0.8 * static_cast<double>(n));
  const Eigen::MatrixXd Xt = X.topRows(n_train);
  const Eigen::VectorXd yt = y.head(n_train);
  const Eigen::MatrixXd Xv = X.bottomRows(n - n_train);
  const Eigen::VectorXd yv = y.tail(n - n_train);

  sel.path = lambda_path(Xt, yt, cfg);
  const Standardized s = standardize(Xt, yt);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());  // warm start along the path
  sel.validation_rmse.reserve(sel.path.size());
  for (const double lambda : sel.path) {
    bool converged = false;
    std::vector<double> obj;
    beta = descend(s, lambda, cfg, std::move(beta), converged, obj);
    Eigen::VectorXd w(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      w(j) = s.std(j) > 0.0 ? beta(j) / s.std(j) : 0.0;
    const double intercept = s.y_mean - w.dot(s.mean);
    sel.validation_rmse.push_back(validation_rmse(Xv, yv, w, intercept));
  }

  const double best = *std::min_element(sel.validation_rmse.begin(), sel.validation_rmse.end());
  const double tie_tol = 1e-12 * std::max(1.0, best);
  std::size_t chosen = 0;  // path descends, so the first tie is the largest λ
  for (std::size_t i = 0; i < sel.path.size(); ++i)
    if (sel.validation_rmse[i] <= best + tie_tol) {
      chosen = i;
      break;
    }
  sel.lambda = sel.path[chosen];

  LassoConfig final_cfg = cfg;
  final_cfg.lambda = sel.lambda;
  sel.coefficients = lasso_fit(X, y, names, final_cfg);
  return sel;
}

LambdaSelection select_lambda(const DesignMatrix& dm, const LassoConfig& cfg) {
  return select_lambda(dm.X, dm.y, dm.columns, cfg);
}

double kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Coefficients& coefs,
                     double lambda) {
  const Standardized s = standardize(X, y);
  const auto p = X.cols();
  Eigen::VectorXd beta_std(p);
  for (Eigen::Index j = 0; j < p; ++j)
    beta_std(j) = coefs.col_std(j) > 0.0 ? coefs.weights(j) * coefs.col_std(j) : 0.0;
  const Eigen::VectorXd resid = s.yc - s.Xs * beta_std;
  const Eigen::VectorXd grad = s.Xs.transpose() * resid / static_cast<double>(X.rows());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (s.std(j) == 0.0) continue;
    if (beta_std(j) == 0.0)
      worst = std::max(worst, std::fabs(grad(j)) - lambda);
    else
      worst = std::max(worst, std::fabs(grad(j) - lambda * (beta_std(j) > 0 ? 1.0 : -1.0)));
  }
  return std::max(0.0, worst);
}

void write_coefficients_csv(const std::string& path, const Coefficients& coefs) {
  csv::Writer w(path);
  w.header({"column_name", "weight"});
  w.field(std::string("__intercept__")).field(coefs.intercept);
  w.end_row();
  for (std::size_t j = 0; j < coefs.names.size(); ++j) {
    w.field(coefs.names[j]).field(coefs.weights(static_cast<Eigen::Index>(j)));
    w.end_row();
  }
}

Coefficients read_coefficients_csv(const std::string& path) {
  Coefficients out;
  std::vector<double> weights;
  bool have_intercept = false;
  csv::for_each_row(path, {"column_name", "weight"}, [&](const csv::Row& r) {
    const double v = csv::parse_double(r.fields[1], r.line, "weight");
    if (r.fields[0] == "__intercept__") {
      out.intercept = v;
      have_intercept = true;
    } else {
      out.names.push_back(r.fields[0]);
      weights.push_back(v);
    }
  });
  if (!have_intercept) throw std::runtime_error(path + ": missing __intercept__ row");
  out.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  out.col_mean = Eigen::VectorXd::Zero(out.weights.size());
  out.col_std = Eigen::VectorXd::Ones(out.weights.size());
  return out;
}

}  // namespace pvfc
