#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pvfc/features.hpp"

namespace pvfc {

/// Fitted linear model. `weights` are on the original column scales;
/// `col_mean`/`col_std` record the standardization used during fitting
/// (std 0 marks a column that was excluded as constant).
struct Coefficients {
  double intercept = 0.0;
  std::vector<std::string> names;
  Eigen::VectorXd weights;
  Eigen::VectorXd col_mean;
  Eigen::VectorXd col_std;
  bool converged = true;
  std::vector<std::string> warnings;
  std::vector<double> objective_history;  // one entry per coordinate-descent sweep

  double predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return intercept + weights.dot(x);
  }
};

/// Penalty and solver settings for the (1/(2n))·RSS + λ·Σ|β| objective.
/// The 1/(2n) scaling keeps λ comparable across sample counts.
struct LassoConfig {
  double lambda = 0.0;
  int max_iter = 10000;
  double tol = 1e-6;         // max absolute coefficient change per sweep
  int path_length = 50;
  double path_ratio = 1e-3;  // lambda_min / lambda_max

  void validate() const;
};

/// Ordinary least squares via column-pivoted Householder QR on centered
/// data. Columns pivoted away as rank-deficient get weight 0 and a warning.
/// Requires rows >= columns + 1.
Coefficients ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const std::vector<std::string>& names);
Coefficients ols_fit(const DesignMatrix& dm);

inline double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

/// Smallest penalty with an all-zero solution: max_j |X̃ᵀ ỹ| / n on
/// standardized columns and centered target.
double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Cyclic coordinate descent on standardized columns; the intercept is
/// unpenalized (handled in closed form through centering). Weights come
/// back de-standardized. Hitting max_iter clears `converged` but is not an
/// error.
Coefficients lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const std::vector<std::string>& names, const LassoConfig& cfg);
Coefficients lasso_fit(const DesignMatrix& dm, const LassoConfig& cfg);

/// Geometric sequence of path_length values from λ_max down to
/// path_ratio·λ_max.
std::vector<double> lambda_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const LassoConfig& cfg);

struct LambdaSelection {
  Coefficients coefficients;
  double lambda = 0.0;
  std::vector<double> path;
  std::vector<double> validation_rmse;
  std::vector<std::string> warnings;
};

/// Chronological 80/20 split, warm-started path fit on the train part,
/// λ chosen by validation RMSE (ties favor the larger λ), refit on all
/// rows at the chosen λ. Fewer than 100 rows falls back to 0.01·λ_max.
LambdaSelection select_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const std::vector<std::string>& names, const LassoConfig& cfg);
LambdaSelection select_lambda(const DesignMatrix& dm, const LassoConfig& cfg);

/// Max KKT violation of a lasso solution on the standardized scale:
/// inactive columns must satisfy |X̃ᵀr/n| <= λ, active ones
/// X̃ᵀr/n = λ·sign(β̃). Zero means exact optimality.
double kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Coefficients& coefs,
                     double lambda);

/// `column_name,weight` rows plus one `__intercept__` row.
void write_coefficients_csv(const std::string& path, const Coefficients& coefs);
Coefficients read_coefficients_csv(const std::string& path);

}  // namespace pvfc
