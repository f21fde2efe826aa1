// Copyright 2026 the relu-unwrap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relux/glm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "relux/io.hpp"
#include "relux/rng.hpp"
#include "relux/stats.hpp"

namespace relux::glm {

namespace {

constexpr double kIrlsGradTol = 1e-8;
constexpr int kIrlsMaxIter = 100;
constexpr double kCdTol = 1e-7;
constexpr int kCdMaxSweeps = 10000;

Matrix with_intercept(const Matrix& X) {
  Matrix Z(X.rows(), X.cols() + 1);
  Z.col(0).setOnes();
  Z.rightCols(X.cols()) = X;
  return Z;
}

double sigmoid(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

void check_inputs(const Matrix& X, const Vector& y, Family family) {
  if (X.rows() != y.size())
    throw ShapeError("glm", "feature rows do not match response length");
  if (X.rows() == 0) throw DataError("glm", "empty design matrix");
  if (!X.allFinite() || !y.allFinite())
    throw NonFiniteError("glm", "non-finite value in design or response");
  if (family == Family::binomial) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) != 0.0 && y(i) != 1.0)
        throw DataError("glm", "binomial response must be 0 or 1");
    }
  }
}

GlmFit fit_gaussian_ols(const Matrix& X, const Vector& y) {
  const Matrix Z = with_intercept(X);
  const auto p = Z.cols();
  Eigen::ColPivHouseholderQR<Matrix> qr(Z);
  qr.setThreshold(1e-10);
  if (qr.rank() < p)
    throw SingularError("glm", "design matrix is rank deficient");

  GlmFit fit;
  fit.family = Family::gaussian;
  fit.penalty = Penalty::none;
  fit.beta = qr.solve(y);
  fit.n_obs = static_cast<int>(Z.rows());
  fit.dof_resid = static_cast<int>(Z.rows() - p);
  const Vector resid = y - Z * fit.beta;
  if (fit.dof_resid > 0) {
    fit.sigma2 = resid.squaredNorm() / fit.dof_resid;
    const Matrix xtx = Z.transpose() * Z;
    fit.covariance = fit.sigma2 * xtx.ldlt().solve(Matrix::Identity(p, p));
  } else {
    fit.sigma2 = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

GlmFit fit_gaussian_ridge(const Matrix& X, const Vector& y, double strength) {
  const Matrix Z = with_intercept(X);
  const auto p = Z.cols();
  Matrix lhs = Z.transpose() * Z;
  for (Eigen::Index j = 1; j < p; ++j) lhs(j, j) += strength;
  Eigen::LDLT<Matrix> ldlt(lhs);
  if (ldlt.info() != Eigen::Success)
    throw SingularError("glm", "ridge system is not solvable");
  GlmFit fit;
  fit.family = Family::gaussian;
  fit.penalty = Penalty::l2;
  fit.strength = strength;
  fit.beta = ldlt.solve(Z.transpose() * y);
  if (!fit.beta.allFinite())
    throw SingularError("glm", "ridge solution is not finite");
  fit.n_obs = static_cast<int>(Z.rows());
  fit.dof_resid = static_cast<int>(Z.rows() - p);
  return fit;
}

// Coordinate descent on centered, unit-variance columns; coefficients are
// mapped back to the raw scale afterwards. Constant columns get a zero
// coefficient.
GlmFit fit_gaussian_lasso(const Matrix& X, const Vector& y, double strength) {
  const auto n = X.rows();
  const auto d = X.cols();
  const double n_d = static_cast<double>(n);

  Vector col_mean(d), col_scale(d);
  Matrix Xs(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    col_mean(j) = X.col(j).mean();
    const Vector centered = X.col(j).array() - col_mean(j);
    const double scale = std::sqrt(centered.squaredNorm() / n_d);
    col_scale(j) = scale;
    Xs.col(j) = scale > 0.0 ? Vector(centered / scale) : Vector::Zero(n);
  }
  const double y_mean = y.mean();
  const Vector yc = y.array() - y_mean;

  Vector w = Vector::Zero(d);
  Vector resid = yc;
  int sweeps = 0;
  for (; sweeps < kCdMaxSweeps; ++sweeps) {
    double max_delta = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (col_scale(j) == 0.0) continue;
      const double rho = Xs.col(j).dot(resid) / n_d + w(j);
      const double updated =
          std::copysign(std::max(std::abs(rho) - strength, 0.0), rho);
      const double delta = updated - w(j);
      if (delta != 0.0) {
        resid -= delta * Xs.col(j);
        w(j) = updated;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (max_delta < kCdTol) break;
  }

  GlmFit fit;
  fit.family = Family::gaussian;
  fit.penalty = Penalty::l1;
  fit.strength = strength;
  fit.n_obs = static_cast<int>(n);
  fit.dof_resid = static_cast<int>(n - d - 1);
  fit.iterations = sweeps;
  fit.beta = Vector::Zero(d + 1);
  double intercept = y_mean;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double raw = col_scale(j) > 0.0 ? w(j) / col_scale(j) : 0.0;
    fit.beta(j + 1) = raw;
    intercept -= raw * col_mean(j);
  }
  fit.beta(0) = intercept;
  return fit;
}

// IRLS for the binomial family; `l2_inverse_strength` of 0 means no
// penalty, otherwise the penalty is |w|^2 / (2C).
GlmFit fit_binomial_irls(const Matrix& X, const Vector& y, Penalty penalty,
                         double strength) {
  const Matrix Z = with_intercept(X);
  const auto n = Z.rows();
  const auto p = Z.cols();
  const double ridge = penalty == Penalty::l2 ? 1.0 / strength : 0.0;
  if (penalty == Penalty::l2 && !(strength > 0.0))
    throw DataError("glm", "binomial l2 strength must be > 0");

  Vector beta = Vector::Zero(p);
  bool converged = false;
  int iter = 0;
  for (; iter < kIrlsMaxIter; ++iter) {
    const Vector eta = Z * beta;
    Vector prob(n), weight(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = sigmoid(eta(i));
      weight(i) = prob(i) * (1.0 - prob(i));
    }
    Vector grad = Z.transpose() * (y - prob);
    Matrix hess = Z.transpose() * weight.asDiagonal() * Z;
    if (ridge > 0.0) {
      for (Eigen::Index j = 1; j < p; ++j) {
        grad(j) -= ridge * beta(j);
        hess(j, j) += ridge;
      }
    }
    if (grad.lpNorm<Eigen::Infinity>() <= kIrlsGradTol) {
      converged = true;
      break;
    }
    // Levenberg-style jitter keeps the step defined when weights vanish
    // under (quasi-)separation.
    Eigen::LDLT<Matrix> ldlt(hess);
    Vector step;
    if (ldlt.info() == Eigen::Success) step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      hess.diagonal().array() += 1e-10;
      step = hess.ldlt().solve(grad);
      if (!step.allFinite())
        throw SingularError("glm", "IRLS system is not solvable");
    }
    beta += step;
  }

  GlmFit fit;
  fit.family = Family::binomial;
  fit.penalty = penalty;
  fit.strength = strength;
  fit.beta = beta;
  fit.n_obs = static_cast<int>(n);
  fit.dof_resid = static_cast<int>(n - p);
  fit.iterations = iter;

  const Vector eta = Z * beta;
  Vector weight(n);
  bool extreme = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double prob = sigmoid(eta(i));
    weight(i) = prob * (1.0 - prob);
    if (prob < 1e-10 || prob > 1.0 - 1e-10) extreme = true;
  }
  fit.separation_warning = extreme || !converged;

  if (penalty == Penalty::none) {
    Matrix hess = Z.transpose() * weight.asDiagonal() * Z;
    Eigen::LDLT<Matrix> ldlt(hess);
    Matrix cov = ldlt.solve(Matrix::Identity(p, p));
    if (ldlt.info() == Eigen::Success && cov.allFinite()) fit.covariance = cov;
  }
  return fit;
}

// Penalized IRLS: each outer step solves a weighted lasso via coordinate
// descent on the working response.
GlmFit fit_binomial_lasso(const Matrix& X, const Vector& y, double strength) {
  const auto n = X.rows();
  const auto d = X.cols();
  const double n_d = static_cast<double>(n);

  Vector col_mean(d), col_scale(d);
  Matrix Xs(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    col_mean(j) = X.col(j).mean();
    const Vector centered = X.col(j).array() - col_mean(j);
    const double scale = std::sqrt(centered.squaredNorm() / n_d);
    col_scale(j) = scale;
    Xs.col(j) = scale > 0.0 ? Vector(centered / scale) : Vector::Zero(n);
  }

  double b0 = 0.0;
  Vector w = Vector::Zero(d);
  int outer = 0;
  for (; outer < kIrlsMaxIter; ++outer) {
    const Vector eta = (Xs * w).array() + b0;
    Vector prob(n), weight(n), work(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = sigmoid(eta(i));
      weight(i) = std::max(prob(i) * (1.0 - prob(i)), 1e-5);
      work(i) = eta(i) + (y(i) - prob(i)) / weight(i);
    }
    const double weight_sum = weight.sum();

    double max_outer_delta = 0.0;
    Vector resid = work - eta;
    for (int sweep = 0; sweep < 1000; ++sweep) {
      double max_delta = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) {
        if (col_scale(j) == 0.0) continue;
        const Vector wx = weight.cwiseProduct(Xs.col(j));
        const double norm = wx.dot(Xs.col(j)) / n_d;
        const double rho = wx.dot(resid) / n_d + norm * w(j);
        const double updated =
            std::copysign(std::max(std::abs(rho) - strength, 0.0), rho) / norm;
        const double delta = updated - w(j);
        if (delta != 0.0) {
          resid -= delta * Xs.col(j);
          w(j) = updated;
          max_delta = std::max(max_delta, std::abs(delta));
          max_outer_delta = std::max(max_outer_delta, std::abs(delta));
        }
      }
      const double b0_delta = weight.dot(resid) / weight_sum;
      if (b0_delta != 0.0) {
        b0 += b0_delta;
        resid.array() -= b0_delta;
        max_delta = std::max(max_delta, std::abs(b0_delta));
        max_outer_delta = std::max(max_outer_delta, std::abs(b0_delta));
      }
      if (max_delta < kCdTol) break;
    }
    if (max_outer_delta < kCdTol) break;
  }

  GlmFit fit;
  fit.family = Family::binomial;
  fit.penalty = Penalty::l1;
  fit.strength = strength;
  fit.n_obs = static_cast<int>(n);
  fit.dof_resid = static_cast<int>(n - d - 1);
  fit.iterations = outer;
  fit.beta = Vector::Zero(d + 1);
  double intercept = b0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double raw = col_scale(j) > 0.0 ? w(j) / col_scale(j) : 0.0;
    fit.beta(j + 1) = raw;
    intercept -= raw * col_mean(j);
  }
  fit.beta(0) = intercept;

  const Matrix Z = with_intercept(X);
  const Vector eta = Z * fit.beta;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double prob = sigmoid(eta(i));
    if (prob < 1e-10 || prob > 1.0 - 1e-10) fit.separation_warning = true;
  }
  return fit;
}

}  // namespace

std::string family_name(Family f) {
  return f == Family::gaussian ? "gaussian" : "binomial";
}

std::string penalty_name(Penalty p) {
  switch (p) {
    case Penalty::none: return "none";
    case Penalty::l1: return "l1";
    default: return "l2";
  }
}

Family family_from_name(const std::string& name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "binomial") return Family::binomial;
  throw SchemaError("glm", "unknown family: " + name);
}

Penalty penalty_from_name(const std::string& name) {
  if (name == "none") return Penalty::none;
  if (name == "l1") return Penalty::l1;
  if (name == "l2") return Penalty::l2;
  throw SchemaError("glm", "unknown penalty: " + name);
}

double GlmFit::predict_eta(const Eigen::Ref<const Vector>& x) const {
  if (x.size() + 1 != beta.size())
    throw ShapeError("glm", "input length does not match coefficients");
  return beta(0) + beta.tail(beta.size() - 1).dot(x);
}

Vector GlmFit::predict_eta_batch(const Matrix& X) const {
  if (X.cols() + 1 != beta.size())
    throw ShapeError("glm", "input width does not match coefficients");
  return (X * beta.tail(beta.size() - 1)).array() + beta(0);
}

double GlmFit::predict_mean(const Eigen::Ref<const Vector>& x) const {
  const double eta = predict_eta(x);
  return family == Family::gaussian ? eta : sigmoid(eta);
}

GlmFit fit(Family family, const Matrix& X, const Vector& y, Penalty penalty,
           double strength) {
  check_inputs(X, y, family);
  if (penalty != Penalty::none && !(strength > 0.0))
    throw DataError("glm", "penalty strength must be > 0");
  if (family == Family::gaussian) {
    switch (penalty) {
      case Penalty::none: return fit_gaussian_ols(X, y);
      case Penalty::l2: return fit_gaussian_ridge(X, y, strength);
      case Penalty::l1: return fit_gaussian_lasso(X, y, strength);
    }
  }
  switch (penalty) {
    case Penalty::none:
    case Penalty::l2:
      return fit_binomial_irls(X, y, penalty, strength);
    case Penalty::l1:
      return fit_binomial_lasso(X, y, strength);
  }
  throw Error("glm", "unreachable");
}

InferenceReport wald_inference(const GlmFit& fit,
                               const std::vector<std::string>& feature_names,
                               double level) {
  if (fit.penalty != Penalty::none)
    throw Error("glm", "Wald inference requires an unpenalized fit");
  if (!fit.covariance)
    throw Error("glm", "covariance unavailable (insufficient residual dof)");
  if (!(level > 0.0 && level < 1.0))
    throw DataError("glm", "confidence level must be in (0, 1)");
  if (static_cast<Eigen::Index>(feature_names.size()) + 1 != fit.beta.size())
    throw ShapeError("glm", "feature name count does not match coefficients");

  InferenceReport report;
  report.level = level;
  report.student_t = fit.family == Family::gaussian;
  report.dof = fit.dof_resid;
  const double alpha = 1.0 - level;
  const double crit = report.student_t
                          ? stats::student_t_quantile(1.0 - alpha / 2.0, fit.dof_resid)
                          : stats::normal_quantile(1.0 - alpha / 2.0);

  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    InferenceRow row;
    row.name = j == 0 ? "intercept" : feature_names[static_cast<std::size_t>(j - 1)];
    row.coef = fit.beta(j);
    row.std_err = std::sqrt((*fit.covariance)(j, j));
    row.statistic = row.coef / row.std_err;
    const double tail =
        report.student_t
            ? stats::student_t_cdf(-std::abs(row.statistic), fit.dof_resid)
            : stats::normal_cdf(-std::abs(row.statistic));
    row.p_value = 2.0 * tail;
    row.ci_lower = row.coef - crit * row.std_err;
    row.ci_upper = row.coef + crit * row.std_err;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string inference_csv(const InferenceReport& report) {
  std::ostringstream out;
  const double alpha = 1.0 - report.level;
  out << "coef,std_err," << (report.student_t ? 't' : 'z') << ",p-value,["
      << format_sig(alpha / 2.0, 6) << ',' << format_sig(1.0 - alpha / 2.0, 6)
      << "]\n";
  for (const InferenceRow& row : report.rows) {
    out << row.name << ',' << format_double(row.coef) << ','
        << format_double(row.std_err) << ',' << format_double(row.statistic)
        << ',' << format_double(row.p_value) << ','
        << format_double(row.ci_lower) << ',' << format_double(row.ci_upper)
        << '\n';
  }
  return out.str();
}

BootstrapReport bootstrap_inference(Family family, const Matrix& X,
                                    const Vector& y, Penalty penalty,
                                    double strength, int replicates,
                                    std::uint64_t seed,
                                    const std::vector<std::string>& feature_names) {
  check_inputs(X, y, family);
  if (replicates < 1) throw DataError("glm", "bootstrap needs >= 1 replicate");
  if (static_cast<Eigen::Index>(feature_names.size()) != X.cols())
    throw ShapeError("glm", "feature name count does not match columns");

  const auto n = X.rows();
  const auto p = X.cols() + 1;
  std::vector<Vector> draws;
  draws.reserve(static_cast<std::size_t>(replicates));
  for (int r = 0; r < replicates; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    Matrix Xb(n, X.cols());
    Vector yb(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto pick = static_cast<Eigen::Index>(rng.uniform_int(0, n - 1));
      Xb.row(i) = X.row(pick);
      yb(i) = y(pick);
    }
    try {
      draws.push_back(fit(family, Xb, yb, penalty, strength).beta);
    } catch (const Error&) {
      // Degenerate resample (e.g. single-class or collinear); skip it.
    }
  }
  if (draws.empty())
    throw DataError("glm", "all bootstrap replicates failed");

  BootstrapReport report;
  report.replicates_requested = replicates;
  report.replicates_completed = static_cast<int>(draws.size());
  for (Eigen::Index j = 0; j < p; ++j) {
    std::vector<double> values;
    values.reserve(draws.size());
    int zeros = 0;
    for (const Vector& b : draws) {
      values.push_back(b(j));
      if (b(j) == 0.0) ++zeros;
    }
    BootstrapRow row;
    row.name = j == 0 ? "intercept" : feature_names[static_cast<std::size_t>(j - 1)];
    row.mean = stats::mean(values);
    row.sd = stats::sample_std(values);
    row.zero_probability = static_cast<double>(zeros) / static_cast<double>(draws.size());
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string bootstrap_csv(const BootstrapReport& report) {
  std::ostringstream out;
  out << "name,mean,sd,zero_probability\n";
  for (const BootstrapRow& row : report.rows) {
    out << row.name << ',' << format_double(row.mean) << ','
        << format_double(row.sd) << ',' << format_double(row.zero_probability)
        << '\n';
  }
  return out.str();
}

}  // namespace relux::glm
