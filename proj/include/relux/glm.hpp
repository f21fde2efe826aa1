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

#ifndef RELUX_GLM_HPP_
#define RELUX_GLM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relux/common.hpp"

namespace relux::glm {

enum class Family { gaussian, binomial };
enum class Penalty { none, l1, l2 };

std::string family_name(Family f);
std::string penalty_name(Penalty p);
Family family_from_name(const std::string& name);
Penalty penalty_from_name(const std::string& name);

// Penalty strength semantics: gaussian l2 adds (s/2)|w|^2 to half the RSS;
// gaussian l1 adds s|w|_1 to RSS/(2n); binomial l2 adds |w|^2/(2C) to the
// summed log loss with strength C (larger C = weaker penalty); binomial l1
// adds s|w|_1. The intercept is never penalized.
struct GlmFit {
  Vector beta;  // intercept first, then one coefficient per feature
  Family family = Family::gaussian;
  Penalty penalty = Penalty::none;
  double strength = 0.0;
  int n_obs = 0;
  int dof_resid = 0;                  // gaussian unpenalized: n - d - 1
  double sigma2 = 0.0;                // gaussian dispersion estimate
  std::optional<Matrix> covariance;   // unpenalized fits only
  bool separation_warning = false;    // binomial: fitted probabilities at 0/1
  int iterations = 0;

  double predict_eta(const Eigen::Ref<const Vector>& x) const;
  Vector predict_eta_batch(const Matrix& X) const;
  // eta through the family's mean link (identity or sigmoid).
  double predict_mean(const Eigen::Ref<const Vector>& x) const;
};

// X is n x d raw features; the intercept column is appended internally.
GlmFit fit(Family family, const Matrix& X, const Vector& y,
           Penalty penalty = Penalty::none, double strength = 0.0);

struct InferenceRow {
  std::string name;
  double coef = 0.0;
  double std_err = 0.0;
  double statistic = 0.0;
  double p_value = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
};

struct InferenceReport {
  std::vector<InferenceRow> rows;
  double level = 0.95;
  bool student_t = false;  // gaussian uses t, binomial uses z
  int dof = 0;
};

// Wald tests from the asymptotic covariance. Requires an unpenalized fit
// with an available covariance.
InferenceReport wald_inference(const GlmFit& fit,
                               const std::vector<std::string>& feature_names,
                               double level = 0.95);

// Header pins the statistic column to t/z and the interval columns to the
// level, e.g. "coef,std_err,z,p-value,[0.025,0.975]".
std::string inference_csv(const InferenceReport& report);

struct BootstrapRow {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double zero_probability = 0.0;
};

struct BootstrapReport {
  std::vector<BootstrapRow> rows;
  int replicates_requested = 0;
  int replicates_completed = 0;
};

// Case-resampling bootstrap; each replicate draws its own seed stream so
// results do not depend on evaluation order. Failed replicate fits are
// skipped and counted.
BootstrapReport bootstrap_inference(Family family, const Matrix& X,
                                    const Vector& y, Penalty penalty,
                                    double strength, int replicates,
                                    std::uint64_t seed,
                                    const std::vector<std::string>& feature_names);

std::string bootstrap_csv(const BootstrapReport& report);

}  // namespace relux::glm

#endif  // RELUX_GLM_HPP_
