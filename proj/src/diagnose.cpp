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

#include "relux/diagnose.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "relux/io.hpp"

namespace relux {

namespace {

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

// Canonical eigenvector sign: largest-magnitude entry positive, so the
// projection is reproducible regardless of solver internals.
Vector canonical_sign(Vector v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
  return v;
}

}  // namespace

PolarProjection polar_projection(const UnwrapResult& result) {
  if (result.regions.empty()) throw DataError("diagnose", "empty unwrap result");
  const auto r = static_cast<Eigen::Index>(result.regions.size());
  const auto d = result.regions.front().llm.slope.size();

  PolarProjection projection;
  projection.points.reserve(result.regions.size());

  Matrix dir2(r, 2);
  if (d == 1) {
    for (Eigen::Index i = 0; i < r; ++i) {
      dir2(i, 0) = result.regions[static_cast<std::size_t>(i)].llm.slope(0);
      dir2(i, 1) = 0.0;
    }
  } else if (d == 2) {
    for (Eigen::Index i = 0; i < r; ++i)
      dir2.row(i) = result.regions[static_cast<std::size_t>(i)].llm.slope.transpose();
  } else {
    Matrix coef(r, d);
    for (Eigen::Index i = 0; i < r; ++i)
      coef.row(i) = result.regions[static_cast<std::size_t>(i)].llm.slope.transpose();
    const Eigen::RowVectorXd mean = coef.colwise().mean();
    coef.rowwise() -= mean;
    const Matrix cov = coef.transpose() * coef / static_cast<double>(r);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success)
      throw Error("diagnose", "eigendecomposition failed");
    if (eig.eigenvalues()(d - 1) <= 1e-30) {
      projection.degenerate = true;
      dir2.setZero();
    } else {
      const Vector pc1 = canonical_sign(eig.eigenvectors().col(d - 1));
      const Vector pc2 = canonical_sign(eig.eigenvectors().col(d - 2));
      dir2.col(0) = coef * pc1;
      dir2.col(1) = coef * pc2;
    }
  }

  for (Eigen::Index i = 0; i < r; ++i) {
    const RegionRecord& region = result.regions[static_cast<std::size_t>(i)];
    PolarPoint point;
    point.region_id = static_cast<int>(i);
    point.radius = static_cast<double>(region.count);
    point.single_flag = region.single_flag;
    point.angle = (dir2(i, 0) == 0.0 && dir2(i, 1) == 0.0)
                      ? 0.0
                      : wrap_angle(std::atan2(dir2(i, 1), dir2(i, 0)));
    projection.points.push_back(point);
  }
  return projection;
}

Census single_census(const UnwrapResult& result) {
  if (result.regions.empty()) throw DataError("diagnose", "empty unwrap result");
  Census census;
  census.total_regions = static_cast<int>(result.regions.size());
  long single_instances = 0;
  for (const RegionRecord& region : result.regions) {
    if (region.single_flag) {
      ++census.single_regions;
      single_instances += region.count;
    }
  }
  census.fraction_single = static_cast<double>(census.single_regions) /
                           static_cast<double>(census.total_regions);
  census.fraction_single_weighted =
      static_cast<double>(single_instances) /
      static_cast<double>(result.total_instances);
  return census;
}

std::string census_json(const Census& census) {
  nlohmann::json doc;
  doc["total_regions"] = census.total_regions;
  doc["single_regions"] = census.single_regions;
  doc["fraction_single"] = census.fraction_single;
  doc["fraction_single_weighted"] = census.fraction_single_weighted;
  return doc.dump(2) + "\n";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::poor: return "poor";
    case Verdict::good: return "good";
    case Verdict::extraordinary: return "extraordinary";
    default: return "undefined";
  }
}

std::vector<ExtrapolationRow> extrapolation_report(
    const UnwrapResult& result, int top_k,
    const ExtrapolationThresholds& thresholds) {
  if (result.regions.empty()) throw DataError("diagnose", "empty unwrap result");
  if (top_k < 1) throw DataError("diagnose", "top_k must be >= 1");

  const bool auc = result.task == Task::classification;
  auto is_good = [&](double perf) {
    if (auc) return perf >= thresholds.auc_good;
    if (!result.model_perf) return false;
    return perf <= thresholds.mse_factor * (*result.model_perf);
  };

  const std::size_t take =
      std::min<std::size_t>(result.regions.size(), static_cast<std::size_t>(top_k));
  std::vector<ExtrapolationRow> rows;
  rows.reserve(take);
  for (std::size_t ri = 0; ri < take; ++ri) {
    const RegionRecord& region = result.regions[ri];
    ExtrapolationRow row;
    row.region_id = static_cast<int>(ri);
    row.count = region.count;
    row.local_perf = region.local_perf;
    row.global_perf = region.global_perf;
    if (!row.local_perf || !row.global_perf) {
      row.verdict = Verdict::undefined;
    } else {
      const bool local_good = is_good(*row.local_perf);
      const bool global_good = is_good(*row.global_perf);
      if (global_good) {
        row.verdict = local_good ? Verdict::good : Verdict::extraordinary;
      } else {
        row.verdict = Verdict::poor;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string polar_csv(const PolarProjection& projection) {
  std::ostringstream out;
  out << "region_id,angle,radius,single_flag\n";
  for (const PolarPoint& p : projection.points) {
    out << p.region_id << ',' << format_double(p.angle) << ','
        << format_double(p.radius) << ',' << (p.single_flag ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string extrapolation_csv(const std::vector<ExtrapolationRow>& rows,
                              bool auc_metric) {
  std::ostringstream out;
  const char* metric = auc_metric ? "auc" : "mse";
  out << "region_id,count,local_" << metric << ",global_" << metric
      << ",verdict\n";
  for (const ExtrapolationRow& row : rows) {
    out << row.region_id << ',' << row.count << ','
        << (row.local_perf ? format_double(*row.local_perf) : std::string())
        << ','
        << (row.global_perf ? format_double(*row.global_perf) : std::string())
        << ',' << verdict_name(row.verdict) << '\n';
  }
  return out.str();
}

}  // namespace relux
