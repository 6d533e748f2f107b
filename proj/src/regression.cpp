#include "probekit/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

namespace probekit {

double RegressionSummary::multiple_r() const { return std::sqrt(r_square); }

RegressionSummary fit_regression(const std::vector<RegressionSample>& samples) {
  constexpr int kRegressors = 3;
  const auto n = static_cast<Eigen::Index>(samples.size());
  if (n < kRegressors + 2) {
    throw RegressionError(RegressionError::Kind::TooFewSamples,
                          "need at least 5 samples, got " + std::to_string(n));
  }

  Eigen::MatrixXd design(n, kRegressors + 1);
  Eigen::VectorXd response(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = s.observation_number;
    design(i, 2) = s.probe_prob;
    design(i, 3) = s.attendance_prob;
    response(i) = s.accuracy;
  }

  // Normal equations; a rank-deficient X^T X means collinear regressors.
  const Eigen::Matrix4d gram = design.transpose() * design;
  const Eigen::Vector4d moment = design.transpose() * response;
  Eigen::FullPivLU<Eigen::Matrix4d> lu(gram);
  if (!lu.isInvertible()) {
    throw RegressionError(RegressionError::Kind::RankDeficient,
                          "design matrix is rank deficient");
  }
  const Eigen::Vector4d beta = lu.solve(moment);

  const Eigen::VectorXd residuals = response - design * beta;
  const double ss_residual = residuals.squaredNorm();
  const double mean = response.mean();
  const double ss_total = (response.array() - mean).matrix().squaredNorm();

  RegressionSummary out;
  out.intercept = beta(0);
  out.coef_observation_number = beta(1);
  out.coef_probe_prob = beta(2);
  out.coef_attendance_prob = beta(3);
  out.sample_count = samples.size();
  out.r_square = (ss_total > 0.0)
                     ? std::clamp(1.0 - ss_residual / ss_total, 0.0, 1.0)
                     : 0.0;
  const double dof = static_cast<double>(n - kRegressors - 1);
  out.adjusted_r_square =
      1.0 - (1.0 - out.r_square) * static_cast<double>(n - 1) / dof;
  out.standard_error = std::sqrt(ss_residual / dof);
  return out;
}

std::string format_summary(const RegressionSummary& summary) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "Regression Summary\n"
                "Multiple R          %0.8f\n"
                "R Square            %0.8f\n"
                "Adjusted R Square   %0.8f\n"
                "Standard Error      %0.8f\n"
                "Simulations         %zu\n"
                "Intercept           %+0.8f\n"
                "Observation Number  %+0.8f\n"
                "Probe Probability   %+0.8f\n"
                "Attendance          %+0.8f\n",
                summary.multiple_r(), summary.r_square,
                summary.adjusted_r_square, summary.standard_error,
                summary.sample_count, summary.intercept,
                summary.coef_observation_number, summary.coef_probe_prob,
                summary.coef_attendance_prob);
  return buf;
}

}  // namespace probekit
