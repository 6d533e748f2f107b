#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace probekit {

struct RegressionSample {
  double observation_number = 0.0;
  double probe_prob = 0.0;
  double attendance_prob = 0.0;
  double accuracy = 0.0;
};

struct RegressionSummary {
  double intercept = 0.0;
  double coef_observation_number = 0.0;
  double coef_probe_prob = 0.0;
  double coef_attendance_prob = 0.0;
  double r_square = 0.0;
  double adjusted_r_square = 0.0;
  double standard_error = 0.0;  // residual standard error, n-k-1 dof
  std::size_t sample_count = 0;

  double multiple_r() const;
};

class RegressionError : public std::runtime_error {
 public:
  enum class Kind { TooFewSamples, RankDeficient };
  RegressionError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Ordinary least squares on the three raw regressors plus intercept,
// solved through the normal equations. Needs >= 5 samples and a
// full-rank design matrix.
RegressionSummary fit_regression(const std::vector<RegressionSample>& samples);

// Key-value block in the shape of a spreadsheet regression summary.
std::string format_summary(const RegressionSummary& summary);

}  // namespace probekit
