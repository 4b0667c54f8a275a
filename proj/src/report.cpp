#include "oneshot/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace oneshot {

namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double wilson_upper_95(std::uint64_t failures, std::uint64_t trials) {
  if (trials == 0) return 1.0;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / n;
  const double z2 = kZ95 * kZ95;
  const double center = p + z2 / (2.0 * n);
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return std::clamp((center + half) / (1.0 + z2 / n), 0.0, 1.0);
}

SimulationReport make_draw_report(std::uint64_t trials, std::uint64_t failures,
                                  double analytic_bound, double target_epsilon) {
  SimulationReport r;
  r.mode = SimMode::per_draw;
  r.trials = trials;
  r.failures = failures;
  r.point_estimate = trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
  r.std_error = trials ? std::sqrt(r.point_estimate * (1.0 - r.point_estimate) /
                                   static_cast<double>(trials))
                       : 0.0;
  r.wilson_95_upper = wilson_upper_95(failures, trials);
  r.analytic_bound = analytic_bound;
  r.target_epsilon = target_epsilon;
  r.pass = r.wilson_95_upper <= target_epsilon;
  return r;
}

SimulationReport make_exact_report(std::uint64_t trials, double mean, double sample_variance,
                                   std::uint64_t exceed_count, double analytic_bound,
                                   double target_epsilon) {
  SimulationReport r;
  r.mode = SimMode::exact_per_seed;
  r.trials = trials;
  r.failures = exceed_count;
  r.point_estimate = mean;
  r.std_error = trials > 1 ? std::sqrt(sample_variance / static_cast<double>(trials)) : 0.0;
  r.wilson_95_upper = std::clamp(mean + kZ95 * r.std_error, 0.0, 1.0);
  r.analytic_bound = analytic_bound;
  r.target_epsilon = target_epsilon;
  r.pass = r.wilson_95_upper <= target_epsilon;
  return r;
}

std::string report_csv_header() {
  return "trials,failures,estimate,wilson_95_upper,analytic_bound,target_eps,verdict";
}

std::string report_csv_row(const SimulationReport& r) {
  return std::to_string(r.trials) + "," + std::to_string(r.failures) + "," +
         fmt(r.point_estimate) + "," + fmt(r.wilson_95_upper) + "," + fmt(r.analytic_bound) +
         "," + fmt(r.target_epsilon) + "," + (r.pass ? "pass" : "fail");
}

}  // namespace oneshot
