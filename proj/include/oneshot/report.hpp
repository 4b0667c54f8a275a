#pragma once

#include <cstdint>
#include <string>

namespace oneshot {

enum class SimMode { per_draw, exact_per_seed };

// Monte Carlo verdict for one protocol configuration.
struct SimulationReport {
  std::uint64_t trials = 0;
  // per_draw: failed trials. exact_per_seed: seeds whose exact conditional
  // error exceeded the target.
  std::uint64_t failures = 0;
  double point_estimate = 0.0;
  double wilson_95_upper = 0.0;  // per_draw: Wilson upper limit; exact mode:
                                 // normal-approximation upper limit of the mean
  double std_error = 0.0;
  double analytic_bound = 0.0;   // union bound for the same configuration
  double target_epsilon = 0.0;
  bool pass = false;             // wilson_95_upper <= target_epsilon
  SimMode mode = SimMode::per_draw;
};

// Upper end of the 95% Wilson score interval for f successes in n trials.
double wilson_upper_95(std::uint64_t failures, std::uint64_t trials);

SimulationReport make_draw_report(std::uint64_t trials, std::uint64_t failures,
                                  double analytic_bound, double target_epsilon);
SimulationReport make_exact_report(std::uint64_t trials, double mean, double sample_variance,
                                   std::uint64_t exceed_count, double analytic_bound,
                                   double target_epsilon);

std::string report_csv_header();
std::string report_csv_row(const SimulationReport& r);

}  // namespace oneshot
