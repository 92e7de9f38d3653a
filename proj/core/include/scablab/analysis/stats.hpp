// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ANALYSIS_STATS_HPP_
#define SCABLAB_ANALYSIS_STATS_HPP_

#include <span>

namespace scablab::analysis {

// Closed interval around a point estimate. `n` is the sample count the
// estimate was computed from.
struct Interval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

double sample_mean(std::span<const double> values);
// Unbiased (n-1) standard deviation; 0 for fewer than two samples.
double sample_sd(std::span<const double> values);

// Standard normal quantile (inverse CDF), |p| in (0,1).
double normal_quantile(double p);

// Regularized incomplete beta I_x(a, b), the workhorse behind the Student-t
// CDF. Continued-fraction evaluation, accurate to ~1e-12 on the unit
// interval.
double regularized_incomplete_beta(double a, double b, double x);

// Student-t distribution with `df` degrees of freedom.
double student_t_cdf(double t, double df);
// Two-sided critical value: P(|T| <= result) = confidence.
double student_t_quantile(double confidence, double df);

// Mean with a two-sided t confidence interval. A single sample collapses to
// a zero-width interval (there is no spread to estimate); empty input
// throws.
Interval t_interval(std::span<const double> values, double confidence = 0.95);

// Wilson score interval for a binomial proportion. n must be positive.
Interval wilson_interval(int successes, int n, double confidence = 0.95);

// Welch's unequal-variance two-sample t-test, two-sided. When both samples
// are (numerically) constant the test degenerates: p = 1 for equal means,
// p = 0 otherwise.
struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace scablab::analysis

#endif  // SCABLAB_ANALYSIS_STATS_HPP_
