// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/analysis/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace scablab::analysis {
namespace {

// log Gamma via Lanczos (g=7, n=9), good to ~1e-13 for positive arguments.
double log_gamma(double x) {
  static const double kCoef[9] = {
      0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
      771.32342877765313,   -176.61502916214059, 12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps the continued fraction out of the poles.
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  x -= 1.0;
  double a = kCoef[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (x + i);
  return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t +
         std::log(a);
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  const double kTiny = 1e-300;
  const int kMaxIter = 300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-14) break;
  }
  return h;
}

}  // namespace

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("stats: empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double normal_quantile(double p) {
  if (p <= 0.0 || p >= 1.0) {
    throw std::invalid_argument("stats: normal quantile needs p in (0,1)");
  }
  // Acklam's rational approximation, then one Halley polish step against
  // the exact CDF (erfc), giving ~1e-15 everywhere.
  static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) *
        q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) {
    throw std::invalid_argument("stats: incomplete beta needs a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  // The continued fraction converges fast only below the distribution mean;
  // use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the far side.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(ln_front) * beta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(ln_front) * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (df <= 0.0) throw std::invalid_argument("stats: df must be positive");
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double confidence, double df) {
  if (confidence <= 0.0 || confidence >= 1.0) {
    throw std::invalid_argument("stats: confidence must lie in (0,1)");
  }
  const double target = 1.0 - (1.0 - confidence) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf(hi, df) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

Interval t_interval(std::span<const double> values, double confidence) {
  Interval out;
  out.n = static_cast<int>(values.size());
  out.mean = sample_mean(values);
  if (values.size() == 1) {
    out.lo = out.hi = out.mean;
    return out;
  }
  const double sd = sample_sd(values);
  const double crit =
      student_t_quantile(confidence, static_cast<double>(values.size() - 1));
  const double half = crit * sd / std::sqrt(static_cast<double>(values.size()));
  out.lo = out.mean - half;
  out.hi = out.mean + half;
  return out;
}

Interval wilson_interval(int successes, int n, double confidence) {
  if (n <= 0) throw std::invalid_argument("stats: wilson needs n > 0");
  if (successes < 0 || successes > n) {
    throw std::invalid_argument("stats: successes out of range");
  }
  const double z = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  Interval out;
  out.mean = phat;
  out.lo = std::max(0.0, center - half);
  out.hi = std::min(1.0, center + half);
  out.n = n;
  return out;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("stats: welch needs two samples of size >= 2");
  }
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const double sda = sample_sd(a);
  const double sdb = sample_sd(b);
  const double va = sda * sda / static_cast<double>(a.size());
  const double vb = sdb * sdb / static_cast<double>(b.size());
  WelchResult out;
  if (va + vb < 1e-300) {
    out.t = 0.0;
    out.df = static_cast<double>(a.size() + b.size() - 2);
    out.p_value = ma == mb ? 1.0 : 0.0;
    return out;
  }
  out.t = (ma - mb) / std::sqrt(va + vb);
  const double num = (va + vb) * (va + vb);
  const double den = va * va / static_cast<double>(a.size() - 1) +
                     vb * vb / static_cast<double>(b.size() - 1);
  out.df = num / den;
  out.p_value = 2.0 * (1.0 - student_t_cdf(std::fabs(out.t), out.df));
  return out;
}

}  // namespace scablab::analysis
