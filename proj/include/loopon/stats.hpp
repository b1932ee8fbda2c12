#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace loopon {

struct Proportion {
  long hits = 0;
  long trials = 0;

  double estimate() const { return trials ? (double)hits / trials : 0.0; }
  double standard_error() const {
    if (!trials) return 0.0;
    double p = estimate();
    return std::sqrt(p * (1 - p) / trials);
  }
  // Wilson score interval bounds at z standard deviations
  double wilson_lower(double z = 3.0) const {
    if (!trials) return 0.0;
    double p = estimate(), n = (double)trials;
    double denom = 1 + z * z / n;
    double center = p + z * z / (2 * n);
    double margin = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    return (center - margin) / denom;
  }
  double wilson_upper(double z = 3.0) const {
    if (!trials) return 1.0;
    double p = estimate(), n = (double)trials;
    double denom = 1 + z * z / n;
    double center = p + z * z / (2 * n);
    double margin = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    return (center + margin) / denom;
  }
};

// Acklam's rational approximation of the standard normal quantile;
// absolute error below 1.2e-9 on (0,1)
inline double normal_quantile(double p) {
  if (!(p > 0 && p < 1))
    throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

// chi-square quantile at upper tail probability alpha
inline double chi_square_quantile(double df, double alpha) {
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::quantile(dist, 1 - alpha);
}

struct ChiSquareResult {
  double statistic = 0;
  int df = 0;
  double critical = 0;  // at the requested significance
  bool pass = false;
};

// Pearson goodness-of-fit; bins with expected count below min_expected are
// pooled into the smallest-probability bin to keep the approximation sane.
inline ChiSquareResult chi_square_test(const std::vector<double>& probs,
                                       const std::vector<long>& counts,
                                       double alpha = 0.001,
                                       double min_expected = 5.0) {
  if (probs.size() != counts.size() || probs.empty())
    throw std::invalid_argument("chi_square_test: size mismatch");
  long n = 0;
  for (long c : counts) n += c;
  std::vector<double> e;
  std::vector<long> o;
  double pool_e = 0;
  long pool_o = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double exp_i = probs[i] * n;
    if (exp_i < min_expected) {
      pool_e += exp_i;
      pool_o += counts[i];
    } else {
      e.push_back(exp_i);
      o.push_back(counts[i]);
    }
  }
  if (pool_e > 0) {
    e.push_back(pool_e);
    o.push_back(pool_o);
  }
  if (e.size() < 2)
    throw std::invalid_argument("chi_square_test: too few usable bins");
  ChiSquareResult res;
  for (std::size_t i = 0; i < e.size(); ++i)
    res.statistic += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
  res.df = (int)e.size() - 1;
  res.critical = chi_square_quantile(res.df, alpha);
  res.pass = res.statistic <= res.critical;
  return res;
}

}  // namespace loopon
