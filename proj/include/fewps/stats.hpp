#ifndef FEWPS_STATS_HPP
#define FEWPS_STATS_HPP

#include <functional>
#include <vector>

namespace fewps {

/// Regularized lower incomplete gamma P(s, x).
double regularized_gamma_p(double s, double x);

double chi_square_cdf(double x, double dof);
/// Inverse of the chi-square CDF (bisection on regularized_gamma_p).
double chi_square_quantile(double p, double dof);

/// Two-sample Kolmogorov-Smirnov statistic (inputs need not be sorted).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Critical value c(alpha)*sqrt((n+m)/(n*m)) of the two-sample KS test.
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

/// One-sample KS statistic against a CDF (inputs need not be sorted).
double ks_one_sample(std::vector<double> samples,
                     const std::function<double(double)>& cdf);

} // namespace fewps

#endif
