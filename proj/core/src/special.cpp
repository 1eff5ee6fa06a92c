#include "zenosplit/special.hpp"

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <string>

#include "zenosplit/error.hpp"

namespace zenosplit::special {
namespace {

// Series for n >= 0: sum_k (-1)^k (x/2)^(n+2k) / (k! (n+k)!).
double bessel_j_nonnegative(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;

  const long double half = static_cast<long double>(x) / 2.0L;
  // log of the leading term decides underflow before any product is formed
  const long double log_lead = n * std::log(half) - std::lgamma(static_cast<long double>(n) + 1.0L);
  if (log_lead < std::log(static_cast<long double>(DBL_MIN))) return 0.0;

  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= half / k;

  const long double q = -half * half;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (n + k));
    sum += term;
    if (std::fabs(term) < 1e-17L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

double bessel_j(int n, double x) {
  if (!std::isfinite(x)) throw ValidationError("bessel_j: argument must be finite");
  if (x < 0.0) throw ValidationError("bessel_j: argument must be non-negative, got " + std::to_string(x));
  const double value = bessel_j_nonnegative(std::abs(n), x);
  return (n < 0 && (n % 2 != 0)) ? -value : value;
}

}  // namespace zenosplit::special
