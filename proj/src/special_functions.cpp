#include "cochranq/special_functions.hpp"

#include <cmath>
#include <limits>

#include "cochranq/error.hpp"

namespace cochranq {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100'000;

double log_prefactor(double a, double x) { return -x + a * std::log(x) - std::lgamma(a); }

// Series for P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Modified Lentz continued fraction for Q(a, x); for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

void check_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("incomplete gamma: a must be positive");
  if (!std::isfinite(x) || x < 0.0) throw InvalidArgument("incomplete gamma: x must be finite and >= 0");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_square_sf(double x, int df) {
  if (df < 1) throw InvalidArgument("chi-square: df must be >= 1");
  if (!std::isfinite(x)) throw InvalidArgument("chi-square: x must be finite");
  if (x < 0.0) throw InvalidArgument("chi-square: x must be >= 0");
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double binomial_upper_tail(unsigned n, double p, unsigned k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(n + 1.0);
  double tail = 0.0;
  for (unsigned i = k; i <= n; ++i) {
    tail += std::exp(log_n_fact - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * log_p +
                     (n - i) * log_q);
  }
  return tail > 1.0 ? 1.0 : tail;
}

}  // namespace cochranq
