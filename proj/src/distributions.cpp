#include "geepower/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "geepower/errors.hpp"

namespace geepower::dist {

namespace {

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("probability " + std::to_string(p) + " outside (0, 1)");
}

void require_df(double df) {
  if (!(df >= 1.0)) throw DomainError("degrees of freedom must be at least 1");
}

// Tail of Stirling's series for log Gamma(z), valid for z >= 50.
double stirling_tail(double z) {
  const double z2 = z * z;
  return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z;
}

// log Gamma(a) - log Gamma(a + b), accurate when a is large and b small.
double log_gamma_ratio(double a, double b) {
  if (a < 50.0) return std::lgamma(a) - std::lgamma(a + b);
  return -(a - 0.5) * std::log1p(b / a) - b * std::log(a + b) + b + stirling_tail(a) - stirling_tail(a + b);
}

double log_beta(double a, double b) {
  if (a < b) std::swap(a, b);
  return std::lgamma(b) + log_gamma_ratio(a, b);
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 200000;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi / std::numbers::sqrt2; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  require_probability(p);
  // Wichura, algorithm AS 241 (PPND16).
  const double q = p - 0.5;
  double x;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    x = q *
        (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
             45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
          133.14166789178437745) * r + 3.387132872796366608) /
        (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
             21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
          42.313330701600911252) * r + 1.0);
  } else {
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
      r -= 1.6;
      x = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
               1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
               0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
    } else {
      r -= 5.0;
      x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
               0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
               7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
    }
    if (q < 0.0) x = -x;
  }
  // One Newton step against the erfc-based CDF.
  const double dens = normal_pdf(x);
  if (dens > 0.0) x -= (normal_cdf(x) - p) / dens;
  return x;
}

double incomplete_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(y) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, y) / b;
}

double t_pdf(double x, double df) {
  require_df(df);
  const double half = 0.5 * df;
  const double log_norm = -log_gamma_ratio(half, 0.5) - 0.5 * std::log(df * std::numbers::pi);
  return std::exp(log_norm - (half + 0.5) * std::log1p(x * x / df));
}

double t_cdf(double x, double df) {
  require_df(df);
  if (x == 0.0) return 0.5;
  const double x2 = x * x;
  const double denom = df + x2;
  // P(|T| > |x|) = I_{df/(df+x^2)}(df/2, 1/2)
  const double two_tail = incomplete_beta(0.5 * df, 0.5, df / denom, x2 / denom);
  return x < 0.0 ? 0.5 * two_tail : 1.0 - 0.5 * two_tail;
}

double t_quantile(double p, double df) {
  require_probability(p);
  require_df(df);
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -t_quantile(1.0 - p, df);

  // Lower tail from here on; the answer is negative. Start from the
  // Cornish-Fisher expansion around the normal quantile.
  const double z = normal_quantile(p);
  const double z2 = z * z;
  double x = z + z * (z2 + 1.0) / (4.0 * df) + z * ((5.0 * z2 + 16.0) * z2 + 3.0) / (96.0 * df * df);
  if (!(x < 0.0) || !std::isfinite(x)) x = z;

  // Bracket [lo, hi] with cdf(lo) <= p <= cdf(hi).
  double hi = 0.0;
  double lo = x;
  while (t_cdf(lo, df) > p) {
    hi = lo;
    lo *= 2.0;
    if (!std::isfinite(lo)) throw DomainError("t quantile bracket diverged");
  }
  if (x <= lo || x >= hi) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double f = t_cdf(x, df) - p;
    if (f > 0.0) hi = x; else lo = x;
    const double dens = t_pdf(x, df);
    double next = dens > 0.0 ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * std::fabs(x)) return next;
    x = next;
  }
  return x;
}

}  // namespace geepower::dist
