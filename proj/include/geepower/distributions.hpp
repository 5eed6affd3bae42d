#pragma once

namespace geepower::dist {

double normal_pdf(double x);
double normal_cdf(double x);
// Lower-tail quantile; p must lie in (0, 1).
double normal_quantile(double p);

double t_pdf(double x, double df);
double t_cdf(double x, double df);
double t_quantile(double p, double df);

// Regularized incomplete beta I_x(a, b). y = 1 - x is passed separately so
// callers can supply it without cancellation.
double incomplete_beta(double a, double b, double x, double y);

}  // namespace geepower::dist
