#pragma once

namespace replica::stats {

/// Regularized incomplete beta I_x(a, b). The caller passes y = 1 - x as well
/// so that x close to 1 keeps full precision.
double incomplete_beta(double a, double b, double x, double y);
double incomplete_beta(double a, double b, double x);

/// Student's t distribution with df degrees of freedom (df > 0).
double student_t_cdf(double t, double df);

/// P(|T| >= |t|).
double student_t_two_sided(double t, double df);

}  // namespace replica::stats
