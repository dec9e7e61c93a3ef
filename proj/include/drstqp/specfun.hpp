#pragma once

namespace drstqp {

/// log Gamma(a) for a > 0, Lanczos approximation (g = 7, 9 coefficients).
double log_gamma(double a);

/// Standard normal CDF, evaluated through erfc for accuracy in both tails.
double norm_cdf(double x);

/// Inverse standard normal CDF on (0,1). Rational approximation of Acklam
/// (relative error below 1.15e-9) followed by one Halley polish step against
/// norm_cdf, giving |Phi(result) - alpha| well under 1e-10.
double inv_norm_cdf(double alpha);

/// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, continued fraction otherwise; absolute
/// error at most ~1e-14.
double gamma_p(double a, double x);

/// Inverse of P(a, .) in its second argument: the x >= 0 with P(a, x) = alpha
/// for alpha in [0, 1). Newton iteration with a bisection fallback bracketed
/// in [0, a + 20 sqrt(a) + 50].
double inv_gamma_p(double a, double alpha);

}  // namespace drstqp
