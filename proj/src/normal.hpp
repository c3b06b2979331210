#pragma once

namespace mlab {

// Standard-normal analytic toolkit.
//
// Accuracy contracts (tested):
//   normal_cdf       ~1e-15 relative in the body, absolute in the tails
//   normal_quantile  |Phi(result) - u| <= 1e-9 (in practice ~1e-15)
//   gamma_fn         <= 1e-10 relative on (0, 170)
//   normal_abs_moment<= 1e-10 relative

double normal_pdf(double x);
double normal_cdf(double x);

// inf{x : Phi(x) >= u}, 0 < u < 1; throws std::domain_error outside (0,1).
double normal_quantile(double u);

// Lanczos approximation (g = 7, 9 terms), reflection for x < 0.5.
double gamma_fn(double x);

// E|Z|^r = 2^{r/2} Gamma((r+1)/2) / sqrt(pi), r > 0.
double normal_abs_moment(double r);

// Partial moments of the quantile function, closed forms used by the exact
// transport integrals:
//   int_a^b Phi^{-1}(u) du       = pdf(z_a) - pdf(z_b)
//   int_a^b (Phi^{-1}(u))^2 du   = (b - a) + z_a pdf(z_a) - z_b pdf(z_b)
// with z_u = Phi^{-1}(u); a = 0 and b = 1 are valid endpoints.
double normal_quantile_integral(double a, double b);
double normal_quantile_square_integral(double a, double b);

struct NormalLaw {
    double mean = 0.0;
    double stddev = 1.0;

    NormalLaw() = default;
    NormalLaw(double m, double s);

    double cdf(double x) const;
    double quantile(double u) const;
};

} // namespace mlab
