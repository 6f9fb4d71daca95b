// Marchenko-Pastur primitives: support endpoints, density, the resolvent-type
// integrals m0..m7 against the M-P law (by quadrature, and in closed rational
// form at lambda = phi(a)), moments, and the spike phase map
// phi(a) = a + y*a/(a-1).
//
// Aspect ratio y is the limiting dimension/sample-size ratio, restricted to
// (0,1).  A spike a is "usable" when it sits outside the bulk interval
// [1-sqrt(y), 1+sqrt(y)]; membership is decided with a 1e-9 distance guard so
// near-edge inputs fail loudly instead of returning exploding rationals.
#pragma once

namespace spikeform::mp {

struct Support {
    double a_y;  // (1-sqrt(y))^2
    double b_y;  // (1+sqrt(y))^2
};

// The integrand family:
//   M0: 1/(l-x)        M1: x/(l-x)       M2: x^2/(l-x)^2   M3: x/(l-x)^2
//   M4: 1/(l-x)^2      M5: x/(l-x)^3     M6: x^2/(l-x)^4   M7: x^2/(l-x)^3
// M3plusM7 is the combination m3 + m7, which has its own one-term closed form.
enum class Kind { M0, M1, M2, M3, M4, M5, M6, M7, M3plusM7 };

Support mp_support(double y);

// M-P density; total in x (0 outside the support)
double mp_density(double x, double y);

// Quadrature route: Gauss-Legendre after the x = (1+y) + 2*sqrt(y)*sin(t)
// substitution that absorbs the square-root edge factors.  Accurate to
// ~1e-10 absolute; a doubling check guards the claim.
double mp_integral(Kind kind, double lambda, double y);

// Closed rational forms at lambda = phi(a), in s = a-1, q = s^2-y, t = a-1+y.
double mp_integral_closed(Kind kind, double a, double y);

double phase_phi(double a, double y);

// m-th moment of the M-P law (m >= 0), by the same quadrature
double mp_moment(int m, double y);

// bulk membership with the 1e-9 distance guard
bool spike_in_bulk(double a, double y);

// all eight integrals at one lambda (single quadrature sweep per kind)
struct MPIntegrals {
    double lambda;
    double m[8];
};
MPIntegrals mp_integrals_all(double lambda, double y);

}  // namespace spikeform::mp
