#include "spikeform/mp_core.hpp"

#include <cmath>
#include <string>
#include <vector>


#include "spikeform/errors.hpp"

namespace spikeform::mp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBulkGuard = 1e-9;

void validate_y(double y) {
    if (!(y > 0.0 && y < 1.0))
        throw DomainError("aspect ratio y must lie in (0,1), got " + std::to_string(y));
}

// ---------------------------------------------------------------- Gauss-Legendre

struct GLRule {
    std::vector<double> node;    // on (-1,1)
    std::vector<double> weight;
};

// Nodes via Newton iteration on the Legendre recurrence; standard symmetric
// construction, good to machine precision for the orders used here.
GLRule build_rule(int order) {
    GLRule r;
    r.node.resize(order);
    r.weight.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        r.node[i] = -x;
        r.node[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weight[i] = w;
        r.weight[order - 1 - i] = w;
    }
    return r;
}

const GLRule& rule512() {
    static const GLRule r = build_rule(512);
    return r;
}
const GLRule& rule1024() {
    static const GLRule r = build_rule(1024);
    return r;
}

// integrand numerators g(x, lambda) per kind
double g_kind(Kind kind, double x, double l) {
    const double d = l - x;
    switch (kind) {
        case Kind::M0: return 1.0 / d;
        case Kind::M1: return x / d;
        case Kind::M2: return x * x / (d * d);
        case Kind::M3: return x / (d * d);
        case Kind::M4: return 1.0 / (d * d);
        case Kind::M5: return x / (d * d * d);
        case Kind::M6: return x * x / (d * d * d * d);
        case Kind::M7: return x * x / (d * d * d);
        case Kind::M3plusM7: return x / (d * d) + x * x / (d * d * d);
    }
    return 0.0;
}

// With x = (1+y) + 2 sqrt(y) sin t, t in [-pi/2, pi/2], the M-P weight
// sqrt((x-a_y)(b_y-x))/(2 pi x y) dx collapses to (2/pi) cos^2(t)/x dt.
double quad_transformed(Kind kind, double lambda, double y, const GLRule& r) {
    const double c = 1.0 + y;
    const double h = 2.0 * std::sqrt(y);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.node.size(); ++i) {
        const double t = 0.5 * kPi * r.node[i];
        const double ct = std::cos(t);
        const double x = c + h * std::sin(t);
        acc += r.weight[i] * g_kind(kind, x, lambda) * ct * ct / x;
    }
    // (2/pi) * (pi/2) from the [-1,1] -> [-pi/2,pi/2] map
    return acc;
}

double quad_moment(int m, double y, const GLRule& r) {
    const double c = 1.0 + y;
    const double h = 2.0 * std::sqrt(y);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.node.size(); ++i) {
        const double t = 0.5 * kPi * r.node[i];
        const double ct = std::cos(t);
        const double x = c + h * std::sin(t);
        acc += r.weight[i] * std::pow(x, m - 1) * ct * ct;
    }
    return acc;
}

}  // namespace

Support mp_support(double y) {
    validate_y(y);
    const double sq = std::sqrt(y);
    return {(1.0 - sq) * (1.0 - sq), (1.0 + sq) * (1.0 + sq)};
}

double mp_density(double x, double y) {
    validate_y(y);
    const Support s = mp_support(y);
    if (x <= s.a_y || x >= s.b_y) return 0.0;
    return std::sqrt((x - s.a_y) * (s.b_y - x)) / (2.0 * kPi * x * y);
}

double mp_integral(Kind kind, double lambda, double y) {
    validate_y(y);
    const Support s = mp_support(y);
    if (lambda >= s.a_y && lambda <= s.b_y)
        throw SupportError("lambda = " + std::to_string(lambda) +
                           " lies inside the spectral support; integrand is singular");
    if (kind == Kind::M3plusM7)
        return mp_integral(Kind::M3, lambda, y) + mp_integral(Kind::M7, lambda, y);
    const double coarse = quad_transformed(kind, lambda, y, rule512());
    const double fine = quad_transformed(kind, lambda, y, rule1024());
    if (std::fabs(fine - coarse) > 1e-10 * std::max(1.0, std::fabs(fine)))
        throw SupportError("quadrature did not stabilize; lambda too close to the bulk edge");
    return fine;
}

bool spike_in_bulk(double a, double y) {
    validate_y(y);
    const double sq = std::sqrt(y);
    const double lo = 1.0 - sq, hi = 1.0 + sq;
    const double dist = (a < lo) ? lo - a : (a > hi) ? a - hi : 0.0;
    return dist < kBulkGuard;
}

double mp_integral_closed(Kind kind, double a, double y) {
    validate_y(y);
    if (a <= 0.0) throw PhaseError("spike must be positive, got " + std::to_string(a));
    if (spike_in_bulk(a, y))
        throw PhaseError("spike a = " + std::to_string(a) +
                         " is inside (or within 1e-9 of) the bulk interval");
    const double s = a - 1.0;
    const double q = s * s - y;       // > 0 for any spike outside the bulk
    const double t = a - 1.0 + y;
    switch (kind) {
        case Kind::M0: return 1.0 / t;
        case Kind::M1: return 1.0 / s;
        case Kind::M2: return (s + y * (a + 1.0)) / (s * q);
        case Kind::M3: return 1.0 / q;
        case Kind::M4: return s * s / (q * t * t);
        case Kind::M5: return (s * s * s) / (q * q * q);
        case Kind::M6: return (s * s * s * s) * (t * t + a * a * y) / (q * q * q * q * q);
        case Kind::M3plusM7: return a * t * s * s / (q * q * q);
        case Kind::M7: return a * t * s * s / (q * q * q) - 1.0 / q;
    }
    throw DomainError("unknown integral kind");
}

double phase_phi(double a, double y) {
    validate_y(y);
    if (std::fabs(a - 1.0) < 1e-12)
        throw PhaseError("phi(a) is undefined at a = 1 (pole of y*a/(a-1))");
    return a + y * a / (a - 1.0);
}

double mp_moment(int m, double y) {
    validate_y(y);
    if (m < 0) throw DomainError("moment order must be >= 0");
    if (m == 0) return 1.0;
    const double coarse = quad_moment(m, y, rule512());
    const double fine = quad_moment(m, y, rule1024());
    if (std::fabs(fine - coarse) > 1e-10 * std::max(1.0, std::fabs(fine)))
        throw DomainError("moment quadrature did not stabilize (order too high?)");
    return fine;
}

MPIntegrals mp_integrals_all(double lambda, double y) {
    MPIntegrals out;
    out.lambda = lambda;
    const Kind kinds[8] = {Kind::M0, Kind::M1, Kind::M2, Kind::M3,
                           Kind::M4, Kind::M5, Kind::M6, Kind::M7};
    for (int i = 0; i < 8; ++i) out.m[i] = mp_integral(kinds[i], lambda, y);
    return out;
}

}  // namespace spikeform::mp
