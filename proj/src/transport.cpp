#include "transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace mlab {

namespace {

inline double rpow(double x, double r) {
    if (r == 2.0) return x * x;
    if (r == 1.0) return x;
    return std::pow(x, r);
}

void require_order(double r) {
    if (!(r > 0.0)) throw std::domain_error("mallows: order r must be > 0");
}

// ---- adaptive Gauss-Legendre for the general-r normal integral ----

// 15-point Gauss-Legendre nodes/weights on [-1, 1]
const double GL_X[15] = {
    0.0,                    -0.2011940939974345, 0.2011940939974345,
    -0.3941513470775634,    0.3941513470775634,  -0.5709721726085388,
    0.5709721726085388,     -0.7244177313601701, 0.7244177313601701,
    -0.8482065834104272,    0.8482065834104272,  -0.9372733924007060,
    0.9372733924007060,     -0.9879925180204854, 0.9879925180204854};
const double GL_W[15] = {
    0.2025782419255613, 0.1984314853271116, 0.1984314853271116,
    0.1861610000155622, 0.1861610000155622, 0.1662692058169939,
    0.1662692058169939, 0.1395706779261543, 0.1395706779261543,
    0.1071592204671719, 0.1071592204671719, 0.0703660474881081,
    0.0703660474881081, 0.0307532419961173, 0.0307532419961173};

template <class F>
double gl15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += GL_W[i] * f(c + h * GL_X[i]);
    return s * h;
}

template <class F>
double adaptive_gl(const F& f, double a, double b, double tol, int depth) {
    const double whole = gl15(f, a, b);
    const double mid = 0.5 * (a + b);
    const double halves = gl15(f, a, mid) + gl15(f, mid, b);
    const double diff = std::abs(halves - whole);
    // absolute target, with a relative escape once the refinement is at
    // machine precision of the local integral
    if (diff <= tol || diff <= 1e-13 * std::abs(halves) || depth >= 24) return halves;
    return adaptive_gl(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gl(f, mid, b, 0.5 * tol, depth + 1);
}

// integral of |c - Phi^{-1}(u)|^r over (a, b], splitting tail cells
// geometrically so the log singularity of Phi^{-1} stays resolved
template <class F>
double integrate_cell(const F& f, double a, double b, double tol) {
    constexpr double EDGE = 1e-15;
    double acc = 0.0;
    if (a <= 0.0) {
        // (0, b]: halve toward 0, drop the last sliver (bounded by ~1e-12)
        double hi = b;
        while (hi > EDGE) {
            double lo = std::max(0.5 * hi, EDGE);
            acc += adaptive_gl(f, lo, hi, tol * (hi - lo), 0);
            hi = lo;
            if (hi <= EDGE) break;
        }
        return acc;
    }
    if (b >= 1.0) {
        double lo = a;
        while (1.0 - lo > EDGE) {
            double hi = std::min(lo + 0.5 * (1.0 - lo), 1.0 - EDGE);
            acc += adaptive_gl(f, lo, hi, tol * (hi - lo), 0);
            lo = hi;
            if (1.0 - lo <= EDGE) break;
        }
        return acc;
    }
    return adaptive_gl(f, a, b, tol * (b - a), 0);
}

} // namespace

double mallows_rpow_merged_grid(const SortedSample& a, const SortedSample& b, double r) {
    require_order(r);
    const auto x = a.values();
    const auto y = b.values();
    const std::uint64_t ma = x.size(), mb = y.size();
    // Both quantile functions are constant between breakpoints; on the
    // common grid with denominator ma*mb every breakpoint is an integer.
    std::uint64_t i = 0, j = 0, prev = 0;
    double acc = 0.0;
    while (i < ma && j < mb) {
        const std::uint64_t next_a = (i + 1) * mb;
        const std::uint64_t next_b = (j + 1) * ma;
        const std::uint64_t next = std::min(next_a, next_b);
        acc += static_cast<double>(next - prev) * rpow(std::abs(x[i] - y[j]), r);
        if (next_a == next) ++i;
        if (next_b == next) ++j;
        prev = next;
    }
    return acc / (static_cast<double>(ma) * static_cast<double>(mb));
}

double mallows_rpow_sorted_pairs(const SortedSample& a, const SortedSample& b, double r) {
    require_order(r);
    if (a.size() != b.size())
        throw std::invalid_argument("mallows_rpow_sorted_pairs: sizes differ");
    const auto x = a.values();
    const auto y = b.values();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += rpow(std::abs(x[i] - y[i]), r);
    return acc / static_cast<double>(x.size());
}

double mallows_distance(const SortedSample& a, const SortedSample& b, double r) {
    const double p = (a.size() == b.size()) ? mallows_rpow_sorted_pairs(a, b, r)
                                            : mallows_rpow_merged_grid(a, b, r);
    return std::pow(p, 1.0 / r);
}

double mallows_to_normal(const SortedSample& a, const NormalLaw& law, double r) {
    require_order(r);
    const auto x = a.values();
    const std::size_t m = x.size();
    const double inv_m = 1.0 / static_cast<double>(m);
    const double sd = law.stddev;

    // Quantile-cell boundaries z_i = Phi^{-1}(i/m), shared by both routes.
    std::vector<double> z(m + 1), pdf(m + 1);
    z[0] = 0.0;
    pdf[0] = 0.0; // z = -inf
    z[m] = 0.0;
    pdf[m] = 0.0; // z = +inf
    for (std::size_t i = 1; i < m; ++i) {
        z[i] = normal_quantile(static_cast<double>(i) * inv_m);
        pdf[i] = normal_pdf(z[i]);
    }

    double acc = 0.0;
    if (r == 2.0) {
        for (std::size_t i = 0; i < m; ++i) {
            const double ua = static_cast<double>(i) * inv_m;
            const double ub = static_cast<double>(i + 1) * inv_m;
            const double c = (x[i] - law.mean) / sd;
            const double j1 = pdf[i] - pdf[i + 1];
            const double j2 = (ub - ua) + z[i] * pdf[i] - z[i + 1] * pdf[i + 1];
            acc += sd * sd * (c * c * (ub - ua) - 2.0 * c * j1 + j2);
        }
    } else if (r == 1.0) {
        for (std::size_t i = 0; i < m; ++i) {
            const double ua = static_cast<double>(i) * inv_m;
            const double ub = static_cast<double>(i + 1) * inv_m;
            const double c = (x[i] - law.mean) / sd;
            const double uc = normal_cdf(c);
            if (uc <= ua) {
                // z(u) >= c on the whole cell
                acc += sd * ((pdf[i] - pdf[i + 1]) - c * (ub - ua));
            } else if (uc >= ub) {
                acc += sd * (c * (ub - ua) - (pdf[i] - pdf[i + 1]));
            } else {
                const double pc = normal_pdf(c);
                acc += sd * (c * (uc - ua) - (pdf[i] - pc));
                acc += sd * ((pc - pdf[i + 1]) - c * (ub - uc));
            }
        }
    } else {
        const double tol = 1e-8; // absolute, on d_r^r, distributed by cell width
        for (std::size_t i = 0; i < m; ++i) {
            // endpoints must be exact so the tail branches engage
            const double ua = i == 0 ? 0.0 : static_cast<double>(i) * inv_m;
            const double ub = i + 1 == m ? 1.0 : static_cast<double>(i + 1) * inv_m;
            const double xi = x[i];
            auto f = [&](double u) {
                return rpow(std::abs(xi - law.mean - sd * normal_quantile(u)), r);
            };
            acc += integrate_cell(f, ua, ub, tol);
        }
    }
    if (acc < 0.0) acc = 0.0; // closed forms can round slightly negative at 0
    return std::pow(acc, 1.0 / r);
}

double mallows_normal_closed_form(const NormalLaw& f, const NormalLaw& g) {
    const double dm = f.mean - g.mean;
    const double ds = f.stddev - g.stddev;
    return std::sqrt(dm * dm + ds * ds);
}

double kolmogorov_to_normal(const SortedSample& a, const NormalLaw& law) {
    const auto x = a.values();
    const double m = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p = law.cdf(x[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / m - p));
        d = std::max(d, std::abs(static_cast<double>(i) / m - p));
    }
    return d;
}

double kolmogorov_bound_from_d1(double d1) {
    return 2.0 * std::sqrt(d1 / std::sqrt(2.0 * std::numbers::pi));
}

} // namespace mlab
