#include "gibbs_oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mlab {

namespace {

double pair_energy_coeff(const CouplingFamily& c, int i, int j, int n, Boundary b) {
    if (b == Boundary::Periodic) {
        int d = std::abs(i - j);
        d = std::min(d, n - d);
        return c.at(0, d);
    }
    return c.at(i, j);
}

// Hamiltonian of config s (+-1 per bit) under the ordered-pair convention:
// each unordered bond contributes 2 J_ij s_i s_j; a frozen-plus boundary adds
// the exterior cross term with the same factor.
struct EnergyTable {
    std::vector<double> bond;  // 2*J over pairs i<j, row-major upper triangle
    std::vector<double> field; // frozen exterior field per site
    int n;
    double sign;

    EnergyTable(const CouplingFamily& c, int n_, const EnumerationOptions& o)
        : bond(static_cast<std::size_t>(n_) * n_, 0.0),
          field(static_cast<std::size_t>(n_), 0.0),
          n(n_),
          sign(o.flip_hamiltonian_sign ? -1.0 : 1.0) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                bond[static_cast<std::size_t>(i) * n + j] =
                    2.0 * pair_energy_coeff(c, i, j, n, o.boundary);
        if (o.boundary == Boundary::FrozenPlus) {
            for (int i = 0; i < n; ++i) {
                double f = 0.0;
                for (int d = 1; d <= o.interaction_radius; ++d) {
                    if (i - d < 0) f += c.at(i, i - d);
                    if (i + d >= n) f += c.at(i, i + d);
                }
                field[static_cast<std::size_t>(i)] = 2.0 * f;
            }
        }
    }

    double energy(unsigned config) const {
        std::array<double, 16> s{};
        for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = (config >> i) & 1u ? 1.0 : -1.0;
        double h = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double b = bond[static_cast<std::size_t>(i) * n + j];
                if (b != 0.0) h += b * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
            }
            h += field[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
        }
        return sign * h;
    }
};

void check_volume(int n) {
    if (n < 1 || n > 16)
        throw std::invalid_argument("exact_enumeration: volume must be in [1, 16]");
}

} // namespace

EnumerationResult exact_enumeration(const CouplingFamily& coupling, int n,
                                    const EnumerationOptions& opts) {
    check_volume(n);
    EnergyTable table(coupling, n, opts);
    EnumerationResult out;
    out.n = n;
    out.mean.assign(static_cast<std::size_t>(n), 0.0);
    out.pair.assign(static_cast<std::size_t>(n) * n, 0.0);

    double z = 0.0;
    const unsigned total = 1u << n;
    // subtract the max energy before exponentiating
    double emax = -1e300;
    for (unsigned c = 0; c < total; ++c) emax = std::max(emax, table.energy(c));
    for (unsigned c = 0; c < total; ++c) {
        const double w = std::exp(table.energy(c) - emax);
        z += w;
        for (int i = 0; i < n; ++i) {
            const double si = (c >> i) & 1u ? 1.0 : -1.0;
            out.mean[static_cast<std::size_t>(i)] += w * si;
            for (int j = i; j < n; ++j) {
                const double sj = (c >> j) & 1u ? 1.0 : -1.0;
                out.pair[static_cast<std::size_t>(i) * n + j] += w * si * sj;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        out.mean[static_cast<std::size_t>(i)] /= z;
        for (int j = i; j < n; ++j) {
            out.pair[static_cast<std::size_t>(i) * n + j] /= z;
            out.pair[static_cast<std::size_t>(j) * n + i] =
                out.pair[static_cast<std::size_t>(i) * n + j];
        }
    }
    return out;
}

std::vector<double> exact_block_moments(const CouplingFamily& coupling, int n, int a, int b,
                                        const EnumerationOptions& opts) {
    check_volume(n);
    if (a < 0 || b > n || a >= b)
        throw std::invalid_argument("exact_block_moments: bad block [a,b)");
    EnergyTable table(coupling, n, opts);
    double z = 0.0;
    std::vector<double> mom(5, 0.0);
    const unsigned total = 1u << n;
    double emax = -1e300;
    for (unsigned c = 0; c < total; ++c) emax = std::max(emax, table.energy(c));
    for (unsigned c = 0; c < total; ++c) {
        const double w = std::exp(table.energy(c) - emax);
        z += w;
        double s = 0.0;
        for (int i = a; i < b; ++i) s += (c >> i) & 1u ? 1.0 : -1.0;
        double p = 1.0;
        for (int k = 1; k <= 4; ++k) {
            p *= s;
            mom[static_cast<std::size_t>(k)] += w * p;
        }
    }
    for (int k = 1; k <= 4; ++k) mom[static_cast<std::size_t>(k)] /= z;
    mom[0] = 1.0;
    return mom;
}

namespace {

using Mat2 = std::array<double, 4>;

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 mat_pow(Mat2 m, int p) {
    Mat2 r{1.0, 0.0, 0.0, 1.0};
    while (p > 0) {
        if (p & 1) r = mul(r, m);
        m = mul(m, m);
        p >>= 1;
    }
    return r;
}

} // namespace

TransferMatrixResult transfer_matrix_two_point(double J, int n, Boundary boundary) {
    if (n < 2) throw std::invalid_argument("transfer_matrix_two_point: need N >= 2");
    if (boundary == Boundary::FrozenPlus)
        throw std::invalid_argument("transfer_matrix_two_point: frozen boundary unsupported");
    const double K = 2.0 * J; // ordered-pair convention
    // normalize each bond weight by e^K so products stay bounded
    const Mat2 T{1.0, std::exp(-2.0 * K), std::exp(-2.0 * K), 1.0};
    const Mat2 S{1.0, 0.0, 0.0, -1.0}; // spin insertion (diagonal +1/-1)

    TransferMatrixResult out;
    out.n = n;
    out.pair.assign(static_cast<std::size_t>(n) * n, 1.0);

    auto vTv = [](const Mat2& m) { return m[0] + m[1] + m[2] + m[3]; };
    auto trace = [](const Mat2& m) { return m[0] + m[3]; };

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double val;
            if (boundary == Boundary::Periodic) {
                const int d = j - i;
                val = trace(mul(mat_pow(T, d), mul(S, mul(mat_pow(T, n - d), S)))) /
                      trace(mat_pow(T, n));
            } else {
                // free: v^T T^i S T^{j-i} S T^{n-1-j} v / (v^T T^{n-1} v), v = (1,1)
                const Mat2 left = mat_pow(T, i);
                const Mat2 mid = mat_pow(T, j - i);
                const Mat2 right = mat_pow(T, n - 1 - j);
                const Mat2 num = mul(left, mul(S, mul(mid, mul(S, right))));
                val = vTv(num) / vTv(mat_pow(T, n - 1));
            }
            out.pair[static_cast<std::size_t>(i) * n + j] = val;
            out.pair[static_cast<std::size_t>(j) * n + i] = val;
        }
    }
    return out;
}

double transfer_matrix_infinite_two_point(double J, int distance) {
    return std::pow(std::tanh(2.0 * J), std::abs(distance));
}

} // namespace mlab
