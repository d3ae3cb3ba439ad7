#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

namespace tasep {

// One factor (a + b w)^k of a contour integrand. `inside` records whether the root -a/b lies
// inside the contour; it fixes the residue set and the direction of the annulus expansion.
// Inside factors are kept monic (b = 1) so roots compare exactly.
template <class R>
struct Factor {
    R a;
    R b;
    int k;
    bool inside;
};

// (1/2 pi i) * closed integral of coef * prod factors * exp(t w) dw over a circle about 0.
template <class R>
struct Integrand {
    R coef = R(1);
    std::vector<Factor<R>> factors;
    bool has_exp = false;
    long double t = 0;  // exponent rate, used only when has_exp

    // w^e (root 0, inside)
    void power(int e) {
        if (e != 0) factors.push_back({R(0), R(1), e, true});
    }
    // (1 - c/w)^k = (w - c)^k w^-k, root c inside
    void inner(const R& c, int k) {
        if (k == 0) return;
        if (c == R(0)) return;
        factors.push_back({R(0) - c, R(1), k, true});
        power(-k);
    }
    // (1 + d w)^k with root -1/d outside
    void outer(const R& d, int k) {
        if (k != 0 && !(d == R(0))) factors.push_back({R(1), d, k, false});
    }
};

namespace detail {

template <class R>
R rpow(R base, int e) {
    R r(1);
    if (e < 0) {
        base = R(1) / base;
        e = -e;
    }
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

template <class R>
std::vector<R> series_mul(const std::vector<R>& p, const std::vector<R>& q, std::size_t len) {
    std::vector<R> out(len, R(0));
    for (std::size_t i = 0; i < p.size() && i < len; ++i) {
        if (p[i] == R(0)) continue;
        for (std::size_t j = 0; j < q.size() && i + j < len; ++j) out[i + j] += p[i] * q[j];
    }
    return out;
}

// (1 + c s)^k through degree len-1.
template <class R>
std::vector<R> binomial_series(const R& c, int k, std::size_t len) {
    std::vector<R> out(len, R(0));
    R term(1);  // C(k, j) c^j
    for (std::size_t j = 0; j < len; ++j) {
        if (k >= 0 && static_cast<int>(j) > k) break;
        out[j] = term;
        const int jj = static_cast<int>(j);
        term = term * c * R(k - jj) / R(jj + 1);
    }
    return out;
}

template <class R>
long double to_ld(const R& v) {
    if constexpr (std::is_same_v<R, mpq_class>) return static_cast<long double>(v.get_d());
    else return static_cast<long double>(v);
}

}  // namespace detail

// Sum of residues at the inside roots. Exact for rational data without an exponential factor.
template <class R>
R residue_sum(const Integrand<R>& f) {
    std::vector<R> points;
    for (const auto& fa : f.factors) {
        if (!fa.inside || fa.k >= 0) continue;
        const R root = R(0) - fa.a;
        bool seen = false;
        for (const auto& p : points) seen = seen || p == root;
        if (!seen) points.push_back(root);
    }
    R total(0);
    for (const R& p : points) {
        int order = 0;
        for (const auto& fa : f.factors)
            if (fa.a + fa.b * p == R(0)) order -= fa.k;
        if (order <= 0) continue;
        const std::size_t len = order;
        std::vector<R> reg{f.coef};
        for (const auto& fa : f.factors) {
            const R A = fa.a + fa.b * p;
            if (A == R(0)) {
                reg[0] *= detail::rpow(fa.b, fa.k);
                continue;
            }
            auto s = detail::binomial_series(R(fa.b / A), fa.k, len);
            for (auto& v : s) v *= detail::rpow(A, fa.k);
            reg = detail::series_mul(reg, s, len);
        }
        if (f.has_exp) {
            if constexpr (std::is_floating_point_v<R>) {
                std::vector<R> e(len);
                R term = std::exp(f.t * p);
                for (std::size_t j = 0; j < len; ++j) {
                    e[j] = term;
                    term = term * static_cast<R>(f.t) / static_cast<R>(j + 1);
                }
                reg = detail::series_mul(reg, e, len);
            } else {
                throw std::logic_error("exponential factor requires floating-point evaluation");
            }
        }
        if (reg.size() >= len) total += reg[len - 1];
    }
    return total;
}

struct ContourSpec {
    long double radius = 1;
    int points = 256;
};

struct ContourError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Radius must separate inside roots from outside roots.
template <class R>
void check_radius(const Integrand<R>& f, long double r) {
    if (!(r > 0)) throw ContourError("contour radius must be positive");
    for (const auto& fa : f.factors) {
        if (fa.k >= 0) continue;
        const long double root = std::fabs(detail::to_ld(R(0) - fa.a) / detail::to_ld(fa.b));
        if (fa.inside && !(root < r)) throw ContourError("contour radius does not enclose an inner pole");
        if (!fa.inside && !(root > r)) throw ContourError("contour radius crosses an outer pole");
    }
}

// Trapezoidal rule on |w| = r with q points.
template <class R>
long double quadrature_at(const Integrand<R>& f, long double r, int q) {
    using C = std::complex<long double>;
    const long double two_pi = 2 * std::acos(-1.0L);
    C sum(0);
    for (int s = 0; s < q; ++s) {
        const C w = std::polar(r, two_pi * s / q);
        C v(detail::to_ld(f.coef));
        for (const auto& fa : f.factors) v *= std::pow(C(detail::to_ld(fa.a)) + C(detail::to_ld(fa.b)) * w, fa.k);
        if (f.has_exp) v *= std::exp(f.t * w);
        sum += v * w;
    }
    return (sum / static_cast<long double>(q)).real();
}

struct QuadratureResult {
    long double value;
    int points;
    long double change;  // difference between the last two refinements
};

// Doubles the point count until two successive values agree to tol or the cap is hit.
template <class R>
QuadratureResult quadrature(const Integrand<R>& f, const ContourSpec& c, long double tol = 1e-12L, int cap = 1 << 14) {
    check_radius(f, c.radius);
    int q = std::max(c.points, 8);
    long double prev = quadrature_at(f, c.radius, q);
    for (;;) {
        if (q * 2 > cap) return {prev, q, std::numeric_limits<long double>::infinity()};
        const long double next = quadrature_at(f, c.radius, q * 2);
        q *= 2;
        if (std::fabs(next - prev) <= tol) return {next, q, std::fabs(next - prev)};
        prev = next;
    }
}

template <class R>
struct SeriesResult {
    R value;
    int trunc;
    R change;  // |S(trunc) - S(trunc/2)|, a tail estimate
};

// Annulus Laurent expansion: inside factors in powers of 1/w up to trunc, outside factors and the
// exponential in powers of w; returns the coefficient of w^{-1}.
template <class R>
SeriesResult<R> annulus_series(const Integrand<R>& f, int trunc) {
    if (trunc < 0) throw std::invalid_argument("series truncation must be nonnegative");
    int shift = 0;  // net power of w from monic inside factors
    for (const auto& fa : f.factors)
        if (fa.inside) shift += fa.k;
    // negative part: prod (1 + a/w)^k in u = 1/w
    const std::size_t nlen = trunc + 1;
    std::vector<R> neg{R(1)};
    std::vector<R> pos{f.coef};
    const int plen_i = trunc + std::abs(shift) + 2;
    const std::size_t plen = plen_i;
    for (const auto& fa : f.factors) {
        if (fa.inside) {
            neg = detail::series_mul(neg, detail::binomial_series(fa.a, fa.k, nlen), nlen);
        } else {
            auto s = detail::binomial_series(R(fa.b / fa.a), fa.k, plen);
            for (auto& v : s) v *= detail::rpow(fa.a, fa.k);
            pos = detail::series_mul(pos, s, plen);
        }
    }
    if (f.has_exp) {
        if constexpr (!std::is_floating_point_v<R>) throw std::logic_error("exponential factor requires floating-point evaluation");
        std::vector<R> e(plen);
        R term(1);
        for (std::size_t j = 0; j < plen; ++j) {
            e[j] = term;
            term = term * static_cast<R>(f.t) / static_cast<R>(j + 1);
        }
        pos = detail::series_mul(pos, e, plen);
    }
    // coefficient of w^{-1}: pos_a * neg_b with a - b + shift = -1
    auto partial = [&](int upto) {
        R s(0);
        for (int b = 0; b <= upto && b < static_cast<int>(neg.size()); ++b) {
            const int a = b - shift - 1;
            if (a < 0 || a >= static_cast<int>(pos.size())) continue;
            s += pos[a] * neg[b];
        }
        return s;
    };
    const R full = partial(trunc);
    R diff = full - partial(trunc / 2);
    if (diff < R(0)) diff = R(0) - diff;
    return {full, trunc, diff};
}

}  // namespace tasep
