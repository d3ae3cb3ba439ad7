#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tasep/contour.hpp"
#include "tasep/kernels.hpp"

namespace tasep {

// Pushing cases bound particles from above, blocking cases from below.
enum class Direction { AtMost, AtLeast };
inline Direction case_direction(CaseId c) { return is_pushing(c) ? Direction::AtMost : Direction::AtLeast; }
inline const char* direction_name(Direction d) { return d == Direction::AtMost ? "le" : "ge"; }

inline bool is_zero(long double v) { return v == 0; }

template <class R>
using Matrix = std::vector<std::vector<R>>;

// Cofactor expansion; any commutative ring. Intended for small symbolic matrices.
template <class R>
R det_laplace(const Matrix<R>& m) {
    const std::size_t n = m.size();
    if (n == 0) return R(1);
    if (n == 1) return m[0][0];
    R total(0);
    for (std::size_t c = 0; c < n; ++c) {
        if (is_zero(m[0][c])) continue;
        Matrix<R> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<R> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(m[r][k]);
            minor.push_back(std::move(row));
        }
        const R term = m[0][c] * det_laplace(minor);
        if (c % 2) total -= term;
        else total += term;
    }
    return total;
}

// Gaussian elimination over a field; partial pivoting by magnitude for floating values.
template <class R>
R det_gauss(Matrix<R> m) {
    const std::size_t n = m.size();
    R det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        if constexpr (std::is_floating_point_v<R>) {
            for (std::size_t r = c + 1; r < n; ++r)
                if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
        } else {
            while (piv < n && is_zero(m[piv][c])) ++piv;
        }
        if (piv == n || is_zero(m[piv][c])) return R(0);
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = R(0) - det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (is_zero(m[r][c])) continue;
            const R f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

template <class R>
R det_auto(const Matrix<R>& m) {
    if constexpr (std::is_same_v<R, mpq_class> || std::is_floating_point_v<R>) return det_gauss(m);
    else return det_laplace(m);
}

inline mpq_class invert(const mpq_class& v) {
    if (sgn(v) == 0) throw PoleError("inverse of a zero rate");
    return 1 / v;
}
inline long double invert(long double v) {
    if (v == 0) throw PoleError("inverse of a zero rate");
    return 1 / v;
}
inline LaurentPoly invert(const LaurentPoly& v) {
    auto m = v.single_monomial();
    if (!m) throw std::invalid_argument("only monomials are invertible as Laurent polynomials");
    return LaurentPoly::monomial(m->inverse(), 1 / v.terms().begin()->second);
}
inline RationalFn invert(const RationalFn& v) {
    if (v.is_polynomial() && v.numerator().single_monomial()) return RationalFn(invert(v.numerator()));
    return RationalFn(1) / v;
}

// Rates converted to long double.
inline Rates<long double> to_float(const Rates<mpq_class>& rt) {
    Rates<long double> f;
    f.ell = rt.ell;
    f.x = [rt](int i) -> long double { return rt.xi(i).get_d(); };
    f.rate = [rt](int j) -> long double { return rt.r(j).get_d(); };
    if (rt.pos) f.pos = [rt](int k) -> long double { return rt.q(k).get_d(); };
    return f;
}

// ---------------------------------------------------------------------------------------------
// Pushing cases: P(G(j,n) <= lam_j for all j | G(0) = nu).

// Entry (i, j): A uses h_m(x + {1/pi_1..1/pi_i} / {1/pi_1..1/pi_{j-1}}),
// D uses e_m(x + {-1/rho_1..-1/rho_{j-1}} / {-1/rho_1..-1/rho_i}), with m = lam_i - nu_j + j - i.
template <class R>
Matrix<R> pushing_matrix(CaseId cs, int n, const Partition& lam, const Partition& nu, const Rates<R>& rt) {
    const int ell = rt.ell;
    std::vector<R> xs;
    for (int i = 1; i <= n; ++i) xs.push_back(rt.xi(i));
    std::vector<R> inv(ell + 1, R(0));
    for (int k = 1; k <= ell; ++k) inv[k] = cs == CaseId::A ? invert(rt.r(k)) : R(0) - invert(rt.r(k));
    Matrix<R> m(ell, std::vector<R>(ell, R(0)));
    for (int i = 1; i <= ell; ++i)
        for (int j = 1; j <= ell; ++j) {
            const int deg = lam[i] - nu[j] + j - i;
            std::vector<R> upto_i(inv.begin() + 1, inv.begin() + 1 + i);
            std::vector<R> upto_j(inv.begin() + 1, inv.begin() + j);
            if (cs == CaseId::A) {
                std::vector<R> top = xs;
                top.insert(top.end(), upto_i.begin(), upto_i.end());
                m[i - 1][j - 1] = supersym_h(deg, top, upto_j);
            } else {
                std::vector<R> top = xs;
                top.insert(top.end(), upto_j.begin(), upto_j.end());
                m[i - 1][j - 1] = supersym_e(deg, top, upto_i);
            }
        }
    return m;
}

template <class R>
R pushing_prefactor(CaseId cs, int n, const Partition& lam, const Partition& nu, const Rates<R>& rt) {
    R pre(1);
    for (int i = 1; i <= rt.ell; ++i) {
        const R r = rt.r(i);
        for (int m = 1; m <= n; ++m) {
            if (cs == CaseId::A) pre *= R(1) - r * rt.xi(m);
            else pre /= R(1) + r * rt.xi(m);
        }
        const int d = lam[i] - nu[i];
        pre *= d >= 0 ? ipow(r, d) : ipow(invert(r), -d);
    }
    return pre;
}

template <class R>
R mp_pushing(CaseId cs, int n, const Partition& lam, const Partition& nu, const Rates<R>& rt) {
    if (cs != CaseId::A && cs != CaseId::D) throw std::invalid_argument("pushing multi-point formula needs case A or D");
    if (lam.length() > rt.ell || nu.length() > rt.ell) throw std::invalid_argument("more rows than particles");
    if (!contains(lam, nu)) return R(0);
    return pushing_prefactor(cs, n, lam, nu, rt) * det_auto(pushing_matrix(cs, n, lam, nu, rt));
}

// ---------------------------------------------------------------------------------------------
// Contour integrands for the blocking cases and for single-time kernels.

enum class TimeFactor { Geometric, Bernoulli, Exponential };

// Entry (i, j) integrand with top = lam_i (or threshold nu_i) and bottom = mu_j:
//   T(w) * prod_num (1 - b_k / w) / prod_{k<j} (1 - b_k / w) * window * w^{-(top - bottom - i + j)} / w
// with b_k the blocking parameter (rate_{k+1}); prod_num is over k < i for kernels, and for
// multi-point rows over k <= i - 2 with row 1 replaced by 1 / (1 - rate_1 / w).
// The canonical window carries prod_{k=bottom}^{top-1} 1 / (1 + alpha_k / w), through k = top
// for kernels.
template <class R>
Integrand<R> blocking_entry(CaseId cs, TimeFactor tf, bool multipoint, int i, int j, int top, int bottom,
                            int n, long double t, const Rates<R>& rt) {
    Integrand<R> f;
    auto b = [&](int k) { return rt.r(k + 1); };
    f.power(-(top - bottom - i + j) - 1);
    switch (tf) {
    case TimeFactor::Geometric:
        for (int m = 1; m <= n; ++m) f.outer(R(0) - rt.xi(m), -1);
        break;
    case TimeFactor::Bernoulli:
        for (int m = 1; m <= n; ++m) f.outer(rt.xi(m), 1);
        break;
    case TimeFactor::Exponential:
        f.has_exp = true;
        f.t = t;
        break;
    }
    if (multipoint) {
        if (i == 1) f.inner(rt.r(1), -1);
        else
            for (int k = 1; k <= i - 2; ++k) f.inner(b(k), 1);
    } else {
        for (int k = 1; k <= i - 1; ++k) f.inner(b(k), 1);
    }
    for (int k = 1; k <= j - 1; ++k) f.inner(b(k), -1);
    if (cs == CaseId::CanonicalC) {
        // Kernels also carry the stopping factor at the landing site.
        const int last = multipoint ? top - 1 : top;
        for (int k = bottom; k <= last; ++k) f.inner(R(0) - rt.q(k), -1);
        for (int k = last + 1; k <= bottom - 1; ++k) f.inner(R(0) - rt.q(k), 1);
    }
    return f;
}

// Row factor of the blocking prefactors: rate_i^{top - bottom}, or for the canonical case the
// product over positions c in (bottom, top] of (alpha_{c-1} + pi_i) (inverted when top < bottom).
template <class R>
R blocking_cell_factor(CaseId cs, int i, int top, int bottom, const Rates<R>& rt) {
    R f(1);
    if (cs == CaseId::CanonicalC) {
        for (int c = bottom + 1; c <= top; ++c) f *= rt.q(c - 1) + rt.r(i);
        for (int c = top + 1; c <= bottom; ++c) f *= invert(R(rt.q(c - 1) + rt.r(i)));
    } else {
        const int d = top - bottom;
        f = d >= 0 ? ipow(rt.r(i), d) : ipow(invert(rt.r(i)), -d);
    }
    return f;
}

template <class R>
R blocking_prefactor(CaseId cs, int n, const std::vector<int>& top, const std::vector<int>& bottom, const Rates<R>& rt) {
    R pre(1);
    for (int i = 1; i <= rt.ell; ++i) {
        for (int m = 1; m <= n; ++m) {
            if (cs == CaseId::B) pre /= R(1) + rt.r(i) * rt.xi(m);
            else pre *= R(1) - rt.r(i) * rt.xi(m);
        }
        pre *= blocking_cell_factor(cs, i, top[i - 1], bottom[i - 1], rt);
    }
    return pre;
}

namespace detail {

inline void check_blocking_case(CaseId cs) {
    if (cs != CaseId::B && cs != CaseId::C && cs != CaseId::CanonicalC)
        throw std::invalid_argument("blocking multi-point formula needs case B, C or canonical-C");
}

template <class R>
Matrix<Integrand<R>> blocking_integrands(CaseId cs, int n, const std::vector<int>& top, const std::vector<int>& bottom,
                                         const Rates<R>& rt, bool multipoint) {
    const int ell = rt.ell;
    const TimeFactor tf = cs == CaseId::B ? TimeFactor::Bernoulli : TimeFactor::Geometric;
    Matrix<Integrand<R>> m(ell, std::vector<Integrand<R>>(ell));
    for (int i = 1; i <= ell; ++i)
        for (int j = 1; j <= ell; ++j)
            m[i - 1][j - 1] = blocking_entry(cs, tf, multipoint, i, j, top[i - 1], bottom[j - 1], n, 0.0L, rt);
    return m;
}

}  // namespace detail

// P(G(j,n) >= nu_j for all j | G(0) = mu) for B, C and canonical-C, with entries evaluated as
// exact residue sums at 0 and at the blocking parameters.
template <class R>
R mp_blocking(CaseId cs, int n, const Partition& nu, const Partition& mu, const Rates<R>& rt) {
    detail::check_blocking_case(cs);
    if (nu.length() > rt.ell || mu.length() > rt.ell) throw std::invalid_argument("more rows than particles");
    auto top = nu.padded(rt.ell);
    const auto bottom = mu.padded(rt.ell);
    // Thresholds below the start are always met; the canonical cell factors cannot be inverted
    // when alpha_k + pi_i = 0, so raise them to the start there.
    if (cs == CaseId::CanonicalC)
        for (int i = 0; i < rt.ell; ++i) top[i] = std::max(top[i], bottom[i]);
    auto ints = detail::blocking_integrands(cs, n, top, bottom, rt, true);
    Matrix<R> m(rt.ell, std::vector<R>(rt.ell));
    for (int i = 0; i < rt.ell; ++i)
        for (int j = 0; j < rt.ell; ++j) m[i][j] = residue_sum(ints[i][j]);
    return blocking_prefactor(cs, n, top, bottom, rt) * det_auto(m);
}

struct FloatValue {
    long double value;
    long double error;  // estimate: worst entry refinement change
    int resolution;     // series truncation or quadrature points used
};

// Same entries evaluated as truncated annulus series (a difference-indexed convolution).
inline FloatValue mp_blocking_series(CaseId cs, int n, const Partition& nu, const Partition& mu, const Rates<mpq_class>& rt,
                                     int trunc = 400) {
    detail::check_blocking_case(cs);
    const auto fr = to_float(rt);
    const auto top = nu.padded(rt.ell), bottom = mu.padded(rt.ell);
    auto ints = detail::blocking_integrands(cs, n, top, bottom, fr, true);
    Matrix<long double> m(rt.ell, std::vector<long double>(rt.ell));
    long double err = 0;
    for (int i = 0; i < rt.ell; ++i)
        for (int j = 0; j < rt.ell; ++j) {
            auto s = annulus_series(ints[i][j], trunc);
            m[i][j] = s.value;
            err = std::max(err, s.change);
        }
    return {blocking_prefactor(cs, n, top, bottom, fr) * det_gauss(m), err, trunc};
}

// Radius halfway between the largest inner root and the smallest outer root.
template <class R>
long double default_radius(const Matrix<Integrand<R>>& ints) {
    long double in = 0, out = std::numeric_limits<long double>::infinity();
    for (const auto& row : ints)
        for (const auto& f : row)
            for (const auto& fa : f.factors) {
                if (fa.k >= 0) continue;
                const long double root = std::fabs(detail::to_ld(R(0) - fa.a) / detail::to_ld(fa.b));
                if (fa.inside) in = std::max(in, root);
                else out = std::min(out, root);
            }
    if (!(in < out)) throw ContourError("no circle separates the inner and outer poles");
    if (std::isinf(out)) return in + 1;
    return (in + out) / 2;
}

inline FloatValue mp_blocking_quadrature(CaseId cs, int n, const Partition& nu, const Partition& mu, const Rates<mpq_class>& rt,
                                         std::optional<ContourSpec> spec = std::nullopt) {
    detail::check_blocking_case(cs);
    const auto fr = to_float(rt);
    const auto top = nu.padded(rt.ell), bottom = mu.padded(rt.ell);
    auto ints = detail::blocking_integrands(cs, n, top, bottom, fr, true);
    ContourSpec c = spec ? *spec : ContourSpec{default_radius(ints), 256};
    Matrix<long double> m(rt.ell, std::vector<long double>(rt.ell));
    long double err = 0;
    int pts = 0;
    for (int i = 0; i < rt.ell; ++i)
        for (int j = 0; j < rt.ell; ++j) {
            auto q = quadrature(ints[i][j], c);
            m[i][j] = q.value;
            err = std::max(err, q.change);
            pts = std::max(pts, q.points);
        }
    return {blocking_prefactor(cs, n, top, bottom, fr) * det_gauss(m), err, pts};
}

// Single-time kernel as a determinant of contour integrals (C and canonical-C: residues at 0 and
// the blocking parameters; A: coefficient extraction at 0). Exact at rational bindings.
template <class R>
R kernel_determinant(CaseId cs, int n, const Partition& mu, const Partition& lam, const Rates<R>& rt) {
    if (lam.length() > rt.ell || mu.length() > rt.ell) throw std::invalid_argument("more rows than particles");
    if (!contains(lam, mu)) return R(0);
    const auto top = lam.padded(rt.ell), bottom = mu.padded(rt.ell);
    const int ell = rt.ell;
    Matrix<R> m(ell, std::vector<R>(ell));
    R pre(1);
    if (cs == CaseId::A) {
        for (int i = 1; i <= ell; ++i)
            for (int j = 1; j <= ell; ++j) {
                Integrand<R> f;
                f.power(-(top[i - 1] - bottom[j - 1] - i + j) - 1);
                for (int q = 1; q <= n; ++q) f.outer(R(0) - rt.xi(q), -1);
                for (int k = 1; k <= j - 1; ++k) f.outer(R(0) - invert(rt.r(k)), 1);
                for (int k = 1; k <= i - 1; ++k) f.outer(R(0) - invert(rt.r(k)), -1);
                m[i - 1][j - 1] = residue_sum(f);
            }
        pre = pushing_prefactor(cs, n, lam, mu, rt);
    } else if (cs == CaseId::C || cs == CaseId::CanonicalC) {
        for (int i = 1; i <= ell; ++i)
            for (int j = 1; j <= ell; ++j)
                m[i - 1][j - 1] = residue_sum(
                    blocking_entry(cs, TimeFactor::Geometric, false, i, j, top[i - 1], bottom[j - 1], n, 0.0L, rt));
        pre = blocking_prefactor(cs, n, top, bottom, rt);
    } else {
        throw std::invalid_argument("determinant kernel needs case A, C or canonical-C");
    }
    return pre * det_auto(m);
}

// ---------------------------------------------------------------------------------------------
// Brute-force event sums from exact kernels.

template <class R>
struct EventSum {
    R value;
    R tail;  // mass outside the truncation box; the event probability lies in [value, value + tail]
};

// Mass of the states componentwise at least the thresholds in a truncated kernel table.
inline EventSum<mpq_class> event_sum_at_least(const KernelTable<mpq_class>& table, const Partition& thresholds) {
    mpq_class s = 0;
    for (const auto& [k, p] : table.prob) {
        bool in = true;
        for (int i = 1; i <= thresholds.length(); ++i) in = in && k[i] >= thresholds[i];
        if (in) s += p;
    }
    return {s, table.tail};
}

inline EventSum<mpq_class> mp_bruteforce(CaseId cs, int n, const Partition& thresholds, const Partition& start,
                                         const Rates<mpq_class>& rt, int cap) {
    if (case_direction(cs) == Direction::AtMost) {
        mpq_class s = 0;
        if (contains(thresholds, start))
            for (const auto& k : partitions_between(start, thresholds))
                if (k.length() <= rt.ell) s += kernel_chain(cs, n, start, k, rt);
        return {s, 0};
    }
    return event_sum_at_least(kernel_table(cs, n, start, rt, cap), thresholds);
}

// ---------------------------------------------------------------------------------------------
// Continuous time (cases A and C), positions given as integer vectors of length ell.

enum class ContinuousMode { Residue, Quadrature };

namespace detail {

inline Integrand<long double> continuous_entry(CaseId cs, long double t, int i, int j, int top, int bottom,
                                               const std::vector<long double>& pi) {
    const int ell = static_cast<int>(pi.size());
    Rates<long double> rt;
    rt.ell = ell;
    rt.x = [](int) -> long double { return 0; };
    rt.rate = [pi](int k) -> long double { return pi[k - 1]; };
    if (cs == CaseId::C) return blocking_entry(cs, TimeFactor::Exponential, false, i, j, top, bottom, 0, t, rt);
    Integrand<long double> f;
    f.has_exp = true;
    f.t = t;
    f.power(-(top - bottom - i + j) - 1);
    for (int k = 1; k <= j - 1; ++k) f.outer(-1 / pi[k - 1], 1);
    for (int k = 1; k <= i - 1; ++k) f.outer(-1 / pi[k - 1], -1);
    return f;
}

inline long double evaluate(const Integrand<long double>& f, ContinuousMode mode) {
    if (mode == ContinuousMode::Residue) return residue_sum(f);
    Matrix<Integrand<long double>> one{{f}};
    return quadrature(f, ContourSpec{default_radius(one), 256}).value;
}

inline std::vector<long double> continuous_row(CaseId cs, long double t, int i, int top, const std::vector<int>& mu,
                                               const std::vector<long double>& pi, ContinuousMode mode) {
    std::vector<long double> row;
    for (int j = 1; j <= static_cast<int>(pi.size()); ++j)
        row.push_back(evaluate(continuous_entry(cs, t, i, j, top, mu[j - 1], pi), mode));
    return row;
}

inline long double continuous_prefactor(long double t, const std::vector<int>& mu, const std::vector<int>& lam,
                                        const std::vector<long double>& pi) {
    long double pre = 1;
    for (std::size_t k = 0; k < pi.size(); ++k) pre *= std::exp(-pi[k] * t) * std::pow(pi[k], lam[k] - mu[k]);
    return pre;
}

inline void check_continuous(CaseId cs, long double t, const std::vector<int>& mu, const std::vector<int>& lam,
                             const std::vector<long double>& pi) {
    if (cs != CaseId::A && cs != CaseId::C) throw std::invalid_argument("continuous kernel needs case A or C");
    if (!(t > 0)) throw std::invalid_argument("time must be positive");
    if (mu.size() != pi.size() || lam.size() != pi.size()) throw std::invalid_argument("positions must list every particle");
    for (long double p : pi)
        if (!(p > 0)) throw std::invalid_argument("rates must be positive");
}

}  // namespace detail

// Determinant formula for the continuous-time kernel; lam need not be a partition (the
// formula's extension is what the master equation and boundary conditions are stated for).
inline long double continuous_kernel(CaseId cs, long double t, const std::vector<int>& mu, const std::vector<int>& lam,
                                     const std::vector<long double>& pi, ContinuousMode mode = ContinuousMode::Residue) {
    detail::check_continuous(cs, t, mu, lam, pi);
    Matrix<long double> m;
    for (int i = 1; i <= static_cast<int>(pi.size()); ++i) m.push_back(detail::continuous_row(cs, t, i, lam[i - 1], mu, pi, mode));
    return detail::continuous_prefactor(t, mu, lam, pi) * det_gauss(m);
}

// dP/dt by central differences minus the right-hand side
// -sum_s pi_s P(lam) + sum_s pi_s P(lam - e_s).
inline long double master_equation_residual(CaseId cs, long double t, const std::vector<int>& mu, const std::vector<int>& lam,
                                            const std::vector<long double>& pi, long double h) {
    const long double deriv =
        (continuous_kernel(cs, t + h, mu, lam, pi) - continuous_kernel(cs, t - h, mu, lam, pi)) / (2 * h);
    long double rhs = 0;
    const long double p = continuous_kernel(cs, t, mu, lam, pi);
    for (std::size_t s = 0; s < pi.size(); ++s) {
        auto down = lam;
        --down[s];
        rhs += pi[s] * (continuous_kernel(cs, t, mu, down, pi) - p);
    }
    return deriv - rhs;
}

// Boundary conditions at lam_s = lam_{s+1} (s is 1-based), written as one determinant:
//   C: pi_s P(lam - e_s) - pi_{s+1} P(lam),   A: pi_s P(lam + e_{s+1}) - pi_{s+1} P(lam).
inline long double boundary_residual(CaseId cs, long double t, const std::vector<int>& mu, const std::vector<int>& lam, int s,
                                     const std::vector<long double>& pi) {
    detail::check_continuous(cs, t, mu, lam, pi);
    const int ell = static_cast<int>(pi.size());
    if (s < 1 || s >= ell || lam[s - 1] != lam[s]) throw std::invalid_argument("boundary condition needs lam_s = lam_{s+1}");
    Matrix<long double> m;
    for (int i = 1; i <= ell; ++i) m.push_back(detail::continuous_row(cs, t, i, lam[i - 1], mu, pi, ContinuousMode::Residue));
    long double scale = detail::continuous_prefactor(t, mu, lam, pi);
    const int r = cs == CaseId::C ? s : s + 1;  // row being combined
    const auto shifted = detail::continuous_row(cs, t, r, lam[r - 1] + (cs == CaseId::C ? -1 : 1), mu, pi, ContinuousMode::Residue);
    for (int j = 0; j < ell; ++j) {
        if (cs == CaseId::C) m[r - 1][j] = shifted[j] - pi[s] * m[r - 1][j];
        else m[r - 1][j] = pi[s - 1] * shifted[j] - m[r - 1][j];
    }
    if (cs == CaseId::A) scale *= pi[s];
    return scale * det_gauss(m);
}

}  // namespace tasep
