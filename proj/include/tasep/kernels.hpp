#pragma once

#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "tasep/operators.hpp"
#include "tasep/partitions.hpp"
#include "tasep/poly.hpp"
#include "tasep/tableaux.hpp"

namespace tasep {

// A: geometric pushing, B: Bernoulli blocking, C: geometric blocking, D: Bernoulli pushing.
// CanonicalC: geometric blocking with position-dependent jump law (alpha by position).
// CanonicalB: Bernoulli blocking with position-dependent move probability (beta by position).
enum class CaseId { A, B, C, D, CanonicalC, CanonicalB };
enum class Route { Tableau, Operator, ClosedFormChain };

const char* case_name(CaseId c);
CaseId parse_case(const std::string& s);
const char* route_name(Route r);
Route parse_route(const std::string& s);
inline bool is_geometric(CaseId c) { return c == CaseId::A || c == CaseId::C || c == CaseId::CanonicalC; }
inline bool is_pushing(CaseId c) { return c == CaseId::A || c == CaseId::D; }
inline const std::vector<CaseId>& all_cases() {
    static const std::vector<CaseId> v{CaseId::A, CaseId::B, CaseId::C, CaseId::D, CaseId::CanonicalC, CaseId::CanonicalB};
    return v;
}

template <class R>
R ipow(const R& b, int e) {
    R r(1);
    for (int k = 0; k < e; ++k) r *= b;
    return r;
}

// Parameters of an ell-particle system: x_i per time step, rate_j per particle (pi or rho),
// pos_k per position (alpha for CanonicalC, beta for CanonicalB). Rates vanish beyond ell;
// the position parameter vanishes at k <= 0.
template <class R>
struct Rates {
    int ell = 0;
    IndexFn<R> x;
    IndexFn<R> rate;
    IndexFn<R> pos;

    R xi(int i) const { return x(i); }
    R r(int j) const { return (j < 1 || j > ell) ? R(0) : rate(j); }
    R q(int k) const { return (k <= 0 || !pos) ? R(0) : pos(k); }
};

// Symbolic rates: x_i = X(i), rate_j = P(j), position parameter A(k) or B(k) by case.
Rates<RationalFn> symbolic_rates(CaseId c, int ell);
// Rates read from a binding of the same variables; missing x_i / rate_j throw when used.
Rates<mpq_class> bound_rates(CaseId c, int ell, const ParamBinding& b);
// Binding check per case (geometric: 0 < pi x < 1; Bernoulli: rho x > 0; canonical
// constraints alpha x > -1, alpha + pi >= 0, resp. 0 < beta x < 1, rho + beta >= 0).
// Returns an empty string when admissible, else the violated inequality.
std::string binding_violation(CaseId c, int ell, int n, int pos_max, const ParamBinding& b);

namespace detail {

template <class R>
void check_shapes(const Partition& mu, const Rates<R>& r) {
    if (mu.length() > r.ell) throw std::invalid_argument("initial state has more rows than particles");
}

// Product over cells (row i, col c) of lambda/mu of f(i, c).
template <class R, class F>
R cell_product(const Partition& lam, const Partition& mu, F f) {
    R out(1);
    for (int i = 1; i <= lam.length(); ++i)
        for (int c = mu[i] + 1; c <= lam[i]; ++c) out *= f(i, c);
    return out;
}

}  // namespace detail

// Single time step with parameter x_t, from the particle update rules.
template <class R>
R single_step(CaseId cs, const Partition& mu, const Partition& lam, int t, const Rates<R>& rt) {
    detail::check_shapes(mu, rt);
    if (lam.length() > rt.ell || !contains(lam, mu)) return R(0);
    const int ell = rt.ell;
    const R x = rt.xi(t);
    R p(1);
    switch (cs) {
    case CaseId::A:
        // Particle ell moves first; each is pushed to the new position of the one behind it.
        for (int j = 1; j <= ell; ++j) {
            const int w = lam[j] - std::max(mu[j], lam[j + 1]);
            if (w < 0) return R(0);
            const R px = rt.r(j) * x;
            p *= (R(1) - px) * ipow(px, w);
        }
        return p;
    case CaseId::C:
    case CaseId::CanonicalC:
        // Particle ell moves first; particle j is capped by the old position of particle j-1.
        for (int j = 1; j <= ell; ++j) {
            const int m = mu[j], target = lam[j];
            const bool capped = j > 1;
            const int cap = capped ? mu[j - 1] : 0;
            if (target < m || (capped && target > cap)) return R(0);
            if (capped && m == cap) continue;
            const R pj = rt.r(j);
            R survive(1);
            if (cs == CaseId::C) {
                survive = ipow(R(pj * x), target - m);
                if (!capped || target < cap) survive *= R(1) - pj * x;
            } else {
                for (int k = m; k < target; ++k) survive *= (rt.q(k) + pj) * x / (R(1) + rt.q(k) * x);
                if (!capped || target < cap) survive *= (R(1) - pj * x) / (R(1) + rt.q(target) * x);
            }
            p *= survive;
        }
        return p;
    case CaseId::B:
    case CaseId::CanonicalB:
        // Particle 1 moves first; particle j is blocked when particle j-1 stayed at its position.
        for (int j = 1; j <= ell; ++j) {
            const int d = lam[j] - mu[j];
            if (d > 1) return R(0);
            if (j > 1 && mu[j] == lam[j - 1]) {
                if (d != 0) return R(0);
                continue;
            }
            const R rj = rt.r(j);
            const R b = cs == CaseId::B ? R(0) : rt.q(mu[j]);
            const R denom = R(1) + rj * x;
            p *= d == 1 ? R((rj + b) * x / denom) : R((R(1) - b * x) / denom);
        }
        return p;
    case CaseId::D: {
        // Particle 1 moves first; a jumping particle pushes the unmoved particles sharing its site.
        for (int j = 1; j <= ell; ++j)
            if (lam[j] - mu[j] > 1) return R(0);
        int a = 1;
        while (a <= ell) {
            int b = a;
            while (b + 1 <= ell && mu[b + 1] == mu[a]) ++b;
            int moved = 0;
            while (a + moved <= b && lam[a + moved] == mu[a + moved] + 1) ++moved;
            for (int i = a + moved; i <= b; ++i)
                if (lam[i] != mu[i]) return R(0);
            const int top = a + moved - 1;
            if (moved > 0) {
                const R rx = rt.r(top) * x;
                p *= rx / (R(1) + rx);
            }
            for (int i = std::max(a, top + 1); i <= b; ++i) p *= R(1) / (R(1) + rt.r(i) * x);
            a = b + 1;
        }
        return p;
    }
    }
    return R(0);
}

// n-step kernel by chaining single steps over intermediate states mu <= nu <= lambda.
template <class R>
R kernel_chain(CaseId cs, int n, const Partition& mu, const Partition& lam, const Rates<R>& rt) {
    detail::check_shapes(mu, rt);
    if (lam.length() > rt.ell || !contains(lam, mu)) return R(0);
    if (n == 0) return mu == lam ? R(1) : R(0);
    std::vector<Partition> states;
    for (const auto& nu : partitions_between(mu, lam))
        if (nu.length() <= rt.ell) states.push_back(nu);
    std::map<Partition, R> cur;
    cur.emplace(mu, R(1));
    for (int t = 1; t <= n; ++t) {
        std::map<Partition, R> next;
        for (const auto& nu : states) {
            if (t == n && !(nu == lam)) continue;
            R acc(0);
            for (const auto& [from, pr] : cur)
                if (contains(nu, from)) {
                    const R s = single_step(cs, from, nu, t, rt);
                    if (!is_zero(s)) acc += pr * s;
                }
            if (!is_zero(acc)) next.emplace(nu, acc);
        }
        cur = std::move(next);
    }
    auto it = cur.find(lam);
    return it == cur.end() ? R(0) : it->second;
}

// Tableau generating-function formulas.
template <class R>
R kernel_tableau(CaseId cs, int n, const Partition& mu, const Partition& lam, const Rates<R>& rt,
                 IndexConvention conv = IndexConvention::BetaRowAlphaCol) {
    detail::check_shapes(mu, rt);
    if (lam.length() > rt.ell || !contains(lam, mu)) return R(0);
    if (n == 0) return mu == lam ? R(1) : R(0);
    const int ell = rt.ell;
    TableauParams<R> tp;
    tp.x = rt.x;
    tp.convention = conv;
    auto nonzero = [](const R& v) {
        if (is_zero(v)) throw std::invalid_argument("rate must be nonzero for this route");
        return v;
    };
    R pre(1);
    switch (cs) {
    case CaseId::A: {
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= ell; ++j) pre *= R(1) - rt.r(j) * rt.xi(i);
        pre *= detail::cell_product<R>(lam, mu, [&](int i, int) -> R { return rt.r(i); });
        tp.beta = [&rt, nonzero](int k) -> R { return R(1) / nonzero(rt.r(k)); };
        return pre * gen_g(SkewShape(lam, mu), n, tp);
    }
    case CaseId::C:
    case CaseId::CanonicalC: {
        for (int i = 1; i <= n; ++i) pre *= R(1) - rt.r(1) * rt.xi(i);
        if (cs == CaseId::C) {
            pre *= detail::cell_product<R>(lam, mu, [&](int i, int) -> R { return rt.r(i); });
        } else {
            pre *= detail::cell_product<R>(lam, mu, [&](int i, int c) -> R { return rt.q(c - 1) + rt.r(i); });
            tp.alpha = [&rt](int k) -> R { return rt.q(k); };
        }
        tp.beta = [&rt](int k) -> R { return rt.r(k + 1); };
        return pre * gen_G_doubleslash(lam, mu, n, tp);
    }
    case CaseId::B:
    case CaseId::CanonicalB: {
        for (int i = 1; i <= n; ++i) pre /= R(1) + rt.r(1) * rt.xi(i);
        if (cs == CaseId::B) {
            pre *= detail::cell_product<R>(lam, mu, [&](int i, int) -> R { return rt.r(i); });
        } else {
            pre *= detail::cell_product<R>(lam, mu, [&](int i, int c) -> R { return rt.q(c - 1) + rt.r(i); });
            tp.beta = [&rt](int k) -> R { return rt.q(k); };
        }
        tp.alpha = [&rt](int k) -> R { return rt.r(k + 1); };
        return pre * gen_G_doubleslash(conjugate(lam), conjugate(mu), n, tp);
    }
    case CaseId::D: {
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= ell; ++j) pre /= R(1) + rt.r(j) * rt.xi(i);
        pre *= detail::cell_product<R>(lam, mu, [&](int i, int) -> R { return rt.r(i); });
        tp.alpha = [&rt, nonzero](int k) -> R { return R(1) / nonzero(rt.r(k)); };
        return pre * gen_j(SkewShape(conjugate(lam), conjugate(mu)), n, tp);
    }
    }
    return R(0);
}

// Operator parameters of each case.
template <class R>
OpParams<R> case_op_params(CaseId cs, const Rates<R>& rt) {
    OpParams<R> p;
    switch (cs) {
    case CaseId::A:
    case CaseId::D:
        p.beta = [rt](int k) -> R {
            const R v = rt.r(k);
            if (is_zero(v)) throw std::invalid_argument("rate must be nonzero for this route");
            return R(1) / v;
        };
        break;
    case CaseId::B:
        p.beta = [rt](int k) -> R { return rt.r(k + 1); };
        break;
    case CaseId::C:
        p.beta = [rt](int k) -> R { return rt.r(k + 1); };
        break;
    case CaseId::CanonicalC:
        p.alpha = [rt](int k) -> R { return rt.q(k); };
        p.beta = [rt](int k) -> R { return rt.r(k + 1); };
        break;
    case CaseId::CanonicalB:
        p.alpha = [rt](int k) -> R { return rt.q(k); };
        p.beta = [rt](int k) -> R { return rt.r(k + 1); };
        break;
    }
    return p;
}

// One time step of the transfer operator applied to a vector, truncated inside the target.
template <class R>
PartitionVector<R> transfer_step(CaseId cs, OperatorAlgebra<R>& alg, int ell, const R& x, PartitionVector<R> v) {
    switch (cs) {
    case CaseId::A:
        for (int j = ell; j >= 1; --j) v = alg.u_resolvent(j, x, v);
        return v;
    case CaseId::C:
    case CaseId::CanonicalC:
        for (int j = ell; j >= 1; --j) v = alg.U_resolvent(j, x, v);
        return v;
    case CaseId::B:
    case CaseId::CanonicalB:
        for (int j = 1; j <= ell; ++j) v = alg.bernoulli_factor({OpKind::U, j}, x, v);
        return v;
    case CaseId::D:
        for (int j = 1; j <= ell; ++j) v = alg.bernoulli_factor({OpKind::u, j}, x, v);
        return v;
    }
    return v;
}

// Noncommutative operator dynamics.
template <class R>
R kernel_operator(CaseId cs, int n, const Partition& mu, const Partition& lam, const Rates<R>& rt) {
    detail::check_shapes(mu, rt);
    if (lam.length() > rt.ell || !contains(lam, mu)) return R(0);
    if (n == 0) return mu == lam ? R(1) : R(0);
    const int ell = rt.ell;
    OperatorAlgebra<R> alg(case_op_params(cs, rt), Truncation::inside(lam));
    PartitionVector<R> v(mu);
    R pre(1);
    for (int t = 1; t <= n; ++t) {
        const R x = rt.xi(t);
        v = transfer_step(cs, alg, ell, x, v);
        for (int j = 1; j <= ell; ++j) {
            if (is_geometric(cs)) pre *= R(1) - rt.r(j) * x;
            else pre /= R(1) + rt.r(j) * x;
        }
    }
    switch (cs) {
    case CaseId::CanonicalC:
    case CaseId::CanonicalB:
        pre *= detail::cell_product<R>(lam, mu, [&](int i, int c) -> R { return rt.q(c - 1) + rt.r(i); });
        break;
    default:
        pre *= detail::cell_product<R>(lam, mu, [&](int i, int) -> R { return rt.r(i); });
    }
    return pre * v.coeff(lam);
}

template <class R>
R kernel(CaseId cs, Route route, int n, const Partition& mu, const Partition& lam, const Rates<R>& rt) {
    switch (route) {
    case Route::Tableau: return kernel_tableau(cs, n, mu, lam, rt);
    case Route::Operator: return kernel_operator(cs, n, mu, lam, rt);
    case Route::ClosedFormChain: return kernel_chain(cs, n, mu, lam, rt);
    }
    return R(0);
}

// All reachable states with first row at most cap, with probabilities and the exact missing mass.
template <class R>
struct KernelTable {
    CaseId cs;
    int n = 0;
    Partition mu;
    int ell = 0;
    int cap = 0;
    std::map<Partition, R> prob;
    R tail = R(0);  // 1 - sum of the table
};

enum class Exec { Serial, Parallel };

// The chain route propagates the single-step law forward over the truncation box (mass that
// leaves the box never returns); other routes evaluate each target independently. Parallel
// execution splits target states across threads and only applies to rational values.
template <class R>
KernelTable<R> kernel_table(CaseId cs, int n, const Partition& mu, const Rates<R>& rt, int cap,
                            Route route = Route::ClosedFormChain, Exec exec = Exec::Parallel) {
    detail::check_shapes(mu, rt);
    if (cap < mu[1]) throw std::invalid_argument("cap is smaller than the first part of the initial state");
    KernelTable<R> t{cs, n, mu, rt.ell, cap, {}, R(0)};
    std::vector<Partition> box;
    for (const auto& lam : partitions_in_box(rt.ell, cap))
        if (contains(lam, mu)) box.push_back(lam);
    const long size = static_cast<long>(box.size());
    [[maybe_unused]] const bool par = exec == Exec::Parallel && std::is_same_v<R, mpq_class>;
    std::vector<R> vals(box.size(), R(0));
    if (route == Route::ClosedFormChain) {
        for (long k = 0; k < size; ++k)
            if (box[k] == mu) vals[k] = R(1);
        for (int step = 1; step <= n; ++step) {
            std::vector<R> next(box.size(), R(0));
#pragma omp parallel for schedule(dynamic) if (par)
            for (long k = 0; k < size; ++k) {
                R acc(0);
                for (long s = 0; s < size; ++s) {
                    if (is_zero(vals[s]) || !contains(box[k], box[s])) continue;
                    const R p = single_step(cs, box[s], box[k], step, rt);
                    if (!is_zero(p)) acc += vals[s] * p;
                }
                next[k] = acc;
            }
            vals = std::move(next);
        }
    } else {
#pragma omp parallel for schedule(dynamic) if (par)
        for (long k = 0; k < size; ++k) vals[k] = kernel(cs, route, n, mu, box[k], rt);
    }
    R total(0);
    for (long k = 0; k < size; ++k) {
        if (is_zero(vals[k])) continue;
        total += vals[k];
        t.prob.emplace(box[k], vals[k]);
    }
    t.tail = R(1) - total;
    return t;
}

// Skew Pieri normalisation for the geometric blocking generating function:
// sum_lambda G_{lambda\\mu}(x_n; beta_j = pi_{j+1}) pi^lambda - pi^mu prod_i 1/(1 - pi_1 x_i),
// both sides expanded through pi-degree cap. Returns the residual (zero when the identity holds).
LaurentPoly normalization_residual(const Partition& mu, int n, int cap);

}  // namespace tasep
