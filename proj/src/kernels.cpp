#include "tasep/kernels.hpp"

#include <stdexcept>

namespace tasep {

const char* case_name(CaseId c) {
    switch (c) {
    case CaseId::A: return "A";
    case CaseId::B: return "B";
    case CaseId::C: return "C";
    case CaseId::D: return "D";
    case CaseId::CanonicalC: return "canonical-C";
    case CaseId::CanonicalB: return "canonical-B";
    }
    return "?";
}

CaseId parse_case(const std::string& s) {
    for (CaseId c : all_cases())
        if (s == case_name(c)) return c;
    if (s == "CanonicalC" || s == "canonicalC") return CaseId::CanonicalC;
    if (s == "CanonicalB" || s == "canonicalB") return CaseId::CanonicalB;
    throw std::invalid_argument("unknown case '" + s + "' (expected A, B, C, D, canonical-C, canonical-B)");
}

const char* route_name(Route r) {
    switch (r) {
    case Route::Tableau: return "tableau";
    case Route::Operator: return "operator";
    case Route::ClosedFormChain: return "chain";
    }
    return "?";
}

Route parse_route(const std::string& s) {
    for (Route r : {Route::Tableau, Route::Operator, Route::ClosedFormChain})
        if (s == route_name(r)) return r;
    throw std::invalid_argument("unknown route '" + s + "' (expected tableau, operator, chain)");
}

Rates<RationalFn> symbolic_rates(CaseId c, int ell) {
    Rates<RationalFn> r;
    r.ell = ell;
    r.x = [](int i) { return RationalFn::var(X(i)); };
    r.rate = [](int j) { return RationalFn::var(P(j)); };
    if (c == CaseId::CanonicalC) r.pos = [](int k) { return RationalFn::var(A(k)); };
    if (c == CaseId::CanonicalB) r.pos = [](int k) { return RationalFn::var(B(k)); };
    return r;
}

namespace {

mpq_class lookup(const ParamBinding& b, Var v, bool required) {
    auto it = b.find(v);
    if (it != b.end()) return it->second;
    if (required) throw std::invalid_argument("binding has no value for " + v.name());
    return 0;
}

}  // namespace

Rates<mpq_class> bound_rates(CaseId c, int ell, const ParamBinding& b) {
    Rates<mpq_class> r;
    r.ell = ell;
    r.x = [b](int i) { return lookup(b, X(i), true); };
    r.rate = [b](int j) { return lookup(b, P(j), true); };
    if (c == CaseId::CanonicalC) r.pos = [b](int k) { return lookup(b, A(k), false); };
    if (c == CaseId::CanonicalB) r.pos = [b](int k) { return lookup(b, B(k), false); };
    return r;
}

std::string binding_violation(CaseId c, int ell, int n, int pos_max, const ParamBinding& b) {
    auto get = [&](Var v) -> std::optional<mpq_class> {
        auto it = b.find(v);
        if (it == b.end()) return std::nullopt;
        return it->second;
    };
    for (int i = 1; i <= n; ++i) {
        auto x = get(X(i));
        if (!x) return "missing x_" + std::to_string(i);
        for (int j = 1; j <= ell; ++j) {
            auto r = get(P(j));
            if (!r) return "missing rate_" + std::to_string(j);
            const mpq_class rx = *r * *x;
            const std::string tag = "_" + std::to_string(j) + " x_" + std::to_string(i);
            if (c == CaseId::A || c == CaseId::C || c == CaseId::CanonicalC) {
                if (!(rx > 0 && rx < 1)) return "0 < pi" + tag + " < 1";
            } else if (c == CaseId::CanonicalB) {
                if (!(rx > -1)) return "rho" + tag + " > -1";
            } else if (!(rx > 0)) {
                return "rho" + tag + " > 0";
            }
            for (int k = 1; k <= pos_max; ++k) {
                const std::string kt = "_" + std::to_string(k);
                if (c == CaseId::CanonicalC) {
                    const mpq_class a = get(A(k)).value_or(0);
                    if (!(a * *x > -1)) return "alpha" + kt + " x_" + std::to_string(i) + " > -1";
                    if (!(a + *r >= 0)) return "alpha" + kt + " + pi_" + std::to_string(j) + " >= 0";
                } else if (c == CaseId::CanonicalB) {
                    const mpq_class be = get(B(k)).value_or(0);
                    if (!(be * *x >= 0 && be * *x < 1)) return "0 <= beta" + kt + " x_" + std::to_string(i) + " < 1";
                    if (!(be + *r >= 0)) return "rho_" + std::to_string(j) + " + beta" + kt + " >= 0";
                }
            }
        }
    }
    return {};
}

LaurentPoly normalization_residual(const Partition& mu, int n, int cap) {
    TableauParams<RationalFn> tp;
    tp.x = [](int i) { return RationalFn::var(X(i)); };
    tp.beta = [](int k) { return RationalFn::var(P(k + 1)); };
    auto pi_pow = [](const Partition& p) {
        LaurentPoly m(1);
        for (int i = 1; i <= p.length(); ++i) m *= LaurentPoly::var(P(i), p[i]);
        return m;
    };
    LaurentPoly lhs;
    for (const auto& lam : partitions_in_box(cap, cap)) {
        if (lam.size() > cap || !contains(lam, mu)) continue;
        const RationalFn g = gen_G_doubleslash(lam, mu, n, tp).simplified();
        if (!g.is_polynomial()) throw std::logic_error("expected a polynomial generating function");
        lhs += g.numerator() * pi_pow(lam);
    }
    std::vector<LaurentPoly> xs;
    for (int i = 1; i <= n; ++i) xs.push_back(LaurentPoly::var(X(i)));
    const auto h = complete_table(xs, std::max(0, cap - mu.size()));
    LaurentPoly rhs;
    for (int k = 0; k + mu.size() <= cap; ++k) rhs += h[k] * LaurentPoly::var(P(1), k);
    rhs *= pi_pow(mu);
    return (lhs - rhs).truncated(Family::P, cap);
}

}  // namespace tasep
