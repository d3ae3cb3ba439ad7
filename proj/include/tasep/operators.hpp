#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tasep/partitions.hpp"
#include "tasep/poly.hpp"
#include "tasep/tableaux.hpp"

namespace tasep {

inline nlohmann::json coef_json(const mpq_class& q) { return rational_str(q); }
inline nlohmann::json coef_json(const RationalFn& f) { return f.to_json(); }
inline nlohmann::json coef_json(const LaurentPoly& f) { return f.to_json(); }

// Finite formal combination of partitions; zero coefficients are never stored.
template <class R>
class PartitionVector {
public:
    using Terms = std::map<Partition, R>;

    PartitionVector() = default;
    explicit PartitionVector(const Partition& p, R c = R(1)) { add(p, c); }

    const Terms& terms() const { return t_; }
    bool empty() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    R coeff(const Partition& p) const {
        auto it = t_.find(p);
        return it == t_.end() ? R(0) : it->second;
    }

    void add(const Partition& p, const R& c) {
        if (is_zero(c)) return;
        auto [it, fresh] = t_.emplace(p, c);
        if (fresh) return;
        it->second += c;
        if (is_zero(it->second)) t_.erase(it);
    }

    PartitionVector& operator+=(const PartitionVector& o) {
        for (const auto& [p, c] : o.t_) add(p, c);
        return *this;
    }
    PartitionVector& operator-=(const PartitionVector& o) {
        for (const auto& [p, c] : o.t_) add(p, R(0) - c);
        return *this;
    }
    friend PartitionVector operator+(PartitionVector a, const PartitionVector& b) { return a += b; }
    friend PartitionVector operator-(PartitionVector a, const PartitionVector& b) { return a -= b; }

    PartitionVector scaled(const R& s) const {
        PartitionVector out;
        if (is_zero(s)) return out;
        for (const auto& [p, c] : t_) out.add(p, c * s);
        return out;
    }

    template <class Keep>
    PartitionVector filtered(const Keep& keep) const {
        PartitionVector out;
        for (const auto& [p, c] : t_)
            if (keep(p)) out.t_.emplace(p, c);
        return out;
    }

    bool operator==(const PartitionVector& o) const {
        if (t_.size() != o.t_.size()) return false;
        for (const auto& [p, c] : t_) {
            auto it = o.t_.find(p);
            if (it == o.t_.end() || !(it->second == c)) return false;
        }
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [p, c] : t_) out.push_back({{"lambda", p.parts()}, {"coef", coef_json(c)}});
        return out;
    }

private:
    Terms t_;
};

// Which partitions an operator computation keeps. Every operator only adds boxes, so
// dropping a term that violates the bound never changes a retained coefficient.
struct Truncation {
    int size_cap = -1;                 // keep |lambda| <= size_cap when >= 0
    std::optional<Partition> within;   // keep lambda contained in this partition
    int max_rows = -1;                 // keep length <= max_rows when >= 0

    bool keep(const Partition& p) const {
        if (size_cap >= 0 && p.size() > size_cap) return false;
        if (within && !contains(*within, p)) return false;
        if (max_rows >= 0 && p.length() > max_rows) return false;
        return true;
    }
    bool bounded() const { return size_cap >= 0 || within.has_value(); }

    static Truncation none() { return {}; }
    static Truncation by_size(int cap) { return {cap, std::nullopt, -1}; }
    static Truncation inside(const Partition& target) { return {-1, target, -1}; }
};

enum class OpKind { U, u };

struct OpLetter {
    OpKind kind;
    int row;
    bool operator==(const OpLetter&) const = default;
};

// A word written left to right as in print; the rightmost letter acts first.
using OpWord = std::vector<OpLetter>;

OpWord parse_word(const std::string& text);
std::string word_str(const OpWord& w);

// Parameters of the operator families. A null function means the zero sequence; alpha_0 is always 0.
template <class R>
struct OpParams {
    IndexFn<R> alpha;
    IndexFn<R> beta;
    R a(int k) const { return (k <= 0 || !alpha) ? R(0) : alpha(k); }
    R b(int k) const { return (k <= 0 || !beta) ? R(0) : beta(k); }
};

OpParams<RationalFn> symbolic_op_params(bool alpha_on, bool beta_on);

// Operator algebra with a memo of single-letter images of basis partitions.
template <class R>
class OperatorAlgebra {
public:
    using Vec = PartitionVector<R>;

    OperatorAlgebra(OpParams<R> params, Truncation trunc) : p_(std::move(params)), tr_(std::move(trunc)) {}

    const Truncation& truncation() const { return tr_; }
    const OpParams<R>& params() const { return p_; }

    // U_i lambda = (lambda + e_i) - alpha_{lambda_i} lambda if row i is addable, else beta_{i-1} lambda.
    Vec U_basis(int i, const Partition& lam) {
        if (i < 1) throw std::invalid_argument("operator row index must be positive");
        auto key = std::make_tuple(0, i, lam);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Vec out;
        const bool addable = i == 1 || lam[i] < lam[i - 1];
        if (addable) {
            Partition up;
            add_box(lam, i, up);
            if (tr_.keep(up)) out.add(up, R(1));
            out.add(lam, R(0) - p_.a(lam[i]));
        } else {
            out.add(lam, p_.b(i - 1));
        }
        memo_.emplace(key, out);
        return out;
    }

    Vec u_basis(int j, const Partition& mu) {
        if (j < 1) throw std::invalid_argument("operator row index must be positive");
        if (!tr_.bounded()) throw std::invalid_argument("pushing operators need a size cap or a target bound");
        auto key = std::make_tuple(1, j, mu);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Vec out;
        const auto push = push_closure(mu, j);
        const Partition& nu = push.result;
        if (tr_.keep(nu)) {
            const int k = push.pushed_rows.empty() ? j : push.pushed_rows.front();
            R lead(1);
            for (int a = k; a < j; ++a) lead *= p_.b(a);
            out.add(nu, lead);
            const R am = p_.a(mu[j] + 1);
            if (!is_zero(am)) {
                for (int i = k; i <= j; ++i) {
                    R c = am;
                    for (int a = k; a < i; ++a) c *= am + p_.b(a);
                    for (int a = i; a < j; ++a) c *= p_.b(a);
                    if (is_zero(c)) continue;
                    out += u_basis(i, nu).scaled(c);
                }
            }
        }
        memo_.emplace(key, out);
        return out;
    }

    Vec apply(const OpLetter& l, const Vec& v) { return apply(OpWord{l}, v); }

    // Applies the word right to left. A size cap must leave room for at least one box.
    Vec apply(const OpWord& w, Vec v) {
        if (tr_.size_cap >= 0 && !v.empty()) {
            bool has_u = false;
            for (const auto& l : w) has_u = has_u || l.kind == OpKind::u;
            int lo = v.terms().begin()->first.size();
            for (const auto& [lam, c] : v.terms()) lo = std::min(lo, lam.size());
            if (has_u && tr_.size_cap < lo + 1) throw std::invalid_argument("size cap must be at least |mu| + 1");
        }
        for (auto it = w.rbegin(); it != w.rend(); ++it) v = apply_letter(*it, v);
        return v;
    }

    // (1 - s x U_j)^{-1} v, row j of each basis partition grows until the row above blocks it.
    Vec U_resolvent(int j, const R& x, const Vec& v) {
        Vec out;
        for (const auto& [lam, c] : v.terms()) {
            const int p = lam[j];
            const int cap = j == 1 ? -1 : lam[j - 1];
            R prev(0);
            for (int m = 0;; ++m) {
                const int q = p + m;
                std::vector<int> parts = lam.padded(std::max(j, lam.length()));
                parts[j - 1] = q;
                Partition cur(parts);
                if (!tr_.keep(cur)) break;
                R rhs = x * prev;
                if (m == 0) rhs += R(1);
                const bool blocked = cap >= 0 && q == cap;
                const R denom = blocked ? R(R(1) - p_.b(j - 1) * x) : R(R(1) + p_.a(q) * x);
                const R cm = rhs / denom;
                out.add(cur, cm * c);
                if (blocked) break;
                prev = cm;
                if (cap < 0 && !tr_.bounded()) throw std::invalid_argument("row 1 resolvent needs a bound");
            }
        }
        return out;
    }

    // (1 - x u_j)^{-1} v as a finite sum under the truncation.
    Vec u_resolvent(int j, const R& x, const Vec& v) {
        Vec out = v, cur = v;
        while (!cur.empty()) {
            cur = apply_letter(OpLetter{OpKind::u, j}, cur).scaled(x);
            out += cur;
        }
        return out;
    }

    // (1 + x t_j) v for either family.
    Vec bernoulli_factor(const OpLetter& l, const R& x, const Vec& v) { return v + apply_letter(l, v).scaled(x); }

private:
    Vec apply_letter(const OpLetter& l, const Vec& v) {
        Vec out;
        for (const auto& [lam, c] : v.terms())
            out += (l.kind == OpKind::U ? U_basis(l.row, lam) : u_basis(l.row, lam)).scaled(c);
        return out;
    }

    OpParams<R> p_;
    Truncation tr_;
    std::map<std::tuple<int, int, Partition>, Vec> memo_;
};

// Noncommutative elementary and complete functions in t_1..t_ell. e_k terms apply the smallest
// index first; h_k terms apply the largest index first.
std::vector<OpWord> e_words(OpKind kind, int k, int ell);
std::vector<OpWord> h_words(OpKind kind, int k, int ell);

template <class R>
PartitionVector<R> noncomm_e(OperatorAlgebra<R>& alg, OpKind kind, int k, int ell, const PartitionVector<R>& v) {
    PartitionVector<R> out;
    for (const auto& w : e_words(kind, k, ell)) out += alg.apply(w, v);
    return out;
}

template <class R>
PartitionVector<R> noncomm_h(OperatorAlgebra<R>& alg, OpKind kind, int k, int ell, const PartitionVector<R>& v) {
    PartitionVector<R> out;
    for (const auto& w : h_words(kind, k, ell)) out += alg.apply(w, v);
    return out;
}

// One relation instance: lhs word vs rhs word, each a sum of words.
struct RelationInstance {
    std::string name;
    std::vector<OpWord> lhs;
    std::vector<OpWord> rhs;
};

// Instances of the three Knuth relations with indices in 1..max_index. Strong relations
// drop the i - k >= 2 condition on the first two.
std::vector<RelationInstance> knuth_relations(OpKind kind, int max_index, bool strong);
// t_i t_j = t_j t_i for |i - j| >= 2.
std::vector<RelationInstance> far_commutation(OpKind kind, int max_index);

template <class R>
struct RelationFailure {
    std::string relation;
    Partition start;
    PartitionVector<R> difference;  // lhs - rhs
};

template <class R>
struct RelationReport {
    int instances = 0;
    int checks = 0;
    std::vector<RelationFailure<R>> failures;
    bool holds() const { return failures.empty(); }
};

template <class R>
RelationReport<R> check_relations(OperatorAlgebra<R>& alg, const std::vector<RelationInstance>& rels,
                                  const std::vector<Partition>& starts) {
    RelationReport<R> rep;
    rep.instances = static_cast<int>(rels.size());
    for (const auto& rel : rels)
        for (const auto& s : starts) {
            const PartitionVector<R> v(s);
            PartitionVector<R> diff;
            for (const auto& w : rel.lhs) diff += alg.apply(w, v);
            for (const auto& w : rel.rhs) diff -= alg.apply(w, v);
            ++rep.checks;
            if (!diff.empty()) rep.failures.push_back({rel.name, s, diff});
        }
    return rep;
}

// Weak (or strong) Knuth relations over all starting partitions in a rows x cols box,
// indices 1..rows+1.
template <class R>
RelationReport<R> check_knuth(OperatorAlgebra<R>& alg, OpKind kind, int rows, int cols, bool strong) {
    return check_relations(alg, knuth_relations(kind, rows + 1, strong), partitions_in_box(rows, cols));
}

}  // namespace tasep
