#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tasep/partitions.hpp"

namespace tasep {

// Parameter families: x_i (time), p_j (rates pi_j or rho_j), a_k (alpha), b_j (beta).
enum class Family : std::uint8_t { X = 0, P = 1, A = 2, B = 3 };

struct Var {
    Family family;
    int index;
    std::uint32_t key() const { return (static_cast<std::uint32_t>(family) << 24) | static_cast<std::uint32_t>(index); }
    static Var from_key(std::uint32_t k) { return {static_cast<Family>(k >> 24), static_cast<int>(k & 0xffffff)}; }
    bool operator==(const Var& o) const { return key() == o.key(); }
    bool operator<(const Var& o) const { return key() < o.key(); }
    std::string name() const;
};

inline Var X(int i) { return {Family::X, i}; }
inline Var P(int i) { return {Family::P, i}; }
inline Var A(int i) { return {Family::A, i}; }
inline Var B(int i) { return {Family::B, i}; }

// Sparse exponent vector sorted by variable key; exponents may be negative.
class Monomial {
public:
    Monomial() = default;
    static Monomial of(Var v, int exp = 1);

    const std::vector<std::pair<std::uint32_t, int>>& exps() const { return e_; }
    int exponent(Var v) const;
    int degree_in(Family f) const;
    bool is_one() const { return e_.empty(); }
    bool has_negative() const;

    Monomial operator*(const Monomial& o) const;
    Monomial inverse() const;
    Monomial pow(int k) const;
    // Monomial restricted to / with removed variables of one family.
    Monomial only(Family f) const;
    Monomial without(Family f) const;
    Monomial substituted(Var a, Var b) const;

    // Lexicographic monomial order on exponent vectors, smaller keys most significant.
    // Compatible with multiplication, so leading-term division is well defined.
    std::strong_ordering operator<=>(const Monomial& o) const;
    bool operator==(const Monomial&) const = default;
    // Order of the sparse (key, exponent) lists; used for canonical JSON output.
    bool serial_less(const Monomial& o) const { return e_ < o.e_; }

    std::string str() const;

private:
    std::vector<std::pair<std::uint32_t, int>> e_;
};

// Sparse multivariate Laurent polynomial with exact rational coefficients.
class LaurentPoly {
public:
    using Terms = std::map<Monomial, mpq_class>;

    LaurentPoly() = default;
    LaurentPoly(long c);
    LaurentPoly(const mpq_class& c);
    static LaurentPoly var(Var v, int exp = 1);
    static LaurentPoly monomial(const Monomial& m, const mpq_class& c);

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    std::optional<Monomial> single_monomial() const;
    mpq_class constant_term() const;
    int total_degree_in(Family f) const;

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    LaurentPoly operator-() const;
    LaurentPoly pow(int k) const;
    LaurentPoly scaled(const mpq_class& c, const Monomial& m) const;

    bool operator==(const LaurentPoly& o) const { return t_ == o.t_; }
    bool operator<(const LaurentPoly& o) const;

    // Terms whose exponent of family f has total degree at most d.
    LaurentPoly truncated(Family f, int d) const;
    // Exact quotient if f divides *this, found by leading-term division.
    std::optional<LaurentPoly> divide_exact(const LaurentPoly& f) const;
    // Substitution of variable v by a value: exact, v may appear with negative exponent only if value is nonzero.
    LaurentPoly substitute(Var v, const LaurentPoly& value) const;
    LaurentPoly rename(Var from, Var to) const;

    std::string str() const;
    nlohmann::json to_json() const;

private:
    void add_term(const Monomial& m, const mpq_class& c);
    Terms t_;
};

// Quotient of a Laurent polynomial by a product of stored polynomial factors.
// Factors are normalised so their smallest term is exactly 1; denominators are never expanded
// except to form common multiples. Equality is by cross-multiplication.
class RationalFn {
public:
    using Factor = std::pair<LaurentPoly, int>;

    RationalFn() = default;
    RationalFn(long c) : num_(c) {}
    RationalFn(const mpq_class& c) : num_(c) {}
    RationalFn(const LaurentPoly& p) : num_(p) {}
    static RationalFn var(Var v, int exp = 1) { return RationalFn(LaurentPoly::var(v, exp)); }

    const LaurentPoly& numerator() const { return num_; }
    const std::vector<Factor>& denominator() const { return den_; }
    LaurentPoly expanded_denominator() const;
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }

    RationalFn& operator+=(const RationalFn& o);
    RationalFn& operator-=(const RationalFn& o);
    RationalFn& operator*=(const RationalFn& o);
    RationalFn& operator/=(const RationalFn& o);
    friend RationalFn operator+(RationalFn a, const RationalFn& b) { return a += b; }
    friend RationalFn operator-(RationalFn a, const RationalFn& b) { return a -= b; }
    friend RationalFn operator*(RationalFn a, const RationalFn& b) { return a *= b; }
    friend RationalFn operator/(RationalFn a, const RationalFn& b) { return a /= b; }
    RationalFn operator-() const;

    bool operator==(const RationalFn& o) const;
    bool operator!=(const RationalFn& o) const { return !(*this == o); }

    // Cancels denominator factors that divide the numerator.
    RationalFn simplified() const;
    RationalFn substitute(Var v, const RationalFn& value) const;

    std::string str() const;
    nlohmann::json to_json() const;

private:
    void divide_by_poly(const LaurentPoly& p, int mult);
    LaurentPoly num_;
    std::vector<Factor> den_;
};

inline bool is_zero(const mpq_class& q) { return sgn(q) == 0; }
inline bool is_zero(const RationalFn& r) { return r.is_zero(); }
inline bool is_zero(const LaurentPoly& p) { return p.is_zero(); }

// Exact assignment of parameter variables.
using ParamBinding = std::map<Var, mpq_class>;

struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

mpq_class eval(const LaurentPoly& p, const ParamBinding& b);
// Throws PoleError naming the vanishing factor.
mpq_class eval(const RationalFn& f, const ParamBinding& b);
// Non-authoritative float evaluation.
double eval_double(const RationalFn& f, const std::map<Var, double>& b);

// Complete and elementary symmetric functions of a list of ring values.
template <class R>
std::vector<R> complete_table(const std::vector<R>& xs, int m);
template <class R>
std::vector<R> elementary_table(const std::vector<R>& xs, int m);

// h_m(xs/ys) = sum_k (-1)^{m-k} h_k(xs) e_{m-k}(ys); zero for m < 0.
template <class R>
R supersym_h(int m, const std::vector<R>& xs, const std::vector<R>& ys);
// e_m(xs/ys) = sum_k (-1)^{m-k} e_k(xs) h_{m-k}(ys).
template <class R>
R supersym_e(int m, const std::vector<R>& xs, const std::vector<R>& ys);

template <class R>
struct Truncated {
    R value;
    int trunc;
};
// sum over a - b = m with max(a, b) <= trunc of h_a(xs) h_b(ys).
template <class R>
Truncated<R> theta_h(int m, const std::vector<R>& xs, const std::vector<R>& ys, int trunc);

// Schur polynomial s_lambda(x_1..x_n).
LaurentPoly schur_poly(const Partition& lambda, int n);

struct SchurExpansion {
    int n = 0;
    std::map<Partition, RationalFn> coeffs;
    bool operator==(const SchurExpansion& o) const;
    nlohmann::json to_json() const;
};

struct NotSymmetric : std::runtime_error {
    int witness;  // transposition (witness, witness+1) that fails
    NotSymmetric(const std::string& what, int w) : std::runtime_error(what), witness(w) {}
};

// Greedy lex-leading-monomial expansion of a symmetric polynomial in x_1..x_n through x-degree D.
SchurExpansion schur_expand(const LaurentPoly& f, int n, int degree_cap);
SchurExpansion omega_on_expansion(const SchurExpansion& e);
LaurentPoly schur_reconstruct(const SchurExpansion& e);

mpq_class parse_rational(const std::string& text);
std::string rational_str(const mpq_class& q);

}  // namespace tasep

#include "tasep/poly_impl.hpp"
