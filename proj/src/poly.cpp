#include "tasep/poly.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <sstream>

namespace tasep {

namespace {

int checked_add(int a, int b) {
    int r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Laurent exponent overflow");
    return r;
}

int checked_mul(int a, int b) {
    int r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Laurent exponent overflow");
    return r;
}

const char* family_letter(Family f) {
    switch (f) {
        case Family::X: return "x";
        case Family::P: return "p";
        case Family::A: return "a";
        case Family::B: return "b";
    }
    return "?";
}

}  // namespace

std::string Var::name() const { return std::string(family_letter(family)) + std::to_string(index); }

// ---- Monomial ----

Monomial Monomial::of(Var v, int exp) {
    Monomial m;
    if (exp != 0) m.e_.push_back({v.key(), exp});
    return m;
}

int Monomial::exponent(Var v) const {
    for (const auto& [k, e] : e_)
        if (k == v.key()) return e;
    return 0;
}

int Monomial::degree_in(Family f) const {
    int d = 0;
    for (const auto& [k, e] : e_)
        if (Var::from_key(k).family == f) d = checked_add(d, e);
    return d;
}

bool Monomial::has_negative() const {
    return std::any_of(e_.begin(), e_.end(), [](const auto& p) { return p.second < 0; });
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
    std::size_t i = 0, j = 0;
    while (i < e_.size() || j < o.e_.size()) {
        std::uint32_t ki = i < e_.size() ? e_[i].first : UINT32_MAX;
        std::uint32_t kj = j < o.e_.size() ? o.e_[j].first : UINT32_MAX;
        int a = 0, b = 0;
        if (ki <= kj) a = e_[i].second;
        if (kj <= ki) b = o.e_[j].second;
        if (a != b) return a <=> b;
        if (ki <= kj) ++i;
        if (kj <= ki) ++j;
    }
    return std::strong_ordering::equal;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.e_.reserve(e_.size() + o.e_.size());
    std::size_t i = 0, j = 0;
    while (i < e_.size() || j < o.e_.size()) {
        if (j == o.e_.size() || (i < e_.size() && e_[i].first < o.e_[j].first)) {
            r.e_.push_back(e_[i++]);
        } else if (i == e_.size() || o.e_[j].first < e_[i].first) {
            r.e_.push_back(o.e_[j++]);
        } else {
            int s = checked_add(e_[i].second, o.e_[j].second);
            if (s != 0) r.e_.push_back({e_[i].first, s});
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::inverse() const {
    Monomial r = *this;
    for (auto& p : r.e_) p.second = checked_mul(p.second, -1);
    return r;
}

Monomial Monomial::pow(int k) const {
    if (k == 0) return {};
    Monomial r = *this;
    for (auto& p : r.e_) p.second = checked_mul(p.second, k);
    return r;
}

Monomial Monomial::only(Family f) const {
    Monomial r;
    for (const auto& p : e_)
        if (Var::from_key(p.first).family == f) r.e_.push_back(p);
    return r;
}

Monomial Monomial::without(Family f) const {
    Monomial r;
    for (const auto& p : e_)
        if (Var::from_key(p.first).family != f) r.e_.push_back(p);
    return r;
}

Monomial Monomial::substituted(Var a, Var b) const {
    Monomial r, moved;
    for (const auto& p : e_) {
        if (p.first == a.key()) moved = Monomial::of(b, p.second);
        else r.e_.push_back(p);
    }
    return r * moved;
}

std::string Monomial::str() const {
    if (e_.empty()) return "1";
    std::string s;
    for (const auto& [k, e] : e_) {
        if (!s.empty()) s += "*";
        s += Var::from_key(k).name();
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

// ---- LaurentPoly ----

LaurentPoly::LaurentPoly(long c) {
    if (c != 0) t_.emplace(Monomial{}, mpq_class(c));
}

LaurentPoly::LaurentPoly(const mpq_class& c) {
    if (sgn(c) != 0) {
        mpq_class v = c;
        v.canonicalize();
        t_.emplace(Monomial{}, v);
    }
}

LaurentPoly LaurentPoly::var(Var v, int exp) { return monomial(Monomial::of(v, exp), 1); }

LaurentPoly LaurentPoly::monomial(const Monomial& m, const mpq_class& c) {
    LaurentPoly p;
    if (sgn(c) != 0) {
        mpq_class v = c;
        v.canonicalize();
        p.t_.emplace(m, v);
    }
    return p;
}

bool LaurentPoly::is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one()); }

std::optional<Monomial> LaurentPoly::single_monomial() const {
    if (t_.size() != 1) return std::nullopt;
    return t_.begin()->first;
}

mpq_class LaurentPoly::constant_term() const {
    auto it = t_.find(Monomial{});
    return it == t_.end() ? mpq_class(0) : it->second;
}

int LaurentPoly::total_degree_in(Family f) const {
    int d = INT_MIN;
    for (const auto& [m, c] : t_) d = std::max(d, m.degree_in(f));
    return t_.empty() ? 0 : d;
}

void LaurentPoly::add_term(const Monomial& m, const mpq_class& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = t_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) t_.erase(it);
    }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ma, ca] : a.t_)
        for (const auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
    return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    *this = *this * o;
    return *this;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
}

LaurentPoly LaurentPoly::pow(int k) const {
    if (k < 0) {
        auto m = single_monomial();
        if (!m) throw std::invalid_argument("negative power of a non-monomial");
        mpq_class c = t_.begin()->second;
        mpq_class ck = 1;
        for (int i = 0; i < -k; ++i) ck /= c;
        return monomial(m->pow(k), ck);
    }
    LaurentPoly r(1), base = *this;
    while (k) {
        if (k & 1) r *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return r;
}

LaurentPoly LaurentPoly::scaled(const mpq_class& c, const Monomial& m) const {
    LaurentPoly r;
    if (sgn(c) == 0) return r;
    for (const auto& [mm, cc] : t_) r.t_.emplace(mm * m, cc * c);
    return r;
}

bool LaurentPoly::operator<(const LaurentPoly& o) const {
    return std::lexicographical_compare(t_.begin(), t_.end(), o.t_.begin(), o.t_.end(),
                                        [](const auto& a, const auto& b) {
                                            if (a.first != b.first) return a.first < b.first;
                                            return a.second < b.second;
                                        });
}

LaurentPoly LaurentPoly::truncated(Family f, int d) const {
    LaurentPoly r;
    for (const auto& [m, c] : t_)
        if (m.degree_in(f) <= d) r.t_.emplace(m, c);
    return r;
}

std::optional<LaurentPoly> LaurentPoly::divide_exact(const LaurentPoly& f) const {
    if (f.is_zero()) return std::nullopt;
    if (is_zero()) return LaurentPoly{};
    // Monomial order: the map order, which is multiplicative on exponent vectors.
    const auto& [flead_m, flead_c] = *f.t_.rbegin();
    const Monomial ftrail = f.t_.begin()->first;
    const Monomial atrail = t_.begin()->first;
    LaurentPoly rem = *this, q;
    const std::size_t cap = 4 * (t_.size() + 1) * (f.t_.size() + 1) + 64;
    for (std::size_t it = 0; it < cap && !rem.is_zero(); ++it) {
        const auto& [rm, rc] = *rem.t_.rbegin();
        Monomial qm = rm * flead_m.inverse();
        if (qm * ftrail < atrail) return std::nullopt;
        mpq_class qc = rc / flead_c;
        q.add_term(qm, qc);
        rem -= f.scaled(qc, qm);
    }
    if (!rem.is_zero()) return std::nullopt;
    return q;
}

LaurentPoly LaurentPoly::substitute(Var v, const LaurentPoly& value) const {
    LaurentPoly r;
    for (const auto& [m, c] : t_) {
        int e = m.exponent(v);
        Monomial rest = m * Monomial::of(v, -e);
        r += value.pow(e).scaled(c, rest);
    }
    return r;
}

LaurentPoly LaurentPoly::rename(Var from, Var to) const {
    LaurentPoly r;
    for (const auto& [m, c] : t_) r.add_term(m.substituted(from, to), c);
    return r;
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

mpq_class parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty rational");
    auto dot = s.find('.');
    auto e = s.find_first_of("eE");
    if (dot != std::string::npos || e != std::string::npos) {
        // Decimal literal, converted exactly from its digits.
        mpq_class mant;
        std::string m = s.substr(0, e);
        int exp10 = e == std::string::npos ? 0 : std::stoi(s.substr(e + 1));
        bool neg = !m.empty() && m[0] == '-';
        if (!m.empty() && (m[0] == '-' || m[0] == '+')) m = m.substr(1);
        auto d = m.find('.');
        std::string digits = m;
        if (d != std::string::npos) {
            digits = m.substr(0, d) + m.substr(d + 1);
            exp10 -= static_cast<int>(m.size() - d - 1);
        }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad decimal '" + text + "'");
        mpz_class num(digits, 10), ten(10), scale(1);
        for (int i = 0; i < std::abs(exp10); ++i) scale *= ten;
        mant = exp10 >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
        mant.canonicalize();
        return neg ? mpq_class(-mant) : mant;
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + text + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string LaurentPoly::str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const auto& [m, c] = *it;
        mpq_class a = abs(c);
        s += s.empty() ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
        if (m.is_one()) s += a.get_str();
        else if (a == 1) s += m.str();
        else s += a.get_str() + "*" + m.str();
    }
    return s;
}

nlohmann::json LaurentPoly::to_json() const {
    std::vector<const Terms::value_type*> order;
    for (const auto& t : t_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](auto a, auto b) { return a->first.serial_less(b->first); });
    nlohmann::json terms = nlohmann::json::array();
    for (const auto* t : order) {
        const auto& [m, c] = *t;
        nlohmann::json mono = nlohmann::json::array();
        for (const auto& [k, e] : m.exps()) {
            Var v = Var::from_key(k);
            mono.push_back({family_letter(v.family), v.index, e});
        }
        terms.push_back({{"mono", mono}, {"coef", c.get_str()}});
    }
    return terms;
}

// ---- RationalFn ----

namespace {

// Splits p = c * m * q where q has smallest term exactly 1.
void normalise_factor(const LaurentPoly& p, mpq_class& c, Monomial& m, LaurentPoly& q) {
    const auto& [m0, c0] = *p.terms().begin();
    c = c0;
    m = m0;
    q = p.scaled(1 / c0, m0.inverse());
}

void merge_factor(std::vector<RationalFn::Factor>& den, const LaurentPoly& f, int mult) {
    for (auto& [g, k] : den)
        if (g == f) {
            k += mult;
            return;
        }
    den.push_back({f, mult});
    std::sort(den.begin(), den.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

int multiplicity(const std::vector<RationalFn::Factor>& den, const LaurentPoly& f) {
    for (const auto& [g, k] : den)
        if (g == f) return k;
    return 0;
}

}  // namespace

void RationalFn::divide_by_poly(const LaurentPoly& p, int mult) {
    if (p.is_zero()) throw std::domain_error("division by zero rational function");
    mpq_class c;
    Monomial m;
    LaurentPoly q;
    normalise_factor(p, c, m, q);
    mpq_class cinv = 1;
    for (int i = 0; i < mult; ++i) cinv /= c;
    num_ = num_.scaled(cinv, m.pow(-mult));
    if (q.terms().size() == 1) return;  // pure monomial, absorbed
    merge_factor(den_, q, mult);
}

LaurentPoly RationalFn::expanded_denominator() const {
    LaurentPoly d(1);
    for (const auto& [f, k] : den_) d *= f.pow(k);
    return d;
}

RationalFn& RationalFn::operator+=(const RationalFn& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
        num_ += o.num_;
        if (num_.is_zero()) den_.clear();
        return *this;
    }
    std::vector<Factor> common = den_;
    for (const auto& [f, k] : o.den_) {
        int have = multiplicity(common, f);
        if (k > have) merge_factor(common, f, k - have);
    }
    LaurentPoly a = num_, b = o.num_;
    for (const auto& [f, k] : common) {
        int ka = k - multiplicity(den_, f);
        int kb = k - multiplicity(o.den_, f);
        if (ka) a *= f.pow(ka);
        if (kb) b *= f.pow(kb);
    }
    num_ = a + b;
    den_ = num_.is_zero() ? std::vector<Factor>{} : common;
    return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& o) { return *this += -o; }

RationalFn RationalFn::operator-() const {
    RationalFn r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFn& RationalFn::operator*=(const RationalFn& o) {
    if (is_zero() || o.is_zero()) return *this = RationalFn{};
    num_ *= o.num_;
    for (const auto& [f, k] : o.den_) merge_factor(den_, f, k);
    return *this;
}

RationalFn& RationalFn::operator/=(const RationalFn& o) {
    if (o.is_zero()) throw std::domain_error("division by zero rational function");
    if (is_zero()) return *this;
    for (const auto& [f, k] : o.den_) num_ *= f.pow(k);
    divide_by_poly(o.num_, 1);
    return *this;
}

bool RationalFn::operator==(const RationalFn& o) const {
    if (den_ == o.den_) return num_ == o.num_;
    RationalFn d = *this;
    d -= o;
    return d.is_zero();
}

RationalFn RationalFn::simplified() const {
    RationalFn r = *this;
    if (r.is_zero()) return RationalFn{};
    std::vector<Factor> kept;
    for (const auto& [f, k] : r.den_) {
        int left = k;
        while (left > 0) {
            auto q = r.num_.divide_exact(f);
            if (!q) break;
            r.num_ = *q;
            --left;
        }
        if (left > 0) kept.push_back({f, left});
    }
    r.den_ = kept;
    return r;
}

RationalFn RationalFn::substitute(Var v, const RationalFn& value) const {
    // Substitutes into numerator and each factor through rational arithmetic.
    auto sub_poly = [&](const LaurentPoly& p) {
        RationalFn acc;
        for (const auto& [m, c] : p.terms()) {
            int e = m.exponent(v);
            RationalFn t(LaurentPoly::monomial(m * Monomial::of(v, -e), c));
            if (e > 0)
                for (int i = 0; i < e; ++i) t *= value;
            else
                for (int i = 0; i < -e; ++i) t /= value;
            acc += t;
        }
        return acc;
    };
    RationalFn r = sub_poly(num_);
    for (const auto& [f, k] : den_) {
        RationalFn fs = sub_poly(f);
        for (int i = 0; i < k; ++i) r /= fs;
    }
    return r;
}

std::string RationalFn::str() const {
    RationalFn s = simplified();
    if (s.den_.empty()) return s.num_.str();
    std::string d;
    for (const auto& [f, k] : s.den_) {
        d += "(" + f.str() + ")";
        if (k != 1) d += "^" + std::to_string(k);
    }
    return "(" + s.num_.str() + ")/" + d;
}

nlohmann::json RationalFn::to_json() const {
    RationalFn s = simplified();
    nlohmann::json den = nlohmann::json::array();
    for (const auto& [f, k] : s.den_) den.push_back({{"factor", f.to_json()}, {"mult", k}});
    return {{"num", s.num_.to_json()}, {"den", den}};
}

// ---- evaluation ----

mpq_class eval(const LaurentPoly& p, const ParamBinding& b) {
    mpq_class total = 0;
    for (const auto& [m, c] : p.terms()) {
        mpq_class t = c;
        for (const auto& [k, e] : m.exps()) {
            Var v = Var::from_key(k);
            auto it = b.find(v);
            if (it == b.end()) throw std::invalid_argument("unbound variable " + v.name());
            if (e < 0 && sgn(it->second) == 0) throw PoleError("pole: " + v.name() + " = 0 with negative exponent");
            for (int i = 0; i < std::abs(e); ++i) {
                if (e > 0) t *= it->second;
                else t /= it->second;
            }
        }
        total += t;
    }
    return total;
}

mpq_class eval(const RationalFn& f, const ParamBinding& b) {
    mpq_class v = eval(f.numerator(), b);
    for (const auto& [g, k] : f.denominator()) {
        mpq_class d = eval(g, b);
        if (sgn(d) == 0) throw PoleError("pole: factor (" + g.str() + ") vanishes");
        for (int i = 0; i < k; ++i) v /= d;
    }
    return v;
}

double eval_double(const RationalFn& f, const std::map<Var, double>& b) {
    auto ev = [&](const LaurentPoly& p) {
        double total = 0;
        for (const auto& [m, c] : p.terms()) {
            double t = c.get_d();
            for (const auto& [k, e] : m.exps()) {
                Var v = Var::from_key(k);
                auto it = b.find(v);
                if (it == b.end()) throw std::invalid_argument("unbound variable " + v.name());
                t *= std::pow(it->second, e);
            }
            total += t;
        }
        return total;
    };
    double v = ev(f.numerator());
    for (const auto& [g, k] : f.denominator()) {
        double d = ev(g);
        if (d == 0) throw PoleError("pole: factor (" + g.str() + ") vanishes");
        v /= std::pow(d, k);
    }
    return v;
}

// ---- Schur functions ----

LaurentPoly schur_poly(const Partition& lambda, int n) {
    if (lambda.length() > n) return LaurentPoly{};
    // Semistandard fillings, row by row, entries in 1..n.
    const int rows = lambda.length();
    std::vector<std::vector<int>> T(rows);
    for (int r = 0; r < rows; ++r) T[r].assign(lambda[r + 1], 0);
    LaurentPoly result;
    std::vector<int> count(n + 1, 0);
    std::function<void(int, int)> rec = [&](int r, int c) {
        if (r == rows) {
            Monomial m;
            for (int v = 1; v <= n; ++v)
                if (count[v]) m = m * Monomial::of(X(v), count[v]);
            result += LaurentPoly::monomial(m, 1);
            return;
        }
        if (c == lambda[r + 1]) {
            rec(r + 1, 0);
            return;
        }
        int lo = 1;
        if (c > 0) lo = std::max(lo, T[r][c - 1]);
        if (r > 0) lo = std::max(lo, T[r - 1][c] + 1);
        for (int v = lo; v <= n; ++v) {
            T[r][c] = v;
            ++count[v];
            rec(r, c + 1);
            --count[v];
        }
    };
    rec(0, 0);
    return result;
}

bool SchurExpansion::operator==(const SchurExpansion& o) const {
    if (n != o.n) return false;
    for (const auto& [p, c] : coeffs)
        if (!c.is_zero()) {
            auto it = o.coeffs.find(p);
            if (it == o.coeffs.end() || !(it->second == c)) return false;
        }
    for (const auto& [p, c] : o.coeffs)
        if (!c.is_zero() && !coeffs.count(p)) return false;
    return true;
}

nlohmann::json SchurExpansion::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [p, c] : coeffs) out.push_back({{"lambda", p.parts()}, {"coef", c.to_json()}});
    return {{"n", n}, {"terms", out}};
}

SchurExpansion schur_expand(const LaurentPoly& f0, int n, int degree_cap) {
    LaurentPoly f = f0.truncated(Family::X, degree_cap);
    for (const auto& [m, c] : f.terms())
        for (const auto& [k, e] : m.exps()) {
            Var v = Var::from_key(k);
            if (v.family == Family::X && (e < 0 || v.index > n))
                throw std::invalid_argument("schur_expand: x-exponent outside x_1..x_n polynomial range");
        }
    for (int i = 1; i < n; ++i) {
        LaurentPoly g = f.rename(X(i), X(0)).rename(X(i + 1), X(i)).rename(X(0), X(i + 1));
        if (!(g == f))
            throw NotSymmetric("input not symmetric under x" + std::to_string(i) + " <-> x" + std::to_string(i + 1), i);
    }
    SchurExpansion out;
    out.n = n;
    auto xpart = [n](const Monomial& m) {
        std::vector<int> e(n, 0);
        for (int i = 1; i <= n; ++i) e[i - 1] = m.exponent(X(i));
        return e;
    };
    while (!f.is_zero()) {
        std::vector<int> best;
        for (const auto& [m, c] : f.terms()) {
            auto e = xpart(m);
            if (best.empty() || e > best) best = e;
        }
        LaurentPoly coeff;
        for (const auto& [m, c] : f.terms())
            if (xpart(m) == best) coeff += LaurentPoly::monomial(m.without(Family::X), c);
        Partition lam = Partition::from_parts(best);
        out.coeffs[lam] += RationalFn(coeff);
        f -= coeff * schur_poly(lam, n);
    }
    return out;
}

SchurExpansion omega_on_expansion(const SchurExpansion& e) {
    SchurExpansion out;
    out.n = e.n;
    for (const auto& [p, c] : e.coeffs) out.coeffs[conjugate(p)] += c;
    return out;
}

LaurentPoly schur_reconstruct(const SchurExpansion& e) {
    LaurentPoly total;
    for (const auto& [p, c] : e.coeffs) {
        if (!c.is_polynomial()) throw std::invalid_argument("schur_reconstruct needs polynomial coefficients");
        total += c.numerator() * schur_poly(p, e.n);
    }
    return total;
}

}  // namespace tasep
