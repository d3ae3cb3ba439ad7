#include "tasep/operators.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace tasep {

OpWord parse_word(const std::string& text) {
    OpWord w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok.size() < 2 || (tok[0] != 'U' && tok[0] != 'u'))
            throw std::invalid_argument("bad operator letter '" + tok + "'");
        std::size_t pos = 1;
        if (tok[pos] == '_') ++pos;
        if (pos == tok.size()) throw std::invalid_argument("missing row index in '" + tok + "'");
        int row = 0;
        for (; pos < tok.size(); ++pos) {
            if (!std::isdigit(static_cast<unsigned char>(tok[pos])))
                throw std::invalid_argument("bad row index in '" + tok + "'");
            row = row * 10 + (tok[pos] - '0');
            if (row > 1000000) throw std::invalid_argument("row index too large");
        }
        if (row < 1) throw std::invalid_argument("row index must be positive");
        w.push_back({tok[0] == 'U' ? OpKind::U : OpKind::u, row});
    }
    return w;
}

std::string word_str(const OpWord& w) {
    std::string s;
    for (const auto& l : w) {
        if (!s.empty()) s += ' ';
        s += (l.kind == OpKind::U ? "U" : "u") + std::to_string(l.row);
    }
    return s;
}

OpParams<RationalFn> symbolic_op_params(bool alpha_on, bool beta_on) {
    OpParams<RationalFn> p;
    if (alpha_on) p.alpha = [](int k) { return RationalFn::var(A(k)); };
    if (beta_on) p.beta = [](int k) { return RationalFn::var(B(k)); };
    return p;
}

namespace {

void choose(int lo, int hi, int k, bool strict, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int i = lo; i <= hi; ++i) {
        cur.push_back(i);
        choose(strict ? i + 1 : i, hi, k, strict, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<OpWord> e_words(OpKind kind, int k, int ell) {
    std::vector<std::vector<int>> idx;
    std::vector<int> cur;
    choose(1, ell, k, true, cur, idx);
    std::vector<OpWord> out;
    for (const auto& s : idx) {
        OpWord w;
        for (auto it = s.rbegin(); it != s.rend(); ++it) w.push_back({kind, *it});
        out.push_back(w);
    }
    return out;
}

std::vector<OpWord> h_words(OpKind kind, int k, int ell) {
    std::vector<std::vector<int>> idx;
    std::vector<int> cur;
    choose(1, ell, k, false, cur, idx);
    std::vector<OpWord> out;
    for (const auto& s : idx) {
        OpWord w;
        for (int i : s) w.push_back({kind, i});
        out.push_back(w);
    }
    return out;
}

std::vector<RelationInstance> knuth_relations(OpKind kind, int n, bool strong) {
    auto t = [kind](int i) { return OpLetter{kind, i}; };
    auto tag = [](const char* r, int i, int j, int k) {
        return std::string(r) + "(i=" + std::to_string(i) + ",j=" + std::to_string(j) + ",k=" + std::to_string(k) + ")";
    };
    std::vector<RelationInstance> out;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= i; ++j)
            for (int k = 1; k < j; ++k)
                if (strong || i - k >= 2)
                    out.push_back({tag("jik=jki", i, j, k), {{t(j), t(i), t(k)}}, {{t(j), t(k), t(i)}}});
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j < i; ++j)
            for (int k = 1; k <= j; ++k)
                if (strong || i - k >= 2)
                    out.push_back({tag("ikj=kij", i, j, k), {{t(i), t(k), t(j)}}, {{t(k), t(i), t(j)}}});
    for (int i = 1; i < n; ++i)
        out.push_back({tag("braid", i, i + 1, i),
                       {{t(i), t(i + 1), t(i)}, {t(i + 1), t(i + 1), t(i)}},
                       {{t(i + 1), t(i), t(i)}, {t(i + 1), t(i), t(i + 1)}}});
    return out;
}

std::vector<RelationInstance> far_commutation(OpKind kind, int n) {
    std::vector<RelationInstance> out;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j + 2 <= i; ++j)
            out.push_back({"commute(" + std::to_string(i) + "," + std::to_string(j) + ")",
                           {{{kind, i}, {kind, j}}},
                           {{{kind, j}, {kind, i}}}});
    return out;
}

}  // namespace tasep
