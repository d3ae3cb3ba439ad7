#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tasep/partitions.hpp"
#include "tasep/poly.hpp"

namespace tasep {

// Which tableau index the alpha and beta parameters follow.
enum class IndexConvention { BetaRowAlphaCol, BetaColAlphaRow };

const char* convention_name(IndexConvention c);

template <class R>
using IndexFn = std::function<R(int)>;

// Parameters of a tableau generating function. A null alpha or beta is treated as zero.
template <class R>
struct TableauParams {
    IndexFn<R> x;
    IndexFn<R> alpha;
    IndexFn<R> beta;
    IndexConvention convention = IndexConvention::BetaRowAlphaCol;

    R alpha_at(const Cell& c) const {
        if (!alpha) return R(0);
        return alpha(convention == IndexConvention::BetaRowAlphaCol ? c.col : c.row);
    }
    R beta_at(const Cell& c) const {
        if (!beta) return R(0);
        return beta(convention == IndexConvention::BetaRowAlphaCol ? c.row : c.col);
    }
};

// Per-box choices: (max entry of the box, summed weight of all fillings with that max).
template <class R>
using BoxChoices = std::vector<std::pair<int, R>>;

// Sums box-weight products over fillings of a skew shape, row by row.
// The model is called as model(cell, above_max, left_max) with 0 meaning no neighbour in the shape.
template <class R, class Model>
R fill_sum(const SkewShape& shape, const Model& model) {
    const auto& cells = shape.cells();
    const int cols = shape.outer().empty() ? 0 : shape.outer()[1];
    std::vector<std::map<std::vector<int>, R>> memo(cells.size());
    std::vector<int> frontier(cols, 0);
    std::function<R(std::size_t)> rec = [&](std::size_t t) -> R {
        if (t == cells.size()) return R(1);
        auto it = memo[t].find(frontier);
        if (it != memo[t].end()) return it->second;
        const Cell& cell = cells[t];
        const int above = frontier[cell.col - 1];
        const int left = shape.contains(cell.row, cell.col - 1) ? frontier[cell.col - 2] : 0;
        R total(0);
        const int saved = frontier[cell.col - 1];
        for (const auto& [hi, w] : model(cell, above, left)) {
            if (is_zero(w)) continue;
            frontier[cell.col - 1] = hi;
            R sub = rec(t + 1);
            if (!is_zero(sub)) total += w * sub;
        }
        frontier[cell.col - 1] = saved;
        memo[t].emplace(frontier, total);
        return total;
    };
    return rec(0);
}

// Hook-valued fillings with entries in 1..n. A box with corner c and maximal entry M carries
// x_c times the arm weights -alpha x_v / (1 + alpha x_v) and leg weights -beta x_v.
// alpha = 0 gives set-valued G, beta = 0 gives multiset-valued J summed in closed form.
template <class R>
R gen_G(const SkewShape& shape, int n, const TableauParams<R>& p) {
    std::vector<R> xs(n + 1, R(0));
    for (int v = 1; v <= n; ++v) xs[v] = p.x(v);
    auto model = [&](const Cell& cell, int above, int left) {
        std::map<int, R> by_max;
        const R a = p.alpha_at(cell), b = p.beta_at(cell);
        const R ab = a + b;
        for (int c = std::max(left, above + 1); c <= n; ++c) {
            // F = running weight of all fillings with max < M, i.e. x_c prod_{c<=v<M} 1/(1+a x_v) prod_{c<v<M} (1 - b x_v).
            R F = xs[c];
            for (int M = c; M <= n; ++M) {
                const R denom = R(1) + a * xs[M];
                if (M == c) {
                    F = F / denom;
                    by_max[M] += F;
                } else {
                    R w = F * (R(0) - ab * xs[M]) / denom;
                    by_max[M] += w;
                    F = F * (R(1) - b * xs[M]) / denom;
                }
            }
        }
        BoxChoices<R> out(by_max.begin(), by_max.end());
        return out;
    };
    return fill_sum<R>(shape, model);
}

// Sum over nu obtained from mu by removing corners of prod_{removed (i,j)} -(alpha + beta) * G(lambda/nu).
// Vanishes when mu is not contained in lambda.
template <class R>
R gen_G_doubleslash(const Partition& outer, const Partition& inner, int n, const TableauParams<R>& p) {
    if (!contains(outer, inner)) return R(0);
    R total(0);
    for (const auto& nu : corner_removals(inner)) {
        if (!contains(outer, nu)) continue;
        R f(1);
        for (int i = 1; i <= inner.length(); ++i)
            for (int j = nu[i] + 1; j <= inner[i]; ++j) {
                const Cell c{i, j};
                f *= R(0) - (p.alpha_at(c) + p.beta_at(c));
            }
        if (is_zero(f)) continue;
        total += f * gen_G(SkewShape(outer, nu), n, p);
    }
    return total;
}

// Reverse plane partitions: weak increase along rows and columns; a box equal to the box above
// merges with it and carries the beta of the upper box instead of an x.
template <class R>
R gen_g(const SkewShape& shape, int n, const TableauParams<R>& p) {
    auto model = [&](const Cell& cell, int above, int left) {
        BoxChoices<R> out;
        for (int v = std::max({1, left, above}); v <= n; ++v) {
            if (v == above) out.push_back({v, p.beta_at({cell.row - 1, cell.col})});
            else out.push_back({v, p.x(v)});
        }
        return out;
    };
    return fill_sum<R>(shape, model);
}

// Semistandard backbone; a box equal to its left neighbour merges with it and carries
// x_v + alpha of the left box.
template <class R>
R gen_j(const SkewShape& shape, int n, const TableauParams<R>& p) {
    auto model = [&](const Cell& cell, int above, int left) {
        BoxChoices<R> out;
        for (int v = std::max({1, left, above + 1}); v <= n; ++v) {
            if (v == left) out.push_back({v, p.x(v) + p.alpha_at({cell.row, cell.col - 1})});
            else out.push_back({v, p.x(v)});
        }
        return out;
    };
    return fill_sum<R>(shape, model);
}

// Flagged semistandard tableaux in letters 1..L with row i entries at most flags[i-1].
template <class R>
R gen_flagged_schur(const Partition& lambda, const std::vector<int>& flags, const IndexFn<R>& letter) {
    if (flags.size() < static_cast<std::size_t>(lambda.length()))
        throw std::invalid_argument("flag list shorter than the partition");
    for (std::size_t i = 1; i < flags.size(); ++i)
        if (flags[i] < flags[i - 1]) throw std::invalid_argument("flags must be weakly increasing");
    auto model = [&](const Cell& cell, int above, int left) {
        BoxChoices<R> out;
        for (int v = std::max({1, left, above + 1}); v <= flags[cell.row - 1]; ++v) out.push_back({v, letter(v)});
        return out;
    };
    return fill_sum<R>(SkewShape(lambda), model);
}

// Letters x_1..x_n followed by b_1..b_l, row i bounded by letter n + i.
template <class R>
R gen_flagged_schur_beta(const Partition& lambda, int n, const IndexFn<R>& x, const IndexFn<R>& b) {
    std::vector<int> flags;
    for (int i = 1; i <= lambda.length(); ++i) flags.push_back(n + i);
    IndexFn<R> letter = [&](int v) -> R { return v <= n ? x(v) : b(v - n); };
    return gen_flagged_schur<R>(lambda, flags, letter);
}

// Symbolic parameter sets: x_i, alpha = a_k, beta = b_k as variables.
TableauParams<RationalFn> symbolic_params(bool alpha_on, bool beta_on,
                                          IndexConvention conv = IndexConvention::BetaRowAlphaCol);

// Explicit listings for small shapes (at most 12 cells).
struct ListedTableau {
    std::vector<std::vector<std::vector<int>>> rows;  // row -> box -> entries
    nlohmann::json to_json() const;
};
std::vector<ListedTableau> list_set_valued(const SkewShape& shape, int n);
std::vector<ListedTableau> list_rpp(const SkewShape& shape, int n);

}  // namespace tasep
