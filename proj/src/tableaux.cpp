#include "tasep/tableaux.hpp"

#include <stdexcept>

namespace tasep {

const char* convention_name(IndexConvention c) {
    return c == IndexConvention::BetaRowAlphaCol ? "beta-row/alpha-col" : "beta-col/alpha-row";
}

TableauParams<RationalFn> symbolic_params(bool alpha_on, bool beta_on, IndexConvention conv) {
    TableauParams<RationalFn> p;
    p.x = [](int i) { return RationalFn::var(X(i)); };
    if (alpha_on) p.alpha = [](int k) { return RationalFn::var(A(k)); };
    if (beta_on) p.beta = [](int k) { return RationalFn::var(B(k)); };
    p.convention = conv;
    return p;
}

nlohmann::json ListedTableau::to_json() const { return rows; }

namespace {

constexpr int kListCellLimit = 12;

// Generic listing DFS: choices(cell, above_box, left_box) returns candidate box contents.
template <class Choices>
std::vector<ListedTableau> list_fillings(const SkewShape& shape, Choices choices) {
    if (shape.size() > kListCellLimit) throw std::invalid_argument("listing limited to shapes with at most 12 cells");
    const auto& cells = shape.cells();
    const int rows = shape.outer().length();
    ListedTableau cur;
    cur.rows.resize(rows);
    for (int r = 1; r <= rows; ++r) cur.rows[r - 1].assign(shape.outer()[r], {});
    std::vector<ListedTableau> out;
    std::function<void(std::size_t)> rec = [&](std::size_t t) {
        if (t == cells.size()) {
            out.push_back(cur);
            return;
        }
        const Cell& c = cells[t];
        const std::vector<int>* above = shape.contains(c.row - 1, c.col) ? &cur.rows[c.row - 2][c.col - 1] : nullptr;
        const std::vector<int>* left = shape.contains(c.row, c.col - 1) ? &cur.rows[c.row - 1][c.col - 2] : nullptr;
        for (auto& box : choices(above, left)) {
            cur.rows[c.row - 1][c.col - 1] = box;
            rec(t + 1);
        }
        cur.rows[c.row - 1][c.col - 1].clear();
    };
    rec(0);
    return out;
}

}  // namespace

std::vector<ListedTableau> list_set_valued(const SkewShape& shape, int n) {
    return list_fillings(shape, [n](const std::vector<int>* above, const std::vector<int>* left) {
        const int lo = std::max(left ? left->back() : 1, above ? above->back() + 1 : 1);
        std::vector<std::vector<int>> boxes;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> s;
            for (int v = 1; v <= n; ++v)
                if (mask & (1u << (v - 1))) s.push_back(v);
            if (s.front() >= lo) boxes.push_back(s);
        }
        return boxes;
    });
}

std::vector<ListedTableau> list_rpp(const SkewShape& shape, int n) {
    return list_fillings(shape, [n](const std::vector<int>* above, const std::vector<int>* left) {
        const int lo = std::max({1, left ? left->back() : 1, above ? above->back() : 1});
        std::vector<std::vector<int>> boxes;
        for (int v = lo; v <= n; ++v) boxes.push_back({v});
        return boxes;
    });
}

}  // namespace tasep
