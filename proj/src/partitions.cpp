#include "tasep/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tasep {

namespace {

std::vector<int> trimmed(std::vector<int> v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
}

}  // namespace

Partition::Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

Partition::Partition(std::vector<int> parts) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 0) throw std::invalid_argument("partition has a negative part");
        if (i > 0 && parts[i] > parts[i - 1])
            throw std::invalid_argument("partition parts must be weakly decreasing");
    }
    parts_ = trimmed(std::move(parts));
}

Partition Partition::from_parts(const std::vector<int>& parts) { return Partition(parts); }

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

std::vector<int> Partition::padded(int len) const {
    std::vector<int> v(std::max(len, length()), 0);
    std::copy(parts_.begin(), parts_.end(), v.begin());
    return v;
}

std::string Partition::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
    os << ']';
    return os.str();
}

SkewShape::SkewShape(Partition outer, Partition inner) : outer_(std::move(outer)), inner_(std::move(inner)) {
    if (!tasep::contains(outer_, inner_))
        throw std::invalid_argument("skew shape inner " + inner_.str() + " not inside " + outer_.str());
    for (int r = 1; r <= outer_.length(); ++r)
        for (int c = inner_[r] + 1; c <= outer_[r]; ++c) cells_.push_back({r, c});
}

bool SkewShape::contains(int row, int col) const {
    return row >= 1 && col >= 1 && col <= outer_[row] && col > inner_[row];
}

std::string SkewShape::str() const { return outer_.str() + "/" + inner_.str(); }

Partition conjugate(const Partition& p) {
    std::vector<int> c(p.empty() ? 0 : p[1], 0);
    for (int j = 1; j <= static_cast<int>(c.size()); ++j) {
        int count = 0;
        for (int i = 1; i <= p.length(); ++i)
            if (p[i] >= j) ++count;
        c[j - 1] = count;
    }
    return Partition(c);
}

bool contains(const Partition& outer, const Partition& inner) {
    for (int i = 1; i <= inner.length(); ++i)
        if (inner[i] > outer[i]) return false;
    return true;
}

std::vector<Cell> corners(const Partition& p) {
    std::vector<Cell> out;
    for (int i = 1; i <= p.length(); ++i)
        if (p[i] > p[i + 1]) out.push_back({i, p[i]});
    return out;
}

bool is_vertical_strip(const SkewShape& s) {
    for (int r = 1; r <= s.outer().length(); ++r)
        if (s.outer()[r] - s.inner()[r] > 1) return false;
    return true;
}

bool is_horizontal_strip(const SkewShape& s) {
    // At most one cell per column: row r+1 of the outer shape may not overlap row r of the skew part.
    for (int r = 1; r < s.outer().length(); ++r)
        if (s.outer()[r + 1] > s.inner()[r]) return false;
    return true;
}

PushResult push_closure(const Partition& p, int j) {
    if (j < 1) throw std::invalid_argument("push_closure row must be positive");
    int k = j;
    while (k > 1 && p[k - 1] == p[j]) --k;
    std::vector<int> v = p.padded(j);
    PushResult res;
    for (int i = k; i <= j; ++i) {
        ++v[i - 1];
        if (i < j) res.pushed_rows.push_back(i);
    }
    res.result = Partition(v);
    return res;
}

bool add_box(const Partition& p, int i, Partition& out) {
    if (i < 1) return false;
    if (i > 1 && p[i] >= p[i - 1]) return false;
    std::vector<int> v = p.padded(i);
    ++v[i - 1];
    out = Partition(v);
    return true;
}

std::vector<int> shifted_parts(const Partition& p, int i, int delta, int len) {
    std::vector<int> v = p.padded(std::max(len, i));
    v[i - 1] += delta;
    return v;
}

std::vector<Partition> partitions_in_box(int rows, int cols) {
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int row, int maxpart) {
        out.emplace_back(cur);
        if (row > rows) return;
        for (int v = 1; v <= maxpart; ++v) {
            cur.push_back(v);
            rec(row + 1, v);
            cur.pop_back();
        }
    };
    rec(1, cols);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Partition> partitions_between(const Partition& inner, const Partition& outer) {
    std::vector<Partition> out;
    if (!contains(outer, inner)) return out;
    const int len = outer.length();
    std::vector<int> cur(len, 0);
    std::function<void(int)> rec = [&](int row) {
        if (row > len) {
            out.emplace_back(cur);
            return;
        }
        const int hi = row == 1 ? outer[1] : std::min(outer[row], cur[row - 2]);
        for (int v = inner[row]; v <= hi; ++v) {
            cur[row - 1] = v;
            rec(row + 1);
        }
        cur[row - 1] = 0;
    };
    rec(1);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Partition> corner_removals(const Partition& p) {
    const auto cs = corners(p);
    std::vector<Partition> out;
    for (unsigned mask = 0; mask < (1u << cs.size()); ++mask) {
        std::vector<int> v = p.padded(p.length());
        for (std::size_t k = 0; k < cs.size(); ++k)
            if (mask & (1u << k)) --v[cs[k].row - 1];
        out.emplace_back(v);
    }
    return out;
}

Partition parse_partition(const std::string& text) {
    std::vector<int> parts;
    std::string tok;
    auto flush = [&]() {
        if (tok.empty()) return;
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad partition entry '" + tok + "'");
        parts.push_back(v);
        tok.clear();
    };
    for (char ch : text) {
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') {
            tok.push_back(ch);
        } else if (ch == ',' || std::isspace(static_cast<unsigned char>(ch)) || ch == '[' || ch == ']') {
            flush();
        } else {
            throw std::invalid_argument(std::string("bad character in partition: ") + ch);
        }
    }
    flush();
    return Partition(parts);
}

}  // namespace tasep
