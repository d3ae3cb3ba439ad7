#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace tasep {

// Weakly decreasing sequence of nonnegative integers, stored without trailing zeros.
// Public indexing is 1-based: p[i] is the i-th part, zero past the length.
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts);
    explicit Partition(std::vector<int> parts);

    // Accepts any sequence; throws std::invalid_argument unless weakly decreasing and nonnegative.
    static Partition from_parts(const std::vector<int>& parts);

    int operator[](int i) const { return (i >= 1 && i <= length()) ? parts_[i - 1] : 0; }
    int length() const { return static_cast<int>(parts_.size()); }
    int size() const;
    bool empty() const { return parts_.empty(); }
    const std::vector<int>& parts() const { return parts_; }

    // Parts padded with zeros to the given length.
    std::vector<int> padded(int len) const;

    auto operator<=>(const Partition& o) const = default;
    bool operator==(const Partition& o) const = default;

    std::string str() const;

private:
    std::vector<int> parts_;
};

struct Cell {
    int row;
    int col;
    auto operator<=>(const Cell&) const = default;
};

class SkewShape {
public:
    SkewShape(Partition outer, Partition inner);
    explicit SkewShape(Partition outer) : SkewShape(std::move(outer), Partition{}) {}

    const Partition& outer() const { return outer_; }
    const Partition& inner() const { return inner_; }
    // Cells in row-major order, 1-indexed.
    const std::vector<Cell>& cells() const { return cells_; }
    int size() const { return static_cast<int>(cells_.size()); }
    bool contains(int row, int col) const;

    std::string str() const;

private:
    Partition outer_;
    Partition inner_;
    std::vector<Cell> cells_;
};

Partition conjugate(const Partition& p);
bool contains(const Partition& outer, const Partition& inner);
std::vector<Cell> corners(const Partition& p);
bool is_vertical_strip(const SkewShape& s);
bool is_horizontal_strip(const SkewShape& s);

struct PushResult {
    Partition result;
    std::vector<int> pushed_rows;
};
// Adds a box to row j and to every row above it that shares the same part.
PushResult push_closure(const Partition& p, int j);

// Adds a box to row i; returns false if the result is not a partition.
bool add_box(const Partition& p, int i, Partition& out);
// p with part i changed by delta, without any validity check on the result.
std::vector<int> shifted_parts(const Partition& p, int i, int delta, int len);

// All partitions fitting in a rows x cols box, in lexicographic order.
std::vector<Partition> partitions_in_box(int rows, int cols);
// All partitions nu with inner ⊆ nu ⊆ outer.
std::vector<Partition> partitions_between(const Partition& inner, const Partition& outer);
// Partitions obtained from p by removing any subset of its corners, including p itself.
std::vector<Partition> corner_removals(const Partition& p);

// Parses "[3,3,1]" or "3,3,1"; throws std::invalid_argument on malformed input.
Partition parse_partition(const std::string& text);

}  // namespace tasep
