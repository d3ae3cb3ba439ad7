#pragma once

// Template definitions for poly.hpp.

namespace tasep {

template <class R>
std::vector<R> complete_table(const std::vector<R>& xs, int m) {
    std::vector<R> h(m + 1, R(0));
    if (m < 0) return h;
    h[0] = R(1);
    for (const R& x : xs)
        for (int k = 1; k <= m; ++k) h[k] += x * h[k - 1];
    return h;
}

template <class R>
std::vector<R> elementary_table(const std::vector<R>& xs, int m) {
    std::vector<R> e(m + 1, R(0));
    if (m < 0) return e;
    e[0] = R(1);
    for (const R& x : xs)
        for (int k = m; k >= 1; --k) e[k] += x * e[k - 1];
    return e;
}

template <class R>
R supersym_h(int m, const std::vector<R>& xs, const std::vector<R>& ys) {
    if (m < 0) return R(0);
    auto h = complete_table(xs, m);
    auto e = elementary_table(ys, m);
    R s(0);
    for (int k = 0; k <= m; ++k) {
        R t = h[k] * e[m - k];
        if ((m - k) % 2) s -= t;
        else s += t;
    }
    return s;
}

template <class R>
R supersym_e(int m, const std::vector<R>& xs, const std::vector<R>& ys) {
    if (m < 0) return R(0);
    auto e = elementary_table(xs, m);
    auto h = complete_table(ys, m);
    R s(0);
    for (int k = 0; k <= m; ++k) {
        R t = e[k] * h[m - k];
        if ((m - k) % 2) s -= t;
        else s += t;
    }
    return s;
}

template <class R>
Truncated<R> theta_h(int m, const std::vector<R>& xs, const std::vector<R>& ys, int trunc) {
    if (trunc < std::max(m, 0)) throw std::invalid_argument("theta_h truncation below the requested degree");
    auto hx = complete_table(xs, trunc);
    auto hy = complete_table(ys, trunc);
    R s(0);
    for (int a = std::max(m, 0); a <= trunc; ++a) {
        const int b = a - m;
        if (b < 0 || b > trunc) continue;
        s += hx[a] * hy[b];
    }
    return {s, trunc};
}

}  // namespace tasep
