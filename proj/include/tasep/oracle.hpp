#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tasep/kernels.hpp"

namespace tasep {

// Order in which particles update within one step: back first (particle ell first) or front
// first (particle 1 first). The frozen convention is back first for the geometric cases and
// front first for the Bernoulli cases.
enum class UpdateOrder { BackFirst, FrontFirst };
inline UpdateOrder default_order(CaseId cs) { return is_geometric(cs) ? UpdateOrder::BackFirst : UpdateOrder::FrontFirst; }
inline const char* order_name(UpdateOrder o) { return o == UpdateOrder::BackFirst ? "back-first" : "front-first"; }

// Exact single-step distribution obtained by enumerating every jump outcome under the particle
// update rules. Each particle acts on the current positions: blocking caps at the current
// position of the particle ahead, pushing moves every particle ahead that it passes.
// States whose first row would exceed the cap are summed into the tail.
template <class R>
struct OracleTable {
    std::map<Partition, R> prob;
    R tail = R(0);
    bool cap_exceeded = false;  // a Bernoulli outcome left the cap (the table is then incomplete)
};

namespace detail {

template <class R>
struct OracleRun {
    CaseId cs;
    const Rates<R>& rt;
    R x;
    int cap;
    UpdateOrder order;
    std::vector<int> cur;  // 1-based positions, cur[0] unused
    OracleTable<R>* out;

    int ell() const { return rt.ell; }
    int particle(int step) const { return order == UpdateOrder::BackFirst ? ell() - step : step + 1; }

    void emit(const R& mass) {
        if (is_zero(mass)) return;
        std::vector<int> parts(cur.begin() + 1, cur.end());
        if (!parts.empty() && parts.front() > cap) {
            out->tail += mass;
            out->cap_exceeded = true;
            return;
        }
        auto [it, fresh] = out->prob.emplace(Partition(parts), mass);
        if (!fresh) it->second += mass;
    }

    // Jump law for geometric cases: probability of exactly w steps and of at least w steps from m.
    R exact(int j, int m, int w) const {
        const R pj = rt.r(j);
        if (cs == CaseId::CanonicalC) {
            R s(1);
            for (int k = m; k < m + w; ++k) s *= (rt.q(k) + pj) * x / (R(1) + rt.q(k) * x);
            return s * (R(1) - pj * x) / (R(1) + rt.q(m + w) * x);
        }
        return (R(1) - pj * x) * ipow(R(pj * x), w);
    }
    R at_least(int j, int m, int w) const {
        const R pj = rt.r(j);
        if (cs == CaseId::CanonicalC) {
            R s(1);
            for (int k = m; k < m + w; ++k) s *= (rt.q(k) + pj) * x / (R(1) + rt.q(k) * x);
            return s;
        }
        return ipow(R(pj * x), w);
    }

    // Moves particle j to target, pushing the particles ahead that it passes.
    void push_to(int j, int target) {
        cur[j] = target;
        for (int i = j - 1; i >= 1 && cur[i] < target; --i) cur[i] = target;
    }

    void geometric(int step, const R& mass) {
        if (is_zero(mass)) return;
        if (step == ell()) return emit(mass);
        const int j = particle(step);
        const int m = cur[j];
        const std::vector<int> saved = cur;
        if (cs == CaseId::A) {
            int w = 0;
            for (; m + w <= cap; ++w) {
                push_to(j, m + w);
                geometric(step + 1, mass * exact(j, m, w));
                cur = saved;
            }
            // Every further jump leaves the cap; particles ahead only move further.
            out->tail += mass * at_least(j, m, w);
            return;
        }
        const bool capped = j > 1;
        const int limit = capped ? cur[j - 1] : cap;
        if (capped && m == limit) return geometric(step + 1, mass);
        for (int w = 0; m + w < limit; ++w) {
            cur[j] = m + w;
            geometric(step + 1, mass * exact(j, m, w));
        }
        cur[j] = limit;
        if (capped) {
            geometric(step + 1, mass * at_least(j, m, limit - m));
        } else {
            geometric(step + 1, mass * exact(j, m, limit - m));
            out->tail += mass * at_least(j, m, limit - m + 1);
        }
        cur = saved;
    }

    void bernoulli(int step, const R& mass) {
        if (is_zero(mass)) return;
        if (step == ell()) return emit(mass);
        const int j = particle(step);
        const int m = cur[j];
        const R rj = rt.r(j);
        const R b = cs == CaseId::CanonicalB ? rt.q(m) : R(0);
        const R denom = R(1) + rj * x;
        const R p_jump = (rj + b) * x / denom;
        const R p_stay = (R(1) - b * x) / denom;
        const std::vector<int> saved = cur;
        bernoulli(step + 1, mass * p_stay);
        if (cs == CaseId::D) push_to(j, m + 1);
        else if (!(j > 1 && m == cur[j - 1])) cur[j] = m + 1;
        bernoulli(step + 1, mass * p_jump);
        cur = saved;
    }
};

}  // namespace detail

template <class R>
OracleTable<R> brute_force_single_step(CaseId cs, const Partition& mu, int t, const Rates<R>& rt, int cap,
                                       std::optional<UpdateOrder> order = std::nullopt) {
    if (mu.length() > rt.ell) throw std::invalid_argument("initial state has more rows than particles");
    if (cap < mu[1]) throw std::invalid_argument("cap is smaller than the first part of the initial state");
    OracleTable<R> out;
    detail::OracleRun<R> run{cs, rt, rt.xi(t), cap, order.value_or(default_order(cs)), mu.padded(rt.ell), &out};
    run.cur.insert(run.cur.begin(), 0);
    if (is_geometric(cs)) run.geometric(0, R(1));
    else run.bernoulli(0, R(1));
    return out;
}

// n steps by iterating the enumeration; tail collects every path leaving the cap.
template <class R>
OracleTable<R> brute_force_kernel(CaseId cs, int n, const Partition& mu, const Rates<R>& rt, int cap,
                                  std::optional<UpdateOrder> order = std::nullopt) {
    OracleTable<R> cur;
    cur.prob.emplace(mu, R(1));
    for (int t = 1; t <= n; ++t) {
        OracleTable<R> next;
        next.tail = cur.tail;
        next.cap_exceeded = cur.cap_exceeded;
        for (const auto& [state, pr] : cur.prob) {
            auto step = brute_force_single_step(cs, state, t, rt, cap, order);
            for (const auto& [lam, q] : step.prob) {
                auto [it, fresh] = next.prob.emplace(lam, pr * q);
                if (!fresh) it->second += pr * q;
            }
            next.tail += pr * step.tail;
            next.cap_exceeded = next.cap_exceeded || step.cap_exceeded;
        }
        for (auto it = next.prob.begin(); it != next.prob.end();)
            it = is_zero(it->second) ? next.prob.erase(it) : std::next(it);
        cur = std::move(next);
    }
    return cur;
}

// Seeded random admissible rational binding for a case: x_1..x_n, rates 1..ell and position
// parameters 1..pos_max, each with small denominators.
ParamBinding random_binding(CaseId cs, int ell, int n, int pos_max, std::uint64_t seed);

}  // namespace tasep
