#include "tasep/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <utility>

#include <omp.h>

namespace tasep {

namespace {

std::string idx(const char* name, long i) { return std::string(name) + "_" + std::to_string(i); }

double pos_at(const SimConfig& c, long k, int j) {
    if (!c.pos) return 0;
    return c.pos(c.fermionic_shift ? k - j : k);
}

Positions padded_start(const SimConfig& c) {
    if (static_cast<int>(c.start.size()) > c.ell) throw std::invalid_argument("start has more particles than ell");
    Positions p = c.start;
    p.resize(c.ell, 0);
    for (int j = 1; j < c.ell; ++j)
        if (p[j] > p[j - 1]) throw std::invalid_argument("start positions must be weakly decreasing");
    if (c.ell > 0 && p.back() < 0) throw std::invalid_argument("start positions must be nonnegative");
    return p;
}

}  // namespace

std::string config_violation(const SimConfig& c) {
    if (c.ell < 1) return "ell >= 1";
    if (c.steps < 0) return "steps >= 0";
    if (!c.x || !c.rate) return "x and rates are required";
    for (int i = 1; i <= c.steps; ++i) {
        const double x = c.x(i);
        for (int j = 1; j <= c.ell; ++j) {
            const double rx = c.rate(j) * x;
            const std::string tag = idx("", j) + " " + idx("x", i);
            if (is_geometric(c.cs)) {
                if (!(rx > 0 && rx < 1)) return "0 < pi" + tag + " < 1";
            } else if (c.cs == CaseId::CanonicalB) {
                if (!(rx > -1)) return "rho" + tag + " > -1";
            } else if (!(rx > 0)) {
                return "rho" + tag + " > 0";
            }
        }
    }
    return {};
}

Positions apply_jumps(CaseId cs, const Positions& old, const std::vector<int>& jumps) {
    const int ell = static_cast<int>(old.size());
    if (static_cast<int>(jumps.size()) != ell) throw std::invalid_argument("one jump per particle");
    Positions cur = old;
    switch (cs) {
    case CaseId::A:
        for (int j = ell; j >= 1; --j) {
            const int base = j < ell ? std::max(old[j - 1], cur[j]) : old[j - 1];
            cur[j - 1] = base + jumps[j - 1];
        }
        break;
    case CaseId::C:
    case CaseId::CanonicalC:
        for (int j = ell; j >= 1; --j) {
            const int target = old[j - 1] + jumps[j - 1];
            cur[j - 1] = j > 1 ? std::min(target, old[j - 2]) : target;
        }
        break;
    case CaseId::B:
    case CaseId::CanonicalB:
        for (int j = 1; j <= ell; ++j) {
            const int m = old[j - 1];
            const bool blocked = j > 1 && m == cur[j - 2];
            if (jumps[j - 1] && !blocked) cur[j - 1] = m + 1;
        }
        break;
    case CaseId::D:
        for (int j = 1; j <= ell; ++j) {
            if (!jumps[j - 1]) continue;
            const int m = old[j - 1];
            cur[j - 1] = m + 1;
            for (int i = 1; i < j; ++i)
                if (cur[i - 1] == m) cur[i - 1] = m + 1;
        }
        break;
    }
    return cur;
}

int sample_geometric(double q, Rng& rng) {
    if (q <= 0) return 0;
    if (!(q < 1)) throw ConstraintError("geometric parameter must be below 1");
    return static_cast<int>(std::floor(std::log(rng.open_uniform()) / std::log(q)));
}

int sample_inhom_geometric(const std::function<double(long)>& alpha, double pi, double x, long m, Rng& rng, long limit) {
    long k = m;
    while (limit < 0 || k - m < limit) {
        const double a = alpha ? alpha(k) : 0.0;
        const double denom = 1 + a * x;
        if (!(denom > 0)) throw ConstraintError("alpha_" + std::to_string(k) + " x > -1");
        if (a + pi < 0) throw ConstraintError("alpha_" + std::to_string(k) + " + pi >= 0");
        if (!rng.bernoulli((a + pi) * x / denom)) break;
        ++k;
    }
    return static_cast<int>(k - m);
}

std::vector<double> inhom_geometric_pmf(const std::function<double(long)>& alpha, double pi, double x, long m, int maxval) {
    auto a = [&](long k) { return alpha ? alpha(k) : 0.0; };
    std::vector<double> out;
    double run = 1;  // probability of at least w successes
    for (int w = 0; w <= maxval; ++w) {
        const double ak = a(m + w);
        out.push_back(run * (1 - pi * x) / (1 + ak * x));
        run *= (ak + pi) * x / (1 + ak * x);
    }
    return out;
}

Positions step_discrete(const SimConfig& c, const Positions& state, int i, Rng& rng) {
    const int ell = static_cast<int>(state.size());
    const double x = c.x(i);
    std::vector<int> jumps(ell, 0);
    switch (c.cs) {
    case CaseId::A:
        for (int j = ell; j >= 1; --j) jumps[j - 1] = sample_geometric(c.rate(j) * x, rng);
        break;
    case CaseId::C:
        for (int j = ell; j >= 1; --j) {
            // Draws past the blocking particle are not needed.
            const double q = c.rate(j) * x;
            if (j > 1 && state[j - 1] == state[j - 2]) continue;
            jumps[j - 1] = sample_geometric(q, rng);
        }
        break;
    case CaseId::CanonicalC:
        for (int j = ell; j >= 1; --j) {
            const long m = state[j - 1];
            const long limit = j > 1 ? state[j - 2] - m : -1;
            if (limit == 0) continue;
            auto alpha = [&c, j](long k) { return pos_at(c, k, j); };
            jumps[j - 1] = sample_inhom_geometric(alpha, c.rate(j), x, m, rng, limit);
        }
        break;
    case CaseId::B:
    case CaseId::D:
        for (int j = 1; j <= ell; ++j) {
            const double rx = c.rate(j) * x;
            jumps[j - 1] = rng.bernoulli(rx / (1 + rx));
        }
        break;
    case CaseId::CanonicalB:
        for (int j = 1; j <= ell; ++j) {
            const double r = c.rate(j);
            const double b = pos_at(c, state[j - 1], j);
            const double p = (r + b) * x / (1 + r * x);
            if (p < 0 || p > 1) throw ConstraintError("move probability of particle " + std::to_string(j) + " outside [0, 1]");
            jumps[j - 1] = rng.bernoulli(p);
        }
        break;
    }
    return apply_jumps(c.cs, state, jumps);
}

Trajectory run(const SimConfig& c, std::uint64_t run_index) {
    Rng rng(c.seed, run_index);
    rng.inject_skew(c.fault_skew);
    Positions p = padded_start(c);
    Trajectory t{{0, p}};
    for (int i = 1; i <= c.steps; ++i) {
        p = step_discrete(c, p, i, rng);
        if ((c.record_every > 0 && i % c.record_every == 0) || i == c.steps) {
            if (t.back().time != i) t.push_back({static_cast<double>(i), p});
        }
    }
    return t;
}

Positions run_final(const SimConfig& c, std::uint64_t run_index) {
    Rng rng(c.seed, run_index);
    rng.inject_skew(c.fault_skew);
    Positions p = padded_start(c);
    for (int i = 1; i <= c.steps; ++i) p = step_discrete(c, p, i, rng);
    return p;
}

Positions run_continuous(int ell, double t, const std::function<double(int)>& rate, Rng& rng, bool push, Positions start) {
    if (t < 0) throw std::invalid_argument("time must be nonnegative");
    Positions pos = std::move(start);
    pos.resize(ell, 0);
    using Event = std::pair<double, int>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> heap;
    std::vector<double> r(ell);
    for (int j = 1; j <= ell; ++j) {
        r[j - 1] = rate(j);
        if (!(r[j - 1] > 0)) throw ConstraintError("rate_" + std::to_string(j) + " > 0");
        heap.push({rng.exponential(r[j - 1]), j});
    }
    while (!heap.empty() && heap.top().first < t) {
        auto [now, j] = heap.top();
        heap.pop();
        heap.push({now + rng.exponential(r[j - 1]), j});
        if (push) {
            ++pos[j - 1];
            for (int i = j - 1; i >= 1 && pos[i] > pos[i - 1]; --i) ++pos[i - 1];
        } else if (j == 1 || pos[j - 1] < pos[j - 2]) {
            ++pos[j - 1];
        }
    }
    return pos;
}

namespace {

template <class Draw>
RunSummary summarise(long count, int ell, int threads, bool parallel, Draw draw) {
    if (count <= 0) throw std::invalid_argument("run count must be positive");
    RunSummary s;
    s.count = count;
    s.mean.assign(ell, 0.0);
    const long block = 4096;
    std::vector<Positions> out;
    for (long lo = 0; lo < count; lo += block) {
        const long hi = std::min(count, lo + block);
        out.assign(hi - lo, {});
        const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) if (parallel)
        for (long r = lo; r < hi; ++r) out[r - lo] = draw(static_cast<std::uint64_t>(r));
        for (const auto& p : out) {
            ++s.histogram[Partition(p)];
            for (int j = 0; j < ell; ++j) s.mean[j] += p[j];
        }
    }
    for (auto& m : s.mean) m /= static_cast<double>(count);
    return s;
}

}  // namespace

RunSummary run_many(const SimConfig& c, long count, int threads) {
    return summarise(count, c.ell, threads, true, [&c](std::uint64_t r) { return run_final(c, r); });
}

RunSummary run_many_serial(const SimConfig& c, long count) {
    return summarise(count, c.ell, 1, false, [&c](std::uint64_t r) { return run_final(c, r); });
}

RunSummary run_many_continuous(const ContinuousConfig& c, long count, int threads) {
    return summarise(count, c.ell, threads, true, [&c](std::uint64_t r) {
        Rng rng(c.seed, r);
        return run_continuous(c.ell, c.t, c.rate, rng, c.push);
    });
}

RunSummary run_many_continuous_serial(const ContinuousConfig& c, long count) {
    return summarise(count, c.ell, 1, false, [&c](std::uint64_t r) {
        Rng rng(c.seed, r);
        return run_continuous(c.ell, c.t, c.rate, rng, c.push);
    });
}

std::string trajectory_csv(const Trajectory& t, int ell, bool fermionic) {
    std::ostringstream os;
    os << "step";
    for (int j = 1; j <= ell; ++j) os << ",p" << j;
    os << '\n';
    for (const auto& s : t) {
        os << s.time;
        for (int j = 1; j <= ell; ++j) os << ',' << (s.pos[j - 1] - (fermionic ? j : 0));
        os << '\n';
    }
    return os.str();
}

std::string profile_csv(const Positions& p) {
    std::ostringstream os;
    os << "particle,bosonic,fermionic,plot_x,plot_y\n";
    for (int j = 1; j <= static_cast<int>(p.size()); ++j) {
        const int f = p[j - 1] - j;
        os << j << ',' << p[j - 1] << ',' << f << ',' << f << ',' << p[j - 1] + j << '\n';
    }
    return os.str();
}

}  // namespace tasep
