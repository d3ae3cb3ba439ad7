#include "tasep/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <omp.h>

#include "tasep/rng.hpp"

namespace tasep {

using nlohmann::json;

std::string fingerprint(const ConventionChoice& c) {
    return std::string("index=") + convention_name(c.index) + ";geometric=" + order_name(c.geometric) +
           ";bernoulli=" + order_name(c.bernoulli);
}

std::vector<ConventionChoice> candidate_conventions() {
    std::vector<ConventionChoice> out;
    for (auto idx : {IndexConvention::BetaRowAlphaCol, IndexConvention::BetaColAlphaRow})
        for (auto g : {UpdateOrder::BackFirst, UpdateOrder::FrontFirst})
            for (auto b : {UpdateOrder::BackFirst, UpdateOrder::FrontFirst}) out.push_back({idx, g, b});
    return out;
}

Grid grid_by_name(const std::string& name) {
    if (name == "desk") return {"desk", all_cases(), {3, 3, 3}, 4, 2, 5};
    if (name == "smoke") return {"smoke", all_cases(), {2, 2}, 3, 2, 2};
    throw std::invalid_argument("unknown grid '" + name + "' (expected desk or smoke)");
}

// ---------------------------------------------------------------------------------------------

namespace {

int order_index(UpdateOrder o) { return o == UpdateOrder::BackFirst ? 0 : 1; }
int conv_index(IndexConvention c) { return c == IndexConvention::BetaRowAlphaCol ? 0 : 1; }

// Route values at one grid point; a route that throws leaves its value empty.
struct Point {
    Partition mu, lam;
    int n = 0;
    std::optional<mpq_class> oracle[2];  // by update order
    std::optional<mpq_class> tableau[2];  // by index convention
    std::optional<mpq_class> op, chain;
    std::string error;
};

struct Item {
    CaseId cs = CaseId::A;
    int ell = 1;
    std::uint64_t binding_seed = 0;
    std::vector<Point> points;
    bool mass_ok[2] = {true, true};
    std::string mass_detail[2];
};

std::uint64_t binding_seed(std::uint64_t seed, CaseId cs, int ell, int b) {
    return mix64(seed * 0x100000001B3ULL + static_cast<std::uint64_t>(cs) * 1000 + ell * 10 + b);
}

template <class F>
std::optional<mpq_class> attempt(F f, std::string& err) {
    try {
        return f();
    } catch (const std::exception& e) {
        if (err.empty()) err = e.what();
        return std::nullopt;
    }
}

void evaluate_item(const Grid& g, Item& it) {
    const int cap = g.box[1];
    const auto bind = random_binding(it.cs, it.ell, g.max_n, cap + 2, it.binding_seed);
    const auto rt = bound_rates(it.cs, it.ell, bind);
    std::vector<Partition> states;
    for (const auto& p : partitions_between({}, g.box))
        if (p.length() <= it.ell) states.push_back(p);
    for (int n = 1; n <= g.max_n; ++n)
        for (const auto& mu : states) {
            OracleTable<mpq_class> oracle[2];
            for (auto o : {UpdateOrder::BackFirst, UpdateOrder::FrontFirst}) {
                const int k = order_index(o);
                oracle[k] = brute_force_kernel(it.cs, n, mu, rt, cap, o);
                mpq_class total = oracle[k].tail;
                for (const auto& [lam, p] : oracle[k].prob) total += p;
                if (total != 1 && it.mass_ok[k]) {
                    it.mass_ok[k] = false;
                    it.mass_detail[k] = "oracle mass " + total.get_str() + " from " + mu.str();
                }
            }
            for (const auto& lam : states) {
                if (!contains(lam, mu)) continue;
                Point p;
                p.mu = mu;
                p.lam = lam;
                p.n = n;
                for (int k = 0; k < 2; ++k) {
                    auto f = oracle[k].prob.find(lam);
                    p.oracle[k] = f == oracle[k].prob.end() ? mpq_class(0) : f->second;
                }
                for (auto c : {IndexConvention::BetaRowAlphaCol, IndexConvention::BetaColAlphaRow})
                    p.tableau[conv_index(c)] = attempt([&] { return kernel_tableau(it.cs, n, mu, lam, rt, c); }, p.error);
                p.op = attempt([&] { return kernel_operator(it.cs, n, mu, lam, rt); }, p.error);
                p.chain = attempt([&] { return kernel_chain(it.cs, n, mu, lam, rt); }, p.error);
                it.points.push_back(std::move(p));
            }
        }
}

std::vector<Item> evaluate_grid(const Grid& g, std::uint64_t seed, int threads) {
    std::vector<Item> items;
    for (CaseId cs : g.cases)
        for (int ell = 1; ell <= g.max_ell; ++ell)
            for (int b = 0; b < g.bindings; ++b) {
                Item it;
                it.cs = cs;
                it.ell = ell;
                it.binding_seed = binding_seed(seed, cs, ell, b);
                items.push_back(std::move(it));
            }
    const long count = static_cast<long>(items.size());
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long k = 0; k < count; ++k) evaluate_item(g, items[k]);
    return items;
}

std::string show(const std::optional<mpq_class>& v) { return v ? v->get_str() : std::string("error"); }

RouteReport judge(const std::vector<Item>& items, const ConventionChoice& conv, bool with_chain) {
    const int keep = 3;
    RouteReport r;
    for (const auto& it : items) {
        const std::string cname = case_name(it.cs);
        const int o = order_index(conv.order_for(it.cs));
        const int c = conv_index(conv.index);
        auto fail = [&](const Partition& mu, const Partition& lam, int n, std::string detail) {
            ++r.mismatch_count;
            if (r.mismatches_by_case[cname]++ < keep)
                r.mismatches.push_back({it.cs, it.ell, n, it.binding_seed, mu, lam, std::move(detail)});
        };
        r.mismatches_by_case.try_emplace(cname, 0);
        if (!it.mass_ok[o]) fail({}, {}, 0, it.mass_detail[o]);
        for (const auto& p : it.points) {
            ++r.comparisons;
            ++r.comparisons_by_case[cname];
            const auto& want = p.oracle[o];
            const bool tab_ok = p.tableau[c] && *p.tableau[c] == *want;
            const bool op_ok = p.op && *p.op == *want;
            const bool chain_ok = !with_chain || (p.chain && *p.chain == *want);
            if (tab_ok && op_ok && chain_ok) continue;
            std::string d = "oracle " + show(want) + ", tableau " + show(p.tableau[c]) + ", operator " + show(p.op);
            if (with_chain) d += ", chain " + show(p.chain);
            if (!p.error.empty()) d += " (" + p.error + ")";
            fail(p.mu, p.lam, p.n, d);
        }
    }
    return r;
}

ArbitrationResult arbitrate(const std::vector<Item>& items) {
    ArbitrationResult out;
    std::vector<ConventionChoice> survivors;
    for (const auto& c : candidate_conventions()) {
        auto r = judge(items, c, false);
        if (r.ok()) survivors.push_back(c);
        out.candidates.emplace_back(c, std::move(r));
    }
    if (survivors.size() == 1) {
        out.chosen = survivors.front();
        out.message = "unique surviving convention: " + fingerprint(survivors.front());
    } else if (survivors.empty()) {
        out.message = "no candidate convention reproduces the oracle on every grid point";
    } else {
        out.message = std::to_string(survivors.size()) + " candidate conventions survive; the grid does not discriminate";
    }
    return out;
}

}  // namespace

json RouteReport::to_json() const {
    json j{{"comparisons", comparisons}, {"mismatches", mismatch_count}, {"ok", ok()}};
    json by = json::object();
    for (const auto& [k, v] : comparisons_by_case) {
        auto m = mismatches_by_case.find(k);
        by[k] = {{"comparisons", v}, {"mismatches", m == mismatches_by_case.end() ? 0L : m->second}};
    }
    j["by_case"] = by;
    json ex = json::array();
    for (const auto& m : mismatches)
        ex.push_back({{"case", case_name(m.cs)},
                      {"ell", m.ell},
                      {"n", m.n},
                      {"binding_seed", m.binding_seed},
                      {"mu", m.mu.str()},
                      {"lambda", m.lam.str()},
                      {"detail", m.detail}});
    j["examples"] = ex;
    return j;
}

RouteReport route_agreement(const Grid& g, std::uint64_t seed, const ConventionChoice& conv, bool with_chain, int threads) {
    return judge(evaluate_grid(g, seed, threads), conv, with_chain);
}

ArbitrationResult arbitrate_conventions(const Grid& g, std::uint64_t seed, int threads) {
    return arbitrate(evaluate_grid(g, seed, threads));
}

json ArbitrationResult::to_json() const {
    json cands = json::array();
    for (const auto& [c, r] : candidates) {
        json e{{"fingerprint", fingerprint(c)}, {"survives", r.ok()}, {"mismatches", r.mismatch_count}};
        json by = json::object();
        for (const auto& [k, v] : r.mismatches_by_case) by[k] = v;
        e["mismatches_by_case"] = by;
        cands.push_back(e);
    }
    json j{{"candidates", cands}, {"message", message}};
    j["chosen"] = chosen ? json(fingerprint(*chosen)) : json(nullptr);
    return j;
}

bool OracleReport::ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const OracleRow& r) { return r.equal; });
}

OracleReport oracle_report(CaseId cs, const Partition& mu, int n, const Rates<mpq_class>& rt, int cap, Route route) {
    OracleReport rep{cs, mu, n, pinned_conventions(), {}, 0};
    const auto oracle = brute_force_kernel(cs, n, mu, rt, cap);
    rep.tail = oracle.tail;
    for (const auto& lam : partitions_in_box(rt.ell, cap)) {
        if (!contains(lam, mu)) continue;
        auto f = oracle.prob.find(lam);
        const mpq_class o = f == oracle.prob.end() ? mpq_class(0) : f->second;
        const mpq_class k = kernel(cs, route, n, mu, lam, rt);
        if (o == 0 && k == 0) continue;
        rep.rows.push_back({lam, o, k, o == k});
    }
    return rep;
}

// ---------------------------------------------------------------------------------------------

SimConfig sim_config_from(CaseId cs, int ell, int n, const ParamBinding& b, const Partition& start, std::uint64_t seed) {
    const auto rt = bound_rates(cs, ell, b);
    std::vector<double> x(n + 1), rate(ell + 1), pos;
    for (int i = 1; i <= n; ++i) x[i] = rt.xi(i).get_d();
    for (int j = 1; j <= ell; ++j) rate[j] = rt.r(j).get_d();
    const Family fam = cs == CaseId::CanonicalC ? Family::A : Family::B;
    int pos_max = 0;
    for (const auto& [v, q] : b)
        if (v.family == fam) pos_max = std::max(pos_max, v.index);
    pos.assign(pos_max + 1, 0.0);
    for (int k = 1; k <= pos_max; ++k) pos[k] = rt.q(k).get_d();
    SimConfig c;
    c.cs = cs;
    c.ell = ell;
    c.steps = n;
    c.x = [x](int i) { return x.at(i); };
    c.rate = [rate](int j) { return rate.at(j); };
    if (cs == CaseId::CanonicalC || cs == CaseId::CanonicalB)
        c.pos = [pos](long k) { return k >= 1 && k < static_cast<long>(pos.size()) ? pos[k] : 0.0; };
    c.start = start.parts();
    c.seed = seed;
    return c;
}

json StatReport::to_json() const {
    json r = json::array();
    for (const auto& s : rows) r.push_back({{"state", s.state}, {"empirical", s.empirical}, {"exact", s.exact}});
    return {{"samples", samples}, {"chi_square", chi_square}, {"dof", dof}, {"p_value", p_value},
            {"tv", tv},           {"states", r}};
}

StatReport mc_vs_exact(CaseId cs, const Partition& mu, int n, int ell, const ParamBinding& b, long samples,
                       std::uint64_t seed, int cap, double fault_skew, int threads) {
    if (samples <= 0) throw std::invalid_argument("sample count must be positive");
    const auto rt = bound_rates(cs, ell, b);
    const auto exact = kernel_table(cs, n, mu, rt, cap);
    auto cfg = sim_config_from(cs, ell, n, b, mu, seed);
    if (const auto v = config_violation(cfg); !v.empty()) throw ConstraintError(v);
    cfg.fault_skew = fault_skew;
    const auto sim = run_many(cfg, samples, threads);

    StatReport rep;
    rep.samples = samples;
    const double N = static_cast<double>(samples);
    double other_emp = 1, other_exact = exact.tail.get_d();
    struct Bin {
        double observed, expected;
    };
    std::vector<Bin> bins;
    Bin pooled{0, 0};
    for (const auto& [lam, p] : exact.prob) {
        auto f = sim.histogram.find(lam);
        const double count = f == sim.histogram.end() ? 0.0 : static_cast<double>(f->second);
        const double e = p.get_d();
        rep.rows.push_back({lam.str(), count / N, e});
        other_emp -= count / N;
        rep.tv += std::fabs(count / N - e);
        if (e * N >= 5) bins.push_back({count, e * N});
        else pooled = {pooled.observed + count, pooled.expected + e * N};
    }
    other_emp = std::max(other_emp, 0.0);
    rep.rows.push_back({"other", other_emp, other_exact});
    rep.tv = (rep.tv + std::fabs(other_emp - other_exact)) / 2;
    pooled = {pooled.observed + other_emp * N, pooled.expected + other_exact * N};
    if (pooled.expected >= 5 || bins.empty()) {
        bins.push_back(pooled);
    } else {
        auto smallest = std::min_element(bins.begin(), bins.end(), [](const Bin& a, const Bin& c) { return a.expected < c.expected; });
        smallest->observed += pooled.observed;
        smallest->expected += pooled.expected;
    }
    for (const auto& bin : bins)
        if (bin.expected > 0) rep.chi_square += (bin.observed - bin.expected) * (bin.observed - bin.expected) / bin.expected;
        else if (bin.observed > 0) rep.chi_square = INFINITY;
    rep.dof = static_cast<int>(bins.size()) - 1;
    if (rep.dof <= 0) rep.p_value = rep.chi_square == 0 ? 1.0 : 0.0;
    else if (std::isinf(rep.chi_square)) rep.p_value = 0;
    else rep.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(rep.dof), rep.chi_square));
    return rep;
}

// ---------------------------------------------------------------------------------------------

SkewFilling filling_from_rows(const Partition& outer, const Partition& inner, const std::vector<std::vector<int>>& rows) {
    if (!contains(outer, inner)) throw std::invalid_argument("inner shape is not contained in the outer shape");
    SkewFilling t{outer, inner, {}};
    if (static_cast<int>(rows.size()) > outer.length()) throw std::invalid_argument("more rows than the outer shape");
    for (int i = 1; i <= outer.length(); ++i) {
        const std::vector<int> r = i <= static_cast<int>(rows.size()) ? rows[i - 1] : std::vector<int>{};
        if (static_cast<int>(r.size()) != outer[i] - inner[i])
            throw std::invalid_argument("row " + std::to_string(i) + " has " + std::to_string(r.size()) + " entries, expected " +
                                        std::to_string(outer[i] - inner[i]));
        std::vector<std::vector<int>> boxes;
        for (int v : r) boxes.push_back({v});
        t.rows.push_back(std::move(boxes));
    }
    return t;
}

namespace {

const std::vector<int>& box_at(const SkewFilling& t, int i, int c) { return t.rows[i - 1][c - t.inner[i] - 1]; }
bool in_skew(const SkewFilling& t, int i, int c) { return i >= 1 && i <= t.outer.length() && c > t.inner[i] && c <= t.outer[i]; }

void check_filling(CaseId cs, const SkewFilling& t, int n) {
    if (cs != CaseId::A && cs != CaseId::C) throw std::invalid_argument("trajectory decoding is defined for cases A and C");
    if (!contains(t.outer, t.inner)) throw std::invalid_argument("inner shape is not contained in the outer shape");
    if (static_cast<int>(t.rows.size()) != t.outer.length()) throw std::invalid_argument("filling rows do not match the shape");
    for (int i = 1; i <= t.outer.length(); ++i) {
        if (static_cast<int>(t.rows[i - 1].size()) != t.outer[i] - t.inner[i])
            throw std::invalid_argument("filling row " + std::to_string(i) + " does not match the shape");
        for (int c = t.inner[i] + 1; c <= t.outer[i]; ++c) {
            const auto& b = box_at(t, i, c);
            if (b.empty()) throw std::invalid_argument("empty box in filling");
            if (cs == CaseId::A && b.size() != 1) throw std::invalid_argument("reverse plane partitions hold one entry per box");
            if (!std::is_sorted(b.begin(), b.end()) || std::adjacent_find(b.begin(), b.end()) != b.end())
                throw std::invalid_argument("box entries must be distinct and increasing");
            if (b.front() < 1 || b.back() > n) throw std::invalid_argument("entries must lie in 1..n");
            if (in_skew(t, i, c + 1) && b.back() > box_at(t, i, c + 1).front())
                throw std::invalid_argument("rows must weakly increase");
            if (in_skew(t, i + 1, c)) {
                const int below = box_at(t, i + 1, c).front();
                if (cs == CaseId::A ? b.back() > below : b.back() >= below)
                    throw std::invalid_argument(cs == CaseId::A ? "columns must weakly increase" : "columns must strictly increase");
            }
        }
    }
}

}  // namespace

std::vector<Partition> decode_trajectory(CaseId cs, const SkewFilling& t, int n) {
    check_filling(cs, t, n);
    std::vector<Partition> out;
    for (int time = 0; time <= n; ++time) {
        std::vector<int> parts;
        for (int i = 1; i <= t.outer.length(); ++i) {
            int len = t.inner[i];
            while (len < t.outer[i] && box_at(t, i, len + 1).front() <= time) ++len;
            parts.push_back(len);
        }
        out.push_back(Partition::from_parts(parts));
    }
    return out;
}

SkewFilling encode_trajectory(CaseId cs, const std::vector<Partition>& traj) {
    if (cs != CaseId::A && cs != CaseId::C) throw std::invalid_argument("trajectory encoding is defined for cases A and C");
    if (traj.empty()) throw std::invalid_argument("empty trajectory");
    for (std::size_t t = 1; t < traj.size(); ++t) {
        if (!contains(traj[t], traj[t - 1])) throw std::invalid_argument("particles never move backwards");
        if (cs == CaseId::C && !is_horizontal_strip(SkewShape(traj[t], traj[t - 1])))
            throw std::invalid_argument("a blocking step must not pass the particle ahead");
    }
    const Partition& outer = traj.back();
    const Partition& inner = traj.front();
    SkewFilling f{outer, inner, {}};
    for (int i = 1; i <= outer.length(); ++i) {
        std::vector<std::vector<int>> row;
        for (int c = inner[i] + 1; c <= outer[i]; ++c) {
            int time = 1;
            while (traj[time][i] < c) ++time;
            row.push_back({time});
        }
        f.rows.push_back(std::move(row));
    }
    return f;
}

int extra_entries(const SkewFilling& t) {
    int k = 0;
    for (const auto& row : t.rows)
        for (const auto& b : row) k += b.size() > 1;
    return k;
}

// ---------------------------------------------------------------------------------------------

ValidationRun run_validation(const std::string& grid_name, std::uint64_t seed, int threads) {
    const Grid g = grid_by_name(grid_name);
    ValidationRun out;
    json& rep = out.report;
    rep["grid"] = {{"name", g.name}, {"box", g.box.str()}, {"max_ell", g.max_ell}, {"max_n", g.max_n}, {"bindings", g.bindings}};

    const auto items = evaluate_grid(g, seed, threads);
    const ArbitrationResult arb = arbitrate(items);
    const bool pinned_ok = arb.chosen && *arb.chosen == pinned_conventions();
    rep["arbitration"] = arb.to_json();
    rep["arbitration"]["matches_pinned"] = pinned_ok;
    out.ok = out.ok && pinned_ok;

    const auto routes = judge(items, pinned_conventions(), true);
    rep["route_agreement"] = routes.to_json();
    out.ok = out.ok && routes.ok();

    const long samples = 100000;
    json stats = json::array();
    for (CaseId cs : all_cases()) {
        const auto b = random_binding(cs, 3, 1, 8, binding_seed(seed, cs, 3, 99));
        const auto honest = mc_vs_exact(cs, {1, 1}, 1, 3, b, samples, seed, 8, 0, threads);
        const auto faulty = mc_vs_exact(cs, {1, 1}, 1, 3, b, samples, seed, 8, 0.25, threads);
        const bool ok = honest.passes() && !faulty.passes();
        stats.push_back({{"case", case_name(cs)},
                         {"tv", honest.tv},
                         {"p_value", honest.p_value},
                         {"fault_injected_p_value", faulty.p_value},
                         {"fault_injected_tv", faulty.tv},
                         {"ok", ok}});
        out.ok = out.ok && ok;
    }
    rep["statistics"] = {{"samples", samples}, {"cases", stats}};

    bool decode_ok = true;
    Rng rng(seed, 1u << 20);
    for (int k = 0; k < 1000 && decode_ok; ++k) {
        const int n = 1 + static_cast<int>(rng.next() % 4);
        std::vector<Partition> traj{Partition{}};
        for (int t = 1; t <= n; ++t) {
            std::vector<int> p = traj.back().padded(3);
            for (int j = 0; j < 3; ++j) {
                p[j] += static_cast<int>(rng.next() % 3);
                if (j > 0) p[j] = std::min(p[j], p[j - 1]);
            }
            traj.push_back(Partition::from_parts(p));
        }
        decode_ok = decode_trajectory(CaseId::A, encode_trajectory(CaseId::A, traj), n) == traj;
    }
    rep["decode_round_trip"] = {{"trajectories", 1000}, {"ok", decode_ok}};
    out.ok = out.ok && decode_ok;
    rep["ok"] = out.ok;
    return out;
}

}  // namespace tasep
