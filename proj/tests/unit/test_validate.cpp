#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tasep/validate.hpp"

using namespace tasep;

namespace {

using RF = RationalFn;

RF x1() { return RF::var(X(1)); }
RF p(int j) { return RF::var(P(j)); }
RF a(int k) { return RF::var(A(k)); }

SkewFilling set_valued(const Partition& outer, const Partition& inner, std::vector<std::vector<std::vector<int>>> rows) {
    return {outer, inner, std::move(rows)};
}

}  // namespace

TEST_CASE("convention arbitration picks the pinned convention") {
    const auto arb = arbitrate_conventions(grid_by_name("smoke"), 7);
    CAPTURE(arb.message);
    REQUIRE(arb.chosen.has_value());
    CHECK(*arb.chosen == pinned_conventions());
    CHECK(arb.candidates.size() == 8);
    long survivors = 0;
    for (const auto& [c, r] : arb.candidates) survivors += r.ok();
    CHECK(survivors == 1);
    CHECK(fingerprint(pinned_conventions()) == "index=beta-row/alpha-col;geometric=back-first;bernoulli=front-first");
}

TEST_CASE("discriminating single-step examples") {
    // Case C from (1,1) with three particles: particle 2 is blocked, so only particles 1 and 3 stay.
    const auto C3 = symbolic_rates(CaseId::C, 3);
    const RF want = (RF(1) - p(1) * x1()) * (RF(1) - p(3) * x1());
    const auto oracle = brute_force_single_step(CaseId::C, {1, 1}, 1, C3, 4);
    CHECK(oracle.prob.at(Partition{1, 1}) == want);
    CHECK(kernel_tableau(CaseId::C, 1, {1, 1}, {1, 1}, C3, IndexConvention::BetaRowAlphaCol) == want);
    CHECK(kernel_tableau(CaseId::C, 1, {1, 1}, {1, 1}, C3, IndexConvention::BetaColAlphaRow) != want);
    // The front-first order caps particle 2 at the new position of particle 1.
    const auto front = brute_force_single_step(CaseId::C, {1, 1}, 1, C3, 4, UpdateOrder::FrontFirst);
    CHECK(front.prob.count(Partition{2, 2}) == 1);
    CHECK(oracle.prob.count(Partition{2, 2}) == 0);

    // Canonical example: (1,1) -> (2,1) only under the pinned convention.
    const auto K3 = symbolic_rates(CaseId::CanonicalC, 3);
    const RF d1 = RF(1) + a(1) * x1(), d2 = RF(1) + a(2) * x1();
    const RF canon = (a(1) + p(1)) * x1() * want / (d1 * d2);
    CHECK(kernel_tableau(CaseId::CanonicalC, 1, {1, 1}, {2, 1}, K3) == canon);
    CHECK(kernel_tableau(CaseId::CanonicalC, 1, {1, 1}, {2, 1}, K3, IndexConvention::BetaColAlphaRow) != canon);
}

TEST_CASE("route agreement and oracle reports") {
    const auto r = route_agreement(grid_by_name("smoke"), 3, pinned_conventions(), true);
    CHECK(r.ok());
    CHECK(r.comparisons > 1000);
    CHECK(r.comparisons_by_case.size() == all_cases().size());
    // A wrong order is caught with examples kept for review.
    ConventionChoice wrong = pinned_conventions();
    wrong.bernoulli = UpdateOrder::BackFirst;
    const auto bad = route_agreement(grid_by_name("smoke"), 3, wrong, false);
    CHECK_FALSE(bad.ok());
    CHECK(bad.mismatches_by_case.at("A") == 0);
    CHECK(bad.mismatches_by_case.at("B") > 0);
    CHECK(!bad.mismatches.empty());
    CHECK(bad.to_json()["ok"] == false);
    // Thread count does not change the report.
    CHECK(route_agreement(grid_by_name("smoke"), 3, wrong, false, 1).to_json() == bad.to_json());
    CHECK_THROWS(grid_by_name("huge"));

    for (CaseId c : all_cases()) {
        const auto rt = bound_rates(c, 3, random_binding(c, 3, 2, 10, 11));
        const auto rep = oracle_report(c, {1}, 2, rt, 5, Route::Tableau);
        CHECK(rep.ok());
        mpq_class total = rep.tail;
        for (const auto& row : rep.rows) total += row.oracle;
        CHECK(total == 1);
        if (!is_geometric(c)) CHECK(rep.tail == 0);
    }
}

TEST_CASE("Monte Carlo against exact kernels") {
    for (CaseId c : all_cases()) {
        const std::string cname = case_name(c);
        CAPTURE(cname);
        const auto b = random_binding(c, 3, 1, 8, 404);
        const auto rep = mc_vs_exact(c, {1, 1}, 1, 3, b, 100000, 7, 8);
        double emp = 0, ex = 0;
        for (const auto& row : rep.rows) {
            emp += row.empirical;
            ex += row.exact;
        }
        CHECK(emp == doctest::Approx(1.0));
        CHECK(ex == doctest::Approx(1.0));
        CHECK(rep.tv >= 0);
        CHECK(rep.tv <= 1);
        CHECK(rep.dof >= 1);
        CHECK(rep.passes());
        // Biased uniforms must be rejected.
        const auto faulty = mc_vs_exact(c, {1, 1}, 1, 3, b, 100000, 7, 8, 0.25);
        CHECK_FALSE(faulty.passes());
    }
    CHECK_THROWS(mc_vs_exact(CaseId::C, {1, 1}, 1, 3, random_binding(CaseId::C, 3, 1, 0, 1), 0, 1, 8));
}

TEST_CASE("reverse plane partitions drive the pushing motion") {
    const auto t = filling_from_rows({3, 1}, {}, {{1, 1, 1}, {2}});
    CHECK(decode_trajectory(CaseId::A, t, 2) == std::vector<Partition>{{}, {3}, {3, 1}});
    // Seven fillings of (3,1) with entries in {1,2} are reverse plane partitions.
    int valid = 0;
    for (int mask = 0; mask < 16; ++mask) {
        const auto f = filling_from_rows({3, 1}, {}, {{1 + (mask & 1), 1 + (mask >> 1 & 1), 1 + (mask >> 2 & 1)}, {1 + (mask >> 3 & 1)}});
        try {
            decode_trajectory(CaseId::A, f, 2);
            ++valid;
        } catch (const std::invalid_argument&) {
        }
    }
    CHECK(valid == 7);
    // Empty filling: nothing moves.
    const auto empty = filling_from_rows({2, 1}, {2, 1}, {{}, {}});
    CHECK(decode_trajectory(CaseId::A, empty, 3) == std::vector<Partition>(4, Partition{2, 1}));
    CHECK_THROWS(decode_trajectory(CaseId::A, set_valued({1}, {}, {{{1, 2}}}), 2));
    CHECK_THROWS(decode_trajectory(CaseId::B, t, 2));
    CHECK_THROWS(decode_trajectory(CaseId::A, t, 1));

    Rng rng(99, 0);
    for (int k = 0; k < 1000; ++k) {
        const int n = 1 + static_cast<int>(rng.next() % 5);
        std::vector<Partition> traj{Partition::from_parts({static_cast<int>(rng.next() % 2)})};
        for (int s = 1; s <= n; ++s) {
            auto q = traj.back().padded(4);
            for (int j = 0; j < 4; ++j) {
                q[j] += static_cast<int>(rng.next() % 3);
                if (j > 0) q[j] = std::min(q[j], q[j - 1]);
            }
            traj.push_back(Partition::from_parts(q));
        }
        REQUIRE(decode_trajectory(CaseId::A, encode_trajectory(CaseId::A, traj), n) == traj);
    }
}

TEST_CASE("set-valued tableaux drive the blocking motion") {
    const std::vector<Partition> want{{}, {3}, {4, 1}, {4, 1}, {5, 3, 1}, {6, 3, 1}};
    const auto minimal = filling_from_rows({6, 3, 1}, {}, {{1, 1, 1, 2, 4, 5}, {2, 4, 4}, {4}});
    CHECK(decode_trajectory(CaseId::C, minimal, 5) == want);
    const auto full = set_valued({6, 3, 1}, {},
                                 {{{1}, {1}, {1, 2}, {2, 3, 4}, {4, 5}, {5}}, {{2, 3}, {4}, {4, 5}}, {{4, 5}}});
    CHECK(decode_trajectory(CaseId::C, full, 5) == want);
    CHECK(extra_entries(full) == 6);
    CHECK(extra_entries(minimal) == 0);
    // Encoding a blocking trajectory gives back the minimal tableau.
    const auto enc = encode_trajectory(CaseId::C, want);
    CHECK(enc.rows == minimal.rows);
    // Columns must be strict, and the overlap rule applies to the largest entry.
    CHECK_THROWS(decode_trajectory(CaseId::C, filling_from_rows({1, 1}, {}, {{1}, {1}}), 2));
    CHECK_THROWS(decode_trajectory(CaseId::C, set_valued({2}, {}, {{{1, 3}, {2}}}), 3));
    CHECK_THROWS(encode_trajectory(CaseId::C, {{}, {1, 1}}));
    CHECK_THROWS(encode_trajectory(CaseId::A, {{2}, {1}}));
}

TEST_CASE("validation run") {
    const auto v = run_validation("smoke", 7);
    CAPTURE(v.report.dump(1));
    CHECK(v.ok);
    CHECK(v.report["arbitration"]["matches_pinned"] == true);
    CHECK(v.report["route_agreement"]["ok"] == true);
    CHECK(v.report.dump() == run_validation("smoke", 7, 1).report.dump());
}
