#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tasep/kernels.hpp"
#include "tasep/oracle.hpp"
#include "tasep/simulate.hpp"

namespace tasep {

// Index convention of the tableau formulas and update orders of the particle rules.
struct ConventionChoice {
    IndexConvention index = IndexConvention::BetaRowAlphaCol;
    UpdateOrder geometric = UpdateOrder::BackFirst;
    UpdateOrder bernoulli = UpdateOrder::FrontFirst;

    UpdateOrder order_for(CaseId c) const { return is_geometric(c) ? geometric : bernoulli; }
    bool operator==(const ConventionChoice&) const = default;
};

// The convention set the kernels are written in.
inline ConventionChoice pinned_conventions() { return {}; }
std::string fingerprint(const ConventionChoice& c);
std::vector<ConventionChoice> candidate_conventions();

struct Grid {
    std::string name;
    std::vector<CaseId> cases;
    Partition box;  // states mu, lambda inside the box
    int max_ell = 1;
    int max_n = 1;
    int bindings = 1;
};
Grid grid_by_name(const std::string& name);  // "desk" or "smoke"

// ---------------------------------------------------------------------------------------------
// Route agreement and oracle reports.

struct RouteMismatch {
    CaseId cs;
    int ell, n;
    std::uint64_t binding_seed;
    Partition mu, lam;
    std::string detail;
};

struct RouteReport {
    long comparisons = 0;
    long mismatch_count = 0;
    std::map<std::string, long> comparisons_by_case, mismatches_by_case;
    std::vector<RouteMismatch> mismatches;  // the first few per case
    bool ok() const { return mismatch_count == 0; }
    nlohmann::json to_json() const;
};

// Enumeration oracle (with the given update orders) against the tableau (given index
// convention) and operator routes, and against the chain route when with_chain is set. The
// chain is written in the pinned update order, so arbitration leaves it out. Oracle mass
// (table plus tail) must be exactly 1 for every initial state.
RouteReport route_agreement(const Grid& g, std::uint64_t seed, const ConventionChoice& conv, bool with_chain,
                            int threads = 0);

struct ArbitrationResult {
    std::vector<std::pair<ConventionChoice, RouteReport>> candidates;
    std::optional<ConventionChoice> chosen;  // set when exactly one candidate survives
    std::string message;
    nlohmann::json to_json() const;
};
ArbitrationResult arbitrate_conventions(const Grid& g, std::uint64_t seed, int threads = 0);

struct OracleRow {
    Partition lam;
    mpq_class oracle, kernel;
    bool equal;
};
struct OracleReport {
    CaseId cs;
    Partition mu;
    int n = 0;
    ConventionChoice conv;
    std::vector<OracleRow> rows;
    mpq_class tail;
    bool ok() const;
};
OracleReport oracle_report(CaseId cs, const Partition& mu, int n, const Rates<mpq_class>& rt, int cap, Route route);

// ---------------------------------------------------------------------------------------------
// Monte Carlo against exact kernels.

struct StatRow {
    std::string state;  // partition, or "other" for the pooled remainder beyond the cap
    double empirical = 0;
    double exact = 0;
};
struct StatReport {
    long samples = 0;
    std::vector<StatRow> rows;
    double chi_square = 0;
    int dof = 0;
    double p_value = 1;
    double tv = 0;
    nlohmann::json to_json() const;
    bool passes(double tv_max = 0.01, double p_min = 0.001) const { return tv < tv_max && p_value > p_min; }
};

// Floating simulation configuration with the rates of a rational binding.
SimConfig sim_config_from(CaseId cs, int ell, int n, const ParamBinding& b, const Partition& start, std::uint64_t seed);

// Chi-square over states with expected count >= 5 (rarer states and the tail pooled), plus TV.
// fault_skew != 0 replaces every uniform u by u^(1 + skew) in the sampler.
StatReport mc_vs_exact(CaseId cs, const Partition& mu, int n, int ell, const ParamBinding& b, long samples,
                       std::uint64_t seed, int cap, double fault_skew = 0, int threads = 0);

// ---------------------------------------------------------------------------------------------
// Tableaux and particle motions.

// Filling of lam/mu: rows[i] lists the entries of row i + 1 from column mu_{i+1} + 1 on;
// a set-valued box holds several entries.
struct SkewFilling {
    Partition outer, inner;
    std::vector<std::vector<std::vector<int>>> rows;
};

SkewFilling filling_from_rows(const Partition& outer, const Partition& inner, const std::vector<std::vector<int>>& rows);

// Case A reads a reverse plane partition, Case C the smallest entries of a set-valued tableau:
// the shape at time t collects the boxes with (smallest) entry at most t. Returns shapes at
// times 0..n. Throws on a filling of the wrong family.
std::vector<Partition> decode_trajectory(CaseId cs, const SkewFilling& t, int n);
// Inverse for Cases A and C; throws if a step is not an allowed motion.
SkewFilling encode_trajectory(CaseId cs, const std::vector<Partition>& traj);
// Number of boxes of a set-valued filling holding extra entries.
int extra_entries(const SkewFilling& t);

// ---------------------------------------------------------------------------------------------
// Full validation run behind the validate command.

struct ValidationRun {
    nlohmann::json report;
    bool ok = true;
};
ValidationRun run_validation(const std::string& grid, std::uint64_t seed, int threads = 0);

}  // namespace tasep
