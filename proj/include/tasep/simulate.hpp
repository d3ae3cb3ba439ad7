#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tasep/kernels.hpp"
#include "tasep/rng.hpp"

namespace tasep {

// Bosonic positions, particle j at index j - 1 (weakly decreasing).
using Positions = std::vector<int>;

struct ConstraintError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SimConfig {
    CaseId cs = CaseId::C;
    int ell = 1;
    int steps = 0;
    std::function<double(int)> x;     // x_i for step i >= 1
    std::function<double(int)> rate;  // pi_j or rho_j for particle j >= 1
    std::function<double(long)> pos;  // alpha_k or beta_k by position; empty means 0
    bool fermionic_shift = false;     // read pos at the fermionic position k - j
    Positions start;                  // padded with zeros to ell
    std::uint64_t seed = 0;
    int record_every = 0;  // snapshot period in steps; 0 keeps only the start and the end
    double fault_skew = 0;  // harness self-test only: uniforms become u^(1 + skew)
};

// Empty when admissible, else the violated inequality (checked for every step and particle;
// position parameters are checked as they are read).
std::string config_violation(const SimConfig& c);

// Deterministic update from per-particle jumps (attempt bits 0/1 for Bernoulli cases).
// Geometric cases update particle ell first; Bernoulli cases update particle 1 first.
Positions apply_jumps(CaseId cs, const Positions& old, const std::vector<int>& jumps);

// Number of successes before the first failure, success probability q < 1.
int sample_geometric(double q, Rng& rng);

// Jump from position m with success probability (alpha_k + pi) x / (1 + alpha_k x) at site k.
// Stops early once the jump reaches limit (limit < 0: no limit).
int sample_inhom_geometric(const std::function<double(long)>& alpha, double pi, double x, long m, Rng& rng,
                           long limit = -1);

// Exact law of the inhomogeneous jump from m: entry w is the probability of jumping w, for w <= maxval.
std::vector<double> inhom_geometric_pmf(const std::function<double(long)>& alpha, double pi, double x, long m, int maxval);

// One synchronous round at step i.
Positions step_discrete(const SimConfig& c, const Positions& state, int i, Rng& rng);

struct Snapshot {
    double time;
    Positions pos;
};
using Trajectory = std::vector<Snapshot>;

// Run number `run` uses stream `run` of the configured seed.
Trajectory run(const SimConfig& c, std::uint64_t run = 0);
Positions run_final(const SimConfig& c, std::uint64_t run = 0);

// Exponential clocks in a binary heap keyed by (next event time, particle); only the fired
// particle's clock is redrawn.
Positions run_continuous(int ell, double t, const std::function<double(int)>& rate, Rng& rng, bool push,
                         Positions start = {});

struct ContinuousConfig {
    int ell = 1;
    double t = 0;
    std::function<double(int)> rate;
    bool push = false;
    std::uint64_t seed = 0;
};

struct RunSummary {
    long count = 0;
    std::map<Partition, long> histogram;
    std::vector<double> mean;  // mean position per particle
    bool operator==(const RunSummary&) const = default;
};

// Independent runs 0..count-1, merged in run order; identical for every thread count.
RunSummary run_many(const SimConfig& c, long count, int threads = 0);
RunSummary run_many_serial(const SimConfig& c, long count);
RunSummary run_many_continuous(const ContinuousConfig& c, long count, int threads = 0);
RunSummary run_many_continuous_serial(const ContinuousConfig& c, long count);

// Trajectory CSV: step, then ell positions (bosonic, or fermionic lam_j - j).
std::string trajectory_csv(const Trajectory& t, int ell, bool fermionic = false);
// Particle profile CSV: particle, bosonic and fermionic position, and the rotated plot
// coordinates (lam_j - j, lam_j + j).
std::string profile_csv(const Positions& p);

}  // namespace tasep
