#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tasep/kernels.hpp"
#include "tasep/simulate.hpp"

namespace tasep::cli {

// One parameter family from a parameter file: an explicit list (index 1 first), a constant,
// or the closure s * sin(k / period)^power.
struct ParamSeq {
    std::vector<mpq_class> values;
    std::optional<mpq_class> constant;
    struct Sine {
        double scale = 0.5, period = 50, power = 6;
    };
    std::optional<Sine> sine;

    bool present() const { return !values.empty() || constant || sine; }
    bool exact() const { return !sine; }
    // Number of explicit entries; constants and closures are unbounded.
    long length() const { return (constant || sine) ? -1 : static_cast<long>(values.size()); }
    std::optional<mpq_class> exact_at(long k) const;
    double float_at(long k) const;  // 0 beyond an explicit list
};

// Parameter file: {"x": .., "pi" or "rho": .., "alpha": .., "beta": ..}. Entries are "p/q"
// strings or numbers; a whole family may be a single number (constant). "alpha" may also be
// {"form": "sine", "scale": 0.5, "period": 50, "power": 6}.
struct ParamSet {
    ParamSeq x, rate, pos;
};

ParamSet parse_params(const nlohmann::json& j, CaseId cs);
ParamSet load_params(const std::string& path, CaseId cs);

// Particle count: explicit rate list length unless given.
int resolve_ell(const ParamSet& p, std::optional<int> ell);

// Exact binding for x_1..x_n, rates 1..ell and position parameters 1..pos_max, checked per case.
// Throws ConstraintError naming the violated inequality.
ParamBinding exact_binding(const ParamSet& p, CaseId cs, int ell, int n, int pos_max);

// Floating simulation config (steps, start and seed are filled by the caller).
SimConfig float_config(const ParamSet& p, CaseId cs, int ell);

}  // namespace tasep::cli
