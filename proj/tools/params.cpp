#include "params.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace tasep::cli {

using nlohmann::json;

namespace {

mpq_class parse_value(const json& v, const std::string& name) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (v.is_number()) {
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw std::invalid_argument(name + ": entries must be finite");
        mpq_class q(d);
        q.canonicalize();
        return q;
    }
    throw std::invalid_argument(name + ": entries must be \"p/q\" strings or numbers");
}

ParamSeq parse_seq(const json& v, const std::string& name) {
    ParamSeq s;
    if (v.is_array()) {
        for (const auto& e : v) s.values.push_back(parse_value(e, name));
    } else if (v.is_object()) {
        if (v.value("form", std::string()) != "sine") throw std::invalid_argument(name + ": the only named form is \"sine\"");
        ParamSeq::Sine f;
        f.scale = v.value("scale", f.scale);
        f.period = v.value("period", f.period);
        f.power = v.value("power", f.power);
        if (!(f.period != 0)) throw std::invalid_argument(name + ": period must be nonzero");
        s.sine = f;
    } else {
        s.constant = parse_value(v, name);
    }
    return s;
}

}  // namespace

std::optional<mpq_class> ParamSeq::exact_at(long k) const {
    if (constant) return *constant;
    if (sine) return std::nullopt;
    if (k >= 1 && k <= static_cast<long>(values.size())) return values[k - 1];
    return std::nullopt;
}

double ParamSeq::float_at(long k) const {
    if (sine) return sine->scale * std::pow(std::sin(k / sine->period), sine->power);
    const auto v = exact_at(k);
    return v ? v->get_d() : 0.0;
}

ParamSet parse_params(const json& j, CaseId cs) {
    if (!j.is_object()) throw std::invalid_argument("parameter file must hold a JSON object");
    for (const auto& [k, v] : j.items())
        if (k != "x" && k != "pi" && k != "rho" && k != "alpha" && k != "beta")
            throw std::invalid_argument("unknown parameter family '" + k + "'");
    ParamSet p;
    if (j.contains("x")) p.x = parse_seq(j["x"], "x");
    if (j.contains("pi") && j.contains("rho")) throw std::invalid_argument("give either pi or rho, not both");
    if (j.contains("pi")) p.rate = parse_seq(j["pi"], "pi");
    if (j.contains("rho")) p.rate = parse_seq(j["rho"], "rho");
    if (p.rate.sine || p.x.sine) throw std::invalid_argument("the sine form applies to position parameters only");
    const char* pos_name = cs == CaseId::CanonicalB ? "beta" : "alpha";
    const char* other = cs == CaseId::CanonicalB ? "alpha" : "beta";
    if (j.contains(pos_name)) p.pos = parse_seq(j[pos_name], pos_name);
    if (j.contains(other) || ((cs != CaseId::CanonicalB && cs != CaseId::CanonicalC) && p.pos.present()))
        throw std::invalid_argument(std::string("case ") + case_name(cs) + " takes no '" +
                                    (j.contains(other) ? other : pos_name) + "' parameters");
    return p;
}

ParamSet load_params(const std::string& path, CaseId cs) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open parameter file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("parameter file " + path + " is not valid JSON: " + e.what());
    }
    return parse_params(j, cs);
}

int resolve_ell(const ParamSet& p, std::optional<int> ell) {
    if (ell) {
        if (*ell < 1) throw std::invalid_argument("ell must be at least 1");
        if (p.rate.length() >= 0 && p.rate.length() < *ell)
            throw std::invalid_argument("rate list has " + std::to_string(p.rate.length()) + " entries, fewer than ell");
        return *ell;
    }
    if (p.rate.length() < 0) throw std::invalid_argument("a constant rate needs --ell");
    if (p.rate.length() == 0) throw std::invalid_argument("missing particle rates (pi or rho)");
    return static_cast<int>(p.rate.length());
}

ParamBinding exact_binding(const ParamSet& p, CaseId cs, int ell, int n, int pos_max) {
    if (!p.pos.exact()) throw std::invalid_argument("exact computations need explicit or constant position parameters");
    ParamBinding b;
    for (int i = 1; i <= n; ++i) {
        const auto v = p.x.exact_at(i);
        if (!v) throw std::invalid_argument("x has fewer than n = " + std::to_string(n) + " entries");
        b[X(i)] = *v;
    }
    for (int j = 1; j <= ell; ++j) b[P(j)] = *p.rate.exact_at(j);
    const auto fam = cs == CaseId::CanonicalB ? B : A;
    if (cs == CaseId::CanonicalB || cs == CaseId::CanonicalC)
        for (int k = 1; k <= pos_max; ++k)
            if (const auto v = p.pos.exact_at(k)) b[fam(k)] = *v;
    if (const auto bad = binding_violation(cs, ell, n, pos_max, b); !bad.empty()) throw ConstraintError(bad);
    return b;
}

SimConfig float_config(const ParamSet& p, CaseId cs, int ell) {
    SimConfig c;
    c.cs = cs;
    c.ell = ell;
    if (!p.x.present()) throw std::invalid_argument("missing x");
    std::vector<double> rate(ell + 1);
    for (int j = 1; j <= ell; ++j) rate[j] = p.rate.float_at(j);
    c.rate = [rate](int j) { return rate.at(j); };
    if (p.x.constant) {
        const double x = p.x.constant->get_d();
        c.x = [x](int) { return x; };
    } else {
        std::vector<double> xs;
        for (const auto& v : p.x.values) xs.push_back(v.get_d());
        c.x = [xs](int i) {
            if (i < 1 || i > static_cast<int>(xs.size())) throw std::invalid_argument("x has fewer entries than steps");
            return xs[i - 1];
        };
    }
    if (p.pos.present()) {
        const ParamSeq pos = p.pos;
        if (pos.constant || pos.sine) {
            c.pos = [pos](long k) { return k <= 0 ? 0.0 : pos.float_at(k); };
        } else {
            std::vector<double> v;
            for (const auto& q : pos.values) v.push_back(q.get_d());
            c.pos = [v](long k) { return k >= 1 && k <= static_cast<long>(v.size()) ? v[k - 1] : 0.0; };
        }
    }
    return c;
}

}  // namespace tasep::cli
