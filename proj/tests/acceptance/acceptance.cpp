// Acceptance runner: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tasep/multipoint.hpp"
#include "tasep/oracle.hpp"
#include "tasep/simulate.hpp"
#include "tasep/validate.hpp"

using namespace tasep;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Proc {
    int status = -1;
    std::string out;
};

Proc run_process(const std::string& cmd) {
    Proc p;
    FILE* f = popen((cmd + " 2>&1").c_str(), "r");
    if (!f) return p;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, f)) > 0) p.out.append(buf, got);
    const int st = pclose(f);
    p.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return p;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
    std::ostringstream o;
    o.precision(prec);
    o << v;
    return o.str();
}

// Runs the named doctest cases of one unit binary; all of them must run and pass.
bool unit_cases(const std::string& binary, const std::vector<std::string>& cases, std::string& detail) {
    std::string filter;
    for (const auto& c : cases) filter += (filter.empty() ? "" : ",") + c;
    const auto p = run_process(std::string(TASEP_BIN_DIR) + "/" + binary + " -tc=" + quote(filter));
    std::smatch m;
    static const std::regex summary(R"(test cases:\s*(\d+)\s*\|\s*(\d+) passed\s*\|\s*(\d+) failed)");
    const bool parsed = std::regex_search(p.out, m, summary);
    const long passed = parsed ? std::stol(m[2]) : -1, failed = parsed ? std::stol(m[3]) : -1;
    const bool ok = p.status == 0 && failed == 0 && passed == static_cast<long>(cases.size());
    detail += binary + " " + std::to_string(passed) + "/" + std::to_string(cases.size()) + "; ";
    return ok;
}

Outcome suites(const std::vector<std::pair<std::string, std::vector<std::string>>>& groups) {
    Outcome o;
    for (const auto& [bin, cases] : groups) o.pass = unit_cases(bin, cases, o.detail) && o.pass;
    return o;
}

// ---------------------------------------------------------------------------------------------

Outcome criterion1() {
    const auto r = route_agreement(grid_by_name("desk"), 20240601, pinned_conventions(), true);
    Outcome o{r.ok(), std::to_string(r.comparisons) + " comparisons, " + std::to_string(r.mismatch_count) + " mismatches"};
    for (const char* c : {"A", "B", "C", "D"})
        if (!r.comparisons_by_case.count(c) || r.comparisons_by_case.at(c) == 0) {
            o.pass = false;
            o.detail += "; no comparisons for case " + std::string(c);
        }
    return o;
}

Outcome criterion2() {
    return suites({{"test_operators",
                    {"blocking operator examples", "pushing operator examples",
                     "pushing operator single action on the empty partition", "noncommutative e and h",
                     "noncommutative h and e on*"}},
                   {"test_multipoint", {"pushing examples expand in Schur polynomials"}},
                   {"test_kernels", {"single-step examples"}},
                   {"test_tableaux", {"set-valued G examples", "double-slash G examples", "dual Grothendieck g and j examples"}},
                   {"test_validate", {"discriminating single-step examples"}}});
}

Outcome criterion3() { return suites({{"test_operators", {"Knuth relations"}}}); }

Outcome criterion4() {
    return suites({{"test_tableaux",
                    {"omega duality between g and j", "branching rules", "skew Cauchy through total degree 4", "flagged Schur"}},
                   {"test_kernels", {"skew Pieri normalisation"}}});
}

std::vector<Partition> within(const Partition& box, int ell) {
    std::vector<Partition> out;
    for (const auto& l : partitions_between({}, box))
        if (l.length() <= ell) out.push_back(l);
    return out;
}

// Geometric bindings are scaled so that every pi_j x_i is at most 1/4.
Rates<mpq_class> quarter_rates(CaseId c, int ell, int n, std::uint64_t seed) {
    auto b = random_binding(c, ell, n, 13, seed);
    if (is_geometric(c)) {
        mpq_class pmax = 0;
        for (int j = 1; j <= ell; ++j) pmax = std::max(pmax, mpq_class(b.at(P(j))));
        for (int i = 1; i <= n; ++i) {
            const mpq_class bound = mpq_class(1, 4) / pmax;
            if (b.at(X(i)) > bound) b[X(i)] = bound;
        }
        if (const auto bad = binding_violation(c, ell, n, 13, b); !bad.empty()) throw std::logic_error(bad);
    }
    return bound_rates(c, ell, b);
}

Outcome criterion5() {
    Outcome o;
    long checks = 0;
    bool within_bounds = true;
    double max_tail = 0, max_alt = 0;
    std::map<std::string, double> case_tail;
    for (CaseId c : all_cases()) {
        if (c == CaseId::CanonicalB) continue;
        for (int ell = 1; ell <= 3; ++ell)
            for (int n = 1; n <= 2; ++n)
                for (std::uint64_t s = 1; s <= 2; ++s) {
                    const auto rt = quarter_rates(c, ell, n, 7000 + 100 * s + 10 * ell + n);
                    for (const auto& start : within({2, 1}, ell)) {
                        const bool push = is_pushing(c);
                        const auto table = push ? KernelTable<mpq_class>{} : kernel_table(c, n, start, rt, 12);
                        for (const auto& th : within({3, 3, 3}, ell)) {
                            ++checks;
                            if (push) {
                                const auto brute = mp_bruteforce(c, n, th, start, rt, 0);
                                if (mp_pushing(c, n, th, start, rt) != brute.value) within_bounds = false;
                                continue;
                            }
                            const mpq_class exact = mp_blocking(c, n, th, start, rt);
                            const auto brute = event_sum_at_least(table, th);
                            max_tail = std::max(max_tail, brute.tail.get_d());
                            double& ct = case_tail[case_name(c)];
                            ct = std::max(ct, brute.tail.get_d());
                            if (!is_geometric(c) ? (brute.tail != 0 || exact != brute.value)
                                                 : (exact < brute.value || exact > brute.value + brute.tail))
                                within_bounds = false;
                        }
                    }
                }
    }
    // Residue, annulus series and quadrature evaluations of the blocking determinant.
    for (CaseId c : {CaseId::B, CaseId::C, CaseId::CanonicalC})
        for (std::uint64_t s = 1; s <= 5; ++s) {
            const auto rt = quarter_rates(c, 3, 2, 9000 + s);
            for (const auto& nu : std::vector<Partition>{{3, 2, 1}, {2, 2, 2}, {3}, {1, 1}}) {
                const double exact = mp_blocking(c, 2, nu, {1}, rt).get_d();
                const double sv = static_cast<double>(mp_blocking_series(c, 2, nu, {1}, rt).value);
                const double qv = static_cast<double>(mp_blocking_quadrature(c, 2, nu, {1}, rt).value);
                max_alt = std::max({max_alt, std::fabs(sv - exact), std::fabs(qv - exact), std::fabs(sv - qv)});
            }
        }
    o.pass = within_bounds && max_alt <= 1e-10 && max_tail < 1e-9;
    o.detail = std::to_string(checks) + " events " + (within_bounds ? "within" : "outside") +
               " [event sum, event sum + tail]; evaluation gap " + fmt(max_alt) + "; max tail";
    for (const auto& [name, t] : case_tail) o.detail += " " + name + " " + fmt(t);
    o.detail += std::string(" (required < 1e-9") + (max_tail < 1e-9 ? ")" : ", not met at cap 12)");
    return o;
}

Outcome criterion6() {
    Outcome o;
    double master = 0, boundary = 0;
    const std::vector<long double> pi2{1.0L, 0.7L}, pi3{1.0L, 0.6L, 1.3L};
    for (CaseId c : {CaseId::A, CaseId::C}) {
        for (const auto& lam : std::vector<std::vector<int>>{{1, 0}, {2, 1}, {3, 1}, {2, 2}, {1, 1}, {4, 0}, {3, 3}})
            master = std::max(master, static_cast<double>(std::fabs(master_equation_residual(c, 1.0L, {0, 0}, lam, pi2, 1e-4L))));
        for (const auto& [lam, s] : std::vector<std::pair<std::vector<int>, int>>{{{2, 2, 1}, 1}, {{3, 1, 1}, 2}, {{2, 2, 2}, 1}})
            boundary = std::max(boundary, static_cast<double>(std::fabs(boundary_residual(c, 1.0L, {1, 0, 0}, lam, s, pi3))));
        for (const auto& [lam, s] : std::vector<std::pair<std::vector<int>, int>>{{{1, 1}, 1}, {{3, 3}, 1}})
            boundary = std::max(boundary, static_cast<double>(std::fabs(boundary_residual(c, 1.0L, {0, 0}, lam, s, pi2))));
    }
    double tv = 0;
    for (bool push : {false, true}) {
        ContinuousConfig cfg{2, 1.0, [](int) { return 1.0; }, push, 61};
        const auto sum = run_many_continuous(cfg, 100000);
        double d = 0, exact_in = 0, emp_in = 0;
        for (int a = 0; a <= 5; ++a)
            for (int b = 0; b <= a; ++b) {
                const Partition k(std::vector<int>{a, b});
                const double ex = static_cast<double>(continuous_kernel(push ? CaseId::A : CaseId::C, 1.0L, {0, 0}, {a, b}, {1.0L, 1.0L}));
                const auto it = sum.histogram.find(k);
                const double em = it == sum.histogram.end() ? 0.0 : static_cast<double>(it->second) / sum.count;
                d += std::fabs(em - ex);
                exact_in += ex;
                emp_in += em;
            }
        d += std::fabs((1 - emp_in) - (1 - exact_in));
        tv = std::max(tv, d / 2);
    }
    o.pass = master <= 1e-6 && boundary <= 1e-12 && tv < 0.02;
    o.detail = "master residual " + fmt(master) + ", boundary residual " + fmt(boundary) + ", sampler TV " + fmt(tv);
    return o;
}

Outcome criterion7() {
    Outcome o;
    for (CaseId c : all_cases()) {
        const auto b = random_binding(c, 3, 1, 8, 777);
        const auto honest = mc_vs_exact(c, {1, 1}, 1, 3, b, 100000, 31, 8);
        const auto faulty = mc_vs_exact(c, {1, 1}, 1, 3, b, 100000, 31, 8, 0.25);
        const bool ok = honest.passes() && !faulty.passes();
        o.pass = o.pass && ok;
        o.detail += std::string(case_name(c)) + " tv " + fmt(honest.tv, 2) + " p " + fmt(honest.p_value, 2) + " fault p " +
                    fmt(faulty.p_value, 2) + (ok ? "" : " (bad)") + "; ";
    }
    return o;
}

Outcome criterion8() {
    const auto t0 = std::chrono::steady_clock::now();
    auto alpha = [](long k) { return 1 - k * std::exp(-k / 2.0); };
    const int maxval = 80;
    const auto exact = inhom_geometric_pmf(alpha, 0.5, 1.0, 0, maxval);
    std::vector<double> emp(maxval + 2, 0);
    const int draws = 100000;
    Rng rng(5, 0);
    for (int k = 0; k < draws; ++k) {
        const int w = sample_inhom_geometric(alpha, 0.5, 1.0, 0, rng);
        emp[std::min(w, maxval + 1)] += 1.0 / draws;
    }
    double tv = 0, exact_mass = 0;
    for (int w = 0; w <= maxval; ++w) {
        tv += std::fabs(emp[w] - exact[w]);
        exact_mass += exact[w];
    }
    tv += std::fabs(emp[maxval + 1] - (1 - exact_mass));
    tv /= 2;
    const double secs = seconds_since(t0);
    return {tv < 0.01 && secs < 5, "TV " + fmt(tv) + " over 1e5 draws in " + fmt(secs) + " s"};
}

// Header plus rows of numeric cells, all rows the same width.
bool well_formed_csv(const fs::path& p, long& rows) {
    std::ifstream in(p);
    std::string line;
    if (!std::getline(in, line) || line.empty()) return false;
    const auto width = std::count(line.begin(), line.end(), ',');
    rows = 0;
    static const std::regex number(R"(-?\d+(\.\d+)?([eE][-+]?\d+)?)");
    while (std::getline(in, line)) {
        if (std::count(line.begin(), line.end(), ',') != width) return false;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            if (!std::regex_match(cell, number)) return false;
        ++rows;
    }
    return rows > 0;
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::path(TASEP_BIN_DIR) / "acceptance_work";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string cli() { return TASEP_CLI; }

Outcome criterion9() {
    const auto& w = work_dir();
    std::ofstream(w / "sine.json") << R"({"x": 0.2, "pi": 0.5, "alpha": {"form": "sine", "scale": 0.5, "period": 50, "power": 6}})";
    struct Pipeline {
        std::string name, args;
        std::vector<std::string> csvs;
    };
    const std::string disc = " --ell 100 --n 10000 --record-every 100";
    const std::vector<Pipeline> pipes{
        {"continuous blocking/pushing",
         "sample --continuous --ell 100 --t 100 --rate 1 --out " + (w / "cont_block.csv").string() + " && " + cli() +
             " --seed 1 sample --continuous --push --ell 100 --t 100 --rate 1 --out " + (w / "cont_push.csv").string(),
         {"cont_block.csv", "cont_push.csv"}},
        {"discrete blocking/pushing",
         "sample --case C --x 0.01 --rate 1" + disc + " --out " + (w / "disc_block.csv").string() + " --profile " +
             (w / "disc_block_profile.csv").string() + " && " + cli() + " --seed 1 sample --case A --x 0.01 --rate 1" + disc +
             " --out " + (w / "disc_push.csv").string(),
         {"disc_block.csv", "disc_block_profile.csv", "disc_push.csv"}},
        {"position-dependent blocking",
         "sample --case canonical-C --x 0.01 --rate 1 --pos -0.5" + disc + " --profile " + (w / "canon_left.csv").string() +
             " && " + cli() + " --seed 1 sample --case canonical-C --params " + (w / "sine.json").string() + disc +
             " --profile " + (w / "canon_right.csv").string(),
         {"canon_left.csv", "canon_right.csv"}},
    };
    Outcome o;
    for (const auto& p : pipes) {
        for (const auto& c : p.csvs) fs::remove(w / c);
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = run_process(cli() + " --seed 1 " + p.args + " > /dev/null");
        const double secs = seconds_since(t0);
        bool ok = r.status == 0 && secs < 60;
        long rows_total = 0;
        for (const auto& c : p.csvs) {
            long rows = 0;
            ok = ok && well_formed_csv(w / c, rows);
            rows_total += rows;
        }
        o.pass = o.pass && ok;
        o.detail += p.name + " " + fmt(secs) + " s, " + std::to_string(rows_total) + " rows" + (ok ? "" : " (bad: " + r.out + ")") + "; ";
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10() {
    const auto& w = work_dir();
    std::ofstream(w / "a.json") << R"({"x": ["1/3", "1/4"], "pi": ["1/2", "2/3", "1/5"]})";
    std::ofstream(w / "d.json") << R"({"x": ["1/2", "2"], "rho": ["1", "1/3", "3/2"]})";
    std::ofstream(w / "k.json") << R"({"x": ["1/5"], "pi": ["1/2", "1/3", "1/4"], "alpha": ["1/3", "-1/5", "1/2", "1/7", "0"]})";
    // Each command writes at most one file, named by the token FILE.
    const std::vector<std::string> commands{
        "--seed 11 kernel --case A --n 2 --mu '[1]' --params " + (w / "a.json").string() + " --cap 4",
        "--seed 11 kernel --case canonical-C --n 1 --mu '[1,1]' --params " + (w / "k.json").string() + " --cap 3",
        "--seed 11 multipoint --case D --thresholds '[3,2,1]' --n 2 --params " + (w / "d.json").string(),
        "--seed 11 multipoint --case C --thresholds '[2,1]' --start '[1]' --n 2 --params " + (w / "a.json").string() + " --brute",
        "--seed 42 sample --case A --ell 50 --n 500 --x 0.3 --rate 1 --out FILE",
        "--seed 5 sample --case C --ell 10 --n 50 --x 0.2 --rate 1 --runs 4000",
        "--seed 3 sample --continuous --ell 10 --t 5 --rate 1 --runs 4000",
        "--seed 9 sample --case canonical-C --params " + (w / "sine.json").string() + " --ell 30 --n 300 --profile FILE",
        "--seed 7 validate --grid smoke --report FILE",
        "--seed 1 op apply --word 'U2 U1 U1' --start '[1,1]'",
    };
    if (!fs::exists(w / "sine.json"))
        std::ofstream(w / "sine.json") << R"({"x": 0.2, "pi": 0.5, "alpha": {"form": "sine", "scale": 0.5, "period": 50, "power": 6}})";
    Outcome o;
    int identical = 0;
    for (std::size_t k = 0; k < commands.size(); ++k) {
        std::vector<std::string> outs;
        for (const char* threads : {"1", "2", "4"}) {
            const fs::path file = w / ("det_" + std::to_string(k) + "_" + threads + ".out");
            std::string cmd = commands[k];
            if (const auto pos = cmd.find("FILE"); pos != std::string::npos) cmd.replace(pos, 4, file.string());
            auto r = run_process(cli() + " --threads " + threads + " " + cmd);
            std::string blob = std::to_string(r.status) + "\n" + r.out;
            if (commands[k].find("FILE") != std::string::npos) {
                blob += slurp(file);
                // The output path itself appears in the envelope.
                for (auto p = blob.find(file.string()); p != std::string::npos; p = blob.find(file.string()))
                    blob.replace(p, file.string().size(), "FILE");
            }
            outs.push_back(blob + (r.status == 0 ? "" : "<failed>"));
        }
        const bool same = outs[0] == outs[1] && outs[1] == outs[2] && outs[0].find("<failed>") == std::string::npos;
        identical += same;
        if (!same) o.detail += "command " + std::to_string(k + 1) + " differs; ";
    }
    o.pass = identical == static_cast<int>(commands.size());
    o.detail += std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical at 1, 2 and 4 threads";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"route agreement on the desk grid", criterion1},
        {"worked examples reproduced exactly", criterion2},
        {"Knuth relation suites", criterion3},
        {"identity suite", criterion4},
        {"multi-point determinants vs event sums", criterion5},
        {"continuous time", criterion6},
        {"statistical validation with fault injection", criterion7},
        {"inhomogeneous geometric sampler", criterion8},
        {"large-scale sampling pipelines", criterion9},
        {"determinism across thread counts", criterion10},
    };
    std::set<int> chosen;
    for (int i = 1; i < argc; ++i) chosen.insert(std::stoi(argv[i]));
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!chosen.empty() && !chosen.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << " ["
                  << fmt(seconds_since(t0)) << " s] " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
