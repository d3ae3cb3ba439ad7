// Command-line front end: kernel, multipoint, sample, validate, op and tableaux subcommands.
// Every result is a JSON envelope on stdout; errors are JSON on stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "params.hpp"
#include "tasep/multipoint.hpp"
#include "tasep/operators.hpp"
#include "tasep/simulate.hpp"
#include "tasep/tableaux.hpp"
#include "tasep/validate.hpp"

using nlohmann::json;
using namespace tasep;

namespace {

constexpr const char* kVersion = "1.0.0";

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json rational_json(const mpq_class& q) { return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}}; }

Partition partition_arg(const std::string& text, const char* what) {
    try {
        return parse_partition(text);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(what) + ": " + e.what());
    }
}

json positions_json(const Positions& p) { return json(p); }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

std::string version_string() { return std::string("tasep ") + kVersion + " " + fingerprint(pinned_conventions()); }

// Arguments without the thread count, which never affects results.
std::vector<std::string> command_echo(int argc, char** argv) {
    std::vector<std::string> out;
    for (int k = 1; k < argc; ++k) {
        const std::string a = argv[k];
        if (a == "--threads") {
            ++k;
            continue;
        }
        if (a.rfind("--threads=", 0) == 0) continue;
        out.push_back(a);
    }
    return out;
}

void emit_error(const std::string& kind, const std::string& message, const std::vector<std::string>& echo) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}, {"command", echo}}.dump(2) << '\n';
}

Rates<mpq_class> exact_rates(const cli::ParamSet& ps, CaseId cs, int ell, int n, int pos_max) {
    return bound_rates(cs, ell, cli::exact_binding(ps, cs, ell, n, pos_max));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact transition kernels, multi-point distributions and samplers for discrete TASEP variants"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "Worker threads (0: all); results do not depend on it")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "Random seed");

    // Shared option holders.
    std::string case_s, params_path, mu_s = "[]", lam_s, route_s = "tableau";
    int n = 1, cap = 6;
    std::optional<int> ell;

    auto* kernel_cmd = app.add_subcommand("kernel", "Transition probabilities from mu after n steps");
    kernel_cmd->add_option("--case", case_s, "A, B, C, D, canonical-C or canonical-B")->required();
    kernel_cmd->add_option("--n", n, "Number of time steps")->required()->check(CLI::NonNegativeNumber);
    kernel_cmd->add_option("--mu", mu_s, "Initial partition, e.g. \"[1,1]\"");
    kernel_cmd->add_option("--lambda", lam_s, "Target partition; omitted: full table up to the cap");
    kernel_cmd->add_option("--params", params_path, "Parameter JSON file")->required();
    kernel_cmd->add_option("--cap", cap, "Largest first row in the table")->check(CLI::NonNegativeNumber);
    kernel_cmd->add_option("--route", route_s, "tableau, operator or chain");
    kernel_cmd->add_option("--ell", ell, "Number of particles (default: length of the rate list)");

    std::string dir_s, thresholds_s, start_s = "[]", mode_s = "residue", contour_s;
    bool brute = false;
    int brute_cap = 12;
    auto* mp_cmd = app.add_subcommand("multipoint", "Multi-point distribution by determinant");
    mp_cmd->add_option("--case", case_s, "A, B, C, D or canonical-C")->required();
    mp_cmd->add_option("--dir", dir_s, "le (pushing cases) or ge (blocking cases)");
    mp_cmd->add_option("--thresholds", thresholds_s, "Threshold partition")->required();
    mp_cmd->add_option("--start", start_s, "Initial partition");
    mp_cmd->add_option("--n", n, "Number of time steps")->required()->check(CLI::NonNegativeNumber);
    mp_cmd->add_option("--params", params_path, "Parameter JSON file")->required();
    mp_cmd->add_option("--ell", ell, "Number of particles");
    mp_cmd->add_option("--mode", mode_s, "residue (exact), series or quadrature");
    mp_cmd->add_option("--contour", contour_s, "Quadrature circle, e.g. r=3,q=256");
    mp_cmd->add_flag("--brute", brute, "Also sum the event over the exact kernel table");
    mp_cmd->add_option("--cap", brute_cap, "Cap for --brute")->check(CLI::NonNegativeNumber);

    std::string out_path, profile_path, x_s, rate_s, pos_s;
    int record_every = 1;
    long runs = 0;
    bool fermionic = false, fermionic_shift = false, continuous = false, push = false;
    double t_cont = 0;
    auto* sample_cmd = app.add_subcommand("sample", "Simulate the particle system");
    sample_cmd->add_option("--case", case_s, "A, B, C, D, canonical-C or canonical-B (discrete time)");
    sample_cmd->add_option("--ell", ell, "Number of particles");
    sample_cmd->add_option("--n", n, "Number of time steps")->check(CLI::NonNegativeNumber);
    sample_cmd->add_option("--params", params_path, "Parameter JSON file");
    sample_cmd->add_option("--x", x_s, "Constant x (instead of a parameter file)");
    sample_cmd->add_option("--rate", rate_s, "Constant particle rate");
    sample_cmd->add_option("--pos", pos_s, "Constant position parameter (alpha or beta)");
    sample_cmd->add_option("--start", start_s, "Initial partition");
    sample_cmd->add_option("--out", out_path, "Trajectory CSV (continuous time: final profile CSV)");
    sample_cmd->add_option("--record-every", record_every, "Trajectory row period in steps (0: start and end)")
        ->check(CLI::NonNegativeNumber);
    sample_cmd->add_flag("--fermionic", fermionic, "Write fermionic positions lam_j - j");
    sample_cmd->add_flag("--fermionic-shift", fermionic_shift, "Read the position parameter at lam_j - j");
    sample_cmd->add_option("--profile", profile_path, "Final particle profile CSV");
    sample_cmd->add_option("--runs", runs, "Independent runs summarised instead of one trajectory")
        ->check(CLI::NonNegativeNumber);
    sample_cmd->add_flag("--continuous", continuous, "Continuous time with exponential clocks");
    sample_cmd->add_option("--t", t_cont, "Continuous time horizon")->check(CLI::NonNegativeNumber);
    sample_cmd->add_flag("--push", push, "Continuous time: pushing instead of blocking");

    std::string grid_s = "smoke", report_path;
    auto* validate_cmd = app.add_subcommand("validate", "Cross-validation harness");
    validate_cmd->add_option("--grid", grid_s, "smoke or desk");
    validate_cmd->add_option("--report", report_path, "Write the full report JSON here");

    std::string word_s;
    bool alpha_on = false, no_alpha = false, no_beta = false;
    int size_cap = -1;
    auto* op_cmd = app.add_subcommand("op", "Operator algebra");
    auto* apply_cmd = op_cmd->add_subcommand("apply", "Apply an operator word to a partition");
    op_cmd->require_subcommand(1);
    apply_cmd->add_option("--word", word_s, "Word such as \"U2 U1 U1\" (rightmost acts first)")->required();
    apply_cmd->add_option("--start", start_s, "Partition acted on");
    apply_cmd->add_flag("--no-alpha", no_alpha, "Set alpha to zero");
    apply_cmd->add_flag("--no-beta", no_beta, "Set beta to zero");
    apply_cmd->add_option("--size-cap", size_cap, "Drop partitions with more boxes");

    std::string fn_s = "G", shape_s, inner_s = "[]";
    bool list = false;
    auto* tab_cmd = app.add_subcommand("tableaux", "Tableau generating functions and listings");
    tab_cmd->add_option("--function", fn_s, "G (set-valued), Gdd (double-slash), g (reverse plane partitions) or j");
    tab_cmd->add_option("--shape", shape_s, "Outer partition")->required();
    tab_cmd->add_option("--inner", inner_s, "Inner partition");
    tab_cmd->add_option("--n", n, "Number of variables")->check(CLI::NonNegativeNumber);
    tab_cmd->add_flag("--alpha", alpha_on, "Symbolic alpha parameters");
    tab_cmd->add_flag("--no-beta", no_beta, "Set beta to zero");
    tab_cmd->add_flag("--list", list, "List the tableaux (at most 12 cells)");

    const auto echo = command_echo(argc, argv);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage", e.what(), echo);
        return 1;
    }
    if (threads > 0) omp_set_num_threads(threads);

    json payload;
    try {
        if (kernel_cmd->parsed()) {
            const CaseId cs = parse_case(case_s);
            const Route route = parse_route(route_s);
            const auto ps = cli::load_params(params_path, cs);
            const int L = cli::resolve_ell(ps, ell);
            const Partition mu = partition_arg(mu_s, "--mu");
            if (mu.length() > L) throw std::invalid_argument("--mu has more rows than particles");
            payload = {{"case", case_name(cs)}, {"n", n}, {"ell", L}, {"mu", mu.parts()}, {"route", route_name(route)}};
            if (!lam_s.empty()) {
                const Partition lam = partition_arg(lam_s, "--lambda");
                const auto rt = exact_rates(ps, cs, L, n, std::max(lam[1], mu[1]) + 1);
                const mpq_class p = kernel(cs, route, n, mu, lam, rt);
                payload["lambda"] = lam.parts();
                payload["prob"] = rational_json(p);
                payload["value"] = p.get_d();
            } else {
                if (cap < mu[1]) throw std::invalid_argument("--cap is smaller than the first row of --mu");
                const auto rt = exact_rates(ps, cs, L, n, cap + 1);
                const auto table = kernel_table(cs, n, mu, rt, cap, route);
                json states = json::array();
                for (const auto& [lam, p] : table.prob) states.push_back({{"lambda", lam.parts()}, {"prob", rational_json(p)}});
                payload["cap"] = cap;
                payload["states"] = states;
                payload["tail"] = rational_json(table.tail);
                payload["tail_value"] = table.tail.get_d();
            }
        } else if (mp_cmd->parsed()) {
            const CaseId cs = parse_case(case_s);
            const Direction d = case_direction(cs);
            if (!dir_s.empty() && dir_s != direction_name(d))
                throw std::invalid_argument(std::string("case ") + case_name(cs) + " has a multi-point formula for --dir " +
                                            direction_name(d));
            if (cs == CaseId::CanonicalB) throw std::invalid_argument("no multi-point formula for canonical-B");
            if (!contour_s.empty()) mode_s = "quadrature";
            if (mode_s != "residue" && mode_s != "series" && mode_s != "quadrature")
                throw std::invalid_argument("--mode must be residue, series or quadrature");
            if (is_pushing(cs) && mode_s != "residue")
                throw std::invalid_argument("contour evaluation applies to the blocking cases only");
            const auto ps = cli::load_params(params_path, cs);
            const int L = cli::resolve_ell(ps, ell);
            const Partition th = partition_arg(thresholds_s, "--thresholds");
            const Partition start = partition_arg(start_s, "--start");
            const auto rt = exact_rates(ps, cs, L, n, std::max({th[1], start[1], brute_cap}) + 1);
            payload = {{"case", case_name(cs)}, {"dir", direction_name(d)}, {"thresholds", th.parts()},
                       {"start", start.parts()}, {"n", n},       {"ell", L},
                       {"mode", mode_s}};
            if (mode_s == "residue") {
                const mpq_class p = is_pushing(cs) ? mp_pushing(cs, n, th, start, rt) : mp_blocking(cs, n, th, start, rt);
                payload["prob"] = rational_json(p);
                payload["value"] = p.get_d();
            } else {
                FloatValue v;
                if (mode_s == "series") {
                    v = mp_blocking_series(cs, n, th, start, rt);
                } else {
                    std::optional<ContourSpec> spec;
                    if (!contour_s.empty()) {
                        ContourSpec c;
                        std::stringstream ss(contour_s);
                        std::string part;
                        while (std::getline(ss, part, ',')) {
                            const auto eq = part.find('=');
                            if (eq == std::string::npos) throw std::invalid_argument("--contour expects r=<radius>,q=<points>");
                            const std::string key = part.substr(0, eq), val = part.substr(eq + 1);
                            if (key == "r") c.radius = std::stold(val);
                            else if (key == "q") c.points = std::stoi(val);
                            else throw std::invalid_argument("--contour keys are r and q");
                        }
                        if (!(c.radius > 0) || c.points < 4) throw std::invalid_argument("--contour needs r > 0 and q >= 4");
                        spec = c;
                    }
                    v = mp_blocking_quadrature(cs, n, th, start, rt, spec);
                }
                payload["value"] = static_cast<double>(v.value);
                payload["error_estimate"] = static_cast<double>(v.error);
                payload["resolution"] = v.resolution;
            }
            if (brute) {
                const auto e = mp_bruteforce(cs, n, th, start, rt, brute_cap);
                payload["bruteforce"] = {{"prob", rational_json(e.value)}, {"tail", rational_json(e.tail)}, {"cap", brute_cap}};
            }
        } else if (sample_cmd->parsed()) {
            if (continuous) {
                if (!ell) throw std::invalid_argument("--continuous needs --ell");
                std::vector<double> rates(*ell + 1, 1.0);
                if (!params_path.empty()) {
                    const auto ps = cli::load_params(params_path, push ? CaseId::A : CaseId::C);
                    cli::resolve_ell(ps, ell);
                    for (int j = 1; j <= *ell; ++j) rates[j] = ps.rate.float_at(j);
                } else if (!rate_s.empty()) {
                    std::fill(rates.begin(), rates.end(), parse_rational(rate_s).get_d());
                }
                ContinuousConfig cc{*ell, t_cont, [rates](int j) { return rates.at(j); }, push, seed};
                payload = {{"continuous", true}, {"ell", *ell}, {"t", t_cont}, {"push", push}};
                if (runs > 0) {
                    const auto s = run_many_continuous(cc, runs, threads);
                    payload["runs"] = runs;
                    payload["mean"] = s.mean;
                } else {
                    Rng rng(seed, 0);
                    const auto fin = run_continuous(cc.ell, cc.t, cc.rate, rng, cc.push);
                    payload["final"] = positions_json(fin);
                    if (!out_path.empty()) write_file(out_path, profile_csv(fin));
                    if (!profile_path.empty()) write_file(profile_path, profile_csv(fin));
                }
            } else {
                if (case_s.empty()) throw std::invalid_argument("--case is required for discrete time");
                const CaseId cs = parse_case(case_s);
                cli::ParamSet ps;
                if (!params_path.empty()) {
                    if (!x_s.empty() || !rate_s.empty() || !pos_s.empty())
                        throw std::invalid_argument("give either --params or --x/--rate/--pos");
                    ps = cli::load_params(params_path, cs);
                } else {
                    json j = json::object();
                    if (!x_s.empty()) j["x"] = x_s;
                    if (!rate_s.empty()) j["pi"] = rate_s;
                    if (!pos_s.empty()) j[cs == CaseId::CanonicalB ? "beta" : "alpha"] = pos_s;
                    ps = cli::parse_params(j, cs);
                }
                const int L = cli::resolve_ell(ps, ell);
                SimConfig cfg = cli::float_config(ps, cs, L);
                cfg.steps = n;
                cfg.seed = seed;
                cfg.fermionic_shift = fermionic_shift;
                cfg.record_every = record_every;
                const Partition start = partition_arg(start_s, "--start");
                if (start.length() > L) throw std::invalid_argument("--start has more rows than particles");
                cfg.start = start.parts();
                if (const auto bad = config_violation(cfg); !bad.empty()) throw ConstraintError(bad);
                payload = {{"case", case_name(cs)}, {"ell", L}, {"n", n}};
                if (runs > 0) {
                    const auto s = run_many(cfg, runs, threads);
                    payload["runs"] = runs;
                    payload["mean"] = s.mean;
                    payload["distinct_states"] = s.histogram.size();
                    if (s.histogram.size() <= 1000) {
                        json h = json::array();
                        for (const auto& [lam, c] : s.histogram) h.push_back({{"lambda", lam.parts()}, {"count", c}});
                        payload["histogram"] = h;
                    }
                } else {
                    const auto traj = run(cfg, 0);
                    payload["final"] = positions_json(traj.back().pos);
                    payload["rows"] = traj.size();
                    if (!out_path.empty()) write_file(out_path, trajectory_csv(traj, L, fermionic));
                    if (!profile_path.empty()) write_file(profile_path, profile_csv(traj.back().pos));
                }
            }
            if (!out_path.empty()) payload["out"] = out_path;
            if (!profile_path.empty()) payload["profile"] = profile_path;
        } else if (validate_cmd->parsed()) {
            const auto v = run_validation(grid_s, seed, threads);
            payload = {{"grid", grid_s}, {"ok", v.ok}};
            if (!report_path.empty()) {
                write_file(report_path, v.report.dump(2) + "\n");
                payload["report"] = report_path;
            } else {
                payload["report"] = v.report;
            }
            if (!v.ok) {
                std::cout << json{{"version", kVersion}, {"command", echo}, {"seed", seed},
                                  {"fingerprint", fingerprint(pinned_conventions())}, {"payload", payload}}
                                 .dump(2)
                          << '\n';
                throw ValidationFailure("validation failed; see the report");
            }
        } else if (apply_cmd->parsed()) {
            const OpWord w = parse_word(word_s);
            const Partition start = partition_arg(start_s, "--start");
            OperatorAlgebra<RationalFn> alg(symbolic_op_params(!no_alpha, !no_beta),
                                            size_cap >= 0 ? Truncation::by_size(size_cap) : Truncation::none());
            const auto v = alg.apply(w, PartitionVector<RationalFn>(start));
            payload = {{"word", word_str(w)}, {"start", start.parts()}, {"result", v.to_json()}};
        } else if (tab_cmd->parsed()) {
            const Partition outer = partition_arg(shape_s, "--shape");
            const Partition inner = partition_arg(inner_s, "--inner");
            if (!contains(outer, inner)) throw std::invalid_argument("--inner is not contained in --shape");
            const auto tp = symbolic_params(alpha_on, !no_beta);
            const SkewShape shape(outer, inner);
            RationalFn f;
            if (fn_s == "G") f = gen_G(shape, n, tp);
            else if (fn_s == "Gdd") f = gen_G_doubleslash(outer, inner, n, tp);
            else if (fn_s == "g") f = gen_g(shape, n, tp);
            else if (fn_s == "j") f = gen_j(shape, n, tp);
            else throw std::invalid_argument("--function must be G, Gdd, g or j");
            payload = {{"function", fn_s}, {"shape", outer.parts()}, {"inner", inner.parts()}, {"n", n},
                       {"generating_function", f.to_json()}};
            if (list) {
                std::vector<ListedTableau> all;
                if (fn_s == "G") all = list_set_valued(shape, n);
                else if (fn_s == "g") all = list_rpp(shape, n);
                else throw std::invalid_argument("--list supports G and g");
                json l = json::array();
                for (const auto& t : all) l.push_back(t.to_json());
                payload["count"] = all.size();
                payload["tableaux"] = l;
            }
        }
    } catch (const ValidationFailure& e) {
        emit_error("validation", e.what(), echo);
        return 3;
    } catch (const ConstraintError& e) {
        emit_error("constraint", e.what(), echo);
        return 2;
    } catch (const ContourError& e) {
        emit_error("constraint", e.what(), echo);
        return 2;
    } catch (const std::invalid_argument& e) {
        emit_error("usage", e.what(), echo);
        return 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what(), echo);
        return 1;
    }
    std::cout << json{{"version", kVersion}, {"command", echo}, {"seed", seed},
                      {"fingerprint", fingerprint(pinned_conventions())}, {"payload", payload}}
                     .dump(2)
              << '\n';
    return 0;
}
