// Command-line front end: single-instance solves, grid sweeps, verification
// suites, construction inspection, and envelope/conjecture reports.
//
// Exit codes: 0 success (exact), 1 usage or validation error, 2 budget
// exhausted (inexact result), 3 verification failure.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smallprod/bounds.hpp"
#include "smallprod/record.hpp"
#include "smallprod/search.hpp"
#include "smallprod/sweep.hpp"
#include "smallprod/verify.hpp"

namespace {

using namespace smallprod;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInexact = 2;
constexpr int kExitVerifyFailed = 3;

// "3-101" -> all odd primes in range; "7,11,13" -> the listed primes
std::vector<int64_t> parse_primes(const std::string& text) {
    std::vector<int64_t> out;
    const auto dash = text.find('-');
    if (dash != std::string::npos && dash > 0) {
        const int64_t lo = std::stoll(text.substr(0, dash));
        const int64_t hi = std::stoll(text.substr(dash + 1));
        for (int64_t p = std::max<int64_t>(lo, 3); p <= hi; ++p)
            if (p % 2 == 1 && is_prime(p)) out.push_back(p);
        if (out.empty()) throw std::domain_error("no odd primes in range " + text);
        return out;
    }
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        if (!cur.empty()) out.push_back(std::stoll(cur));
    }
    if (out.empty()) throw std::domain_error("empty prime list");
    return out;
}

// "1/12" or "0.0833"
double parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return std::stod(text);
    const double num = std::stod(text.substr(0, slash));
    const double den = std::stod(text.substr(slash + 1));
    if (den == 0) throw std::domain_error("fraction with zero denominator");
    return num / den;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file " + out_path);
        out << text;
    }
}

int cmd_solve(char kind, int64_t p, int n, int64_t X, const SearchBudget& budget,
              double epsilon, uint64_t seed, bool json, const std::string& out_path) {
    RunRecord rec = solve_cell(kind, p, n, X, budget, epsilon, seed);
    if (rec.status != "ok") {
        std::cerr << rec.status << "\n";
        return kExitUsage;
    }
    if (json) {
        emit(to_json(rec).dump() + "\n", out_path);
    } else {
        std::ostringstream out;
        if (kind == 'S')
            out << "S(p=" << p << ", X=" << X << ") = " << rec.value;
        else
            out << "R_" << n << "(p=" << p << ", X=" << X << ") = " << rec.value;
        out << (rec.exact ? " (exact)" : " (lower bound; budget exhausted)") << "\n"
            << "witness            " << rec.witness << "\n"
            << "construction size  " << rec.construction_size << "\n"
            << "envelope (C=1, eps=" << epsilon << ")  " << rec.envelope << "\n"
            << "nodes              " << rec.nodes << "\n"
            << "elapsed            " << rec.elapsed_millis << " ms\n";
        emit(out.str(), out_path);
    }
    return rec.exact ? kExitOk : kExitInexact;
}

int cmd_sweep(const SweepConfig& cfg, bool json, const std::string& out_path) {
    const auto records = run_sweep(cfg);
    std::ostringstream out;
    if (json) {
        for (const auto& r : records) out << to_json(r).dump() << "\n";
    } else {
        write_csv(out, records);
    }
    emit(out.str(), out_path);
    bool all_exact = true;
    for (const auto& r : records)
        if (!r.exact || r.status != "ok") all_exact = false;
    return all_exact ? kExitOk : kExitInexact;
}

int cmd_verify(const std::string& suite, uint64_t seed, bool inject_fault) {
    const auto results = run_suites(suite, seed, inject_fault);
    bool ok = true;
    for (const auto& r : results) {
        std::cout << r.name << ": " << r.cases << " checks, " << r.failures
                  << " failures [" << (r.passed() ? "pass" : "FAIL") << "]\n";
        if (!r.passed()) {
            std::cout << "  first failing case: " << r.first_failure << "\n";
            ok = false;
        }
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_construct(const std::string& kind, int64_t p, int n, int64_t X) {
    PrimeModulus mod(p);
    CandidateSet A = kind == "geometric" ? construct_geometric(mod, X)
                                         : construct_interval(mod, n, X);
    bool valid;
    if (kind == "geometric")
        valid = satisfies_ratio_property(A, RatioInstance(mod, X));
    else
        valid = satisfies_product_property(A, ProductInstance(mod, n, X));
    std::cout << join_witness(A.elements()) << "\n"
              << "size  " << A.size() << "\n"
              << "valid " << (valid ? "yes" : "NO") << "\n";
    return valid ? kExitOk : kExitVerifyFailed;
}

int cmd_report(const std::string& in_path, double epsilon,
               const std::vector<double>& eps_grid, double t, bool json,
               const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open records file " + in_path);
    const auto records = read_csv(in);

    std::vector<ExactRecord> ratio_recs, product_recs, all_recs;
    for (const auto& rec : exact_records(records)) {
        (rec.n == 0 ? ratio_recs : product_recs).push_back(rec);
        all_recs.push_back(rec);
    }

    const double c_ratio = ratio_recs.empty() ? 0.0 : fit_constant(ratio_recs, epsilon);
    const double c_product = product_recs.empty() ? 0.0 : fit_constant(product_recs, epsilon);

    std::vector<BoundRow> rows;
    EnvelopeParams params{1.0, epsilon};
    for (const auto& rec : records) {
        if (rec.status != "ok") continue;
        const auto env = rec.kind == 'S' ? theorem1_envelope(rec.p, rec.X, params)
                                         : theorem2_envelope(rec.p, rec.n, rec.X, params);
        rows.push_back(BoundRow{rec.p, rec.n, rec.X, rec.value, rec.exact,
                                rec.construction_size, env.value, env.in_range,
                                rec.exact ? static_cast<double>(rec.value) / env.value
                                          : 0.0});
    }
    const auto conj = conjecture_report(all_recs, eps_grid, t);

    if (json) {
        nlohmann::json doc;
        doc["epsilon"] = epsilon;
        doc["t"] = t;
        if (!ratio_recs.empty()) doc["fit"]["S"] = c_ratio;
        if (!product_recs.empty()) doc["fit"]["R"] = c_product;
        doc["rows"] = nlohmann::json::array();
        for (const auto& r : rows)
            doc["rows"].push_back({{"p", r.p},
                                   {"n", r.n},
                                   {"X", r.X},
                                   {"value", r.value},
                                   {"exact", r.exact},
                                   {"construction_size", r.construction_size},
                                   {"envelope", r.envelope},
                                   {"in_range", r.in_range},
                                   {"ratio", r.ratio}});
        doc["conjecture"] = nlohmann::json::array();
        for (const auto& c : conj)
            doc["conjecture"].push_back({{"epsilon", c.epsilon},
                                         {"kind", std::string(1, c.kind)},
                                         {"n", c.n},
                                         {"max_ratio", c.max_ratio},
                                         {"p", c.at_p},
                                         {"X", c.at_X}});
        emit(doc.dump(2) + "\n", out_path);
        return kExitOk;
    }

    std::ostringstream table;
    table << "p,n,X,value,exact,construction_size,envelope,in_range,ratio\n";
    for (const auto& r : rows) {
        table << r.p << ',' << r.n << ',' << r.X << ',' << r.value << ','
              << (r.exact ? 1 : 0) << ',' << r.construction_size << ','
              << detail::format_envelope(r.envelope) << ',' << (r.in_range ? 1 : 0) << ',';
        if (r.exact) table << detail::format_envelope(r.ratio);
        table << '\n';
    }

    std::ostringstream summary;
    summary << "records: " << records.size() << " (" << all_recs.size()
            << " exact, in theorem range)\n";
    if (!ratio_recs.empty())
        summary << "fitted C, ratio family   (eps=" << epsilon << "): " << c_ratio << "\n";
    if (!product_recs.empty())
        summary << "fitted C, product family (eps=" << epsilon << "): " << c_product << "\n";
    summary << "conjectured-growth ratios at X <= (1/2 - " << t << ")p:\n";
    for (const auto& c : conj) {
        summary << "  eps=" << c.epsilon << "  ";
        if (c.kind == 'S')
            summary << "max S(X)/X^eps";
        else
            summary << "max R_" << c.n << "(X)/X^(1/" << c.n << "+eps)";
        summary << " = " << c.max_ratio << "  (p=" << c.at_p << ", X=" << c.at_X << ")\n";
    }

    if (out_path.empty()) {
        std::cout << summary.str() << table.str();
    } else {
        emit(table.str(), out_path);
        std::cout << summary.str();
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact extremal sets in F_p* with small products or ratios"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "solve one instance exactly");
    std::string solve_kind;
    solve->add_option("kind", solve_kind, "S or R")->required()
        ->check(CLI::IsMember({"S", "R"}));
    int64_t s_p = 0, s_x = 0;
    int s_n = 2;
    SearchBudget s_budget;
    double s_eps = 0.1;
    uint64_t s_seed = 0;
    bool s_json = false;
    std::string s_out;
    solve->add_option("--p", s_p, "odd prime modulus")->required()->envname("SMALLPROD_P");
    solve->add_option("--X", s_x, "norm bound")->required()->envname("SMALLPROD_X");
    solve->add_option("--n", s_n, "tuple length (R only)")->envname("SMALLPROD_N");
    solve->add_option("--budget-nodes", s_budget.max_nodes, "node budget, 0 = unlimited")
        ->envname("SMALLPROD_BUDGET_NODES");
    solve->add_option("--budget-ms", s_budget.max_millis, "time budget, 0 = unlimited")
        ->envname("SMALLPROD_BUDGET_MS");
    solve->add_option("--epsilon", s_eps, "envelope epsilon")->envname("SMALLPROD_EPSILON");
    solve->add_option("--seed", s_seed, "warm-start seed")->envname("SMALLPROD_SEED");
    solve->add_flag("--json", s_json, "emit one JSON object")->envname("SMALLPROD_JSON");
    solve->add_option("--out", s_out, "write output to a file")->envname("SMALLPROD_OUT");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "solve a (p, n, X) grid");
    std::string w_primes = "3-101", w_kind = "both", w_frac;
    SweepConfig w_cfg;
    bool w_json = false;
    std::string w_out;
    sweep->add_option("--p", w_primes, "primes: list 7,11,13 or range 3-101")
        ->envname("SMALLPROD_P");
    sweep->add_option("--kind", w_kind, "S, R, or both")
        ->check(CLI::IsMember({"S", "R", "both"}))->envname("SMALLPROD_KIND");
    sweep->add_option("--n", w_cfg.tuple_lengths, "tuple lengths for R")
        ->delimiter(',')->envname("SMALLPROD_N");
    sweep->add_option("--X", w_cfg.x_min, "smallest X")->envname("SMALLPROD_X");
    sweep->add_option("--X-max", w_cfg.x_max, "largest X (0: (p-1)/2 per prime)")
        ->envname("SMALLPROD_X_MAX");
    sweep->add_option("--X-frac", w_frac, "largest X as a fraction of p, e.g. 1/12")
        ->envname("SMALLPROD_X_FRAC");
    sweep->add_option("--budget-nodes", w_cfg.budget.max_nodes, "per-cell node budget")
        ->envname("SMALLPROD_BUDGET_NODES");
    sweep->add_option("--budget-ms", w_cfg.budget.max_millis, "per-cell time budget")
        ->envname("SMALLPROD_BUDGET_MS");
    sweep->add_option("--epsilon", w_cfg.epsilon, "envelope epsilon")
        ->envname("SMALLPROD_EPSILON");
    sweep->add_option("--seed", w_cfg.seed, "sweep seed")->envname("SMALLPROD_SEED");
    sweep->add_option("--workers", w_cfg.workers, "worker threads")
        ->envname("SMALLPROD_WORKERS");
    sweep->add_flag("--timings", w_cfg.timings,
                    "record wall-clock times (breaks byte reproducibility)")
        ->envname("SMALLPROD_TIMINGS");
    sweep->add_flag("--json", w_json, "emit JSON lines instead of CSV")
        ->envname("SMALLPROD_JSON");
    sweep->add_option("--out", w_out, "write output to a file")->envname("SMALLPROD_OUT");

    // verify
    auto* verify = app.add_subcommand("verify", "run the invariant suites");
    std::string v_suite = "all";
    uint64_t v_seed = 42;
    bool v_fault = false;
    verify->add_option("--suite", v_suite, "core|lemma1|dichotomy|counts|all")
        ->envname("SMALLPROD_SUITE");
    verify->add_option("--seed", v_seed, "suite seed")->envname("SMALLPROD_SEED");
    verify->add_flag("--inject-fault", v_fault,
                     "negative control: flip the lemma1 inequality")
        ->group(""); // hidden; exists for exercising the failure path

    // construct
    auto* construct = app.add_subcommand("construct", "build a lower-bound set");
    std::string c_kind;
    construct->add_option("kind", c_kind, "geometric or interval")->required()
        ->check(CLI::IsMember({"geometric", "interval"}));
    int64_t c_p = 0, c_x = 0;
    int c_n = 2;
    construct->add_option("--p", c_p, "odd prime modulus")->required()
        ->envname("SMALLPROD_P");
    construct->add_option("--X", c_x, "norm bound")->required()->envname("SMALLPROD_X");
    construct->add_option("--n", c_n, "tuple length (interval only)")
        ->envname("SMALLPROD_N");

    // report
    auto* report = app.add_subcommand("report", "fit constants and chart envelopes");
    std::string r_in, r_out;
    double r_eps = 0.1, r_t = 0.05;
    std::vector<double> r_grid = {0.05, 0.1, 0.25, 0.5};
    bool r_json = false;
    report->add_option("--in", r_in, "sweep CSV to read")->required()
        ->envname("SMALLPROD_IN");
    report->add_option("--epsilon", r_eps, "epsilon for constant fitting")
        ->envname("SMALLPROD_EPSILON");
    report->add_option("--eps-grid", r_grid, "epsilon grid for the conjecture table")
        ->delimiter(',')->envname("SMALLPROD_EPS_GRID");
    report->add_option("--t", r_t, "conjecture range X <= (1/2 - t)p")
        ->envname("SMALLPROD_T");
    report->add_flag("--json", r_json, "emit a JSON document")->envname("SMALLPROD_JSON");
    report->add_option("--out", r_out, "write the table to a file")
        ->envname("SMALLPROD_OUT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed())
            return cmd_solve(solve_kind[0], s_p, s_n, s_x, s_budget, s_eps, s_seed,
                             s_json, s_out);
        if (sweep->parsed()) {
            w_cfg.primes = parse_primes(w_primes);
            w_cfg.run_ratio = w_kind != "R";
            w_cfg.run_product = w_kind != "S";
            if (!w_frac.empty()) w_cfg.x_frac = parse_fraction(w_frac);
            return cmd_sweep(w_cfg, w_json, w_out);
        }
        if (verify->parsed()) return cmd_verify(v_suite, v_seed, v_fault);
        if (construct->parsed()) return cmd_construct(c_kind, c_p, c_n, c_x);
        if (report->parsed())
            return cmd_report(r_in, r_eps, r_grid, r_t, r_json, r_out);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
