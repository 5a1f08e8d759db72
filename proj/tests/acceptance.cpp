// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Run with --write-golden to (re)generate the pinned sweep CSV.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "smallprod/bounds.hpp"
#include "smallprod/expsum.hpp"
#include "smallprod/record.hpp"
#include "smallprod/search.hpp"
#include "smallprod/sweep.hpp"
#include "smallprod/verify.hpp"

using namespace smallprod;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    std::string name;
    bool pass = true;
    int64_t checks = 0;
    std::string detail;
    double seconds = 0;

    template <typename Describe>
    void expect(bool ok, Describe&& describe) {
        ++checks;
        if (!ok && pass) {
            pass = false;
            detail = describe();
        }
    }
};

std::vector<int64_t> odd_primes_up_to(int64_t limit) {
    std::vector<int64_t> out;
    for (int64_t p = 3; p <= limit; p += 2)
        if (is_prime(p)) out.push_back(p);
    return out;
}

constexpr uint64_t kSuiteSeed = 42;
constexpr uint64_t kSweepSeed = 2024;

std::vector<RunRecord> golden_sweep_rows() {
    SweepConfig cfg_s;
    cfg_s.primes = odd_primes_up_to(101);
    cfg_s.run_product = false;
    cfg_s.x_frac = 1.0 / 12.0;
    cfg_s.seed = kSweepSeed;
    cfg_s.workers = 4;

    SweepConfig cfg_r = cfg_s;
    cfg_r.run_ratio = false;
    cfg_r.run_product = true;
    cfg_r.tuple_lengths = {2, 3};
    cfg_r.x_frac = 0.24;

    auto rows = run_sweep(cfg_s);
    const auto product_rows = run_sweep(cfg_r);
    rows.insert(rows.end(), product_rows.begin(), product_rows.end());
    return rows;
}

std::string golden_path() {
    return std::string(SMALLPROD_TEST_DATA_DIR) + "/golden_sweep.csv";
}

Criterion criterion1_oracle_s() {
    Criterion c{"oracle equivalence (S), p <= 23, all X"};
    for (int64_t p : odd_primes_up_to(23)) {
        PrimeModulus m(p);
        for (int64_t X = 1; X <= m.half(); ++X) {
            RatioInstance inst(m, X);
            const auto fast = solve_S(inst);
            const auto slow = oracle_solve(inst);
            c.expect(fast.exact && fast.value == slow.value &&
                         fast.witness.elements() == slow.witness.elements(),
                     [&] {
                         return "p=" + std::to_string(p) + " X=" + std::to_string(X) +
                                " solver=" + std::to_string(fast.value) +
                                " oracle=" + std::to_string(slow.value);
                     });
        }
    }
    const auto a1 = solve_S(RatioInstance(PrimeModulus(7), 1));
    c.expect(a1.value == 2, [] { return std::string("S(p=7, X=1) != 2"); });
    const auto a2 = solve_S(RatioInstance(PrimeModulus(13), 2));
    c.expect(a2.value == 4, [] { return std::string("S(p=13, X=2) != 4"); });
    return c;
}

Criterion criterion2_oracle_r() {
    Criterion c{"oracle equivalence (R), p <= 23, n in {2,3}, all X"};
    for (int64_t p : odd_primes_up_to(23)) {
        PrimeModulus m(p);
        for (int n : {2, 3}) {
            for (int64_t X = 1; X <= m.half(); ++X) {
                ProductInstance inst(m, n, X);
                const auto fast = solve_R(inst);
                const auto slow = oracle_solve(inst);
                c.expect(fast.exact && fast.value == slow.value &&
                             fast.witness.elements() == slow.witness.elements(),
                         [&] {
                             return "p=" + std::to_string(p) + " n=" + std::to_string(n) +
                                    " X=" + std::to_string(X) +
                                    " solver=" + std::to_string(fast.value) +
                                    " oracle=" + std::to_string(slow.value);
                         });
            }
            const auto boundary = solve_R(ProductInstance(m, n, m.half()));
            c.expect(boundary.value == p - 1, [&] {
                return "boundary R at p=" + std::to_string(p) + " n=" + std::to_string(n);
            });
        }
    }
    c.expect(solve_R(ProductInstance(PrimeModulus(7), 2, 1)).value == 2,
             [] { return std::string("R_2(p=7, X=1) != 2"); });
    return c;
}

Criterion criterion3_constructions() {
    Criterion c{"construction validity and sizes, p <= 1009"};
    for (int64_t p : odd_primes_up_to(1009)) {
        PrimeModulus m(p);
        for (int64_t X = 1; X <= m.half(); ++X) {
            const auto geo = construct_geometric(m, X);
            const int64_t log2x = std::bit_width(static_cast<uint64_t>(X)) - 1;
            c.expect(geo.size() == 2 * (log2x + 1) &&
                         satisfies_ratio_property(geo, RatioInstance(m, X)),
                     [&] {
                         return "geometric p=" + std::to_string(p) +
                                " X=" + std::to_string(X);
                     });
            for (int n : {2, 3, 4}) {
                const auto iv = construct_interval(m, n, X);
                c.expect(iv.size() == 2 * nth_root_floor(X, n) &&
                             satisfies_product_property(iv, ProductInstance(m, n, X)),
                         [&] {
                             return "interval p=" + std::to_string(p) +
                                    " n=" + std::to_string(n) + " X=" + std::to_string(X);
                         });
            }
        }
    }
    return c;
}

Criterion criterion4_lemma1() {
    Criterion c{"multilinear sum bound, 1000 families per n in {2,3}, p in {101,1009}"};
    const auto suite = run_lemma1_suite(kSuiteSeed);
    c.checks = suite.cases;
    c.expect(suite.passed(), [&] { return suite.first_failure; });
    return c;
}

Criterion criterion5_dichotomy() {
    Criterion c{"two-sum dichotomy on exact witnesses, p <= 101, X <= p/12"};
    const auto suite = run_dichotomy_suite(kSuiteSeed);
    c.checks = suite.cases;
    c.expect(suite.passed(), [&] { return suite.first_failure; });
    return c;
}

Criterion criterion6_counts() {
    Criterion c{"counting identities (representations, hyperbola divisor bound)"};
    const auto suite = run_counts_suite(kSuiteSeed);
    c.checks = suite.cases;
    c.expect(suite.passed(), [&] { return suite.first_failure; });
    return c;
}

Criterion criterion7_sandwich(const std::vector<RunRecord>& rows) {
    Criterion c{"sandwich reports and pinned sweep, primes <= 101"};

    for (const auto& r : rows) {
        c.expect(r.status == "ok" && r.exact,
                 [&] { return "cell not exact: " + to_csv(r); });
        c.expect(r.value >= r.construction_size,
                 [&] { return "construction exceeds exact value: " + to_csv(r); });
        c.expect(revalidate_witness(r), [&] { return "witness invalid: " + to_csv(r); });
    }

    std::vector<ExactRecord> ratio_recs, product_recs;
    for (const auto& rec : exact_records(rows))
        (rec.n == 0 ? ratio_recs : product_recs).push_back(rec);
    c.expect(!ratio_recs.empty() && !product_recs.empty(),
             [] { return std::string("sweep produced no in-range exact records"); });

    const double eps = 0.1;
    for (const auto* family : {&ratio_recs, &product_recs}) {
        const double fitted = fit_constant(*family, eps);
        c.expect(std::isfinite(fitted) && fitted > 0,
                 [&] { return std::string("non-finite fitted constant"); });
        EnvelopeParams params{fitted, eps};
        for (const auto& rec : *family)
            c.expect(static_cast<double>(rec.value) <=
                         envelope_for(rec, params).value * (1 + 1e-9),
                     [&] {
                         return "value above fitted envelope at p=" + std::to_string(rec.p) +
                                " n=" + std::to_string(rec.n) + " X=" + std::to_string(rec.X);
                     });
    }

    // byte-stable serialization: rerun in-process, then diff the pinned file
    std::ostringstream first, again;
    write_csv(first, rows);
    write_csv(again, golden_sweep_rows());
    c.expect(first.str() == again.str(),
             [] { return std::string("sweep rerun is not byte-identical"); });

    std::ifstream golden(golden_path(), std::ios::binary);
    c.expect(static_cast<bool>(golden), [] {
        return "missing golden file " + golden_path() + " (generate with --write-golden)";
    });
    if (golden) {
        std::stringstream buf;
        buf << golden.rdbuf();
        c.expect(buf.str() == first.str(),
                 [] { return std::string("sweep does not match the pinned golden CSV"); });
    }
    return c;
}

Criterion criterion8_invariances() {
    Criterion c{"scaling and negation invariance, 2000 cases each"};
    std::mt19937_64 rng(kSuiteSeed);
    for (int i = 0; i < 2000; ++i) {
        PrimeModulus m(i % 2 == 0 ? 101 : 1009);
        const auto A = detail::random_subset(m, rng, 12);
        std::uniform_int_distribution<int64_t> dist(1, m.p() - 1);
        const int64_t scale = dist(rng);
        const int64_t X = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(m.half()));
        RatioInstance inst(m, X);
        c.expect(satisfies_ratio_property(A, inst) ==
                     satisfies_ratio_property(scaled(A, scale), inst),
                 [&] {
                     return "scaling invariance p=" + std::to_string(m.p()) +
                            " c=" + std::to_string(scale) + " X=" + std::to_string(X);
                 });
    }
    for (int i = 0; i < 2000; ++i) {
        PrimeModulus m(i % 2 == 0 ? 101 : 1009);
        const auto A = detail::random_subset(m, rng, 12);
        const int n = 2 + static_cast<int>(rng() % 3);
        const int64_t X = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(m.half()));
        ProductInstance inst(m, n, X);
        c.expect(satisfies_product_property(A, inst) ==
                     satisfies_product_property(negated(A), inst),
                 [&] {
                     return "negation invariance p=" + std::to_string(m.p()) +
                            " n=" + std::to_string(n) + " X=" + std::to_string(X);
                 });
    }
    return c;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::string(argv[1]) == "--write-golden") {
        std::ofstream out(golden_path(), std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << golden_path() << "\n";
            return 1;
        }
        write_csv(out, golden_sweep_rows());
        std::cout << "wrote " << golden_path() << "\n";
        return 0;
    }

    std::vector<Criterion> results;
    int index = 0;
    auto run = [&](auto&& fn) {
        const auto t0 = Clock::now();
        Criterion c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
            if (c.name.empty()) c.name = "criterion " + std::to_string(index + 1);
        }
        c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        ++index;
        std::ostringstream line;
        line << (c.pass ? "PASS" : "FAIL") << "  " << index << ". " << c.name << "  ["
             << c.checks << " checks, " << std::fixed << std::setprecision(1)
             << c.seconds << "s]";
        if (!c.pass) line << "\n      " << c.detail;
        std::cout << line.str() << std::endl;
        results.push_back(std::move(c));
    };

    run(criterion1_oracle_s);
    run(criterion2_oracle_r);
    run(criterion3_constructions);
    run(criterion4_lemma1);
    run(criterion5_dichotomy);
    run(criterion6_counts);
    const auto rows = golden_sweep_rows();
    run([&] { return criterion7_sandwich(rows); });
    run(criterion8_invariances);

    const bool all = std::all_of(results.begin(), results.end(),
                                 [](const Criterion& c) { return c.pass; });
    std::cout << (all ? "ACCEPTANCE: all criteria passed"
                      : "ACCEPTANCE: some criteria FAILED")
              << std::endl;
    return all ? 0 : 1;
}
