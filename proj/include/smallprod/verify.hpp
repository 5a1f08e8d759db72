#pragma once

// Seeded verification suites behind the `verify` subcommand: the module
// invariants (core), the multilinear sum bound (lemma1), the two-sum
// dichotomy for ratio-family sets (dichotomy), and the counting identities
// (counts). Each suite reports case/failure totals plus the inputs of the
// first failing case. All suites are deterministic for a fixed seed.

#include <functional>
#include <random>
#include <sstream>

#include "smallprod/expsum.hpp"
#include "smallprod/search.hpp"

namespace smallprod {

struct SuiteResult {
    std::string name;
    int64_t cases = 0;
    int64_t failures = 0;
    std::string first_failure;

    bool passed() const { return failures == 0; }
};

namespace detail {

class SuiteCheck {
public:
    explicit SuiteCheck(std::string name) { result_.name = std::move(name); }

    template <typename Describe>
    void operator()(bool ok, Describe&& describe) {
        ++result_.cases;
        if (!ok) {
            ++result_.failures;
            if (result_.first_failure.empty()) result_.first_failure = describe();
        }
    }

    SuiteResult take() { return std::move(result_); }

private:
    SuiteResult result_;
};

inline CandidateSet random_subset(const PrimeModulus& m, std::mt19937_64& rng,
                                  int max_size) {
    std::uniform_int_distribution<int64_t> dist(1, m.p() - 1);
    std::uniform_int_distribution<int> size_dist(1, max_size);
    const int target = size_dist(rng);
    std::vector<int64_t> elems;
    while (static_cast<int>(elems.size()) < target) {
        const int64_t v = dist(rng);
        if (std::find(elems.begin(), elems.end(), v) == elems.end()) elems.push_back(v);
    }
    return CandidateSet(m, std::move(elems));
}

inline int64_t tau_enumeration_oracle(int n, int64_t m) {
    if (n == 1) return 1;
    int64_t total = 0;
    for (int64_t d = 1; d <= m; ++d)
        if (m % d == 0) total += tau_enumeration_oracle(n - 1, m / d);
    return total;
}

inline std::complex<double> naive_multilinear(const std::vector<CandidateSet>& sets,
                                              int64_t mult) {
    const int64_t p = sets.front().modulus().p();
    std::vector<size_t> pos(sets.size(), 0);
    std::complex<double> acc = 0;
    while (true) {
        int64_t prod = mult % p;
        for (size_t i = 0; i < sets.size(); ++i)
            prod = prod * sets[i].elements()[pos[i]] % p;
        acc += std::exp(std::complex<double>(
            0, 2 * std::numbers::pi * static_cast<double>(prod) / static_cast<double>(p)));
        size_t i = 0;
        while (i < sets.size() && ++pos[i] == sets[i].elements().size()) {
            pos[i] = 0;
            ++i;
        }
        if (i == sets.size()) break;
    }
    return acc;
}

inline const std::vector<int64_t>& odd_primes_to_101() {
    static const std::vector<int64_t> primes = {3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                31, 37, 41, 43, 47, 53, 59, 61, 67,
                                                71, 73, 79, 83, 89, 97, 101};
    return primes;
}

} // namespace detail

/// Arithmetic-layer and membership-layer invariants.
inline SuiteResult run_core_suite(uint64_t seed) {
    detail::SuiteCheck check("core");
    std::mt19937_64 rng(seed);

    { // balanced norm: negation symmetry, range, zero case
        PrimeModulus m(1009);
        check(balanced_abs(m.residue(0)) == 0, [] { return std::string("balanced(0) != 0"); });
        for (int64_t a = 1; a < m.p(); ++a)
            check(balanced_abs(m.residue(a)) == balanced_abs(m.residue(m.p() - a)) &&
                      balanced_abs(m.residue(a)) >= 1 &&
                      balanced_abs(m.residue(a)) <= m.half(),
                  [&] { return "balanced norm symmetry at p=1009 a=" + std::to_string(a); });
    }

    { // inverse involution on 5000 random residues, p <= 10^6
        const int64_t primes[] = {3, 101, 1009, 65537, 999983};
        for (int i = 0; i < 5000; ++i) {
            PrimeModulus m(primes[static_cast<size_t>(i) % 5]);
            std::uniform_int_distribution<int64_t> dist(1, m.p() - 1);
            const Residue a = m.residue(dist(rng));
            check(mod_inverse(mod_inverse(a)) == a, [&] {
                return "inverse involution p=" + std::to_string(m.p()) +
                       " a=" + std::to_string(a.value);
            });
        }
    }

    // complete root-of-unity sums vanish
    for (int64_t p : {3, 7, 101, 1009}) {
        PrimeModulus m(p);
        std::complex<double> sum = 0;
        for (int64_t z = 0; z < p; ++z) sum += e_p(m, z).value();
        check(std::abs(sum) < 1e-9,
              [&] { return "sum of e_p over F_p nonzero at p=" + std::to_string(p); });
    }

    { // tau multiplicativity vs the enumeration oracle
        std::uniform_int_distribution<int64_t> dist(1, 10000);
        int done = 0;
        while (done < 200) {
            const int64_t m1 = dist(rng), m2 = dist(rng);
            if (std::gcd(m1, m2) != 1 || m1 * m2 > 10000) continue;
            const int n = 2 + static_cast<int>(rng() % 4);
            const bool mult_ok = tau(n, m1 * m2) == tau(n, m1) * tau(n, m2);
            const bool oracle_ok = tau(n, m1 * m2) == detail::tau_enumeration_oracle(n, m1 * m2);
            check(mult_ok && oracle_ok, [&] {
                return "tau_" + std::to_string(n) + "(" + std::to_string(m1) + "*" +
                       std::to_string(m2) + ") mismatch";
            });
            ++done;
        }
    }

    { // scaling invariance of the ratio family (2000 cases)
        for (int i = 0; i < 2000; ++i) {
            PrimeModulus m(i % 2 == 0 ? 101 : 1009);
            const auto A = detail::random_subset(m, rng, 12);
            std::uniform_int_distribution<int64_t> dist(1, m.p() - 1);
            const int64_t c = dist(rng);
            const int64_t X = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(m.half()));
            RatioInstance inst(m, X);
            check(satisfies_ratio_property(A, inst) ==
                      satisfies_ratio_property(scaled(A, c), inst),
                  [&] {
                      return "scaling invariance p=" + std::to_string(m.p()) +
                             " c=" + std::to_string(c) + " X=" + std::to_string(X);
                  });
        }
    }

    { // negation invariance of the product family (2000 cases)
        for (int i = 0; i < 2000; ++i) {
            PrimeModulus m(i % 2 == 0 ? 101 : 1009);
            const auto A = detail::random_subset(m, rng, 12);
            const int n = 2 + static_cast<int>(rng() % 3);
            const int64_t X = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(m.half()));
            ProductInstance inst(m, n, X);
            check(satisfies_product_property(A, inst) ==
                      satisfies_product_property(negated(A), inst),
                  [&] {
                      return "negation invariance p=" + std::to_string(m.p()) +
                             " n=" + std::to_string(n) + " X=" + std::to_string(X);
                  });
        }
    }

    { // incremental extension agrees with a full recheck (2000 cases)
        int done = 0;
        while (done < 2000) {
            PrimeModulus m(done % 2 == 0 ? 101 : 199);
            const auto A = detail::random_subset(m, rng, 8);
            std::uniform_int_distribution<int64_t> dist(1, m.p() - 1);
            const int64_t s = dist(rng);
            if (A.contains(s)) continue;
            std::vector<int64_t> ext = A.elements();
            ext.push_back(s);
            const CandidateSet B(m, std::move(ext));
            const int64_t X = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(m.half()));
            if (done % 2 == 0) {
                RatioInstance inst(m, X);
                if (!satisfies_ratio_property(A, inst)) continue;
                check(extend_check(A, s, inst) == satisfies_ratio_property(B, inst), [&] {
                    return "ratio extend_check p=" + std::to_string(m.p()) +
                           " s=" + std::to_string(s) + " X=" + std::to_string(X);
                });
            } else {
                ProductInstance inst(m, 2 + static_cast<int>(rng() % 3), X);
                if (!satisfies_product_property(A, inst)) continue;
                check(extend_check(A, s, inst) == satisfies_product_property(B, inst), [&] {
                    return "product extend_check p=" + std::to_string(m.p()) +
                           " s=" + std::to_string(s) + " X=" + std::to_string(X);
                });
            }
            ++done;
        }
    }

    { // X = (p-1)/2 admits every set; membership is monotone in X
        for (int i = 0; i < 500; ++i) {
            PrimeModulus m(101);
            const auto A = detail::random_subset(m, rng, 10);
            check(satisfies_ratio_property(A, RatioInstance(m, m.half())) &&
                      satisfies_product_property(A, ProductInstance(m, 2, m.half())),
                  [&] { return std::string("boundary X admits everything"); });
            const int64_t X = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(m.half() - 1));
            if (satisfies_ratio_property(A, RatioInstance(m, X)))
                check(satisfies_ratio_property(A, RatioInstance(m, X + 1)),
                      [&] { return "ratio monotonicity X=" + std::to_string(X); });
            if (satisfies_product_property(A, ProductInstance(m, 2, X)))
                check(satisfies_product_property(A, ProductInstance(m, 2, X + 1)),
                      [&] { return "product monotonicity X=" + std::to_string(X); });
        }
    }

    // quick solver cross-check against the subset oracle
    for (int64_t p : {3, 5, 7, 11, 13}) {
        PrimeModulus m(p);
        for (int64_t X = 1; X <= m.half(); ++X) {
            const auto s = solve_S(RatioInstance(m, X));
            check(s.exact && s.value == oracle_solve(RatioInstance(m, X)).value &&
                      satisfies_ratio_property(s.witness, RatioInstance(m, X)),
                  [&] { return "solver/oracle S p=" + std::to_string(p) + " X=" + std::to_string(X); });
            const auto r = solve_R(ProductInstance(m, 2, X));
            check(r.exact && r.value == oracle_solve(ProductInstance(m, 2, X)).value &&
                      satisfies_product_property(r.witness, ProductInstance(m, 2, X)),
                  [&] { return "solver/oracle R p=" + std::to_string(p) + " X=" + std::to_string(X); });
        }
    }

    return check.take();
}

/// |sum| <= sqrt(p) (|A_1|...|A_n|)^((n-1)/n) on random families.
/// `inject_fault` flips the comparison; it exists so the failure path of
/// the verify command can be exercised end to end.
inline SuiteResult run_lemma1_suite(uint64_t seed, bool inject_fault = false) {
    detail::SuiteCheck check("lemma1");
    std::mt19937_64 rng(seed);
    for (int64_t p : {101, 1009}) {
        PrimeModulus m(p);
        for (int n = 2; n <= 3; ++n) {
            for (int i = 0; i < 1000; ++i) {
                std::vector<CandidateSet> sets;
                for (int j = 0; j < n; ++j)
                    sets.push_back(detail::random_subset(m, rng, 64));
                const auto res = check_lemma1(sets);
                const bool ok = inject_fault ? !res.ok : res.ok;
                check(ok, [&] {
                    std::ostringstream msg;
                    msg << "lemma1 bound p=" << p << " n=" << n << " sizes=";
                    for (const auto& s : sets) msg << s.size() << ' ';
                    msg << "lhs=" << res.lhs << " rhs=" << res.rhs;
                    return msg.str();
                });
            }
        }
    }
    return check.take();
}

/// |T1| + |T2| >= |A|^2/400 for exact maximum witnesses with X <= p/12,
/// plus the ordered-pair partition identities on random valid sets.
inline SuiteResult run_dichotomy_suite(uint64_t seed) {
    detail::SuiteCheck check("dichotomy");
    std::mt19937_64 rng(seed);

    for (int64_t p : detail::odd_primes_to_101()) {
        PrimeModulus m(p);
        for (int64_t X = 1; 12 * X <= p; ++X) {
            RatioInstance inst(m, X);
            const auto result = solve_S(inst);
            check(result.exact, [&] {
                return "solver inexact at p=" + std::to_string(p) + " X=" + std::to_string(X);
            });
            const auto d = dichotomy_stats(result.witness, inst);
            check(d.threshold_ok, [&] {
                std::ostringstream msg;
                msg << "threshold p=" << p << " X=" << X << " |A|=" << result.value
                    << " |T1|+|T2|=" << d.T1.abs() + d.T2.abs();
                return msg.str();
            });
        }
    }

    int done = 0;
    while (done < 500) {
        PrimeModulus m(detail::odd_primes_to_101()[13 + done % 12]); // p >= 43
        const int64_t cap = m.p() / 12;
        if (cap < 1) continue;
        const int64_t X = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(cap));
        RatioInstance inst(m, X);
        const auto A = greedy_lower_bound(inst, rng());
        const auto d = dichotomy_stats(A, inst);
        const int64_t sq = A.size() * A.size();
        check(d.U1 + d.U2 + d.U3 == sq && d.U1 == (sq + A.size()) / 2 &&
                  d.u1 + d.u2 + d.u3 == Rational(1, 1),
              [&] {
                  return "pair partition p=" + std::to_string(m.p()) +
                         " X=" + std::to_string(X) + " |A|=" + std::to_string(A.size());
              });
        ++done;
    }
    return check.take();
}

/// Representation-count and hyperbola-count identities.
inline SuiteResult run_counts_suite(uint64_t seed) {
    detail::SuiteCheck check("counts");
    std::mt19937_64 rng(seed);

    { // sum over targets of r_k = |A| (|A|-1) ... (|A|-k+1), 500 cases
        PrimeModulus m(101);
        for (int i = 0; i < 500; ++i) {
            const auto A = detail::random_subset(m, rng, 25);
            const int k = 1 + static_cast<int>(rng() % static_cast<uint64_t>(
                                                   std::min<int64_t>(5, A.size())));
            const auto table = representation_table(A, k);
            int64_t total = 0;
            for (int64_t c : table) total += c;
            int64_t expect = 1;
            for (int j = 0; j < k; ++j) expect *= A.size() - j;
            check(total == expect, [&] {
                return "representation sum |A|=" + std::to_string(A.size()) +
                       " k=" + std::to_string(k) + " got " + std::to_string(total) +
                       " want " + std::to_string(expect);
            });
        }
    }

    // hyperbola divisor bound, exhaustive over alpha and X
    for (int64_t p : {13, 101}) {
        PrimeModulus m(p);
        for (int64_t alpha = 1; alpha < p; ++alpha) {
            for (int64_t X = 1; X <= m.half(); ++X) {
                try {
                    const auto scan = hyperbola_count(m.residue(alpha), X);
                    check(scan.count <= scan.divisor_bound, [&] {
                        return "hyperbola bound p=" + std::to_string(p) + " alpha=" +
                               std::to_string(alpha) + " X=" + std::to_string(X);
                    });
                } catch (const std::logic_error&) {
                    check(false, [&] {
                        return "hyperbola bound threw p=" + std::to_string(p) + " alpha=" +
                               std::to_string(alpha) + " X=" + std::to_string(X);
                    });
                }
            }
        }
        // every signed pair is counted exactly once at the boundary
        int64_t total = 0;
        for (int64_t alpha = 1; alpha < p; ++alpha)
            total += hyperbola_count(m.residue(alpha), m.half()).count;
        check(total == (p - 1) * (p - 1), [&] {
            return "hyperbola boundary total p=" + std::to_string(p) + " got " +
                   std::to_string(total);
        });
    }

    { // residue-class counting equals the naive term-by-term sum
        for (int i = 0; i < 200; ++i) {
            PrimeModulus m(i % 2 == 0 ? 101 : 13);
            const size_t n = 1 + rng() % 3;
            std::vector<CandidateSet> sets;
            double terms = 1;
            for (size_t j = 0; j < n; ++j) {
                sets.push_back(detail::random_subset(m, rng, 12));
                terms *= static_cast<double>(sets.back().size());
            }
            if (terms > 1e4) continue;
            std::uniform_int_distribution<int64_t> dist(1, m.p() - 1);
            const int64_t mult = dist(rng);
            const auto fast = multilinear_sum(sets, m.residue(mult));
            const auto slow = detail::naive_multilinear(sets, mult);
            check(std::abs(fast.value() - slow) < 1e-6, [&] {
                return "multilinear naive mismatch p=" + std::to_string(m.p()) +
                       " n=" + std::to_string(n);
            });
        }
    }

    return check.take();
}

/// Runs the requested suite(s): core | lemma1 | dichotomy | counts | all.
inline std::vector<SuiteResult> run_suites(const std::string& which, uint64_t seed,
                                           bool inject_fault = false) {
    std::vector<SuiteResult> results;
    const bool all = which == "all";
    if (all || which == "core") results.push_back(run_core_suite(seed));
    if (all || which == "lemma1") results.push_back(run_lemma1_suite(seed, inject_fault));
    if (all || which == "dichotomy") results.push_back(run_dichotomy_suite(seed));
    if (all || which == "counts") results.push_back(run_counts_suite(seed));
    if (results.empty())
        throw std::invalid_argument("unknown suite: " + which +
                                    " (expected core|lemma1|dichotomy|counts|all)");
    return results;
}

} // namespace smallprod
