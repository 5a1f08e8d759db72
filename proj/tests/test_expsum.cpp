#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "smallprod/expsum.hpp"
#include "smallprod/search.hpp"

using namespace smallprod;

namespace {

CandidateSet full_set(const PrimeModulus& m) {
    std::vector<int64_t> all;
    for (int64_t v = 1; v < m.p(); ++v) all.push_back(v);
    return CandidateSet(m, std::move(all));
}

CandidateSet random_set(const PrimeModulus& m, std::mt19937_64& rng, int max_size) {
    std::uniform_int_distribution<int64_t> dist(1, m.p() - 1);
    std::uniform_int_distribution<int> size_dist(1, max_size);
    std::vector<int64_t> elems;
    const int target = size_dist(rng);
    while (static_cast<int>(elems.size()) < target) {
        const int64_t v = dist(rng);
        if (std::find(elems.begin(), elems.end(), v) == elems.end()) elems.push_back(v);
    }
    return CandidateSet(m, std::move(elems));
}

// term-by-term reference, deliberately ignorant of residue-class counting
std::complex<double> naive_sum(const std::vector<CandidateSet>& sets, int64_t mult) {
    const int64_t p = sets.front().modulus().p();
    std::vector<size_t> pos(sets.size(), 0);
    std::complex<double> acc = 0;
    while (true) {
        int64_t prod = mult % p;
        for (size_t i = 0; i < sets.size(); ++i)
            prod = prod * sets[i].elements()[pos[i]] % p;
        acc += std::exp(std::complex<double>(0, 2 * std::numbers::pi *
                                                    static_cast<double>(prod) /
                                                    static_cast<double>(p)));
        size_t i = 0;
        while (i < sets.size() && ++pos[i] == sets[i].elements().size()) {
            pos[i] = 0;
            ++i;
        }
        if (i == sets.size()) break;
    }
    return acc;
}

} // namespace

TEST_CASE("multilinear sums") {
    PrimeModulus m7(7);
    const auto full = full_set(m7);

    const auto s = multilinear_sum({full, full});
    CHECK(s.re == Catch::Approx(-6.0).margin(1e-9));
    CHECK(s.im == Catch::Approx(0.0).margin(1e-9));
    CHECK(s.terms == 36);

    const auto single = multilinear_sum({CandidateSet(m7, {1})});
    CHECK(single.re == Catch::Approx(e_p(m7, 1).re));
    CHECK(single.im == Catch::Approx(e_p(m7, 1).im));

    const auto pair = multilinear_sum({CandidateSet(m7, {1, 2}), CandidateSet(m7, {1, 3})});
    CHECK(pair.re == Catch::Approx(0.1234898018587336).margin(1e-12));
    CHECK(pair.im == Catch::Approx(1.4088116512993816).margin(1e-12));

    CHECK_THROWS_AS(multilinear_sum({full, full_set(PrimeModulus(11))}),
                    std::invalid_argument);

    SECTION("counting route equals the naive route") {
        std::mt19937_64 rng(31337);
        for (int i = 0; i < 200; ++i) {
            PrimeModulus m(i % 2 == 0 ? 101 : 13);
            const size_t n = 1 + rng() % 3;
            std::vector<CandidateSet> sets;
            for (size_t j = 0; j < n; ++j) sets.push_back(random_set(m, rng, 12));
            const int64_t mult = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(m.p() - 1));
            const auto fast = multilinear_sum(sets, m.residue(mult));
            const auto slow = naive_sum(sets, mult);
            CHECK(fast.re == Catch::Approx(slow.real()).margin(1e-6));
            CHECK(fast.im == Catch::Approx(slow.imag()).margin(1e-6));
            CHECK(fast.abs() <= static_cast<double>(fast.terms) * (1 + 1e-9));
        }
    }
}

TEST_CASE("bilinear sum bound") {
    PrimeModulus m7(7);
    const auto full = full_set(m7);
    const auto c = check_lemma1({full, full});
    CHECK(c.lhs == Catch::Approx(6.0).margin(1e-9));
    CHECK(c.rhs == Catch::Approx(std::sqrt(7.0) * 6.0));
    CHECK(c.ok);

    for (int64_t p : {3, 11, 101}) {
        PrimeModulus m(p);
        const auto one = check_lemma1({CandidateSet(m, {1}), CandidateSet(m, {1})});
        CHECK(one.lhs == Catch::Approx(1.0).margin(1e-12));
        CHECK(one.rhs == Catch::Approx(std::sqrt(static_cast<double>(p))));
        CHECK(one.ok);
    }

    CHECK_THROWS_AS(check_lemma1({full}), std::domain_error);

    SECTION("holds on random families") {
        std::mt19937_64 rng(8);
        PrimeModulus m(101);
        for (int i = 0; i < 300; ++i) {
            std::vector<CandidateSet> sets;
            const size_t n = 2 + rng() % 2;
            for (size_t j = 0; j < n; ++j) sets.push_back(random_set(m, rng, 30));
            CHECK(check_lemma1(sets).ok);
        }
    }
}

TEST_CASE("dichotomy statistics") {
    PrimeModulus m101(101);

    SECTION("singleton") {
        const auto d = dichotomy_stats(CandidateSet(m101, {5}), RatioInstance(m101, 8));
        CHECK(d.U1 == 1);
        CHECK(d.U2 == 0);
        CHECK(d.U3 == 0);
        CHECK(d.T1.abs() == Catch::Approx(1.0));
        CHECK(d.T2.abs() == Catch::Approx(1.0));
        CHECK(d.threshold_ok);
    }

    SECTION("geometric witness at the theorem edge") {
        const auto A = construct_geometric(m101, 8);
        const auto d = dichotomy_stats(A, RatioInstance(m101, 8)); // floor(101/12) = 8
        CHECK(d.threshold_ok);
        CHECK(d.U1 == (A.size() * A.size() + A.size()) / 2);
    }

    SECTION("partition identities on valid sets") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 100; ++i) {
            const int64_t primes[] = {53, 101, 149};
            PrimeModulus m(primes[i % 3]);
            const int64_t X = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(m.p() / 12));
            RatioInstance inst(m, X);
            const auto A = greedy_lower_bound(inst, rng());
            const auto d = dichotomy_stats(A, inst);
            const int64_t sq = A.size() * A.size();
            CHECK(d.U1 + d.U2 + d.U3 == sq);
            CHECK(d.U1 == (sq + A.size()) / 2);
            CHECK(d.u1 + d.u2 + d.u3 == Rational(1, 1));
        }
    }

    SECTION("preconditions") {
        CHECK_THROWS_AS(dichotomy_stats(CandidateSet(m101, {1}), RatioInstance(m101, 9)),
                        std::domain_error); // X > floor(p/12)
        CHECK_THROWS_AS(dichotomy_stats(CandidateSet(m101, {1, 2, 3, 50}),
                                        RatioInstance(m101, 2)),
                        std::domain_error); // not a member of the family
    }
}

TEST_CASE("hyperbola counts") {
    PrimeModulus m7(7), m13(13);

    CHECK(hyperbola_count(m7.residue(1), 1).count == 2);   // (1,1), (-1,-1)
    CHECK(hyperbola_count(m13.residue(1), 1).count == 2);
    CHECK(hyperbola_count(m7.residue(2), 2).count == 4);
    CHECK_THROWS_AS(hyperbola_count(m7.residue(0), 1), std::domain_error);

    SECTION("negation symmetry, exhaustively at p = 13") {
        for (int64_t alpha = 1; alpha < 13; ++alpha)
            for (int64_t X = 1; X <= 6; ++X)
                CHECK(hyperbola_count(m13.residue(alpha), X).count ==
                      hyperbola_count(m13.residue(13 - alpha), X).count);
    }

    SECTION("boundary X sums to (p-1)^2 over alpha") {
        for (int64_t p : {13, 31}) {
            PrimeModulus m(p);
            int64_t total = 0;
            for (int64_t alpha = 1; alpha < p; ++alpha)
                total += hyperbola_count(m.residue(alpha), m.half()).count;
            CHECK(total == (p - 1) * (p - 1));
        }
    }

    SECTION("divisor bound is recorded") {
        const auto scan = hyperbola_count(m13.residue(5), 4);
        CHECK(scan.k_max == 2 * 4 * 4 / 13);
        CHECK(scan.count <= scan.divisor_bound);
    }
}

TEST_CASE("representation counts") {
    PrimeModulus m7(7);
    const CandidateSet A(m7, {1, 2, 3});

    CHECK(representation_count(A, 2, m7.residue(6)) == 2); // (2,3), (3,2)
    CHECK(representation_count(A, 1, m7.residue(2)) == 1);
    CHECK(representation_count(A, 1, m7.residue(5)) == 0);
    CHECK_THROWS_AS(representation_table(A, 0), std::domain_error);
    CHECK_THROWS_AS(representation_table(A, 4), std::domain_error);

    SECTION("direct enumeration cross-check for k <= 3") {
        std::mt19937_64 rng(11);
        PrimeModulus m(31);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int64_t> elems;
            for (int64_t v = 1; v < 31; ++v)
                if (rng() % 3 == 0) elems.push_back(v);
            if (elems.size() < 3) continue;
            const CandidateSet B(m, std::move(elems));
            const int k = 2 + static_cast<int>(rng() % 2);
            std::vector<int64_t> direct(31, 0);
            const auto& e = B.elements();
            for (size_t i = 0; i < e.size(); ++i)
                for (size_t j = 0; j < e.size(); ++j) {
                    if (i == j) continue;
                    if (k == 2) {
                        ++direct[static_cast<size_t>(e[i] * e[j] % 31)];
                    } else {
                        for (size_t l = 0; l < e.size(); ++l) {
                            if (l == i || l == j) continue;
                            ++direct[static_cast<size_t>(e[i] * e[j] % 31 * e[l] % 31)];
                        }
                    }
                }
            const auto table = representation_table(B, k);
            for (int64_t r = 0; r < 31; ++r)
                CHECK(table[static_cast<size_t>(r)] == direct[static_cast<size_t>(r)]);
        }
    }

    SECTION("total count is the falling factorial") {
        std::mt19937_64 rng(12);
        PrimeModulus m(101);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<int64_t> elems;
            for (int64_t v = 1; v < 101; ++v)
                if (rng() % 4 == 0) elems.push_back(v);
            if (elems.empty()) continue;
            const CandidateSet B(m, std::move(elems));
            const int k = 1 + static_cast<int>(rng() % std::min<int64_t>(5, B.size()));
            const auto table = representation_table(B, k);
            int64_t total = 0;
            for (int64_t c : table) total += c;
            int64_t expect = 1;
            for (int j = 0; j < k; ++j) expect *= B.size() - j;
            CHECK(total == expect);
        }
    }
}
