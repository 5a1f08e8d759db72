#pragma once

// Exact evaluation of multilinear exponential sums over Cartesian products
// of subsets of F_p*, the two-sum dichotomy statistics for ratio-family
// sets, modular hyperbola counts with their divisor-sum bound, and
// representation counts of admissible tuples.
//
// Sums are accumulated as integer counts per residue class first and
// rounded to complex numbers last, so at most p complex operations happen
// regardless of the number of terms.

#include <complex>
#include <limits>
#include <numeric>

#include "smallprod/sets.hpp"

namespace smallprod {

/// A complex sum together with the number of accumulated terms.
struct SumValue {
    double re;
    double im;
    int64_t terms;

    double abs() const { return std::hypot(re, im); }
    std::complex<double> value() const { return {re, im}; }
};

/// Exact reduced fraction.
struct Rational {
    int64_t num;
    int64_t den;

    Rational(int64_t n, int64_t d) : num(n), den(d) {
        if (den == 0) throw std::domain_error("zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend bool operator==(const Rational&, const Rational&) = default;

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Sum of e_p(multiplier * a_1 * ... * a_n) over the Cartesian product of
/// the given sets. All sets must share one modulus.
inline SumValue multilinear_sum(const std::vector<CandidateSet>& sets,
                                const Residue& multiplier) {
    if (sets.empty()) throw std::domain_error("multilinear_sum needs at least one set");
    const PrimeModulus& mod = sets.front().modulus();
    const int64_t p = mod.p();
    if (multiplier.p != p)
        throw std::invalid_argument("multiplier modulus differs from the sets'");
    for (const auto& s : sets)
        if (!(s.modulus() == mod))
            throw std::invalid_argument("sets belong to different moduli");

    // counts[r] = number of tuples whose product is r
    std::vector<int64_t> counts(static_cast<size_t>(p), 0);
    for (int64_t a : sets.front().elements()) ++counts[static_cast<size_t>(a)];
    std::vector<int64_t> next(static_cast<size_t>(p), 0);
    for (size_t i = 1; i < sets.size(); ++i) {
        std::fill(next.begin(), next.end(), 0);
        for (int64_t r = 0; r < p; ++r) {
            const int64_t c = counts[static_cast<size_t>(r)];
            if (c == 0) continue;
            for (int64_t a : sets[i].elements())
                next[static_cast<size_t>(detail::mul_mod(r, a, p))] += c;
        }
        counts.swap(next);
    }

    std::complex<double> acc = 0;
    for (int64_t r = 0; r < p; ++r) {
        const int64_t c = counts[static_cast<size_t>(r)];
        if (c == 0) continue;
        acc += static_cast<double>(c) *
               e_p(mod, detail::mul_mod(multiplier.value, r, p)).value();
    }

    __int128 terms = 1;
    for (const auto& s : sets) {
        terms *= s.size();
        if (terms > std::numeric_limits<int64_t>::max()) {
            terms = std::numeric_limits<int64_t>::max();
            break;
        }
    }
    return SumValue{acc.real(), acc.imag(), static_cast<int64_t>(terms)};
}

inline SumValue multilinear_sum(const std::vector<CandidateSet>& sets) {
    if (sets.empty()) throw std::domain_error("multilinear_sum needs at least one set");
    return multilinear_sum(sets, sets.front().modulus().residue(1));
}

struct Lemma1Check {
    double lhs;
    double rhs;
    bool ok;
};

/// lhs = |sum|, rhs = sqrt(p) * (|A_1|...|A_n|)^((n-1)/n).
inline Lemma1Check check_lemma1(const std::vector<CandidateSet>& sets) {
    const auto n = sets.size();
    if (n < 2) throw std::domain_error("the bound needs n >= 2 sets");
    const double lhs = multilinear_sum(sets).abs();
    double prod = 1;
    for (const auto& s : sets) prod *= static_cast<double>(s.size());
    const double p = static_cast<double>(sets.front().modulus().p());
    const double rhs = std::sqrt(p) * std::pow(prod, (static_cast<double>(n) - 1.0) /
                                                         static_cast<double>(n));
    return Lemma1Check{lhs, rhs, lhs <= rhs + 1e-6};
}

/// The two sums T_1 = sum e_p(s1/s2), T_2 = sum e_p(2 s1/s2) over ordered
/// pairs of A, together with the ordered-pair partition behind them:
///   U1 pairs oriented so the known-small ratio is used (all diagonal pairs
///   included), U2 remaining pairs with |s1/s2|_p > 3p/8, U3 the rest.
struct DichotomyStats {
    SumValue T1;
    SumValue T2;
    int64_t U1;
    int64_t U2;
    int64_t U3;
    Rational u1;
    Rational u2;
    Rational u3;
    bool threshold_ok; // |T1| + |T2| >= |A|^2 / 400
};

/// Requires a valid ratio-family set and X <= floor(p/12).
inline DichotomyStats dichotomy_stats(const CandidateSet& A, const RatioInstance& inst) {
    const int64_t p = inst.modulus.p();
    if (A.empty()) throw std::domain_error("dichotomy needs a nonempty set");
    if (12 * inst.X > p)
        throw std::domain_error("dichotomy statistics require X <= p/12");
    if (!satisfies_ratio_property(A, inst))
        throw std::domain_error("set does not satisfy the ratio property at X");

    const auto& el = A.elements();
    const size_t k = el.size();
    const auto inv = detail::element_inverses(A);

    std::complex<double> t1 = 0, t2 = 0;
    int64_t U1 = static_cast<int64_t>(k); // diagonal pairs
    int64_t U2 = 0, U3 = 0;
    for (size_t i = 0; i < k; ++i) {
        t1 += e_p(inst.modulus, 1).value();
        t2 += e_p(inst.modulus, 2).value();
    }
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            const int64_t fwd = detail::mul_mod(el[i], inv[j], p); // el[i]/el[j]
            const int64_t bwd = detail::mul_mod(el[j], inv[i], p);
            t1 += e_p(inst.modulus, fwd).value() + e_p(inst.modulus, bwd).value();
            t2 += e_p(inst.modulus, 2 * fwd).value() + e_p(inst.modulus, 2 * bwd).value();
            // orient the pair whose ratio is known to be small into W
            const int64_t loose = detail::balanced_of(fwd, p) <= inst.X ? bwd : fwd;
            ++U1;
            if (8 * detail::balanced_of(loose, p) > 3 * p)
                ++U2;
            else
                ++U3;
        }
    }

    const int64_t total = static_cast<int64_t>(k) * static_cast<int64_t>(k);
    const SumValue T1{t1.real(), t1.imag(), total};
    const SumValue T2{t2.real(), t2.imag(), total};
    const bool ok = T1.abs() + T2.abs() >= static_cast<double>(total) / 400.0;
    return DichotomyStats{T1,
                          T2,
                          U1,
                          U2,
                          U3,
                          Rational(U1, total),
                          Rational(U2, total),
                          Rational(U3, total),
                          ok};
}

/// Count of signed integer pairs (a, b), 0 < |a|,|b| <= X, with
/// ab == alpha (mod p), plus the divisor-sum upper bound
/// sum_{|K| <= K_max} 2*tau_2(|alpha_0 + K p|) over ab = alpha_0 + Kp.
struct HyperbolaScan {
    Residue alpha;
    int64_t X;
    int64_t k_max; // floor(2 X^2 / p)
    int64_t count;
    int64_t divisor_bound;
};

inline HyperbolaScan hyperbola_count(const Residue& alpha, int64_t X) {
    if (alpha.value == 0) throw std::domain_error("hyperbola count needs alpha != 0");
    const int64_t p = alpha.p;
    const int64_t half = (p - 1) / 2;
    if (X < 1 || X > half) throw std::domain_error("X must satisfy 1 <= X <= (p-1)/2");

    // X <= (p-1)/2, so each a leaves at most one b with |b| <= X
    int64_t count = 0;
    for (int64_t v = 1; v <= X; ++v) {
        for (int64_t a : {v, p - v}) {
            const int64_t a_inv = detail::pow_mod(a, p - 2, p);
            const int64_t b = detail::mul_mod(alpha.value % p, a_inv, p);
            if (detail::balanced_of(b, p) <= X) ++count;
        }
    }

    const int64_t k_max = 2 * X * X / p;
    const int64_t alpha_signed = alpha.value <= half ? alpha.value : alpha.value - p;
    int64_t bound = 0;
    for (int64_t K = -k_max; K <= k_max; ++K) {
        const int64_t m = alpha_signed + K * p; // never zero since alpha != 0 mod p
        bound += 2 * tau(2, m < 0 ? -m : m);
    }
    if (count > bound)
        throw std::logic_error("hyperbola count exceeded its divisor bound");
    return HyperbolaScan{alpha, X, k_max, count, bound};
}

/// Counts over all residues of products of ordered k-tuples of pairwise
/// distinct elements of A: table[r] = r_k(r).
inline std::vector<int64_t> representation_table(const CandidateSet& A, int k) {
    if (k < 1 || k > A.size())
        throw std::domain_error("representation counts need 1 <= k <= |A|");
    if (k > 20) throw std::domain_error("representation counts overflow past k = 20");
    const int64_t p = A.modulus().p();

    // subsets first: dp[j][r] = number of j-subsets with product r, then
    // each subset yields k! admissible tuples with the same product
    std::vector<std::vector<int64_t>> dp(
        static_cast<size_t>(k) + 1, std::vector<int64_t>(static_cast<size_t>(p), 0));
    dp[0][1] = 1;
    for (int64_t e : A.elements()) {
        for (int j = k; j >= 1; --j) {
            auto& lower = dp[static_cast<size_t>(j - 1)];
            auto& upper = dp[static_cast<size_t>(j)];
            for (int64_t r = 0; r < p; ++r) {
                if (lower[static_cast<size_t>(r)] == 0) continue;
                upper[static_cast<size_t>(detail::mul_mod(r, e, p))] +=
                    lower[static_cast<size_t>(r)];
            }
        }
    }
    int64_t factorial = 1;
    for (int j = 2; j <= k; ++j) factorial *= j;
    auto table = std::move(dp[static_cast<size_t>(k)]);
    for (auto& c : table) c *= factorial;
    return table;
}

inline int64_t representation_count(const CandidateSet& A, int k, const Residue& target) {
    if (target.p != A.modulus().p())
        throw std::invalid_argument("target modulus differs from the set's");
    return representation_table(A, k)[static_cast<size_t>(target.value)];
}

} // namespace smallprod
