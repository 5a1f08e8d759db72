#pragma once

// Membership of a candidate set A in the two property families:
//   ratio family:   every pair (s, t) in A^2 has |s/t|_p <= X or |t/s|_p <= X
//   product family: every n pairwise-distinct elements have |s_1...s_n|_p <= X
// with full checkers, incremental extension checks, and violation witnesses.

#include <algorithm>
#include <optional>
#include <vector>

#include "smallprod/modp.hpp"

namespace smallprod {

/// A sorted set of distinct nonzero residues mod p.
class CandidateSet {
public:
    CandidateSet(PrimeModulus mod, std::vector<int64_t> elems)
        : modulus_(mod), elements_(std::move(elems)) {
        for (auto& e : elements_) e = modulus_.residue(e).value;
        std::sort(elements_.begin(), elements_.end());
        if (!elements_.empty() && elements_.front() == 0)
            throw std::invalid_argument("candidate sets live in F_p*, zero rejected");
        if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
            throw std::invalid_argument("candidate set elements must be distinct");
    }

    const PrimeModulus& modulus() const { return modulus_; }
    const std::vector<int64_t>& elements() const { return elements_; }
    int64_t size() const { return static_cast<int64_t>(elements_.size()); }
    bool empty() const { return elements_.empty(); }

    bool contains(int64_t v) const {
        return std::binary_search(elements_.begin(), elements_.end(),
                                  modulus_.residue(v).value);
    }

private:
    PrimeModulus modulus_;
    std::vector<int64_t> elements_;
};

/// Parameters of the ratio family: one bound X.
struct RatioInstance {
    PrimeModulus modulus;
    int64_t X;

    RatioInstance(PrimeModulus mod, int64_t bound) : modulus(mod), X(bound) {
        if (X < 1 || X > modulus.half())
            throw std::domain_error("X must satisfy 1 <= X <= (p-1)/2");
    }
};

/// Parameters of the product family: tuple length n and bound X.
/// n > p-1 is degenerate (every subset is vacuously valid) but accepted.
struct ProductInstance {
    PrimeModulus modulus;
    int n;
    int64_t X;

    ProductInstance(PrimeModulus mod, int tuple_len, int64_t bound)
        : modulus(mod), n(tuple_len), X(bound) {
        if (n < 2) throw std::domain_error("product family requires n >= 2");
        if (X < 1 || X > modulus.half())
            throw std::domain_error("X must satisfy 1 <= X <= (p-1)/2");
    }
};

/// A witnessing tuple whose norm exceeds the instance bound.
struct Violation {
    std::vector<int64_t> tuple;
    int64_t computed_norm;
};

namespace detail {

inline std::vector<int64_t> element_inverses(const CandidateSet& A) {
    std::vector<int64_t> inv;
    inv.reserve(A.elements().size());
    const int64_t p = A.modulus().p();
    for (int64_t e : A.elements()) inv.push_back(pow_mod(e, p - 2, p));
    return inv;
}

inline int64_t balanced_of(int64_t canonical, int64_t p) {
    return std::min(canonical, p - canonical);
}

// True iff the unordered pair {s, t} passes the ratio test in some direction.
inline bool ratio_pair_ok(int64_t s, int64_t t_inv, int64_t t, int64_t s_inv,
                          int64_t p, int64_t X) {
    return balanced_of(mul_mod(s, t_inv, p), p) <= X ||
           balanced_of(mul_mod(t, s_inv, p), p) <= X;
}

// Walks n-subsets of elems in lexicographic order with an incremental
// product; calls visit(subset, product) and stops when it returns false.
template <typename Visit>
bool for_each_subset_product(const std::vector<int64_t>& elems, int n, int64_t p,
                             Visit&& visit) {
    const int m = static_cast<int>(elems.size());
    if (n > m) return true;
    std::vector<int> idx(static_cast<size_t>(n));
    std::vector<int64_t> prefix(static_cast<size_t>(n) + 1, 1);
    // depth-first lexicographic walk
    int depth = 0;
    idx[0] = 0;
    while (depth >= 0) {
        if (idx[static_cast<size_t>(depth)] > m - (n - depth)) {
            --depth;
            if (depth >= 0) ++idx[static_cast<size_t>(depth)];
            continue;
        }
        const int i = idx[static_cast<size_t>(depth)];
        prefix[static_cast<size_t>(depth) + 1] =
            mul_mod(prefix[static_cast<size_t>(depth)], elems[static_cast<size_t>(i)], p);
        if (depth == n - 1) {
            if (!visit(idx, prefix[static_cast<size_t>(n)])) return false;
            ++idx[static_cast<size_t>(depth)];
        } else {
            ++depth;
            idx[static_cast<size_t>(depth)] = i + 1;
        }
    }
    return true;
}

} // namespace detail

inline bool satisfies_ratio_property(const CandidateSet& A, const RatioInstance& inst) {
    if (!(A.modulus() == inst.modulus))
        throw std::invalid_argument("set and instance moduli differ");
    const int64_t p = inst.modulus.p();
    const auto& el = A.elements();
    const auto inv = detail::element_inverses(A);
    for (size_t i = 0; i < el.size(); ++i)
        for (size_t j = i + 1; j < el.size(); ++j)
            if (!detail::ratio_pair_ok(el[i], inv[j], el[j], inv[i], p, inst.X))
                return false;
    return true; // diagonal pairs always pass since X >= 1
}

inline bool satisfies_product_property(const CandidateSet& A, const ProductInstance& inst) {
    if (!(A.modulus() == inst.modulus))
        throw std::invalid_argument("set and instance moduli differ");
    const int64_t p = inst.modulus.p();
    const int64_t X = inst.X;
    return detail::for_each_subset_product(
        A.elements(), inst.n, p,
        [&](const std::vector<int>&, int64_t prod) {
            return detail::balanced_of(prod, p) <= X;
        });
}

/// Lexicographically first violating pair, or nullopt if A satisfies.
/// The reported norm is the smaller of the two directed ratio norms.
inline std::optional<Violation> find_violation(const CandidateSet& A,
                                               const RatioInstance& inst) {
    if (!(A.modulus() == inst.modulus))
        throw std::invalid_argument("set and instance moduli differ");
    const int64_t p = inst.modulus.p();
    const auto& el = A.elements();
    const auto inv = detail::element_inverses(A);
    for (size_t i = 0; i < el.size(); ++i) {
        for (size_t j = i + 1; j < el.size(); ++j) {
            const int64_t fwd = detail::balanced_of(detail::mul_mod(el[i], inv[j], p), p);
            const int64_t bwd = detail::balanced_of(detail::mul_mod(el[j], inv[i], p), p);
            if (fwd > inst.X && bwd > inst.X)
                return Violation{{el[i], el[j]}, std::min(fwd, bwd)};
        }
    }
    return std::nullopt;
}

/// Lexicographically first violating n-subset, or nullopt.
inline std::optional<Violation> find_violation(const CandidateSet& A,
                                               const ProductInstance& inst) {
    if (!(A.modulus() == inst.modulus))
        throw std::invalid_argument("set and instance moduli differ");
    const int64_t p = inst.modulus.p();
    std::optional<Violation> out;
    detail::for_each_subset_product(
        A.elements(), inst.n, p,
        [&](const std::vector<int>& idx, int64_t prod) {
            const int64_t norm = detail::balanced_of(prod, p);
            if (norm <= inst.X) return true;
            std::vector<int64_t> tuple;
            tuple.reserve(idx.size());
            for (int i : idx) tuple.push_back(A.elements()[static_cast<size_t>(i)]);
            out = Violation{std::move(tuple), norm};
            return false;
        });
    return out;
}

/// Incremental check: does A u {s} still satisfy, given that A does?
/// Only pairs involving s are examined.
inline bool extend_check(const CandidateSet& A, int64_t s, const RatioInstance& inst) {
    const int64_t p = inst.modulus.p();
    const int64_t sv = inst.modulus.residue(s).value;
    if (sv == 0) throw std::domain_error("extension element must be nonzero");
    if (A.contains(sv)) throw std::domain_error("extension element already in the set");
    const int64_t s_inv = detail::pow_mod(sv, p - 2, p);
    for (int64_t t : A.elements()) {
        const int64_t t_inv = detail::pow_mod(t, p - 2, p);
        if (!detail::ratio_pair_ok(sv, t_inv, t, s_inv, p, inst.X)) return false;
    }
    return true;
}

/// Incremental check for the product family: only n-subsets containing s.
inline bool extend_check(const CandidateSet& A, int64_t s, const ProductInstance& inst) {
    const int64_t p = inst.modulus.p();
    const int64_t sv = inst.modulus.residue(s).value;
    if (sv == 0) throw std::domain_error("extension element must be nonzero");
    if (A.contains(sv)) throw std::domain_error("extension element already in the set");
    if (A.size() + 1 < inst.n) return true; // still vacuous
    return detail::for_each_subset_product(
        A.elements(), inst.n - 1, p,
        [&](const std::vector<int>&, int64_t prod) {
            return detail::balanced_of(detail::mul_mod(prod, sv, p), p) <= inst.X;
        });
}

/// Elementwise c*A, re-sorted into canonical form. c must be nonzero.
inline CandidateSet scaled(const CandidateSet& A, int64_t c) {
    const Residue cr = A.modulus().residue(c);
    if (cr.value == 0) throw std::domain_error("scaling factor must be nonzero");
    std::vector<int64_t> mapped;
    mapped.reserve(A.elements().size());
    for (int64_t e : A.elements())
        mapped.push_back(detail::mul_mod(e, cr.value, A.modulus().p()));
    return CandidateSet(A.modulus(), std::move(mapped));
}

/// Elementwise -A.
inline CandidateSet negated(const CandidateSet& A) {
    return scaled(A, A.modulus().p() - 1);
}

} // namespace smallprod
