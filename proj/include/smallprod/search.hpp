#pragma once

// Exact values of the extremal cardinalities
//   S(X)   = max |A| over ratio-family sets, and
//   R_n(X) = max |A| over product-family sets,
// at desk scale, plus the two explicit lower-bound constructions and an
// independent brute-force oracle for tiny p.
//
// The ratio relation s*t^{-1} in D is invariant under global scaling, so
// some maximum set contains 1 and S(X) is 1 + the clique number of the
// graph induced on D \ {1}, a graph with at most 4X-1 vertices regardless
// of p. The clique search is branch-and-bound with greedy-coloring bounds
// over bitset adjacency. Product instances run a subset DFS that maintains
// all (n-1)-subset products of the current set, so testing one extension
// costs one multiplication per stored product.

#include <bit>
#include <chrono>
#include <cstdint>
#include <random>

#include "smallprod/sets.hpp"

namespace smallprod {

/// Node/time limits; zero means unlimited.
struct SearchBudget {
    int64_t max_nodes = 0;
    int64_t max_millis = 0;
};

/// Outcome of a solver run. `exact` is set only when the search space was
/// exhausted within budget; otherwise `value`/`witness` are the best found.
struct SearchResult {
    int64_t value;
    CandidateSet witness;
    bool exact;
    int64_t nodes;
    int64_t elapsed_millis;
};

/// The set D of admissible ratios: d with |d|_p <= X or |d^{-1}|_p <= X.
/// Closed under inversion and negation; always contains 1 and p-1.
class ConnectionSet {
public:
    ConnectionSet(PrimeModulus mod, int64_t bound, std::vector<int64_t> members)
        : modulus_(mod), X_(bound), members_(std::move(members)) {}

    const PrimeModulus& modulus() const { return modulus_; }
    int64_t X() const { return X_; }
    const std::vector<int64_t>& members() const { return members_; } // sorted
    int64_t size() const { return static_cast<int64_t>(members_.size()); }

    bool contains(int64_t canonical) const {
        return std::binary_search(members_.begin(), members_.end(), canonical);
    }

private:
    PrimeModulus modulus_;
    int64_t X_;
    std::vector<int64_t> members_;
};

/// Builds D in O(X) inverse computations: each balanced value v <= X
/// contributes +-v and their inverses, so |D| <= 4X.
inline ConnectionSet build_connection_set(const RatioInstance& inst) {
    const int64_t p = inst.modulus.p();
    std::vector<int64_t> members;
    members.reserve(static_cast<size_t>(std::min<int64_t>(4 * inst.X, p - 1)));
    for (int64_t v = 1; v <= inst.X; ++v) {
        const int64_t iv = detail::pow_mod(v, p - 2, p);
        members.push_back(v);
        members.push_back(p - v);
        members.push_back(iv);
        members.push_back(p - iv);
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return ConnectionSet(inst.modulus, inst.X, std::move(members));
}

namespace detail {

// -------- search plumbing --------

struct BudgetClock {
    int64_t max_nodes = 0;
    bool timed = false;
    std::chrono::steady_clock::time_point deadline{};
    int64_t nodes = 0;
    bool exhausted = false;

    explicit BudgetClock(const SearchBudget& b) {
        max_nodes = b.max_nodes;
        if (b.max_millis > 0) {
            timed = true;
            deadline = std::chrono::steady_clock::now() +
                       std::chrono::milliseconds(b.max_millis);
        }
    }

    // Counts one node; returns false once the budget is gone.
    bool tick() {
        if (exhausted) return false;
        ++nodes;
        if (max_nodes > 0 && nodes > max_nodes) exhausted = true;
        if (timed && (nodes & 1023) == 0 &&
            std::chrono::steady_clock::now() > deadline)
            exhausted = true;
        return !exhausted;
    }
};

struct Bits {
    std::vector<uint64_t> w;
    explicit Bits(size_t n = 0) : w((n + 63) / 64, 0) {}

    void set(size_t i) { w[i >> 6] |= uint64_t{1} << (i & 63); }
    void reset(size_t i) { w[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
    bool test(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }

    bool any() const {
        for (uint64_t x : w)
            if (x) return true;
        return false;
    }

    int count() const {
        int c = 0;
        for (uint64_t x : w) c += std::popcount(x);
        return c;
    }

    bool intersects(const Bits& o) const {
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i] & o.w[i]) return true;
        return false;
    }

    static Bits intersection(const Bits& a, const Bits& b) {
        Bits out;
        out.w.resize(a.w.size());
        for (size_t i = 0; i < a.w.size(); ++i) out.w[i] = a.w[i] & b.w[i];
        return out;
    }

    template <typename F>
    void for_each(F&& f) const { // ascending
        for (size_t i = 0; i < w.size(); ++i) {
            uint64_t x = w[i];
            while (x) {
                f(i * 64 + static_cast<size_t>(std::countr_zero(x)));
                x &= x - 1;
            }
        }
    }
};

// Branch-and-bound maximum clique with greedy-coloring upper bounds over
// explicit bitset adjacency. Also answers decision queries ("is there a
// clique of size >= k inside P"), which the lexicographic witness
// reconstruction issues repeatedly.
class CliqueSearch {
public:
    CliqueSearch(const std::vector<Bits>& adj, size_t n, BudgetClock& clock)
        : adj_(adj), n_(n), clock_(clock) {}

    // Largest clique found, seeded with an incumbent. Exact unless the
    // clock ran out.
    std::vector<int> maximize(std::vector<int> incumbent) {
        best_ = std::move(incumbent);
        best_size_ = static_cast<int>(best_.size());
        stop_at_ = -1;
        Bits all(n_);
        for (size_t v = 0; v < n_; ++v) all.set(v);
        current_.clear();
        expand(all, 0);
        return best_;
    }

    bool decision(const Bits& candidates, int target) {
        if (target <= 0) return true;
        best_.clear();
        best_size_ = target - 1;
        stop_at_ = target;
        current_.clear();
        Bits p = candidates;
        expand(p, 0);
        return best_size_ >= target;
    }

private:
    void expand(Bits& p, int depth) {
        if (!clock_.tick()) return;
        std::vector<int> order;
        std::vector<int> bound;
        color_sort(p, order, bound);
        for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
            if (depth + bound[static_cast<size_t>(i)] <= best_size_) return;
            const int v = order[static_cast<size_t>(i)];
            current_.push_back(v);
            Bits next = Bits::intersection(p, adj_[static_cast<size_t>(v)]);
            if (!next.any()) {
                if (depth + 1 > best_size_) {
                    best_size_ = depth + 1;
                    best_ = current_;
                }
            } else {
                expand(next, depth + 1);
            }
            current_.pop_back();
            p.reset(static_cast<size_t>(v));
            if (clock_.exhausted || (stop_at_ > 0 && best_size_ >= stop_at_)) return;
        }
    }

    // Greedy coloring of p; emits vertices grouped by color ascending, so
    // bound[i] is a clique upper bound for {order[0..i]}.
    void color_sort(const Bits& p, std::vector<int>& order, std::vector<int>& bound) {
        classes_.clear();
        p.for_each([&](size_t v) {
            size_t c = 0;
            while (c < classes_.size() && classes_[c].intersects(adj_[v])) ++c;
            if (c == classes_.size()) classes_.emplace_back(n_);
            classes_[c].set(v);
        });
        for (size_t c = 0; c < classes_.size(); ++c)
            classes_[c].for_each([&](size_t v) {
                order.push_back(static_cast<int>(v));
                bound.push_back(static_cast<int>(c) + 1);
            });
    }

    const std::vector<Bits>& adj_;
    size_t n_;
    BudgetClock& clock_;
    std::vector<int> best_;
    std::vector<int> current_;
    int best_size_ = 0;
    int stop_at_ = -1;
    std::vector<Bits> classes_;
};

// Lexicographically least clique of exactly `omega` vertices (by vertex
// index). Assumes one exists; returns empty on budget exhaustion.
inline std::vector<int> lex_least_clique(const std::vector<Bits>& adj, size_t n,
                                         int omega, BudgetClock& clock) {
    std::vector<int> chosen;
    Bits cand(n);
    for (size_t v = 0; v < n; ++v) cand.set(v);
    for (size_t v = 0; v < n && static_cast<int>(chosen.size()) < omega; ++v) {
        if (!cand.test(v)) continue;
        Bits next = Bits::intersection(cand, adj[v]);
        CliqueSearch query(adj, n, clock);
        const int need = omega - static_cast<int>(chosen.size()) - 1;
        if (query.decision(next, need)) {
            chosen.push_back(static_cast<int>(v));
            cand = next;
        } else {
            cand.reset(v);
        }
        if (clock.exhausted) return {};
    }
    if (static_cast<int>(chosen.size()) != omega) return {};
    return chosen;
}

// Subset DFS for the product family. Candidate lists shrink down the tree;
// prods_[j] holds the products of all j-subsets of the current set.
class ProductSearch {
public:
    ProductSearch(const std::vector<int64_t>& pool, int64_t p, int n, int64_t X,
                  BudgetClock& clock)
        : pool_(pool), p_(p), n_(n), X_(X), clock_(clock),
          prods_(static_cast<size_t>(n)) {
        prods_[0].push_back(1);
    }

    // Returns the best set found (ascending), seeded with an incumbent.
    std::vector<int64_t> maximize(std::vector<int64_t> incumbent) {
        best_set_ = std::move(incumbent);
        best_ = static_cast<int64_t>(best_set_.size());
        stop_at_ = -1;
        dfs(pool_);
        return best_set_;
    }

    // Is there a valid set of size >= target whose elements all come from
    // `candidates` (already filtered against `prefix`)?
    bool decision(std::vector<int64_t> prefix, const std::vector<int64_t>& candidates,
                  int64_t target) {
        if (target <= 0) return true;
        current_ = std::move(prefix);
        const int64_t base = static_cast<int64_t>(current_.size());
        best_ = base + target - 1;
        best_set_.clear();
        stop_at_ = base + target;
        rebuild_products();
        const bool found = [&] {
            dfs(candidates);
            return best_ >= stop_at_;
        }();
        current_.clear();
        rebuild_products();
        return found;
    }

private:
    void rebuild_products() {
        for (auto& level : prods_) level.clear();
        prods_[0].push_back(1);
        std::vector<int64_t> saved = current_;
        current_.clear();
        for (int64_t s : saved) push_element(s);
    }

    void push_element(int64_t s) {
        const int top = std::min<int>(static_cast<int>(current_.size()) + 1, n_ - 1);
        for (int j = top; j >= 1; --j)
            for (int64_t q : prods_[static_cast<size_t>(j - 1)])
                prods_[static_cast<size_t>(j)].push_back(mul_mod(q, s, p_));
        current_.push_back(s);
    }

    void pop_element(const std::vector<size_t>& sizes) {
        current_.pop_back();
        for (size_t j = 0; j < prods_.size(); ++j) prods_[j].resize(sizes[j]);
    }

    void dfs(const std::vector<int64_t>& cand) {
        if (!clock_.tick()) return;
        const int64_t sz = static_cast<int64_t>(current_.size());
        if (sz > best_) {
            best_ = sz;
            best_set_ = current_;
        }
        if (stop_at_ > 0 && best_ >= stop_at_) return;
        std::vector<size_t> sizes(prods_.size());
        for (size_t i = 0; i < cand.size(); ++i) {
            if (sz + static_cast<int64_t>(cand.size() - i) <= best_) return;
            const int64_t s = cand[i];
            for (size_t j = 0; j < prods_.size(); ++j) sizes[j] = prods_[j].size();
            const size_t old_top = prods_[static_cast<size_t>(n_ - 1)].size();
            push_element(s);
            // new constraints are exactly the (n-1)-subset products added now
            std::vector<int64_t> next;
            next.reserve(cand.size() - i - 1);
            const auto& top = prods_[static_cast<size_t>(n_ - 1)];
            for (size_t k = i + 1; k < cand.size(); ++k) {
                const int64_t t = cand[k];
                bool ok = true;
                for (size_t q = old_top; q < top.size(); ++q)
                    if (balanced_of(mul_mod(top[q], t, p_), p_) > X_) {
                        ok = false;
                        break;
                    }
                if (ok) next.push_back(t);
            }
            dfs(next);
            pop_element(sizes);
            if (clock_.exhausted || (stop_at_ > 0 && best_ >= stop_at_)) return;
        }
    }

    const std::vector<int64_t>& pool_;
    int64_t p_;
    int n_;
    int64_t X_;
    BudgetClock& clock_;
    std::vector<std::vector<int64_t>> prods_;
    std::vector<int64_t> current_;
    std::vector<int64_t> best_set_;
    int64_t best_ = 0;
    int64_t stop_at_ = -1;
};

// Lexicographically least valid product-family set of exactly `omega`
// elements, by greedy prefix growth with decision queries.
inline std::vector<int64_t> lex_least_product_set(const std::vector<int64_t>& pool,
                                                  int64_t p, int n, int64_t X,
                                                  int64_t omega, BudgetClock& clock) {
    std::vector<int64_t> chosen;
    std::vector<int64_t> cand = pool;
    std::vector<std::vector<int64_t>> prods(static_cast<size_t>(n));
    prods[0].push_back(1);
    size_t scan = 0;
    while (static_cast<int64_t>(chosen.size()) < omega) {
        if (scan >= cand.size()) return {};
        const int64_t s = cand[scan];
        // grow the subset products by s; the new top-level entries are the
        // (n-1)-subset products containing s
        const int top = std::min<int>(static_cast<int>(chosen.size()) + 1, n - 1);
        std::vector<std::vector<int64_t>> grown = prods;
        for (int j = top; j >= 1; --j)
            for (int64_t q : grown[static_cast<size_t>(j - 1)])
                grown[static_cast<size_t>(j)].push_back(mul_mod(q, s, p));
        std::vector<int64_t> next;
        for (size_t k = scan + 1; k < cand.size(); ++k) {
            bool ok = true;
            for (size_t q = prods[static_cast<size_t>(n - 1)].size();
                 q < grown[static_cast<size_t>(n - 1)].size(); ++q)
                if (balanced_of(mul_mod(grown[static_cast<size_t>(n - 1)][q], cand[k], p), p) > X) {
                    ok = false;
                    break;
                }
            if (ok) next.push_back(cand[k]);
        }
        std::vector<int64_t> prefix = chosen;
        prefix.push_back(s);
        ProductSearch query(next, p, n, X, clock);
        if (query.decision(prefix, next, omega - static_cast<int64_t>(prefix.size()))) {
            chosen = std::move(prefix);
            prods = std::move(grown);
            cand = std::move(next);
            scan = 0;
        } else {
            ++scan;
        }
        if (clock.exhausted) return {};
    }
    return chosen;
}

inline int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

inline std::vector<int64_t> all_residues(int64_t p) {
    std::vector<int64_t> out;
    out.reserve(static_cast<size_t>(p - 1));
    for (int64_t v = 1; v < p; ++v) out.push_back(v);
    return out;
}

constexpr size_t kMatrixCap = 4096;     // largest vertex count given bitset adjacency
constexpr int64_t kPoolCap = 1 << 22;   // largest materialized candidate pool

} // namespace detail

/// Greedy valid set for the ratio family; deterministic given seed.
inline CandidateSet greedy_lower_bound(const RatioInstance& inst, uint64_t seed) {
    const int64_t p = inst.modulus.p();
    const ConnectionSet D = build_connection_set(inst);
    std::vector<int64_t> pool = D.members();
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int64_t> chosen;
    std::vector<int64_t> inverses;
    for (int64_t s : pool) {
        const int64_t s_inv = detail::pow_mod(s, p - 2, p);
        bool ok = true;
        for (size_t i = 0; i < chosen.size() && ok; ++i)
            ok = detail::ratio_pair_ok(s, inverses[i], chosen[i], s_inv, p, inst.X);
        if (ok) {
            chosen.push_back(s);
            inverses.push_back(s_inv);
        }
    }
    return CandidateSet(inst.modulus, std::move(chosen));
}

/// Greedy valid set for the product family; deterministic given seed.
/// Draws candidates from the small-balanced-norm band, where members live.
inline CandidateSet greedy_lower_bound(const ProductInstance& inst, uint64_t seed) {
    const int64_t p = inst.modulus.p();
    const int64_t band = std::min<int64_t>(inst.modulus.half(), std::max<int64_t>(inst.X, inst.n));
    std::vector<int64_t> pool;
    for (int64_t v = 1; v <= std::min<int64_t>(band, 4096); ++v) {
        pool.push_back(v);
        if (p - v != v) pool.push_back(p - v);
    }
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int64_t> chosen;
    std::vector<std::vector<int64_t>> prods(static_cast<size_t>(inst.n));
    prods[0].push_back(1);
    for (int64_t s : pool) {
        bool ok = true;
        for (int64_t q : prods[static_cast<size_t>(inst.n - 1)])
            if (detail::balanced_of(detail::mul_mod(q, s, p), p) > inst.X) {
                ok = false;
                break;
            }
        if (!ok) continue;
        const int top = std::min<int>(static_cast<int>(chosen.size()) + 1, inst.n - 1);
        for (int j = top; j >= 1; --j)
            for (int64_t q : prods[static_cast<size_t>(j - 1)])
                prods[static_cast<size_t>(j)].push_back(detail::mul_mod(q, s, p));
        chosen.push_back(s);
    }
    return CandidateSet(inst.modulus, std::move(chosen));
}

/// {+-2^k : 0 <= k <= floor(log2 X)}, a ratio-family set of size
/// 2(floor(log2 X) + 1); every ratio is +-2^j with 2^j <= X.
inline CandidateSet construct_geometric(const PrimeModulus& mod, int64_t X) {
    if (X < 1) throw std::domain_error("construction requires X >= 1");
    const int top = std::bit_width(static_cast<uint64_t>(X)) - 1; // floor(log2 X)
    if ((int64_t{1} << top) > mod.half())
        throw std::domain_error("2^floor(log2 X) must not exceed (p-1)/2");
    std::vector<int64_t> elems;
    for (int k = 0; k <= top; ++k) {
        const int64_t v = int64_t{1} << k;
        elems.push_back(v);
        elems.push_back(mod.p() - v);
    }
    return CandidateSet(mod, std::move(elems));
}

/// Exact floor(x^(1/n)) for x >= 1.
inline int64_t nth_root_floor(int64_t x, int n) {
    if (x < 1 || n < 1) throw std::domain_error("nth_root_floor requires x, n >= 1");
    auto pow_fits = [&](int64_t r) {
        __int128 acc = 1;
        for (int i = 0; i < n; ++i) {
            acc *= r;
            if (acc > x) return false;
        }
        return true;
    };
    int64_t r = static_cast<int64_t>(std::pow(static_cast<double>(x), 1.0 / n));
    while (r > 1 && !pow_fits(r)) --r;
    while (pow_fits(r + 1)) ++r;
    return r;
}

/// {+-1, ..., +-floor(X^(1/n))}, a product-family set of size
/// 2*floor(X^(1/n)); any n distinct members multiply to an integer of
/// absolute value <= X.
inline CandidateSet construct_interval(const PrimeModulus& mod, int n, int64_t X) {
    if (X < 1) throw std::domain_error("construction requires X >= 1");
    if (n < 2) throw std::domain_error("construction requires n >= 2");
    const int64_t m = nth_root_floor(X, n);
    __int128 pw = 1;
    for (int i = 0; i < n; ++i) pw *= m;
    if (pw > mod.half())
        throw std::domain_error("floor(X^(1/n))^n must not exceed (p-1)/2");
    std::vector<int64_t> elems;
    for (int64_t v = 1; v <= m; ++v) {
        elems.push_back(v);
        elems.push_back(mod.p() - v);
    }
    return CandidateSet(mod, std::move(elems));
}

/// Exact S(X) by branch-and-bound on the induced D \ {1} subgraph.
/// The witness of an exact run is the lexicographically least maximum set
/// (which always contains 1).
inline SearchResult solve_S(const RatioInstance& inst, const SearchBudget& budget = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const int64_t p = inst.modulus.p();
    detail::BudgetClock clock(budget);

    if (inst.X == inst.modulus.half()) {
        // the norm never exceeds (p-1)/2, so everything qualifies
        return SearchResult{p - 1, CandidateSet(inst.modulus, detail::all_residues(p)),
                            true, 0, detail::elapsed_ms(t0)};
    }

    const ConnectionSet D = build_connection_set(inst);
    std::vector<int64_t> vertices;
    vertices.reserve(static_cast<size_t>(D.size()) - 1);
    for (int64_t d : D.members())
        if (d != 1) vertices.push_back(d);
    const size_t V = vertices.size();

    // warm start; rescale so the set contains 1, then drop the 1
    CandidateSet warm = greedy_lower_bound(inst, 0x5eed);
    if (!warm.empty() && warm.elements().front() != 1)
        warm = scaled(warm, detail::pow_mod(warm.elements().front(), p - 2, p));

    if (V > detail::kMatrixCap) {
        // too many admissible ratios for matrix adjacency; report the warm
        // greedy set without claiming exactness
        return SearchResult{warm.size(), warm, false, clock.nodes, detail::elapsed_ms(t0)};
    }

    std::vector<int64_t> inv(V);
    for (size_t i = 0; i < V; ++i)
        inv[i] = detail::pow_mod(vertices[i], p - 2, p);
    std::vector<detail::Bits> adj(V, detail::Bits(V));
    for (size_t i = 0; i < V; ++i)
        for (size_t j = i + 1; j < V; ++j)
            if (D.contains(detail::mul_mod(vertices[i], inv[j], p))) {
                adj[i].set(j);
                adj[j].set(i);
            }

    std::vector<int> warm_idx;
    for (int64_t e : warm.elements()) {
        if (e == 1) continue;
        const auto it = std::lower_bound(vertices.begin(), vertices.end(), e);
        warm_idx.push_back(static_cast<int>(it - vertices.begin()));
    }

    detail::CliqueSearch search(adj, V, clock);
    std::vector<int> best = search.maximize(std::move(warm_idx));
    const int omega = static_cast<int>(best.size());
    bool exact = !clock.exhausted;
    if (exact && omega > 0) {
        if (auto lex = detail::lex_least_clique(adj, V, omega, clock); !lex.empty())
            best = std::move(lex);
        else
            exact = false;
    }

    std::vector<int64_t> elems{1};
    for (int v : best) elems.push_back(vertices[static_cast<size_t>(v)]);
    return SearchResult{static_cast<int64_t>(best.size()) + 1,
                        CandidateSet(inst.modulus, std::move(elems)), exact,
                        clock.nodes, detail::elapsed_ms(t0)};
}

/// Exact R_n(X). n = 2 runs the same clique machinery on the graph with
/// edges {s,t : |st|_p <= X}; n >= 3 runs the product-subset DFS. The
/// vacuous floor value n-1 is always attained.
inline SearchResult solve_R(const ProductInstance& inst, const SearchBudget& budget = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const int64_t p = inst.modulus.p();
    const int n = inst.n;
    detail::BudgetClock clock(budget);

    if (n > p - 1 || inst.X == inst.modulus.half()) {
        // no admissible n-tuple exists, or the norm bound is vacuous
        return SearchResult{p - 1, CandidateSet(inst.modulus, detail::all_residues(p)),
                            true, 0, detail::elapsed_ms(t0)};
    }

    // incumbent: the vacuous floor {1..n-1}, improved by a greedy pass
    std::vector<int64_t> floor_set;
    for (int64_t v = 1; v < n; ++v) floor_set.push_back(v);
    CandidateSet warm = greedy_lower_bound(inst, 0x5eed);
    std::vector<int64_t> incumbent =
        warm.size() >= static_cast<int64_t>(floor_set.size()) ? warm.elements() : floor_set;

    if (n == 2 && static_cast<size_t>(p - 1) <= detail::kMatrixCap) {
        const size_t V = static_cast<size_t>(p - 1); // vertex i <-> residue i+1
        std::vector<detail::Bits> adj(V, detail::Bits(V));
        for (size_t i = 0; i < V; ++i)
            for (size_t j = i + 1; j < V; ++j)
                if (detail::balanced_of(
                        detail::mul_mod(static_cast<int64_t>(i) + 1,
                                        static_cast<int64_t>(j) + 1, p),
                        p) <= inst.X) {
                    adj[i].set(j);
                    adj[j].set(i);
                }
        std::vector<int> warm_idx;
        for (int64_t e : incumbent) warm_idx.push_back(static_cast<int>(e - 1));
        detail::CliqueSearch search(adj, V, clock);
        std::vector<int> best = search.maximize(std::move(warm_idx));
        const int omega = static_cast<int>(best.size());
        bool exact = !clock.exhausted;
        if (exact && omega > 0) {
            if (auto lex = detail::lex_least_clique(adj, V, omega, clock); !lex.empty())
                best = std::move(lex);
            else
                exact = false;
        }
        std::vector<int64_t> elems;
        for (int v : best) elems.push_back(v + 1);
        return SearchResult{static_cast<int64_t>(best.size()),
                            CandidateSet(inst.modulus, std::move(elems)), exact,
                            clock.nodes, detail::elapsed_ms(t0)};
    }

    // at huge p only the small-balanced-norm band is materialized, so the
    // search is a lower-bound pass and never claims exactness
    const bool full_pool = p - 1 <= detail::kPoolCap;
    std::vector<int64_t> pool;
    if (full_pool) {
        pool = detail::all_residues(p);
    } else {
        for (int64_t v = 1; 2 * v <= detail::kPoolCap; ++v) {
            pool.push_back(v);
            pool.push_back(p - v);
        }
        std::sort(pool.begin(), pool.end());
    }
    detail::ProductSearch search(pool, p, n, inst.X, clock);
    std::vector<int64_t> best = search.maximize(std::move(incumbent));
    const int64_t omega = static_cast<int64_t>(best.size());
    bool exact = full_pool && !clock.exhausted;
    if (exact) {
        if (auto lex = detail::lex_least_product_set(pool, p, n, inst.X, omega, clock);
            !lex.empty())
            best = std::move(lex);
        else
            exact = false;
    }
    return SearchResult{omega, CandidateSet(inst.modulus, std::move(best)), exact,
                        clock.nodes, detail::elapsed_ms(t0)};
}

namespace detail {

constexpr int64_t kOracleMaxP = 23;

template <typename Instance, typename Predicate>
SearchResult oracle_scan(const Instance& inst, Predicate&& valid) {
    const auto t0 = std::chrono::steady_clock::now();
    const int64_t p = inst.modulus.p();
    if (p > kOracleMaxP)
        throw std::domain_error("oracle_solve enumerates 2^(p-1) subsets; p <= 23 only");
    const int m = static_cast<int>(p - 1);
    int64_t tested = 0;
    // valid sets are closed under taking subsets, so scan sizes from the
    // top; the first hit at a size is the lexicographically least witness
    for (int k = m; k >= 1; --k) {
        std::vector<int> idx(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
        while (true) {
            std::vector<int64_t> elems;
            elems.reserve(static_cast<size_t>(k));
            for (int i : idx) elems.push_back(i + 1);
            CandidateSet A(inst.modulus, std::move(elems));
            ++tested;
            if (valid(A))
                return SearchResult{k, A, true, tested, elapsed_ms(t0)};
            int pos = k - 1;
            while (pos >= 0 && idx[static_cast<size_t>(pos)] == m - k + pos) --pos;
            if (pos < 0) break;
            ++idx[static_cast<size_t>(pos)];
            for (int i = pos + 1; i < k; ++i)
                idx[static_cast<size_t>(i)] = idx[static_cast<size_t>(i - 1)] + 1;
        }
    }
    return SearchResult{0, CandidateSet(inst.modulus, {}), true, tested, elapsed_ms(t0)};
}

} // namespace detail

/// Brute-force oracle over all subsets of F_p*, independent of the
/// branch-and-bound path; refuses p > 23.
inline SearchResult oracle_solve(const RatioInstance& inst) {
    return detail::oracle_scan(inst, [&](const CandidateSet& A) {
        return satisfies_ratio_property(A, inst);
    });
}

inline SearchResult oracle_solve(const ProductInstance& inst) {
    return detail::oracle_scan(inst, [&](const CandidateSet& A) {
        return satisfies_product_property(A, inst);
    });
}

} // namespace smallprod
