#pragma once

// Grid sweeps over (p, n, X) cells on a bounded worker pool. Cells are
// generated in sorted (p, n, X) order and written back into fixed slots,
// so output is identical regardless of scheduling. elapsed_millis is
// zeroed unless timings are requested, keeping sweep output byte-stable
// across reruns of the same config and seed.

#include <atomic>
#include <thread>

#include "smallprod/bounds.hpp"
#include "smallprod/record.hpp"
#include "smallprod/search.hpp"

namespace smallprod {

struct SweepConfig {
    std::vector<int64_t> primes;
    int64_t x_min = 1;
    int64_t x_max = 0;   // 0: sweep up to (p-1)/2 per prime
    double x_frac = 0.0; // > 0: sweep up to floor(x_frac * p) per prime
    bool run_ratio = true;
    bool run_product = true;
    std::vector<int> tuple_lengths = {2}; // n values for the product family
    SearchBudget budget{};
    double epsilon = 0.1;
    uint64_t seed = 0;
    int workers = 1;
    bool timings = false;
};

/// Solves one cell and fills a full record; failures land in `status`
/// instead of propagating.
inline RunRecord solve_cell(char kind, int64_t p, int n, int64_t X,
                            const SearchBudget& budget, double epsilon,
                            uint64_t seed, bool timings = true) {
    RunRecord rec;
    rec.p = p;
    rec.n = kind == 'S' ? 0 : n;
    rec.X = X;
    rec.kind = kind;
    rec.seed = seed;
    try {
        PrimeModulus mod(p);
        EnvelopeParams params{1.0, epsilon};
        if (kind == 'S') {
            const RatioInstance inst(mod, X);
            const auto result = solve_S(inst, budget);
            rec.value = result.value;
            rec.exact = result.exact;
            rec.witness = join_witness(result.witness.elements());
            rec.nodes = result.nodes;
            rec.elapsed_millis = timings ? result.elapsed_millis : 0;
            rec.construction_size = construct_geometric(mod, X).size();
            rec.envelope = theorem1_envelope(p, X, params).value;
        } else {
            const ProductInstance inst(mod, n, X);
            const auto result = solve_R(inst, budget);
            rec.value = result.value;
            rec.exact = result.exact;
            rec.witness = join_witness(result.witness.elements());
            rec.nodes = result.nodes;
            rec.elapsed_millis = timings ? result.elapsed_millis : 0;
            rec.construction_size = construct_interval(mod, n, X).size();
            rec.envelope = theorem2_envelope(p, n, X, params).value;
        }
        rec.status = "ok";
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == ',' || c == '\n') c = ' ';
        rec.status = "error: " + msg;
    }
    return rec;
}

namespace detail {

struct SweepCell {
    char kind;
    int64_t p;
    int n;
    int64_t X;
};

inline std::vector<SweepCell> sweep_cells(const SweepConfig& cfg) {
    std::vector<SweepCell> cells;
    auto primes = cfg.primes;
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (int64_t p : primes) {
        const int64_t half = (p - 1) / 2;
        int64_t hi = cfg.x_max > 0 ? std::min(cfg.x_max, half) : half;
        if (cfg.x_frac > 0)
            hi = std::min<int64_t>(hi, static_cast<int64_t>(cfg.x_frac * static_cast<double>(p)));
        if (cfg.run_ratio)
            for (int64_t X = cfg.x_min; X <= hi; ++X) cells.push_back({'S', p, 0, X});
        if (cfg.run_product) {
            auto ns = cfg.tuple_lengths;
            std::sort(ns.begin(), ns.end());
            for (int n : ns)
                for (int64_t X = cfg.x_min; X <= hi; ++X) cells.push_back({'R', p, n, X});
        }
    }
    return cells;
}

} // namespace detail

/// Runs every cell of the grid; rows come back sorted by (p, n, X) with the
/// ratio family first, independent of worker scheduling.
inline std::vector<RunRecord> run_sweep(const SweepConfig& cfg) {
    if (cfg.primes.empty()) throw std::domain_error("sweep needs at least one prime");
    if (cfg.x_min < 1) throw std::domain_error("sweep needs X >= 1");
    for (int64_t p : cfg.primes)
        PrimeModulus guard(p); // validate up front
    const auto cells = detail::sweep_cells(cfg);
    std::vector<RunRecord> records(cells.size());

    const int workers = std::max(1, cfg.workers);
    std::atomic<size_t> cursor{0};
    auto work = [&] {
        while (true) {
            const size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) return;
            const auto& c = cells[i];
            records[i] = solve_cell(c.kind, c.p, c.n, c.X, cfg.budget, cfg.epsilon,
                                    cfg.seed, cfg.timings);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return records;
}

/// Exact in-range rows of a sweep, ready for constant fitting.
inline std::vector<ExactRecord> exact_records(const std::vector<RunRecord>& records,
                                              bool in_theorem_range_only = true) {
    std::vector<ExactRecord> out;
    for (const auto& r : records) {
        if (!r.exact || r.status != "ok") continue;
        if (in_theorem_range_only) {
            if (r.kind == 'S' && 12 * r.X > r.p) continue;
            if (r.kind == 'R' && 100 * r.X > 24 * r.p) continue;
        }
        out.push_back(ExactRecord{r.p, r.kind == 'S' ? 0 : r.n, r.X, r.value});
    }
    return out;
}

} // namespace smallprod
