#pragma once

// Upper-bound envelopes for the two extremal quantities with an explicit
// constant C and explicit epsilon substituted, empirical fitting of C
// against exact data, and a descriptive report on the conjectured
// X^epsilon / X^(1/n+epsilon) growth.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "smallprod/modp.hpp"

namespace smallprod {

struct EnvelopeParams {
    double C = 1.0;
    double epsilon = 0.1;

    void validate() const {
        if (!(C > 0)) throw std::domain_error("envelope constant must be positive");
        if (!(epsilon > 0) || epsilon > 1)
            throw std::domain_error("epsilon must lie in (0, 1]");
    }
};

/// Envelope evaluation plus a flag for the theorem's X-range hypothesis.
/// Out-of-range X still yields a value so sweeps can chart it.
struct EnvelopeValue {
    double value;
    bool in_range;
};

/// C * min(X^eps + X^(2+eps)/p, sqrt(p)); hypothesis X <= p/12.
inline EnvelopeValue theorem1_envelope(int64_t p, int64_t X, const EnvelopeParams& params) {
    params.validate();
    if (p < 3 || X < 1) throw std::domain_error("need p >= 3 and X >= 1");
    const double xd = static_cast<double>(X);
    const double pd = static_cast<double>(p);
    const double first = std::pow(xd, params.epsilon) + std::pow(xd, 2 + params.epsilon) / pd;
    const double value = params.C * std::min(first, std::sqrt(pd));
    return EnvelopeValue{value, 12 * X <= p};
}

/// C * min of the three displayed terms; the inner minimum over
/// k in {2,...,n-2} is empty (dropped) for n <= 3. Hypothesis X <= 0.24 p.
inline EnvelopeValue theorem2_envelope(int64_t p, int n, int64_t X,
                                       const EnvelopeParams& params) {
    params.validate();
    if (p < 3 || X < 1) throw std::domain_error("need p >= 3 and X >= 1");
    if (n < 2) throw std::domain_error("need n >= 2");
    const double xd = static_cast<double>(X);
    const double pd = static_cast<double>(p);
    const double eps = params.epsilon;
    const double nd = static_cast<double>(n);

    const double first = std::pow(xd, 1.0 / nd + eps) +
                         std::pow(xd, nd / (nd - 1.0) + eps) / std::pow(pd, 1.0 / (nd - 1.0));
    double middle = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= n - 2; ++k) {
        const double kd = static_cast<double>(k);
        middle = std::min(middle, std::pow(xd, 1.0 / kd + eps) +
                                      std::pow(xd, 1.0 + 1.0 / kd + eps) /
                                          std::pow(pd, 1.0 / kd));
    }
    const double third = std::pow(pd, 1.0 / nd + eps);
    const double value = params.C * std::min({first, middle, third});
    return EnvelopeValue{value, 100 * X <= 24 * p};
}

/// One exact experiment outcome; n == 0 marks the ratio family.
struct ExactRecord {
    int64_t p;
    int n;
    int64_t X;
    int64_t value;
};

inline EnvelopeValue envelope_for(const ExactRecord& r, const EnvelopeParams& params) {
    return r.n == 0 ? theorem1_envelope(r.p, r.X, params)
                    : theorem2_envelope(r.p, r.n, r.X, params);
}

/// Smallest C with value <= C * envelope(C=1) across all records, i.e. the
/// max of value / envelope. Records must lie within the theorem ranges.
inline double fit_constant(const std::vector<ExactRecord>& records, double epsilon) {
    if (records.empty()) throw std::domain_error("cannot fit a constant to no records");
    EnvelopeParams params{1.0, epsilon};
    double c = 0;
    for (const auto& r : records) {
        const auto env = envelope_for(r, params);
        if (!env.in_range)
            throw std::domain_error("record outside the theorem's X range");
        c = std::max(c, static_cast<double>(r.value) / env.value);
    }
    return c;
}

/// One row of an envelope comparison table.
struct BoundRow {
    int64_t p;
    int n; // 0 for the ratio family
    int64_t X;
    int64_t value;
    bool exact;
    int64_t construction_size;
    double envelope;
    bool in_range;
    double ratio; // value / envelope, meaningful only when exact
};

struct ConjectureRow {
    double epsilon;
    char kind; // 'S' or 'R'
    int n;
    double max_ratio;
    int64_t at_p;
    int64_t at_X;
};

/// For each epsilon, the largest value / X^eps (ratio family) and
/// value / X^(1/n+eps) (product family) over records with X <= (1/2 - t)p.
/// Purely descriptive; no asymptotic conclusion is drawn.
inline std::vector<ConjectureRow> conjecture_report(const std::vector<ExactRecord>& records,
                                                    const std::vector<double>& epsilon_grid,
                                                    double t = 0.05) {
    if (t < 0 || t >= 0.5) throw std::domain_error("t must lie in [0, 1/2)");
    std::vector<ConjectureRow> rows;
    for (double eps : epsilon_grid) {
        ConjectureRow s{eps, 'S', 0, 0.0, 0, 0};
        std::vector<ConjectureRow> r_rows;
        for (const auto& rec : records) {
            if (static_cast<double>(rec.X) > (0.5 - t) * static_cast<double>(rec.p)) continue;
            if (rec.n == 0) {
                const double ratio =
                    static_cast<double>(rec.value) / std::pow(static_cast<double>(rec.X), eps);
                if (ratio > s.max_ratio) s = ConjectureRow{eps, 'S', 0, ratio, rec.p, rec.X};
            } else {
                const double ratio =
                    static_cast<double>(rec.value) /
                    std::pow(static_cast<double>(rec.X), 1.0 / rec.n + eps);
                auto it = std::find_if(r_rows.begin(), r_rows.end(),
                                       [&](const ConjectureRow& c) { return c.n == rec.n; });
                if (it == r_rows.end()) {
                    r_rows.push_back(ConjectureRow{eps, 'R', rec.n, ratio, rec.p, rec.X});
                } else if (ratio > it->max_ratio) {
                    *it = ConjectureRow{eps, 'R', rec.n, ratio, rec.p, rec.X};
                }
            }
        }
        if (s.at_p != 0) rows.push_back(s);
        for (const auto& r : r_rows) rows.push_back(r);
    }
    return rows;
}

} // namespace smallprod
