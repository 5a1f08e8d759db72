#pragma once

// Exact arithmetic over F_p* for odd primes p < 2^31: canonical residues,
// the balanced norm |a|_p = min_k |a + kp|, modular inverses, the ordered
// divisor-counting function tau_n, and the root of unity e_p(z).
//
// Residues are always stored with the canonical representative in [0, p-1];
// balanced values are computed on demand. All products of canonical values
// fit in 64 bits since p < 2^31.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace smallprod {

using std::int64_t;

namespace detail {

inline int64_t mul_mod(int64_t a, int64_t b, int64_t p) {
    // a, b canonical and p < 2^31, so a*b < 2^62
    return a * b % p;
}

inline int64_t pow_mod(int64_t base, int64_t exp, int64_t p) {
    int64_t acc = 1 % p;
    base %= p;
    while (exp > 0) {
        if (exp & 1) acc = mul_mod(acc, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    return acc;
}

inline bool strong_probable_prime(int64_t n, int64_t base) {
    if (base % n == 0) return true;
    int64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    int64_t x = pow_mod(base, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

/// Deterministic primality test for 0 <= n < 2^31.
/// Miller-Rabin with bases {2, 3, 5, 7} is exact below 3'215'031'751.
inline bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t q : {2, 3, 5, 7}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    for (int64_t base : {2, 3, 5, 7}) {
        if (!detail::strong_probable_prime(n, base)) return false;
    }
    return true;
}

class PrimeModulus;

/// An element of Z/pZ in canonical form. Operations between residues of
/// different moduli are rejected.
struct Residue {
    int64_t value = 0; // canonical, in [0, p-1]
    int64_t p = 0;

    friend bool operator==(const Residue&, const Residue&) = default;
};

/// A validated odd prime modulus 3 <= p < 2^31 with derived constants.
class PrimeModulus {
public:
    explicit PrimeModulus(int64_t prime) : p_(prime) {
        if (prime < 3 || prime > (int64_t{1} << 31))
            throw std::domain_error("modulus must satisfy 3 <= p <= 2^31");
        if (prime % 2 == 0 || !is_prime(prime))
            throw std::domain_error("modulus must be an odd prime");
        half_ = (prime - 1) / 2;
    }

    int64_t p() const { return p_; }
    int64_t half() const { return half_; } // (p-1)/2

    /// Canonical residue of any integer (negatives allowed).
    Residue residue(int64_t v) const {
        int64_t r = v % p_;
        if (r < 0) r += p_;
        return Residue{r, p_};
    }

    friend bool operator==(const PrimeModulus& a, const PrimeModulus& b) {
        return a.p_ == b.p_;
    }

private:
    int64_t p_;
    int64_t half_;
};

namespace detail {

inline void require_same_modulus(const Residue& a, const Residue& b) {
    if (a.p != b.p)
        throw std::invalid_argument("residues belong to different moduli");
}

} // namespace detail

inline Residue operator*(const Residue& a, const Residue& b) {
    detail::require_same_modulus(a, b);
    return Residue{detail::mul_mod(a.value, b.value, a.p), a.p};
}

/// |a|_p = min(value, p - value); zero iff a == 0.
inline int64_t balanced_abs(const Residue& a) {
    return std::min(a.value, a.p - a.value);
}

/// Signed representative in [-(p-1)/2, (p-1)/2].
inline int64_t balanced_signed(const Residue& a) {
    return a.value <= (a.p - 1) / 2 ? a.value : a.value - a.p;
}

/// Multiplicative inverse; rejects zero.
inline Residue mod_inverse(const Residue& a) {
    if (a.value == 0) throw std::domain_error("zero has no inverse");
    return Residue{detail::pow_mod(a.value, a.p - 2, a.p), a.p};
}

inline Residue operator/(const Residue& a, const Residue& b) {
    detail::require_same_modulus(a, b);
    return a * mod_inverse(b);
}

/// Number of ordered n-tuples of positive integers with product m.
/// Multiplicative in m; tau_1 == 1. Memoized per thread.
inline int64_t tau(int n, int64_t m) {
    if (n < 1) throw std::domain_error("tau requires n >= 1");
    if (m < 1) throw std::domain_error("tau requires m >= 1");
    if (n == 1 || m == 1) return 1;

    thread_local std::map<std::pair<int, int64_t>, int64_t> memo;
    auto key = std::make_pair(n, m);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    int64_t total = 0;
    for (int64_t d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        total += tau(n - 1, m / d);
        if (d != m / d) total += tau(n - 1, d);
    }
    memo.emplace(key, total);
    return total;
}

/// A complex number constrained to the unit circle.
struct UnitComplex {
    double re;
    double im;

    UnitComplex(double real, double imag) : re(real), im(imag) {
        if (std::abs(re * re + im * im - 1.0) > 1e-12)
            throw std::domain_error("UnitComplex is off the unit circle");
    }

    std::complex<double> value() const { return {re, im}; }
};

/// e_p(z) = exp(2*pi*i*z/p), period p in z.
inline UnitComplex e_p(const PrimeModulus& mod, int64_t z) {
    const int64_t r = mod.residue(z).value;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) /
                         static_cast<double>(mod.p());
    return UnitComplex(std::cos(angle), std::sin(angle));
}

inline UnitComplex e_p(const Residue& a) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(a.value) /
                         static_cast<double>(a.p);
    return UnitComplex(std::cos(angle), std::sin(angle));
}

} // namespace smallprod
