#pragma once

// Exact integer arithmetic needed for discriminant bookkeeping:
// Kronecker symbols, deterministic primality, factorization into prime
// discriminants, fundamentality tests, squarefree kernels.
//
// Everything here is exact; no floating point enters any decision.

#include "narrowtower/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace narrowtower {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------------
// modular helpers
// ---------------------------------------------------------------------------

inline u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

inline u64 powmod_u64(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

// ---------------------------------------------------------------------------
// primality (deterministic Miller-Rabin for 64-bit inputs)
// ---------------------------------------------------------------------------

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    // This base set is a proven deterministic witness set for n < 3.3e24.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// factorization (Pollard rho; inputs here are small, but stay general)
// ---------------------------------------------------------------------------

namespace detail {

inline u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    // Floyd cycle detection with a gcd per step. Batching gcds is the usual
    // speedup, but on very small n (prime squares in particular) a batch can
    // swallow the whole cycle and every flushed gcd degenerates to n; the
    // unbatched form cannot: x != y gives 0 < |x - y| < n, so gcd < n.
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2;
        while (true) {
            x = (mulmod_u64(x, x, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            if (x == y) break; // cycle closed without a factor: new polynomial
            u64 d = std::gcd(x > y ? x - y : y - x, n);
            if (d != 1) return d;
        }
    }
}

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

inline void factor_into(u64 n, std::map<u64, int>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) { ++out[n]; return; }
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
        if (n % p == 0) {
            while (n % p == 0) { ++out[p]; n /= p; }
            factor_into(n, out);
            return;
        }
    }
    // perfect squares first: rho is at its weakest on p^2
    u64 s = isqrt_u64(n);
    if (s * s == n) {
        std::map<u64, int> half;
        factor_into(s, half);
        for (const auto& [p, e] : half) out[p] += 2 * e;
        return;
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

/// Prime factorization of |n| as prime -> exponent. n must be nonzero.
inline std::map<u64, int> factorize(i64 n) {
    if (n == 0) throw domain_error("factorize: argument must be nonzero");
    std::map<u64, int> out;
    detail::factor_into(static_cast<u64>(n < 0 ? -n : n), out);
    return out;
}

/// Squarefree kernel of n (product of primes with odd multiplicity),
/// carrying the sign of n.
inline i64 squarefree_kernel(i64 n) {
    if (n == 0) throw domain_error("squarefree_kernel: argument must be nonzero");
    i64 sign = n < 0 ? -1 : 1;
    i64 kernel = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e & 1) kernel *= static_cast<i64>(p);
    }
    return sign * kernel;
}

// ---------------------------------------------------------------------------
// Kronecker symbol
// ---------------------------------------------------------------------------

/// Kronecker symbol (a/n), the full extension of the Jacobi symbol to all
/// integers n. Conventions: (a/0) = 1 if a = +-1 else 0; (a/-1) = sign
/// factor; (a/2) = 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    // strip factors of 2 from n using (a/2)
    int v2 = 0;
    while ((n & 1) == 0) { n >>= 1; ++v2; }
    if (v2 & 1) {
        i64 am8 = ((a % 8) + 8) % 8;
        if (am8 == 3 || am8 == 5) result = -result;
        // am8 even would have been caught by the both-even test above
    }
    a %= n;
    if (a < 0) a += n;
    // now the standard Jacobi loop on odd n > 0
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            i64 nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        std::swap(a, n);
        if ((a % 4) == 3 && (n % 4) == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

// ---------------------------------------------------------------------------
// prime discriminants and fundamental discriminants
// ---------------------------------------------------------------------------

/// A prime discriminant: one of +8, -8, -4, +p (p = 1 mod 4), -p (p = 3 mod 4)
/// for an odd prime p. Every fundamental discriminant is the product of
/// pairwise coprime prime discriminants, uniquely up to order.
struct PrimeDiscriminant {
    i64 value = 0; ///< the signed discriminant (+8, -8, -4, +-p)
    i64 prime = 0; ///< the underlying rational prime (2 for the even ones)

    friend bool operator==(const PrimeDiscriminant&, const PrimeDiscriminant&) = default;
    friend auto operator<=>(const PrimeDiscriminant&, const PrimeDiscriminant&) = default;
};

/// True iff v is a prime discriminant.
inline bool is_prime_discriminant(i64 v) {
    if (v == -4 || v == 8 || v == -8) return true;
    if (v > 0) return (v % 4) == 1 && is_prime_u64(static_cast<u64>(v));
    if (v < 0) return ((-v) % 4) == 3 && is_prime_u64(static_cast<u64>(-v));
    return false;
}

inline PrimeDiscriminant make_prime_discriminant(i64 v) {
    if (!is_prime_discriminant(v))
        throw domain_error("not a prime discriminant: " + std::to_string(v));
    return PrimeDiscriminant{v, (v == -4 || v == 8 || v == -8) ? 2 : (v < 0 ? -v : v)};
}

/// True iff D is a fundamental discriminant (of a quadratic field; D != 1).
inline bool is_fundamental_discriminant(i64 D) {
    if (D == 0 || D == 1) return false;
    auto squarefree = [](i64 n) {
        for (const auto& [p, e] : factorize(n))
            if (e > 1) return false;
        return true;
    };
    i64 m = D % 4;
    if (m < 0) m += 4;
    if (m == 1) return squarefree(D);
    if (m == 0) {
        i64 q = D / 4;
        i64 qm = q % 4;
        if (qm < 0) qm += 4;
        return (qm == 2 || qm == 3) && squarefree(q);
    }
    return false;
}

/// Factor a fundamental discriminant into prime discriminants, sorted by
/// underlying prime. Throws domain_error if D is not fundamental.
inline std::vector<PrimeDiscriminant> prime_discriminant_factors(i64 D) {
    if (!is_fundamental_discriminant(D))
        throw domain_error("not a fundamental discriminant: " + std::to_string(D));
    std::vector<PrimeDiscriminant> parts;
    i64 odd = D;
    // Split off the 2-part first: a fundamental discriminant has 2-adic
    // valuation 0, 2 (factor -4) or 3 (factor +-8).
    if (D % 4 == 0) {
        i64 q = D / 4; // = 2,3 mod 4, squarefree
        i64 qm = ((q % 4) + 4) % 4;
        if (qm == 3) {
            parts.push_back(make_prime_discriminant(-4));
            odd = -q; // q = -1 * (odd part with sign flipped): -4 * (-q) = 4q = D
        } else {
            // q = 2 mod 4: 2-part is +-8
            i64 h = q / 2; // odd, squarefree
            i64 hm = ((h % 4) + 4) % 4;
            if (hm == 1) {
                parts.push_back(make_prime_discriminant(8));
                odd = h;
            } else {
                parts.push_back(make_prime_discriminant(-8));
                odd = -h;
            }
        }
    }
    // odd is now an odd fundamental discriminant or +1
    for (const auto& [p, e] : factorize(odd)) {
        (void)e; // squarefree
        i64 pi = static_cast<i64>(p);
        parts.push_back(make_prime_discriminant((pi % 4 == 1) ? pi : -pi));
    }
    std::sort(parts.begin(), parts.end(),
              [](const PrimeDiscriminant& a, const PrimeDiscriminant& b) { return a.prime < b.prime; });
    // validate the reassembly exactly
    i64 product = 1;
    for (const auto& part : parts) product *= part.value;
    if (product != D)
        throw inconsistency_error("prime discriminant factorization failed to reassemble for " +
                                  std::to_string(D));
    return parts;
}

// ---------------------------------------------------------------------------
// four-part factored discriminants (the family under study)
// ---------------------------------------------------------------------------

/// A fundamental discriminant with exactly four prime discriminant factors,
/// of which two or four are negative (so that d > 0 and, the family
/// constraint, d is not a sum of two squares).
struct FactoredDiscriminant {
    std::array<PrimeDiscriminant, 4> part;
    i64 value = 0;

    const PrimeDiscriminant& operator[](int i) const { return part.at(static_cast<size_t>(i)); }
};

/// Build a FactoredDiscriminant from four prime discriminant values in the
/// given order. Validates pairwise coprimality and the sign pattern.
inline FactoredDiscriminant make_factored_discriminant(const std::array<i64, 4>& values) {
    FactoredDiscriminant fd;
    int negatives = 0;
    fd.value = 1;
    for (int i = 0; i < 4; ++i) {
        fd.part[static_cast<size_t>(i)] = make_prime_discriminant(values[static_cast<size_t>(i)]);
        if (values[static_cast<size_t>(i)] < 0) ++negatives;
        fd.value *= values[static_cast<size_t>(i)];
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (fd.part[static_cast<size_t>(i)].prime == fd.part[static_cast<size_t>(j)].prime)
                throw domain_error("prime discriminant factors must have distinct primes");
    if (negatives != 2 && negatives != 4)
        throw domain_error("need 2 or 4 negative prime discriminants (field must be real with "
                           "discriminant not a sum of two squares); got " +
                           std::to_string(negatives));
    if (!is_fundamental_discriminant(fd.value))
        throw inconsistency_error("product of coprime prime discriminants must be fundamental");
    return fd;
}

/// Factor D and build the four-part structure (order: sorted by prime).
inline FactoredDiscriminant make_factored_discriminant(i64 D) {
    auto parts = prime_discriminant_factors(D);
    if (parts.size() != 4)
        throw domain_error("discriminant " + std::to_string(D) + " has " +
                           std::to_string(parts.size()) + " prime discriminant factors, need 4");
    return make_factored_discriminant(
        std::array<i64, 4>{parts[0].value, parts[1].value, parts[2].value, parts[3].value});
}

/// True iff n is a sum of two integer squares (n > 0): every prime = 3 mod 4
/// divides n to an even power.
inline bool is_sum_of_two_squares(i64 n) {
    if (n <= 0) return false;
    for (const auto& [p, e] : factorize(n))
        if ((p % 4) == 3 && (e & 1)) return false;
    return true;
}

} // namespace narrowtower
