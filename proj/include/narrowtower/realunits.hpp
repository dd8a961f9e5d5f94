#pragma once

// Fundamental units of real quadratic orders via the continued fraction of
// w_D = (b0 + sqrt(D))/2, b0 = D mod 2, and the unit-norm invariant
//
//     delta(eps) = squarefree kernel of N(1 + eps) = sfk(Tr(eps) + 2)
//
// defined whenever N(eps) = +1. All primes dividing delta(eps) ramify in
// Q(sqrt(D)), so after stripping primes p | 2D the cofactor must be a
// perfect square; anything else is flagged as an internal inconsistency.
//
// The genus-character table provides the independent cross-check: delta(eps)
// must be one of the positive divisors del | d with chi(del) = +1 for every
// genus character chi, enumerated here directly from Kronecker symbols.

#include "narrowtower/errors.hpp"
#include "narrowtower/intarith.hpp"
#include "narrowtower/quadforms.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace narrowtower {

/// eps = (x + y sqrt(D)) / 2 with x^2 - D y^2 = 4 * norm, norm = +-1.
struct FundamentalUnit {
    mpz_class x;
    mpz_class y;
    int norm = 0;
    int cf_steps = 0; ///< index (1-based) of the convergent that produced eps
};

namespace detail {

/// Exact floor((P + sqrt(D)) / Q) for nonsquare D > 0, Q != 0.
inline i64 floor_quadratic(i64 P, i64 Q, i64 D, i64 s /* isqrt(D) */) {
    // sqrt(D) lies strictly between s and s+1, so for Q > 0 the floor equals
    // floor((P + s) / Q); for Q < 0 start from floor((P + s + 1) / Q) and
    // correct by the exact inequality  f <= (P + sqrt(D))/Q  <  f + 1.
    auto floor_div = [](i64 n, i64 d) -> i64 {
        i64 q = n / d, r = n % d;
        return (r != 0 && ((r < 0) != (d < 0))) ? q - 1 : q;
    };
    // candidate window: the true value is within 1 of either estimate
    i64 f = (Q > 0) ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
    auto le = [&](i64 m) {
        // m <= (P + sqrt(D)) / Q ?
        // Q > 0:  mQ - P <= sqrt(D);  Q < 0:  mQ - P >= sqrt(D)
        i128 t = i128{m} * Q - P;
        if (Q > 0) return t <= 0 || t * t <= i128{D};
        return t >= 0 && t * t >= i128{D}; // equality impossible: D nonsquare
    };
    while (!le(f)) --f;
    while (le(f + 1)) ++f;
    return f;
}

} // namespace detail

/// Fundamental unit of the maximal order of Q(sqrt(D)), D a fundamental
/// discriminant > 5 or = 5. Scans the continued-fraction convergents of
/// w_D = (b0 + sqrt(D))/2 for the first solution of x^2 - D y^2 = +-4.
inline FundamentalUnit fundamental_unit(i64 D, long max_steps = 200000) {
    if (D <= 0 || !is_fundamental_discriminant(D))
        throw domain_error("fundamental_unit: need a positive fundamental discriminant");
    i64 s = isqrt_i64(D);
    if (s * s == D) throw domain_error("fundamental_unit: square discriminant");
    i64 b0 = (D % 2 + 2) % 2;
    i64 P = b0, Q = 2;
    mpz_class A_prev2 = 0, A_prev1 = 1; // numerators A_{-2} = 0, A_{-1} = 1
    mpz_class B_prev2 = 1, B_prev1 = 0; // denominators
    std::map<std::pair<i64, i64>, int> seen; // (P, Q) -> first step index
    long hard_stop = -1; // set at the first period closure: two more periods allowed
    mpz_class Dz = static_cast<long>(D);
    for (long i = 0; i < max_steps; ++i) {
        auto state = std::pair<i64, i64>(P, Q);
        auto [it, fresh] = seen.emplace(state, static_cast<int>(i));
        if (!fresh && hard_stop < 0) {
            long period = i - it->second;
            hard_stop = i + 2 * period + 2;
        }
        if (hard_stop >= 0 && i > hard_stop)
            throw inconsistency_error(
                "fundamental_unit: no unit found within two periods for D = " + std::to_string(D));
        i64 a = detail::floor_quadratic(P, Q, D, s);
        mpz_class A = mpz_class(static_cast<long>(a)) * A_prev1 + A_prev2;
        mpz_class B = mpz_class(static_cast<long>(a)) * B_prev1 + B_prev2;
        // candidate eps = A - B * conj(w) = (x + y sqrt(D)) / 2
        mpz_class x = 2 * A - static_cast<long>(b0) * B;
        mpz_class y = B;
        mpz_class n4 = x * x - Dz * y * y;
        if (n4 == 4 || n4 == -4) {
            FundamentalUnit u;
            u.x = x;
            u.y = y;
            u.norm = (n4 == 4) ? 1 : -1;
            u.cf_steps = static_cast<int>(i) + 1;
            if (u.x <= 0 || u.y <= 0)
                throw inconsistency_error("fundamental_unit: nonpositive coordinates");
            return u;
        }
        // advance the PQa recurrence
        i64 Pn = a * Q - P;
        if (Q == 0 || (D - Pn * Pn) % Q != 0)
            throw inconsistency_error("fundamental_unit: PQa recurrence left the integers");
        i64 Qn = (D - Pn * Pn) / Q;
        if (Qn == 0)
            throw inconsistency_error("fundamental_unit: degenerate Q in PQa recurrence");
        P = Pn;
        Q = Qn;
        A_prev2 = A_prev1;
        A_prev1 = A;
        B_prev2 = B_prev1;
        B_prev1 = B;
    }
    throw resource_error("fundamental_unit: continued fraction budget exhausted for D = " +
                         std::to_string(D));
}

/// delta(eps) for the fundamental unit of discriminant D.
/// norm_is_minus_one == true means delta is undefined (N eps = -1); otherwise
/// delta is the squarefree kernel of N(1 + eps) = x + 2, a positive divisor
/// of 2D supported on ramified primes.
struct UnitDelta {
    bool norm_is_minus_one = false;
    i64 delta = 0;
    FundamentalUnit unit;
};

inline UnitDelta delta_of_unit(i64 D, long max_steps = 200000) {
    UnitDelta out;
    out.unit = fundamental_unit(D, max_steps);
    if (out.unit.norm == -1) {
        out.norm_is_minus_one = true;
        return out;
    }
    // N(1 + eps) = 2 + Tr(eps) = x + 2 up to the square of a rational;
    // strip ramified primes, the rest must be a perfect square.
    mpz_class M = out.unit.x + 2;
    if (M <= 0) throw inconsistency_error("delta_of_unit: nonpositive norm value");
    i64 delta = 1;
    for (const auto& [pu, e] : factorize(2 * D)) {
        (void)e;
        unsigned long p = static_cast<unsigned long>(pu);
        int v = 0;
        while (mpz_divisible_ui_p(M.get_mpz_t(), p)) {
            mpz_divexact_ui(M.get_mpz_t(), M.get_mpz_t(), p);
            ++v;
        }
        if (v % 2 == 1) delta *= static_cast<i64>(pu);
    }
    if (mpz_perfect_square_p(M.get_mpz_t()) == 0)
        throw inconsistency_error(
            "delta_of_unit: N(1 + eps) has a non-square unramified cofactor for D = " +
            std::to_string(D));
    if (delta <= 0 || (2 * D) % delta != 0)
        throw inconsistency_error("delta_of_unit: delta is not a divisor of 2D");
    out.delta = delta;
    return out;
}

// ---------------------------------------------------------------------------
// genus characters
// ---------------------------------------------------------------------------

/// chi[i][j] = chi_{d_i}(P_j) for the ramified primes P_j of the field with
/// discriminant prod d_i: the Kronecker symbol (d_i / p_j) for j != i, and
/// ((d/d_i) / p_i) on the diagonal.
inline std::vector<std::vector<int>>
genus_character_table(const std::vector<PrimeDiscriminant>& parts) {
    size_t m = parts.size();
    if (m == 0) throw domain_error("genus_character_table: no parts");
    i64 d = 1;
    for (const auto& pd : parts) d *= pd.value;
    std::vector<std::vector<int>> chi(m, std::vector<int>(m, 0));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j) {
            i64 arg = (i == j) ? d / parts[i].value : parts[i].value;
            chi[i][j] = kronecker(arg, parts[j].prime);
            if (chi[i][j] == 0)
                throw inconsistency_error("genus character vanished; parts not coprime?");
        }
    }
    return chi;
}

/// All positive divisors del = prod_{j in T} p_j (T nonempty, the full
/// product included) with chi_i(del) = +1 for every genus character chi_i.
/// delta(eps) of the field must lie in this list whenever N(eps) = +1.
inline std::vector<i64> delta_via_genus(const std::vector<PrimeDiscriminant>& parts) {
    auto chi = genus_character_table(parts);
    size_t m = parts.size();
    std::vector<i64> out;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        bool pass = true;
        for (size_t i = 0; i < m && pass; ++i) {
            int prod = 1;
            for (size_t j = 0; j < m; ++j)
                if (mask & (1u << j)) prod *= chi[i][j];
            if (prod != 1) pass = false;
        }
        if (!pass) continue;
        i64 del = 1;
        for (size_t j = 0; j < m; ++j)
            if (mask & (1u << j)) del *= parts[j].prime;
        out.push_back(del);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace narrowtower
