// Unit tests for the exact integer arithmetic layer: primality, factoring,
// Kronecker symbols, and the prime-discriminant decomposition that everything
// downstream is built on.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "narrowtower/errors.hpp"
#include "narrowtower/intarith.hpp"

using namespace narrowtower;

TEST_CASE("modular helpers survive 64-bit extremes", "[intarith]") {
    const u64 big = 0xFFFFFFFFFFFFFFC5ull; // largest 64-bit prime
    CHECK(mulmod_u64(big - 1, big - 1, big) == 1);        // (-1)^2 = 1 mod p
    CHECK(powmod_u64(2, big - 1, big) == 1);              // Fermat
    CHECK(powmod_u64(7, 0, big) == 1);
    CHECK(powmod_u64(7, 1, 1) == 0);                      // everything is 0 mod 1
}

TEST_CASE("deterministic Miller-Rabin is exact on 64-bit inputs", "[intarith]") {
    SECTION("small edge cases") {
        CHECK_FALSE(is_prime_u64(0));
        CHECK_FALSE(is_prime_u64(1));
        CHECK(is_prime_u64(2));
        CHECK(is_prime_u64(3));
        CHECK_FALSE(is_prime_u64(4));
        CHECK(is_prime_u64(37));
    }
    SECTION("classic pseudoprimes are rejected") {
        CHECK_FALSE(is_prime_u64(561));         // Carmichael
        CHECK_FALSE(is_prime_u64(3215031751ull)); // strong pseudoprime to 2,3,5,7
        CHECK_FALSE(is_prime_u64(3825123056546413051ull)); // spsp to first 9 primes
    }
    SECTION("large primes are accepted") {
        CHECK(is_prime_u64(0xFFFFFFFFFFFFFFC5ull));
        CHECK(is_prime_u64(1000000007ull));
    }
}

TEST_CASE("factorize returns the full prime factorization", "[intarith]") {
    auto f = factorize(2 * 2 * 3 * 3 * 3 * 6972593);
    REQUIRE(f.size() == 3);
    CHECK(f.at(2) == 2);
    CHECK(f.at(3) == 3);
    CHECK(f.at(6972593) == 1);

    CHECK(factorize(-45) == std::map<u64, int>{{3, 2}, {5, 1}});
    CHECK(factorize(1).empty());
    CHECK_THROWS_AS(factorize(0), domain_error);

    // squares of primes beyond the trial-division range are the worst case
    // for Pollard rho (regression: these used to spin forever)
    CHECK(factorize(361) == std::map<u64, int>{{19, 2}});           // 19^2
    CHECK(factorize(961) == std::map<u64, int>{{31, 2}});           // 31^2
    CHECK(factorize(1009 * 1009) == std::map<u64, int>{{1009, 2}});
    CHECK(factorize(17 * 17 * 19 * 19) == std::map<u64, int>{{17, 2}, {19, 2}});
    CHECK_FALSE(is_fundamental_discriminant(361));

    CHECK(squarefree_kernel(45) == 5);
    CHECK(squarefree_kernel(-45) == -5);
    CHECK(squarefree_kernel(1) == 1);
    CHECK_THROWS_AS(squarefree_kernel(0), domain_error);
}

TEST_CASE("Kronecker symbol matches the Legendre symbol on odd primes", "[intarith]") {
    // For odd prime p and gcd(a, p) = 1 the Kronecker symbol must agree with
    // a^((p-1)/2) mod p, which we can evaluate independently.
    for (u64 p : {3ull, 5ull, 7ull, 11ull, 13ull, 101ull, 7919ull}) {
        for (i64 a = -20; a <= 20; ++a) {
            if (a % static_cast<i64>(p) == 0) {
                CHECK(kronecker(a, static_cast<i64>(p)) == 0);
                continue;
            }
            u64 am = static_cast<u64>(((a % static_cast<i64>(p)) + static_cast<i64>(p)) %
                                      static_cast<i64>(p));
            u64 e = powmod_u64(am, (p - 1) / 2, p);
            int legendre = (e == 1) ? 1 : -1;
            CHECK(kronecker(a, static_cast<i64>(p)) == legendre);
        }
    }
}

TEST_CASE("Kronecker symbol special laws", "[intarith]") {
    // (a/2) is the 2-adic supplement: 0 for even a, +1 for a = ±1 (mod 8),
    // -1 for a = ±3 (mod 8).
    CHECK(kronecker(2, 2) == 0);
    CHECK(kronecker(7, 2) == 1);
    CHECK(kronecker(9, 2) == 1);
    CHECK(kronecker(3, 2) == -1);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(-1, 2) == 1);

    // complete multiplicativity in the top argument
    for (i64 n : {3, 5, 15, 2, 8}) {
        for (i64 a = -6; a <= 6; ++a)
            for (i64 b = -6; b <= 6; ++b)
                CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
    }

    // n = 0 and shared factors of 2
    CHECK(kronecker(1, 0) == 1);
    CHECK(kronecker(-1, 0) == 1);
    CHECK(kronecker(5, 0) == 0);
    CHECK(kronecker(6, 4) == 0);
}

TEST_CASE("prime discriminants are recognized exactly", "[intarith]") {
    // +p for p = 1 (mod 4), -p for p = 3 (mod 4), and the even ones -4, +-8.
    CHECK(is_prime_discriminant(5));
    CHECK(is_prime_discriminant(13));
    CHECK(is_prime_discriminant(89));
    CHECK(is_prime_discriminant(-3));
    CHECK(is_prime_discriminant(-7));
    CHECK(is_prime_discriminant(-23));
    CHECK(is_prime_discriminant(-4));
    CHECK(is_prime_discriminant(8));
    CHECK(is_prime_discriminant(-8));

    CHECK_FALSE(is_prime_discriminant(3));    // 3 = 3 (mod 4): must be -3
    CHECK_FALSE(is_prime_discriminant(-5));   // 5 = 1 (mod 4): must be +5
    CHECK_FALSE(is_prime_discriminant(21));   // composite
    CHECK_FALSE(is_prime_discriminant(4));
    CHECK_FALSE(is_prime_discriminant(-2));
    CHECK_FALSE(is_prime_discriminant(1));
    CHECK_FALSE(is_prime_discriminant(0));

    CHECK(make_prime_discriminant(-8).prime == 2);
    CHECK(make_prime_discriminant(-23).prime == 23);
    CHECK_THROWS_AS(make_prime_discriminant(12), domain_error);
}

TEST_CASE("fundamental discriminants and their factorization", "[intarith]") {
    CHECK(is_fundamental_discriminant(5));
    CHECK(is_fundamental_discriminant(8));
    CHECK(is_fundamental_discriminant(-3));
    CHECK(is_fundamental_discriminant(-4));
    CHECK(is_fundamental_discriminant(60));   // 4 * 15, 15 = 3 (mod 4)
    CHECK_FALSE(is_fundamental_discriminant(45)); // 9 | 45
    CHECK_FALSE(is_fundamental_discriminant(1));
    CHECK_FALSE(is_fundamental_discriminant(0));
    CHECK_FALSE(is_fundamental_discriminant(2));

    // Every fundamental discriminant factors uniquely into coprime prime
    // discriminants, and the product reassembles the input.
    for (i64 D : {i64{4485}, i64{60}, i64{-84}, i64{8}, i64{-840}}) {
        auto parts = prime_discriminant_factors(D);
        i64 prod = 1;
        for (const auto& pd : parts) {
            CHECK(is_prime_discriminant(pd.value));
            prod *= pd.value;
        }
        CHECK(prod == D);
    }
    // 4485 = 5 * 13 * (-3) * (-23)
    auto parts = prime_discriminant_factors(4485);
    REQUIRE(parts.size() == 4);
    std::vector<i64> vals;
    for (const auto& pd : parts) vals.push_back(pd.value);
    CHECK(vals == std::vector<i64>{-3, 5, 13, -23}); // sorted by prime

    CHECK_THROWS_AS(prime_discriminant_factors(45), domain_error);
}

TEST_CASE("the four-part field constructor enforces the family conditions", "[intarith]") {
    auto fd = make_factored_discriminant(4485);
    CHECK(fd.value == 4485);
    CHECK(fd[0].value == -3);
    CHECK(fd[1].value == 5);
    CHECK(fd[2].value == 13);
    CHECK(fd[3].value == -23);

    // explicit ordering is preserved by the array overload
    auto fd2 = make_factored_discriminant(std::array<i64, 4>{5, 89, -19, -7});
    CHECK(fd2.value == 5 * 89 * 19 * 7);
    CHECK(fd2[1].value == 89);

    // wrong number of parts
    CHECK_THROWS_AS(make_factored_discriminant(60), domain_error);    // three parts
    CHECK_THROWS_AS(make_factored_discriminant(23205), domain_error); // 5*13*17*(-3)*(-7): five parts
    // repeated prime (both -4 and 8 sit over 2)
    CHECK_THROWS_AS(make_factored_discriminant(std::array<i64, 4>{-4, 8, 5, -3}), domain_error);
    // a totally positive product has zero negative parts: not in the family
    CHECK_THROWS_AS(make_factored_discriminant(std::array<i64, 4>{5, 13, 17, 29}), domain_error);
}

TEST_CASE("sum-of-two-squares test (family excludes such discriminants)", "[intarith]") {
    CHECK(is_sum_of_two_squares(5));
    CHECK(is_sum_of_two_squares(65));
    CHECK(is_sum_of_two_squares(9));       // 9 = 9 + 0
    CHECK(is_sum_of_two_squares(2));
    CHECK_FALSE(is_sum_of_two_squares(3));
    CHECK_FALSE(is_sum_of_two_squares(4485)); // 3 || 4485
    CHECK_FALSE(is_sum_of_two_squares(0));
    CHECK_FALSE(is_sum_of_two_squares(-5));

    // Any product of two negative and two positive prime discriminants, or of
    // four negative ones, contains a prime = 3 (mod 4) to the first power
    // (or is divisible by exactly 2^2 or 2^3 via -4/8): never x^2 + y^2.
    for (i64 D : {i64{4485}, i64{5 * 89 * 19 * 7}, i64{3 * 8 * 11 * 23}})
        CHECK_FALSE(is_sum_of_two_squares(D));
}
