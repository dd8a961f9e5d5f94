// Unit tests for the real quadratic unit oracle: fundamental units via the
// continued fraction of (P + sqrt(D))/Q, the delta(eps) invariant, and the
// genus-character bound that pins delta down independently.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "narrowtower/errors.hpp"
#include "narrowtower/intarith.hpp"
#include "narrowtower/realunits.hpp"

using namespace narrowtower;

namespace {

// eps = (x + y sqrt(D)) / 2 must satisfy x^2 - D y^2 = 4 N(eps).
void check_unit_equation(i64 D, const FundamentalUnit& u) {
    mpz_class lhs = u.x * u.x - mpz_class(D) * u.y * u.y;
    CHECK(lhs == 4 * u.norm);
    CHECK(u.x > 0);
    CHECK(u.y > 0);
    CHECK((u.norm == 1 || u.norm == -1));
}

} // namespace

TEST_CASE("fundamental units of the textbook fields", "[realunits]") {
    // D = 5: eps = (1 + sqrt 5)/2, norm -1.
    auto u5 = fundamental_unit(5);
    CHECK(u5.x == 1);
    CHECK(u5.y == 1);
    CHECK(u5.norm == -1);
    check_unit_equation(5, u5);

    // D = 8: eps = 1 + sqrt 2 (x=2, y=1 in halves), norm -1.
    auto u8 = fundamental_unit(8);
    CHECK(u8.x == 2);
    CHECK(u8.y == 1);
    CHECK(u8.norm == -1);

    // D = 12: eps = 2 + sqrt 3 = (4 + sqrt 12)/2, norm +1.
    auto u12 = fundamental_unit(12);
    CHECK(u12.x == 4);
    CHECK(u12.y == 1);
    CHECK(u12.norm == 1);
    check_unit_equation(12, u12);

    // D = 13: eps = (3 + sqrt 13)/2, norm -1.
    auto u13 = fundamental_unit(13);
    CHECK(u13.x == 3);
    CHECK(u13.y == 1);
    CHECK(u13.norm == -1);

    // D = 61: the classic large-unit example, eps = (39 + 5 sqrt 61)/2,
    // norm -1.
    auto u61 = fundamental_unit(61);
    CHECK(u61.x == 39);
    CHECK(u61.y == 5);
    CHECK(u61.norm == -1);
    check_unit_equation(61, u61);
}

TEST_CASE("unit equation holds across a sweep of discriminants", "[realunits]") {
    for (i64 D = 5; D <= 400; ++D) {
        if (!is_fundamental_discriminant(D) || D <= 0) continue;
        auto u = fundamental_unit(D);
        INFO("D = " << D);
        check_unit_equation(D, u);
        // minimality spot check: no smaller y solves x^2 - D y^2 = +-4.
        // (cheap for small D; the continued fraction guarantees it anyway)
        if (u.y > 1) {
            for (mpz_class y = 1; y < u.y; ++y) {
                mpz_class dy2p4 = mpz_class(D) * y * y + 4;
                mpz_class dy2m4 = mpz_class(D) * y * y - 4;
                CHECK(mpz_perfect_square_p(dy2p4.get_mpz_t()) == 0);
                CHECK(mpz_perfect_square_p(dy2m4.get_mpz_t()) == 0);
            }
        }
    }
}

TEST_CASE("fundamental_unit input validation and budget", "[realunits]") {
    CHECK_THROWS_AS(fundamental_unit(7), domain_error);   // not fundamental
    CHECK_THROWS_AS(fundamental_unit(-4), domain_error);  // imaginary
    CHECK_THROWS_AS(fundamental_unit(0), domain_error);
    // an absurdly small step budget must abort with a resource error, not
    // return a wrong unit
    CHECK_THROWS_AS(fundamental_unit(61, 2), resource_error);
}

TEST_CASE("delta(eps): defined exactly when the unit norm is +1", "[realunits]") {
    // Norm -1 fields: delta undefined.
    auto d5 = delta_of_unit(5);
    CHECK(d5.norm_is_minus_one);

    // D = 12: eps = 2 + sqrt 3, N(1 + eps) = x + 2 = 6 -> delta = 6.
    auto d12 = delta_of_unit(12);
    REQUIRE_FALSE(d12.norm_is_minus_one);
    CHECK(d12.delta == 6);

    // D = 60: eps = 4 + sqrt 15 = (8 + sqrt 60)/2, N(1+eps) = x + 2 = 10 ->
    // delta = 10 (both 2 and 5 appear to an odd power).
    auto d60 = delta_of_unit(60);
    REQUIRE_FALSE(d60.norm_is_minus_one);
    CHECK(d60.delta == 10);

    // D = 133 = 7 * 19: the worked singleton example, delta = 7.
    auto d133 = delta_of_unit(133);
    REQUIRE_FALSE(d133.norm_is_minus_one);
    CHECK(d133.delta == 7);

    // delta divides 2D and is supported on ramified primes
    for (i64 D : {i64{12}, i64{60}, i64{133}, i64{4485}}) {
        auto d = delta_of_unit(D);
        REQUIRE_FALSE(d.norm_is_minus_one);
        CHECK(d.delta > 0);
        CHECK((2 * D) % d.delta == 0);
    }
}

TEST_CASE("genus characters bound delta from below", "[realunits]") {
    // The character table chi[i][j] must be a +-1 matrix whose rows multiply
    // to +1 across each column block (product formula: prod_i chi_i(del) = 1
    // for del a norm). We check the structural properties and the membership
    // of the true delta in the candidate list.
    auto parts = prime_discriminant_factors(4485); // -3, 5, 13, -23
    auto chi = genus_character_table(parts);
    REQUIRE(chi.size() == 4);
    for (const auto& row : chi)
        for (int v : row) CHECK((v == 1 || v == -1));

    auto candidates = delta_via_genus(parts);
    // the genuine delta(eps) = 69 = 3 * 23 (frozen value for D = 4485,
    // confirmed by the unit oracle below) must be admissible
    auto d = delta_of_unit(4485);
    REQUIRE_FALSE(d.norm_is_minus_one);
    CHECK(d.delta == 69);
    CHECK(std::find(candidates.begin(), candidates.end(), 69) != candidates.end());

    // D = 133: the candidate list is the singleton {7}, so genus theory
    // alone already determines delta -- and the unit oracle agrees.
    auto parts133 = prime_discriminant_factors(133);
    auto cand133 = delta_via_genus(parts133);
    REQUIRE(cand133.size() == 1);
    CHECK(cand133[0] == 7);
}

TEST_CASE("delta via genus respects unit-norm parity", "[realunits]") {
    // If N(eps) = -1 then -1 is a norm from the field, which forces every
    // genus character to kill the full product: the candidate list always
    // contains 2D/squares... more simply, whenever the list is NONempty and
    // the unit norm is +1, delta must appear in it. Sweep small four-part
    // family discriminants and check membership.
    int checked = 0;
    for (i64 D = 5; D <= 3000; ++D) {
        if (!is_fundamental_discriminant(D)) continue;
        auto parts = prime_discriminant_factors(D);
        if (parts.size() != 4) continue;
        int neg = 0;
        for (const auto& pd : parts)
            if (pd.value < 0) ++neg;
        if (neg != 2 && neg != 4) continue;
        auto d = delta_of_unit(D);
        // every family field has an odd prime = 3 (mod 4) ramified, so the
        // unit norm is forced to +1 and delta is always defined
        REQUIRE_FALSE(d.norm_is_minus_one);
        auto candidates = delta_via_genus(parts);
        INFO("D = " << D);
        CHECK(std::find(candidates.begin(), candidates.end(), d.delta) != candidates.end());
        ++checked;
    }
    CHECK(checked >= 10); // the sweep must actually have exercised the bound
}
