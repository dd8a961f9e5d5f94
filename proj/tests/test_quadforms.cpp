// Unit tests for the binary quadratic form oracle: reduction, composition,
// class groups (wide and narrow), and the two independent 4-rank computations
// that cross-check the symbol-based classification.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <vector>

#include "narrowtower/errors.hpp"
#include "narrowtower/intarith.hpp"
#include "narrowtower/quadforms.hpp"

using namespace narrowtower;

TEST_CASE("reduction of definite forms", "[quadforms]") {
    // (1,1,6) has discriminant 1-24 = -23 and is already reduced.
    BQForm f{1, 1, 6};
    CHECK(form_discriminant(f) == -23);
    CHECK(is_reduced_definite(f));
    CHECK(reduce_definite(f) == f);

    // A wildly unreduced equivalent of the principal form of disc -23.
    BQForm g{6, 13, 8}; // 169 - 192 = -23
    REQUIRE(form_discriminant(g) == -23);
    auto r = reduce_definite(g);
    CHECK(is_reduced_definite(r));
    CHECK(form_discriminant(r) == -23);

    CHECK(principal_form(-23) == BQForm{1, 1, 6});
    CHECK(principal_form(-4) == BQForm{1, 0, 1});
    CHECK(principal_form(5) == BQForm{1, 1, -1});
    CHECK(principal_form(8) == BQForm{1, 0, -2});
}

TEST_CASE("indefinite reduction cycles", "[quadforms]") {
    // For indefinite forms, reduction lands somewhere on the cycle of
    // reduced forms; the invariant is the discriminant plus reducedness.
    for (i64 D : {i64{5}, i64{8}, i64{12}, i64{13}, i64{60}, i64{4485}}) {
        BQForm f = principal_form(D);
        CHECK(is_reduced_indefinite(reduce_indefinite(f, D), D));
        // rho walks along the cycle and must preserve the discriminant
        i64 s = isqrt_i64(D);
        BQForm g = reduce_indefinite(f, D);
        for (int k = 0; k < 6; ++k) {
            g = detail::rho_indefinite(g, D, s);
            CHECK(form_discriminant(g) == D);
            CHECK(is_reduced_indefinite(g, D));
        }
    }
}

TEST_CASE("class numbers of small imaginary fields", "[quadforms]") {
    // h(-3) = h(-4) = h(-8) = 1, h(-23) = 3, h(-47) = 5, h(-84) = 4 with
    // group (2,2). All are standard table values.
    CHECK(class_group(-3).h == 1);
    CHECK(class_group(-4).h == 1);
    CHECK(class_group(-8).h == 1);
    CHECK(class_group(-23).h == 3);
    CHECK(class_group(-47).h == 5);

    auto g84 = class_group(-84);
    CHECK(g84.h == 4);
    CHECK(g84.invariants == std::vector<i64>{2, 2});
    CHECK(g84.four_rank == 0);
}

TEST_CASE("narrow vs wide class groups of real fields", "[quadforms]") {
    // D = 5, 8, 13: norm of the fundamental unit is -1, so narrow = wide = 1.
    CHECK(class_group(5, true).h == 1);
    CHECK(class_group(5, false).h == 1);
    CHECK(class_group(8, true).h == 1);
    CHECK(class_group(13, true).h == 1);

    // D = 12: unit norm +1, h = 1 but h+ = 2.
    CHECK(class_group(12, false).h == 1);
    CHECK(class_group(12, true).h == 2);

    // D = 60 = (-3)(-4)(5): h = 2 but genus theory forces narrow 2-rank
    // t - 1 = 2, so h+ = 4 with group (2,2).
    CHECK(class_group(60, false).h == 2);
    auto g60 = class_group(60, true);
    CHECK(g60.h == 4);
    CHECK(g60.invariants == std::vector<i64>{2, 2});

    // The family witness 4485 = 5*13*(-3)*(-23): the WIDE 2-class group is
    // (2,2) (that is the family condition), while the narrow one has 2-rank
    // t - 1 = 3. Unit norm is +1 here, so h+ = 2h.
    CHECK(h2_wide(4485) == 4);
    auto wide = class_group(4485, false);
    auto narrow = class_group(4485, true);
    CHECK(wide.two_part == std::vector<i64>{2, 2});
    CHECK(narrow.two_part == std::vector<i64>{2, 2, 2});
    CHECK(narrow.h == 2 * wide.h);
}

TEST_CASE("genus theory: narrow 2-rank is (number of parts) - 1", "[quadforms]") {
    // Gauss: the 2-torsion of the narrow class group of disc D has rank t-1
    // where t = number of prime discriminant factors. Check over a spread of
    // fundamental discriminants by counting 2-torsion in the computed group.
    for (i64 D : {i64{4485}, i64{-84}, i64{60}, i64{3 * 8 * 11 * 23}, i64{5 * 89 * 19 * 7}}) {
        auto parts = prime_discriminant_factors(D);
        auto g = class_group(D, true);
        INFO("D = " << D);
        CHECK(g.two_part.size() == parts.size() - 1);
    }
}

TEST_CASE("composition: the principal class is an identity", "[quadforms]") {
    for (i64 D : {i64{-23}, i64{-84}, i64{4485}}) {
        BQForm e = principal_form(D);
        BQForm f = (D < 0) ? reduce_definite(BQForm{3, 1, 2}) : e; // any class
        if (D == -84) f = reduce_definite(BQForm{2, 2, 11});       // disc -84
        if (D == -23) f = reduce_definite(BQForm{2, 1, 3});        // disc -23
        auto prod = compose_raw(e, f);
        // e * f must be equivalent to f: compare via the class group oracle,
        // which reduces both to canonical representatives.
        if (D < 0) {
            CHECK(reduce_definite(prod) == reduce_definite(f));
        } else {
            CHECK(form_discriminant(prod) == D);
        }
    }
}

TEST_CASE("the two independent 4-rank computations agree", "[quadforms]") {
    // four_rank_forms computes the 4-rank from the narrow form class group;
    // four_rank_splittings counts C4-splittings of the discriminant. These
    // are independent algorithms and must always agree.
    auto check = [](i64 D) {
        auto fd = make_factored_discriminant(D);
        int a = four_rank_forms(D);
        int b = four_rank_splittings(fd);
        INFO("D = " << D);
        CHECK(a == b);
        return a;
    };
    CHECK(check(4485) == 0);             // case a8
    CHECK(check(5 * 89 * 19 * 7) == 0);  // case a5
    CHECK(check(3 * 8 * 11 * 23) == 0);  // case c3
    // Walk both oracles in lockstep until a 4-rank 2 field appears (the
    // first one sits at d = 84972), so the agreement is also exercised on a
    // nonzero rank.
    i64 found = -1;
    for (i64 D = 5; D <= 90000 && found < 0; ++D) {
        if (!is_fundamental_discriminant(D)) continue;
        auto parts = prime_discriminant_factors(D);
        if (parts.size() != 4) continue;
        int neg = 0;
        for (const auto& pd : parts)
            if (pd.value < 0) ++neg;
        if (neg != 2 && neg != 4) continue;
        if (check(D) == 2) found = D;
    }
    REQUIRE(found == 84972);
}

TEST_CASE("degenerate and invalid inputs are rejected", "[quadforms]") {
    CHECK_THROWS_AS(class_group(9, true), domain_error);  // square, not fundamental
    CHECK_THROWS_AS(class_group(7, true), domain_error);  // 7 = 3 (mod 4)
    CHECK_THROWS_AS(class_group(0, true), domain_error);
    CHECK_THROWS_AS(compose_raw(BQForm{1, 1, 6}, BQForm{1, 0, 1}), domain_error); // discs differ
    CHECK_THROWS_AS(compose_raw(BQForm{2, 2, 4}, BQForm{2, 2, 4}), domain_error); // imprimitive
    CHECK(isqrt_i64(0) == 0);
    CHECK(isqrt_i64(15) == 3);
    CHECK(isqrt_i64(16) == 4);
}
