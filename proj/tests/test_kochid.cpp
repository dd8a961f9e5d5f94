// Unit tests for the presentation-and-identification layer: Koch-style
// presentations from symbol matrices, the reference catalog, group
// identification, the symbol criterion, the rank prediction, and the
// end-to-end tower report.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <set>
#include <string>

#include "narrowtower/errors.hpp"
#include "narrowtower/kochid.hpp"
#include "narrowtower/section8.hpp"

using namespace narrowtower;

TEST_CASE("Koch presentation shape", "[kochid]") {
    // a8's canonical abstract profile
    auto prof = abstract_profile(FieldType::I, {1, 0, 1, 0, 1, 0});
    auto pres = koch_presentation(prof);
    CHECK(pres.gens == std::vector<std::string>{"s1", "s2", "s3"});
    // 3 symbol relations + 1 mu relation + 9 class-2 relators
    CHECK(pres.relators.size() == 13);

    // the presented group is finite of order 32 here, with G/G' = (2,2,2)
    auto g = PermGroup::from_enumeration(coset_enumerate(pres, 20000));
    CHECK(g.order() == 32);
    CHECK(g.abelianization() == std::vector<i64>{2, 2, 2});
    // class 2: lower central series G > G_2 > 1
    CHECK(g.lower_central_series().size() == 3);
}

TEST_CASE("presentations from the table rows enumerate to their labels", "[kochid]") {
    // spot-check one row per type; the verification suite does all 37
    for (const char* name : {"a8", "b4", "c3", "d1"}) {
        const auto& row = appendix3_row(name);
        auto pres = koch_presentation_from_row(row);
        auto g = PermGroup::from_enumeration(coset_enumerate(pres, 20000));
        INFO("case " << name << " -> " << row.group);
        CHECK(g.order() == (row.group.rfind("32.", 0) == 0 ? 32 : 64));
        // identify via the catalog and compare with the table's label
        bool matched = false;
        for (const auto& entry : reference_catalog()) {
            if (entry.group.order() != g.order()) continue;
            if (is_isomorphic(g, entry.group)) {
                CHECK(entry.label == row.group);
                matched = true;
                break;
            }
        }
        CHECK(matched);
    }
}

TEST_CASE("the reference catalog is consistent", "[kochid]") {
    const auto& cat = reference_catalog();
    REQUIRE(cat.size() == 13);

    std::set<std::string> labels;
    int n32 = 0, n64 = 0;
    for (const auto& e : cat) {
        CHECK(labels.insert(e.label).second);
        if (e.group.order() == 32) ++n32;
        if (e.group.order() == 64) ++n64;
        // every catalog group is class <= 2 with exponent dividing 8
        CHECK(e.group.lower_central_series().size() <= 3);
        CHECK(8 % e.group.exponent() == 0);
    }
    CHECK(n32 == 9);
    CHECK(n64 == 4);

    // a representative non-isomorphic pair of equal order (the full pairwise
    // check runs in the verification suite)
    const CatalogEntry* g33 = nullptr;
    const CatalogEntry* g34 = nullptr;
    const CatalogEntry* g144 = nullptr;
    const CatalogEntry* g150 = nullptr;
    for (const auto& e : cat) {
        if (e.label == "32.033") g33 = &e;
        if (e.label == "32.034") g34 = &e;
        if (e.label == "64.144") g144 = &e;
        if (e.label == "64.150") g150 = &e;
    }
    REQUIRE(g33 != nullptr);
    REQUIRE(g34 != nullptr);
    REQUIRE(g144 != nullptr);
    REQUIRE(g150 != nullptr);
    CHECK_FALSE(is_isomorphic(g33->group, g34->group));
    CHECK_FALSE(is_isomorphic(g144->group, g150->group));
}

TEST_CASE("identify_label on canonical profiles", "[kochid]") {
    auto a8 = identify_label(abstract_profile(FieldType::I, {1, 0, 1, 0, 1, 0}));
    CHECK(a8.label == "32.033");
    CHECK(a8.order == 32);

    // d1: all-negative row with nu = 1,0,1 and mu = 0,0,0
    const auto& d1row = appendix3_row("d1");
    auto d1 = identify_label(abstract_profile(
        FieldType::IV, {d1row.nu[0], d1row.nu[1], d1row.nu[2], d1row.mu[0], d1row.mu[1],
                        d1row.mu[2]}));
    CHECK(d1.label == "64.150");
    CHECK(d1.order == 64);

    // 4-rank > 0 profiles are rejected up front: the group would be infinite
    CHECK_THROWS_AS(identify_label(abstract_profile(FieldType::I, {0, 0, 0, 0, 0, 0})),
                    domain_error);
    // a starved coset budget trips the resource guard instead of looping
    CHECK_THROWS_AS(identify_label(abstract_profile(FieldType::I, {1, 0, 1, 0, 1, 0}), 8),
                    resource_error);
}

TEST_CASE("rank prediction from the group label", "[kochid]") {
    auto p33 = predict_rank("32.033");
    CHECK(p33.rank == 3);
    CHECK(p33.exact);
    CHECK(p33.text == "=3");

    auto p40 = predict_rank("32.040");
    CHECK(p40.rank == 2);
    CHECK(p40.exact);
    CHECK(p40.text == "=2");

    auto p150 = predict_rank("64.150");
    CHECK(p150.rank == 3);
    CHECK_FALSE(p150.exact);
    CHECK(p150.text == ">=3");

    CHECK_THROWS_AS(predict_rank("16.001"), domain_error);
    CHECK_THROWS_AS(predict_rank(""), domain_error);
}

TEST_CASE("the symbol criterion agrees with the identification", "[kochid]") {
    // a8 satisfies the two-positive criterion; b11 does not (label 32.036)
    CHECK(prop3_test(abstract_profile(FieldType::I, {1, 0, 1, 0, 1, 0})));

    const auto& b11 = appendix3_row("b11");
    CHECK_FALSE(prop3_test(abstract_profile(
        FieldType::II,
        {b11.nu[0], b11.nu[1], b11.nu[2], b11.mu[0], b11.mu[1], b11.mu[2]})));

    // all-negative branch: d5 and d8 are the 32.033 rows among d1..d8
    for (const char* name : {"d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8"}) {
        const auto& row = appendix3_row(name);
        bool res = prop3_test(abstract_profile(
            FieldType::IV, {row.nu[0], row.nu[1], row.nu[2], row.mu[0], row.mu[1], row.mu[2]}));
        INFO("case " << name << " labelled " << row.group);
        CHECK(res == (row.group == "32.033"));
    }
}

TEST_CASE("section survey witness table is well-formed", "[kochid]") {
    const auto& rows = section8_rows();
    REQUIRE(rows.size() == 37);
    std::set<std::string> names;
    for (const auto& r : rows) {
        CHECK(names.insert(r.name).second);
        CHECK(is_fundamental_discriminant(r.disc()));
        // rank tuple consistent with the label's prediction
        auto pred = predict_rank(r.label);
        if (pred.exact)
            CHECK(static_cast<int>(r.cl2_k1.size()) == pred.rank);
        else
            CHECK(static_cast<int>(r.cl2_k1.size()) >= pred.rank);
    }
    // the a5 witness: 89 * 5 * (-19) * (-7) = 59185
    const auto& a5 = rows.front();
    CHECK(a5.name == "a5");
    CHECK(a5.disc() == 59185);
    CHECK(a5.label == "32.033");
}

TEST_CASE("tower report: full chain on two witnesses", "[kochid]") {
    // a5 witness: everything lines up and the rank is exactly 3
    auto rep = tower_report(make_factored_discriminant(std::array<i64, 4>{89, 5, -19, -7}));
    CHECK(rep.label.name == "a5");
    CHECK(rep.four_rank == 0);
    CHECK(rep.prop3);
    REQUIRE(rep.galois.has_value());
    CHECK(rep.galois->glabel == "32.033");
    CHECK(rep.koch_label == "32.033");
    CHECK(rep.koch_order == 32);
    CHECK(rep.predicted.text == "=3");

    // c3 witness: Type III short-circuit, order-64 label, bound only
    auto rep3 = tower_report(make_factored_discriminant(std::array<i64, 4>{-3, -8, -11, -23}));
    CHECK(rep3.label.name == "c3");
    CHECK(rep3.four_rank == 0);
    CHECK_FALSE(rep3.prop3);
    REQUIRE(rep3.galois.has_value());
    CHECK_FALSE(rep3.galois->full);
    CHECK(rep3.koch_label == "64.150");
    CHECK(rep3.predicted.text == ">=3");
}

TEST_CASE("tower report on a 4-rank 2 field stops at classification", "[kochid]") {
    // find an uppercase-case field: the report must carry the rank and no
    // galois/koch data
    for (i64 D = 5; D < 100000; ++D) {
        if (!is_fundamental_discriminant(D)) continue;
        auto parts = prime_discriminant_factors(D);
        if (parts.size() != 4) continue;
        int neg = 0;
        for (const auto& pd : parts)
            if (pd.value < 0) ++neg;
        if (neg != 2 && neg != 4) continue;
        auto fd = make_factored_discriminant(D);
        auto rep = tower_report(fd);
        if (rep.four_rank > 0) {
            CHECK_FALSE(rep.galois.has_value());
            CHECK(rep.koch_label.empty());
            CHECK(rep.koch_order == 0);
            CHECK_FALSE(is_lowercase_case(rep.label.name));
            return;
        }
    }
    FAIL("no 4-rank > 0 field found in range (search bound too small?)");
}
