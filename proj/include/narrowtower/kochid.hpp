#pragma once

// Koch-style presentations of G+/G_3+ and group identification.
//
// For a field in the family with 4-rank zero, the quotient G+/G_3+ of
// G+ = Gal(k_+^2/k) by the third term of its lower central series has a
// presentation on generators s1, s2, s3 (Frobenius lifts attached to the
// first three ramified primes; s4 is eliminated) with relators read off the
// symbol matrix:
//
//   relation j (j = 1..3):   prod_i s_i^{2 nu_ij} * s_j^{2 delta_j}
//                              = t_1j^{nu_1j} ... (commutators of column j)
//   relation 4:              s1^{2 mu_1} s2^{2 mu_2} s3^{2 mu_3} = 1
//   class-2 truncation:      [[s_i, s_j], s_l] = 1
//
// with t_ij = [s_i, s_j] and mu_i = nu_i4. koch_presentation builds this
// from a profile; identify_label enumerates the presented group and matches
// it against the reference catalog (the nine order-32 groups of the
// classification table plus the four order-64 groups that occur), giving
// the label that drives the rank prediction for Cl_2(k_+^1).

#include "narrowtower/errors.hpp"
#include "narrowtower/fpgroups.hpp"
#include "narrowtower/tables.hpp"
#include "narrowtower/towerclassify.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace narrowtower {

// ---------------------------------------------------------------------------
// presentations
// ---------------------------------------------------------------------------

namespace kochdetail {

/// t12, t13, t23 as words over s1..s3 (generator letters 1..3)
inline Word t_word(int i, int j) { return word_commutator(Word{i + 1}, Word{j + 1}); }

/// the nine class-2 truncation relators [[s_i,s_j],s_l]
inline void append_class2(std::vector<Word>& rels) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
                rels.push_back(word_commutator(t_word(i, j), Word{l + 1}));
}

/// word for a '*'-joined product of t-tokens over s-generators ("1" = empty)
inline Word t_token_word(const std::string& token) {
    Word out;
    for (const auto& part : split_word_token(token)) {
        if (part == "t12") out = word_concat(out, t_word(0, 1));
        else if (part == "t13") out = word_concat(out, t_word(0, 2));
        else if (part == "t23") out = word_concat(out, t_word(1, 2));
        else throw domain_error("unknown t-token '" + part + "'");
    }
    return out;
}

/// word for a '*'-joined product of c-tokens over a-generators
inline Word c_token_word(const std::string& token) {
    Word out;
    for (const auto& part : split_word_token(token)) {
        if (part == "c12") out = word_concat(out, t_word(0, 1));
        else if (part == "c13") out = word_concat(out, t_word(0, 2));
        else if (part == "c23") out = word_concat(out, t_word(1, 2));
        else throw domain_error("unknown c-token '" + part + "'");
    }
    return out;
}

} // namespace kochdetail

/// Koch presentation of G+/G_3+ from the full symbol matrix of a profile
/// (any slot arrangement; the canonical one gives the table's rows).
inline Presentation koch_presentation(const SymbolProfile& prof) {
    Presentation pres;
    pres.gens = {"s1", "s2", "s3"};
    auto nu = [&](int i, int j) { return prof.nu[static_cast<size_t>(i)][static_cast<size_t>(j)]; };
    // relation j: s-part times inverse of the commutator part
    for (int j = 0; j < 3; ++j) {
        Word s_part, t_part;
        for (int i = 0; i < 3; ++i) {
            int e = (i == j) ? nu(j, j) : nu(i, j);
            s_part = word_concat(s_part, word_pow(Word{i + 1}, 2 * e));
        }
        for (int i = 0; i < 3; ++i) {
            if (i == j) continue;
            int a = std::min(i, j), b = std::max(i, j);
            t_part = word_concat(t_part, word_pow(kochdetail::t_word(a, b), nu(i, j)));
        }
        pres.relators.push_back(word_concat(s_part, word_inverse(t_part)));
    }
    // relation 4: squares to the exponents mu_i = nu_i4
    {
        Word w;
        for (int i = 0; i < 3; ++i) w = word_concat(w, word_pow(Word{i + 1}, 2 * nu(i, 3)));
        pres.relators.push_back(w);
    }
    kochdetail::append_class2(pres.relators);
    return pres;
}

/// The same presentation built from a row of the presentation table
/// (nu12,nu13,nu23; mu; delta): the lower-triangle entries are completed by
/// the reciprocity rules of the type's abstract model, and the row's delta
/// column is checked against the resulting column sums.
inline Presentation koch_presentation_from_row(const Appendix3Row& row) {
    // the case name determines the type: a -> I, b -> II, c -> III, d -> IV
    FieldType t;
    switch (row.name[0]) {
        case 'a': t = FieldType::I; break;
        case 'b': t = FieldType::II; break;
        case 'c': t = FieldType::III; break;
        case 'd': t = FieldType::IV; break;
        default: throw domain_error("koch_presentation_from_row: bad case " + row.name);
    }
    SymbolProfile prof = abstract_profile(
        t, {row.nu[0], row.nu[1], row.nu[2], row.mu[0], row.mu[1], row.mu[2]});
    for (int i = 0; i < 3; ++i)
        if (prof.nu[static_cast<size_t>(i)][static_cast<size_t>(i)] != row.delta[static_cast<size_t>(i)])
            throw inconsistency_error("presentation table: delta column of case " + row.name +
                                      " disagrees with the symbol column sums");
    return koch_presentation(prof);
}

// ---------------------------------------------------------------------------
// the reference catalog
// ---------------------------------------------------------------------------

struct CatalogEntry {
    std::string label;
    Presentation presentation;
    PermGroup group;
};

/// The thirteen reference groups: the nine order-32 groups presented on
/// a1,a2,a3 with [a2,a3] = 1 and the squares of the classification table,
/// and the four order-64 groups that occur (all of class 2 with G/G_2 and
/// G_2 elementary of rank 3).
inline const std::vector<CatalogEntry>& reference_catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> out;
        auto finish = [&](const std::string& label, Presentation pres, int expect_order) {
            PermGroup g = PermGroup::from_enumeration(coset_enumerate(pres, 20000));
            if (g.order() != expect_order)
                throw inconsistency_error("catalog group " + label + " has order " +
                                          std::to_string(g.order()) + ", expected " +
                                          std::to_string(expect_order));
            if (g.nilpotency_class() != 2)
                throw inconsistency_error("catalog group " + label + " is not of class 2");
            out.push_back(CatalogEntry{label, std::move(pres), std::move(g)});
        };
        for (const auto& row : table1()) {
            Presentation pres;
            pres.gens = {"a1", "a2", "a3"};
            pres.relators.push_back(kochdetail::t_word(1, 2)); // c23 = 1
            for (int i = 0; i < 3; ++i) {
                Word sq = word_pow(Word{i + 1}, 2);
                pres.relators.push_back(word_concat(
                    sq, word_inverse(kochdetail::c_token_word(row.asq[static_cast<size_t>(i)]))));
            }
            kochdetail::append_class2(pres.relators);
            finish(row.label, std::move(pres), 32);
        }
        // order-64 groups, presented like the a-rows they normalize
        const std::array<std::pair<const char*, std::array<const char*, 3>>, 4> big{{
            {"64.144", {"1", "1", "1"}},
            {"64.146", {"t13", "t13", "1"}},
            {"64.147", {"t12", "t12", "1"}},
            {"64.150", {"t12", "t23", "t13"}},
        }};
        for (const auto& [label, ssq] : big) {
            Presentation pres;
            pres.gens = {"s1", "s2", "s3"};
            for (int i = 0; i < 3; ++i) {
                Word sq = word_pow(Word{i + 1}, 2);
                pres.relators.push_back(
                    word_concat(sq, word_inverse(kochdetail::t_token_word(ssq[static_cast<size_t>(i)]))));
            }
            kochdetail::append_class2(pres.relators);
            finish(label, std::move(pres), 64);
        }
        return out;
    }();
    return entries;
}

// ---------------------------------------------------------------------------
// identification and rank prediction
// ---------------------------------------------------------------------------

struct GroupIdent {
    std::string label;
    int order = 0;
};

/// Enumerate the Koch presentation of the profile and identify it in the
/// reference catalog. Requires 4-rank zero (otherwise the presented group
/// is infinite and the enumeration could not terminate).
inline GroupIdent identify_label(const SymbolProfile& prof, long coset_budget = 20000,
                                 u64 seed = 0xC0FFEEu) {
    if (four_rank_profile(prof) != 0)
        throw domain_error("identify_label: G+/G_3+ is infinite unless the 4-rank vanishes");
    Presentation pres = koch_presentation(prof);
    PermGroup g = PermGroup::from_enumeration(coset_enumerate(pres, coset_budget));
    if (g.order() != 32 && g.order() != 64)
        throw inconsistency_error("Koch group has order " + std::to_string(g.order()) +
                                  "; the 4-rank-zero cases give 32 or 64");
    std::optional<std::string> found;
    for (const auto& entry : reference_catalog()) {
        if (entry.group.order() != g.order()) continue;
        if (!is_isomorphic(g, entry.group, seed)) continue;
        if (found)
            throw inconsistency_error("Koch group matches two catalog entries: " + *found +
                                      " and " + entry.label);
        found = entry.label;
    }
    if (!found) throw inconsistency_error("Koch group matches no catalog entry");
    return GroupIdent{*found, g.order()};
}

struct RankPrediction {
    int rank = 0;    ///< the bound
    bool exact = false;
    std::string text; ///< "=2", "=3" or ">=3"
};

/// The main theorem's prediction for rank Cl_2(k_+^1) from the Koch label:
/// order 32 other than 32.033 gives rank exactly 2; 32.033 gives exactly 3;
/// order 64 gives at least 3.
inline RankPrediction predict_rank(const std::string& label) {
    if (label == "32.033") return {3, true, "=3"};
    if (label.rfind("32.", 0) == 0) return {2, true, "=2"};
    if (label.rfind("64.", 0) == 0) return {3, false, ">=3"};
    throw domain_error("predict_rank: unknown label '" + label + "'");
}

/// The symbol-level criterion for G+/G_3+ = 32.033: after an admissible
/// reordering of the parts either
///   (1) d1,d2 > 0, d3,d4 < 0 (with -4 in slot 4 when present) and
///       (d1/p4) = +1, (d2/p3) = (d2/p4) = (d1/p2 p3) = -1, or
///   (2) all d_i < 0 and (d1/p2) = (d1/p3) = (d2/p3) = (d2/p4) = (d4/p1)
///       = (d4/p3) = -1, plus (d3/p4) = +1 when slot 4 holds -4.
/// Equivalent, for the 4-rank-zero cases, to the label being 32.033.
inline bool prop3_test(const SymbolProfile& prof) {
    auto nu = [&](const std::array<int, 4>& pm, int i, int j) {
        return prof.nu[static_cast<size_t>(pm[static_cast<size_t>(i)])]
                      [static_cast<size_t>(pm[static_cast<size_t>(j)])];
    };
    if (prof.type == FieldType::I || prof.type == FieldType::II) {
        for (const auto& pm : classify_detail::allowed_permutations(prof)) {
            if (nu(pm, 0, 3) == 0 && nu(pm, 1, 2) == 1 && nu(pm, 1, 3) == 1 &&
                (nu(pm, 0, 1) ^ nu(pm, 0, 2)) == 1)
                return true;
        }
        return false;
    }
    for (const auto& pm : classify_detail::allowed_permutations(prof)) {
        bool ok = nu(pm, 0, 1) == 1 && nu(pm, 0, 2) == 1 && nu(pm, 1, 2) == 1 &&
                  nu(pm, 1, 3) == 1 && nu(pm, 3, 0) == 1 && nu(pm, 3, 2) == 1;
        if (ok && prof.slot_minus4(pm[3]) && nu(pm, 2, 3) != 0) ok = false;
        if (ok) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// the assembled report
// ---------------------------------------------------------------------------

struct TowerReport {
    FactoredDiscriminant fd;
    CaseLabel label;
    SymbolProfile profile; ///< canonical arrangement
    int four_rank = 0;
    bool prop3 = false;
    std::optional<GaloisReport> galois; ///< present when the 4-rank is zero
    std::string koch_label;             ///< empty when the 4-rank is positive
    int koch_order = 0;
    RankPrediction predicted; ///< meaningful when the 4-rank is zero
};

/// Classify a field and, in the 4-rank-zero cases, run the whole chain:
/// Galois structure of k^2/k, Koch presentation and identification, the
/// symbol criterion, and the rank prediction, cross-checking the three
/// independent 4-rank computations and the agreement of every label source.
inline TowerReport tower_report(const FactoredDiscriminant& fd, long coset_budget = 20000,
                                u64 seed = 0xC0FFEEu) {
    TowerReport rep{fd, {}, {}, 0, false, std::nullopt, "", 0, {}};
    SymbolProfile prof0 = symbol_profile(fd);
    rep.label = classify_case(prof0);
    rep.profile = reorder_profile(prof0, rep.label.permutation);
    rep.four_rank = four_rank_profile(rep.profile);
    if (four_rank_splittings(fd) != rep.four_rank)
        throw inconsistency_error("4-rank: splitting count disagrees with the symbol formula");
    if (four_rank_forms(fd.value) != rep.four_rank)
        throw inconsistency_error("4-rank: form class group disagrees with the symbol formula");
    if (appendix1_row(rep.label.type, rep.label.name).rank4 != rep.four_rank)
        throw inconsistency_error("4-rank disagrees with the case table");
    rep.prop3 = prop3_test(rep.profile);
    if (rep.four_rank != 0) return rep;

    rep.galois = galois_k2_report(fd);
    GroupIdent ident = identify_label(rep.profile, coset_budget, seed);
    rep.koch_label = ident.label;
    rep.koch_order = ident.order;
    rep.predicted = predict_rank(ident.label);

    const Appendix3Row& row3 = appendix3_row(rep.label.name);
    if (row3.group != ident.label)
        throw inconsistency_error("identified group " + ident.label +
                                  " disagrees with the presentation table's " + row3.group);
    if (rep.galois->glabel != ident.label)
        throw inconsistency_error("identified group disagrees with the structure table label");
    if (rep.prop3 != (ident.label == "32.033"))
        throw inconsistency_error("symbol criterion for 32.033 disagrees with identification");
    // the profile must reproduce the presentation table's symbol columns
    // (for Type II the table merges nu34 = mu3, so that bit is skipped)
    const std::array<int, 3> got_nu{rep.profile.nu[0][1], rep.profile.nu[0][2],
                                    rep.profile.nu[1][2]};
    const std::array<int, 3> got_mu{rep.profile.nu[0][3], rep.profile.nu[1][3],
                                    rep.profile.nu[2][3]};
    for (int i = 0; i < 3; ++i) {
        if (row3.nu[static_cast<size_t>(i)] != got_nu[static_cast<size_t>(i)])
            throw inconsistency_error("profile nu disagrees with the presentation table");
        if (i == 2 && rep.label.type == FieldType::II) continue;
        if (row3.mu[static_cast<size_t>(i)] != got_mu[static_cast<size_t>(i)])
            throw inconsistency_error("profile mu disagrees with the presentation table");
    }
    return rep;
}

} // namespace narrowtower
