#pragma once

// Symbol profiles and case classification.
//
// A field k = Q(sqrt(d1 d2 d3 d4)) in the family (four prime discriminants,
// two or four of them negative, so d_k > 0 and d_k is not a sum of two
// squares) is described up to the relevant equivalence by its symbol matrix
//
//   nu[i][j]  (i != j):  (-1)^nu[i][j] = (d_i / p_j)
//   nu[i][i]          :  (-1)^nu[i][i] = ((d_k/d_i) / p_i)  (written delta_i)
//
// classify_case matches a profile against the canonical case table
// (appendix1.tbl) over the type's allowed slot permutations; diagram_census
// recounts the equivalence classes from scratch; four_rank_profile computes
// the 4-rank of the narrow class group from C4-splittings on symbols alone.
//
// galois_k2_report runs the full Galois-structure pipeline for the 4-rank
// zero cases of Types I and II: unit deltas, branch resolution, norm/kernel
// subgroups, Taussky conditions, and Kuroda's class number formula, with an
// independent cross-check at every step (class groups via quadforms, units
// via realunits, genus characters both ways).

#include "narrowtower/errors.hpp"
#include "narrowtower/intarith.hpp"
#include "narrowtower/quadforms.hpp"
#include "narrowtower/realunits.hpp"
#include "narrowtower/tables.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace narrowtower {

// ---------------------------------------------------------------------------
// symbol profiles
// ---------------------------------------------------------------------------

struct SymbolProfile {
    FieldType type{};
    bool numeric = false;
    std::array<i64, 4> d{};               ///< prime discriminants by slot (0 if abstract)
    std::array<i64, 4> p{};               ///< their primes (0 if abstract)
    std::array<std::array<int, 4>, 4> nu{}; ///< full matrix, diagonal = delta_i

    /// slot sign in the abstract model: I/II positive slots 0,1; III/IV none
    bool slot_negative(int i) const {
        if (numeric) return d[static_cast<size_t>(i)] < 0;
        if (type == FieldType::III || type == FieldType::IV) return true;
        return i >= 2;
    }
    /// the -4 slot (types II and IV pin it to slot 3)
    bool slot_minus4(int i) const {
        if (numeric) return d[static_cast<size_t>(i)] == -4;
        return (type == FieldType::II || type == FieldType::IV) && i == 3;
    }
};

namespace classify_detail {

inline int bit_of_sign(int s) {
    if (s != 1 && s != -1) throw inconsistency_error("vanishing Kronecker symbol in profile");
    return s == 1 ? 0 : 1;
}

/// index of the (i, j) pair, i < j, in the table column order
/// s12 s13 s23 s14 s24 s34
inline int pair_column(int i, int j) {
    static constexpr int col[4][4] = {{-1, 0, 1, 3}, {0, -1, 2, 4}, {1, 2, -1, 5}, {3, 4, 5, -1}};
    int c = col[i][j];
    if (c < 0) throw domain_error("pair_column: i == j");
    return c;
}

} // namespace classify_detail

/// Build the profile of a factored discriminant in the given part order
/// (no reordering happens here; classify_case searches the permutations).
inline SymbolProfile symbol_profile(const FactoredDiscriminant& fd) {
    SymbolProfile prof;
    prof.numeric = true;
    int negatives = 0;
    bool has_minus4 = false;
    for (int i = 0; i < 4; ++i) {
        prof.d[static_cast<size_t>(i)] = fd.part[static_cast<size_t>(i)].value;
        prof.p[static_cast<size_t>(i)] = fd.part[static_cast<size_t>(i)].prime;
        if (fd.part[static_cast<size_t>(i)].value < 0) ++negatives;
        if (fd.part[static_cast<size_t>(i)].value == -4) has_minus4 = true;
    }
    if (negatives == 2)
        prof.type = has_minus4 ? FieldType::II : FieldType::I;
    else if (negatives == 4)
        prof.type = has_minus4 ? FieldType::IV : FieldType::III;
    else
        throw domain_error("symbol_profile: need two or four negative prime discriminants");
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            i64 arg = (i == j) ? fd.value / prof.d[static_cast<size_t>(i)]
                               : prof.d[static_cast<size_t>(i)];
            prof.nu[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                classify_detail::bit_of_sign(kronecker(arg, prof.p[static_cast<size_t>(j)]));
        }
    }
    // the diagonal is determined by the column sums; a violation here means
    // the Kronecker evaluations are inconsistent with each other
    for (int i = 0; i < 4; ++i) {
        int sum = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) sum ^= prof.nu[static_cast<size_t>(j)][static_cast<size_t>(i)];
        if (sum != prof.nu[static_cast<size_t>(i)][static_cast<size_t>(i)])
            throw inconsistency_error("delta_i disagrees with the nu column sum");
    }
    return prof;
}

/// Build an abstract profile of the given type from the six upper-triangle
/// bits (nu12,nu13,nu23,nu14,nu24,nu34), completing the matrix with the
/// reciprocity rules of the abstract model (odd parts, optional -4 in
/// slot 3 for types II/IV) and the diagonal from column sums.
inline SymbolProfile abstract_profile(FieldType type, const std::array<int, 6>& upper) {
    SymbolProfile prof;
    prof.type = type;
    prof.numeric = false;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            int bit = upper[static_cast<size_t>(classify_detail::pair_column(i, j))];
            if (bit != 0 && bit != 1) throw domain_error("abstract_profile: bits must be 0/1");
            prof.nu[static_cast<size_t>(i)][static_cast<size_t>(j)] = bit;
            int rev;
            if (prof.slot_minus4(j)) {
                // nu_ji = (-4 / p_i): +1 at p = 1 mod 4, -1 at p = 3 mod 4
                rev = prof.slot_negative(i) ? 1 : 0;
            } else if (prof.slot_negative(i) && prof.slot_negative(j)) {
                rev = 1 - bit; // two odd negative discriminants: antisymmetric
            } else {
                rev = bit; // at least one positive odd discriminant: symmetric
            }
            prof.nu[static_cast<size_t>(j)][static_cast<size_t>(i)] = rev;
        }
    for (int i = 0; i < 4; ++i) {
        int sum = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) sum ^= prof.nu[static_cast<size_t>(j)][static_cast<size_t>(i)];
        prof.nu[static_cast<size_t>(i)][static_cast<size_t>(i)] = sum;
    }
    return prof;
}

/// Rearrange slots: out slot i = in slot perm[i].
inline SymbolProfile reorder_profile(const SymbolProfile& in, const std::array<int, 4>& perm) {
    SymbolProfile out = in;
    for (int i = 0; i < 4; ++i) {
        out.d[static_cast<size_t>(i)] = in.d[static_cast<size_t>(perm[static_cast<size_t>(i)])];
        out.p[static_cast<size_t>(i)] = in.p[static_cast<size_t>(perm[static_cast<size_t>(i)])];
        for (int j = 0; j < 4; ++j)
            out.nu[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                in.nu[static_cast<size_t>(perm[static_cast<size_t>(i)])]
                     [static_cast<size_t>(perm[static_cast<size_t>(j)])];
    }
    return out;
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

struct CaseLabel {
    FieldType type{};
    std::string name;
    std::array<int, 4> permutation{}; ///< canonical slot i <- input slot permutation[i]
};

/// True for the 4-rank-zero case names (a1..a13, b1..b13, c1..c3, d1..d8);
/// false for alpha, beta, A*, B*, C, D*.
inline bool is_lowercase_case(const std::string& name) {
    return name.size() >= 2 && std::islower(static_cast<unsigned char>(name[0])) &&
           std::isdigit(static_cast<unsigned char>(name[1]));
}

namespace classify_detail {

/// The slot permutations the type allows: positives stay in slots {0,1},
/// odd negatives fill the remaining odd slots, -4 is pinned to slot 3.
inline std::vector<std::array<int, 4>> allowed_permutations(const SymbolProfile& prof) {
    std::vector<int> pos, neg;
    int m4 = -1;
    for (int i = 0; i < 4; ++i) {
        if (prof.slot_minus4(i)) {
            m4 = i;
            continue;
        }
        (prof.slot_negative(i) ? neg : pos).push_back(i);
    }
    std::vector<std::array<int, 4>> out;
    auto push = [&](std::array<int, 4> p) { out.push_back(p); };
    switch (prof.type) {
        case FieldType::I: {
            if (pos.size() != 2 || neg.size() != 2 || m4 != -1)
                throw domain_error("Type I profile needs two positive and two odd negative parts");
            for (int a : {0, 1})
                for (int b : {0, 1})
                    push({pos[static_cast<size_t>(a)], pos[static_cast<size_t>(1 - a)],
                          neg[static_cast<size_t>(b)], neg[static_cast<size_t>(1 - b)]});
            break;
        }
        case FieldType::II: {
            if (pos.size() != 2 || neg.size() != 1 || m4 < 0)
                throw domain_error("Type II profile needs two positives, one odd negative, -4");
            for (int a : {0, 1})
                push({pos[static_cast<size_t>(a)], pos[static_cast<size_t>(1 - a)], neg[0], m4});
            break;
        }
        case FieldType::III: {
            if (neg.size() != 4 || m4 != -1)
                throw domain_error("Type III profile needs four odd negative parts");
            std::array<int, 4> perm{neg[0], neg[1], neg[2], neg[3]};
            std::sort(perm.begin(), perm.end());
            do {
                push(perm);
            } while (std::next_permutation(perm.begin(), perm.end()));
            break;
        }
        case FieldType::IV: {
            if (neg.size() != 3 || m4 < 0)
                throw domain_error("Type IV profile needs three odd negatives and -4");
            std::array<int, 3> odd{neg[0], neg[1], neg[2]};
            std::sort(odd.begin(), odd.end());
            do {
                push({odd[0], odd[1], odd[2], m4});
            } while (std::next_permutation(odd.begin(), odd.end()));
            break;
        }
    }
    return out;
}

} // namespace classify_detail

/// Match the profile against the canonical case table; returns the case and
/// the lexicographically least permutation realizing the table row.
inline CaseLabel classify_case(const SymbolProfile& prof) {
    auto perms = classify_detail::allowed_permutations(prof);
    std::optional<CaseLabel> best;
    std::set<std::string> matched_names;
    for (const auto& row : appendix1()) {
        if (row.type != prof.type) continue;
        for (const auto& perm : perms) {
            bool ok = true;
            for (int i = 0; i < 4 && ok; ++i) {
                for (int j = i + 1; j < 4 && ok; ++j) {
                    int want = row.s[static_cast<size_t>(classify_detail::pair_column(i, j))];
                    if (want == 0) continue;
                    int bit = prof.nu[static_cast<size_t>(perm[static_cast<size_t>(i)])]
                                     [static_cast<size_t>(perm[static_cast<size_t>(j)])];
                    if ((bit == 1 ? -1 : 1) != want) ok = false;
                }
            }
            if (!ok) continue;
            matched_names.insert(row.name);
            if (matched_names.size() > 1)
                throw inconsistency_error("profile matches more than one case (" +
                                          *matched_names.begin() + ", " + row.name + ")");
            if (!best || perm < best->permutation) best = CaseLabel{prof.type, row.name, perm};
        }
    }
    if (!best) throw inconsistency_error("profile matches no case row");
    return *best;
}

/// 4-rank of the narrow class group from C4-splittings, evaluated on the
/// symbol matrix alone (no arithmetic beyond the profile).
inline int four_rank_profile(const SymbolProfile& prof) {
    int count = 0;
    for (unsigned mask = 0; mask < 8; ++mask) {
        // S = {0} union mask over slots 1..3
        auto in_S = [&](int i) { return i == 0 || (i > 0 && (mask & (1u << (i - 1)))); };
        bool ok = true;
        for (int j = 0; j < 4 && ok; ++j) {
            if (in_S(j)) continue;
            int sum = 0;
            for (int i = 0; i < 4; ++i)
                if (in_S(i)) sum ^= prof.nu[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (sum != 0) ok = false;
        }
        for (int i = 0; i < 4 && ok; ++i) {
            if (!in_S(i)) continue;
            int sum = 0;
            for (int j = 0; j < 4; ++j)
                if (!in_S(j)) sum ^= prof.nu[static_cast<size_t>(j)][static_cast<size_t>(i)];
            if (sum != 0) ok = false;
        }
        if (ok) ++count;
    }
    int r = 0;
    while ((1 << (r + 1)) <= count) ++r;
    if ((1 << r) != count)
        throw inconsistency_error("four_rank_profile: splitting count is not a power of two");
    return r;
}

/// Recount the diagram census for a type: every normalized sign assignment
/// of the type's free symbol bits is classified and tallied. Returned in
/// table row order.
inline std::vector<std::pair<std::string, int>> diagram_census(FieldType type) {
    // free columns per type (table column order s12 s13 s23 s14 s24 s34),
    // remaining columns fixed by the normalization
    std::vector<int> free_cols;
    std::array<int, 6> base{}; // bits of the fixed columns
    switch (type) {
        case FieldType::I:
            free_cols = {0, 1, 2, 3, 4};
            base[5] = 0; // s34 = +
            break;
        case FieldType::II:
            free_cols = {0, 1, 2, 3, 4}; // s34 merged: census over 2^5
            base[5] = 0;
            break;
        case FieldType::III:
            free_cols = {1, 2, 4};
            base[0] = 1; // s12 = -
            base[3] = 1; // s14 = -
            base[5] = 0; // s34 = +
            break;
        case FieldType::IV:
            free_cols = {1, 3, 4, 5};
            base[0] = 1; // s12 = -
            base[2] = 1; // s23 = -
            break;
    }
    std::map<std::string, int> counts;
    for (unsigned mask = 0; mask < (1u << free_cols.size()); ++mask) {
        std::array<int, 6> bits = base;
        for (size_t b = 0; b < free_cols.size(); ++b)
            bits[static_cast<size_t>(free_cols[b])] = (mask >> b) & 1u;
        CaseLabel label = classify_case(abstract_profile(type, bits));
        ++counts[label.name];
    }
    std::vector<std::pair<std::string, int>> out;
    for (const auto& row : appendix1())
        if (row.type == type && counts.count(row.name))
            out.emplace_back(row.name, counts.at(row.name));
    int total = 0;
    for (const auto& [name, c] : out) total += c;
    if (total != static_cast<int>(1u << free_cols.size()))
        throw inconsistency_error("diagram census total mismatch");
    size_t rows_of_type = 0;
    for (const auto& row : appendix1())
        if (row.type == type) ++rows_of_type;
    if (out.size() != rows_of_type)
        throw inconsistency_error("diagram census misses a case of the type");
    return out;
}

// ---------------------------------------------------------------------------
// Taussky conditions
// ---------------------------------------------------------------------------

enum class GType { V4, Q, Qg, D, S };

inline std::string to_string(GType t) {
    switch (t) {
        case GType::V4: return "V4";
        case GType::Q: return "Q";
        case GType::Qg: return "Qg";
        case GType::D: return "D";
        case GType::S: return "S";
    }
    throw domain_error("to_string: bad GType");
}

inline GType gtype_from_string(const std::string& s) {
    if (s == "V4") return GType::V4;
    if (s == "Q") return GType::Q;
    if (s == "Qg") return GType::Qg;
    if (s == "D") return GType::D;
    if (s == "S") return GType::S;
    throw domain_error("unknown group type token '" + s + "'");
}

struct TausskyResult {
    GType type{};
    std::array<char, 3> tags{}; ///< per extension: '4', 'A' or 'B'
};

namespace classify_detail {

/// Subgroups of F_2^2 as bitmasks over the elements {0, 1, 2, 3}.
inline bool is_f4_subgroup(unsigned mask) {
    if (!(mask & 1u)) return false; // must contain 0
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            if ((mask >> x & 1u) && (mask >> y & 1u) && !(mask >> (x ^ y) & 1u)) return false;
    return true;
}

inline int f4_order(unsigned mask) { return __builtin_popcount(mask); }

inline std::optional<GType> taussky_multiset(const std::array<char, 3>& tags) {
    int n4 = 0, nA = 0, nB = 0;
    for (char t : tags) {
        if (t == '4') ++n4;
        else if (t == 'A') ++nA;
        else ++nB;
    }
    if (n4 == 3) return GType::V4;
    if (nA == 3) return GType::Q;
    if (nA == 1 && nB == 2) return GType::Qg;
    if (n4 == 1 && nB == 2) return GType::D;
    if (nB == 3) return GType::S;
    return std::nullopt;
}

} // namespace classify_detail

/// Classify G = Gal(k^2/k) from the Taussky conditions: for each of the
/// three unramified quadratic extensions k_i, kernel_masks[i] is ker j_i and
/// norm_masks[i] is N(Cl_2(k_i)), both as subgroups of Cl_2(k) = F_2^2.
/// Tags: '4' when |ker j_i| = 4, else 'A' when ker meets the norm subgroup
/// nontrivially (condition A), else 'B'.
inline TausskyResult taussky_classify(const std::array<unsigned, 3>& kernel_masks,
                                      const std::array<unsigned, 3>& norm_masks) {
    TausskyResult out;
    for (int i = 0; i < 3; ++i) {
        unsigned ker = kernel_masks[static_cast<size_t>(i)];
        unsigned nrm = norm_masks[static_cast<size_t>(i)];
        if (!classify_detail::is_f4_subgroup(ker) || !classify_detail::is_f4_subgroup(nrm))
            throw domain_error("taussky_classify: masks must be subgroups of (2,2)");
        int ko = classify_detail::f4_order(ker);
        if (ko == 4) {
            out.tags[static_cast<size_t>(i)] = '4';
        } else if (ko == 2) {
            bool meets = (ker & nrm & ~1u) != 0;
            out.tags[static_cast<size_t>(i)] = meets ? 'A' : 'B';
        } else {
            throw domain_error("taussky_classify: ker j_i cannot be trivial");
        }
    }
    auto t = classify_detail::taussky_multiset(out.tags);
    if (!t)
        throw domain_error("taussky_classify: tag multiset {" +
                           std::string(out.tags.begin(), out.tags.end()) +
                           "} matches no admissible group type");
    out.type = *t;
    return out;
}

// ---------------------------------------------------------------------------
// the Galois structure pipeline (types I and II, 4-rank zero)
// ---------------------------------------------------------------------------

struct GaloisReport {
    CaseLabel label;
    SymbolProfile profile; ///< canonical arrangement
    int four_rank = 0;
    bool full = false; ///< true when the appendix-2 pipeline applies (I/II lowercase)

    // computed arithmetic (full reports only)
    i64 delta = 0, delta1 = 0, delta2 = 0;
    int neps12 = 0;
    bool round_first = true;
    std::array<std::string, 3> norm_tokens, kernel_tokens;
    std::array<int, 3> q{};
    std::array<i64, 3> h2k{};
    std::array<char, 3> taussky_tags{};
    GType gtype{};
    i64 gorder = 0;
    std::string glabel;
    i64 h2_field = 0;
};

namespace classify_detail {

inline std::vector<i64> eval_alternatives(const std::string& leaf, const std::array<i64, 4>& p) {
    std::vector<i64> out;
    for (const auto& alt : tbl::split(leaf, '/')) out.push_back(eval_product_token(alt, p));
    return out;
}

inline bool contains(const std::vector<i64>& v, i64 x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

/// Parse a subgroup token over the two basis letters into an F_2^2 mask:
/// elements are '+'-joined products of the letters ("p1p3", "q", "p1+q").
inline unsigned subgroup_mask_from_token(const std::string& token, const std::string& l1,
                                         const std::string& l2) {
    auto letter_vec = [&](const std::string& letter) -> unsigned {
        if (letter == l1) return 1u;
        if (letter == l2) return 2u;
        throw inconsistency_error("subgroup token letter '" + letter +
                                  "' is not one of the case generators");
    };
    unsigned mask = 1u; // identity
    for (const auto& elem : tbl::split(token, '+')) {
        unsigned vec = 0;
        size_t i = 0;
        while (i < elem.size()) {
            std::string letter;
            if (elem[i] == 'p' && i + 1 < elem.size()) {
                letter = elem.substr(i, 2);
                i += 2;
            } else if (elem[i] == 'q') {
                letter = "q";
                i += 1;
            } else {
                throw inconsistency_error("bad subgroup token '" + token + "'");
            }
            vec ^= letter_vec(letter);
        }
        // close the span under the new element
        unsigned grown = mask;
        for (int x = 0; x < 4; ++x)
            if (mask >> x & 1u) grown |= 1u << (static_cast<unsigned>(x) ^ vec);
        mask = grown;
    }
    return mask;
}

inline i64 eval_h_token(const std::string& tok, const std::array<i64, 4>& d) {
    HToken h = parse_h_token(tok);
    if (h.subset.empty()) return h.coefficient;
    i64 disc = 1;
    for (int s : h.subset) disc *= d[static_cast<size_t>(s - 1)];
    return h.coefficient * h2_wide(disc);
}

} // namespace classify_detail

/// Full Galois structure of k^2/k. Types III and IV short-circuit (there
/// k^2 = k^1 and G = (2,2)); types I and II run the complete pipeline
/// against the structure table, throwing inconsistency_error if any
/// independently computed value disagrees with it.
inline GaloisReport galois_k2_report(const FactoredDiscriminant& fd) {
    SymbolProfile prof0 = symbol_profile(fd);
    CaseLabel label = classify_case(prof0);
    SymbolProfile prof = reorder_profile(prof0, label.permutation);
    GaloisReport rep;
    rep.label = label;
    rep.profile = prof;
    rep.four_rank = four_rank_profile(prof);
    {
        const auto& row1 = appendix1_row(label.type, label.name);
        if (row1.rank4 != rep.four_rank)
            throw inconsistency_error("4-rank disagrees with the case table");
    }
    if (!is_lowercase_case(label.name))
        throw domain_error("galois_k2_report: case " + label.name +
                           " has positive 4-rank; the structure table does not apply");
    if (label.type == FieldType::III || label.type == FieldType::IV) {
        rep.full = false;
        rep.gtype = GType::V4;
        rep.gorder = 4;
        rep.glabel = appendix3_row(label.name).group;
        return rep;
    }

    const Appendix2Row& row = appendix2_row(label.name);
    const std::array<i64, 4>& d = prof.d;
    const std::array<i64, 4>& p = prof.p;

    // 0. the profile must reproduce the row's nu data
    static constexpr std::array<std::pair<int, int>, 6> pairs{
        {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}}};
    for (size_t c = 0; c < 6; ++c) {
        int want = row.nu[c];
        if (want == -1) continue; // 'B': both occur
        int got = prof.nu[static_cast<size_t>(pairs[c].first)][static_cast<size_t>(pairs[c].second)];
        if (got != want)
            throw inconsistency_error("profile nu" + std::to_string(pairs[c].first + 1) +
                                      std::to_string(pairs[c].second + 1) +
                                      " disagrees with the structure table");
    }
    int nu34 = prof.nu[2][3];

    // 1. unit computations (each delta checked against the genus characters)
    auto checked_delta = [&](const std::vector<PrimeDiscriminant>& parts) -> i64 {
        i64 disc = 1;
        for (const auto& pd : parts) disc *= pd.value;
        UnitDelta du = delta_of_unit(disc);
        if (du.norm_is_minus_one)
            throw inconsistency_error("unit of " + std::to_string(disc) +
                                      " has norm -1 in a case where +1 is forced");
        if (!classify_detail::contains(delta_via_genus(parts), du.delta))
            throw inconsistency_error("delta(eps) of " + std::to_string(disc) +
                                      " is not a genus-character candidate");
        return du.delta;
    };
    auto part_of = [&](int slot) -> PrimeDiscriminant {
        return PrimeDiscriminant{d[static_cast<size_t>(slot)], p[static_cast<size_t>(slot)]};
    };
    rep.delta = checked_delta({part_of(0), part_of(1), part_of(2), part_of(3)});
    rep.delta1 = checked_delta({part_of(1), part_of(2), part_of(3)});
    rep.delta2 = checked_delta({part_of(0), part_of(2), part_of(3)});
    rep.neps12 = fundamental_unit(d[0] * d[1]).norm;

    // 2. resolve the branches
    bool neps_branched = !row.neps.is_leaf();
    if (neps_branched != (row.nu[0] == 0))
        throw inconsistency_error("structure table: unit norm branch inconsistent with nu12");
    if (!neps_branched && rep.neps12 != -1)
        throw inconsistency_error("unit norm of Q(sqrt(d1 d2)) must be -1 when (d1/p2) = -1");
    bool round_first = true;
    BranchCell d2cell = row.delta2.resolve_square(nu34);
    if (neps_branched) {
        round_first = (rep.neps12 == -1);
    } else if (!d2cell.is_leaf()) {
        auto first_alts =
            classify_detail::eval_alternatives(d2cell.arms[0].resolve(nu34, true), p);
        auto second_alts =
            classify_detail::eval_alternatives(d2cell.arms[1].resolve(nu34, false), p);
        if (classify_detail::contains(first_alts, rep.delta2))
            round_first = true;
        else if (classify_detail::contains(second_alts, rep.delta2))
            round_first = false;
        else
            throw inconsistency_error("computed delta2 matches neither branch of the table");
    }
    rep.round_first = round_first;
    auto resolved = [&](const BranchCell& cell) { return cell.resolve(nu34, round_first); };

    // 3. the delta columns must reproduce the computed values
    if (!classify_detail::contains(classify_detail::eval_alternatives(resolved(row.delta), p),
                                   rep.delta))
        throw inconsistency_error("computed delta(eps_k) disagrees with the structure table");
    if (!classify_detail::contains(classify_detail::eval_alternatives(resolved(row.delta1), p),
                                   rep.delta1))
        throw inconsistency_error("computed delta1 disagrees with the structure table");
    if (!classify_detail::contains(classify_detail::eval_alternatives(resolved(row.delta2), p),
                                   rep.delta2))
        throw inconsistency_error("computed delta2 disagrees with the structure table");

    // 4. norm and kernel subgroups over the case's generator basis
    std::string gens_tok = resolved(row.gens);
    auto basis = tbl::split(gens_tok, '+');
    if (basis.size() != 2)
        throw inconsistency_error("structure table generators must have rank 2");
    std::array<unsigned, 3> norm_masks{}, kernel_masks{};
    for (int i = 0; i < 3; ++i) {
        rep.norm_tokens[static_cast<size_t>(i)] = resolved(row.N[static_cast<size_t>(i)]);
        rep.kernel_tokens[static_cast<size_t>(i)] = resolved(row.K[static_cast<size_t>(i)]);
        norm_masks[static_cast<size_t>(i)] = classify_detail::subgroup_mask_from_token(
            rep.norm_tokens[static_cast<size_t>(i)], basis[0], basis[1]);
        kernel_masks[static_cast<size_t>(i)] = classify_detail::subgroup_mask_from_token(
            rep.kernel_tokens[static_cast<size_t>(i)], basis[0], basis[1]);
        if (classify_detail::f4_order(norm_masks[static_cast<size_t>(i)]) != 2)
            throw inconsistency_error("norm subgroup must have index 2 in Cl_2(k)");
    }

    // 5. Taussky conditions; the resulting type must match the table
    TausskyResult tr = taussky_classify(kernel_masks, norm_masks);
    rep.taussky_tags = tr.tags;
    rep.gtype = tr.type;
    if (to_string(tr.type) != resolved(row.gtype))
        throw inconsistency_error("Taussky classification disagrees with the table type " +
                                  resolved(row.gtype));

    // 6. class numbers: table h-tokens, checked against Kuroda's formula
    rep.h2_field = h2_wide(fd.value);
    if (rep.h2_field != 4)
        throw inconsistency_error("h_2(k) must be 4 in the 4-rank-zero cases");
    // the three unramified quadratic extensions as pairs of sub-discriminants
    std::array<std::pair<i64, i64>, 3> split_discs{
        std::pair<i64, i64>{d[0], d[1] * d[2] * d[3]},
        std::pair<i64, i64>{d[1], d[0] * d[2] * d[3]},
        std::pair<i64, i64>{d[0] * d[1], d[2] * d[3]},
    };
    for (int i = 0; i < 3; ++i) {
        std::string qtok = resolved(row.q[static_cast<size_t>(i)]);
        i64 qv = eval_product_token(qtok, p); // plain integers 1 or 2
        if (qv != 1 && qv != 2)
            throw inconsistency_error("unit index q(k_i) must be 1 or 2");
        rep.q[static_cast<size_t>(i)] = static_cast<int>(qv);
        i64 hv = classify_detail::eval_h_token(resolved(row.h[static_cast<size_t>(i)]), d);
        rep.h2k[static_cast<size_t>(i)] = hv;
        auto [dx, dy] = split_discs[static_cast<size_t>(i)];
        i64 kuroda = qv * rep.h2_field * h2_wide(dx) * h2_wide(dy) / 4;
        if (hv != kuroda)
            throw inconsistency_error("h_2(k_" + std::to_string(i + 1) +
                                      ") violates Kuroda's class number formula");
    }

    // 7. group order and tower label
    rep.gorder = classify_detail::eval_h_token(resolved(row.gorder), d);
    if (rep.gtype == GType::V4 && rep.gorder != 4)
        throw inconsistency_error("type V4 forces |G| = 4");
    if (rep.gtype == GType::Q && rep.gorder != 8)
        throw inconsistency_error("type Q forces |G| = 8");
    if ((rep.gtype == GType::Qg || rep.gtype == GType::D || rep.gtype == GType::S) &&
        (rep.gorder < 8 || rep.gorder % 4 != 0))
        throw inconsistency_error("metacyclic |G| must be a multiple of 4, at least 8");
    rep.glabel = row.glabel;
    {
        const auto& row3 = appendix3_row(label.name);
        if (row3.group != row.glabel)
            throw inconsistency_error("structure and presentation tables disagree on the label");
    }
    rep.full = true;
    return rep;
}

} // namespace narrowtower
