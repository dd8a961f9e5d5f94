#pragma once

// Loaders and parsers for the four embedded data tables:
//
//   appendix1.tbl  canonical case table (types I-IV, 56 cases)
//   appendix2.tbl  Galois structure of k^2/k for the 26 lowercase I/II cases
//   appendix3.tbl  presentations of G+/G_3+ for all 37 lowercase cases
//   table1.tbl     the nine order-32 reference groups
//
// The tables are compiled in via the generated header embedded_tables.hpp;
// setting NARROWTOWER_DATA=<dir> loads <dir>/<name>.tbl instead (useful for
// experiments). Format: '#' comments, blank lines ignored, fields separated
// by '|'. Malformed lines are rejected with their table name and line number.
//
// Branched cells ([X;Y] resolved by nu34, (X;Y) resolved by the unit norm or
// by the computed delta2 -- see appendix2.tbl's header) parse into BranchCell
// trees here; resolution happens in towerclassify.hpp where the resolving
// arithmetic lives.

#include "narrowtower/errors.hpp"
#include "narrowtower/intarith.hpp"
#include "narrowtower/embedded_tables.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace narrowtower {

enum class FieldType { I, II, III, IV };

inline std::string to_string(FieldType t) {
    switch (t) {
        case FieldType::I: return "I";
        case FieldType::II: return "II";
        case FieldType::III: return "III";
        case FieldType::IV: return "IV";
    }
    throw domain_error("to_string: bad FieldType");
}

inline FieldType field_type_from_string(const std::string& s) {
    if (s == "I") return FieldType::I;
    if (s == "II") return FieldType::II;
    if (s == "III") return FieldType::III;
    if (s == "IV") return FieldType::IV;
    throw domain_error("unknown field type '" + s + "'");
}

// ---------------------------------------------------------------------------
// low-level parsing
// ---------------------------------------------------------------------------

namespace tbl {

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct RawRow {
    int line = 0;
    std::vector<std::string> fields;
};

[[noreturn]] inline void fail(const std::string& table, int line, const std::string& what) {
    throw domain_error(table + ":" + std::to_string(line) + ": " + what);
}

/// Split a table text into rows of '|'-separated fields; '#' starts a
/// comment, blank lines are skipped, field counts are enforced.
inline std::vector<RawRow> parse_pipe_table(const std::string& table, const std::string& text,
                                            size_t ncols) {
    std::vector<RawRow> rows;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        RawRow row;
        row.line = lineno;
        row.fields = split(t, '|');
        if (row.fields.size() != ncols)
            fail(table, lineno,
                 "expected " + std::to_string(ncols) + " fields, got " +
                     std::to_string(row.fields.size()));
        for (const auto& f : row.fields)
            if (f.empty()) fail(table, lineno, "empty field");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(table, lineno, "table has no data rows");
    return rows;
}

inline int parse_int(const std::string& table, int line, const std::string& s) {
    try {
        size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) fail(table, line, "trailing junk in integer '" + s + "'");
        return v;
    } catch (const domain_error&) {
        throw;
    } catch (const std::exception&) {
        fail(table, line, "bad integer '" + s + "'");
    }
}

inline int parse_sign(const std::string& table, int line, const std::string& s) {
    if (s == "+") return 1;
    if (s == "-") return -1;
    if (s == "0") return 0;
    fail(table, line, "bad sign '" + s + "' (want + - or 0)");
}

/// Comma-separated list of 0/1 bits of fixed length.
template <size_t N>
inline std::array<int, N> parse_bits(const std::string& table, int line, const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != N)
        fail(table, line, "expected " + std::to_string(N) + " comma-separated bits in '" + s + "'");
    std::array<int, N> out{};
    for (size_t i = 0; i < N; ++i) {
        int v = parse_int(table, line, parts[i]);
        if (v != 0 && v != 1) fail(table, line, "bit out of range in '" + s + "'");
        out[i] = v;
    }
    return out;
}

} // namespace tbl

// ---------------------------------------------------------------------------
// branched cells
// ---------------------------------------------------------------------------

/// A table cell that may branch: leaves are verbatim token strings (possibly
/// with '/' alternatives), '[X;Y]' branches on nu34 (X for nu34 = 1) and
/// '(X;Y)' branches on the norm of eps_12 (X for -1) or on the computed
/// delta2, depending on the row.
struct BranchCell {
    enum class Kind { Leaf, Square, Round };
    Kind kind = Kind::Leaf;
    std::string leaf;
    std::vector<BranchCell> arms; // exactly two for Square/Round

    bool is_leaf() const { return kind == Kind::Leaf; }

    bool has_square() const {
        if (kind == Kind::Square) return true;
        for (const auto& a : arms)
            if (a.has_square()) return true;
        return false;
    }
    bool has_round() const {
        if (kind == Kind::Round) return true;
        for (const auto& a : arms)
            if (a.has_round()) return true;
        return false;
    }

    /// Apply only the nu34 resolution (nu34 must be 0 or 1).
    BranchCell resolve_square(int nu34) const {
        if (kind == Kind::Leaf) return *this;
        if (kind == Kind::Square) return arms[static_cast<size_t>(nu34 == 1 ? 0 : 1)].resolve_square(nu34);
        BranchCell out;
        out.kind = Kind::Round;
        out.arms = {arms[0].resolve_square(nu34), arms[1].resolve_square(nu34)};
        return out;
    }

    /// Fully resolve to a leaf; round_first selects the first round arm.
    std::string resolve(int nu34, bool round_first) const {
        switch (kind) {
            case Kind::Leaf: return leaf;
            case Kind::Square:
                return arms[static_cast<size_t>(nu34 == 1 ? 0 : 1)].resolve(nu34, round_first);
            case Kind::Round:
                return arms[static_cast<size_t>(round_first ? 0 : 1)].resolve(nu34, round_first);
        }
        throw domain_error("BranchCell::resolve: bad kind");
    }
};

namespace tbl {

inline BranchCell parse_cell_rec(const std::string& table, int line, const std::string& s,
                                 size_t& pos);

inline BranchCell parse_branch_pair(const std::string& table, int line, const std::string& s,
                                    size_t& pos, char open, char close,
                                    BranchCell::Kind kind) {
    BranchCell out;
    out.kind = kind;
    ++pos; // consume open
    out.arms.push_back(parse_cell_rec(table, line, s, pos));
    if (pos >= s.size() || s[pos] != ';')
        fail(table, line, std::string("expected ';' inside '") + open + "...'" + close);
    ++pos;
    out.arms.push_back(parse_cell_rec(table, line, s, pos));
    if (pos >= s.size() || s[pos] != close)
        fail(table, line, std::string("unbalanced '") + open + "' in cell '" + s + "'");
    ++pos;
    return out;
}

inline BranchCell parse_cell_rec(const std::string& table, int line, const std::string& s,
                                 size_t& pos) {
    if (pos >= s.size()) fail(table, line, "empty branch arm in cell '" + s + "'");
    if (s[pos] == '[') return parse_branch_pair(table, line, s, pos, '[', ']', BranchCell::Kind::Square);
    if (s[pos] == '(') return parse_branch_pair(table, line, s, pos, '(', ')', BranchCell::Kind::Round);
    // a leaf runs to the next top-level ';', ']' or ')'; balanced '(...)'
    // groups inside it (e.g. h2(134)) are part of the token
    BranchCell out;
    size_t start = pos;
    int depth = 0;
    while (pos < s.size()) {
        char c = s[pos];
        if (depth == 0 && (c == ';' || c == ']' || c == ')')) break;
        if (c == '[') fail(table, line, "square branch inside a leaf in cell '" + s + "'");
        if (c == '(') ++depth;
        if (c == ')') --depth;
        ++pos;
    }
    if (depth != 0) fail(table, line, "unbalanced parentheses in cell '" + s + "'");
    out.leaf = trim(s.substr(start, pos - start));
    if (out.leaf.empty()) fail(table, line, "empty leaf in cell '" + s + "'");
    return out;
}

inline BranchCell parse_cell(const std::string& table, int line, const std::string& s) {
    size_t pos = 0;
    BranchCell out = parse_cell_rec(table, line, s, pos);
    if (pos != s.size()) fail(table, line, "trailing junk in cell '" + s + "'");
    return out;
}

} // namespace tbl

// ---------------------------------------------------------------------------
// token evaluation (value grammar shared by appendix2/appendix3 consumers)
// ---------------------------------------------------------------------------

/// Evaluate a product token over {1, 2, q, p1..p4} to an integer, given the
/// ramified primes p[0..3]: "p1p3" -> p1*p3, "2p3" -> 2*p3, "q" -> 2.
inline i64 eval_product_token(const std::string& tok, const std::array<i64, 4>& p) {
    if (tok.empty()) throw domain_error("empty product token");
    i64 v = 1;
    size_t i = 0;
    while (i < tok.size()) {
        char c = tok[i];
        if (c == 'p') {
            if (i + 1 >= tok.size() || tok[i + 1] < '1' || tok[i + 1] > '4')
                throw domain_error("bad prime index in token '" + tok + "'");
            v *= p[static_cast<size_t>(tok[i + 1] - '1')];
            i += 2;
        } else if (c == 'q') {
            v *= 2;
            i += 1;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
            v *= std::stoll(tok.substr(i, j - i));
            i = j;
        } else {
            throw domain_error("bad character '" + std::string(1, c) + "' in token '" + tok + "'");
        }
    }
    return v;
}

/// An h-column token: coefficient times h_2 of the product of a subset of
/// the d_i ("4", "2h2(12)", "h2(134)").
struct HToken {
    i64 coefficient = 1;
    std::vector<int> subset; ///< 1-based part indices; empty = plain integer
};

inline HToken parse_h_token(const std::string& tok) {
    HToken out;
    size_t i = 0;
    if (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) {
        size_t j = i;
        while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
        out.coefficient = std::stoll(tok.substr(i, j - i));
        i = j;
    }
    if (i == tok.size()) return out; // plain integer
    if (tok.compare(i, 3, "h2(") != 0 || tok.back() != ')')
        throw domain_error("bad h token '" + tok + "'");
    for (size_t j = i + 3; j + 1 < tok.size(); ++j) {
        if (tok[j] < '1' || tok[j] > '4') throw domain_error("bad subset digit in '" + tok + "'");
        out.subset.push_back(tok[j] - '0');
    }
    if (out.subset.empty()) throw domain_error("empty subset in h token '" + tok + "'");
    return out;
}

/// Split a word token on '*' ("t12*t13" -> {"t12","t13"}); "1" and "-" give
/// the empty word.
inline std::vector<std::string> split_word_token(const std::string& tok) {
    if (tok == "1" || tok == "-") return {};
    return tbl::split(tok, '*');
}

// ---------------------------------------------------------------------------
// table row types
// ---------------------------------------------------------------------------

struct Appendix1Row {
    FieldType type{};
    std::string name;
    int rank4 = 0;
    int census = 0;
    /// s12,s13,s23,s14,s24,s34 as +-1; 0 where the type merges both values
    std::array<int, 6> s{};
};

struct Appendix2Row {
    std::string name;
    std::array<int, 6> nu{}; ///< nu12,nu13,nu23,nu14,nu24,nu34; nu34 = -1 for 'B'
    bool nu34_branches = false;
    BranchCell delta, delta1, delta2, neps, gens;
    std::array<BranchCell, 3> N, K, q, h;
    BranchCell gtype, gorder;
    std::string glabel;
};

struct Appendix3Row {
    std::string name;
    std::array<int, 3> nu{};    ///< nu12, nu13, nu23
    std::array<int, 3> mu{};    ///< mu1, mu2, mu3 (= nu_i4)
    std::array<int, 3> delta{}; ///< delta_1, delta_2, delta_3
    std::array<std::string, 3> ssq;       ///< s_i^2 as words in t12,t13,t23 ("1" = trivial)
    std::vector<std::string> textra;      ///< extra relators (words in tij), may be empty
    std::array<std::string, 3> transform; ///< a_i as words in s1..s3 ("-" = s_i)
    std::array<std::string, 3> asq;       ///< a_i^2 as words in c12, c13, c23
    std::vector<std::string> aextra;      ///< extra c-relators
    std::string group;                    ///< reference label (32.xxx / 64.xxx)
};

struct Table1Row {
    std::string label;
    std::array<std::string, 3> asq; ///< a_i^2 as words in c12, c13 ("1" = trivial)
};

// ---------------------------------------------------------------------------
// loading
// ---------------------------------------------------------------------------

namespace tbl {

inline std::string load_table_text(const std::string& name, const char* embedded) {
    if (const char* dir = std::getenv("NARROWTOWER_DATA"); dir != nullptr && *dir != '\0') {
        std::string path = std::string(dir) + "/" + name;
        std::ifstream in(path);
        if (!in) throw domain_error("NARROWTOWER_DATA set but cannot read " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return std::string(embedded);
}

} // namespace tbl

inline const std::vector<Appendix1Row>& appendix1() {
    static const std::vector<Appendix1Row> rows = [] {
        const std::string table = "appendix1.tbl";
        auto raw = tbl::parse_pipe_table(table, tbl::load_table_text(table, embedded::appendix1), 10);
        std::vector<Appendix1Row> out;
        for (const auto& r : raw) {
            Appendix1Row row;
            row.type = field_type_from_string(r.fields[0]);
            row.name = r.fields[1];
            row.rank4 = tbl::parse_int(table, r.line, r.fields[2]);
            row.census = tbl::parse_int(table, r.line, r.fields[3]);
            if (row.rank4 < 0 || row.rank4 > 2) tbl::fail(table, r.line, "rank4 out of range");
            if (row.census < 1) tbl::fail(table, r.line, "census out of range");
            for (int i = 0; i < 6; ++i)
                row.s[static_cast<size_t>(i)] =
                    tbl::parse_sign(table, r.line, r.fields[static_cast<size_t>(4 + i)]);
            out.push_back(std::move(row));
        }
        if (out.size() != 56)
            throw inconsistency_error("appendix1.tbl: expected 56 rows, got " +
                                      std::to_string(out.size()));
        return out;
    }();
    return rows;
}

inline const std::vector<Appendix2Row>& appendix2() {
    static const std::vector<Appendix2Row> rows = [] {
        const std::string table = "appendix2.tbl";
        auto raw = tbl::parse_pipe_table(table, tbl::load_table_text(table, embedded::appendix2), 22);
        std::vector<Appendix2Row> out;
        for (const auto& r : raw) {
            Appendix2Row row;
            size_t f = 0;
            row.name = r.fields[f++];
            {
                auto parts = tbl::split(r.fields[f++], ',');
                if (parts.size() != 6) tbl::fail(table, r.line, "nu needs 6 entries");
                for (size_t i = 0; i < 6; ++i) {
                    if (i == 5 && parts[i] == "B") {
                        row.nu[i] = -1;
                        row.nu34_branches = true;
                    } else {
                        int v = tbl::parse_int(table, r.line, parts[i]);
                        if (v != 0 && v != 1) tbl::fail(table, r.line, "nu bit out of range");
                        row.nu[i] = v;
                    }
                }
            }
            auto cell = [&](size_t idx) { return tbl::parse_cell(table, r.line, r.fields[idx]); };
            row.delta = cell(f++);
            row.delta1 = cell(f++);
            row.delta2 = cell(f++);
            row.neps = cell(f++);
            row.gens = cell(f++);
            for (auto& n : row.N) n = cell(f++);
            for (auto& k : row.K) k = cell(f++);
            for (auto& q : row.q) q = cell(f++);
            for (auto& h : row.h) h = cell(f++);
            row.gtype = cell(f++);
            row.gorder = cell(f++);
            row.glabel = r.fields[f++];
            // structural sanity: square branches only in nu34-branching rows
            bool any_square = row.delta.has_square() || row.delta1.has_square() ||
                              row.delta2.has_square();
            if (any_square && !row.nu34_branches)
                tbl::fail(table, r.line, "square branch without nu34 = B");
            out.push_back(std::move(row));
        }
        if (out.size() != 26)
            throw inconsistency_error("appendix2.tbl: expected 26 rows, got " +
                                      std::to_string(out.size()));
        return out;
    }();
    return rows;
}

inline const std::vector<Appendix3Row>& appendix3() {
    static const std::vector<Appendix3Row> rows = [] {
        const std::string table = "appendix3.tbl";
        auto raw = tbl::parse_pipe_table(table, tbl::load_table_text(table, embedded::appendix3), 10);
        std::vector<Appendix3Row> out;
        for (const auto& r : raw) {
            Appendix3Row row;
            row.name = r.fields[0];
            row.nu = tbl::parse_bits<3>(table, r.line, r.fields[1]);
            row.mu = tbl::parse_bits<3>(table, r.line, r.fields[2]);
            row.delta = tbl::parse_bits<3>(table, r.line, r.fields[3]);
            {
                auto parts = tbl::split(r.fields[4], ',');
                if (parts.size() != 3) tbl::fail(table, r.line, "ssq needs 3 words");
                for (size_t i = 0; i < 3; ++i) row.ssq[i] = parts[i];
            }
            if (r.fields[5] != "-")
                for (const auto& w : tbl::split(r.fields[5], ','))
                    row.textra.push_back(w);
            if (r.fields[6] == "-") {
                row.transform = {"s1", "s2", "s3"};
            } else {
                auto parts = tbl::split(r.fields[6], ',');
                if (parts.size() != 3) tbl::fail(table, r.line, "transform needs 3 assignments");
                for (size_t i = 0; i < 3; ++i) {
                    std::string expect = "a" + std::to_string(i + 1) + "=";
                    if (parts[i].rfind(expect, 0) != 0)
                        tbl::fail(table, r.line, "transform must assign " + expect + "...");
                    row.transform[i] = parts[i].substr(expect.size());
                }
            }
            {
                auto parts = tbl::split(r.fields[7], ',');
                if (parts.size() != 3) tbl::fail(table, r.line, "asq needs 3 words");
                for (size_t i = 0; i < 3; ++i) row.asq[i] = parts[i];
            }
            row.aextra.clear();
            if (r.fields[8] != "-")
                for (const auto& w : tbl::split(r.fields[8], ','))
                    row.aextra.push_back(w);
            row.group = r.fields[9];
            out.push_back(std::move(row));
        }
        if (out.size() != 37)
            throw inconsistency_error("appendix3.tbl: expected 37 rows, got " +
                                      std::to_string(out.size()));
        return out;
    }();
    return rows;
}

inline const std::vector<Table1Row>& table1() {
    static const std::vector<Table1Row> rows = [] {
        const std::string table = "table1.tbl";
        auto raw = tbl::parse_pipe_table(table, tbl::load_table_text(table, embedded::table1), 4);
        std::vector<Table1Row> out;
        for (const auto& r : raw) {
            Table1Row row;
            row.label = r.fields[0];
            for (size_t i = 0; i < 3; ++i) row.asq[i] = r.fields[1 + i];
            out.push_back(std::move(row));
        }
        if (out.size() != 9)
            throw inconsistency_error("table1.tbl: expected 9 rows, got " +
                                      std::to_string(out.size()));
        return out;
    }();
    return rows;
}

inline const Appendix1Row& appendix1_row(FieldType type, const std::string& name) {
    for (const auto& r : appendix1())
        if (r.type == type && r.name == name) return r;
    throw domain_error("appendix1: no case '" + name + "' of type " + to_string(type));
}

inline const Appendix2Row& appendix2_row(const std::string& name) {
    for (const auto& r : appendix2())
        if (r.name == name) return r;
    throw domain_error("appendix2: no case '" + name + "'");
}

inline const Appendix3Row& appendix3_row(const std::string& name) {
    for (const auto& r : appendix3())
        if (r.name == name) return r;
    throw domain_error("appendix3: no case '" + name + "'");
}

} // namespace narrowtower
