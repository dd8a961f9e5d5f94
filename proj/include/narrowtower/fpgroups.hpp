#pragma once

// Finitely presented 2-groups, small and concrete:
//
//   * a plain text presentation format (parse_presentation)
//   * HLT-style Todd-Coxeter coset enumeration over the trivial subgroup,
//     with a hard coset budget and a full verification pass on the result
//   * PermGroup: the regular permutation realization with a complete
//     multiplication table, plus the structural toolbox needed downstream
//     (lower central series, abelian invariants of quotients, centre,
//     commutator identities, backtracking isomorphism testing)
//
// Everything here targets groups of order at most a few hundred; budgets
// raise resource_error rather than looping.
//
// Presentation text grammar (see README.md):
//   gens: a b c            introduces the generators
//   rel: w                 relator w = 1
//   rel: w1 = w2           relator w1 w2^-1
//   word  := factor (('*' | whitespace) factor)*  |  '1'
//   factor:= atom ('^' integer)?
//   atom  := name | '(' word ')' | '[' word ',' word ']'
// with [u,v] = u^-1 v^-1 u v and '#' starting a comment.

#include "narrowtower/errors.hpp"
#include "narrowtower/intarith.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace narrowtower {

/// A word in the generators: letters +-(g+1) for generator index g.
using Word = std::vector<int>;

inline Word word_inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (int& l : out) l = -l;
    return out;
}

inline Word word_concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline Word word_pow(const Word& w, int e) {
    if (e < 0) return word_pow(word_inverse(w), -e);
    Word out;
    for (int i = 0; i < e; ++i) out = word_concat(out, w);
    return out;
}

/// [u, v] = u^-1 v^-1 u v.
inline Word word_commutator(const Word& u, const Word& v) {
    return word_concat(word_concat(word_inverse(u), word_inverse(v)), word_concat(u, v));
}

struct Presentation {
    std::vector<std::string> gens;
    std::vector<Word> relators;

    int gen_index(const std::string& name) const {
        for (size_t i = 0; i < gens.size(); ++i)
            if (gens[i] == name) return static_cast<int>(i);
        throw domain_error("unknown generator '" + name + "'");
    }

    std::string word_to_string(const Word& w) const {
        if (w.empty()) return "1";
        std::string out;
        for (int l : w) {
            if (!out.empty()) out += "*";
            out += gens[static_cast<size_t>(std::abs(l) - 1)];
            if (l < 0) out += "^-1";
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// presentation text parsing
// ---------------------------------------------------------------------------

namespace fpdetail {

struct WordParser {
    const std::string& s;
    size_t pos = 0;
    const Presentation& pres;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool at_atom_start() {
        skip_ws();
        if (pos >= s.size()) return false;
        char c = s[pos];
        return c == '(' || c == '[' || std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
               c == '1';
    }

    [[noreturn]] void fail(const std::string& what) {
        throw domain_error("word '" + s + "' position " + std::to_string(pos) + ": " + what);
    }

    Word parse_word() {
        Word out;
        bool first = true;
        while (true) {
            skip_ws();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                skip_ws();
            } else if (!first && !at_atom_start()) {
                break;
            }
            if (!at_atom_start()) {
                if (first) fail("expected a word");
                fail("expected a factor after '*'");
            }
            Word f = parse_factor();
            out = word_concat(out, f);
            first = false;
        }
        return out;
    }

    Word parse_factor() {
        Word a = parse_atom();
        skip_ws();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            skip_ws();
            bool neg = false;
            if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) neg = (s[pos++] == '-');
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                fail("expected an exponent");
            int e = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                e = e * 10 + (s[pos++] - '0');
            return word_pow(a, neg ? -e : e);
        }
        return a;
    }

    Word parse_atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of word");
        char c = s[pos];
        if (c == '1') {
            ++pos;
            return {};
        }
        if (c == '(') {
            ++pos;
            Word w = parse_word();
            skip_ws();
            if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
            ++pos;
            return w;
        }
        if (c == '[') {
            ++pos;
            Word u = parse_word();
            skip_ws();
            if (pos >= s.size() || s[pos] != ',') fail("expected ',' in commutator");
            ++pos;
            Word v = parse_word();
            skip_ws();
            if (pos >= s.size() || s[pos] != ']') fail("expected ']'");
            ++pos;
            return word_commutator(u, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            int g = pres.gen_index(s.substr(start, pos - start));
            return {g + 1};
        }
        fail("unexpected character");
    }
};

} // namespace fpdetail

/// Parse a word over the presentation's generators.
inline Word parse_word(const Presentation& pres, const std::string& text) {
    fpdetail::WordParser p{text, 0, pres};
    Word w = p.parse_word();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing junk");
    return w;
}

/// Parse a full presentation (gens:/rel: lines, '#' comments).
inline Presentation parse_presentation(const std::string& text) {
    Presentation pres;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_gens = false;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto ltrim = line.find_first_not_of(" \t\r\n");
        if (ltrim == std::string::npos) continue;
        auto rtrim = line.find_last_not_of(" \t\r\n");
        std::string t = line.substr(ltrim, rtrim - ltrim + 1);
        auto fail = [&](const std::string& what) -> void {
            throw domain_error("presentation line " + std::to_string(lineno) + ": " + what);
        };
        if (t.rfind("gens:", 0) == 0) {
            if (have_gens) fail("duplicate gens: line");
            have_gens = true;
            std::istringstream gs(t.substr(5));
            std::string name;
            while (gs >> name) {
                for (const auto& g : pres.gens)
                    if (g == name) fail("duplicate generator '" + name + "'");
                pres.gens.push_back(name);
            }
            if (pres.gens.empty()) fail("no generators");
        } else if (t.rfind("rel:", 0) == 0) {
            if (!have_gens) fail("rel: before gens:");
            std::string body = t.substr(4);
            size_t eq = body.find('=');
            // '^-1' contains no '='; a bare '=' splits lhs = rhs
            Word w;
            if (eq != std::string::npos) {
                Word lhs = parse_word(pres, body.substr(0, eq));
                Word rhs = parse_word(pres, body.substr(eq + 1));
                w = word_concat(lhs, word_inverse(rhs));
            } else {
                w = parse_word(pres, body);
            }
            pres.relators.push_back(std::move(w));
        } else {
            fail("expected 'gens:' or 'rel:'");
        }
    }
    if (!have_gens) throw domain_error("presentation has no gens: line");
    return pres;
}

// ---------------------------------------------------------------------------
// Todd-Coxeter coset enumeration (trivial subgroup)
// ---------------------------------------------------------------------------

struct CosetEnumeration {
    int order = 0;
    /// gen_perms[g][c] = image of coset c under generator g (0-based, regular)
    std::vector<std::vector<int>> gen_perms;
};

namespace fpdetail {

class ToddCoxeter {
public:
    ToddCoxeter(const Presentation& pres, long max_cosets)
        : pres_(pres), ncols_(2 * pres.gens.size()), max_cosets_(max_cosets) {
        table_.push_back(Row(ncols_, 0)); // dummy index 0
        parent_.push_back(0);
        new_coset(); // coset 1
    }

    CosetEnumeration run() {
        for (size_t alpha = 1; alpha < table_.size(); ++alpha) {
            if (!alive(static_cast<int>(alpha))) continue;
            for (const Word& r : pres_.relators) {
                scan_and_fill(static_cast<int>(alpha), r);
                process_coincidences();
                if (!alive(static_cast<int>(alpha))) break;
            }
        }
        return finish();
    }

private:
    using Row = std::vector<int>;

    static size_t col_of(int letter) {
        return letter > 0 ? 2 * static_cast<size_t>(letter - 1)
                          : 2 * static_cast<size_t>(-letter - 1) + 1;
    }
    static size_t col_inv(size_t col) { return col ^ 1u; }

    int find(int c) {
        while (parent_[static_cast<size_t>(c)] != c) {
            parent_[static_cast<size_t>(c)] =
                parent_[static_cast<size_t>(parent_[static_cast<size_t>(c)])];
            c = parent_[static_cast<size_t>(c)];
        }
        return c;
    }
    bool alive(int c) { return find(c) == c; }

    int get(int a, size_t col) {
        int v = table_[static_cast<size_t>(a)][col];
        return v == 0 ? 0 : find(v);
    }

    int new_coset() {
        if (static_cast<long>(live_count_) >= max_cosets_)
            throw resource_error("coset enumeration exceeded its budget of " +
                                 std::to_string(max_cosets_) + " cosets");
        table_.push_back(Row(ncols_, 0));
        parent_.push_back(static_cast<int>(table_.size() - 1));
        ++live_count_;
        return static_cast<int>(table_.size() - 1);
    }

    /// Record a^col = b, queueing a coincidence on conflict.
    void force(int a, size_t col, int b) {
        a = find(a);
        b = find(b);
        int cur = get(a, col);
        if (cur == 0) {
            table_[static_cast<size_t>(a)][col] = b;
            int back = get(b, col_inv(col));
            if (back == 0)
                table_[static_cast<size_t>(b)][col_inv(col)] = a;
            else if (back != a)
                pending_.emplace_back(back, a);
        } else if (cur != b) {
            pending_.emplace_back(cur, b);
        }
    }

    void scan_and_fill(int alpha, const Word& w) {
        if (w.empty()) return;
        while (true) {
            int f = find(alpha);
            long i = 0;
            int b = find(alpha);
            long j = static_cast<long>(w.size()) - 1;
            // forward
            while (i <= j) {
                int nxt = get(f, col_of(w[static_cast<size_t>(i)]));
                if (nxt == 0) break;
                f = nxt;
                ++i;
            }
            if (i > j) {
                if (f != b) pending_.emplace_back(f, b);
                return;
            }
            // backward
            while (j >= i) {
                int nxt = get(b, col_inv(col_of(w[static_cast<size_t>(j)])));
                if (nxt == 0) break;
                b = nxt;
                --j;
            }
            if (j < i) {
                pending_.emplace_back(f, b);
                return;
            }
            if (j == i) {
                force(f, col_of(w[static_cast<size_t>(i)]), b);
                return;
            }
            // gap of length > 1: define a new coset and rescan
            int n = new_coset();
            force(f, col_of(w[static_cast<size_t>(i)]), n);
            process_coincidences();
            if (!alive(alpha)) return;
        }
    }

    void process_coincidences() {
        while (!pending_.empty()) {
            auto [a, b] = pending_.front();
            pending_.pop_front();
            a = find(a);
            b = find(b);
            if (a == b) continue;
            if (a > b) std::swap(a, b); // keep the smaller index
            parent_[static_cast<size_t>(b)] = a;
            --live_count_;
            Row row = table_[static_cast<size_t>(b)];
            table_[static_cast<size_t>(b)].assign(ncols_, 0);
            for (size_t col = 0; col < ncols_; ++col)
                if (row[col] != 0) force(a, col, find(row[col]));
        }
    }

    CosetEnumeration finish() {
        process_coincidences();
        // compact and standardize: BFS from coset 1 over live cosets
        std::vector<int> live;
        for (size_t c = 1; c < table_.size(); ++c)
            if (alive(static_cast<int>(c))) live.push_back(static_cast<int>(c));
        std::map<int, int> id; // live coset -> 0-based BFS index
        std::deque<int> fifo;
        int root = find(1);
        id.emplace(root, 0);
        fifo.push_back(root);
        while (!fifo.empty()) {
            int c = fifo.front();
            fifo.pop_front();
            for (size_t col = 0; col < ncols_; ++col) {
                int d = get(c, col);
                if (d == 0)
                    throw resource_error(
                        "coset table incomplete after enumeration; the group is "
                        "infinite or the relators do not involve every generator");
                if (id.emplace(d, static_cast<int>(id.size())).second) fifo.push_back(d);
            }
        }
        if (id.size() != live.size())
            throw inconsistency_error("coset table is not transitive over live cosets");
        CosetEnumeration out;
        out.order = static_cast<int>(live.size());
        out.gen_perms.assign(pres_.gens.size(), std::vector<int>(live.size(), -1));
        for (int c : live) {
            int from = id.at(c);
            for (size_t g = 0; g < pres_.gens.size(); ++g)
                out.gen_perms[g][static_cast<size_t>(from)] = id.at(get(c, 2 * g));
        }
        // verification pass: bijectivity and relator closure
        for (size_t g = 0; g < pres_.gens.size(); ++g) {
            std::vector<char> seen(live.size(), 0);
            for (int v : out.gen_perms[g]) {
                if (v < 0 || seen[static_cast<size_t>(v)])
                    throw inconsistency_error("generator image is not a permutation");
                seen[static_cast<size_t>(v)] = 1;
            }
        }
        for (int c : live) {
            for (const Word& r : pres_.relators) {
                int x = id.at(c);
                for (int l : r) {
                    size_t g = static_cast<size_t>(std::abs(l) - 1);
                    if (l > 0) {
                        x = out.gen_perms[g][static_cast<size_t>(x)];
                    } else {
                        // inverse image
                        const auto& p = out.gen_perms[g];
                        int y = -1;
                        for (size_t k = 0; k < p.size(); ++k)
                            if (p[k] == x) { y = static_cast<int>(k); break; }
                        x = y;
                    }
                }
                if (x != id.at(c))
                    throw inconsistency_error("relator fails to close on the finished table");
            }
        }
        return out;
    }

    const Presentation& pres_;
    size_t ncols_;
    long max_cosets_;
    std::vector<Row> table_;
    std::vector<int> parent_;
    std::deque<std::pair<int, int>> pending_;
    size_t live_count_ = 0;
};

} // namespace fpdetail

/// Enumerate the cosets of the trivial subgroup: the order of the group and
/// the regular permutation action of the generators.
inline CosetEnumeration coset_enumerate(const Presentation& pres, long max_cosets = 10000) {
    if (pres.gens.empty()) throw domain_error("coset_enumerate: no generators");
    return fpdetail::ToddCoxeter(pres, max_cosets).run();
}

// ---------------------------------------------------------------------------
// concrete finite groups
// ---------------------------------------------------------------------------

/// A finite group given by permutation generators, fully tabulated:
/// elements are indexed 0..n-1 with 0 = identity, and all structural
/// queries run off the multiplication table.
class PermGroup {
public:
    PermGroup(size_t degree, std::vector<std::vector<int>> gen_perms, long max_order = 4096)
        : degree_(degree) {
        if (gen_perms.empty()) throw domain_error("PermGroup: no generators");
        for (const auto& p : gen_perms) {
            if (p.size() != degree) throw domain_error("PermGroup: wrong permutation degree");
            std::vector<char> seen(degree, 0);
            for (int v : p) {
                if (v < 0 || static_cast<size_t>(v) >= degree || seen[static_cast<size_t>(v)])
                    throw domain_error("PermGroup: generator is not a permutation");
                seen[static_cast<size_t>(v)] = 1;
            }
        }
        // BFS closure from the identity
        std::vector<int> idp(degree);
        std::iota(idp.begin(), idp.end(), 0);
        std::map<std::vector<int>, int> index;
        index.emplace(idp, 0);
        elements_.push_back(idp);
        for (size_t head = 0; head < elements_.size(); ++head) {
            for (const auto& g : gen_perms) {
                std::vector<int> nxt(degree);
                for (size_t i = 0; i < degree; ++i)
                    nxt[i] = g[static_cast<size_t>(elements_[head][i])];
                if (index.emplace(nxt, static_cast<int>(elements_.size())).second) {
                    elements_.push_back(std::move(nxt));
                    if (static_cast<long>(elements_.size()) > max_order)
                        throw resource_error("PermGroup: order exceeds the bound of " +
                                             std::to_string(max_order));
                }
            }
        }
        size_t n = elements_.size();
        gen_idx_.reserve(gen_perms.size());
        for (const auto& g : gen_perms) gen_idx_.push_back(index.at(g));
        mul_.assign(n, std::vector<int>(n, -1));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                std::vector<int> prod(degree);
                // composition convention: (i then j), matching word order
                for (size_t x = 0; x < degree; ++x)
                    prod[x] = elements_[j][static_cast<size_t>(elements_[i][x])];
                mul_[i][j] = index.at(prod);
            }
        }
        inv_.assign(n, -1);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (mul_[i][j] == 0) { inv_[i] = static_cast<int>(j); break; }
        ord_.assign(n, 0);
        for (size_t i = 0; i < n; ++i) {
            int x = static_cast<int>(i), k = 1;
            while (x != 0) {
                x = mul_[static_cast<size_t>(x)][i];
                ++k;
                if (k > static_cast<int>(n) + 1)
                    throw inconsistency_error("PermGroup: element order exceeds group order");
            }
            ord_[i] = k;
        }
    }

    static PermGroup from_enumeration(const CosetEnumeration& e) {
        return PermGroup(static_cast<size_t>(e.order), e.gen_perms,
                         std::max<long>(16, 4L * e.order));
    }

    int order() const { return static_cast<int>(elements_.size()); }
    int identity() const { return 0; }
    int mul(int a, int b) const { return mul_[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
    int inv(int a) const { return inv_[static_cast<size_t>(a)]; }
    int element_order(int a) const { return ord_[static_cast<size_t>(a)]; }
    const std::vector<int>& generator_indices() const { return gen_idx_; }

    int conjugate(int x, int y) const { return mul(mul(inv(y), x), y); } // x^y
    int commutator(int x, int y) const { return mul(mul(inv(x), inv(y)), mul(x, y)); }

    int power(int x, i64 e) const {
        if (e < 0) return power(inv(x), -e);
        int acc = 0, base = x;
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    /// Evaluate a word in the group's generators.
    int eval_word(const Word& w) const {
        int x = 0;
        for (int l : w) {
            size_t g = static_cast<size_t>(std::abs(l) - 1);
            if (g >= gen_idx_.size()) throw domain_error("eval_word: letter out of range");
            int e = gen_idx_[g];
            x = mul(x, l > 0 ? e : inv(e));
        }
        return x;
    }

    /// Subgroup generated by the given element indices (sorted element set).
    std::vector<int> subgroup(const std::vector<int>& gens) const {
        std::set<int> have{0};
        std::vector<int> fifo{0};
        for (size_t head = 0; head < fifo.size(); ++head) {
            for (int g : gens) {
                int nxt = mul(fifo[head], g);
                if (have.insert(nxt).second) fifo.push_back(nxt);
                int nxti = mul(fifo[head], inv(g));
                if (have.insert(nxti).second) fifo.push_back(nxti);
            }
        }
        return std::vector<int>(have.begin(), have.end());
    }

    std::vector<int> normal_closure(std::vector<int> seed) const {
        std::set<int> gens(seed.begin(), seed.end());
        while (true) {
            std::set<int> more;
            for (int x : gens)
                for (int g : gen_idx_) {
                    int c = conjugate(x, g);
                    if (!gens.count(c)) more.insert(c);
                    int ci = conjugate(x, inv(g));
                    if (!gens.count(ci)) more.insert(ci);
                }
            if (more.empty()) break;
            gens.insert(more.begin(), more.end());
        }
        return subgroup(std::vector<int>(gens.begin(), gens.end()));
    }

    /// [A, B] for element sets A, B: the subgroup generated by all
    /// commutators, closed under conjugation.
    std::vector<int> commutator_subgroup(const std::vector<int>& A,
                                         const std::vector<int>& B) const {
        std::vector<int> seed;
        for (int a : A)
            for (int b : B) seed.push_back(commutator(a, b));
        std::sort(seed.begin(), seed.end());
        seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
        return normal_closure(seed);
    }

    std::vector<int> whole_group() const {
        std::vector<int> all(elements_.size());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }

    std::vector<int> derived_subgroup() const {
        return commutator_subgroup(whole_group(), whole_group());
    }

    /// Lower central series G = G_1 >= G_2 >= ... down to 1 (inclusive);
    /// throws if the series stabilizes above 1 (not nilpotent).
    std::vector<std::vector<int>> lower_central_series() const {
        std::vector<std::vector<int>> series{whole_group()};
        while (series.back().size() > 1) {
            auto nxt = commutator_subgroup(series.back(), whole_group());
            if (nxt.size() == series.back().size())
                throw inconsistency_error("lower central series stabilized above the identity");
            series.push_back(std::move(nxt));
        }
        return series;
    }

    int nilpotency_class() const {
        return static_cast<int>(lower_central_series().size()) - 1;
    }

    std::vector<int> centre() const {
        std::vector<int> out;
        for (int x = 0; x < order(); ++x) {
            bool central = true;
            for (int g : gen_idx_)
                if (mul(x, g) != mul(g, x)) { central = false; break; }
            if (central) out.push_back(x);
        }
        return out;
    }

    int exponent() const {
        int e = 1;
        for (int x = 0; x < order(); ++x) e = static_cast<int>(std::lcm(e, element_order(x)));
        return e;
    }

    /// Abelian invariants (elementary divisors, ascending) of A/N where
    /// N <= A <= G are element sets with N normal in A and A/N abelian.
    std::vector<i64> quotient_invariants(const std::vector<int>& A,
                                         const std::vector<int>& N) const {
        std::set<int> inN(N.begin(), N.end());
        i64 q = static_cast<i64>(A.size()) / static_cast<i64>(N.size());
        if (static_cast<i64>(N.size()) * q != static_cast<i64>(A.size()))
            throw inconsistency_error("quotient_invariants: |N| does not divide |A|");
        std::map<i64, std::vector<int>> per_prime;
        for (const auto& [pu, e] : factorize(q)) {
            (void)e;
            i64 p = static_cast<i64>(pu);
            std::vector<int> lambda;
            i64 prev = 1;
            for (int k = 1;; ++k) {
                i64 pk = 1;
                for (int t = 0; t < k; ++t) pk *= p;
                i64 cnt = 0;
                for (int x : A)
                    if (inN.count(power(x, pk))) ++cnt;
                if (cnt % static_cast<i64>(N.size()) != 0)
                    throw inconsistency_error("quotient_invariants: count not divisible by |N|");
                cnt /= static_cast<i64>(N.size());
                if (cnt == prev) break;
                i64 ratio = cnt / prev;
                int lam = 0;
                while (ratio > 1) {
                    if (ratio % p != 0)
                        throw inconsistency_error("quotient_invariants: non-p-power ratio");
                    ratio /= p;
                    ++lam;
                }
                lambda.push_back(lam);
                prev = cnt;
                if (k > 40) throw inconsistency_error("quotient_invariants: runaway exponent");
            }
            std::vector<int> exps;
            for (int i = 0; !lambda.empty() && i < lambda[0]; ++i) {
                int e_i = 0;
                for (int lam : lambda)
                    if (lam > i) ++e_i;
                exps.push_back(e_i);
            }
            if (!exps.empty()) per_prime[p] = exps;
        }
        size_t rank = 0;
        for (const auto& [p, exps] : per_prime) rank = std::max(rank, exps.size());
        std::vector<i64> divisors(rank, 1);
        for (const auto& [p, exps] : per_prime)
            for (size_t i = 0; i < exps.size(); ++i) {
                i64 pe = 1;
                for (int t = 0; t < exps[i]; ++t) pe *= p;
                divisors[i] *= pe;
            }
        std::reverse(divisors.begin(), divisors.end());
        i64 check = 1;
        for (i64 d : divisors) check *= d;
        if (check != q)
            throw inconsistency_error("quotient_invariants: invariant product mismatch");
        return divisors;
    }

    std::vector<i64> abelianization() const {
        return quotient_invariants(whole_group(), derived_subgroup());
    }

    /// Sorted (order, count) histogram of element orders.
    std::vector<std::pair<int, int>> order_histogram() const {
        std::map<int, int> h;
        for (int x = 0; x < order(); ++x) ++h[element_order(x)];
        return std::vector<std::pair<int, int>>(h.begin(), h.end());
    }

private:
    size_t degree_;
    std::vector<std::vector<int>> elements_;
    std::vector<int> gen_idx_;
    std::vector<std::vector<int>> mul_;
    std::vector<int> inv_;
    std::vector<int> ord_;
};

// ---------------------------------------------------------------------------
// structural comparisons
// ---------------------------------------------------------------------------

namespace fpdetail {

struct Fingerprint {
    int order;
    std::vector<std::pair<int, int>> order_hist;
    std::vector<i64> abelianization;
    std::vector<std::vector<i64>> lcs_quotients;
    int centre_order;
    int exponent;

    bool operator==(const Fingerprint&) const = default;
};

inline Fingerprint fingerprint(const PermGroup& G) {
    Fingerprint f;
    f.order = G.order();
    f.order_hist = G.order_histogram();
    f.abelianization = G.abelianization();
    auto lcs = G.lower_central_series();
    for (size_t i = 0; i + 1 < lcs.size(); ++i)
        f.lcs_quotients.push_back(G.quotient_invariants(lcs[i], lcs[i + 1]));
    f.centre_order = static_cast<int>(G.centre().size());
    f.exponent = G.exponent();
    return f;
}

/// Per-element invariant used to prune isomorphism candidates: order,
/// centrality, depth in the lower central series, and squaring class size.
inline std::vector<std::array<int, 4>> element_signatures(const PermGroup& G) {
    auto lcs = G.lower_central_series();
    std::set<int> zc;
    for (int z : G.centre()) zc.insert(z);
    std::vector<std::array<int, 4>> sig(static_cast<size_t>(G.order()));
    for (int x = 0; x < G.order(); ++x) {
        int depth = 0;
        for (size_t i = 0; i < lcs.size(); ++i)
            if (std::binary_search(lcs[i].begin(), lcs[i].end(), x))
                depth = static_cast<int>(i);
        int sq = G.mul(x, x);
        sig[static_cast<size_t>(x)] = {G.element_order(x), zc.count(x) ? 1 : 0, depth,
                                       G.element_order(sq)};
    }
    return sig;
}

} // namespace fpdetail

/// Isomorphism test for small groups: fingerprint comparison, then a seeded
/// backtracking search mapping A's generators into B.
inline bool is_isomorphic(const PermGroup& A, const PermGroup& B, u64 seed = 0xC0FFEEu) {
    if (A.order() != B.order()) return false;
    if (fpdetail::fingerprint(A) != fpdetail::fingerprint(B)) return false;
    auto sigA = fpdetail::element_signatures(A);
    auto sigB = fpdetail::element_signatures(B);
    const auto& gensA = A.generator_indices();
    // BFS word table for A: element -> (parent, generator slot)
    std::vector<std::pair<int, int>> via(static_cast<size_t>(A.order()), {-1, -1});
    std::vector<int> bfs{0};
    for (size_t head = 0; head < bfs.size(); ++head) {
        for (size_t gi = 0; gi < gensA.size(); ++gi) {
            int nxt = A.mul(bfs[head], gensA[gi]);
            if (nxt != 0 && via[static_cast<size_t>(nxt)].first == -1) {
                via[static_cast<size_t>(nxt)] = {bfs[head], static_cast<int>(gi)};
                bfs.push_back(nxt);
            }
        }
    }
    if (bfs.size() != static_cast<size_t>(A.order()))
        throw inconsistency_error("is_isomorphic: generators of A do not generate");
    // candidate images per generator, shuffled deterministically by seed
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> cand(gensA.size());
    for (size_t gi = 0; gi < gensA.size(); ++gi) {
        for (int y = 0; y < B.order(); ++y)
            if (sigB[static_cast<size_t>(y)] == sigA[static_cast<size_t>(gensA[gi])])
                cand[gi].push_back(y);
        if (cand[gi].empty()) return false;
        std::shuffle(cand[gi].begin(), cand[gi].end(), rng);
    }
    std::vector<int> phi(static_cast<size_t>(A.order()), -1);
    std::vector<int> images(gensA.size(), -1);
    auto attempt = [&](const std::vector<int>& img) -> bool {
        std::fill(phi.begin(), phi.end(), -1);
        phi[0] = 0;
        for (int a : bfs) {
            if (a == 0) continue;
            auto [p, gi] = via[static_cast<size_t>(a)];
            phi[static_cast<size_t>(a)] = B.mul(phi[static_cast<size_t>(p)], img[static_cast<size_t>(gi)]);
        }
        std::vector<char> hit(static_cast<size_t>(B.order()), 0);
        for (int v : phi) {
            if (v < 0 || hit[static_cast<size_t>(v)]) return false;
            hit[static_cast<size_t>(v)] = 1;
        }
        for (int a = 0; a < A.order(); ++a)
            for (size_t gi = 0; gi < gensA.size(); ++gi)
                if (phi[static_cast<size_t>(A.mul(a, gensA[gi]))] !=
                    B.mul(phi[static_cast<size_t>(a)], img[gi]))
                    return false;
        return true;
    };
    // depth-first over candidate tuples
    std::vector<size_t> pick(gensA.size(), 0);
    size_t depth = 0;
    while (true) {
        if (depth == gensA.size()) {
            if (attempt(images)) return true;
            // backtrack
            --depth;
            ++pick[depth];
        }
        while (pick[depth] >= cand[depth].size()) {
            pick[depth] = 0;
            if (depth == 0) return false;
            --depth;
            ++pick[depth];
        }
        images[depth] = cand[depth][pick[depth]];
        ++depth;
        if (depth < gensA.size()) pick[depth] = 0;
    }
}

/// Check the standard commutator identities and the class-respecting
/// congruences on a concrete group; throws inconsistency_error on failure.
/// Identities verified for all x, y, z:
///   (1) [xy, z] = [x, z]^y [y, z]
///   (2) [x, yz] = [x, z] [x, y]^z
///   (3) [x, y^-1] = ([y, x])^(y^-1)
///   (4) [x^-1, y] = ([y, x])^(x^-1)
///   (5) Hall-Witt: [[x,y^-1],z]^y [[y,z^-1],x]^z [[z,x^-1],y]^x = 1
/// plus, on generator triples, [[gi,gj],gk] = [[gi,gk],gj] modulo G_4.
inline void verify_commutator_identities(const PermGroup& G) {
    int n = G.order();
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            for (int z = 0; z < n; ++z) {
                int lhs1 = G.commutator(G.mul(x, y), z);
                int rhs1 = G.mul(G.conjugate(G.commutator(x, z), y), G.commutator(y, z));
                if (lhs1 != rhs1) throw inconsistency_error("identity (1) fails");
                int lhs2 = G.commutator(x, G.mul(y, z));
                int rhs2 = G.mul(G.commutator(x, z), G.conjugate(G.commutator(x, y), z));
                if (lhs2 != rhs2) throw inconsistency_error("identity (2) fails");
                int w1 = G.conjugate(G.commutator(G.commutator(x, G.inv(y)), z), y);
                int w2 = G.conjugate(G.commutator(G.commutator(y, G.inv(z)), x), z);
                int w3 = G.conjugate(G.commutator(G.commutator(z, G.inv(x)), y), x);
                if (G.mul(G.mul(w1, w2), w3) != G.identity())
                    throw inconsistency_error("Hall-Witt identity fails");
            }
            int lhs3 = G.commutator(x, G.inv(y));
            int rhs3 = G.conjugate(G.commutator(y, x), G.inv(y));
            if (lhs3 != rhs3) throw inconsistency_error("identity (3) fails");
            int lhs4 = G.commutator(G.inv(x), y);
            int rhs4 = G.conjugate(G.commutator(y, x), G.inv(x));
            if (lhs4 != rhs4) throw inconsistency_error("identity (4) fails");
        }
    }
    // c_ijk = c_ikj modulo G_4 on the generators
    auto lcs = G.lower_central_series();
    const std::vector<int>& g4 = lcs.size() > 3 ? lcs[3] : lcs.back();
    const auto& gens = G.generator_indices();
    for (int gi : gens)
        for (int gj : gens)
            for (int gk : gens) {
                int cijk = G.commutator(G.commutator(gi, gj), gk);
                int cikj = G.commutator(G.commutator(gi, gk), gj);
                int diff = G.mul(cijk, G.inv(cikj));
                if (!std::binary_search(g4.begin(), g4.end(), diff))
                    throw inconsistency_error("c_ijk = c_ikj (mod G_4) fails on generators");
            }
}

} // namespace narrowtower
