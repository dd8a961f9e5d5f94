#pragma once

// Binary quadratic form machinery: the independent oracle for (narrow and
// wide) class groups of quadratic orders with fundamental discriminant.
//
//  * definite forms (D < 0): Gauss reduction, one reduced form per class
//  * indefinite forms (D > 0): rho-reduction, one cycle of reduced forms
//    per class; proper classes of forms = narrow ideal classes
//  * composition: Dirichlet composition on united (concordant) forms
//  * group structure: element orders + solution counting for x^(p^k) = 1
//    recover the abelian invariants without any matrix algebra
//
// The 4-rank oracle four_rank_forms / four_rank_splittings pair is the
// cross-check used throughout: form classes on one side, Redei's count of
// C4-splittings of the discriminant on the other.

#include "narrowtower/errors.hpp"
#include "narrowtower/intarith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace narrowtower {

/// (a, b, c) <-> a x^2 + b x y + c y^2.
struct BQForm {
    i64 a = 0, b = 0, c = 0;

    friend bool operator==(const BQForm&, const BQForm&) = default;
    friend auto operator<=>(const BQForm&, const BQForm&) = default;
};

inline i64 form_discriminant(const BQForm& f) {
    i128 d = i128{f.b} * f.b - i128{4} * f.a * f.c;
    if (d > i128{INT64_MAX} || d < -i128{INT64_MAX})
        throw domain_error("form discriminant overflows 64 bits");
    return static_cast<i64>(d);
}

inline bool is_primitive(const BQForm& f) {
    return std::gcd(std::gcd(std::abs(f.a), std::abs(f.b)), std::abs(f.c)) == 1;
}

/// floor(sqrt(n)) for n >= 0, exact.
inline i64 isqrt_i64(i64 n) {
    if (n < 0) throw domain_error("isqrt of negative");
    if (n == 0) return 0;
    i64 s = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

// ---------------------------------------------------------------------------
// reduction
// ---------------------------------------------------------------------------

inline bool is_reduced_definite(const BQForm& f) {
    // positive definite: |b| <= a <= c, with b >= 0 if |b| == a or a == c
    if (f.a <= 0 || f.c <= 0) return false;
    if (std::abs(f.b) > f.a || f.a > f.c) return false;
    if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

inline bool is_reduced_indefinite(const BQForm& f, i64 D) {
    // 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, all exact
    if (f.b <= 0) return false;
    i64 s = isqrt_i64(D);
    if (f.b > s) return false; // b < sqrt(D) for nonsquare D
    i64 t = 2 * std::abs(f.a);
    // 2|a| < sqrt(D) + b  <=>  (2|a| - b)^2 < D when 2|a| > b, else trivially true
    if (t > f.b && (i128{t - f.b} * (t - f.b)) >= i128{D}) return false;
    // 2|a| > sqrt(D) - b  <=>  D < (2|a| + b)^2
    if (i128{D} >= i128{t + f.b} * (t + f.b)) return false;
    return true;
}

/// Gauss reduction of a positive definite form (D < 0, a > 0).
inline BQForm reduce_definite(BQForm f) {
    i64 D = form_discriminant(f);
    if (D >= 0 || f.a <= 0) throw domain_error("reduce_definite: need D < 0 and a > 0");
    while (true) {
        // normalize b into (-a, a]
        i64 twoa = 2 * f.a;
        i64 r = f.b % twoa;
        if (r > f.a) r -= twoa;
        if (r <= -f.a) r += twoa;
        f.c = static_cast<i64>((i128{r} * r - D) / (i128{4} * f.a));
        f.b = r;
        if (f.a > f.c) {
            f = BQForm{f.c, -f.b, f.a};
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

namespace detail {

/// The rho step of the indefinite reduction/cycle operator:
/// (a,b,c) -> (c, b', (b'^2-D)/(4c)) with b' = -b mod 2|c| placed in the
/// standard window.
inline BQForm rho_indefinite(const BQForm& f, i64 D, i64 s /* isqrt(D) */) {
    if (f.c == 0) throw inconsistency_error("rho: degenerate form with c = 0");
    i64 cc = std::abs(f.c);
    i64 twoc = 2 * cc;
    i64 r = ((-f.b) % twoc + twoc) % twoc; // -b mod 2|c| in [0, 2|c|)
    i64 bp;
    if (cc > s) {
        // window (-|c|, |c|]
        bp = r > cc ? r - twoc : r;
    } else {
        // window (s - 2|c|, s]
        bp = s - ((s - r) % twoc + twoc) % twoc;
    }
    i128 num = i128{bp} * bp - i128{D};
    i128 den = i128{4} * f.c;
    if (num % den != 0) throw inconsistency_error("rho: non-integral successor");
    return BQForm{f.c, bp, static_cast<i64>(num / den)};
}

} // namespace detail

/// Reduce an indefinite form (D > 0 nonsquare) by iterating rho. The step
/// budget is a hard bound proportional to sqrt(D) log D.
inline BQForm reduce_indefinite(BQForm f, i64 D) {
    i64 s = isqrt_i64(D);
    if (s * s == D) throw domain_error("reduce_indefinite: square discriminant");
    long budget = 64 * (static_cast<long>(s) + 64);
    while (!is_reduced_indefinite(f, D)) {
        f = detail::rho_indefinite(f, D, s);
        if (--budget < 0)
            throw resource_error("indefinite reduction exceeded its step budget for D = " +
                                 std::to_string(D));
    }
    return f;
}

/// Principal form of discriminant D.
inline BQForm principal_form(i64 D) {
    i64 b = (D % 2 + 2) % 2;
    return BQForm{1, b, static_cast<i64>((i128{b} * b - D) / 4)};
}

// ---------------------------------------------------------------------------
// composition (Dirichlet, via united forms)
// ---------------------------------------------------------------------------

namespace detail {

/// Find a proper transform of f with leading coefficient coprime to m and
/// nonzero: returns the transformed form. Scans primitive vectors (x, y) by
/// increasing box size; a primitive form represents values coprime to any
/// fixed modulus, so this terminates quickly.
inline BQForm represent_coprime(const BQForm& f, i64 m) {
    auto value = [&](i64 x, i64 y) -> i64 {
        i128 v = i128{f.a} * x * x + i128{f.b} * x * y + i128{f.c} * y * y;
        if (v > i128{INT64_MAX} || v < -i128{INT64_MAX})
            throw resource_error("form value overflow in represent_coprime");
        return static_cast<i64>(v);
    };
    auto try_vec = [&](i64 x, i64 y) -> std::optional<BQForm> {
        if (std::gcd(std::abs(x), std::abs(y)) != 1) return std::nullopt;
        i64 v = value(x, y);
        if (v == 0 || std::gcd(std::abs(v), std::abs(m)) != 1) return std::nullopt;
        // complete (x, y) to a unimodular matrix [[x, u], [y, w]]: x w - y u = 1
        i64 u = 0, w = 0;
        {
            // extended gcd on (x, y)
            i64 r0 = x, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
            while (r1 != 0) {
                i64 q = r0 / r1;
                std::tie(r0, r1) = std::pair<i64, i64>(r1, r0 - q * r1);
                std::tie(s0, s1) = std::pair<i64, i64>(s1, s0 - q * s1);
                std::tie(t0, t1) = std::pair<i64, i64>(t1, t0 - q * t1);
            }
            // r0 = +-1 = s0*x + t0*y
            if (r0 == -1) { s0 = -s0; t0 = -t0; }
            // x*(t0) - y*(-s0)?  we need xw - yu = 1: take w = s0', u = -t0'
            // from s0*x + t0*y = 1: x*s0 - y*(-t0) = 1 -> w = s0, u = -t0
            w = s0;
            u = -t0;
        }
        // f composed with [[x, u], [y, w]]
        i64 A = v;
        i128 B = i128{2} * (i128{f.a} * x * u + i128{f.c} * y * w) +
                 i128{f.b} * (i128{x} * w + i128{y} * u);
        i128 C = i128{f.a} * u * u + i128{f.b} * u * w + i128{f.c} * w * w;
        if (B > i128{INT64_MAX} || B < -i128{INT64_MAX} || C > i128{INT64_MAX} ||
            C < -i128{INT64_MAX})
            throw resource_error("coefficient overflow in represent_coprime");
        return BQForm{A, static_cast<i64>(B), static_cast<i64>(C)};
    };
    // common fast paths first
    for (auto [x, y] : std::initializer_list<std::pair<i64, i64>>{
             {1, 0}, {0, 1}, {1, 1}, {1, -1}}) {
        if (auto g = try_vec(x, y)) return *g;
    }
    for (i64 box = 2; box <= 4096; ++box) {
        for (i64 x = -box; x <= box; ++x) {
            for (i64 y : {-box, box}) {
                if (auto g = try_vec(x, y)) return *g;
            }
        }
        for (i64 y = -box + 1; y <= box - 1; ++y) {
            for (i64 x : {-box, box}) {
                if (auto g = try_vec(x, y)) return *g;
            }
        }
    }
    throw resource_error("represent_coprime: no representative found within scan budget");
}

inline i64 mod_positive(i128 v, i64 m) {
    i128 r = v % m;
    if (r < 0) r += m;
    return static_cast<i64>(r);
}

/// Modular inverse of a mod m > 0, gcd(a, m) = 1.
inline i64 invmod(i64 a, i64 m) {
    i64 r0 = m, r1 = ((a % m) + m) % m, t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        std::tie(r0, r1) = std::pair<i64, i64>(r1, r0 - q * r1);
        std::tie(t0, t1) = std::pair<i64, i64>(t1, t0 - q * t1);
    }
    if (r0 != 1) throw inconsistency_error("invmod: arguments not coprime");
    return ((t0 % m) + m) % m;
}

} // namespace detail

/// Dirichlet composition of two primitive forms of the same discriminant.
/// Returns an (unreduced) representative of the product class.
inline BQForm compose_raw(const BQForm& f1, const BQForm& f2) {
    i64 D = form_discriminant(f1);
    if (form_discriminant(f2) != D)
        throw domain_error("compose: discriminants differ");
    if (!is_primitive(f1) || !is_primitive(f2))
        throw domain_error("compose: forms must be primitive");
    // unite: make the leading coefficients coprime
    BQForm g1 = f1;
    BQForm g2 = detail::represent_coprime(f2, g1.a);
    if (g1.a == 0) g1 = detail::represent_coprime(f1, 1); // a = 0 cannot happen for D nonsquare
    i64 A1 = g1.a, A2 = g2.a;
    if (std::gcd(std::abs(A1), std::abs(A2)) != 1)
        throw inconsistency_error("compose: united forms not coprime");
    // find B = b1 (mod 2 A1), B = b2 (mod 2 A2), via B = b1 + 2 A1 t
    i64 m2 = std::abs(A2);
    i64 t = 0;
    if (m2 != 1) {
        i128 diff = (i128{g2.b} - g1.b);
        if (diff % 2 != 0) throw inconsistency_error("compose: parity mismatch");
        i64 rhs = detail::mod_positive(diff / 2, m2);
        t = detail::mod_positive(i128{rhs} * detail::invmod(A1, m2), m2);
    }
    i128 B = i128{g1.b} + i128{2} * A1 * t;
    i128 A = i128{A1} * A2;
    i128 C = (B * B - D) / (4 * A);
    if ((B * B - D) % (4 * A) != 0)
        throw inconsistency_error("compose: non-integral C");
    if (A > i128{INT64_MAX} || A < -i128{INT64_MAX} || B > i128{INT64_MAX} ||
        B < -i128{INT64_MAX} || C > i128{INT64_MAX} || C < -i128{INT64_MAX})
        throw resource_error("compose: coefficient overflow");
    BQForm out{static_cast<i64>(A), static_cast<i64>(B), static_cast<i64>(C)};
    if (!is_primitive(out))
        throw inconsistency_error("compose: product not primitive");
    return out;
}

// ---------------------------------------------------------------------------
// class groups
// ---------------------------------------------------------------------------

/// Structure report for a form class group.
struct ClassGroupInfo {
    i64 discriminant = 0;
    bool narrow = false;           ///< true: proper classes (narrow); false: wide
    i64 h = 0;                     ///< class number
    std::vector<i64> invariants;   ///< elementary divisors, ascending (d1 | d2 | ...)
    std::vector<i64> two_part;     ///< the 2-primary invariants, ascending
    int four_rank = 0;             ///< number of invariants divisible by 4
};

/// Class group of forms of fundamental discriminant D. For D > 0 the group
/// of proper classes is the narrow class group; `narrow = false` divides by
/// the class of a form representing -1 (wide / ordinary class group). For
/// D < 0 the flag is ignored (narrow = wide).
class FormClassGroup {
public:
    explicit FormClassGroup(i64 D) : D_(D) {
        if (!is_fundamental_discriminant(D))
            throw domain_error("FormClassGroup: " + std::to_string(D) + " is not fundamental");
        if (D > 0) {
            i64 s = isqrt_i64(D);
            if (s * s == D) throw domain_error("FormClassGroup: square discriminant");
            enumerate_indefinite();
        } else {
            enumerate_definite();
        }
        principal_ = index_of(canonical(principal_form(D_)));
    }

    i64 discriminant() const { return D_; }
    int size() const { return static_cast<int>(classes_.size()); }
    int principal_index() const { return principal_; }

    /// Canonical label of the class of f: the reduced form (D < 0) or the
    /// lexicographically least form on the reduction cycle (D > 0).
    BQForm canonical(const BQForm& f) const {
        if (form_discriminant(f) != D_) throw domain_error("canonical: wrong discriminant");
        if (D_ < 0) {
            BQForm g = f;
            if (g.a < 0) throw domain_error("canonical: negative definite representative");
            return reduce_definite(g);
        }
        BQForm r = reduce_indefinite(f, D_);
        auto it = cycle_of_.find(r);
        if (it == cycle_of_.end())
            throw inconsistency_error("canonical: reduced form missing from cycle table");
        return classes_[static_cast<size_t>(it->second)];
    }

    int index_of(const BQForm& canon) const {
        auto it = index_.find(canon);
        if (it == index_.end()) throw inconsistency_error("index_of: unknown class label");
        return it->second;
    }

    int class_index(const BQForm& f) const { return index_of(canonical(f)); }

    int compose(int i, int j) const {
        if (i > j) std::swap(i, j);
        auto key = std::pair<int, int>(i, j);
        auto it = compose_memo_.find(key);
        if (it != compose_memo_.end()) return it->second;
        int k = class_index(compose_raw(classes_[static_cast<size_t>(i)],
                                        classes_[static_cast<size_t>(j)]));
        compose_memo_.emplace(key, k);
        return k;
    }

    int inverse(int i) const {
        const BQForm& f = classes_[static_cast<size_t>(i)];
        return class_index(BQForm{f.a, -f.b, f.c});
    }

    int power(int i, i64 e) const {
        if (e < 0) return power(inverse(i), -e);
        int acc = principal_;
        int base = i;
        while (e > 0) {
            if (e & 1) acc = compose(acc, base);
            base = compose(base, base);
            e >>= 1;
        }
        return acc;
    }

    /// Index of the class J of a form representing -1 (D > 0 only).
    /// J is trivial iff the fundamental unit has norm -1.
    int minus_one_class() const {
        if (D_ < 0) throw domain_error("minus_one_class: only defined for D > 0");
        i64 b = (D_ % 2 + 2) % 2;
        BQForm j{-1, b, static_cast<i64>((i128{D_} - i128{b} * b) / 4)};
        return class_index(j);
    }

    /// Abelian invariants (elementary divisors, ascending); subgroup_mask
    /// optionally quotients by the subgroup {principal, J}.
    ClassGroupInfo info(bool narrow) const {
        ClassGroupInfo out;
        out.discriminant = D_;
        out.narrow = (D_ < 0) ? true : narrow;
        std::vector<int> quotient_subgroup{principal_};
        if (D_ > 0 && !narrow) {
            int j = minus_one_class();
            if (j != principal_) quotient_subgroup.push_back(j);
        }
        int hsub = static_cast<int>(quotient_subgroup.size());
        out.h = size() / hsub;
        // invariants per prime from counts of solutions of x^(p^k) in subgroup
        std::map<i64, std::vector<int>> per_prime; // p -> exponent partition (desc)
        for (const auto& [pu, e] : factorize(out.h)) {
            (void)e;
            i64 p = static_cast<i64>(pu);
            std::vector<int> lambda; // lambda[k-1] = #{i : e_i >= k}
            i64 prev = 1;
            for (int k = 1;; ++k) {
                i64 pk = 1;
                for (int t = 0; t < k; ++t) pk *= p;
                i64 cnt = 0;
                for (int x = 0; x < size(); ++x) {
                    int xp = power(x, pk);
                    for (int s : quotient_subgroup)
                        if (xp == s) { ++cnt; break; }
                }
                cnt /= hsub;
                if (cnt == prev) break;
                if (cnt % prev != 0)
                    throw inconsistency_error("invariant counting: non-multiplicative counts");
                i64 ratio = cnt / prev;
                int lam = 0;
                while (ratio > 1) {
                    if (ratio % p != 0)
                        throw inconsistency_error("invariant counting: ratio not a p-power");
                    ratio /= p;
                    ++lam;
                }
                lambda.push_back(lam);
                prev = cnt;
                if (k > 64) throw inconsistency_error("invariant counting: runaway exponent");
            }
            // conjugate the partition lambda to get the exponents e_i (desc)
            std::vector<int> exps;
            for (int i = 0; !lambda.empty() && i < lambda[0]; ++i) {
                int e_i = 0;
                for (int lam : lambda)
                    if (lam > i) ++e_i;
                exps.push_back(e_i);
            }
            if (!exps.empty()) per_prime[p] = exps; // exps is descending by construction
        }
        // combine per-prime parts into elementary divisors, aligned largest-first
        size_t rank = 0;
        for (const auto& [p, exps] : per_prime) rank = std::max(rank, exps.size());
        std::vector<i64> divisors(rank, 1);
        for (const auto& [p, exps] : per_prime) {
            for (size_t i = 0; i < exps.size(); ++i) {
                i64 pe = 1;
                for (int t = 0; t < exps[i]; ++t) pe *= p;
                divisors[i] *= pe; // divisors[0] largest
            }
        }
        std::reverse(divisors.begin(), divisors.end()); // ascending d1 | d2 | ...
        out.invariants = divisors;
        i64 check = 1;
        for (i64 d : divisors) check *= d;
        if (check != out.h)
            throw inconsistency_error("invariant product does not match class number");
        for (i64 d : divisors) {
            i64 two = 1;
            while (d % 2 == 0) { two *= 2; d /= 2; }
            if (two > 1) out.two_part.push_back(two);
        }
        out.four_rank = static_cast<int>(
            std::count_if(out.two_part.begin(), out.two_part.end(), [](i64 d) { return d % 4 == 0; }));
        return out;
    }

    const std::vector<BQForm>& class_labels() const { return classes_; }

private:
    void add_class(const BQForm& canon) {
        index_.emplace(canon, static_cast<int>(classes_.size()));
        classes_.push_back(canon);
    }

    void enumerate_definite() {
        i64 absD = -D_;
        i64 bmax = isqrt_i64(absD / 3);
        std::vector<BQForm> found;
        for (i64 b = (absD % 2 == 0) ? 0 : 1; b <= bmax; b += 2) {
            i64 m = (b * b + absD) / 4;
            for (i64 a = std::max<i64>(b, 1); a * a <= m; ++a) {
                if (m % a != 0) continue;
                i64 c = m / a;
                BQForm f{a, b, c};
                if (!is_primitive(f)) continue;
                if (!is_reduced_definite(f)) continue;
                found.push_back(f);
                BQForm g{a, -b, c};
                if (b > 0 && is_reduced_definite(g)) found.push_back(g);
            }
        }
        std::sort(found.begin(), found.end());
        for (const auto& f : found) add_class(f);
    }

    void enumerate_indefinite() {
        i64 s = isqrt_i64(D_);
        std::vector<BQForm> reduced;
        for (i64 b = (D_ % 2 == 0) ? 2 : 1; b <= s; b += 2) {
            i64 m = (D_ - b * b) / 4; // a c = -m
            for (i64 d = 1; d * d <= m; ++d) {
                if (m % d != 0) continue;
                for (i64 aa : {d, m / d}) {
                    i64 cc = m / aa;
                    for (const BQForm& f :
                         {BQForm{aa, b, -cc}, BQForm{-aa, b, cc}}) {
                        if (!is_primitive(f)) continue;
                        if (is_reduced_indefinite(f, D_)) reduced.push_back(f);
                    }
                    if (aa == cc) break; // avoid the duplicate divisor pair
                }
            }
        }
        std::sort(reduced.begin(), reduced.end());
        reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
        // partition the reduced forms into rho-cycles
        std::map<BQForm, int> visited;
        std::vector<BQForm> cycle_min;
        for (const auto& f0 : reduced) {
            if (visited.count(f0)) continue;
            int cyc = static_cast<int>(cycle_min.size());
            BQForm best = f0;
            BQForm g = f0;
            long guard = static_cast<long>(reduced.size()) + 8;
            while (true) {
                auto [it, fresh] = visited.emplace(g, cyc);
                if (!fresh) {
                    if (it->second != cyc)
                        throw inconsistency_error("cycle enumeration: rho escaped its cycle");
                    break;
                }
                best = std::min(best, g);
                g = detail::rho_indefinite(g, D_, s);
                if (!is_reduced_indefinite(g, D_))
                    throw inconsistency_error("cycle enumeration: rho left the reduced set");
                if (--guard < 0)
                    throw inconsistency_error("cycle enumeration: cycle longer than form count");
            }
            cycle_min.push_back(best);
        }
        if (visited.size() != reduced.size())
            throw inconsistency_error("cycle enumeration: unvisited reduced forms remain");
        std::sort(cycle_min.begin(), cycle_min.end());
        for (const auto& f : cycle_min) add_class(f);
        // map every reduced form to the index of its cycle's representative
        std::vector<int> cyc_to_class(cycle_min.size());
        {
            std::map<int, BQForm> cyc_best;
            for (const auto& [form, cyc] : visited) {
                auto it = cyc_best.find(cyc);
                if (it == cyc_best.end() || form < it->second) cyc_best.insert_or_assign(cyc, form);
            }
            for (const auto& [cyc, best] : cyc_best)
                cyc_to_class[static_cast<size_t>(cyc)] = index_.at(best);
        }
        for (const auto& [form, cyc] : visited)
            cycle_of_.emplace(form, cyc_to_class[static_cast<size_t>(cyc)]);
    }

    i64 D_;
    std::vector<BQForm> classes_;
    std::map<BQForm, int> index_;
    std::map<BQForm, int> cycle_of_; // reduced indefinite form -> class index
    int principal_ = 0;
    mutable std::map<std::pair<int, int>, int> compose_memo_;
};

/// Convenience: structure of the class group of fundamental discriminant D.
inline ClassGroupInfo class_group(i64 D, bool narrow = true) {
    FormClassGroup g(D);
    return g.info(narrow);
}

/// 4-rank of the narrow class group of D (D > 0) or the class group (D < 0),
/// computed from form classes.
inline int four_rank_forms(i64 D) {
    return class_group(D, /*narrow=*/true).four_rank;
}

/// Wide (ordinary) 2-class number h_2(D): the order of the 2-Sylow subgroup
/// of the ordinary class group.
inline i64 h2_wide(i64 D) {
    ClassGroupInfo info = class_group(D, /*narrow=*/false);
    i64 h2 = 1;
    for (i64 d : info.two_part) h2 *= d;
    return h2;
}

/// Redei's count: the 4-rank r of the narrow class group satisfies
/// 2^r = #{splittings D = D1 * D2 into coprime fundamental discriminants
/// (unordered, including the trivial one) with (D1/p) = 1 for all p | D2 and
/// (D2/p) = 1 for all p | D1}. Valid for every fundamental discriminant.
inline int four_rank_splittings(const std::vector<PrimeDiscriminant>& parts) {
    if (parts.empty()) throw domain_error("four_rank_splittings: no parts");
    int n = static_cast<int>(parts.size());
    int count = 0;
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        // subsets S containing part 0: S = {0} union (mask over parts 1..n-1)
        i64 D1 = parts[0].value, D2 = 1;
        std::vector<int> in_S{0};
        std::vector<int> out_S;
        for (int i = 1; i < n; ++i) {
            if (mask & (1u << (i - 1))) {
                D1 *= parts[static_cast<size_t>(i)].value;
                in_S.push_back(i);
            } else {
                D2 *= parts[static_cast<size_t>(i)].value;
                out_S.push_back(i);
            }
        }
        bool ok = true;
        for (int j : out_S)
            if (kronecker(D1, parts[static_cast<size_t>(j)].prime) != 1) { ok = false; break; }
        if (ok)
            for (int i : in_S)
                if (kronecker(D2, parts[static_cast<size_t>(i)].prime) != 1) { ok = false; break; }
        if (ok) ++count;
    }
    int r = 0;
    while ((1 << (r + 1)) <= count) ++r;
    if ((1 << r) != count)
        throw inconsistency_error("four_rank_splittings: count " + std::to_string(count) +
                                  " is not a power of two");
    return r;
}

inline int four_rank_splittings(const FactoredDiscriminant& fd) {
    return four_rank_splittings(
        std::vector<PrimeDiscriminant>{fd.part[0], fd.part[1], fd.part[2], fd.part[3]});
}

} // namespace narrowtower
