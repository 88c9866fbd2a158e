#pragma once

// Finite symmetric group S_n and the extended affine symmetric group in
// window notation: group arithmetic, length and reduced words, Bruhat order,
// the extended P-Bruhat order (three independent algorithms), bounded affine
// permutations and DOT export of the single-step relation digraph.
//
// Windows are 1-based: window[i-1] = f(i), and f(i + n) = f(i) + n.

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csm/common.hpp"
#include "csm/symra.hpp"

namespace csm::weylperm {

// ---------------------------------------------------------------------------
// Finite permutations
// ---------------------------------------------------------------------------

struct FinitePerm {
    std::vector<int> img;  // img[i-1] = w(i), a permutation of 1..n

    static FinitePerm identity(int n) {
        FinitePerm w;
        w.img.resize(n);
        std::iota(w.img.begin(), w.img.end(), 1);
        return w;
    }
    static FinitePerm longest(int n) {
        FinitePerm w;
        for (int i = n; i >= 1; --i) w.img.push_back(i);
        return w;
    }
    static FinitePerm from_one_line(std::vector<int> img) {
        int n = static_cast<int>(img.size());
        std::vector<bool> seen(n + 1, false);
        for (int v : img) {
            if (v < 1 || v > n || seen[v])
                throw value_error("one-line notation must be a permutation of 1..n");
            seen[v] = true;
        }
        return FinitePerm{std::move(img)};
    }

    int n() const { return static_cast<int>(img.size()); }
    int operator()(int i) const { return img[i - 1]; }

    FinitePerm compose(const FinitePerm& other) const {  // (this o other)
        if (n() != other.n()) throw value_error("ambient mismatch");
        FinitePerm r;
        r.img.reserve(n());
        for (int i = 1; i <= n(); ++i) r.img.push_back(img[other(i) - 1]);
        return r;
    }
    FinitePerm inverse() const {
        FinitePerm r;
        r.img.resize(n());
        for (int i = 1; i <= n(); ++i) r.img[img[i - 1] - 1] = i;
        return r;
    }
    int length() const {
        int inv = 0;
        for (int i = 0; i < n(); ++i)
            for (int j = i + 1; j < n(); ++j)
                if (img[i] > img[j]) ++inv;
        return inv;
    }
    bool is_identity() const {
        for (int i = 1; i <= n(); ++i)
            if (img[i - 1] != i) return false;
        return true;
    }

    friend bool operator==(const FinitePerm& a, const FinitePerm& b) {
        return a.img == b.img;
    }
    friend bool operator<(const FinitePerm& a, const FinitePerm& b) {
        return a.img < b.img;
    }
};

inline FinitePerm simple_finite(int i, int n) {
    if (i < 1 || i > n - 1) throw value_error("simple reflection index out of range");
    FinitePerm w = FinitePerm::identity(n);
    std::swap(w.img[i - 1], w.img[i]);
    return w;
}

inline FinitePerm transposition(int a, int b, int n) {
    FinitePerm w = FinitePerm::identity(n);
    std::swap(w.img[a - 1], w.img[b - 1]);
    return w;
}

inline std::vector<FinitePerm> all_perms(int n) {
    std::vector<FinitePerm> out;
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    do {
        out.push_back(FinitePerm{img});
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

// Bruhat order on S_n by the sorted-prefix criterion.
inline bool finite_bruhat_leq(const FinitePerm& u, const FinitePerm& w) {
    if (u.n() != w.n()) throw value_error("ambient mismatch");
    int n = u.n();
    std::vector<int> pu, pw;
    for (int k = 1; k <= n; ++k) {
        pu.push_back(u(k));
        pw.push_back(w(k));
        std::vector<int> su = pu, sw = pw;
        std::sort(su.begin(), su.end());
        std::sort(sw.begin(), sw.end());
        for (int j = 0; j < k; ++j)
            if (su[j] > sw[j]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Cocharacters and affine permutations
// ---------------------------------------------------------------------------

struct Cocharacter {
    std::vector<long long> entries;

    int n() const { return static_cast<int>(entries.size()); }
    bool is_dominant() const {
        for (size_t i = 1; i < entries.size(); ++i)
            if (entries[i - 1] < entries[i]) return false;
        return true;
    }
    long long total() const {
        long long s = 0;
        for (long long e : entries) s += e;
        return s;
    }
    friend bool operator==(const Cocharacter& a, const Cocharacter& b) {
        return a.entries == b.entries;
    }
};

class AffinePerm {
  public:
    std::vector<long long> window;

    AffinePerm() = default;

    static AffinePerm from_window(std::vector<long long> w) {
        int n = static_cast<int>(w.size());
        if (n < 1) throw value_error("window must be nonempty");
        std::vector<bool> seen(n, false);
        long long total = 0;
        for (int i = 1; i <= n; ++i) {
            long long v = w[i - 1];
            int res = static_cast<int>(((v - 1) % n + n) % n);
            if (seen[res])
                throw value_error("window entries must be pairwise distinct modulo n");
            seen[res] = true;
            total += v - i;
        }
        if (total % n != 0)
            throw value_error("window displacement sum must be divisible by n");
        AffinePerm f;
        f.window = std::move(w);
        return f;
    }

    static AffinePerm identity(int n) {
        std::vector<long long> w(n);
        std::iota(w.begin(), w.end(), 1);
        return from_window(std::move(w));
    }
    static AffinePerm translation(const Cocharacter& lambda) {
        int n = lambda.n();
        std::vector<long long> w(n);
        for (int i = 1; i <= n; ++i) w[i - 1] = i + lambda.entries[i - 1] * n;
        return from_window(std::move(w));
    }
    // s_i swaps i+mn and i+1+mn for all m; i = 0 means the pair (n, n+1).
    static AffinePerm simple(int i, int n) {
        if (i < 0 || i > n - 1) throw value_error("simple index out of range 0..n-1");
        AffinePerm f = identity(n);
        if (i >= 1) {
            f.window[i - 1] = i + 1;
            f.window[i] = i;
        } else {
            f.window[0] = 0;
            f.window[n - 1] = n + 1;
        }
        return f;
    }
    static AffinePerm shift(long long m, int n) {
        std::vector<long long> w(n);
        for (int i = 1; i <= n; ++i) w[i - 1] = i + m;
        return from_window(std::move(w));
    }
    static AffinePerm lift(const FinitePerm& w) {
        std::vector<long long> win(w.img.begin(), w.img.end());
        return from_window(std::move(win));
    }
    // u t_lambda w^{-1}
    static AffinePerm from_uw(const FinitePerm& u, const FinitePerm& w,
                              const Cocharacter& lambda) {
        return lift(u).compose(translation(lambda)).compose(lift(w).inverse());
    }

    int n() const { return static_cast<int>(window.size()); }

    long long operator()(long long i) const {
        int nn = n();
        long long q = (i - 1) / nn;
        long long r = (i - 1) % nn;
        if (r < 0) {
            r += nn;
            q -= 1;
        }
        return window[r] + q * nn;
    }

    AffinePerm compose(const AffinePerm& g) const {  // (this o g)(i) = this(g(i))
        if (n() != g.n()) throw value_error("ambient mismatch");
        std::vector<long long> w(n());
        for (int i = 1; i <= n(); ++i) w[i - 1] = (*this)(g(i));
        return from_window(std::move(w));
    }
    AffinePerm inverse() const {
        int nn = n();
        std::vector<long long> w(nn);
        for (int p = 1; p <= nn; ++p) {
            long long v = window[p - 1];
            long long q = ((v - 1) % nn + nn) % nn + 1;  // residue of v in 1..n
            w[q - 1] = p + q - v;
        }
        return from_window(std::move(w));
    }

    long long degree() const {
        long long total = 0;
        for (int i = 1; i <= n(); ++i) total += window[i - 1] - i;
        return total / n();
    }

    FinitePerm finite_part() const {
        int nn = n();
        std::vector<int> img(nn);
        for (int i = 1; i <= nn; ++i)
            img[i - 1] = static_cast<int>(((window[i - 1] - 1) % nn + nn) % nn) + 1;
        return FinitePerm::from_one_line(std::move(img));
    }
    // lambda with f = finite_part * t_lambda, i.e. f(i) = w(i) + lambda_i n.
    Cocharacter translation_part() const {
        FinitePerm w = finite_part();
        Cocharacter lam;
        for (int i = 1; i <= n(); ++i)
            lam.entries.push_back((window[i - 1] - w(i)) / n());
        return lam;
    }

    bool is_identity() const {
        for (int i = 1; i <= n(); ++i)
            if (window[i - 1] != i) return false;
        return true;
    }

    friend bool operator==(const AffinePerm& a, const AffinePerm& b) {
        return a.window == b.window;
    }
    friend bool operator<(const AffinePerm& a, const AffinePerm& b) {
        return a.window < b.window;
    }
};

inline AffinePerm left_mul_simple(int i, const AffinePerm& f) {
    return AffinePerm::simple(i, f.n()).compose(f);
}
inline AffinePerm right_mul_simple(const AffinePerm& f, int i) {
    return f.compose(AffinePerm::simple(i, f.n()));
}

// Applies only the finite permutation part to the y indices of a linear form
// (the imaginary root is zero in the small-torus picture, so translations act
// trivially).  Returns the canonical form and the sign it was scaled by.
inline std::pair<symra::LinearForm, symra::Rat> finite_part_action(
    const AffinePerm& f, const symra::LinearForm& form) {
    FinitePerm w = f.finite_part();
    std::vector<std::pair<symra::Variable, symra::Int>> coef;
    for (auto& [v, c] : form.coef) {
        if (v.family == symra::Family::Y) {
            if (v.index < 1 || v.index > w.n())
                throw value_error("y index outside the ambient of the permutation");
            coef.emplace_back(symra::yvar(w(v.index)), c);
        } else {
            coef.emplace_back(v, c);
        }
    }
    return symra::canonical_linear(form.constant, std::move(coef));
}

inline symra::RatFunc finite_part_action_ratfunc(const AffinePerm& f,
                                                 const symra::LinearForm& form) {
    auto [canon, s] = finite_part_action(f, form);
    return symra::RatFunc::from_polynomial(canon.to_polynomial().scaled(s));
}

// ---------------------------------------------------------------------------
// Length, descents, reduced words
// ---------------------------------------------------------------------------

// Affine inversion count: pairs (a, j) with 1 <= a <= n, a < j, f(a) > f(j).
inline int length(const AffinePerm& f) {
    int nn = f.n();
    long long count = 0;
    for (int a = 1; a <= nn; ++a) {
        for (int b = 1; b <= nn; ++b) {
            if (a == b) continue;
            // count m with b + m n > a and f(b) + m n < f(a)
            long long lo_m = a > b ? 1 : 0;  // smallest m with b + m n > a
            long long diff = f(a) - f(b);    // need m n < diff
            if (diff <= 0) continue;
            long long hi_m = (diff - 1) / nn;  // largest m with m n < diff
            if (hi_m >= lo_m) count += hi_m - lo_m + 1;
        }
    }
    return static_cast<int>(count);
}

// i in 0..n-1 is a left descent iff f^{-1}(i) > f^{-1}(i+1).
inline std::set<int> left_descents(const AffinePerm& f) {
    AffinePerm inv = f.inverse();
    std::set<int> out;
    for (int i = 0; i <= f.n() - 1; ++i)
        if (inv(i) > inv(i + 1)) out.insert(i);
    return out;
}

struct Word {
    std::vector<int> letters;  // f = s_{letters[0]} ... s_{letters[l-1]} shift^m
    long long shift = 0;
};

// Greedy descent stripping; smallest descent first unless reversed.
inline Word reduced_word(const AffinePerm& f, bool largest_tiebreak = false) {
    Word word;
    word.shift = f.degree();
    AffinePerm rest = f.compose(AffinePerm::shift(-word.shift, f.n()));
    while (!rest.is_identity()) {
        std::set<int> ds = left_descents(rest);
        if (ds.empty()) throw error("internal: nonidentity element without descent");
        int i = largest_tiebreak ? *ds.rbegin() : *ds.begin();
        word.letters.push_back(i);
        rest = left_mul_simple(i, rest);
    }
    return word;
}

inline AffinePerm from_word(const Word& word, int n) {
    AffinePerm f = AffinePerm::shift(word.shift, n);
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it)
        f = left_mul_simple(*it, f);
    return f;
}

// ---------------------------------------------------------------------------
// Bruhat order on the extended group
// ---------------------------------------------------------------------------

// Descent recursion on the degree-zero parts; elements of different degrees
// are incomparable and compare false.
inline bool bruhat_leq(const AffinePerm& f, const AffinePerm& g) {
    if (f.n() != g.n()) throw value_error("ambient mismatch");
    if (f.degree() != g.degree()) return false;
    AffinePerm a = f.compose(AffinePerm::shift(-f.degree(), f.n()));
    AffinePerm b = g.compose(AffinePerm::shift(-g.degree(), g.n()));
    while (true) {
        if (b.is_identity()) return a.is_identity();
        std::set<int> db = left_descents(b);
        int i = *db.begin();
        if (left_descents(a).count(i)) a = left_mul_simple(i, a);
        b = left_mul_simple(i, b);
    }
}

// ---------------------------------------------------------------------------
// Parabolic data
// ---------------------------------------------------------------------------

struct ParabolicData {
    int n = 0;
    Cocharacter lambda;        // dominant, stabilizer exactly W_P
    std::set<int> simple_set;  // {i : lambda_i = lambda_{i+1}}
    std::vector<int> block_id; // per position, 0-based block index

    static ParabolicData from_lambda(Cocharacter lam) {
        if (!lam.is_dominant())
            throw value_error("cocharacter must be dominant (weakly decreasing)");
        ParabolicData p;
        p.n = lam.n();
        p.lambda = std::move(lam);
        p.block_id.assign(p.n, 0);
        int block = 0;
        for (int i = 1; i <= p.n - 1; ++i) {
            if (p.lambda.entries[i - 1] == p.lambda.entries[i])
                p.simple_set.insert(i);
            else
                ++block;
            p.block_id[i] = block;
        }
        return p;
    }

    // Canonical dominant cocharacter: constant on blocks, dropping by one
    // across each block boundary.
    static ParabolicData from_simple_set(int n, const std::set<int>& simples) {
        for (int i : simples)
            if (i < 1 || i > n - 1)
                throw value_error("parabolic simple index out of range 1..n-1");
        Cocharacter lam;
        lam.entries.resize(n);
        long long level = 0;
        for (int i = n; i >= 1; --i) {
            lam.entries[i - 1] = level;
            if (i > 1 && !simples.count(i - 1)) ++level;
        }
        ParabolicData p = from_lambda(std::move(lam));
        if (p.simple_set != simples)
            throw error("internal: canonical cocharacter stabilizer mismatch");
        return p;
    }

    bool same_block(int a, int b) const { return block_id[a - 1] == block_id[b - 1]; }

    // Pairs (a < b) with the root -y_a + y_b outside R^+_P.
    std::vector<std::pair<int, int>> pairs_outside() const {
        std::vector<std::pair<int, int>> out;
        for (int a = 1; a <= n; ++a)
            for (int b = a + 1; b <= n; ++b)
                if (!same_block(a, b)) out.emplace_back(a, b);
        return out;
    }
    std::vector<std::pair<int, int>> pairs_inside() const {
        std::vector<std::pair<int, int>> out;
        for (int a = 1; a <= n; ++a)
            for (int b = a + 1; b <= n; ++b)
                if (same_block(a, b)) out.emplace_back(a, b);
        return out;
    }

    bool in_WP(const FinitePerm& v) const {
        for (int i = 1; i <= n; ++i)
            if (!same_block(i, v(i))) return false;
        return true;
    }
    // Minimal coset representatives: increasing on every block.
    bool is_minimal_rep(const FinitePerm& w) const {
        for (int i : simple_set)
            if (w(i) > w(i + 1)) return false;
        return true;
    }
    std::vector<FinitePerm> wp_elements() const {
        std::vector<FinitePerm> out;
        for (auto& v : all_perms(n))
            if (in_WP(v)) out.push_back(v);
        return out;
    }
    std::vector<FinitePerm> minimal_reps() const {
        std::vector<FinitePerm> out;
        for (auto& w : all_perms(n))
            if (is_minimal_rep(w)) out.push_back(w);
        return out;
    }
    // w v in W^P for a unique v in W_P: sort w ascending inside each block.
    FinitePerm coset_minimize(const FinitePerm& w) const {
        std::vector<int> img = w.img;
        int start = 0;
        for (int i = 1; i <= n; ++i) {
            bool boundary = i == n || !same_block(i, i + 1);
            if (boundary) {
                std::sort(img.begin() + start, img.begin() + i);
                start = i;
            }
        }
        return FinitePerm::from_one_line(std::move(img));
    }

    // Orbit W lambda as distinct rearrangements, ascending lexicographic.
    std::vector<std::vector<long long>> orbit() const {
        std::vector<long long> mu = lambda.entries;
        std::sort(mu.begin(), mu.end());
        std::vector<std::vector<long long>> out;
        do {
            out.push_back(mu);
        } while (std::next_permutation(mu.begin(), mu.end()));
        return out;
    }
};

inline std::vector<long long> act_on_weight(const FinitePerm& v,
                                            const std::vector<long long>& mu) {
    std::vector<long long> out(mu.size());
    for (int i = 1; i <= v.n(); ++i) out[v(i) - 1] = mu[i - 1];
    return out;
}

inline std::vector<long long> swap_weight(const std::vector<long long>& mu, int i) {
    std::vector<long long> out = mu;
    std::swap(out[i - 1], out[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Extended P-Bruhat order
// ---------------------------------------------------------------------------

enum class ExtPAlgorithm { cover_bfs, coset_reduce, affine };

namespace detail {

// Single-step relation: u -> u t_{ab} for (a, b) outside P with u(a) < u(b).
inline std::vector<FinitePerm> ext_p_steps(const FinitePerm& u,
                                           const ParabolicData& P) {
    std::vector<FinitePerm> out;
    for (auto& [a, b] : P.pairs_outside())
        if (u(a) < u(b)) out.push_back(u.compose(transposition(a, b, P.n)));
    return out;
}

inline bool ext_p_cover_bfs(const FinitePerm& u, const FinitePerm& w,
                            const ParabolicData& P) {
    if (u == w) return true;
    std::set<FinitePerm> seen{u};
    std::deque<FinitePerm> queue{u};
    while (!queue.empty()) {
        FinitePerm v = queue.front();
        queue.pop_front();
        for (auto& next : ext_p_steps(v, P)) {
            if (next == w) return true;
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    return false;
}

inline bool ext_p_coset_reduce(const FinitePerm& u, const FinitePerm& w,
                               const ParabolicData& P) {
    FinitePerm wmin = P.coset_minimize(w);
    FinitePerm v = w.inverse().compose(wmin);  // w v = wmin
    return finite_bruhat_leq(u.compose(v), wmin);
}

inline bool ext_p_affine(const FinitePerm& u, const FinitePerm& w,
                         const ParabolicData& P) {
    AffinePerm f = AffinePerm::from_uw(u, w, P.lambda);
    for (auto& mu : P.orbit()) {
        Cocharacter c{mu};
        if (bruhat_leq(f, AffinePerm::translation(c))) return true;
    }
    return false;
}

}  // namespace detail

inline bool ext_p_bruhat(const FinitePerm& u, const FinitePerm& w,
                         const ParabolicData& P,
                         ExtPAlgorithm alg = ExtPAlgorithm::coset_reduce) {
    if (u.n() != P.n || w.n() != P.n) throw value_error("ambient mismatch");
    switch (alg) {
        case ExtPAlgorithm::cover_bfs: return detail::ext_p_cover_bfs(u, w, P);
        case ExtPAlgorithm::coset_reduce: return detail::ext_p_coset_reduce(u, w, P);
        case ExtPAlgorithm::affine: return detail::ext_p_affine(u, w, P);
    }
    throw value_error("unknown extended P-Bruhat algorithm");
}

// Coordinatewise criterion for the maximal parabolic missing s_k.
inline bool k_bruhat(const FinitePerm& u, const FinitePerm& w, int k) {
    if (u.n() != w.n()) throw value_error("ambient mismatch");
    if (k < 1 || k >= u.n()) throw value_error("k must satisfy 1 <= k < n");
    for (int a = 1; a <= k; ++a)
        if (u(a) > w(a)) return false;
    for (int b = k + 1; b <= u.n(); ++b)
        if (u(b) < w(b)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Bounded affine permutations
// ---------------------------------------------------------------------------

inline bool is_bounded(const AffinePerm& f) {
    for (int i = 1; i <= f.n(); ++i)
        if (f.window[i - 1] < i || f.window[i - 1] > i + f.n()) return false;
    return true;
}

// All f with i <= f(i) <= i + n and degree k, in window-lexicographic order.
inline std::vector<AffinePerm> enumerate_bounded(int k, int n) {
    if (k < 0 || k > n) throw value_error("degree must satisfy 0 <= k <= n");
    std::vector<AffinePerm> out;
    std::vector<long long> window(n);
    std::vector<bool> used(n, false);
    long long target = static_cast<long long>(k) * n;
    auto rec = [&](auto&& self, int pos, long long sum) -> void {
        if (pos > n) {
            if (sum == target) out.push_back(AffinePerm::from_window(window));
            return;
        }
        for (long long v = pos; v <= pos + n; ++v) {
            int res = static_cast<int>(((v - 1) % n + n) % n);
            if (used[res]) continue;
            if (sum + (v - pos) > target) break;
            used[res] = true;
            window[pos - 1] = v;
            self(self, pos + 1, sum + (v - pos));
            used[res] = false;
        }
    };
    rec(rec, 1, 0);
    return out;
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

inline std::string one_line_str(const FinitePerm& w) {
    std::string s;
    for (int v : w.img) s += std::to_string(v);
    return s;
}

// Digraph of all single-reflection relations u -> u t_{ab}.
inline std::string poset_export(const ParabolicData& P) {
    limits::check_size(P.n, 6, "poset export supports n <= 6");
    std::vector<std::pair<std::string, std::string>> arcs;
    for (auto& u : all_perms(P.n))
        for (auto& w : detail::ext_p_steps(u, P))
            arcs.emplace_back(one_line_str(u), one_line_str(w));
    std::sort(arcs.begin(), arcs.end());
    std::ostringstream out;
    out << "digraph extended_p_bruhat {\n";
    for (auto& [a, b] : arcs) out << "  \"" << a << "\" -> \"" << b << "\";\n";
    out << "}\n";
    return out.str();
}

inline std::vector<std::pair<std::string, std::string>> poset_arcs(
    const ParabolicData& P) {
    std::vector<std::pair<std::string, std::string>> arcs;
    for (auto& u : all_perms(P.n))
        for (auto& w : detail::ext_p_steps(u, P))
            arcs.emplace_back(one_line_str(u), one_line_str(w));
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

}  // namespace csm::weylperm
