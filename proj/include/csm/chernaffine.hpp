#pragma once

// Localizations of opposite affine Schubert SM classes at translation-group
// fixed points, computed two independent ways: the left recursion along a
// reduced word of the localization point, and a colored-wiring enumeration
// that sums over all swap/transmit choices of the crossings.  Also the
// comparison of the finite projected-Richardson values against the affine
// ones corrected by the normal-direction Euler/Chern factor.

#include <future>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csm/chernfinite.hpp"
#include "csm/common.hpp"
#include "csm/symra.hpp"
#include "csm/weylperm.hpp"

namespace csm::chernaffine {

using chernfinite::alpha_rf;
using chernfinite::inv_one_plus_alpha_rf;
using chernfinite::ProjRichTable;
using symra::RatFunc;
using weylperm::AffinePerm;
using weylperm::Cocharacter;
using weylperm::ParabolicData;

struct AffineLocCache {
    std::map<std::pair<std::vector<long long>, std::vector<long long>>, RatFunc>
        memo;
};

// s_SM of the opposite cell of f localized at g, by peeling the leading
// letter of g:
//   value(f, s_i g') = (1/(1+alpha_i)) [ s_i(value(f, g'))
//                      + alpha_i s_i(value(s_i f, g')) ],
// with base value(f, shift^m) = [f == shift^m].  The i = 0 letter acts on y
// by swapping y_1 and y_n.
inline RatFunc affine_ssm_loc(const AffinePerm& f, const AffinePerm& g,
                              AffineLocCache& cache,
                              bool largest_tiebreak = false) {
    if (f.n() != g.n()) throw value_error("ambient mismatch");
    int n = f.n();
    if (f.degree() != g.degree()) return RatFunc::zero();
    auto key = std::make_pair(f.window, g.window);
    if (auto it = cache.memo.find(key); it != cache.memo.end()) return it->second;

    RatFunc result;
    std::set<int> descents = weylperm::left_descents(g);
    if (descents.empty()) {
        result = f == g ? RatFunc::one() : RatFunc::zero();
    } else {
        int i = largest_tiebreak ? *descents.rbegin() : *descents.begin();
        AffinePerm gprev = weylperm::left_mul_simple(i, g);
        AffinePerm sif = weylperm::left_mul_simple(i, f);
        RatFunc v1 = affine_ssm_loc(f, gprev, cache, largest_tiebreak);
        RatFunc v2 = affine_ssm_loc(sif, gprev, cache, largest_tiebreak);
        result = symra::mul(
            inv_one_plus_alpha_rf(i, n),
            symra::add(symra::act_y(v1, i, n),
                       symra::mul(alpha_rf(i, n), symra::act_y(v2, i, n))));
    }
    cache.memo.emplace(std::move(key), result);
    return result;
}

// ---------------------------------------------------------------------------
// Colored-wiring oracle
// ---------------------------------------------------------------------------

namespace detail {

struct Crossing {
    int left;           // fundamental column of the "/" strand, 1..n
    bool seam;          // crossing between columns n and n+1
    RatFunc transmit;   // colors jump strands and stay in their columns
    RatFunc crossed;    // colors follow their strands across
};

}  // namespace detail

// Sums the weights of all swap/transmit choices of a wiring diagram of g
// whose top colors realize f.  Independent of the recursion above, which it
// cross-checks.
inline RatFunc coloring_oracle(const AffinePerm& f, const AffinePerm& g) {
    if (f.n() != g.n()) throw value_error("ambient mismatch");
    int n = g.n();
    int len = weylperm::length(g);
    limits::check_size(len, 16, "coloring oracle supports l(g) <= 16");

    weylperm::Word word = weylperm::reduced_word(g);
    long long m = word.shift;
    auto residue = [&](long long v) {
        return static_cast<int>(((v - 1) % n + n) % n) + 1;
    };

    // State above the shift block: strand at column p entered at p - m.
    std::vector<long long> color(n + 1), weight_idx(n + 1);
    for (int p = 1; p <= n; ++p) {
        color[p] = p - m;
        weight_idx[p] = residue(g(p - m));
    }

    // Crossings bottom-to-top are the reduced word read right to left.
    std::vector<detail::Crossing> layers;
    {
        std::vector<long long> w = weight_idx;
        for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
            int b = *it;
            int L = b == 0 ? n : b;
            int R = b == 0 ? 1 : b + 1;
            detail::Crossing c;
            c.left = L;
            c.seam = b == 0;
            int ui = static_cast<int>(w[L]), vi = static_cast<int>(w[R]);
            auto [den, ds] = symra::canonical_linear(
                1, {{symra::yvar(ui), symra::Int(1)}, {symra::yvar(vi), symra::Int(-1)}});
            auto [num, ns] = symra::linear_diff(0, symra::yvar(ui), symra::yvar(vi));
            c.transmit = symra::inverse_of_factors({{den, 1}}, ds);
            c.crossed = symra::make_ratfunc(num.to_polynomial().scaled(ns / ds),
                                            {{den, 1}}, false);
            layers.push_back(std::move(c));
            std::swap(w[L], w[R]);
        }
    }

    AffinePerm finv = f.inverse();
    std::vector<long long> target(n + 1);
    for (int p = 1; p <= n; ++p) target[p] = finv(p);

    // Depth-first sum over the 2^len swap/transmit choices, sharing the
    // partial product along the prefix.
    struct Walker {
        const std::vector<detail::Crossing>& layers;
        const std::vector<long long>& target;
        int n;

        RatFunc run(size_t depth, std::vector<long long>& color,
                    const RatFunc& partial) {
            if (depth == layers.size()) {
                for (int p = 1; p <= n; ++p)
                    if (color[p] != target[p]) return RatFunc::zero();
                return partial;
            }
            const auto& c = layers[depth];
            int L = c.left, R = c.seam ? 1 : c.left + 1;
            RatFunc total;
            {  // transmit: column colors unchanged
                RatFunc sub = run(depth + 1, color, symra::mul(partial, c.transmit));
                total = symra::add(total, sub);
            }
            {  // crossed: colors follow strands, with the seam shift
                long long x = color[L];
                long long y = c.seam ? color[R] + n : color[R];
                long long savedL = color[L], savedR = color[R];
                color[L] = y;
                color[R] = c.seam ? x - n : x;
                RatFunc sub = run(depth + 1, color, symra::mul(partial, c.crossed));
                total = symra::add(total, sub);
                color[L] = savedL;
                color[R] = savedR;
            }
            return total;
        }
    };

    Walker walker{layers, target, n};

    int threads = thread_budget();
    if (threads <= 1 || layers.size() < 4) {
        return walker.run(0, color, RatFunc::one());
    }
    // Split the choice space on the first few layers; chunks are combined in
    // index order so the result is independent of scheduling.
    int split = 1;
    while ((1 << split) < threads && split < static_cast<int>(layers.size()) - 1)
        ++split;
    int chunks = 1 << split;
    std::vector<std::future<RatFunc>> futures;
    for (int chunk = 0; chunk < chunks; ++chunk) {
        futures.push_back(std::async(std::launch::async, [&, chunk]() {
            std::vector<long long> local = color;
            RatFunc partial = RatFunc::one();
            for (int d = 0; d < split; ++d) {
                const auto& c = layers[d];
                int L = c.left, R = c.seam ? 1 : c.left + 1;
                if ((chunk >> d) & 1) {
                    long long x = local[L];
                    long long y = c.seam ? local[R] + n : local[R];
                    local[L] = y;
                    local[R] = c.seam ? x - n : x;
                    partial = symra::mul(partial, c.crossed);
                } else {
                    partial = symra::mul(partial, c.transmit);
                }
            }
            Walker w2{layers, target, n};
            return w2.run(split, local, partial);
        }));
    }
    RatFunc total;
    for (auto& fut : futures) total = symra::add(total, fut.get());
    return total;
}

// ---------------------------------------------------------------------------
// Right recursion check
// ---------------------------------------------------------------------------

// (g(alpha_i) + 1) value(f, g s_i) == value(f, g) + g(alpha_i) value(f s_i, g),
// where g acts through its finite part only.
inline bool right_recursion_check(const AffinePerm& f, const AffinePerm& g, int i,
                                  AffineLocCache& cache) {
    int n = f.n();
    auto [alpha_form, alpha_sign] = chernfinite::alpha_linear(i, n);
    symra::LinearForm raw = alpha_form;
    for (auto& [v, c] : raw.coef) c *= alpha_sign.get_num();
    raw.constant *= alpha_sign.get_num();
    RatFunc g_alpha = weylperm::finite_part_action_ratfunc(g, raw);

    RatFunc lhs = symra::mul(symra::add(g_alpha, RatFunc::one()),
                             affine_ssm_loc(f, weylperm::right_mul_simple(g, i), cache));
    RatFunc rhs = symra::add(
        affine_ssm_loc(f, g, cache),
        symra::mul(g_alpha,
                   affine_ssm_loc(weylperm::right_mul_simple(f, i), g, cache)));
    return symra::is_equal(lhs, rhs);
}

// ---------------------------------------------------------------------------
// Comparison with the finite projected-Richardson values
// ---------------------------------------------------------------------------

// prod over ordered pairs mu_a > mu_b of ((1+y_a-y_b)/(y_a-y_b))^{mu_a-mu_b-1}.
inline RatFunc comparison_factor(const std::vector<long long>& mu) {
    int n = static_cast<int>(mu.size());
    symra::Polynomial num = symra::Polynomial::constant(symra::Rat(1));
    std::vector<std::pair<symra::LinearForm, int>> den;
    symra::Rat scale(1);
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            if (mu[a - 1] <= mu[b - 1]) continue;
            int e = static_cast<int>(mu[a - 1] - mu[b - 1]) - 1;
            if (e == 0) continue;
            auto [chern, cs] = symra::canonical_linear(
                1, {{symra::yvar(a), symra::Int(1)}, {symra::yvar(b), symra::Int(-1)}});
            auto [root, s] = symra::linear_diff(0, symra::yvar(a), symra::yvar(b));
            for (int q = 0; q < e; ++q) {
                num = num * chern.to_polynomial();
                scale *= cs / s;
            }
            den.emplace_back(std::move(root), e);
        }
    return symra::make_ratfunc(num.scaled(scale), std::move(den), true);
}

struct ComparisonReport {
    int checked = 0;
    std::vector<std::string> mismatches;
    bool ok() const { return mismatches.empty(); }
};

// Checks, for every u t_lambda w^{-1} and every mu in the orbit, that the
// finite recursion value equals the affine localization at t_mu times the
// comparison factor.
inline ComparisonReport thm62_compare(const ParabolicData& P) {
    limits::check_size(P.n, 4, "finite/affine comparison supports n <= 4");
    ProjRichTable table(P);
    AffineLocCache cache;
    ComparisonReport report;
    for (auto& f : table.bplus()) {
        for (auto& mu : table.orbit()) {
            RatFunc finite = table.at(f, mu);
            AffinePerm tmu = AffinePerm::translation(Cocharacter{mu});
            RatFunc affine =
                symra::mul(affine_ssm_loc(f, tmu, cache), comparison_factor(mu));
            ++report.checked;
            if (!symra::is_equal(finite, affine)) {
                std::string id = "f=";
                for (size_t q = 0; q < f.window.size(); ++q)
                    id += (q ? "," : "") + std::to_string(f.window[q]);
                id += " mu=";
                for (size_t q = 0; q < mu.size(); ++q)
                    id += (q ? "," : "") + std::to_string(mu[q]);
                report.mismatches.push_back(id);
            }
        }
    }
    return report;
}

}  // namespace csm::chernaffine
