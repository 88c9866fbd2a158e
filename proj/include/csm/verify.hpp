#pragma once

// Named identity suites.  Each suite runs a deterministic sweep of instances
// and reports pass/fail per instance; failures carry a replayable id.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csm/chernaffine.hpp"
#include "csm/chernfinite.hpp"
#include "csm/common.hpp"
#include "csm/positroid.hpp"
#include "csm/symra.hpp"
#include "csm/weylperm.hpp"

#include "json.hpp"

namespace csm::verify {

using chernaffine::AffineLocCache;
using chernfinite::DLKind;
using chernfinite::LocTable;
using chernfinite::SchubertTables;
using symra::RatFunc;
using weylperm::AffinePerm;
using weylperm::Cocharacter;
using weylperm::FinitePerm;
using weylperm::ParabolicData;

struct Instance {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<Instance> instances;

    bool all_pass() const {
        for (auto& inst : instances)
            if (!inst.pass) return false;
        return true;
    }
    int failure_count() const {
        int c = 0;
        for (auto& inst : instances)
            if (!inst.pass) ++c;
        return c;
    }
    nlohmann::json to_json() const {
        nlohmann::json j;
        j["suite"] = suite;
        j["instances"] = instances.size();
        j["failures"] = nlohmann::json::array();
        for (auto& inst : instances)
            if (!inst.pass) {
                nlohmann::json f;
                f["id"] = inst.id;
                if (!inst.detail.empty()) f["detail"] = inst.detail;
                j["failures"].push_back(std::move(f));
            }
        return j;
    }
};

namespace detail {

inline std::string perm_str(const FinitePerm& w) {
    return weylperm::one_line_str(w);
}

inline std::string window_str(const AffinePerm& f) {
    std::string s;
    for (size_t i = 0; i < f.window.size(); ++i)
        s += (i ? "," : "") + std::to_string(f.window[i]);
    return s;
}

inline std::string set_str(const std::set<int>& s) {
    std::string out;
    for (int i : s) out += (out.empty() ? "" : ",") + std::to_string(i);
    return out.empty() ? "-" : out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Local moves on string diagrams (braid, unitarity, normalization)
// ---------------------------------------------------------------------------

namespace detail {

// Flat simulator: m strands at columns 1..m with fixed weights; layers are
// adjacent column crossings.  Sums swap/transmit choices whose final column
// colors match the target.
inline RatFunc flat_diagram_weight(int m, const std::vector<RatFunc>& weights,
                                   const std::vector<int>& layers,
                                   const std::vector<int>& target) {
    struct State {
        std::vector<int> strand_at;  // column -> strand id
        std::vector<int> color_at;   // column -> color
    };
    RatFunc total;
    State init;
    init.strand_at.resize(m + 1);
    init.color_at.resize(m + 1);
    for (int c = 1; c <= m; ++c) {
        init.strand_at[c] = c;
        init.color_at[c] = c;
    }
    auto rec = [&](auto&& self, size_t depth, State state, RatFunc partial) -> void {
        if (partial.is_zero()) return;
        if (depth == layers.size()) {
            for (int c = 1; c <= m; ++c)
                if (state.color_at[c] != target[c - 1]) return;
            total = symra::add(total, partial);
            return;
        }
        int a = layers[depth];
        const RatFunc& u = weights[state.strand_at[a] - 1];
        const RatFunc& v = weights[state.strand_at[a + 1] - 1];
        RatFunc diff = symra::sub(u, v);
        RatFunc denom_inv = symra::inverse(symra::add(RatFunc::one(), diff));
        State next = state;
        std::swap(next.strand_at[a], next.strand_at[a + 1]);
        // transmit: colors stay in their columns
        self(self, depth + 1, next, symra::mul(partial, denom_inv));
        // crossed: colors follow the strands
        std::swap(next.color_at[a], next.color_at[a + 1]);
        self(self, depth + 1, next,
             symra::mul(partial, symra::mul(diff, denom_inv)));
    };
    rec(rec, 0, init, RatFunc::one());
    return total;
}

}  // namespace detail

// Braid move on three strands, unitarity on two, and the triviality of an
// equal-weight crossing, each checked for every boundary color pattern with
// generic strand weights y_1, y_2, y_3.
inline Report ybe() {
    Report report;
    report.suite = "ybe";
    std::vector<RatFunc> w3 = {
        RatFunc::from_polynomial(symra::Polynomial::variable(symra::yvar(1))),
        RatFunc::from_polynomial(symra::Polynomial::variable(symra::yvar(2))),
        RatFunc::from_polynomial(symra::Polynomial::variable(symra::yvar(3)))};
    std::vector<int> perm3 = {1, 2, 3};
    std::vector<std::vector<int>> patterns3;
    do {
        patterns3.push_back(perm3);
    } while (std::next_permutation(perm3.begin(), perm3.end()));
    for (auto& target : patterns3) {
        RatFunc lhs = detail::flat_diagram_weight(3, w3, {1, 2, 1}, target);
        RatFunc rhs = detail::flat_diagram_weight(3, w3, {2, 1, 2}, target);
        Instance inst;
        inst.id = "braid target=" + std::to_string(target[0]) +
                  std::to_string(target[1]) + std::to_string(target[2]);
        inst.pass = symra::is_equal(lhs, rhs);
        report.instances.push_back(std::move(inst));
    }
    std::vector<RatFunc> w2 = {w3[0], w3[1]};
    for (auto& target : std::vector<std::vector<int>>{{1, 2}, {2, 1}}) {
        RatFunc lhs = detail::flat_diagram_weight(2, w2, {1, 1}, target);
        RatFunc rhs = detail::flat_diagram_weight(2, w2, {}, target);
        Instance inst;
        inst.id = "unitary target=" + std::to_string(target[0]) +
                  std::to_string(target[1]);
        inst.pass = symra::is_equal(lhs, rhs);
        report.instances.push_back(std::move(inst));
    }
    std::vector<RatFunc> weq = {w3[0], w3[0]};  // equal spectral weights
    for (auto& target : std::vector<std::vector<int>>{{1, 2}, {2, 1}}) {
        RatFunc lhs = detail::flat_diagram_weight(2, weq, {1}, target);
        RatFunc rhs = detail::flat_diagram_weight(2, weq, {}, target);
        Instance inst;
        inst.id = "normalization target=" + std::to_string(target[0]) +
                  std::to_string(target[1]);
        inst.pass = symra::is_equal(lhs, rhs);
        report.instances.push_back(std::move(inst));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Transversality-product recursion on Richardson tables
// ---------------------------------------------------------------------------

namespace detail {

inline bool richardson_recursion_holds(const SchubertTables& tables,
                                       const FinitePerm& u, const FinitePerm& w,
                                       int i) {
    int n = tables.n();
    FinitePerm si = weylperm::simple_finite(i, n);
    LocTable c_uw = tables.richardson_csm(u, w);
    LocTable c_siu_w = tables.richardson_csm(si.compose(u), w);
    LocTable c_u_siw = tables.richardson_csm(u, si.compose(w));
    RatFunc alpha = chernfinite::alpha_rf(i, n);
    LocTable lhs = chernfinite::table_add(
        chernfinite::dl_operator(c_uw, i, DLKind::sL),
        chernfinite::table_scale(chernfinite::dl_operator(c_siu_w, i, DLKind::sL),
                                 alpha));
    LocTable rhs = chernfinite::table_add(
        c_uw, chernfinite::table_scale(c_u_siw, alpha));
    return chernfinite::tables_equal(lhs, rhs);
}

}  // namespace detail

inline Report thm41(uint64_t seed = 20250801, int random_count = 200) {
    Report report;
    report.suite = "thm41";
    {
        SchubertTables tables(3);
        for (auto& u : tables.perms())
            for (auto& w : tables.perms())
                for (int i = 1; i <= 2; ++i) {
                    Instance inst;
                    inst.id = "n=3 u=" + detail::perm_str(u) +
                              " w=" + detail::perm_str(w) + " i=" + std::to_string(i);
                    inst.pass = detail::richardson_recursion_holds(tables, u, w, i);
                    report.instances.push_back(std::move(inst));
                }
    }
    if (random_count > 0) {
        SchubertTables tables(4);
        std::mt19937_64 rng(seed);
        auto perms = tables.perms();
        std::uniform_int_distribution<size_t> pick_perm(0, perms.size() - 1);
        std::uniform_int_distribution<int> pick_i(1, 3);
        for (int t = 0; t < random_count; ++t) {
            const FinitePerm& u = perms[pick_perm(rng)];
            const FinitePerm& w = perms[pick_perm(rng)];
            int i = pick_i(rng);
            Instance inst;
            inst.id = "n=4 u=" + detail::perm_str(u) + " w=" + detail::perm_str(w) +
                      " i=" + std::to_string(i);
            inst.pass = detail::richardson_recursion_holds(tables, u, w, i);
            report.instances.push_back(std::move(inst));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Pushforward recursion on G/P
// ---------------------------------------------------------------------------

inline Report cor43(const std::vector<Cocharacter>& lambdas = {
                        Cocharacter{{1, 0, 0}}, Cocharacter{{1, 1, 0}},
                        Cocharacter{{2, 1, 0}}, Cocharacter{{2, 0, 0}}}) {
    Report report;
    report.suite = "cor43";
    for (auto& lam : lambdas) {
        ParabolicData P = ParabolicData::from_lambda(lam);
        SchubertTables tables(P.n);
        FinitePerm id = FinitePerm::identity(P.n);
        std::string lam_str;
        for (size_t q = 0; q < lam.entries.size(); ++q)
            lam_str += (q ? "," : "") + std::to_string(lam.entries[q]);
        for (auto& u : tables.perms())
            for (auto& w : P.minimal_reps())
                for (int i = 1; i <= P.n - 1; ++i) {
                    FinitePerm si = weylperm::simple_finite(i, P.n);
                    LocTable pi_uw =
                        chernfinite::pushforward_GP(tables.richardson_csm(u, w), P);
                    LocTable pi_siu_w = chernfinite::pushforward_GP(
                        tables.richardson_csm(si.compose(u), w), P);
                    LocTable pi_u_siw = chernfinite::pushforward_GP(
                        tables.richardson_csm(u, si.compose(w)), P);
                    RatFunc alpha = chernfinite::alpha_rf(i, P.n);
                    LocTable lhs = chernfinite::table_add(
                        chernfinite::dl_operator(pi_uw, i, DLKind::sL),
                        chernfinite::table_scale(
                            chernfinite::dl_operator(pi_siu_w, i, DLKind::sL), alpha));
                    LocTable rhs = chernfinite::table_add(
                        pi_uw, chernfinite::table_scale(pi_u_siw, alpha));
                    Instance inst;
                    inst.id = "lambda=" + lam_str + " u=" + detail::perm_str(u) +
                              " w=" + detail::perm_str(w) + " i=" + std::to_string(i);
                    inst.pass = chernfinite::tables_equal(lhs, rhs);
                    report.instances.push_back(std::move(inst));
                }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Order consistency: pushforward support vs the extended P-Bruhat order
// ---------------------------------------------------------------------------

inline Report thm36(int nmax = 4) {
    Report report;
    report.suite = "thm36";
    for (int n = 2; n <= nmax; ++n) {
        SchubertTables tables(n);
        auto perms = tables.perms();
        // All parabolic subsets of {1..n-1}.
        std::vector<std::set<int>> subsets;
        for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
            std::set<int> s;
            for (int i = 1; i <= n - 1; ++i)
                if ((mask >> (i - 1)) & 1) s.insert(i);
            subsets.push_back(std::move(s));
        }
        std::vector<ParabolicData> parabolics;
        for (auto& s : subsets)
            parabolics.push_back(ParabolicData::from_simple_set(n, s));
        for (auto& u : perms)
            for (auto& w : perms) {
                LocTable product = tables.richardson_csm(u, w);
                for (auto& P : parabolics) {
                    bool order_cover = weylperm::ext_p_bruhat(
                        u, w, P, weylperm::ExtPAlgorithm::cover_bfs);
                    bool order_coset = weylperm::ext_p_bruhat(
                        u, w, P, weylperm::ExtPAlgorithm::coset_reduce);
                    bool order_affine = weylperm::ext_p_bruhat(
                        u, w, P, weylperm::ExtPAlgorithm::affine);
                    LocTable pushed = chernfinite::pushforward_GP(product, P);
                    bool nonzero = false;
                    for (auto& [mu, value] : pushed.entries)
                        if (!value.is_zero()) {
                            nonzero = true;
                            break;
                        }
                    Instance inst;
                    inst.id = "n=" + std::to_string(n) + " u=" + detail::perm_str(u) +
                              " w=" + detail::perm_str(w) +
                              " P=" + detail::set_str(P.simple_set);
                    inst.pass = order_cover == order_coset &&
                                order_coset == order_affine && nonzero == order_coset;
                    if (!inst.pass)
                        inst.detail = "cover=" + std::to_string(order_cover) +
                                      " coset=" + std::to_string(order_coset) +
                                      " affine=" + std::to_string(order_affine) +
                                      " pushforward_nonzero=" + std::to_string(nonzero);
                    report.instances.push_back(std::move(inst));
                }
            }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Finite/affine comparison
// ---------------------------------------------------------------------------

inline Report thm62(const std::vector<Cocharacter>& lambdas = {
                        Cocharacter{{1, 0}}, Cocharacter{{2, 0}},
                        Cocharacter{{1, 0, 0}}, Cocharacter{{1, 1, 0}},
                        Cocharacter{{2, 0, 0}}, Cocharacter{{2, 1, 0}}}) {
    Report report;
    report.suite = "thm62";
    for (auto& lam : lambdas) {
        ParabolicData P = ParabolicData::from_lambda(lam);
        auto cmp = chernaffine::thm62_compare(P);
        std::string lam_str;
        for (size_t q = 0; q < lam.entries.size(); ++q)
            lam_str += (q ? "," : "") + std::to_string(lam.entries[q]);
        Instance inst;
        inst.id = "lambda=" + lam_str;
        inst.pass = cmp.ok();
        if (!inst.pass) {
            inst.detail = "mismatches:";
            for (auto& m : cmp.mismatches) inst.detail += " [" + m + "]";
        } else {
            inst.detail = std::to_string(cmp.checked) + " pairs";
        }
        report.instances.push_back(std::move(inst));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Pipe dream specialization sweep
// ---------------------------------------------------------------------------

inline Report thm75(int k, int n) {
    Report report;
    report.suite = "thm75";
    AffineLocCache cache;
    for (auto& f : weylperm::enumerate_bounded(k, n)) {
        auto sub = positroid::specialize_check(f, cache);
        Instance inst;
        inst.id = "f=" + detail::window_str(f);
        inst.pass = sub.ok();
        if (!inst.pass) {
            inst.detail = "mismatches:";
            for (auto& m : sub.mismatches) inst.detail += " [" + m + "]";
        } else {
            inst.detail = std::to_string(sub.checked) + " subsets";
        }
        report.instances.push_back(std::move(inst));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Duality pairing
// ---------------------------------------------------------------------------

inline Report duality(int n = 3) {
    Report report;
    report.suite = "duality";
    SchubertTables tables(n);
    for (auto& u : tables.perms())
        for (auto& w : tables.perms()) {
            RatFunc pair = tables.pairing(tables.csm_cell(u), tables.ssm_opp(w));
            RatFunc expected = u == w ? RatFunc::one() : RatFunc::zero();
            Instance inst;
            inst.id = "u=" + detail::perm_str(u) + " w=" + detail::perm_str(w);
            inst.pass = symra::is_equal(pair, expected);
            report.instances.push_back(std::move(inst));
        }
    return report;
}

// ---------------------------------------------------------------------------
// Extra checks used by the acceptance suite
// ---------------------------------------------------------------------------

inline bool partition_of_unity(int n) {
    SchubertTables tables(n);
    LocTable sum;
    bool first = true;
    for (auto& w : tables.perms()) {
        if (first) {
            sum = tables.csm_cell(w);
            first = false;
        } else {
            sum = chernfinite::table_add(sum, tables.csm_cell(w));
        }
    }
    return chernfinite::tables_equal(sum, tables.tangent_chern());
}

// Degree-one elements of word length at most maxlen, as a deterministic set.
inline std::vector<AffinePerm> degree_one_elements(int n, int maxlen) {
    std::set<AffinePerm> seen;
    std::vector<AffinePerm> frontier = {AffinePerm::shift(1, n)};
    seen.insert(frontier[0]);
    for (int step = 0; step < maxlen; ++step) {
        std::vector<AffinePerm> next;
        for (auto& g : frontier)
            for (int i = 0; i <= n - 1; ++i) {
                AffinePerm h = weylperm::left_mul_simple(i, g);
                if (weylperm::length(h) == step + 1 && seen.insert(h).second)
                    next.push_back(h);
            }
        frontier = std::move(next);
    }
    return std::vector<AffinePerm>(seen.begin(), seen.end());
}

// Right recursion swept over all degree-one f, g with l(g) bounded.
inline Report right_recursion(int n = 2, int maxlen = 3) {
    Report report;
    report.suite = "right-recursion";
    AffineLocCache cache;
    auto elements = degree_one_elements(n, maxlen);
    for (auto& f : elements)
        for (auto& g : elements)
            for (int i = 0; i <= n - 1; ++i) {
                Instance inst;
                inst.id = "f=" + detail::window_str(f) + " g=" + detail::window_str(g) +
                          " i=" + std::to_string(i);
                inst.pass = chernaffine::right_recursion_check(f, g, i, cache);
                report.instances.push_back(std::move(inst));
            }
    return report;
}

// The affine localization must not depend on the reduced-word tie-breaking.
inline bool affine_word_independence(int n, int maxlen) {
    auto elements = degree_one_elements(n, maxlen);
    AffineLocCache small_first, large_first;
    for (auto& f : elements)
        for (auto& g : elements) {
            RatFunc a = chernaffine::affine_ssm_loc(f, g, small_first, false);
            RatFunc b = chernaffine::affine_ssm_loc(f, g, large_first, true);
            if (!symra::is_equal(a, b)) return false;
        }
    return true;
}

}  // namespace csm::verify
