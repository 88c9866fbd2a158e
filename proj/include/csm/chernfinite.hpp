#pragma once

// Localization tables of CSM and SM classes on the finite flag variety and
// its partial quotients: Schubert and opposite Schubert cells, Richardson
// cells as transversal products, equivariant pushforward along G/B -> G/P,
// and the level-by-level recursion computing projected Richardson SM classes.
//
// Conventions (pinned by the partition-of-unity and base-case tests):
// positive roots are -y_a + y_b for a < b, the tangent weights of G/B at the
// fixed point v are { y_{v(a)} - y_{v(b)} : a < b }.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csm/common.hpp"
#include "csm/symra.hpp"
#include "csm/weylperm.hpp"

namespace csm::chernfinite {

using symra::LinearForm;
using symra::Polynomial;
using symra::Rat;
using symra::RatFunc;
using weylperm::AffinePerm;
using weylperm::Cocharacter;
using weylperm::FinitePerm;
using weylperm::ParabolicData;

using Key = std::vector<long long>;

inline Key gb_key(const FinitePerm& v) { return Key(v.img.begin(), v.img.end()); }

// ---------------------------------------------------------------------------
// Root helpers
// ---------------------------------------------------------------------------

// alpha_i = -y_i + y_{i+1} for 1 <= i <= n-1; alpha_0 = -y_n + y_1.
inline void alpha_indices(int i, int n, int& a, int& b) {
    if (i < 0 || i > n - 1) throw value_error("simple root index out of range");
    a = i == 0 ? n : i;      // alpha = -y_a + y_b
    b = i == 0 ? 1 : i + 1;
}

inline std::pair<LinearForm, Rat> alpha_linear(int i, int n) {
    int a, b;
    alpha_indices(i, n, a, b);
    return symra::canonical_linear(0, {{symra::yvar(a), symra::Int(-1)},
                                       {symra::yvar(b), symra::Int(1)}});
}

inline RatFunc alpha_rf(int i, int n) {
    auto [form, s] = alpha_linear(i, n);
    return RatFunc::from_polynomial(form.to_polynomial().scaled(s));
}

inline RatFunc inv_alpha_rf(int i, int n) {
    auto [form, s] = alpha_linear(i, n);
    return symra::inverse_of_factors({{form, 1}}, s);
}

inline std::pair<LinearForm, Rat> one_plus_alpha_linear(int i, int n) {
    int a, b;
    alpha_indices(i, n, a, b);
    return symra::canonical_linear(1, {{symra::yvar(a), symra::Int(-1)},
                                       {symra::yvar(b), symra::Int(1)}});
}

inline RatFunc one_plus_alpha_rf(int i, int n) {
    auto [form, s] = one_plus_alpha_linear(i, n);
    return RatFunc::from_polynomial(form.to_polynomial().scaled(s));
}

inline RatFunc inv_one_plus_alpha_rf(int i, int n) {
    auto [form, s] = one_plus_alpha_linear(i, n);
    return symra::inverse_of_factors({{form, 1}}, s);
}

// ---------------------------------------------------------------------------
// Localization tables
// ---------------------------------------------------------------------------

struct LocTable {
    enum class Space { GB, GP };

    Space space = Space::GB;
    int n = 0;
    std::vector<long long> lambda;  // orbit datum, G/P only
    std::map<Key, RatFunc> entries;

    const RatFunc& at(const Key& key) const {
        auto it = entries.find(key);
        if (it == entries.end()) throw value_error("fixed point not in table");
        return it->second;
    }
};

inline LocTable table_like(const LocTable& t) {
    LocTable out;
    out.space = t.space;
    out.n = t.n;
    out.lambda = t.lambda;
    return out;
}

inline LocTable table_add(const LocTable& a, const LocTable& b) {
    LocTable out = table_like(a);
    for (auto& [k, v] : a.entries) out.entries[k] = symra::add(v, b.at(k));
    return out;
}

inline LocTable table_scale(const LocTable& a, const RatFunc& c) {
    LocTable out = table_like(a);
    for (auto& [k, v] : a.entries) out.entries[k] = symra::mul(v, c);
    return out;
}

inline LocTable table_pointwise_mul(const LocTable& a, const LocTable& b) {
    LocTable out = table_like(a);
    for (auto& [k, v] : a.entries) out.entries[k] = symra::mul(v, b.at(k));
    return out;
}

inline bool tables_equal(const LocTable& a, const LocTable& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (auto& [k, v] : a.entries)
        if (!symra::is_equal(v, b.at(k))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Demazure-Lusztig operators on tables
// ---------------------------------------------------------------------------

enum class DLKind { sL, TL, TLvee, deltaL };

namespace detail {

inline Key left_mult_key(const LocTable& t, const Key& key, int i) {
    if (t.space == LocTable::Space::GB) {
        // s_i v: swap the values i, i+1 in one-line notation
        Key out = key;
        for (auto& v : out) {
            if (v == i) v = i + 1;
            else if (v == i + 1) v = i;
        }
        return out;
    }
    Key out = key;  // s_i mu: swap adjacent weight entries
    std::swap(out[i - 1], out[i]);
    return out;
}

}  // namespace detail

// (s_i^L t)|_p = s_i(t|_{s_i p}); the Hecke variants combine it with 1/alpha_i.
inline LocTable dl_operator(const LocTable& t, int i, DLKind which) {
    if (i < 1 || i > t.n - 1) throw value_error("operator index out of range 1..n-1");
    LocTable out = table_like(t);
    RatFunc inv_alpha = inv_alpha_rf(i, t.n);
    RatFunc alpha = alpha_rf(i, t.n);
    for (auto& [key, value] : t.entries) {
        RatFunc swapped = symra::act_y(t.at(detail::left_mult_key(t, key, i)), i, t.n);
        switch (which) {
            case DLKind::sL:
                out.entries[key] = swapped;
                break;
            case DLKind::TL:
                // (-1/alpha) id + ((alpha+1)/alpha) s^L
                out.entries[key] = symra::add(
                    symra::mul(symra::neg(inv_alpha), value),
                    symra::mul(symra::mul(symra::add(alpha, RatFunc::one()), inv_alpha),
                               swapped));
                break;
            case DLKind::TLvee:
                out.entries[key] = symra::add(
                    symra::mul(inv_alpha, value),
                    symra::mul(symra::mul(symra::sub(alpha, RatFunc::one()), inv_alpha),
                               swapped));
                break;
            case DLKind::deltaL:
                out.entries[key] =
                    symra::mul(inv_alpha, symra::sub(value, swapped));
                break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schubert tables on G/B
// ---------------------------------------------------------------------------

class SchubertTables {
  public:
    explicit SchubertTables(int n, bool largest_tiebreak = false) : n_(n) {
        limits::check_size(n, 5, "Schubert tables support n <= 5");
        perms_ = weylperm::all_perms(n);
        build(largest_tiebreak);
    }

    int n() const { return n_; }
    const std::vector<FinitePerm>& perms() const { return perms_; }

    const LocTable& csm_cell(const FinitePerm& w) const { return csm_cell_.at(w); }
    const LocTable& ssm_cell(const FinitePerm& w) const { return ssm_cell_.at(w); }
    const LocTable& csm_opp(const FinitePerm& u) const { return csm_opp_.at(u); }
    const LocTable& ssm_opp(const FinitePerm& u) const { return ssm_opp_.at(u); }
    const LocTable& tangent_chern() const { return tangent_; }

    // Tangent weights y_{v(a)} - y_{v(b)}, a < b, as canonical factors.
    std::vector<std::pair<LinearForm, int>> euler_factors(const FinitePerm& v,
                                                          Rat* sign = nullptr) const {
        std::vector<std::pair<LinearForm, int>> out;
        Rat s(1);
        for (int a = 1; a <= n_; ++a)
            for (int b = a + 1; b <= n_; ++b) {
                auto [f, sc] = symra::linear_diff(0, symra::yvar(v(a)), symra::yvar(v(b)));
                s *= sc;
                out.emplace_back(std::move(f), 1);
            }
        if (sign) *sign = s;
        return out;
    }

    // 1 + y_{v(a)} - y_{v(b)}, a < b, canonical with the flip sign collected.
    std::vector<std::pair<LinearForm, int>> tangent_factors(const FinitePerm& v,
                                                            Rat* sign = nullptr) const {
        std::vector<std::pair<LinearForm, int>> out;
        Rat s(1);
        for (int a = 1; a <= n_; ++a)
            for (int b = a + 1; b <= n_; ++b) {
                auto [f, sc] = symra::canonical_linear(
                    1, {{symra::yvar(v(a)), symra::Int(1)},
                        {symra::yvar(v(b)), symra::Int(-1)}});
                s *= sc;
                out.emplace_back(std::move(f), 1);
            }
        if (sign) *sign = s;
        return out;
    }

    // delta_{v,.} times the Euler class at v.
    LocTable point_class(const FinitePerm& v) const {
        LocTable out = empty_table();
        Rat sign;
        auto factors = euler_factors(v, &sign);
        Polynomial p = Polynomial::constant(sign);
        for (auto& [f, m] : factors) p = p * f.to_polynomial();
        out.entries[gb_key(v)] = RatFunc::from_polynomial(std::move(p));
        return out;
    }

    // c_SM of the open Richardson cell as the transversal product.
    LocTable richardson_csm(const FinitePerm& u, const FinitePerm& w) const {
        return table_pointwise_mul(csm_cell(w), ssm_opp(u));
    }

    // Poincare pairing sum_v a|_v b|_v / e_v.
    RatFunc pairing(const LocTable& a, const LocTable& b) const {
        RatFunc total;
        for (auto& v : perms_) {
            const RatFunc& av = a.at(gb_key(v));
            const RatFunc& bv = b.at(gb_key(v));
            if (av.is_zero() || bv.is_zero()) continue;
            Rat sign;
            auto factors = euler_factors(v, &sign);
            total = symra::add(
                total, symra::mul(symra::mul(av, bv),
                                  symra::inverse_of_factors(std::move(factors), sign)));
        }
        return total;
    }

  private:
    LocTable empty_table() const {
        LocTable t;
        t.space = LocTable::Space::GB;
        t.n = n_;
        for (auto& v : perms_) t.entries[gb_key(v)] = RatFunc::zero();
        return t;
    }

    void build(bool largest_tiebreak) {
        tangent_ = empty_table();
        for (auto& v : perms_) {
            Rat sign;
            auto factors = tangent_factors(v, &sign);
            Polynomial p = Polynomial::constant(sign);
            for (auto& [f, m] : factors) p = p * f.to_polynomial();
            tangent_.entries[gb_key(v)] = RatFunc::from_polynomial(std::move(p));
        }

        // Order by length for the two recursions.
        std::vector<FinitePerm> by_length = perms_;
        std::stable_sort(by_length.begin(), by_length.end(),
                         [](const FinitePerm& a, const FinitePerm& b) {
                             return a.length() < b.length();
                         });

        auto pick = [&](const std::vector<int>& options) {
            return largest_tiebreak ? options.back() : options.front();
        };

        // s_SM of Schubert cells, upward from the point cell.
        {
            FinitePerm id = FinitePerm::identity(n_);
            LocTable base = empty_table();
            Rat sign;
            auto num_factors = euler_factors(id, &sign);
            Polynomial p = Polynomial::constant(sign);
            for (auto& [f, m] : num_factors) p = p * f.to_polynomial();
            Rat den_sign;
            auto den_factors = tangent_factors(id, &den_sign);
            base.entries[gb_key(id)] = symra::make_ratfunc(
                p.scaled(Rat(1) / den_sign), std::move(den_factors), true);
            ssm_cell_[id] = std::move(base);
            for (auto& w : by_length) {
                if (w.is_identity()) continue;
                std::vector<int> descents;
                FinitePerm winv = w.inverse();
                for (int i = 1; i <= n_ - 1; ++i)
                    if (winv(i) > winv(i + 1)) descents.push_back(i);
                int i = pick(descents);
                FinitePerm shorter = weylperm::simple_finite(i, n_).compose(w);
                ssm_cell_[w] = dl_operator(ssm_cell_.at(shorter), i, DLKind::TL);
            }
        }

        // c_SM of opposite cells, downward from the longest element.
        {
            FinitePerm w0 = FinitePerm::longest(n_);
            csm_opp_[w0] = point_class(w0);
            for (auto it = by_length.rbegin(); it != by_length.rend(); ++it) {
                const FinitePerm& u = *it;
                if (u == w0) continue;
                std::vector<int> ascents;
                FinitePerm uinv = u.inverse();
                for (int i = 1; i <= n_ - 1; ++i)
                    if (uinv(i) < uinv(i + 1)) ascents.push_back(i);
                int i = pick(ascents);
                FinitePerm longer = weylperm::simple_finite(i, n_).compose(u);
                csm_opp_[u] = dl_operator(csm_opp_.at(longer), i, DLKind::TLvee);
            }
        }

        for (auto& w : perms_) {
            csm_cell_[w] = table_pointwise_mul(ssm_cell_.at(w), tangent_);
            LocTable t = empty_table();
            for (auto& v : perms_) {
                const RatFunc& val = csm_opp_.at(w).at(gb_key(v));
                if (!val.is_zero()) {
                    Rat sign;
                    auto factors = tangent_factors(v, &sign);
                    t.entries[gb_key(v)] = symra::mul(
                        val, symra::inverse_of_factors(std::move(factors), sign));
                }
            }
            ssm_opp_[w] = std::move(t);
        }
    }

    int n_;
    std::vector<FinitePerm> perms_;
    LocTable tangent_;
    std::map<FinitePerm, LocTable> csm_cell_, ssm_cell_, csm_opp_, ssm_opp_;
};

// ---------------------------------------------------------------------------
// Pushforward to G/P and its tangent data
// ---------------------------------------------------------------------------

// Factors (1 + y_a - y_b) over ordered pairs with mu_a > mu_b, canonical
// with the flip sign collected.
inline std::vector<std::pair<LinearForm, int>> tangent_GP_factors(
    const std::vector<long long>& mu, Rat* sign = nullptr) {
    std::vector<std::pair<LinearForm, int>> out;
    Rat s(1);
    int n = static_cast<int>(mu.size());
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            if (mu[a - 1] > mu[b - 1]) {
                auto [f, sc] = symra::canonical_linear(
                    1, {{symra::yvar(a), symra::Int(1)},
                        {symra::yvar(b), symra::Int(-1)}});
                s *= sc;
                out.emplace_back(std::move(f), 1);
            }
    symra::detail::sort_den(out);
    if (sign) *sign = s;
    return out;
}

inline RatFunc tangent_chern_GP(const std::vector<long long>& mu,
                                const ParabolicData& P) {
    {
        std::vector<long long> sorted_mu = mu, sorted_lam = P.lambda.entries;
        std::sort(sorted_mu.begin(), sorted_mu.end());
        std::sort(sorted_lam.begin(), sorted_lam.end());
        if (sorted_mu != sorted_lam)
            throw value_error("mu must be a rearrangement of lambda");
    }
    Rat sign;
    auto factors = tangent_GP_factors(mu, &sign);
    Polynomial p = Polynomial::constant(sign);
    for (auto& [f, m] : factors) p = p * f.to_polynomial();
    return RatFunc::from_polynomial(std::move(p));
}

inline RatFunc inv_tangent_chern_GP(const std::vector<long long>& mu) {
    Rat sign;
    auto factors = tangent_GP_factors(mu, &sign);
    return symra::inverse_of_factors(std::move(factors), sign);
}

// Fiberwise Euler class at v: product of y_{v(a)} - y_{v(b)} over the
// W_P-positive pairs a < b.
inline std::vector<std::pair<LinearForm, int>> fiber_euler_factors(
    const FinitePerm& v, const ParabolicData& P, Rat* sign) {
    std::vector<std::pair<LinearForm, int>> out;
    Rat s(1);
    for (auto& [a, b] : P.pairs_inside()) {
        auto [f, sc] = symra::linear_diff(0, symra::yvar(v(a)), symra::yvar(v(b)));
        s *= sc;
        out.emplace_back(std::move(f), 1);
    }
    if (sign) *sign = s;
    symra::detail::sort_den(out);
    return out;
}

inline LocTable pushforward_GP(const LocTable& t, const ParabolicData& P) {
    if (t.space != LocTable::Space::GB)
        throw value_error("pushforward expects a G/B table");
    if (t.n != P.n) throw value_error("ambient mismatch");
    LocTable out;
    out.space = LocTable::Space::GP;
    out.n = P.n;
    out.lambda = P.lambda.entries;
    for (auto& mu : P.orbit()) out.entries[mu] = RatFunc::zero();
    for (auto& v : weylperm::all_perms(P.n)) {
        const RatFunc& val = t.at(gb_key(v));
        if (val.is_zero()) continue;
        std::vector<long long> mu = weylperm::act_on_weight(v, P.lambda.entries);
        Rat sign;
        auto factors = fiber_euler_factors(v, P, &sign);
        out.entries[mu] = symra::add(
            out.entries[mu],
            symra::mul(val, symra::inverse_of_factors(std::move(factors), sign)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Projected Richardson SM classes via the level recursion
// ---------------------------------------------------------------------------

// Fills gamma_{u,w,mu} for all u, w in S_n from the translation base case
//   gamma_{u t_lambda, mu} = delta_{u,id} delta_{mu,lambda}
//                            prod (y_a - y_b)/(1 + y_a - y_b)
// by induction on l(w), solving
//   gamma_{f s_i, mu} = (1/alpha_i) [ s_i(gamma_{f, s_i mu})
//                       + alpha_i s_i(gamma_{s_i f, s_i mu}) - gamma_{f, mu} ].
// The alpha_i pole must cancel at every step; a surviving root factor in a
// canonical denominator is reported as an error.
class ProjRichTable {
  public:
    explicit ProjRichTable(const ParabolicData& P, bool largest_tiebreak = false)
        : P_(P) {
        limits::check_size(P.n, 4, "projected Richardson recursion supports n <= 4");
        build(largest_tiebreak);
    }

    const ParabolicData& parabolic() const { return P_; }

    const RatFunc& at(const AffinePerm& f, const std::vector<long long>& mu) const {
        auto it = table_.find({f.window, mu});
        if (it == table_.end())
            throw value_error("element is not of the translation-sandwich shape");
        return it->second;
    }

    const RatFunc& at_uw(const FinitePerm& u, const FinitePerm& w,
                         const std::vector<long long>& mu) const {
        return at(AffinePerm::from_uw(u, w, P_.lambda), mu);
    }

    // All u t_lambda w^{-1} with w a minimal representative, sorted by window.
    std::vector<AffinePerm> bplus() const {
        std::vector<AffinePerm> out;
        out.reserve(table_.size() / std::max<size_t>(1, orbit_.size()));
        for (auto& [key, value] : table_)
            if (out.empty() || !(out.back().window == key.first))
                out.push_back(AffinePerm::from_window(key.first));
        return out;
    }

    const std::vector<std::vector<long long>>& orbit() const { return orbit_; }

  private:
    using Grid = std::map<std::pair<FinitePerm, FinitePerm>,
                          std::map<std::vector<long long>, RatFunc>>;

    void build(bool largest_tiebreak) {
        int n = P_.n;
        orbit_ = P_.orbit();
        auto perms = weylperm::all_perms(n);
        std::vector<FinitePerm> by_length = perms;
        std::stable_sort(by_length.begin(), by_length.end(),
                         [](const FinitePerm& a, const FinitePerm& b) {
                             return a.length() < b.length();
                         });

        // Base level: w = id.
        RatFunc base = RatFunc::one();
        for (auto& [a, b] : P_.pairs_outside()) {
            auto [root, sign] = symra::linear_diff(0, symra::yvar(a), symra::yvar(b));
            auto one_minus =
                symra::canonical_linear(1, {{symra::yvar(a), symra::Int(1)},
                                            {symra::yvar(b), symra::Int(-1)}})
                    .first;
            base = symra::mul(
                base, symra::make_ratfunc(root.to_polynomial().scaled(sign),
                                          {{one_minus, 1}}, true));
        }

        Grid grid;
        FinitePerm id = FinitePerm::identity(n);
        for (auto& u : perms)
            for (auto& mu : orbit_) {
                bool hit = u == id && mu == P_.lambda.entries;
                grid[{u, id}][mu] = hit ? base : RatFunc::zero();
            }

        for (auto& w : by_length) {
            if (w.is_identity()) continue;
            std::vector<int> descents;
            FinitePerm winv = w.inverse();
            for (int i = 1; i <= n - 1; ++i)
                if (winv(i) > winv(i + 1)) descents.push_back(i);
            int i = largest_tiebreak ? descents.back() : descents.front();
            FinitePerm wprev = weylperm::simple_finite(i, n).compose(w);
            RatFunc alpha = alpha_rf(i, n);
            RatFunc inv_alpha = inv_alpha_rf(i, n);
            for (auto& u : perms) {
                FinitePerm siu = weylperm::simple_finite(i, n).compose(u);
                for (auto& mu : orbit_) {
                    auto simu = weylperm::swap_weight(mu, i);
                    const RatFunc& g_f_simu = grid.at({u, wprev}).at(simu);
                    const RatFunc& g_sif_simu = grid.at({siu, wprev}).at(simu);
                    const RatFunc& g_f_mu = grid.at({u, wprev}).at(mu);
                    RatFunc bracket = symra::sub(
                        symra::add(symra::act_y(g_f_simu, i, n),
                                   symra::mul(alpha, symra::act_y(g_sif_simu, i, n))),
                        g_f_mu);
                    RatFunc value = symra::mul(inv_alpha, bracket);
                    for (auto& [form, mult] : value.den)
                        if (sgn(form.constant) == 0)
                            throw error(
                                "projected Richardson recursion left an uncancelled "
                                "root pole");
                    grid[{u, w}][mu] = std::move(value);
                }
            }
        }

        // Collapse to the affine key, then check that coset-equivalent pairs
        // produced the same values.
        for (auto& w : perms) {
            if (!P_.is_minimal_rep(w)) continue;
            for (auto& u : perms) {
                AffinePerm f = AffinePerm::from_uw(u, w, P_.lambda);
                for (auto& mu : orbit_)
                    table_.emplace(std::make_pair(f.window, mu),
                                   grid.at({u, w}).at(mu));
            }
        }
        for (auto& w : perms) {
            if (P_.is_minimal_rep(w)) continue;
            for (auto& u : perms) {
                AffinePerm f = AffinePerm::from_uw(u, w, P_.lambda);
                for (auto& mu : orbit_)
                    if (!symra::is_equal(table_.at({f.window, mu}),
                                         grid.at({u, w}).at(mu)))
                        throw error(
                            "projected Richardson values differ across coset "
                            "representatives");
            }
        }
    }

    ParabolicData P_;
    std::vector<std::vector<long long>> orbit_;
    std::map<std::pair<std::vector<long long>, std::vector<long long>>, RatFunc>
        table_;
};

// ---------------------------------------------------------------------------
// JSON export
// ---------------------------------------------------------------------------

inline std::string key_string(const Key& key) {
    std::string s;
    for (size_t i = 0; i < key.size(); ++i)
        s += (i ? "," : "") + std::to_string(key[i]);
    return s;
}

inline nlohmann::json to_json(const LocTable& t) {
    nlohmann::json j;
    j["space"] = t.space == LocTable::Space::GB ? "G/B" : "G/P";
    if (t.space == LocTable::Space::GP) j["lambda"] = t.lambda;
    nlohmann::json entries = nlohmann::json::object();
    for (auto& [key, value] : t.entries)
        entries[key_string(key)] = symra::to_json(value);
    j["entries"] = std::move(entries);
    return j;
}

}  // namespace csm::chernfinite
