#pragma once

// Exact multivariate rational functions over Q whose denominators are kept
// as factored multisets of integer linear forms.  Values are immutable and
// every operation is a pure function, so they are safe to share across
// threads.
//
// The variable set splits into two families: x_1..x_k and y_1..y_n.  The
// finite Weyl group acts on the y family (act_y), and x variables can be
// specialized to y variables (substitute_x).  Equality is decided by
// cross-multiplication to a single polynomial, never by comparing display
// forms.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "csm/common.hpp"

#include "json.hpp"

namespace csm::symra {

using Int = mpz_class;
using Rat = mpq_class;
using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Variables and monomials
// ---------------------------------------------------------------------------

enum class Family : int { X = 0, Y = 1 };

struct Variable {
    Family family = Family::Y;
    int index = 1;  // 1-based

    friend bool operator==(const Variable& a, const Variable& b) {
        return a.family == b.family && a.index == b.index;
    }
    friend bool operator<(const Variable& a, const Variable& b) {
        if (a.family != b.family) return a.family < b.family;
        return a.index < b.index;
    }
};

inline Variable xvar(int i) { return Variable{Family::X, i}; }
inline Variable yvar(int j) { return Variable{Family::Y, j}; }

inline Variable make_variable(const Context& ctx, Family fam, int index) {
    int bound = fam == Family::X ? ctx.num_x : ctx.num_y;
    if (index < 1 || index > bound)
        throw value_error("variable index out of ambient range: " +
                          std::string(fam == Family::X ? "x" : "y") +
                          std::to_string(index));
    return Variable{fam, index};
}

inline std::string var_name(const Variable& v) {
    return (v.family == Family::X ? "x" : "y") + std::to_string(v.index);
}

inline std::string var_latex(const Variable& v) {
    return std::string(v.family == Family::X ? "x" : "y") + "_{" +
           std::to_string(v.index) + "}";
}

// Sparse exponent vector; factors sorted by variable, exponents > 0.
struct Monomial {
    std::vector<std::pair<Variable, int>> powers;

    int degree() const {
        int d = 0;
        for (auto& [v, e] : powers) d += e;
        return d;
    }
    bool is_unit() const { return powers.empty(); }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.powers == b.powers;
    }
};

// Total degree first, then lexicographic comparison of the expanded variable
// word.  On the shared leading variable a higher exponent sorts first because
// its word keeps repeating the smaller letter.
inline bool monomial_less(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        const auto& [va, ea] = a.powers[i];
        const auto& [vb, eb] = b.powers[j];
        if (!(va == vb)) return va < vb;
        if (ea != eb) return ea > eb;
        ++i, ++j;
    }
    return i == a.powers.size() && j < b.powers.size();
}

struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return monomial_less(a, b);
    }
};

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < a.powers.size() || j < b.powers.size()) {
        if (j == b.powers.size() ||
            (i < a.powers.size() && a.powers[i].first < b.powers[j].first)) {
            r.powers.push_back(a.powers[i++]);
        } else if (i == a.powers.size() ||
                   b.powers[j].first < a.powers[i].first) {
            r.powers.push_back(b.powers[j++]);
        } else {
            r.powers.emplace_back(a.powers[i].first,
                                  a.powers[i].second + b.powers[j].second);
            ++i, ++j;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

// Terms sorted ascending in the canonical monomial order, no zero
// coefficients; equal polynomials have identical representations.
class Polynomial {
  public:
    std::vector<std::pair<Monomial, Rat>> terms;

    Polynomial() = default;

    static Polynomial zero() { return {}; }
    static Polynomial constant(Rat c) {
        Polynomial p;
        if (sgn(c) != 0) p.terms.emplace_back(Monomial{}, std::move(c));
        return p;
    }
    static Polynomial variable(Variable v) {
        Polynomial p;
        Monomial m;
        m.powers.emplace_back(v, 1);
        p.terms.emplace_back(std::move(m), Rat(1));
        return p;
    }

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const {
        return terms.empty() || (terms.size() == 1 && terms[0].first.is_unit());
    }
    // Degree of the zero polynomial is -1 by convention.
    int total_degree() const {
        return terms.empty() ? -1 : terms.back().first.degree();
    }
    int lowest_degree() const {
        return terms.empty() ? -1 : terms.front().first.degree();
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms == b.terms;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        r.terms.reserve(a.terms.size() + b.terms.size());
        size_t i = 0, j = 0;
        while (i < a.terms.size() || j < b.terms.size()) {
            if (j == b.terms.size() ||
                (i < a.terms.size() &&
                 monomial_less(a.terms[i].first, b.terms[j].first))) {
                r.terms.push_back(a.terms[i++]);
            } else if (i == a.terms.size() ||
                       monomial_less(b.terms[j].first, a.terms[i].first)) {
                r.terms.push_back(b.terms[j++]);
            } else {
                Rat c = a.terms[i].second + b.terms[j].second;
                if (sgn(c) != 0) r.terms.emplace_back(a.terms[i].first, std::move(c));
                ++i, ++j;
            }
        }
        return r;
    }

    Polynomial negated() const {
        Polynomial r = *this;
        for (auto& [m, c] : r.terms) c = -c;
        return r;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        return a + b.negated();
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        std::map<Monomial, Rat, MonomialOrder> acc;
        for (auto& [ma, ca] : a.terms)
            for (auto& [mb, cb] : b.terms) {
                Monomial m = monomial_mul(ma, mb);
                auto [it, fresh] = acc.emplace(std::move(m), ca * cb);
                if (!fresh) it->second += ca * cb;
            }
        Polynomial r;
        for (auto& [m, c] : acc)
            if (sgn(c) != 0) r.terms.emplace_back(m, c);
        return r;
    }

    Polynomial scaled(const Rat& s) const {
        if (sgn(s) == 0) return {};
        Polynomial r = *this;
        for (auto& [m, c] : r.terms) c *= s;
        return r;
    }

    // Homogeneous component of minimal total degree.
    Polynomial lowest_part() const {
        Polynomial r;
        int d = lowest_degree();
        for (auto& [m, c] : terms)
            if (m.degree() == d) r.terms.emplace_back(m, c);
        return r;
    }

    Rat evaluate(const std::map<Variable, Rat>& point) const {
        Rat total(0);
        for (auto& [m, c] : terms) {
            Rat t = c;
            for (auto& [v, e] : m.powers) {
                auto it = point.find(v);
                if (it == point.end())
                    throw value_error("evaluation point misses variable " + var_name(v));
                for (int q = 0; q < e; ++q) t *= it->second;
            }
            total += t;
        }
        return total;
    }
};

// ---------------------------------------------------------------------------
// Linear forms
// ---------------------------------------------------------------------------

// Integer linear form c0 + sum a_v * v, stored in canonical sign: primitive
// coefficients, and the first variable present has a positive coefficient
// (constant > 0 when no variable is present).
struct LinearForm {
    Int constant = 0;
    std::vector<std::pair<Variable, Int>> coef;  // sorted by variable, nonzero

    bool is_constant() const { return coef.empty(); }

    Polynomial to_polynomial() const {
        Polynomial p = Polynomial::constant(Rat(constant));
        for (auto& [v, a] : coef) p = p + Polynomial::variable(v).scaled(Rat(a));
        return p;
    }

    friend bool operator==(const LinearForm& a, const LinearForm& b) {
        return a.constant == b.constant && a.coef == b.coef;
    }
    friend bool operator<(const LinearForm& a, const LinearForm& b) {
        if (a.coef != b.coef) {
            return std::lexicographical_compare(
                a.coef.begin(), a.coef.end(), b.coef.begin(), b.coef.end(),
                [](const auto& p, const auto& q) {
                    if (!(p.first == q.first)) return p.first < q.first;
                    return p.second < q.second;
                });
        }
        return a.constant < b.constant;
    }
};

// Builds the canonical representative; returns the rational scale s with
// input = s * canonical.  Throws on the identically zero form.
inline std::pair<LinearForm, Rat> canonical_linear(
    Int constant, std::vector<std::pair<Variable, Int>> coef) {
    std::sort(coef.begin(), coef.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Variable, Int>> packed;
    for (auto& [v, a] : coef) {
        if (!packed.empty() && packed.back().first == v)
            packed.back().second += a;
        else
            packed.emplace_back(v, a);
    }
    packed.erase(std::remove_if(packed.begin(), packed.end(),
                                [](const auto& p) { return sgn(p.second) == 0; }),
                 packed.end());
    if (packed.empty() && sgn(constant) == 0)
        throw value_error("linear form must not be identically zero");

    Int content = abs(constant);
    for (auto& [v, a] : packed) content = gcd(content, a);
    int sign = packed.empty() ? sgn(constant) : sgn(packed.front().second);
    Int unit = sign * content;
    LinearForm f;
    f.constant = constant / unit;
    for (auto& [v, a] : packed) f.coef.emplace_back(v, a / unit);
    return {std::move(f), Rat(unit)};
}

// c + x_a - y_b style helpers used throughout the localization formulas.
inline std::pair<LinearForm, Rat> linear_diff(Int c, Variable plus, Variable minus) {
    return canonical_linear(std::move(c), {{plus, Int(1)}, {minus, Int(-1)}});
}

// Exact division of a polynomial by a linear form; nullopt when not divisible.
inline std::optional<Polynomial> divide_exact(const Polynomial& p,
                                              const LinearForm& f) {
    if (p.is_zero()) return p;
    if (f.is_constant()) return p.scaled(Rat(1) / Rat(f.constant));
    Variable pivot = f.coef.front().first;
    Rat lead(f.coef.front().second);
    Polynomial rest = f.to_polynomial() - Polynomial::variable(pivot).scaled(lead);

    auto pivot_degree = [&](const Monomial& m) {
        for (auto& [v, e] : m.powers)
            if (v == pivot) return e;
        return 0;
    };

    Polynomial remainder = p, quotient;
    while (true) {
        int d = 0;
        for (auto& [m, c] : remainder.terms) d = std::max(d, pivot_degree(m));
        if (d == 0) {
            if (!remainder.is_zero()) return std::nullopt;
            return quotient;
        }
        // Peel the top pivot-degree slice and cancel it against lead * pivot.
        Polynomial slice;
        for (auto& [m, c] : remainder.terms) {
            if (pivot_degree(m) != d) continue;
            Monomial reduced;
            for (auto& [v, e] : m.powers) {
                if (v == pivot) {
                    if (e > 1) reduced.powers.emplace_back(v, e - 1);
                } else {
                    reduced.powers.emplace_back(v, e);
                }
            }
            slice.terms.emplace_back(std::move(reduced), c / lead);
        }
        std::sort(slice.terms.begin(), slice.terms.end(),
                  [](const auto& a, const auto& b) {
                      return monomial_less(a.first, b.first);
                  });
        quotient = quotient + slice;
        remainder = remainder - slice * f.to_polynomial();
    }
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

class RatFunc {
  public:
    Polynomial num;
    // Factored denominator: canonical forms with positive multiplicities,
    // sorted; after canonicalization no factor divides the numerator.
    std::vector<std::pair<LinearForm, int>> den;

    RatFunc() = default;

    static RatFunc zero() { return {}; }
    static RatFunc one() { return from_rational(Rat(1)); }
    static RatFunc from_rational(Rat c) {
        RatFunc r;
        r.num = Polynomial::constant(std::move(c));
        return r;
    }
    static RatFunc from_polynomial(Polynomial p) {
        RatFunc r;
        r.num = std::move(p);
        return r;
    }

    bool is_zero() const { return num.is_zero(); }

    bool is_polynomial() const { return den.empty(); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num == b.num && a.den == b.den;
    }
};

namespace detail {

inline void sort_den(std::vector<std::pair<LinearForm, int>>& den) {
    std::sort(den.begin(), den.end(), [](const auto& a, const auto& b) {
        return a.first < b.first;
    });
    std::vector<std::pair<LinearForm, int>> merged;
    for (auto& [f, m] : den) {
        if (!merged.empty() && merged.back().first == f)
            merged.back().second += m;
        else
            merged.emplace_back(f, m);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& p) { return p.second == 0; }),
                 merged.end());
    den = std::move(merged);
}

}  // namespace detail

// Assembles num / prod den, folding non-canonical or constant factors into
// the numerator and, when cancel is set, trial-dividing the numerator by
// each denominator factor.
inline RatFunc make_ratfunc(Polynomial num,
                            std::vector<std::pair<LinearForm, int>> den,
                            bool cancel = true) {
    RatFunc r;
    if (num.is_zero()) return r;
    Rat scale(1);
    std::vector<std::pair<LinearForm, int>> kept;
    for (auto& [f, m] : den) {
        if (m < 0) throw value_error("denominator multiplicity must be positive");
        if (m == 0) continue;
        auto [canon, s] = canonical_linear(f.constant, f.coef);
        for (int q = 0; q < m; ++q) scale /= s;
        if (canon.is_constant()) {
            for (int q = 0; q < m; ++q) scale /= Rat(canon.constant);
        } else {
            kept.emplace_back(std::move(canon), m);
        }
    }
    detail::sort_den(kept);
    num = num.scaled(scale);
    if (cancel) {
        for (auto& [f, m] : kept) {
            while (m > 0) {
                auto q = divide_exact(num, f);
                if (!q) break;
                num = std::move(*q);
                --m;
            }
        }
        kept.erase(std::remove_if(kept.begin(), kept.end(),
                                  [](const auto& p) { return p.second == 0; }),
                   kept.end());
    }
    r.num = std::move(num);
    r.den = std::move(kept);
    return r;
}

inline RatFunc from_linear(const LinearForm& f) {
    return RatFunc::from_polynomial(f.to_polynomial());
}

// 1 / prod factors, constructed without any polynomial factorization.
inline RatFunc inverse_of_factors(std::vector<std::pair<LinearForm, int>> factors,
                                  Rat scale = Rat(1)) {
    if (sgn(scale) == 0) throw value_error("division by zero");
    return make_ratfunc(Polynomial::constant(Rat(1) / scale), std::move(factors),
                        /*cancel=*/false);
}

inline RatFunc canonicalize(const RatFunc& r) {
    return make_ratfunc(r.num, r.den, true);
}

inline RatFunc add(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return canonicalize(b);
    if (b.is_zero()) return canonicalize(a);
    // Least common denominator via multiset max of the factor multiplicities.
    std::map<LinearForm, std::pair<int, int>> mults;  // factor -> (in a, in b)
    for (auto& [f, m] : a.den) mults[f].first = m;
    for (auto& [f, m] : b.den) mults[f].second = m;
    Polynomial na = a.num, nb = b.num;
    std::vector<std::pair<LinearForm, int>> lcd;
    for (auto& [f, mm] : mults) {
        int m = std::max(mm.first, mm.second);
        lcd.emplace_back(f, m);
        Polynomial fp = f.to_polynomial();
        for (int q = mm.first; q < m; ++q) na = na * fp;
        for (int q = mm.second; q < m; ++q) nb = nb * fp;
    }
    return make_ratfunc(na + nb, std::move(lcd), true);
}

inline RatFunc neg(const RatFunc& a) {
    RatFunc r = a;
    r.num = r.num.negated();
    return r;
}

inline RatFunc sub(const RatFunc& a, const RatFunc& b) { return add(a, neg(b)); }

inline RatFunc mul(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc::zero();
    std::vector<std::pair<LinearForm, int>> den = a.den;
    den.insert(den.end(), b.den.begin(), b.den.end());
    return make_ratfunc(a.num * b.num, std::move(den), true);
}

// Splits p into scale * product of canonical linear forms when possible.
// Degree <= 1 always factors; higher degrees are peeled by trial division
// against difference forms v - w + c built from the variables present.
inline std::optional<std::pair<Rat, std::vector<std::pair<LinearForm, int>>>>
factor_into_linear_forms(const Polynomial& p) {
    if (p.is_zero()) return std::nullopt;
    std::vector<std::pair<LinearForm, int>> factors;
    Polynomial rest = p;
    if (rest.total_degree() >= 2) {
        std::vector<Variable> vars;
        for (auto& [m, c] : rest.terms)
            for (auto& [v, e] : m.powers) vars.push_back(v);
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end(),
                               [](const Variable& a, const Variable& b) {
                                   return a == b;
                               }),
                   vars.end());
        std::vector<LinearForm> candidates;
        for (size_t i = 0; i < vars.size(); ++i) {
            for (long c = -2; c <= 2; ++c) {
                if (c > 0) candidates.push_back(
                    canonical_linear(Int(c), {{vars[i], Int(1)}}).first);
                for (size_t j = 0; j < vars.size(); ++j) {
                    if (i == j) continue;
                    candidates.push_back(
                        canonical_linear(Int(c), {{vars[i], Int(1)}, {vars[j], Int(-1)}})
                            .first);
                }
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());
        for (const auto& cand : candidates) {
            while (rest.total_degree() >= 2) {
                auto q = divide_exact(rest, cand);
                if (!q) break;
                rest = std::move(*q);
                if (!factors.empty() && factors.back().first == cand)
                    factors.back().second += 1;
                else
                    factors.emplace_back(cand, 1);
            }
        }
        if (rest.total_degree() >= 2) return std::nullopt;
    }
    // Degree <= 1 remainder is a rational multiple of a canonical form.
    if (rest.is_constant()) {
        Rat scale = rest.terms.empty() ? Rat(0) : rest.terms[0].second;
        return std::make_pair(scale, std::move(factors));
    }
    Int constant = 0;
    std::vector<std::pair<Variable, Int>> coef;
    Int denom_lcm = 1;
    for (auto& [m, c] : rest.terms) denom_lcm = lcm(denom_lcm, c.get_den());
    for (auto& [m, c] : rest.terms) {
        Int ic(c.get_num() * (denom_lcm / c.get_den()));
        if (m.is_unit())
            constant = ic;
        else
            coef.emplace_back(m.powers[0].first, ic);
    }
    auto [canon, s] = canonical_linear(constant, std::move(coef));
    factors.emplace_back(std::move(canon), 1);
    detail::sort_den(factors);
    return std::make_pair(s / Rat(denom_lcm), std::move(factors));
}

inline RatFunc inverse(const RatFunc& b) {
    if (b.is_zero()) throw value_error("division by zero");
    auto fac = factor_into_linear_forms(b.num);
    if (!fac)
        throw shape_error(
            "unsupported divisor shape: numerator is not a product of linear forms");
    auto& [scale, num_factors] = *fac;
    Polynomial inv_num = Polynomial::constant(Rat(1) / scale);
    for (auto& [f, m] : b.den) {
        Polynomial fp = f.to_polynomial();
        for (int q = 0; q < m; ++q) inv_num = inv_num * fp;
    }
    return make_ratfunc(std::move(inv_num), std::move(num_factors), true);
}

inline RatFunc div(const RatFunc& a, const RatFunc& b) {
    return mul(a, inverse(b));
}

enum class ArithOp { add, sub, mul, div };

inline RatFunc arith(const RatFunc& a, const RatFunc& b, ArithOp op) {
    switch (op) {
        case ArithOp::add: return add(a, b);
        case ArithOp::sub: return sub(a, b);
        case ArithOp::mul: return mul(a, b);
        case ArithOp::div: return div(a, b);
    }
    throw value_error("unknown arithmetic operation");
}

// a - b == 0 decided by cross-multiplication to a single polynomial.
inline bool is_equal(const RatFunc& a, const RatFunc& b) {
    return sub(a, b).is_zero();
}

// ---------------------------------------------------------------------------
// Weyl action on y, substitution of x
// ---------------------------------------------------------------------------

namespace detail {

template <typename MapVar>
Polynomial map_poly_vars(const Polynomial& p, MapVar&& mv) {
    Polynomial out;
    std::map<Monomial, Rat, MonomialOrder> acc;
    for (auto& [m, c] : p.terms) {
        std::vector<std::pair<Variable, int>> powers;
        for (auto& [v, e] : m.powers) {
            Variable w = mv(v);
            powers.emplace_back(w, e);
        }
        std::sort(powers.begin(), powers.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        Monomial mm;
        for (auto& [v, e] : powers) {
            if (!mm.powers.empty() && mm.powers.back().first == v)
                mm.powers.back().second += e;
            else
                mm.powers.emplace_back(v, e);
        }
        auto [it, fresh] = acc.emplace(std::move(mm), c);
        if (!fresh) it->second += c;
    }
    for (auto& [m, c] : acc)
        if (sgn(c) != 0) out.terms.emplace_back(m, c);
    return out;
}

}  // namespace detail

// Simple reflection s_i acting on the y variables; i = 0 swaps y_1 and y_n.
inline RatFunc act_y(const RatFunc& r, int i, int n) {
    if (n < 2) throw value_error("act_y needs ambient n >= 2");
    if (i < 0 || i > n - 1) throw value_error("act_y index out of range 0..n-1");
    int a = i == 0 ? 1 : i;
    int b = i == 0 ? n : i + 1;
    auto mv = [&](Variable v) {
        if (v.family == Family::Y) {
            if (v.index == a) return yvar(b);
            if (v.index == b) return yvar(a);
        }
        return v;
    };
    RatFunc out;
    out.num = detail::map_poly_vars(r.num, mv);
    std::vector<std::pair<LinearForm, int>> den;
    Rat scale(1);
    for (auto& [f, m] : r.den) {
        std::vector<std::pair<Variable, Int>> coef;
        for (auto& [v, c] : f.coef) coef.emplace_back(mv(v), c);
        auto [canon, s] = canonical_linear(f.constant, std::move(coef));
        for (int q = 0; q < m; ++q) scale /= s;
        den.emplace_back(std::move(canon), m);
    }
    detail::sort_den(den);
    out.num = out.num.scaled(scale);
    out.den = std::move(den);
    return out;  // ring automorphism preserves the no-common-factor invariant
}

// Specializes x_i -> y_{assignment[i-1]} for i = 1..k.  The assignment must
// be strictly increasing inside 1..n.
inline RatFunc substitute_x(const RatFunc& r, const std::vector<int>& assignment,
                            const Context& ctx) {
    if (static_cast<int>(assignment.size()) != ctx.num_x)
        throw value_error("substitution must cover x_1..x_k");
    for (size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] < 1 || assignment[i] > ctx.num_y)
            throw value_error("substitution target out of range 1..n");
        if (i > 0 && assignment[i - 1] >= assignment[i])
            throw value_error("substitution targets must be strictly increasing");
    }
    auto mv = [&](Variable v) {
        if (v.family == Family::X) {
            if (v.index < 1 || v.index > static_cast<int>(assignment.size()))
                throw value_error("x variable outside the substitution range");
            return yvar(assignment[v.index - 1]);
        }
        return v;
    };
    Polynomial num = detail::map_poly_vars(r.num, mv);
    Rat scale(1);
    std::vector<std::pair<LinearForm, int>> den;
    for (auto& [f, m] : r.den) {
        std::vector<std::pair<Variable, Int>> coef;
        for (auto& [v, c] : f.coef) coef.emplace_back(mv(v), c);
        // Collapse duplicate targets before deciding degeneracy.
        std::sort(coef.begin(), coef.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<Variable, Int>> packed;
        for (auto& [v, c] : coef) {
            if (!packed.empty() && packed.back().first == v)
                packed.back().second += c;
            else
                packed.emplace_back(v, c);
        }
        packed.erase(std::remove_if(packed.begin(), packed.end(),
                                    [](const auto& p) { return sgn(p.second) == 0; }),
                     packed.end());
        if (packed.empty() && sgn(f.constant) == 0)
            throw pole_error("substitution makes a denominator factor vanish");
        auto [canon, s] = canonical_linear(f.constant, std::move(packed));
        if (canon.is_constant()) {
            for (int q = 0; q < m; ++q) scale /= Rat(canon.constant) * s;
        } else {
            for (int q = 0; q < m; ++q) scale /= s;
            den.emplace_back(std::move(canon), m);
        }
    }
    detail::sort_den(den);
    return make_ratfunc(num.scaled(scale), std::move(den), true);
}

// Exact evaluation at a rational point; throws if a denominator vanishes.
inline Rat evaluate(const RatFunc& r, const std::map<Variable, Rat>& point) {
    Rat value = r.num.evaluate(point);
    for (auto& [f, m] : r.den) {
        Rat fv = f.to_polynomial().evaluate(point);
        if (sgn(fv) == 0) throw pole_error("evaluation point lies on a pole");
        for (int q = 0; q < m; ++q) value /= fv;
    }
    return value;
}

// Lowest-degree truncation helper: the lowest homogeneous part of the
// numerator over the lowest parts of the denominator factors.  Exposed as a
// convenience only; no structural claims are attached to it.
inline RatFunc lowest_degree_part(const RatFunc& r) {
    if (r.is_zero()) return r;
    Polynomial num = r.num.lowest_part();
    std::vector<std::pair<LinearForm, int>> den;
    Rat scale(1);
    for (auto& [f, m] : r.den) {
        if (sgn(f.constant) != 0 && !f.coef.empty()) {
            // Lowest part of c + linear is the constant c.
            for (int q = 0; q < m; ++q) scale /= Rat(f.constant);
        } else {
            den.emplace_back(f, m);
        }
    }
    return make_ratfunc(num.scaled(scale), std::move(den), true);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

enum class Format { plain, latex, json };

namespace detail {

inline std::string rat_str(const Rat& c) { return c.get_str(); }

inline std::string monomial_str(const Monomial& m, bool latex) {
    std::string out;
    for (auto& [v, e] : m.powers) {
        if (!out.empty()) out += latex ? " " : "*";
        out += latex ? var_latex(v) : var_name(v);
        if (e != 1) out += latex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
    }
    return out;
}

// Terms printed highest total degree first, ties by ascending monomial word.
inline std::string poly_str(const Polynomial& p, bool latex) {
    if (p.is_zero()) return "0";
    std::vector<std::pair<Monomial, Rat>> terms = p.terms;
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree())
            return a.first.degree() > b.first.degree();
        return monomial_less(a.first, b.first);
    });
    std::string out;
    bool first = true;
    for (auto& [m, c] : terms) {
        Rat a = c;
        bool negative = sgn(a) < 0;
        if (negative) a = -a;
        std::string mag = rat_str(a);
        std::string body = monomial_str(m, latex);
        std::string piece;
        if (body.empty())
            piece = latex && a.get_den() != 1
                        ? "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}"
                        : mag;
        else if (a == 1)
            piece = body;
        else
            piece = mag + (latex ? " " : "*") + body;
        if (first) {
            out += (negative ? "-" : "") + piece;
            first = false;
        } else {
            out += (negative ? " - " : " + ") + piece;
        }
    }
    return out;
}

// Linear forms display constant-first: "1 + y1 - y2".
inline std::string form_str(const LinearForm& f, bool latex) {
    std::string out;
    bool first = true;
    auto emit = [&](const Int& c, const std::string& body) {
        bool negative = sgn(c) < 0;
        Int a = abs(c);
        std::string mag = a == 1 && !body.empty() ? "" : a.get_str();
        std::string piece = mag.empty() ? body
                            : body.empty() ? mag
                                           : mag + (latex ? " " : "*") + body;
        if (first) {
            out += (negative ? "-" : "") + piece;
            first = false;
        } else {
            out += (negative ? " - " : " + ") + piece;
        }
    };
    if (sgn(f.constant) != 0) emit(f.constant, "");
    for (auto& [v, c] : f.coef) emit(c, latex ? var_latex(v) : var_name(v));
    return out;
}

}  // namespace detail

inline Json to_json(const RatFunc& r) {
    Json j;
    j["num"] = Json::array();
    for (auto& [m, c] : r.num.terms) {
        Json term;
        term["c"] = detail::rat_str(c);
        Json mono = Json::object();
        for (auto& [v, e] : m.powers) mono[var_name(v)] = e;
        term["m"] = std::move(mono);
        j["num"].push_back(std::move(term));
    }
    j["den"] = Json::array();
    for (auto& [f, m] : r.den) {
        Json entry;
        entry["form"]["const"] = static_cast<long>(f.constant.get_si());
        Json coef = Json::object();
        for (auto& [v, c] : f.coef) coef[var_name(v)] = static_cast<long>(c.get_si());
        entry["form"]["coef"] = std::move(coef);
        entry["mult"] = m;
        j["den"].push_back(std::move(entry));
    }
    j["pref"] = "1";
    return j;
}

inline std::string serialize(const RatFunc& r, Format format) {
    switch (format) {
        case Format::json:
            return to_json(r).dump();
        case Format::plain: {
            if (r.is_zero()) return "0";
            std::string num = detail::poly_str(r.num, false);
            if (r.den.empty()) return num;
            std::string den;
            for (auto& [f, m] : r.den) {
                if (!den.empty()) den += "*";
                den += "(" + detail::form_str(f, false) + ")";
                if (m != 1) den += "^" + std::to_string(m);
            }
            return "(" + num + ")/(" + den + ")";
        }
        case Format::latex: {
            if (r.is_zero()) return "0";
            std::string num = detail::poly_str(r.num, true);
            if (r.den.empty()) return num;
            std::string den;
            for (auto& [f, m] : r.den) {
                if (!den.empty()) den += " ";
                den += "(" + detail::form_str(f, true) + ")";
                if (m != 1) den += "^{" + std::to_string(m) + "}";
            }
            return "\\frac{" + num + "}{" + den + "}";
        }
    }
    throw value_error("unknown serialization format");
}

inline Variable parse_variable(const std::string& name, const Context& ctx) {
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y'))
        throw value_error("bad variable name: " + name);
    int idx = std::stoi(name.substr(1));
    return make_variable(ctx, name[0] == 'x' ? Family::X : Family::Y, idx);
}

inline RatFunc parse_json(const Json& j, const Context& ctx) {
    Polynomial num;
    std::map<Monomial, Rat, MonomialOrder> acc;
    for (auto& term : j.at("num")) {
        Rat c(term.at("c").get<std::string>());
        c.canonicalize();
        Monomial m;
        std::vector<std::pair<Variable, int>> powers;
        for (auto it = term.at("m").begin(); it != term.at("m").end(); ++it) {
            int e = it.value().get<int>();
            if (e <= 0) throw value_error("monomial exponents must be positive");
            powers.emplace_back(parse_variable(it.key(), ctx), e);
        }
        std::sort(powers.begin(), powers.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        m.powers = std::move(powers);
        auto [slot, fresh] = acc.emplace(std::move(m), c);
        if (!fresh) slot->second += c;
    }
    for (auto& [m, c] : acc)
        if (sgn(c) != 0) num.terms.emplace_back(m, c);

    std::vector<std::pair<LinearForm, int>> den;
    for (auto& entry : j.at("den")) {
        Int constant;
        const auto& cj = entry.at("form").at("const");
        constant = cj.is_string() ? Int(cj.get<std::string>())
                                  : Int(cj.get<long>());
        std::vector<std::pair<Variable, Int>> coef;
        for (auto it = entry.at("form").at("coef").begin();
             it != entry.at("form").at("coef").end(); ++it) {
            Int c = it.value().is_string() ? Int(it.value().get<std::string>())
                                           : Int(it.value().get<long>());
            coef.emplace_back(parse_variable(it.key(), ctx), c);
        }
        den.emplace_back(canonical_linear(constant, std::move(coef)).first,
                         entry.at("mult").get<int>());
    }
    RatFunc r = make_ratfunc(std::move(num), std::move(den), true);
    if (j.contains("pref")) {
        Rat pref(j.at("pref").get<std::string>());
        pref.canonicalize();
        r.num = r.num.scaled(pref);
        if (r.num.is_zero()) r.den.clear();
    }
    return r;
}

inline RatFunc parse(const std::string& text, const Context& ctx) {
    return parse_json(Json::parse(text), ctx);
}

}  // namespace csm::symra
