#pragma once

// Shared helpers for the test suites: compact constructors for rational
// functions and a deterministic random generator over the denominator shapes
// that actually occur.

#include <random>
#include <vector>

#include "csm/symra.hpp"

namespace testutil {

using csm::symra::Polynomial;
using csm::symra::Rat;
using csm::symra::RatFunc;
using csm::symra::Variable;

inline RatFunc Y(int j) {
    return RatFunc::from_polynomial(Polynomial::variable(csm::symra::yvar(j)));
}
inline RatFunc X(int i) {
    return RatFunc::from_polynomial(Polynomial::variable(csm::symra::xvar(i)));
}
inline RatFunc C(long v) { return RatFunc::from_rational(Rat(v)); }

inline RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return csm::symra::add(a, b);
}
inline RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return csm::symra::sub(a, b);
}
inline RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return csm::symra::mul(a, b);
}
inline RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    return csm::symra::div(a, b);
}

// Random rational function over ambient (k, n): a small polynomial numerator
// over a product of forms c + v - w with c in {0, 1}.
struct RandomRatFunc {
    std::mt19937_64 rng;
    csm::Context ctx;

    RandomRatFunc(uint64_t seed, csm::Context context) : rng(seed), ctx(context) {}

    Variable random_var() {
        std::uniform_int_distribution<int> family(0, ctx.num_x > 0 ? 1 : 0);
        if (ctx.num_x > 0 && family(rng) == 0) {
            std::uniform_int_distribution<int> idx(1, ctx.num_x);
            return csm::symra::xvar(idx(rng));
        }
        std::uniform_int_distribution<int> idx(1, ctx.num_y);
        return csm::symra::yvar(idx(rng));
    }

    Polynomial random_poly() {
        std::uniform_int_distribution<int> nterms(1, 4), coeff(-4, 4), ndeg(0, 2);
        Polynomial p;
        int terms = nterms(rng);
        for (int t = 0; t < terms; ++t) {
            Polynomial mono = Polynomial::constant(Rat(coeff(rng)));
            int deg = ndeg(rng);
            for (int d = 0; d < deg; ++d)
                mono = mono * Polynomial::variable(random_var());
            p = p + mono;
        }
        return p;
    }

    RatFunc operator()() {
        std::uniform_int_distribution<int> nden(0, 2), constant(0, 1);
        std::vector<std::pair<csm::symra::LinearForm, int>> den;
        int factors = nden(rng);
        for (int t = 0; t < factors; ++t) {
            Variable a = random_var(), b = random_var();
            if (a == b) continue;
            long c = constant(rng);
            auto canon = csm::symra::canonical_linear(
                csm::symra::Int(c),
                {{a, csm::symra::Int(1)}, {b, csm::symra::Int(-1)}});
            den.emplace_back(canon.first, 1);
        }
        return csm::symra::make_ratfunc(random_poly(), std::move(den), true);
    }

    Rat random_rat() {
        std::uniform_int_distribution<int> num(-30, 30), den(1, 7);
        return Rat(num(rng), den(rng));
    }
};

}  // namespace testutil
