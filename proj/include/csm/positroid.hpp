#pragma once

// Cylindrical pipe dreams for bounded affine permutations and their weight
// generating function.  A grid has k rows (top to bottom) and n columns per
// period, each tile either Bump or Cross:
//   Cross: south -> north and west -> east
//   Bump:  south -> east and west -> north
// Pipes are traced in the universal cover; the pipe entering the bottom of
// column j exits a top edge at column f(j).

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "csm/chernaffine.hpp"
#include "csm/common.hpp"
#include "csm/symra.hpp"
#include "csm/weylperm.hpp"

namespace csm::positroid {

using symra::Polynomial;
using symra::Rat;
using symra::RatFunc;
using weylperm::AffinePerm;

struct PipeDream {
    int k = 0;
    int n = 0;
    std::vector<std::string> rows;  // rows[0] is the top row; 'B' or 'X'

    bool cross(int row, long long col) const {  // 1-based row, cover column
        int c = static_cast<int>(((col - 1) % n + n) % n);
        return rows[row - 1][c] == 'X';
    }

    friend bool operator==(const PipeDream& a, const PipeDream& b) {
        return a.k == b.k && a.n == b.n && a.rows == b.rows;
    }
    friend bool operator<(const PipeDream& a, const PipeDream& b) {
        return a.rows < b.rows;
    }
};

inline PipeDream make_pipedream(int k, int n, std::vector<std::string> rows) {
    if (k < 1 || n < 1) throw value_error("grid dimensions must be positive");
    if (static_cast<int>(rows.size()) != k)
        throw value_error("grid must have k rows");
    for (auto& row : rows) {
        if (static_cast<int>(row.size()) != n)
            throw value_error("grid rows must have n tiles");
        bool has_bump = false;
        for (char t : row) {
            if (t != 'B' && t != 'X') throw value_error("tiles must be 'B' or 'X'");
            if (t == 'B') has_bump = true;
        }
        if (!has_bump)
            throw value_error(
                "grid rejected: an all-Cross row closes a pipe into a loop");
    }
    return PipeDream{k, n, std::move(rows)};
}

// Parses the ASCII format: k lines of n characters from {B, X}.
inline PipeDream parse_grid(const std::string& text) {
    std::vector<std::string> rows;
    std::string current;
    for (char ch : text) {
        if (ch == '\n') {
            if (!current.empty()) rows.push_back(current);
            current.clear();
        } else if (!isspace(static_cast<unsigned char>(ch))) {
            current += ch;
        }
    }
    if (!current.empty()) rows.push_back(current);
    if (rows.empty()) throw value_error("empty grid");
    int k = static_cast<int>(rows.size());
    int n = static_cast<int>(rows[0].size());
    return make_pipedream(k, n, std::move(rows));
}

inline AffinePerm reading_permutation(const PipeDream& pd) {
    std::vector<long long> window(pd.n);
    for (int j = 1; j <= pd.n; ++j) {
        long long c = j;
        int r = pd.k;
        bool from_south = true;
        int east_run = 0;
        while (r >= 1) {
            bool x = pd.cross(r, c);
            if (from_south) {
                if (x) {
                    --r;
                    east_run = 0;
                } else {
                    ++c;
                    from_south = false;
                    ++east_run;
                }
            } else {
                if (x) {
                    ++c;
                    ++east_run;
                } else {
                    --r;
                    from_south = true;
                    east_run = 0;
                }
            }
            if (east_run > pd.n)
                throw error("no reading permutation: a pipe winds without exit");
        }
        window[j - 1] = c;
    }
    return AffinePerm::from_window(std::move(window));
}

// ---------------------------------------------------------------------------
// Enumeration of PD(f)
// ---------------------------------------------------------------------------

namespace detail {

inline void check_bounded_input(const AffinePerm& f, int& k, int& n) {
    n = f.n();
    if (!weylperm::is_bounded(f))
        throw value_error("pipe dreams require a bounded affine permutation");
    k = static_cast<int>(f.degree());
    limits::check_size(static_cast<long long>(k) * n, 24,
                  "pipe dream enumeration supports k*n <= 24");
}

}  // namespace detail

// Reference enumeration: filter all 2^{kn} grids.
inline std::vector<PipeDream> enumerate_pd_baseline(const AffinePerm& f) {
    int k, n;
    detail::check_bounded_input(f, k, n);
    if (k == 0) return {PipeDream{0, n, {}}};  // the empty tiling reads to id
    std::vector<PipeDream> out;
    long long total = 1LL << (k * n);
    for (long long mask = 0; mask < total; ++mask) {
        std::vector<std::string> rows(k, std::string(n, 'B'));
        bool valid = true;
        for (int r = 0; r < k && valid; ++r) {
            bool has_bump = false;
            for (int c = 0; c < n; ++c) {
                if ((mask >> (r * n + c)) & 1)
                    rows[r][c] = 'X';
                else
                    has_bump = true;
            }
            valid = has_bump;
        }
        if (!valid) continue;
        PipeDream pd{k, n, std::move(rows)};
        if (reading_permutation(pd) == f) out.push_back(std::move(pd));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Column-by-column search with partial-wiring pruning.  The k pipes crossing
// the period seam are exactly { j : f(j) > n }; their row order is the only
// seam freedom, so the search runs once per row assignment.
inline std::vector<PipeDream> enumerate_pd(const AffinePerm& f) {
    int k, n;
    detail::check_bounded_input(f, k, n);
    if (k == 0) return {PipeDream{0, n, {}}};
    std::vector<long long> seam;
    for (int j = 1; j <= n; ++j)
        if (f.window[j - 1] > n) seam.push_back(j - n);  // cover ids west of column 1
    if (static_cast<int>(seam.size()) != k)
        throw error("internal: seam crossing count must equal the degree");

    std::vector<PipeDream> out;
    std::sort(seam.begin(), seam.end());
    do {
        // west[r] = pipe id on the west edge of the current column in row r+1.
        std::vector<long long> west = seam;
        std::vector<std::string> rows(k, std::string(n, 'B'));
        auto rec = [&](auto&& self, int col, std::vector<long long> west_state) -> void {
            if (col > n) {
                for (int r = 0; r < k; ++r)
                    if (west_state[r] != seam[r] + n) return;
                out.push_back(PipeDream{k, n, rows});
                return;
            }
            for (int choice = 0; choice < (1 << k); ++choice) {
                long long vert = col;  // pipe entering from the bottom edge
                std::vector<long long> east(k);
                bool ok = true;
                for (int r = k; r >= 1 && ok; --r) {
                    bool x = (choice >> (r - 1)) & 1;
                    if (x) {
                        east[r - 1] = west_state[r - 1];
                    } else {
                        east[r - 1] = vert;
                        vert = west_state[r - 1];
                    }
                }
                if (f(vert) != col) continue;  // top exit must match
                for (int r = 0; r < k && ok; ++r)
                    if (f(east[r]) <= col) ok = false;  // must exit further east
                if (!ok) continue;
                for (int r = 1; r <= k; ++r)
                    rows[r - 1][col - 1] = ((choice >> (r - 1)) & 1) ? 'X' : 'B';
                self(self, col + 1, east);
            }
        };
        rec(rec, 1, west);
    } while (std::next_permutation(seam.begin(), seam.end()));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Weight generating function
// ---------------------------------------------------------------------------

// Sum over PD(f) of prod [Cross -> (x_i - y_j), Bump -> 1] over the common
// denominator prod (1 + x_i - y_j), which is kept factored and uncancelled
// to match the usual display.
inline RatFunc f_tilde(const AffinePerm& f) {
    int k, n;
    detail::check_bounded_input(f, k, n);
    if (k == 0) return RatFunc::one();  // one empty tiling, empty products
    std::vector<PipeDream> dreams = enumerate_pd(f);
    if (dreams.empty()) return RatFunc::zero();
    Polynomial num;
    for (auto& pd : dreams) {
        Polynomial term = Polynomial::constant(Rat(1));
        for (int i = 1; i <= k; ++i)
            for (int j = 1; j <= n; ++j)
                if (pd.rows[i - 1][j - 1] == 'X') {
                    auto [form, s] =
                        symra::linear_diff(0, symra::xvar(i), symra::yvar(j));
                    term = term * form.to_polynomial().scaled(s);
                }
        num = num + term;
    }
    std::vector<std::pair<symra::LinearForm, int>> den;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= n; ++j)
            den.emplace_back(symra::canonical_linear(
                                 1, {{symra::xvar(i), symra::Int(1)},
                                     {symra::yvar(j), symra::Int(-1)}})
                                 .first,
                             1);
    return symra::make_ratfunc(std::move(num), std::move(den), /*cancel=*/false);
}

// ---------------------------------------------------------------------------
// Specialization check against the affine localization
// ---------------------------------------------------------------------------

struct SpecializeReport {
    int checked = 0;
    std::vector<std::string> mismatches;
    bool ok() const { return mismatches.empty(); }
};

// For every k-subset S = {a_1 < ... < a_k} of [n], substituting x_i -> y_{a_i}
// into the generating function must equal the affine localization at the
// translation by the indicator vector of S.
inline SpecializeReport specialize_check(const AffinePerm& f,
                                         chernaffine::AffineLocCache& cache) {
    int k, n;
    detail::check_bounded_input(f, k, n);
    limits::check_size(n, 5, "specialization check supports n <= 5");
    RatFunc ff = f_tilde(f);
    Context ctx{k, n};
    SpecializeReport report;
    std::vector<int> subset(k);
    auto rec = [&](auto&& self, int pos, int next) -> void {
        if (pos == k) {
            std::vector<long long> mu(n, 0);
            for (int a : subset) mu[a - 1] = 1;
            RatFunc lhs = symra::substitute_x(ff, subset, ctx);
            AffinePerm tmu =
                AffinePerm::translation(weylperm::Cocharacter{mu});
            RatFunc rhs = chernaffine::affine_ssm_loc(f, tmu, cache);
            ++report.checked;
            if (!symra::is_equal(lhs, rhs)) {
                std::string id = "S={";
                for (int q = 0; q < k; ++q)
                    id += (q ? "," : "") + std::to_string(subset[q]);
                id += "}";
                report.mismatches.push_back(id);
            }
            return;
        }
        for (int a = next; a <= n; ++a) {
            subset[pos] = a;
            self(self, pos + 1, a + 1);
        }
    };
    rec(rec, 0, 1);
    return report;
}

}  // namespace csm::positroid
