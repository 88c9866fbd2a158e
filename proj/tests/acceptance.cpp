// Acceptance suite: one line per criterion, exit 0 iff all pass.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "csm/chernaffine.hpp"
#include "csm/chernfinite.hpp"
#include "csm/positroid.hpp"
#include "csm/symra.hpp"
#include "csm/verify.hpp"
#include "csm/weylperm.hpp"

using namespace csm;
using namespace csm::weylperm;
using csm::symra::is_equal;
using csm::symra::RatFunc;

namespace {

int failures = 0;

std::pair<bool, std::string> acceptance_result(bool ok, std::string detail) {
    return {ok, std::move(detail)};
}

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << " ("
              << name << "): " << detail << " [" << seconds << "s]\n";
    if (!pass) ++failures;
}

template <typename Fn>
void timed(int criterion, const std::string& name, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    std::pair<bool, std::string> result;
    try {
        result = fn();
    } catch (const std::exception& e) {
        result = {false, std::string("exception: ") + e.what()};
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report(criterion, name, result.first, result.second, seconds);
}

RatFunc xy(int i, int j) {
    return symra::sub(
        RatFunc::from_polynomial(symra::Polynomial::variable(symra::xvar(i))),
        RatFunc::from_polynomial(symra::Polynomial::variable(symra::yvar(j))));
}

RatFunc inv_common_denominator(int k, int n) {
    std::vector<std::pair<symra::LinearForm, int>> den;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= n; ++j)
            den.emplace_back(symra::canonical_linear(
                                 1, {{symra::xvar(i), symra::Int(1)},
                                     {symra::yvar(j), symra::Int(-1)}})
                                 .first,
                             1);
    return symra::inverse_of_factors(std::move(den));
}

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Count of bounded degree-k affine permutations through the decorated
// permutation statistics: each finite permutation contributes
// C(#fixed points, k - #exceedances).
long long decorated_count(int k, int n) {
    long long total = 0;
    for (auto& p : all_perms(n)) {
        int fix = 0, exc = 0;
        for (int i = 1; i <= n; ++i) {
            if (p(i) == i) ++fix;
            if (p(i) > i) ++exc;
        }
        total += binomial(fix, k - exc);
    }
    return total;
}

}  // namespace

int main() {
    timed(1, "two-row pipe dream golden example", []() {
        AffinePerm f = AffinePerm::from_window({2, 5, 4, 7});
        auto dreams = positroid::enumerate_pd(f);
        if (dreams.size() != 6)
            return acceptance_result(false, "expected 6 tilings, got " +
                                             std::to_string(dreams.size()));
        RatFunc num = RatFunc::zero();
        auto add_term = [&](std::vector<std::pair<int, int>> crosses) {
            RatFunc t = RatFunc::one();
            for (auto& [i, j] : crosses) t = symra::mul(t, xy(i, j));
            num = symra::add(num, t);
        };
        add_term({{2, 1}, {2, 3}});
        add_term({{1, 2}, {2, 3}});
        add_term({{1, 4}, {2, 1}});
        add_term({{1, 2}, {1, 4}});
        add_term({{1, 3}, {1, 4}, {2, 1}, {2, 2}});
        add_term({{1, 1}, {1, 2}, {2, 3}, {2, 4}});
        RatFunc expected = symra::mul(num, inv_common_denominator(2, 4));
        bool equal = is_equal(positroid::f_tilde(f), expected);
        return acceptance_result(equal, (equal ? "6 tilings, formula matches"
                                           : "formula mismatch"));
    });

    timed(2, "one-row pipe dream golden example", []() {
        AffinePerm f = AffinePerm::from_window({3, 2, 7, 4, 5, 6, 8, 10, 9});
        auto dreams = positroid::enumerate_pd(f);
        if (dreams.size() != 1)
            return acceptance_result(false, "expected a unique tiling, got " +
                                             std::to_string(dreams.size()));
        RatFunc num = RatFunc::one();
        for (int j : {2, 4, 5, 6, 9}) num = symra::mul(num, xy(1, j));
        RatFunc expected = symra::mul(num, inv_common_denominator(1, 9));
        bool equal = is_equal(positroid::f_tilde(f), expected);
        return acceptance_result(equal, (equal ? "unique tiling, formula matches"
                                           : "formula mismatch"));
    });

    timed(3, "specializations match the affine localizations", []() {
        std::vector<std::tuple<int, int, size_t>> shapes = {
            {1, 2, 3}, {1, 3, 7}, {2, 4, 33}};
        std::string detail;
        for (auto& [k, n, count] : shapes) {
            auto bounded = enumerate_bounded(k, n);
            if (bounded.size() != count)
                return acceptance_result(
                    false, "wrong bounded count at (" + std::to_string(k) + "," +
                               std::to_string(n) + ")");
            if (decorated_count(k, n) != static_cast<long long>(count))
                return acceptance_result(
                    false, "decorated-permutation oracle disagrees at (" +
                               std::to_string(k) + "," + std::to_string(n) + ")");
            verify::Report report = verify::thm75(k, n);
            if (!report.all_pass()) {
                for (auto& inst : report.instances)
                    if (!inst.pass)
                        return acceptance_result(false, "first failure: " + inst.id +
                                                         " " + inst.detail);
            }
            detail += std::to_string(count) + " ";
        }
        return acceptance_result(true, "instance counts " + detail + "all match");
    });

    timed(4, "finite recursion equals corrected affine localization", []() {
        verify::Report report = verify::thm62();
        if (!report.all_pass()) {
            for (auto& inst : report.instances)
                if (!inst.pass)
                    return acceptance_result(false,
                                          "first failure: " + inst.id + " " +
                                              inst.detail);
        }
        int pairs = 0;
        for (auto& inst : report.instances) {
            size_t pos = inst.detail.find(' ');
            pairs += std::stoi(inst.detail.substr(0, pos));
        }
        return acceptance_result(true, std::to_string(report.instances.size()) +
                                        " shapes, " + std::to_string(pairs) +
                                        " localization pairs");
    });

    timed(5, "pushforward support matches the order, algorithms agree", []() {
        verify::Report report = verify::thm36(4);
        if (!report.all_pass()) {
            for (auto& inst : report.instances)
                if (!inst.pass)
                    return acceptance_result(false,
                                          "first failure: " + inst.id + " " +
                                              inst.detail);
        }
        return acceptance_result(
            true, std::to_string(report.instances.size()) + " instances");
    });

    timed(6, "relation digraphs match the transcribed figures", []() {
        ParabolicData P3 = ParabolicData::from_simple_set(3, {1});
        auto arcs3 = poset_arcs(P3);
        std::vector<std::pair<std::string, std::string>> expected3 = {
            {"123", "132"}, {"123", "321"}, {"132", "231"},
            {"213", "231"}, {"213", "312"}, {"312", "321"}};
        std::sort(expected3.begin(), expected3.end());
        if (arcs3 != expected3)
            return acceptance_result(false, ("rank-3 digraph mismatch"));

        static const char* fig4[][2] = {
            {"1234", "1243"}, {"1234", "1432"}, {"1234", "2134"},
            {"1234", "3214"}, {"1234", "4231"}, {"1243", "1342"},
            {"1243", "2143"}, {"1243", "3241"}, {"1243", "4213"},
            {"1324", "1342"}, {"1324", "1423"}, {"1324", "2314"},
            {"1324", "3124"}, {"1324", "4321"}, {"1342", "2341"},
            {"1342", "3142"}, {"1342", "4312"}, {"1423", "1432"},
            {"1423", "2413"}, {"1423", "3421"}, {"1423", "4123"},
            {"1432", "2431"}, {"1432", "3412"}, {"1432", "4132"},
            {"2134", "2143"}, {"2134", "2431"}, {"2134", "3124"},
            {"2134", "4132"}, {"2143", "2341"}, {"2143", "3142"},
            {"2143", "4123"}, {"2314", "2341"}, {"2314", "2413"},
            {"2314", "3214"}, {"2314", "4312"}, {"2341", "3241"},
            {"2341", "4321"}, {"2413", "2431"}, {"2413", "3412"},
            {"2413", "4213"}, {"2431", "3421"}, {"2431", "4231"},
            {"3124", "3142"}, {"3124", "3421"}, {"3124", "4123"},
            {"3142", "3241"}, {"3142", "4132"}, {"3214", "3241"},
            {"3214", "3412"}, {"3214", "4213"}, {"3241", "4231"},
            {"3412", "3421"}, {"3412", "4312"}, {"3421", "4321"},
            {"4123", "4132"}, {"4123", "4321"}, {"4132", "4231"},
            {"4213", "4231"}, {"4213", "4312"}, {"4312", "4321"}};
        std::vector<std::pair<std::string, std::string>> expected4;
        for (auto& arc : fig4) expected4.emplace_back(arc[0], arc[1]);
        std::sort(expected4.begin(), expected4.end());
        ParabolicData P4 = ParabolicData::from_simple_set(4, {2});
        auto arcs4 = poset_arcs(P4);
        if (arcs4 != expected4) {
            std::string detail = "rank-4 digraph mismatch:";
            for (auto& a : arcs4)
                if (std::find(expected4.begin(), expected4.end(), a) ==
                    expected4.end())
                    detail += " extra " + a.first + "->" + a.second;
            for (auto& a : expected4)
                if (std::find(arcs4.begin(), arcs4.end(), a) == arcs4.end())
                    detail += " missing " + a.first + "->" + a.second;
            return acceptance_result(false, detail);
        }
        return acceptance_result(true, ("6 and 60 arcs match"));
    });

    timed(7, "identity suites", []() {
        std::string detail;
        verify::Report ybe = verify::ybe();
        if (!ybe.all_pass()) return acceptance_result(false, "local moves failed");
        detail += "local-moves ";

        for (int n = 2; n <= 4; ++n)
            if (!verify::partition_of_unity(n))
                return acceptance_result(false,
                                      "partition of unity failed at n=" +
                                          std::to_string(n));
        detail += "partition-of-unity ";

        verify::Report dual = verify::duality(3);
        if (!dual.all_pass()) return acceptance_result(false, "duality failed");
        detail += "duality ";

        verify::Report t41 = verify::thm41();
        if (!t41.all_pass()) {
            for (auto& inst : t41.instances)
                if (!inst.pass)
                    return acceptance_result(false, "product recursion failed: " +
                                                     inst.id);
        }
        detail += "product-recursion ";

        verify::Report rr = verify::right_recursion(2, 3);
        if (!rr.all_pass())
            return acceptance_result(false, "right recursion failed");
        detail += "right-recursion ";

        if (!verify::affine_word_independence(2, 4) ||
            !verify::affine_word_independence(3, 3))
            return acceptance_result(false, "word independence failed");
        detail += "word-independence";
        return acceptance_result(true, detail);
    });

    if (failures == 0)
        std::cout << "all acceptance criteria passed\n";
    else
        std::cout << failures << " acceptance criteria FAILED\n";
    return failures == 0 ? 0 : 1;
}
