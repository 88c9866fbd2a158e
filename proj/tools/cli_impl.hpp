#pragma once

// Command-line front end.  Subcommands: ffunc, pipedreams, bruhat, localize,
// verify, poset.  Exit codes: 0 success / all checks pass, 1 verification
// failure, 2 usage error.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "csm/chernaffine.hpp"
#include "csm/chernfinite.hpp"
#include "csm/common.hpp"
#include "csm/positroid.hpp"
#include "csm/symra.hpp"
#include "csm/verify.hpp"
#include "csm/weylperm.hpp"

namespace csm::cli {

using weylperm::AffinePerm;
using weylperm::Cocharacter;
using weylperm::FinitePerm;
using weylperm::ParabolicData;

namespace detail {

inline std::vector<long long> parse_csv(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        out.push_back(std::stoll(part));
    }
    if (out.empty()) throw value_error("expected a comma-separated integer list");
    return out;
}

// Accepts "2134" (digits) or "2,1,3,4".
inline FinitePerm parse_perm(const std::string& text) {
    std::vector<int> img;
    if (text.find(',') != std::string::npos) {
        for (long long v : parse_csv(text)) img.push_back(static_cast<int>(v));
    } else {
        for (char ch : text) {
            if (ch < '1' || ch > '9') throw value_error("bad permutation digit");
            img.push_back(ch - '0');
        }
    }
    return FinitePerm::from_one_line(std::move(img));
}

inline std::set<int> parse_parabolic(const std::string& text) {
    std::set<int> out;
    if (text.empty() || text == "none" || text == "-") return out;
    for (long long v : parse_csv(text)) out.insert(static_cast<int>(v));
    return out;
}

inline symra::Format parse_format(const std::string& text) {
    if (text == "plain") return symra::Format::plain;
    if (text == "latex") return symra::Format::latex;
    if (text == "json") return symra::Format::json;
    throw value_error("unknown format: " + text);
}

inline void print_report(const verify::Report& report, bool as_json,
                         std::ostream& out) {
    if (as_json) {
        out << report.to_json().dump() << "\n";
        return;
    }
    for (auto& inst : report.instances) {
        out << (inst.pass ? "pass" : "FAIL") << " " << inst.id;
        if (!inst.detail.empty()) out << " (" << inst.detail << ")";
        out << "\n";
    }
    out << report.suite << ": " << (report.instances.size() - report.failure_count())
        << "/" << report.instances.size() << " instances passed\n";
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact equivariant Chern/Segre class localizations in type A"};
    app.require_subcommand(1);
    bool unsafe = false;
    long long guard_cap = -1;
    app.add_flag("--unsafe-limits", unsafe, "disable the built-in size guards");
    app.add_option("--guard", guard_cap,
                   "lower the size guards to this bound (cannot raise them)");

    // --- ffunc -------------------------------------------------------------
    auto* ffunc = app.add_subcommand(
        "ffunc", "weight generating function of the pipe dreams of f");
    int ff_k = -1, ff_n = -1;
    std::string ff_window, ff_format = "plain";
    bool ff_lowest = false;
    ffunc->add_option("--k", ff_k, "degree")->required();
    ffunc->add_option("--n", ff_n, "period")->required();
    ffunc->add_option("--window", ff_window, "window f(1..n), comma-separated")
        ->required();
    ffunc->add_option("--format", ff_format, "plain|latex|json");
    ffunc->add_flag("--lowest", ff_lowest,
                    "print only the lowest-degree truncation");

    // --- pipedreams ---------------------------------------------------------
    auto* pipedreams =
        app.add_subcommand("pipedreams", "list the pipe dreams of f");
    int pd_k = -1, pd_n = -1;
    std::string pd_window, pd_format = "ascii";
    pipedreams->add_option("--k", pd_k, "degree")->required();
    pipedreams->add_option("--n", pd_n, "period")->required();
    pipedreams->add_option("--window", pd_window, "window f(1..n)")->required();
    pipedreams->add_option("--format", pd_format, "ascii|json");

    // --- bruhat --------------------------------------------------------------
    auto* bruhat = app.add_subcommand(
        "bruhat", "extended P-Bruhat comparison or relation digraph");
    int br_n = -1, br_k = -1;
    std::string br_parabolic, br_u, br_w, br_algorithm = "coset_reduce";
    bool br_dot = false;
    bruhat->add_option("--n", br_n, "rank")->required();
    bruhat->add_option("--parabolic", br_parabolic,
                       "simple indices of W_P, comma-separated");
    bruhat->add_option("--k", br_k, "shorthand for the maximal parabolic missing s_k");
    bruhat->add_option("--u", br_u, "one-line permutation");
    bruhat->add_option("--w", br_w, "one-line permutation");
    bruhat->add_option("--algorithm", br_algorithm,
                       "cover_bfs|coset_reduce|affine|all");
    bruhat->add_flag("--dot", br_dot, "export the relation digraph instead");

    // --- localize -------------------------------------------------------------
    auto* localize = app.add_subcommand("localize", "print localization tables");
    int lc_n = -1;
    std::string lc_schubert, lc_u, lc_w, lc_lambda, lc_window, lc_g;
    std::string lc_format = "plain";
    bool lc_richardson = false, lc_projrich = false, lc_affine = false;
    localize->add_option("--n", lc_n, "rank");
    localize->add_option("--schubert", lc_schubert,
                         "csm-cell|ssm-cell|csm-opp|ssm-opp (needs --w)");
    localize->add_flag("--richardson", lc_richardson, "needs --u and --w");
    localize->add_flag("--projrich", lc_projrich, "needs --lambda");
    localize->add_flag("--affine", lc_affine, "needs --window and --g");
    localize->add_option("--u", lc_u, "one-line permutation");
    localize->add_option("--w", lc_w, "one-line permutation");
    localize->add_option("--lambda", lc_lambda, "dominant cocharacter");
    localize->add_option("--window", lc_window, "affine window");
    localize->add_option("--g", lc_g, "affine window of the localization point");
    localize->add_option("--format", lc_format, "plain|latex|json");

    // --- verify ----------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "run a named identity suite");
    std::string vf_suite;
    int vf_n = -1, vf_k = -1;
    std::string vf_lambda;
    uint64_t vf_seed = 20250801;
    bool vf_json = false;
    verify_cmd
        ->add_option("suite", vf_suite,
                     "ybe|thm41|cor43|thm36|thm62|thm75|duality")
        ->required();
    verify_cmd->add_option("--n", vf_n, "rank bound / period");
    verify_cmd->add_option("--k", vf_k, "degree (thm75)");
    verify_cmd->add_option("--lambda", vf_lambda, "restrict to one cocharacter");
    verify_cmd->add_option("--seed", vf_seed, "seed for the randomized sweep");
    verify_cmd->add_flag("--json", vf_json, "emit the JSON report");

    // --- poset -----------------------------------------------------------------
    auto* poset = app.add_subcommand("poset", "DOT export of the relation digraph");
    int ps_n = -1;
    std::string ps_parabolic;
    poset->add_option("--n", ps_n, "rank")->required();
    poset->add_option("--parabolic", ps_parabolic, "simple indices of W_P");

    std::vector<const char*> argv;
    argv.push_back("csm");
    for (auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (unsafe) limits::unsafe = true;
    if (guard_cap >= 0) limits::requested_cap = guard_cap;

    try {
        if (*ffunc) {
            AffinePerm f = AffinePerm::from_window(detail::parse_csv(ff_window));
            if (f.n() != ff_n) throw value_error("window length must equal n");
            if (f.degree() != ff_k)
                throw value_error("window degree must equal k");
            symra::RatFunc value = positroid::f_tilde(f);
            if (ff_lowest) value = symra::lowest_degree_part(value);
            out << symra::serialize(value, detail::parse_format(ff_format)) << "\n";
            return 0;
        }
        if (*pipedreams) {
            AffinePerm f = AffinePerm::from_window(detail::parse_csv(pd_window));
            if (f.n() != pd_n) throw value_error("window length must equal n");
            if (f.degree() != pd_k)
                throw value_error("window degree must equal k");
            auto dreams = positroid::enumerate_pd(f);
            if (pd_format == "json") {
                nlohmann::json arr = nlohmann::json::array();
                for (auto& pd : dreams) {
                    nlohmann::json j;
                    j["k"] = pd.k;
                    j["n"] = pd.n;
                    j["rows"] = pd.rows;
                    arr.push_back(std::move(j));
                }
                out << arr.dump() << "\n";
            } else if (pd_format == "ascii") {
                bool first = true;
                for (auto& pd : dreams) {
                    if (!first) out << "\n";
                    first = false;
                    for (auto& row : pd.rows) out << row << "\n";
                }
            } else {
                throw value_error("unknown format: " + pd_format);
            }
            return 0;
        }
        if (*bruhat) {
            std::set<int> simples = detail::parse_parabolic(br_parabolic);
            if (br_k > 0) {
                for (int i = 1; i <= br_n - 1; ++i)
                    if (i != br_k) simples.insert(i);
            }
            ParabolicData P = ParabolicData::from_simple_set(br_n, simples);
            if (br_dot) {
                out << weylperm::poset_export(P);
                return 0;
            }
            if (br_u.empty() || br_w.empty())
                throw value_error("bruhat query needs --u and --w (or --dot)");
            FinitePerm u = detail::parse_perm(br_u);
            FinitePerm w = detail::parse_perm(br_w);
            if (u.n() != br_n || w.n() != br_n)
                throw value_error("permutations must have length n");
            bool result;
            if (br_algorithm == "all") {
                bool a = weylperm::ext_p_bruhat(u, w, P,
                                                weylperm::ExtPAlgorithm::cover_bfs);
                bool b = weylperm::ext_p_bruhat(
                    u, w, P, weylperm::ExtPAlgorithm::coset_reduce);
                bool c = weylperm::ext_p_bruhat(u, w, P,
                                                weylperm::ExtPAlgorithm::affine);
                if (a != b || b != c) {
                    err << "algorithm disagreement\n";
                    return 1;
                }
                result = a;
            } else {
                weylperm::ExtPAlgorithm alg;
                if (br_algorithm == "cover_bfs")
                    alg = weylperm::ExtPAlgorithm::cover_bfs;
                else if (br_algorithm == "coset_reduce")
                    alg = weylperm::ExtPAlgorithm::coset_reduce;
                else if (br_algorithm == "affine")
                    alg = weylperm::ExtPAlgorithm::affine;
                else
                    throw value_error("unknown algorithm: " + br_algorithm);
                result = weylperm::ext_p_bruhat(u, w, P, alg);
            }
            out << (result ? "true" : "false") << "\n";
            return 0;
        }
        if (*localize) {
            int modes = (lc_schubert.empty() ? 0 : 1) + (lc_richardson ? 1 : 0) +
                        (lc_projrich ? 1 : 0) + (lc_affine ? 1 : 0);
            if (modes != 1)
                throw value_error(
                    "localize needs exactly one of --schubert/--richardson/"
                    "--projrich/--affine");
            symra::Format fmt = detail::parse_format(lc_format);
            auto print_table = [&](const chernfinite::LocTable& t) {
                if (fmt == symra::Format::json) {
                    out << chernfinite::to_json(t).dump() << "\n";
                } else {
                    for (auto& [key, value] : t.entries)
                        out << chernfinite::key_string(key) << ": "
                            << symra::serialize(value, fmt) << "\n";
                }
            };
            if (!lc_schubert.empty()) {
                if (lc_n < 0 || lc_w.empty())
                    throw value_error("--schubert needs --n and --w");
                chernfinite::SchubertTables tables(lc_n);
                FinitePerm w = detail::parse_perm(lc_w);
                if (lc_schubert == "csm-cell") print_table(tables.csm_cell(w));
                else if (lc_schubert == "ssm-cell") print_table(tables.ssm_cell(w));
                else if (lc_schubert == "csm-opp") print_table(tables.csm_opp(w));
                else if (lc_schubert == "ssm-opp") print_table(tables.ssm_opp(w));
                else throw value_error("unknown table kind: " + lc_schubert);
            } else if (lc_richardson) {
                if (lc_n < 0 || lc_u.empty() || lc_w.empty())
                    throw value_error("--richardson needs --n, --u and --w");
                chernfinite::SchubertTables tables(lc_n);
                print_table(tables.richardson_csm(detail::parse_perm(lc_u),
                                                  detail::parse_perm(lc_w)));
            } else if (lc_projrich) {
                if (lc_lambda.empty()) throw value_error("--projrich needs --lambda");
                Cocharacter lam{detail::parse_csv(lc_lambda)};
                ParabolicData P = ParabolicData::from_lambda(lam);
                chernfinite::ProjRichTable table(P);
                if (!lc_window.empty()) {
                    AffinePerm f =
                        AffinePerm::from_window(detail::parse_csv(lc_window));
                    for (auto& mu : table.orbit())
                        out << chernfinite::key_string(mu) << ": "
                            << symra::serialize(table.at(f, mu), fmt) << "\n";
                } else if (fmt == symra::Format::json) {
                    nlohmann::json all = nlohmann::json::object();
                    for (auto& f : table.bplus()) {
                        nlohmann::json per = nlohmann::json::object();
                        for (auto& mu : table.orbit())
                            per[chernfinite::key_string(mu)] =
                                symra::to_json(table.at(f, mu));
                        all[chernfinite::key_string(f.window)] = std::move(per);
                    }
                    out << all.dump() << "\n";
                } else {
                    for (auto& f : table.bplus())
                        for (auto& mu : table.orbit())
                            out << "f=" << chernfinite::key_string(f.window)
                                << " mu=" << chernfinite::key_string(mu) << ": "
                                << symra::serialize(table.at(f, mu), fmt) << "\n";
                }
            } else {
                if (lc_window.empty() || lc_g.empty() || lc_n < 0)
                    throw value_error("--affine needs --n, --window and --g");
                AffinePerm f = AffinePerm::from_window(detail::parse_csv(lc_window));
                AffinePerm g = AffinePerm::from_window(detail::parse_csv(lc_g));
                if (f.n() != lc_n || g.n() != lc_n)
                    throw value_error("window length must equal n");
                chernaffine::AffineLocCache cache;
                out << symra::serialize(chernaffine::affine_ssm_loc(f, g, cache), fmt)
                    << "\n";
            }
            return 0;
        }
        if (*verify_cmd) {
            verify::Report report;
            if (vf_suite == "ybe") {
                report = verify::ybe();
            } else if (vf_suite == "thm41") {
                report = verify::thm41(vf_seed);
            } else if (vf_suite == "cor43") {
                if (!vf_lambda.empty())
                    report = verify::cor43({Cocharacter{detail::parse_csv(vf_lambda)}});
                else
                    report = verify::cor43();
            } else if (vf_suite == "thm36") {
                report = verify::thm36(vf_n > 0 ? vf_n : 4);
            } else if (vf_suite == "thm62") {
                if (!vf_lambda.empty())
                    report = verify::thm62({Cocharacter{detail::parse_csv(vf_lambda)}});
                else
                    report = verify::thm62();
            } else if (vf_suite == "thm75") {
                if (vf_k < 0 || vf_n < 0) throw value_error("thm75 needs --k and --n");
                report = verify::thm75(vf_k, vf_n);
            } else if (vf_suite == "duality") {
                report = verify::duality(vf_n > 0 ? vf_n : 3);
            } else {
                throw value_error("unknown suite: " + vf_suite);
            }
            detail::print_report(report, vf_json, out);
            return report.all_pass() ? 0 : 1;
        }
        if (*poset) {
            ParabolicData P = ParabolicData::from_simple_set(
                ps_n, detail::parse_parabolic(ps_parabolic));
            out << weylperm::poset_export(P);
            return 0;
        }
    } catch (const guard_error& e) {
        err << "refused: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace csm::cli
