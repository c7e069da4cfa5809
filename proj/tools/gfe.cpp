// gfe: generalized Fermat equation toolkit
//
// Subcommands: level (predicted newform level), local (per-place local
// analysis), traces (Frobenius traces of residue-class Frey curves), fetch
// (Hilbert newform data from the LMFDB), eliminate (the elimination loop).
//
// Exit codes: 0 success, 1 unresolved elimination, 2 uncovered case,
// 3 data gap, 4 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "gfe/eliminate.hpp"
#include "gfe/http_transport.hpp"
#include "gfe/lmfdb.hpp"

using namespace gfe;

namespace {

struct EquationFlags {
    std::string signature = "ppr";
    long r = 5;
    std::string A = "1", B = "1", C = "1";

    GFEParams params() const {
        GFEParams P;
        P.signature = signature == "rrp" ? Signature::RRP : Signature::PPR;
        P.r = r;
        P.A = int_from_string(A);
        P.B = int_from_string(B);
        P.C = int_from_string(C);
        return P;
    }
};

void add_equation_flags(CLI::App* cmd, EquationFlags& eq) {
    cmd->add_option("--signature", eq.signature, "equation signature: ppr or rrp")
        ->check(CLI::IsMember({"ppr", "rrp"}))
        ->required();
    cmd->add_option("--r", eq.r, "the fixed odd prime r >= 5")->required();
    cmd->add_option("--A", eq.A, "coefficient A")->required();
    cmd->add_option("--B", eq.B, "coefficient B")->required();
    cmd->add_option("--C", eq.C, "coefficient C")->required();
}

int exit_code_for(const std::exception& e) {
    std::string what = e.what();
    if (what.find("uncovered case") != std::string::npos) return 2;
    if (what.find("ambiguous case") != std::string::npos) return 2;
    if (what.find("insufficient eigenvalue data") != std::string::npos) return 3;
    if (what.find("unknown subfield") != std::string::npos) return 3;
    if (what.find("RM factorization failed") != std::string::npos) return 4;
    return 1;
}

std::string admissible_cases_hint(Signature sig) {
    if (sig == Signature::PPR)
        return "admissible --case atoms fix the 2-adic and r-adic rows, e.g. \"10|ab\", "
               "\"2|ab,5|c\", \"2|c,5|ab\", \"10!|abc\" (add --gminus-reducible or "
               "--gminus-irreducible where nu_r <= 0 and nu_r = 0 mod r)";
    return "admissible --case atoms fix the 2-adic and r-adic rows, e.g. \"10|c\", "
           "\"2|c,5|ab\", \"2|ab,5|c\", \"10!|abc\"";
}

int cmd_level(const EquationFlags& eq, const std::string& case_str, const std::string& kind_str,
              int reducible_flag, const std::string& format) {
    GFEParams P = eq.params();
    ModelKind kind = kind_str == "plus" ? ModelKind::Plus : ModelKind::Minus;
    try {
        CongruenceCase kase = parse_case(case_str, P.r);
        if (reducible_flag >= 0) kase.gminus_reducible = reducible_flag > 0;
        LevelIdeal N = predicted_level(kind, P, kase);
        if (format == "json") {
            nlohmann::json j;
            j["two_exp"] = N.two_exp;
            j["r_exp"] = N.r_exp;
            j["odd"] = nlohmann::json::array();
            for (auto& part : N.odd)
                j["odd"].push_back({{"q", to_string(part.q)},
                                    {"f", part.f},
                                    {"index", part.index},
                                    {"exp", part.exp}});
            j["human"] = N.human(P.r);
            j["norm"] = to_string(N.norm(P.r));
            std::cout << j.dump(1) << "\n";
        } else {
            std::cout << "predicted level: " << N.human(P.r) << "\n";
            std::cout << "rows used: even exponent " << N.two_exp << ", r exponent " << N.r_exp
                      << "\n";
            std::cout << "level norm: " << to_string(N.norm(P.r)) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n" << admissible_cases_hint(P.signature) << "\n";
        return exit_code_for(e);
    }
}

int cmd_local(const EquationFlags& eq, const std::string& a, const std::string& b,
              const std::string& c, long p, const std::string& q_str, const std::string& format) {
    GFEParams P = eq.params();
    try {
        ExactSolution sol{int_from_string(a), int_from_string(b), int_from_string(c), p};
        auto sane = sanity_checks(P, sol);
        if (!sane.ok()) {
            std::cerr << "error: parameters or solution fail the sanity checks\n";
            return 2;
        }
        Table1Data T = table1(P, sol);
        auto hyp = check_hypotheses(P, T);
        auto K = build_field(P.r);
        Int q = int_from_string(q_str);
        auto places = split_prime(K, q);
        long nu = vq(T.s0s0m1, q);
        nlohmann::json out;
        out["nu_q"] = nu;
        out["hypotheses_hold"] = hyp.all();
        out["places"] = nlohmann::json::array();
        std::vector<ModelKind> kinds = {ModelKind::Minus};
        if (T.s0) kinds.push_back(ModelKind::Plus);
        for (auto& prime : places) {
            LocalPlace L = local_place(P.r, prime);
            nlohmann::json pj;
            pj["label"] = prime.label();
            for (ModelKind kind : kinds) {
                nlohmann::json kj;
                auto presc = choose_deltaK(kind, T);
                kj["deltaK_v_at_r"] = presc.choice.v_at_r;
                if (!presc.note.empty()) kj["deltaK_note"] = presc.note;
                auto red = (kind == ModelKind::Minus) ? reduction_minus(L, T, presc.choice)
                                                      : reduction_plus(L, T, presc.choice);
                kj["reduction"] = reduction_name(red.reduction);
                kj["branch"] = red.branch;
                kj["attains_good_over"] = red.attains_good_over;
                try {
                    auto cond = conductor(kind, L, T, presc.choice);
                    kj["conductor"] = cond.n;
                    kj["conductor_tame"] = cond.n_tame;
                    kj["conductor_wild"] = cond.n_wild;
                    kj["inertial_type"] = inertial_name(cond.inertial);
                    if (cond.sq == SqStatus::Conditional) kj["conditional_on_SQ"] = true;
                } catch (const std::exception& e) {
                    kj["conductor_error"] = e.what();
                }
                bool even_gap = L.is_even() && nu <= 0;
                bool bad = vq(Rat(T.big), q) != 0 || L.is_r() || (L.is_even() && nu > 0);
                if (bad && !even_gap) {
                    try {
                        ClusterPicture pic = (kind == ModelKind::Minus) ? cluster_minus(L, T)
                                                                        : cluster_plus(L, T);
                        kj["cluster_case"] = pic.case_name;
                        kj["cluster_outer_depth"] = to_string(pic.outer_depth);
                    } catch (const std::exception&) {
                    }
                }
                pj[kind == ModelKind::Minus ? "minus" : "plus"] = kj;
            }
            out["places"].push_back(pj);
        }
        if (format == "json") {
            std::cout << out.dump(1) << "\n";
        } else {
            std::cout << "nu_" << to_string(q) << " = " << nu
                      << (hyp.all() ? "" : "  [hypotheses FAIL]") << "\n";
            for (auto& pj : out["places"]) {
                std::cout << "place " << pj["label"].get<std::string>() << ":\n";
                for (const char* kind : {"minus", "plus"}) {
                    if (!pj.contains(kind)) continue;
                    auto& kj = pj[kind];
                    std::cout << "  " << kind << ": " << kj["reduction"].get<std::string>();
                    if (kj.contains("conductor"))
                        std::cout << ", conductor " << kj["conductor"].get<long>() << " ("
                                  << kj["inertial_type"].get<std::string>() << ")";
                    else
                        std::cout << ", conductor: " << kj["conductor_error"].get<std::string>();
                    if (kj.contains("cluster_case"))
                        std::cout << ", cluster: " << kj["cluster_case"].get<std::string>();
                    if (kj.contains("conditional_on_SQ")) std::cout << " [conditional on SQ]";
                    std::cout << "\n";
                }
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_traces(const EquationFlags& eq, const std::string& q_str, const std::string& u,
               const std::string& v, const std::string& format) {
    GFEParams P = eq.params();
    try {
        Int q = int_from_string(q_str);
        auto K = build_field(P.r);
        ResidueModel M = model_residue(P, q, int_from_string(u), int_from_string(v));
        if (M.singular) {
            if (format == "json") {
                nlohmann::json j;
                j["singular"] = true;
                j["all_degenerate"] = M.all_degenerate;
                std::cout << j.dump(1) << "\n";
            } else {
                std::cout << "singular class"
                          << (M.all_degenerate ? " (both parameters vanish)" : "") << "\n";
            }
            return 0;
        }
        auto places = split_prime(K, q);
        nlohmann::json j;
        j["singular"] = false;
        j["places"] = nlohmann::json::array();
        for (auto& place : places) {
            FrobTrace tr = rm_trace(K, place, M);
            nlohmann::json pj;
            pj["label"] = place.label();
            pj["trace"] = nlohmann::json::array();
            for (auto& cc : tr.a.coords) pj["trace"].push_back(to_string(cc));
            pj["lpoly"] = nlohmann::json::array();
            for (auto& cc : tr.L.c) pj["lpoly"].push_back(to_string(cc));
            pj["verified"] = true;
            j["places"].push_back(pj);
        }
        if (format == "json") {
            std::cout << j.dump(1) << "\n";
        } else {
            for (auto& pj : j["places"]) {
                std::cout << "place " << pj["label"].get<std::string>() << ": a = [";
                bool first = true;
                for (auto& cc : pj["trace"]) {
                    if (!first) std::cout << ", ";
                    std::cout << cc.get<std::string>();
                    first = false;
                }
                std::cout << "] in Z[w], verified against the L-polynomial\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_fetch(const EquationFlags& eq, const std::string& case_str, const std::string& field_label,
              const std::string& level_norm, const std::string& out_path) {
    GFEParams P = eq.params();
    try {
        CongruenceCase kase = parse_case(case_str, P.r);
        LevelIdeal level = predicted_level(ModelKind::Minus, P, kase);
        lmfdb::FetchQuery query;
        query.r = P.r;
        query.field_label = field_label;
        query.level_norm = level_norm.empty() ? level.norm(P.r) : int_from_string(level_norm);
        lmfdb::Client client(lmfdb::http_transport());
        auto outcome = lmfdb::fetch_lmfdb(client, query, level);
        save_newforms(outcome.file, out_path);
        std::cout << "wrote " << outcome.file.forms.size() << " forms to " << out_path << "\n";
        if (outcome.incomplete) {
            std::cerr << "warning: incomplete data:\n";
            for (auto& note : outcome.notes) std::cerr << "  " << note << "\n";
            return 3;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_eliminate(const EquationFlags& eq, const std::string& case_str,
                  const std::string& forms_path, const std::string& out_path,
                  const std::string& format, const std::string& qmin, const std::string& qmax,
                  long max_steps, long max_seconds, long strict_p,
                  const std::string& unknown_policy, int workers, bool assume_irreducible) {
    GFEParams P = eq.params();
    try {
        NewformFile forms = load_newforms(forms_path);
        if (forms.base_r != P.r) {
            std::cerr << "error: forms file has base r = " << forms.base_r << "\n";
            return 3;
        }
        if (!case_str.empty()) {
            LevelIdeal predicted = predicted_level(ModelKind::Minus, P, parse_case(case_str, P.r));
            if (predicted.two_exp != forms.level.two_exp || predicted.r_exp != forms.level.r_exp)
                std::cerr << "warning: forms file level differs from the predicted level\n";
        }
        EliminationConfig cfg;
        cfg.q_min = int_from_string(qmin);
        cfg.q_max = int_from_string(qmax);
        cfg.max_steps = max_steps;
        cfg.max_seconds = max_seconds;
        if (strict_p > 0) cfg.strict_p = Int(strict_p);
        cfg.unknown_subfield_error = unknown_policy == "error";
        cfg.workers = workers;
        SurvivorReport rep = run_elimination(P, forms, cfg);
        if (assume_irreducible) rep.conditional = false;
        std::string text = format == "json" ? survivor_report_json(rep).dump(1) + "\n"
                                            : survivor_report_text(rep);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            out << text;
            std::cout << "wrote report to " << out_path << "\n";
        }
        if (!verify_survivor_report(rep)) {
            std::cerr << "error: internal soundness recheck failed\n";
            return 4;
        }
        return rep.success() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized Fermat equation toolkit: Frey curves, local analysis, "
                 "newform levels and the elimination step"};
    app.require_subcommand(1);

    EquationFlags eq;
    std::string format = "text";
    std::string case_str, kind_str = "minus";
    int reducible_flag = -1;

    auto* level = app.add_subcommand("level", "predicted newform level after level lowering");
    add_equation_flags(level, eq);
    level->add_option("--case", case_str, "congruence case, e.g. \"10|ab\"")->required();
    level->add_option("--kind", kind_str, "minus or plus model")
        ->check(CLI::IsMember({"minus", "plus"}));
    level->add_flag_callback("--gminus-reducible", [&] { reducible_flag = 1; },
                             "assert g_r^- reducible over Q_r (fixes the nu_r = 0 mod r row)");
    level->add_flag_callback("--gminus-irreducible", [&] { reducible_flag = 0; },
                             "assert g_r^- irreducible over Q_r");
    level->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    std::string sol_a = "1", sol_b = "1", sol_c = "1", q_str = "3";
    long sol_p = 7;
    auto* local =
        app.add_subcommand("local", "local analysis at the places above q for an exact solution");
    add_equation_flags(local, eq);
    local->add_option("--a", sol_a)->required();
    local->add_option("--b", sol_b)->required();
    local->add_option("--c", sol_c)->required();
    local->add_option("--p", sol_p, "the exponent of the putative solution")->required();
    local->add_option("--q", q_str, "rational prime to analyse")->required();
    local->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    std::string res_u = "0", res_v = "0";
    auto* traces = app.add_subcommand("traces", "Frobenius traces for a residue class (u, v) at q");
    add_equation_flags(traces, eq);
    traces->add_option("--q", q_str)->required();
    traces->add_option("--u", res_u)->required();
    traces->add_option("--v", res_v)->required();
    traces->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    std::string field_label = "2.2.5.1", level_norm, out_path;
    auto* fetch = app.add_subcommand("fetch", "download Hilbert newform data from the LMFDB");
    add_equation_flags(fetch, eq);
    fetch->add_option("--case", case_str, "congruence case fixing the level")->required();
    fetch->add_option("--field-label", field_label, "LMFDB base field label");
    fetch->add_option("--level-norm", level_norm, "override the level norm");
    fetch->add_option("--out", out_path, "output newform file")->required();

    std::string forms_path, qmin = "3", qmax = "50", unknown_policy = "skip-as-survivor";
    long max_steps = 0, max_seconds = 0, strict_p = 0;
    int workers = 1;
    bool assume_irreducible = false;
    auto* elim = app.add_subcommand("eliminate", "run the elimination loop against a forms file");
    add_equation_flags(elim, eq);
    elim->add_option("--forms", forms_path, "newform eigenvalue file")->required();
    elim->add_option("--case", case_str, "congruence case (level cross-check)");
    elim->add_option("--out", out_path, "write the report here instead of stdout");
    elim->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    elim->add_option("--qmin", qmin);
    elim->add_option("--qmax", qmax);
    elim->add_option("--max-steps", max_steps, "max auxiliary primes per constituent");
    elim->add_option("--max-seconds", max_seconds, "per-constituent time budget");
    elim->add_option("--strict-p", strict_p, "restrict PPR residue classes to p-th powers");
    elim->add_option("--unknown-subfield", unknown_policy)
        ->check(CLI::IsMember({"skip-as-survivor", "error"}));
    elim->add_option("--workers", workers);
    elim->add_flag("--assume-irreducible", assume_irreducible,
                   "drop the conditional-irreducibility warning");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("level"))
        return cmd_level(eq, case_str, kind_str, reducible_flag, format);
    if (app.got_subcommand("local")) return cmd_local(eq, sol_a, sol_b, sol_c, sol_p, q_str, format);
    if (app.got_subcommand("traces")) return cmd_traces(eq, q_str, res_u, res_v, format);
    if (app.got_subcommand("fetch")) return cmd_fetch(eq, case_str, field_label, level_norm, out_path);
    if (app.got_subcommand("eliminate"))
        return cmd_eliminate(eq, case_str, forms_path, out_path, format, qmin, qmax, max_steps,
                             max_seconds, strict_p, unknown_policy, workers, assume_irreducible);
    return 1;
}
