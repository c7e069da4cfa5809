// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Criteria touching the live LMFDB run only when GFE_LMFDB_LIVE=1.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "gfe/eliminate.hpp"
#include "gfe/lmfdb.hpp"
#ifdef GFE_HAVE_OPENSSL
#include "gfe/http_transport.hpp"
#endif
#include "helpers.hpp"

using namespace gfe;
using gfe::testutil::ppr_family;
using gfe::testutil::rrp_family;

namespace {

struct Outcome {
    bool pass = true;
    bool skipped = false;
    std::string detail;
};

bool lmfdb_live() {
    const char* env = std::getenv("GFE_LMFDB_LIVE");
    return env && std::string(env) == "1";
}

// --- criterion 1: generated g- expansions match the displayed polynomials ---
Outcome criterion1() {
    Outcome out;
    struct Fixture {
        long r;
        std::map<long, long> coeffs;  // degree -> coefficient (constant handled via t)
    };
    // frozen displayed expansions: x^5-5x^3+5x, x^7-7x^5+14x^3-7x,
    // x^11-11x^9+44x^7-77x^5+55x^3-11x
    std::vector<Fixture> fixtures = {
        {5, {{5, 1}, {3, -5}, {1, 5}}},
        {7, {{7, 1}, {5, -7}, {3, 14}, {1, -7}}},
        {11, {{11, 1}, {9, -11}, {7, 44}, {5, -77}, {3, 55}, {1, -11}}},
    };
    for (auto& fx : fixtures) {
        Int t = 6;  // the generic constant slot 2 - 4s plays no role here
        FreyModel M = build_minus(fx.r, Int(1), t);
        for (long d = 0; d <= fx.r; ++d) {
            Int expect = (d == 0) ? t : Int(0);
            auto it = fx.coeffs.find(d);
            if (it != fx.coeffs.end()) expect += it->second;
            if (M.f.coeff((std::size_t)d) != expect) {
                out.pass = false;
                out.detail = "coefficient mismatch at r=" + std::to_string(fx.r) +
                             ", degree " + std::to_string(d);
                return out;
            }
        }
    }
    out.detail = "r in {5,7,11} match coefficient-for-coefficient";
    return out;
}

// --- criterion 2: discriminant closed forms vs the resultant oracle ---
Outcome criterion2() {
    Outcome out;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(20240815u);
    long checked = 0;
    for (long r : {5L, 7L}) {
        int done = 0;
        for (int trial = 0; trial < 400 && done < 20; ++trial) {
            Int d2 = rng.get_z_range(15) - 7;
            Int t = rng.get_z_range(41) - 20;
            Int dK = rng.get_z_range(9) - 4;
            if (d2 == 0 || t == 0 || dK == 0) continue;
            if (t * t == Int(4) * pow_int(d2, (unsigned long)r)) continue;
            FreyModel M = twist(build_minus(r, d2, t), dK);
            if (disc_closed_form(r, ModelKind::Minus, d2, t, dK) != disc_oracle(M.f)) {
                out.pass = false;
                out.detail = "minus mismatch at r=" + std::to_string(r);
                return out;
            }
            ++done;
            ++checked;
        }
        if (done < 20) {
            out.pass = false;
            out.detail = "could not generate 20 admissible inputs";
            return out;
        }
    }
    // the two Fermat specializations
    {
        GFEParams P{Signature::RRP, 5, Int(1), Int(7), Int(1)};
        ExactSolution sol{Int(1), Int(1), Int(2), 3};
        Table1Data T = table1(P, sol);
        FreyModel M = build_minus(5, T.d2, T.t);
        Int Ccp = pow_int(Int(2), 3);
        Int expect = pow_int(Int(2), 8) * pow_int(Int(5), 5) * pow_int(Ccp, 4) * pow_int(Int(7), 8);
        if (disc_oracle(M.f) != expect) {
            out.pass = false;
            out.detail = "RRP Fermat specialization mismatch";
            return out;
        }
        GFEParams P2{Signature::PPR, 5, Int(3), Int(5), Int(8)};
        Table1Data T2 = table1(P2, {Int(1), Int(1), Int(1), 7});
        FreyModel M2 = build_minus(5, T2.d2, T2.t);
        Int expect2 = pow_int(Int(2), 16) * pow_int(Int(5), 5) * Int(9) * Int(25) * pow_int(Int(8), 16);
        if (disc_oracle(M2.f) != expect2) {
            out.pass = false;
            out.detail = "PPR Fermat specialization mismatch";
            return out;
        }
        checked += 2;
    }
    out.detail = std::to_string(checked) + " exact integer identities";
    return out;
}

// --- criterion 3: cluster pictures vs discriminant valuations, every case ---
Outcome criterion3() {
    Outcome out;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(31337u);
    std::map<std::string, long> case_counts;
    long failures = 0;
    auto run_family = [&](const std::optional<std::pair<GFEParams, ExactSolution>>& fam) {
        if (!fam) return;
        if (!sanity_checks(fam->first, fam->second).ok()) return;
        Table1Data T;
        try {
            T = table1(fam->first, fam->second);
        } catch (...) {
            return;
        }
        if (T.s0s0m1 == 0) return;
        auto K = build_field(fam->first.r);
        NuProfile nu = nu_profile(T);
        std::set<Int> bad = {Int(2), Int(fam->first.r)};
        for (auto& [q, v] : nu.nu) bad.insert(q);
        for (auto& [q, e] : factor(T.d2)) bad.insert(q);
        for (auto& q : bad) {
            for (auto& prime : split_prime(K, q)) {
                LocalPlace L = local_place(fam->first.r, prime);
                long nuq = vq(T.s0s0m1, q);
                if (L.is_even() && nuq <= 0) continue;  // no picture drawn in the gap
                bool bad_minus = vq(Rat(T.big), q) != 0 || L.is_r() || (L.is_even() && nuq > 0);
                if (bad_minus) {
                    ClusterPicture C = cluster_minus(L, T);
                    if (C.pairwise_valuation_sum() != disc_valuation(L, T, ModelKind::Minus)) ++failures;
                    else ++case_counts[C.case_name];
                }
                if (T.s0 && T.deltaQ) {
                    Int fourds = Int(2) * pow_int(*T.deltaQ, (unsigned long)fam->first.r) - T.t;
                    if (fourds == 0) continue;
                    bool bad_plus = bad_minus || vq(fourds, q) != 0;
                    if (bad_plus) {
                        ClusterPicture C = cluster_plus(L, T);
                        if (C.pairwise_valuation_sum() != disc_valuation(L, T, ModelKind::Plus)) ++failures;
                        else ++case_counts[C.case_name];
                    }
                }
            }
        }
    };
    for (int t = 0; t < 60; ++t) {
        Int A = rng.get_z_range(9) + 1, B = rng.get_z_range(9) + 1;
        Int a = rng.get_z_range(13) - 6, b = rng.get_z_range(13) - 6;
        run_family(ppr_family(5, A, B, a, b, 7));
        run_family(rrp_family(5, A, B, a, b, 7));
        // targeted: nu_r > 2 via 5 | a, v(s0-1) > r via 5 | b
        run_family(ppr_family(5, A, B, a * 5, b, 7));
        run_family(ppr_family(5, A, B, a, b * 5, 7));
    }
    // dedicated batch for the r-adic plus cases 3 and 4
    for (long a = 1; a <= 30; ++a) {
        if (a % 5 == 0) continue;
        run_family(ppr_family(5, Int(1), Int(1), Int(a), Int(5), 7));
        run_family(ppr_family(5, Int(1), Int(1), Int(5), Int(a), 7));
        run_family(ppr_family(5, Int(2), Int(1), Int(a), Int(5), 7));
    }
    // dedicated batch for the generic r-adic plus case 5 (5 coprime to ab)
    for (long a = 1; a <= 9 && a % 5 != 0; ++a)
        for (long b : {1L, 3L, 7L, 9L, 11L}) {
            run_family(ppr_family(5, Int(1), Int(2), Int(a), Int(b), 7));
            run_family(ppr_family(5, Int(3), Int(1), Int(a), Int(b), 7));
        }
    std::vector<std::string> required = {
        "minus-1 (q != r, v(s0(s0-1)) > 0)", "minus-2 (q odd, v(s0(s0-1)) <= 0)",
        "minus-3 (q = r, v(s0(s0-1)) > r)",  "minus-4 (q = r, v(s0(s0-1)) <= r)",
        "plus-1 (q != r, v(s0(s0-1)) > 0)",  "plus-2 (q odd, v(s0(s0-1)) <= 0)",
        "plus-3 (q = r, v(s0) > r)",         "plus-4 (q = r, v(s0-1) > r)",
        "plus-5 (q = r, v(s0(s0-1)) <= r)"};
    std::ostringstream os;
    for (auto& name : required) {
        os << case_counts[name] << " ";
        if (case_counts[name] < 10) {
            out.pass = false;
            out.detail = "case '" + name + "' verified only " + std::to_string(case_counts[name]) +
                         " times";
            return out;
        }
    }
    if (failures) {
        out.pass = false;
        out.detail = std::to_string(failures) + " valuation mismatches";
        return out;
    }
    out.detail = "per-case counts: " + os.str();
    return out;
}

// --- criterion 4: the conductor map at odd places away from r ---
Outcome criterion4() {
    Outcome out;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(4242u);
    DeltaKChoice dk;
    int families = 0;
    long places_checked = 0;
    for (int t = 0; t < 3000 && families < 50; ++t) {
        Int A = rng.get_z_range(20) + 1, B = rng.get_z_range(20) + 1;
        Int a = rng.get_z_range(15) - 7, b = rng.get_z_range(15) - 7;
        bool rrp = t % 2;
        auto fam = rrp ? rrp_family(5, A, B, a, b, 7) : ppr_family(5, A, B, a, b, 7);
        if (!fam || !sanity_checks(fam->first, fam->second).ok()) continue;
        Table1Data T;
        try {
            T = table1(fam->first, fam->second);
        } catch (...) {
            continue;
        }
        ++families;
        auto K = build_field(5);
        const auto& P = fam->first;
        const auto& sol = fam->second;
        NuProfile nu = nu_profile(T);
        for (auto& [q, v] : nu.nu) {
            if (q == 2 || q == 5) continue;
            for (auto& prime : split_prime(K, q)) {
                auto cond = conductor(ModelKind::Minus, local_place(5, prime), T, dk);
                long expect;
                if (P.signature == Signature::PPR) {
                    expect = divides(q, P.A * P.B * sol.a * sol.b) ? 1 : (divides(q, P.C) ? 2 : 0);
                } else {
                    expect = divides(q, P.C * sol.c) ? 1 : (divides(q, P.A * P.B) ? 2 : 0);
                }
                if (cond.n != expect) {
                    out.pass = false;
                    out.detail = "mismatch at q=" + to_string(q);
                    return out;
                }
                ++places_checked;
            }
        }
    }
    if (families < 50) {
        out.pass = false;
        out.detail = "only " + std::to_string(families) + " admissible parameter sets";
        return out;
    }
    out.detail = "50 parameter sets, " + std::to_string(places_checked) + " places";
    return out;
}

// --- criterion 5: worked levels (LMFDB constituent counts network-gated) ---
Outcome criterion5() {
    Outcome out;
    GFEParams P1{Signature::PPR, 5, Int(7), Int(1), Int(3)};
    LevelIdeal N1 = predicted_level(ModelKind::Minus, P1, parse_case("10|ab", 5));
    GFEParams P2{Signature::RRP, 5, Int(1), Int(7), Int(1)};
    LevelIdeal N2 = predicted_level(ModelKind::Minus, P2, parse_case("10|c", 5));
    if (N1.human(5) != "2^1 * 3^2 * r^1 * 7^1" || N2.human(5) != "2^1 * r^1 * 7^2") {
        out.pass = false;
        out.detail = "got " + N1.human(5) + " and " + N2.human(5);
        return out;
    }
    out.detail = "2^1 * 3^2 * r^1 * 7^1 and 2^1 * r^1 * 7^2";
#ifdef GFE_HAVE_OPENSSL
    if (lmfdb_live()) {
        try {
            lmfdb::Client client(lmfdb::http_transport());
            lmfdb::FetchQuery query;
            query.r = 5;
            query.level_norm = N2.norm(5);
            auto fetched = lmfdb::fetch_lmfdb(client, query, N2);
            out.detail += "; LMFDB constituents at norm " + to_string(N2.norm(5)) + ": " +
                          std::to_string(fetched.file.forms.size()) + " (paper: 71)";
        } catch (const std::exception& e) {
            out.detail += std::string("; LMFDB comparison failed: ") + e.what();
        }
    } else {
        out.detail += "; constituent-count comparison skipped (set GFE_LMFDB_LIVE=1)";
    }
#else
    out.detail += "; built without TLS, network comparison unavailable";
#endif
    return out;
}

// --- criterion 6: point counting oracles, Weil bound, functional equation ---
Outcome criterion6() {
    Outcome out;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(606060u);
    std::vector<std::pair<long, long>> shapes = {
        {31, 1}, {29, 1}, {23, 2}, {31, 2}, {13, 3}, {7, 4}, {5, 4}, {3, 4}, {11, 2}, {17, 2},
        {19, 1}, {31, 1}, {29, 2}, {7, 3},  {5, 3},  {3, 3}, {13, 2}, {31, 1}, {23, 1}, {11, 3}};
    long counted = 0;
    for (auto& [q, n] : shapes) {
        PrimeField F((std::uint64_t)q);
        FpVec f(6, 0);
        do {
            for (int i = 0; i < 5; ++i) f[(std::size_t)i] = F.from_int(rng.get_z_range(q));
            f[5] = 1;
        } while (is_singular(CurveOverFq{Int(q), 1, f}).singular);
        CurveOverFq C{Int(q), 1, f};
        // brute force: per-x root counting via a y^2 frequency table over F_(q^n)
        ExtField E((std::uint64_t)q, n);
        std::vector<long> nroots(E.size(), 0);
        for (std::size_t j = 0; j < E.size(); ++j) {
            auto y = E.element_at(j);
            nroots[E.rank(E.mul(y, y))] += 1;
        }
        std::vector<ExtField::Elt> coeffs;
        for (auto c : C.f) coeffs.push_back(E.from_base(c));
        Int brute = 0;
        for (std::size_t i = 0; i < E.size(); ++i) {
            auto x = E.element_at(i);
            ExtField::Elt v = E.zero();
            for (std::size_t k = coeffs.size(); k-- > 0;) v = E.add(E.mul(v, x), coeffs[k]);
            brute += nroots[E.rank(v)];
        }
        brute += 1;  // odd degree: one point at infinity
        if (brute != count_points(C, n)) {
            out.pass = false;
            out.detail = "count mismatch at q=" + std::to_string(q) + ", n=" + std::to_string(n);
            return out;
        }
        LPolynomial L = lpolynomial(C);
        if (!L.functional_equation_holds() || !L.weil_bound_holds()) {
            out.pass = false;
            out.detail = "L-polynomial invariants fail at q=" + std::to_string(q);
            return out;
        }
        ++counted;
    }
    out.detail = std::to_string(counted) + " curves, counts exact, Weil and functional equation hold";
    return out;
}

// --- criterion 7: RM traces at split and inert places, exact verification ---
Outcome criterion7() {
    Outcome out;
    auto K = build_field(5);
    GFEParams P{Signature::RRP, 5, Int(1), Int(7), Int(1)};
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(77777u);
    int verified = 0, split_seen = 0, inert_seen = 0;
    std::vector<long> qs = {11, 19, 29, 31, 41, 3, 13, 17, 23, 37, 43, 47};
    for (long q : qs) {
        auto places = split_prime(K, Int(q));
        for (int t = 0; t < 2; ++t) {
            Int u = rng.get_z_range(Int(q)), v = rng.get_z_range(Int(q));
            ResidueModel M = model_residue(P, Int(q), u, v);
            if (M.singular) continue;
            FrobTrace tr;
            try {
                tr = rm_trace(K, places[0], M);
            } catch (const std::exception& e) {
                out.pass = false;
                out.detail = std::string("trace failed at q=") + std::to_string(q) + ": " + e.what();
                return out;
            }
            // the factorisation identity is exact (re-checked here), and the
            // trace polynomial roots lie inside the Weil range
            if (!detail::verify_rm_factorisation(tr.a, tr.L)) {
                out.pass = false;
                out.detail = "verification regressed";
                return out;
            }
            PolyZ chi = trace_polynomial(tr.L);
            PolyQ chiq = to_poly_q(chi);
            Int c = 1;
            while (c * c < Int(4) * tr.L.Q) ++c;  // smallest c with c^2 >= 4Q
            long inside = count_real_roots(chiq, Rat(-c - 1), Rat(c));
            long total = 0;
            for (auto& rt : real_roots(chiq, 64)) total += rt.multiplicity;
            if (total != 2 || inside != (long)real_roots(chiq, 64).size()) {
                out.pass = false;
                out.detail = "embedding outside the Weil range at q=" + std::to_string(q);
                return out;
            }
            ++verified;
            (places[0].f == 1 ? split_seen : inert_seen) += 1;
        }
        if (verified >= 20 && split_seen && inert_seen) break;
    }
    if (verified < 20 || !split_seen || !inert_seen) {
        out.pass = false;
        out.detail = "only " + std::to_string(verified) + " verified traces";
        return out;
    }
    out.detail = std::to_string(verified) + " traces verified exactly (split and inert places)";
    return out;
}

// --- criterion 8: elimination soundness fixture, determinism ---
Outcome criterion8() {
    Outcome out;
    GFEParams P{Signature::RRP, 5, Int(1), Int(7), Int(1)};
    auto K = build_field(5);
    LevelIdeal level = predicted_level(ModelKind::Minus, P, parse_case("10|c", 5));
    EliminationConfig cfg;
    cfg.q_max = 50;

    NewformFile file;
    file.base_r = 5;
    file.level = level;
    for (long perturb : {0L, 1L}) {
        NewformRecord rec;
        rec.label = perturb ? "perturbed" : "true-form";
        rec.field = std::make_shared<const NumberField>(K->h());
        rec.contains_K.status = ContainsK::Status::Yes;
        rec.contains_K.embedding = NFElement::generator(rec.field);
        for (Int q = 3; q <= cfg.q_max; q = next_prime(q)) {
            if (q == 5 || q == 7) continue;
            auto places = split_prime(K, q);
            ResidueModel M = model_residue(P, q, Int(1), Int(1));
            if (M.singular) continue;
            FrobTrace tr = rm_trace(K, places[0], M);
            for (long k = 1; k <= 2; ++k) {
                auto perm = galois_place_permutation(K, places, k);
                NFElement img = embed_ok(galois_apply(tr.a, k), *rec.contains_K.embedding);
                img = img + NFElement::from_rat(rec.field, Rat(perturb));
                rec.eigenvalues[places[perm[0]].label()] = img.coords;
            }
        }
        file.forms.push_back(std::move(rec));
    }
    SurvivorReport rep = run_elimination(P, file, cfg);
    if (rep.constituents[0].status != ConstituentStatus::BudgetExhausted) {
        out.pass = false;
        out.detail = "true-form fixture was eliminated (unsound)";
        return out;
    }
    if (rep.constituents[1].status != ConstituentStatus::EliminatedAll ||
        !rep.constituents[1].survivors.empty()) {
        out.pass = false;
        out.detail = "perturbed fixture not fully eliminated";
        return out;
    }
    if (!verify_survivor_report(rep)) {
        out.pass = false;
        out.detail = "provenance recheck failed";
        return out;
    }
    std::string bytes = survivor_report_json(rep).dump();
    SurvivorReport rep2 = run_elimination(P, file, cfg);
    EliminationConfig cfg8 = cfg;
    cfg8.workers = 8;
    SurvivorReport rep8 = run_elimination(P, file, cfg8);
    if (survivor_report_json(rep2).dump() != bytes || survivor_report_json(rep8).dump() != bytes) {
        out.pass = false;
        out.detail = "report bytes differ across runs or worker counts";
        return out;
    }
    out.detail = "true form survives, perturbed form eliminated, bytes stable (1 vs 8 workers)";
    return out;
}

// --- criterion 9: subfield tests ---
Outcome criterion9() {
    Outcome out;
    auto K = build_field(5);
    auto yes = subfield_test(K, std::make_shared<const NumberField>(PolyZ({Int(-5), Int(0), Int(1)})));
    auto no = subfield_test(K, std::make_shared<const NumberField>(PolyZ({Int(-2), Int(0), Int(1)})));
    if (yes.status != ContainsK::Status::Yes || !yes.embedding ||
        !nf_eval_poly(K->h(), *yes.embedding).is_zero()) {
        out.pass = false;
        out.detail = "x^2 - 5 not certified Yes";
        return out;
    }
    if (no.status != ContainsK::Status::No || !no.witness) {
        out.pass = false;
        out.detail = "x^2 - 2 not certified No";
        return out;
    }
    out.detail = "Yes with verified embedding; No with witness " + to_string(*no.witness);
    return out;
}

// --- criterion 10: full paper theorems against live LMFDB data ---
Outcome criterion10() {
    Outcome out;
#ifndef GFE_HAVE_OPENSSL
    out.skipped = true;
    out.detail = "built without TLS";
    return out;
#else
    if (!lmfdb_live()) {
        out.skipped = true;
        out.detail = "network-gated; set GFE_LMFDB_LIVE=1 to run";
        return out;
    }
    try {
        struct Job {
            GFEParams P;
            std::string kase;
            Int paper_bound;
        };
        std::vector<Job> jobs = {
            {{Signature::PPR, 5, Int(7), Int(1), Int(3)}, "10|ab", Int(71)},
            {{Signature::RRP, 5, Int(1), Int(7), Int(1)}, "10|c", Int(41)},
        };
        std::ostringstream os;
        for (auto& job : jobs) {
            LevelIdeal level = predicted_level(ModelKind::Minus, job.P, parse_case(job.kase, 5));
            lmfdb::Client client(lmfdb::http_transport());
            lmfdb::FetchQuery query;
            query.r = 5;
            query.level_norm = level.norm(5);
            auto fetched = lmfdb::fetch_lmfdb(client, query, level);
            EliminationConfig cfg;
            cfg.q_max = 60;
            SurvivorReport rep = run_elimination(job.P, fetched.file, cfg);
            Int worst = 0;
            long resolved = 0, unresolved = 0;
            for (auto& c : rep.constituents) {
                if (c.status == ConstituentStatus::EliminatedAll) ++resolved;
                else if (c.status == ConstituentStatus::SurvivorsBounded) {
                    ++resolved;
                    for (auto& p : c.survivors)
                        if (p > worst) worst = p;
                } else ++unresolved;
            }
            os << signature_name(job.P.signature) << ": " << fetched.file.forms.size()
               << " constituents, " << resolved << " resolved, worst survivor " << to_string(worst)
               << " (paper bound " << to_string(job.paper_bound) << "); ";
            if (worst > job.paper_bound) {
                out.pass = false;
                out.detail = "survivor exceeds the paper bound: " + os.str();
                return out;
            }
        }
        out.detail = os.str();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("network run failed: ") + e.what();
    }
    return out;
#endif
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* what;
        double limit_s;
        std::function<Outcome()> run;
    };
    std::vector<Entry> entries = {
        {1, "polynomial fixtures r in {5,7,11}", 1.0, criterion1},
        {2, "discriminant closed forms = resultant oracle", 10.0, criterion2},
        {3, "cluster pictures match discriminant valuations", 5.0, criterion3},
        {4, "conductor map at odd places over 50 parameter sets", 5.0, criterion4},
        {5, "predicted levels of the worked theorems", 1.0, criterion5},
        {6, "point counting oracles and L-polynomial invariants", 30.0, criterion6},
        {7, "RM traces verified exactly at split and inert places", 60.0, criterion7},
        {8, "elimination soundness fixture and determinism", 120.0, criterion8},
        {9, "subfield test certificates", 1.0, criterion9},
        {10, "paper theorems against live LMFDB data", 0.0, criterion10},
    };
    int failures = 0;
    for (auto& e : entries) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out.pass = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool timed_out = e.limit_s > 0 && secs > e.limit_s;
        const char* verdict = out.skipped ? "SKIP" : (out.pass && !timed_out ? "PASS" : "FAIL");
        if (std::string(verdict) == "FAIL") ++failures;
        std::ostringstream line;
        line << verdict << " criterion " << e.id << ": " << e.what;
        if (!out.detail.empty()) line << " -- " << out.detail;
        line.precision(2);
        line << std::fixed << " [" << secs << "s";
        if (e.limit_s > 0) line << " / " << e.limit_s << "s";
        line << "]";
        if (timed_out && out.pass) line << " (over the time limit)";
        std::cout << line.str() << "\n";
    }
    return failures == 0 ? 0 : 1;
}
