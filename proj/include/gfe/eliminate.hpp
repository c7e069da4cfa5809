#ifndef GFE_ELIMINATE_HPP
#define GFE_ELIMINATE_HPP

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "gfe/counting.hpp"
#include "gfe/newforms.hpp"

namespace gfe {

// ---------------------------------------------------------------------------
// survivor sets
// ---------------------------------------------------------------------------

/// A set of primes, possibly "all primes" (no information yet).
struct PrimeSet {
    bool universal = true;
    std::set<Int> primes;

    static PrimeSet all() { return PrimeSet{}; }
    static PrimeSet divisors_of(const Int& n) {
        PrimeSet out;
        if (n == 0) return out;  // universal: a vanishing gcd carries no information
        out.universal = false;
        if (abs_int(n) > 1) out.primes = prime_divisors(n);
        return out;
    }
    void unite(const PrimeSet& o) {
        if (universal) return;
        if (o.universal) {
            universal = true;
            primes.clear();
            return;
        }
        primes.insert(o.primes.begin(), o.primes.end());
    }
    void add(const Int& p) {
        if (!universal) primes.insert(p);
    }
    void intersect(const PrimeSet& o) {
        if (o.universal) return;
        if (universal) {
            universal = false;
            primes = o.primes;
            return;
        }
        std::set<Int> keep;
        for (auto& p : primes)
            if (o.primes.count(p)) keep.insert(p);
        primes = std::move(keep);
    }
};

// ---------------------------------------------------------------------------
// configuration and reports
// ---------------------------------------------------------------------------

struct EliminationConfig {
    Int q_min = 3;
    Int q_max = 50;
    long max_steps = 0;       // auxiliary primes per constituent; 0 = no cap
    long max_seconds = 0;     // per-constituent wall clock; 0 = no cap
    long survivor_cap = 64;   // more survivors than this counts as no bound
    bool unknown_subfield_error = false;  // default: skip-as-survivor
    std::optional<Int> strict_p;          // PPR only: restrict u to A * p-th powers
    int workers = 1;
};

enum class ConstituentStatus { EliminatedAll, SurvivorsBounded, BudgetExhausted, SkippedNoSubfield };

inline std::string status_name(ConstituentStatus s) {
    switch (s) {
        case ConstituentStatus::EliminatedAll: return "eliminated-all";
        case ConstituentStatus::SurvivorsBounded: return "survivors-bounded";
        case ConstituentStatus::BudgetExhausted: return "budget-exhausted";
        default: return "skipped-no-subfield";
    }
}

struct QStep {
    Int q;
    bool skipped_missing_data = false;
    Int m_toric = 0;
    // one entry per residue class that produced a verified trace
    struct ClassValue {
        Int u, v;
        Int n_good;
    };
    std::vector<ClassValue> class_values;
    long skipped_classes = 0;  // classes whose trace could not be verified
};

struct ConstituentReport {
    std::string label;
    ConstituentStatus status = ConstituentStatus::BudgetExhausted;
    std::set<Int> survivors;  // primes > r (SurvivorsBounded only)
    std::vector<QStep> steps;
};

struct SurvivorReport {
    GFEParams params;
    std::vector<ConstituentReport> constituents;
    Int bound_B = 0;          // no pair (p, g) survives for p > B
    bool bound_valid = false; // false if any constituent has no bound
    bool conditional = false; // irreducibility certificate not found
    std::optional<Int> irreducibility_witness;

    bool success() const {
        for (auto& c : constituents)
            if (c.status == ConstituentStatus::BudgetExhausted ||
                c.status == ConstituentStatus::SkippedNoSubfield)
                return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// the gcd accumulators
// ---------------------------------------------------------------------------

namespace detail {

inline Int norm_to_int(const Rat& x, const char* what) {
    if (x.get_den() != 1) throw std::domain_error(std::string("non-integral norm in ") + what);
    return Int(x.get_num());
}

}  // namespace detail

/// M_toric(q, g) = gcd over places above q of |Nm(a_frak(g)^2 - (Nm(frak q)+1)^2)|.
/// 0 means "no information at this q".
inline Int m_toric(const std::shared_ptr<const RealCyclotomicField>& K,
                   const std::vector<PrimeIdealK>& places, const NewformRecord& rec) {
    Int acc = 0;
    for (auto& P : places) {
        NFElement a = rec.eigenvalue_nf(P.label());
        NFElement term = a * a - NFElement::from_rat(rec.field, Rat((P.norm() + 1) * (P.norm() + 1)));
        Int nm = detail::norm_to_int(nf_norm(term), "m_toric");
        acc = gcd_int(acc, nm);
        if (acc == 1) break;
    }
    return abs_int(acc);
}

/// N_good(q, g; a) = prod over places q' above q of
/// gcd over sigma in Gal(K/Q) of |Nm(embed(sigma(a)) - a_{sigma(q')}(g))|.
/// The trace representative a is defined up to Gal(K/Q); the gcd-and-product
/// structure makes the result independent of that choice.
inline Int n_good(const std::shared_ptr<const RealCyclotomicField>& K,
                  const std::vector<PrimeIdealK>& places, const NewformRecord& rec,
                  const NFElement& omega_image, const OKElement& trace) {
    long g = K->degree();
    Int product = 1;
    for (std::size_t i = 0; i < places.size(); ++i) {
        Int acc = 0;
        for (long k = 1; k <= g; ++k) {
            auto perm = galois_place_permutation(K, places, k);
            NFElement image = embed_ok(galois_apply(trace, k), omega_image);
            NFElement eig = rec.eigenvalue_nf(places[perm[i]].label());
            Int nm = detail::norm_to_int(nf_norm(image - eig), "n_good");
            acc = gcd_int(acc, nm);
            if (acc == 1) break;
        }
        if (acc == 0) return 0;
        product *= acc;
    }
    return abs_int(product);
}

// ---------------------------------------------------------------------------
// residue class traces, shared across constituents
// ---------------------------------------------------------------------------

struct ClassTraceTable {
    Int q;
    std::vector<PrimeIdealK> places;
    struct Entry {
        Int u, v;
        OKElement a;
    };
    std::vector<Entry> entries;
    long skipped_classes = 0;
};

/// Enumerates the residue classes at q, computing a verified trace for each
/// nonsingular one. PPR ranges u over all of F_q unless strict_p limits it to
/// the p-th-power orbit of A.
inline ClassTraceTable compute_class_traces(const GFEParams& P,
                                            const std::shared_ptr<const RealCyclotomicField>& K,
                                            const Int& q, const std::optional<Int>& strict_p) {
    ClassTraceTable T;
    T.q = q;
    T.places = split_prime(K, q);
    std::set<Int> u_values;
    if (P.signature == Signature::PPR && strict_p) {
        u_values.insert(0);
        for (Int t = 1; t < q; ++t) u_values.insert(P.A * powmod(t, *strict_p, q) % q);
    } else {
        for (Int u = 0; u < q; ++u) u_values.insert(u);
    }
    for (const Int& u : u_values) {
        for (Int v = 0; v < q; ++v) {
            if (u == 0 && v == 0) continue;  // excluded by pairwise coprimality
            ResidueModel M = model_residue(P, q, u, v);
            if (M.singular) continue;  // toric/bad classes feed M_toric instead
            try {
                FrobTrace tr = rm_trace(K, T.places[0], M);
                T.entries.push_back({u, v, tr.a});
            } catch (const std::exception&) {
                ++T.skipped_classes;
            }
        }
    }
    return T;
}

/// S_q for one constituent: a sound superset of the primes p not eliminated at
/// this q. Missing eigenvalue data makes the whole q uninformative.
inline PrimeSet q_accumulator(const GFEParams& P, const std::shared_ptr<const RealCyclotomicField>& K,
                              const ClassTraceTable& T, const NewformRecord& rec, QStep& step) {
    step.q = T.q;
    for (auto& place : T.places) {
        if (!rec.eigenvalues.count(place.label())) {
            step.skipped_missing_data = true;
            return PrimeSet::all();
        }
    }
    if (rec.contains_K.status != ContainsK::Status::Yes || !rec.contains_K.embedding)
        throw std::logic_error("q_accumulator: needs a verified subfield embedding");
    const NFElement& omega_image = *rec.contains_K.embedding;
    PrimeSet S;
    S.universal = false;
    Int mt = m_toric(K, T.places, rec);
    step.m_toric = mt;
    S.unite(PrimeSet::divisors_of(mt));
    for (auto& entry : T.entries) {
        Int ng = n_good(K, T.places, rec, omega_image, entry.a);
        step.class_values.push_back({entry.u, entry.v, ng});
        S.unite(PrimeSet::divisors_of(ng));
        if (S.universal) break;
    }
    step.skipped_classes = T.skipped_classes;
    if (T.skipped_classes > 0) S.add(T.q);
    return S;
}

// ---------------------------------------------------------------------------
// the elimination loop
// ---------------------------------------------------------------------------

namespace detail {

/// Auxiliary primes: q in [q_min, q_max], prime, coprime to 2r and to the odd
/// support of the level.
inline std::vector<Int> auxiliary_primes(const GFEParams& P, const LevelIdeal& level,
                                         const EliminationConfig& cfg) {
    std::set<Int> excluded;
    for (auto& part : level.odd) excluded.insert(part.q);
    std::vector<Int> out;
    Int q = cfg.q_min < 3 ? Int(3) : cfg.q_min;
    if (!is_prime(q)) q = next_prime(q);
    for (; q <= cfg.q_max; q = next_prime(q)) {
        if (q == 2 || q == P.r) continue;
        if (excluded.count(q)) continue;
        out.push_back(q);
    }
    return out;
}

class TraceCache {
  public:
    TraceCache(const GFEParams& P, std::shared_ptr<const RealCyclotomicField> K,
               std::optional<Int> strict_p)
        : P_(P), K_(std::move(K)), strict_p_(std::move(strict_p)) {}

    const ClassTraceTable& get(const Int& q) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(q);
        if (it == cache_.end())
            it = cache_.emplace(q, compute_class_traces(P_, K_, q, strict_p_)).first;
        return it->second;
    }

  private:
    GFEParams P_;
    std::shared_ptr<const RealCyclotomicField> K_;
    std::optional<Int> strict_p_;
    std::mutex mu_;
    std::map<Int, ClassTraceTable> cache_;
};

}  // namespace detail

/// Bounds the set of primes p for which the pair (p, g) is not eliminated.
inline ConstituentReport eliminate_constituent(const GFEParams& P,
                                               const std::shared_ptr<const RealCyclotomicField>& K,
                                               const NewformRecord& rec, const LevelIdeal& level,
                                               const EliminationConfig& cfg,
                                               detail::TraceCache* shared_cache = nullptr) {
    ConstituentReport rep;
    rep.label = rec.label;
    if (rec.contains_K.status == ContainsK::Status::No) {
        rep.status = ConstituentStatus::EliminatedAll;
        return rep;
    }
    if (rec.contains_K.status == ContainsK::Status::Unknown) {
        if (cfg.unknown_subfield_error)
            throw std::runtime_error("constituent " + rec.label + " has unknown subfield status");
        rep.status = ConstituentStatus::SkippedNoSubfield;
        return rep;
    }
    detail::TraceCache local_cache(P, K, cfg.strict_p);
    detail::TraceCache& cache = shared_cache ? *shared_cache : local_cache;
    PrimeSet running = PrimeSet::all();
    auto t0 = std::chrono::steady_clock::now();
    long steps = 0;
    for (const Int& q : detail::auxiliary_primes(P, level, cfg)) {
        if (cfg.max_steps > 0 && steps >= cfg.max_steps) break;
        if (cfg.max_seconds > 0) {
            auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
            if (elapsed >= cfg.max_seconds) break;
        }
        QStep step;
        PrimeSet S = q_accumulator(P, K, cache.get(q), rec, step);
        rep.steps.push_back(std::move(step));
        running.intersect(S);
        ++steps;
        if (!running.universal) {
            bool none_above_r = true;
            for (auto& p : running.primes)
                if (p > P.r) none_above_r = false;
            if (none_above_r) break;
        }
    }
    if (running.universal) {
        rep.status = ConstituentStatus::BudgetExhausted;
        return rep;
    }
    for (auto& p : running.primes)
        if (p > P.r) rep.survivors.insert(p);  // the method assumes p > r throughout
    if (rep.survivors.empty()) rep.status = ConstituentStatus::EliminatedAll;
    else if ((long)rep.survivors.size() <= cfg.survivor_cap)
        rep.status = ConstituentStatus::SurvivorsBounded;
    else rep.status = ConstituentStatus::BudgetExhausted;
    return rep;
}

/// Runs the elimination across every constituent; constituents are processed
/// in parallel (cfg.workers) and merged in input order, so the report bytes
/// do not depend on the worker count.
inline SurvivorReport run_elimination(const GFEParams& P, const NewformFile& forms,
                                      const EliminationConfig& cfg) {
    SurvivorReport out;
    out.params = P;
    auto K = build_field(P.r);
    auto cert = irreducibility_certificate_from_params(P);
    out.conditional = !cert.certified;
    if (cert.witness_q) out.irreducibility_witness = cert.witness_q;
    detail::TraceCache cache(P, K, cfg.strict_p);
    out.constituents.resize(forms.forms.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= forms.forms.size()) return;
            try {
                out.constituents[i] =
                    eliminate_constituent(P, K, forms.forms[i], forms.level, cfg, &cache);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    int nworkers = std::max(1, cfg.workers);
    if (nworkers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    Int B = P.r;
    bool valid = true;
    for (auto& c : out.constituents) {
        if (c.status == ConstituentStatus::SurvivorsBounded) {
            for (auto& p : c.survivors)
                if (p > B) B = p;
        } else if (c.status != ConstituentStatus::EliminatedAll) {
            valid = false;
        }
    }
    out.bound_B = B;
    out.bound_valid = valid;
    return out;
}

/// Independent checker: re-derives every constituent's survivor set from the
/// logged gcd values alone and compares with the reported status.
inline bool verify_survivor_report(const SurvivorReport& rep) {
    for (auto& c : rep.constituents) {
        if (c.status == ConstituentStatus::EliminatedAll && c.steps.empty()) continue;  // subfield No
        if (c.status == ConstituentStatus::SkippedNoSubfield) continue;
        PrimeSet running = PrimeSet::all();
        for (auto& step : c.steps) {
            if (step.skipped_missing_data) continue;  // universal: no progress
            PrimeSet S;
            S.universal = false;
            S.unite(PrimeSet::divisors_of(step.m_toric));
            for (auto& cv : step.class_values) S.unite(PrimeSet::divisors_of(cv.n_good));
            if (step.skipped_classes > 0) S.add(step.q);
            running.intersect(S);
        }
        std::set<Int> survivors;
        if (!running.universal)
            for (auto& p : running.primes)
                if (p > rep.params.r) survivors.insert(p);
        switch (c.status) {
            case ConstituentStatus::EliminatedAll:
                if (running.universal || !survivors.empty()) return false;
                break;
            case ConstituentStatus::SurvivorsBounded:
                if (running.universal || survivors != c.survivors) return false;
                break;
            case ConstituentStatus::BudgetExhausted:
                if (!running.universal && (long)survivors.size() <= 0) return false;
                break;
            default: break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// serialisation
// ---------------------------------------------------------------------------

inline nlohmann::json survivor_report_json(const SurvivorReport& rep) {
    nlohmann::json j;
    j["signature"] = signature_name(rep.params.signature);
    j["r"] = rep.params.r;
    j["A"] = to_string(rep.params.A);
    j["B_coeff"] = to_string(rep.params.B);
    j["C"] = to_string(rep.params.C);
    j["bound"] = to_string(rep.bound_B);
    j["bound_valid"] = rep.bound_valid;
    j["conditional_irreducibility"] = rep.conditional;
    if (rep.irreducibility_witness) j["irreducibility_witness"] = to_string(*rep.irreducibility_witness);
    j["constituents"] = nlohmann::json::array();
    for (auto& c : rep.constituents) {
        nlohmann::json cj;
        cj["label"] = c.label;
        cj["status"] = status_name(c.status);
        cj["survivors"] = nlohmann::json::array();
        for (auto& p : c.survivors) cj["survivors"].push_back(to_string(p));
        cj["steps"] = nlohmann::json::array();
        for (auto& s : c.steps) {
            nlohmann::json sj;
            sj["q"] = to_string(s.q);
            if (s.skipped_missing_data) sj["skipped"] = true;
            sj["m_toric"] = to_string(s.m_toric);
            sj["classes"] = nlohmann::json::array();
            for (auto& cv : s.class_values)
                sj["classes"].push_back({{"u", to_string(cv.u)}, {"v", to_string(cv.v)},
                                         {"n_good", to_string(cv.n_good)}});
            if (s.skipped_classes) sj["skipped_classes"] = s.skipped_classes;
            cj["steps"].push_back(sj);
        }
        j["constituents"].push_back(cj);
    }
    return j;
}

inline std::string survivor_report_text(const SurvivorReport& rep) {
    std::string s;
    s += "elimination report: " + signature_name(rep.params.signature) + " r=" +
         std::to_string(rep.params.r) + " A=" + to_string(rep.params.A) + " B=" +
         to_string(rep.params.B) + " C=" + to_string(rep.params.C) + "\n";
    if (rep.conditional)
        s += "WARNING: no irreducibility certificate from the coefficients; conclusions are conditional\n";
    for (auto& c : rep.constituents) {
        s += "  " + c.label + ": " + status_name(c.status);
        if (!c.survivors.empty()) {
            s += " {";
            bool first = true;
            for (auto& p : c.survivors) {
                if (!first) s += ", ";
                s += to_string(p);
                first = false;
            }
            s += "}";
        }
        if (!c.steps.empty()) {
            s += "  (q used:";
            for (auto& st : c.steps) s += " " + to_string(st.q);
            s += ")";
        }
        s += "\n";
    }
    if (rep.bound_valid)
        s += "bound: no surviving prime exceeds " + to_string(rep.bound_B) + "\n";
    else
        s += "no global bound: some constituent is unresolved\n";
    return s;
}

}  // namespace gfe

#endif
