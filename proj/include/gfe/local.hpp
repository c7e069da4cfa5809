#ifndef GFE_LOCAL_HPP
#define GFE_LOCAL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gfe/cyclotomic.hpp"
#include "gfe/frey.hpp"
#include "gfe/localfield.hpp"

namespace gfe {

// ---------------------------------------------------------------------------
// nu profile and hypotheses
// ---------------------------------------------------------------------------

/// nu_q = v_q(s0(s0-1)) for every prime in the support.
struct NuProfile {
    std::map<Int, long> nu;
    long at(const Int& q) const {
        auto it = nu.find(q);
        return it == nu.end() ? 0 : it->second;
    }
};

inline NuProfile nu_profile(const Table1Data& T) {
    if (T.s0s0m1 == 0) throw std::domain_error("nu_profile: s0(s0-1) = 0");
    NuProfile P;
    for (auto& [p, e] : factor(Int(T.s0s0m1.get_num()))) P.nu[p] += e;
    for (auto& [p, e] : factor(Int(T.s0s0m1.get_den()))) P.nu[p] -= e;
    return P;
}

struct HypothesesReport {
    bool h1 = true, h2 = true, h3 = true;
    bool toric_exists = false;  // some odd q != r with nu_q > 0
    bool unip_exists = false;   // witness for absolute irreducibility (odd q)
    std::vector<Int> toric_primes;
    std::vector<Int> unip_witnesses;
    bool all() const { return h1 && h2 && h3; }
};

inline HypothesesReport check_hypotheses(const GFEParams& P, const Table1Data& T) {
    HypothesesReport rep;
    NuProfile nu = nu_profile(T);
    std::set<Int> support;
    for (auto& [q, v] : nu.nu) support.insert(q);
    for (auto& [q, e] : factor(T.d2)) support.insert(q);
    if (T.big != 0)
        for (auto& [q, e] : factor(T.big)) support.insert(q);
    support.insert(2);
    for (auto& q : support) {
        long nq = nu.at(q);
        // H1: nu_q >= 0 forces v_q(deltaQ) = 0
        if (nq >= 0 && vq(T.d2, q) != 0) rep.h1 = false;
        // H2: odd q, nu_q <= 0 and nu_q = 0 mod r force v_q(deltaQ^2r s0(s0-1)) = 0
        if (q != 2 && nq <= 0 && nq % P.r == 0 && vq(T.big, q) != 0) rep.h2 = false;
        if (q != 2 && q != P.r && nq != 0) {
            if (nq > 0) {
                rep.toric_primes.push_back(q);
            } else if (nq % P.r != 0 && ord_mod(q, Int(P.r)) % 2 == 0) {
                rep.unip_witnesses.push_back(q);
            }
        }
    }
    long nu2 = nu.at(2);
    if (nu2 <= 0 && (nu2 == -1 || nu2 == -3)) rep.h3 = false;
    rep.toric_exists = !rep.toric_primes.empty();
    rep.unip_exists = !rep.unip_witnesses.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// places of K as local data
// ---------------------------------------------------------------------------

struct LocalPlace {
    Int q;
    long r;
    long e = 1;  // ramification index over Q_q ((r-1)/2 at the place above r)
    long f = 1;
    long index = 1;
    bool is_even() const { return q == 2; }
    bool is_r() const { return q == r; }
    std::string label() const {
        return q.get_str() + "." + std::to_string(f) + "." + std::to_string(index);
    }
};

inline LocalPlace local_place(long r, const PrimeIdealK& P) {
    LocalPlace L;
    L.q = P.q;
    L.r = r;
    L.f = P.f;
    L.index = P.index;
    L.e = P.ramified ? (r - 1) / 2 : 1;
    return L;
}

/// v_frak(x) = e * v_q(x) for rational x.
inline Rat vq_place(const LocalPlace& L, const Rat& x) { return Rat(L.e) * Rat(vq(x, L.q)); }

// ---------------------------------------------------------------------------
// cluster pictures
// ---------------------------------------------------------------------------

enum class ClusterShape {
    TwinsWithIsolated,        // (r-1)/2 twins plus one isolated root
    SingleCluster,            // all r roots in one cluster
    TwinsWithPair,            // twins plus the twin {gamma_i0, gamma_r}
    TwinsIsolatedAndOutside,  // minus picture of depth 1 with gamma_r isolated outside
    SingleClusterPlusRoot     // size-r cluster with gamma_r beside it
};

struct ClusterPicture {
    ModelKind kind;
    ClusterShape shape;
    long r = 5;
    LocalPlace place;
    Rat outer_depth;      // depth of the top cluster
    Rat twin_rel_depth;   // relative depth of the (r-1)/2 twins (when present)
    Rat pair_rel_depth;   // relative depth of the {gamma_i0/gamma_0, gamma_r} twin
    Rat inner_rel_depth;  // relative depth of the size-r child (plus case 5)
    std::string case_name;

    /// Sum over ordered pairs of distinct roots of v(root difference); equals
    /// v_frak of the model discriminant -- the cross-check invariant.
    Rat pairwise_valuation_sum() const {
        long n_roots = (kind == ModelKind::Minus) ? r : r + 1;
        Rat total(0);
        auto add_pairs = [&](long count, const Rat& depth) { total += Rat(count) * depth; };
        switch (shape) {
            case ClusterShape::TwinsWithIsolated:
                // twins at outer+rel, all other pairs at outer
                add_pairs(r - 1, outer_depth + twin_rel_depth);
                add_pairs(r * (r - 1) - (r - 1), outer_depth);
                break;
            case ClusterShape::SingleCluster:
                add_pairs(n_roots * (n_roots - 1), outer_depth);
                break;
            case ClusterShape::TwinsWithPair:
                add_pairs(r - 1, outer_depth + twin_rel_depth);
                add_pairs(2, outer_depth + pair_rel_depth);
                add_pairs((r + 1) * r - (r - 1) - 2, outer_depth);
                break;
            case ClusterShape::TwinsIsolatedAndOutside:
                // inner minus-picture at depth outer+1 with twins inside;
                // gamma_r meets everything at the outer depth
                add_pairs(r - 1, outer_depth + 1 + twin_rel_depth);
                add_pairs(r * (r - 1) - (r - 1), outer_depth + 1);
                add_pairs(2 * r, outer_depth);
                break;
            case ClusterShape::SingleClusterPlusRoot:
                add_pairs(r * (r - 1), outer_depth + inner_rel_depth);
                add_pairs(2 * r, outer_depth);
                break;
        }
        return total;
    }
};

/// Cluster picture of C_r^- at a place of bad reduction.
inline ClusterPicture cluster_minus(const LocalPlace& L, const Table1Data& T) {
    long r = T.r;
    Rat vfrak_s = vq_place(L, T.s0s0m1);                       // v_frak(s0(s0-1))
    Rat n = vq_place(L, Rat(16) * T.s0s0m1) / 2;               // v_frak(2^4 s0(s0-1))/2
    Rat v_dq = vq_place(L, Rat(T.d2)) / 2;                     // v_frak(deltaQ)
    ClusterPicture C;
    C.kind = ModelKind::Minus;
    C.r = r;
    C.place = L;
    if (!L.is_r()) {
        if (vfrak_s > 0) {
            C.shape = ClusterShape::TwinsWithIsolated;
            C.outer_depth = 0;
            C.twin_rel_depth = n;
            C.case_name = "minus-1 (q != r, v(s0(s0-1)) > 0)";
        } else if (!L.is_even()) {
            C.shape = ClusterShape::SingleCluster;
            C.outer_depth = v_dq + n / r;
            C.case_name = "minus-2 (q odd, v(s0(s0-1)) <= 0)";
        } else {
            throw std::domain_error("cluster_minus: no picture at an even place with nu_2 <= 0");
        }
    } else {
        if (vfrak_s > r) {
            C.shape = ClusterShape::TwinsWithIsolated;
            C.outer_depth = 1;
            C.twin_rel_depth = n - Rat(r, 2);
            C.case_name = "minus-3 (q = r, v(s0(s0-1)) > r)";
        } else {
            C.shape = ClusterShape::SingleCluster;
            C.outer_depth = Rat(1, 2) + v_dq + n / r;
            C.case_name = "minus-4 (q = r, v(s0(s0-1)) <= r)";
        }
    }
    return C;
}

/// Cluster picture of C_r^+ (needs rational s0, so integral deltaQ).
inline ClusterPicture cluster_plus(const LocalPlace& L, const Table1Data& T) {
    if (!T.s0) throw std::invalid_argument("cluster_plus: plus model needs integral deltaQ");
    long r = T.r;
    Rat s0 = *T.s0;
    Rat vfrak_s = vq_place(L, T.s0s0m1);
    Rat n = vq_place(L, Rat(16) * T.s0s0m1) / 2;
    Rat v_dq = vq_place(L, Rat(T.d2)) / 2;
    Rat v_s0 = (s0 == 0) ? Rat(0) : vq_place(L, s0);
    Rat v_s0m1 = (s0 == 1) ? Rat(0) : vq_place(L, s0 - 1);
    ClusterPicture C;
    C.kind = ModelKind::Plus;
    C.r = r;
    C.place = L;
    if (!L.is_r()) {
        if (vfrak_s > 0) {
            C.shape = ClusterShape::TwinsWithPair;
            C.outer_depth = 0;
            C.twin_rel_depth = n;
            C.pair_rel_depth = vq_place(L, Rat(4) * s0);  // ntilde
            C.case_name = "plus-1 (q != r, v(s0(s0-1)) > 0)";
        } else if (!L.is_even()) {
            C.shape = ClusterShape::SingleCluster;
            C.outer_depth = v_dq + n / r;
            C.case_name = "plus-2 (q odd, v(s0(s0-1)) <= 0)";
        } else {
            throw std::domain_error("cluster_plus: no picture at an even place with nu_2 <= 0");
        }
    } else {
        if (v_s0 > r) {
            C.shape = ClusterShape::TwinsWithPair;
            C.outer_depth = 1;
            C.twin_rel_depth = n - Rat(r, 2);
            C.pair_rel_depth = 2 * (n - Rat(r, 2));  // 2m
            C.case_name = "plus-3 (q = r, v(s0) > r)";
        } else if (v_s0m1 > r) {
            C.shape = ClusterShape::TwinsIsolatedAndOutside;
            C.outer_depth = 0;
            C.twin_rel_depth = n - Rat(r, 2);
            C.case_name = "plus-4 (q = r, v(s0-1) > r)";
        } else {
            C.shape = ClusterShape::SingleClusterPlusRoot;
            C.outer_depth = v_dq + v_s0 / r;
            C.inner_rel_depth = Rat(1, 2) + (v_s0m1 - v_s0) / (2 * r);  // 1/2 + mtilde
            C.case_name = "plus-5 (q = r, v(s0(s0-1)) <= r)";
        }
    }
    return C;
}

/// v_frak of the closed-form discriminant of the (untwisted) model.
inline Rat disc_valuation(const LocalPlace& L, const Table1Data& T, ModelKind kind) {
    long r = T.r;
    Rat big_v = vq_place(L, Rat(T.big));
    Rat out = Rat((r - 1) / 2) * big_v;
    if (L.is_r()) out += Rat(r) * Rat(L.e);  // r^r factor
    if (kind == ModelKind::Plus) {
        // (4 deltaQ^r s0)^2 = (2 deltaQ^r - t)^2
        if (!T.deltaQ) throw std::invalid_argument("plus model needs integral deltaQ");
        Int fourds = Int(2) * pow_int(*T.deltaQ, (unsigned long)r) - T.t;
        if (fourds == 0) throw std::domain_error("degenerate s0 = 0");
        out += 2 * vq_place(L, Rat(fourds));
    }
    return out;
}

// ---------------------------------------------------------------------------
// reducibility of g_r^- over Q_r
// ---------------------------------------------------------------------------

enum class GMinusRule { ReducibleDepth, IrreducibleNu12, IrreducibleNewton, PowerTest };

struct GMinusLocalType {
    bool reducible;
    GMinusRule rule;
};

/// Definitive reducibility verdict for g_r^- over Q_r, per the nu_r trichotomy
/// with the r-th-power test deciding the remaining case.
inline GMinusLocalType gminus_local_type_at_r(const Table1Data& T) {
    long r = T.r;
    long nu_r = vq(T.s0s0m1, Int(r));
    if (nu_r > 2) return {true, GMinusRule::ReducibleDepth};
    if (nu_r == 1 || nu_r == 2) return {false, GMinusRule::IrreducibleNu12};
    if (nu_r % r != 0) return {false, GMinusRule::IrreducibleNewton};
    bool pow = is_rth_power_in_Q1(T.t, T.big, T.d2, r);
    return {pow, GMinusRule::PowerTest};
}

/// v_r(Delta(Q_r(gamma_0)/Q_r)) when g_r^- is irreducible over Q_r.
inline Rat discr_valuation_r(const Table1Data& T) {
    long r = T.r;
    long nu_r = vq(T.s0s0m1, Int(r));
    if (nu_r == 2) return Rat(r);
    if (nu_r == 1) {
        Rat out(3 * r - 1, 2);
        out.canonicalize();
        return out;
    }
    if (nu_r <= 0 && nu_r % r == 0) {
        auto ty = gminus_local_type_at_r(T);
        if (ty.reducible) throw std::domain_error("discr_valuation_r: extension is trivial");
        return Rat(r);
    }
    if (nu_r < 0) return Rat(2 * r - 1);
    throw std::domain_error("discr_valuation_r: g_r^- reducible (nu_r > 2)");
}

// ---------------------------------------------------------------------------
// reduction types (Figures 1 and 2)
// ---------------------------------------------------------------------------

enum class ReductionType { Good, Toric, Unipotent, Unknown };

inline std::string reduction_name(ReductionType t) {
    switch (t) {
        case ReductionType::Good: return "good";
        case ReductionType::Toric: return "toric";
        case ReductionType::Unipotent: return "unipotent";
        default: return "unknown";
    }
}

enum class SqStatus { NotNeeded, Holds, Fails, Conditional };

/// deltaK is recorded as its valuations at the places above 2 and r plus the
/// truth values of the SQ conditions when residue data determined them.
struct DeltaKChoice {
    long v_at_r = 0;
    long v_at_even = 0;
    std::optional<bool> sq_minus;  // SQ(deltaK * deltaQ^r (2 - 4 s0))
    std::optional<bool> sq_plus;   // SQ(deltaK)
};

struct ReductionReport {
    LocalPlace place;
    ModelKind kind;
    ReductionType reduction = ReductionType::Unknown;
    SqStatus sq = SqStatus::NotNeeded;
    std::string branch;             // which edge of the decision tree fired
    std::string attains_good_over;  // base / tame-r-extension / quadratic / wild / -
};

inline ReductionReport reduction_minus(const LocalPlace& L, const Table1Data& T,
                                       const DeltaKChoice& dk) {
    long r = T.r;
    long nu = vq(T.s0s0m1, L.q);
    ReductionReport rep;
    rep.place = L;
    rep.kind = ModelKind::Minus;
    auto mod_r = [&](long x) { return ((x % r) + r) % r; };
    if (L.is_even()) {
        if (nu > 0) {
            rep.reduction = dk.v_at_even == 0 ? ReductionType::Toric : ReductionType::Unipotent;
            rep.branch = "q|2, nu_2 > 0, v(deltaK) = " + std::to_string(dk.v_at_even);
            rep.attains_good_over = "-";
        } else if (nu <= -8 && mod_r(nu) == mod_r(-8)) {
            rep.branch = "q|2, nu_2 <= -8, nu_2 = -8 mod r";
            if (!dk.sq_minus.has_value()) {
                rep.reduction = ReductionType::Good;
                rep.sq = SqStatus::Conditional;
                rep.attains_good_over = "base (conditional on SQ)";
            } else if (*dk.sq_minus) {
                rep.reduction = ReductionType::Good;
                rep.sq = SqStatus::Holds;
                rep.attains_good_over = "base";
            } else {
                rep.reduction = ReductionType::Unipotent;
                rep.sq = SqStatus::Fails;
                rep.attains_good_over = "-";
            }
        } else if (nu <= -8) {
            rep.reduction = ReductionType::Unipotent;
            rep.branch = "q|2, nu_2 <= -8, nu_2 != -8 mod r";
            rep.attains_good_over = "tame-r-extension";
        } else {
            rep.reduction = ReductionType::Unknown;
            rep.branch = "q|2, -8 < nu_2 <= 0: outside the analysed range";
            rep.attains_good_over = "-";
        }
    } else if (L.is_r()) {
        if (nu > 2) {
            rep.reduction = dk.v_at_r == 1 ? ReductionType::Toric : ReductionType::Unipotent;
            rep.branch = "q = r, nu_r > 2, v(deltaK) = " + std::to_string(dk.v_at_r);
            rep.attains_good_over = "-";
        } else {
            rep.reduction = ReductionType::Unipotent;
            rep.branch = "q = r, nu_r <= 2";
            rep.attains_good_over = gminus_local_type_at_r(T).reducible ? "quadratic" : "wild";
        }
    } else {
        if (nu > 0) {
            rep.reduction = ReductionType::Toric;  // v(deltaK) = 0 away from 2r
            rep.branch = "q !| 2r, nu_q > 0, v(deltaK) = 0";
            rep.attains_good_over = "-";
        } else if (mod_r(nu) == 0) {
            rep.reduction = ReductionType::Good;
            rep.branch = "q !| 2r, nu_q <= 0, nu_q = 0 mod r, v(deltaK) = 0";
            rep.attains_good_over = "base";
        } else {
            rep.reduction = ReductionType::Unipotent;
            rep.branch = "q !| 2r, nu_q <= 0, nu_q != 0 mod r";
            rep.attains_good_over = "tame-r-extension";
        }
    }
    return rep;
}

inline ReductionReport reduction_plus(const LocalPlace& L, const Table1Data& T,
                                      const DeltaKChoice& dk) {
    if (!T.s0) throw std::invalid_argument("reduction_plus: plus model needs integral deltaQ");
    long r = T.r;
    long nu = vq(T.s0s0m1, L.q);
    Rat s0 = *T.s0;
    long v_s0 = (s0 == 0) ? 0 : vq(s0, L.q);
    long v_s0m1 = (s0 == 1) ? 0 : vq(s0 - 1, L.q);
    ReductionReport rep;
    rep.place = L;
    rep.kind = ModelKind::Plus;
    auto mod_r = [&](long x) { return ((x % r) + r) % r; };
    if (L.is_even()) {
        if (nu > 0) {
            rep.reduction = dk.v_at_even == 0 ? ReductionType::Toric : ReductionType::Unipotent;
            rep.branch = "q|2, nu_2 > 0, v(deltaK) = " + std::to_string(dk.v_at_even);
            rep.attains_good_over = "-";
        } else if (nu <= -4 && mod_r(nu) == 0) {
            rep.branch = "q|2, nu_2 <= -4, nu_2 = 0 mod r";
            if (!dk.sq_plus.has_value()) {
                rep.reduction = ReductionType::Good;
                rep.sq = SqStatus::Conditional;
                rep.attains_good_over = "base (conditional on SQ)";
            } else if (*dk.sq_plus) {
                rep.reduction = ReductionType::Good;
                rep.sq = SqStatus::Holds;
                rep.attains_good_over = "base";
            } else {
                rep.reduction = ReductionType::Unipotent;
                rep.sq = SqStatus::Fails;
                rep.attains_good_over = "-";
            }
        } else if (nu <= -4) {
            rep.reduction = ReductionType::Unipotent;
            rep.branch = "q|2, nu_2 <= -4, nu_2 != 0 mod r";
            rep.attains_good_over = "tame-r-extension";
        } else {
            rep.reduction = ReductionType::Unknown;
            rep.branch = "q|2, -4 < nu_2 <= 0: outside the analysed range";
            rep.attains_good_over = "-";
        }
    } else if (L.is_r()) {
        if (v_s0 > 2) {
            rep.reduction = dk.v_at_r == 0 ? ReductionType::Toric : ReductionType::Unipotent;
            rep.branch = "q = r, v_r(s0) > 2, v(deltaK) = " + std::to_string(dk.v_at_r);
            rep.attains_good_over = "-";
        } else if (v_s0m1 > 2) {
            rep.reduction = dk.v_at_r == 1 ? ReductionType::Toric : ReductionType::Unipotent;
            rep.branch = "q = r, v_r(s0-1) > 2, v(deltaK) = " + std::to_string(dk.v_at_r);
            rep.attains_good_over = "-";
        } else {
            rep.reduction = ReductionType::Unipotent;
            rep.branch = "q = r, nu_r <= 2";
            rep.attains_good_over = gminus_local_type_at_r(T).reducible ? "quadratic" : "wild";
        }
    } else {
        if (nu > 0) {
            rep.reduction = ReductionType::Toric;
            rep.branch = "q !| 2r, nu_q > 0, v(deltaK) = 0";
            rep.attains_good_over = "-";
        } else if (mod_r(nu) == 0) {
            rep.reduction = ReductionType::Good;
            rep.branch = "q !| 2r, nu_q <= 0, nu_q = 0 mod r, v(deltaK) = 0";
            rep.attains_good_over = "base";
        } else {
            rep.reduction = ReductionType::Unipotent;
            rep.branch = "q !| 2r, nu_q <= 0, nu_q != 0 mod r";
            rep.attains_good_over = "tame-r-extension";
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Artin conductors (Tables 2 and 3) and inertial types
// ---------------------------------------------------------------------------

enum class InertialType { Unramified, Steinberg, PrincipalSeries, Supercuspidal };

inline std::string inertial_name(InertialType t) {
    switch (t) {
        case InertialType::Unramified: return "unramified";
        case InertialType::Steinberg: return "Steinberg";
        case InertialType::PrincipalSeries: return "principal series";
        default: return "supercuspidal (non-exceptional, induced from the unramified quadratic)";
    }
}

struct ConductorExponent {
    LocalPlace place;
    long n_tame = 0;
    long n_wild = 0;
    long n = 0;
    InertialType inertial = InertialType::Unramified;
    SqStatus sq = SqStatus::NotNeeded;
    std::string row;  // which table row fired
};

/// Inertial type of the Weil-Deligne representation at a bad place, for the
/// conductor-minimising deltaK.
inline InertialType inertial_type(ModelKind kind, const LocalPlace& L, const Table1Data& T) {
    long r = T.r;
    long nu = vq(T.s0s0m1, L.q);
    auto mod_r = [&](long x) { return ((x % r) + r) % r; };
    if (L.is_r()) {
        if (kind == ModelKind::Minus) return nu > 2 ? InertialType::Steinberg : InertialType::PrincipalSeries;
        Rat s0 = T.s0.value();
        long v_s0 = (s0 == 0) ? 0 : vq(s0, L.q);
        long v_s0m1 = (s0 == 1) ? 0 : vq(s0 - 1, L.q);
        return (v_s0 > 2 || v_s0m1 > 2) ? InertialType::Steinberg : InertialType::PrincipalSeries;
    }
    if (nu > 0) return InertialType::Steinberg;
    if (L.is_even()) {
        bool unip = (kind == ModelKind::Minus) ? (nu <= -8 && mod_r(nu) != mod_r(-8))
                                               : (nu <= -4 && mod_r(nu) != 0);
        bool good = (kind == ModelKind::Minus) ? (nu <= -8 && mod_r(nu) == mod_r(-8))
                                               : (nu <= -4 && mod_r(nu) == 0);
        if (good) return InertialType::Unramified;
        if (unip)
            return ord_mod(Int(2), Int(r)) % 2 == 1 ? InertialType::PrincipalSeries
                                                    : InertialType::Supercuspidal;
        throw std::domain_error("inertial_type: uncovered even-place case");
    }
    if (mod_r(nu) == 0) return InertialType::Unramified;  // good reduction
    return ord_mod(L.q, Int(r)) % 2 == 1 ? InertialType::PrincipalSeries
                                         : InertialType::Supercuspidal;
}

/// Artin conductor exponent per Tables 2-3. Throws "deltaK condition unmet"
/// when the row's condition column fails, "uncovered case" in the even gap.
inline ConductorExponent conductor(ModelKind kind, const LocalPlace& L, const Table1Data& T,
                                   const DeltaKChoice& dk) {
    long r = T.r;
    long nu = vq(T.s0s0m1, L.q);
    auto mod_r = [&](long x) { return ((x % r) + r) % r; };
    ConductorExponent C;
    C.place = L;
    auto need = [&](bool cond, const char* what) {
        if (!cond) throw std::domain_error(std::string("deltaK condition unmet: ") + what);
    };
    if (L.is_even()) {
        long thresh = (kind == ModelKind::Minus) ? -8 : -4;
        long cong = (kind == ModelKind::Minus) ? mod_r(-8) : 0;
        const std::optional<bool>& sq = (kind == ModelKind::Minus) ? dk.sq_minus : dk.sq_plus;
        if (nu > 0) {
            need(dk.v_at_even == 0, "v(deltaK) = 0 at even places");
            C.n_tame = 1;
            C.row = "even, nu_2 > 0";
        } else if (nu <= thresh) {
            C.sq = !sq.has_value() ? SqStatus::Conditional : (*sq ? SqStatus::Holds : SqStatus::Fails);
            if (sq.has_value() && !*sq) throw std::domain_error("deltaK condition unmet: SQ fails");
            if (mod_r(nu) == cong) {
                C.n_tame = 0;
                C.row = "even, nu_2 <= thresh, congruent";
            } else {
                C.n_tame = 2;
                C.row = "even, nu_2 <= thresh, not congruent";
            }
        } else {
            throw std::domain_error("uncovered case: even place with nu_2 in the open gap");
        }
    } else if (L.is_r()) {
        bool steinberg_row = false;
        if (kind == ModelKind::Minus) {
            steinberg_row = nu > 2;
            if (steinberg_row) need(dk.v_at_r == 1, "v_r(deltaK) = 1");
        } else {
            Rat s0 = T.s0.value();
            long v_s0 = (s0 == 0) ? 0 : vq(s0, L.q);
            long v_s0m1 = (s0 == 1) ? 0 : vq(s0 - 1, L.q);
            if (v_s0 > 2) {
                steinberg_row = true;
                need(dk.v_at_r == 0, "v_r(deltaK) = 0");
            } else if (v_s0m1 > 2) {
                steinberg_row = true;
                need(dk.v_at_r == 1, "v_r(deltaK) = 1");
            }
        }
        if (steinberg_row) {
            C.n_tame = 1;
            C.row = "r, nu_r > 2 (toric)";
        } else if (nu == 2) {
            C.n_tame = 2;
            C.n_wild = 1;
            C.row = "r, nu_r = 2";
        } else if (nu == 1) {
            C.n_tame = 2;
            C.n_wild = (r + 1) / 2;
            C.row = "r, nu_r = 1";
        } else if (mod_r(nu) == 0) {
            C.n_tame = 2;
            C.n_wild = gminus_local_type_at_r(T).reducible ? 0 : 1;
            C.row = gminus_local_type_at_r(T).reducible ? "r, nu_r <= 0 = 0 mod r, g- reducible"
                                                        : "r, nu_r <= 0 = 0 mod r, g- irreducible";
        } else {
            C.n_tame = 2;
            C.n_wild = r;
            C.row = "r, nu_r <= 0, != 0 mod r";
        }
    } else {
        if (nu > 0) {
            C.n_tame = 1;
            C.row = "odd, nu_q > 0";
        } else if (mod_r(nu) == 0) {
            C.n_tame = 0;
            C.row = "odd, nu_q <= 0, = 0 mod r";
        } else {
            C.n_tame = 2;
            C.row = "odd, nu_q <= 0, != 0 mod r";
        }
    }
    C.n = C.n_tame + C.n_wild;
    C.inertial = (C.n == 0) ? InertialType::Unramified : inertial_type(kind, L, T);
    return C;
}

/// Conductor-minimising deltaK prescription from the table condition columns.
struct DeltaKPrescription {
    DeltaKChoice choice;
    bool requires_sq = false;  // SQ(deltaK * t) for minus, SQ(deltaK) for plus
    bool covered = true;       // false in the even-place gap
    std::string note;
};

inline DeltaKPrescription choose_deltaK(ModelKind kind, const Table1Data& T) {
    long r = T.r;
    long nu2 = vq(T.s0s0m1, Int(2));
    long nur = vq(T.s0s0m1, Int(r));
    DeltaKPrescription P;
    if (kind == ModelKind::Minus) {
        P.choice.v_at_r = nur > 2 ? 1 : 0;
        if (nu2 > 0) {
            P.choice.v_at_even = 0;
        } else if (nu2 <= -8) {
            P.choice.v_at_even = 0;
            P.requires_sq = true;
            P.note = "requires SQ(deltaK * deltaQ^r(2-4s0)) at even places";
        } else {
            P.covered = false;
            P.note = "even place in the open gap -8 < nu_2 <= 0";
        }
    } else {
        Rat s0 = T.s0.value();
        long v_s0 = (s0 == 0) ? 0 : vq(s0, Int(r));
        long v_s0m1 = (s0 == 1) ? 0 : vq(s0 - 1, Int(r));
        P.choice.v_at_r = (v_s0m1 > 2) ? 1 : 0;
        if (nu2 > 0) {
            P.choice.v_at_even = 0;
        } else if (nu2 <= -4) {
            P.choice.v_at_even = 0;
            P.requires_sq = true;
            P.note = "requires SQ(deltaK) at even places";
        } else {
            P.covered = false;
            P.note = "even place in the open gap -4 < nu_2 <= 0";
        }
    }
    return P;
}

// ---------------------------------------------------------------------------
// predicted newform level
// ---------------------------------------------------------------------------

struct LevelIdeal {
    long two_exp = 0;
    long r_exp = 0;
    struct OddPart {
        Int q;
        long f;
        long index;
        long exp;
    };
    std::vector<OddPart> odd;  // every place above each odd prime in the support

    Int norm(long r) const {
        Int out = pow_int(Int(2), (unsigned long)(two_exp * ord_even_f_)) *
                  pow_int(Int(r), (unsigned long)r_exp);
        for (auto& p : odd) out *= pow_int(pow_int(p.q, (unsigned long)p.f), (unsigned long)p.exp);
        return out;
    }
    long ord_even_f_ = 1;  // residue degree at 2 (for the norm)

    /// Human rendering, ascending rational primes with r printed as "r".
    std::string human(long r) const {
        std::map<Int, long> byq;
        if (two_exp > 0) byq[Int(2)] = two_exp;
        if (r_exp > 0) byq[Int(r)] = r_exp;
        for (auto& p : odd) byq[p.q] = p.exp;
        std::string s;
        for (auto& [q, e] : byq) {
            if (!s.empty()) s += " * ";
            s += (q == r ? std::string("r") : q.get_str()) + "^" + std::to_string(e);
        }
        return s.empty() ? "1" : s;
    }
};

// ---------------------------------------------------------------------------
// congruence cases (the finitely many 2-adic / r-adic rows)
// ---------------------------------------------------------------------------

enum class DivTarget { ABProduct, CMember, None, Unspecified };

struct CongruenceCase {
    DivTarget at2 = DivTarget::Unspecified;
    DivTarget atr = DivTarget::Unspecified;
    std::optional<bool> gminus_reducible;  // fixes the nu_r <= 0 = 0 mod r subrow
};

/// Parses case strings like "10|ab", "2|ab,5|c", "2|c", "10!|abc" (comma-separated
/// atoms d|target or d!|target with d in {2, r, 10, 2r} and target in {a,b,ab,c,abc}).
inline CongruenceCase parse_case(const std::string& text, long r) {
    CongruenceCase out;
    std::string s = text;
    std::vector<std::string> atoms;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string atom = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!atom.empty()) atoms.push_back(atom);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (auto& atom : atoms) {
        bool negated = false;
        std::size_t bar = atom.find("!|");
        std::size_t len = 2;
        if (bar == std::string::npos) {
            bar = atom.find('|');
            len = 1;
        } else {
            negated = true;
        }
        if (bar == std::string::npos) throw std::invalid_argument("bad case atom: " + atom);
        std::string dstr = atom.substr(0, bar);
        std::string target = atom.substr(bar + len);
        long d = std::stol(dstr);
        bool touches2 = (d % 2 == 0);
        bool touchesr = (d % r == 0);
        if (!touches2 && !touchesr) throw std::invalid_argument("case atom must involve 2 or r: " + atom);
        DivTarget t;
        if (target == "a" || target == "b" || target == "ab") t = DivTarget::ABProduct;
        else if (target == "c") t = DivTarget::CMember;
        else if (target == "abc") t = negated ? DivTarget::None : DivTarget::ABProduct;
        else throw std::invalid_argument("bad case target: " + target);
        if (negated) t = DivTarget::None;
        if (touches2) out.at2 = t;
        if (touchesr) out.atr = t;
    }
    return out;
}

namespace detail {

struct FlagNu {
    bool exact = false;
    long value = 0;       // when exact
    bool positive = false;
    bool gt2 = false;     // when positive: nu > 2 guaranteed
    long residue = 0;     // nu mod r, valid when !positive
};

/// nu_q for q in {2, r} from case flags and coefficient valuations; throws
/// when the flags do not pin the table row down.
inline FlagNu flag_nu(const GFEParams& P, const CongruenceCase& kase, const Int& q, long gap_le) {
    long r = P.r;
    long vA = vq(P.A, q), vB = vq(P.B, q), vC = vq(P.C, q);
    DivTarget t = (q == 2) ? kase.at2 : kase.atr;
    FlagNu out;
    auto mod_r = [&](long x) { return ((x % r) + r) % r; };
    if (P.signature == Signature::PPR) {
        // s0(s0-1) = -A a^p B b^p / (C c^r)^2
        if (t == DivTarget::ABProduct && vC > 0)
            throw std::invalid_argument("case contradicts coefficients: q | ab and q | C");
        if (t == DivTarget::CMember && vA + vB > 0)
            throw std::invalid_argument("case contradicts coefficients: q | c and q | AB");
        if (t == DivTarget::ABProduct) {
            out.positive = true;
            out.gt2 = true;  // nu = v(AB) + p v(ab) >= p > r > 2
            return out;
        }
        if (vA + vB > 0) {
            if (t == DivTarget::None) {
                out.exact = true;
                out.value = vA + vB;
                out.positive = true;
                out.gt2 = out.value > 2;
                out.residue = mod_r(out.value);
                return out;
            }
            // v(ab) unspecified: nu = v(AB) + p v(ab) with p > r
            out.positive = true;
            out.gt2 = vA + vB > 2;
            if (!out.gt2)
                throw std::invalid_argument("ambiguous case: nu_" + q.get_str() +
                                            " could be 1, 2 or > 2; specify divisibility of ab");
            return out;
        }
        if (t == DivTarget::CMember) {
            // nu = -2 vC - 2 r v(c) <= -2r, residue fixed by vC
            out.positive = false;
            out.residue = mod_r(-2 * vC);
            return out;
        }
        if (t == DivTarget::None) {
            out.exact = true;
            out.value = -2 * vC;
            out.positive = false;
            out.residue = mod_r(out.value);
            return out;
        }
        if (vC == 0)
            throw std::invalid_argument("ambiguous case: specify divisibility of abc by " + q.get_str());
        // q | C, v(c) unknown: nu = -2 vC - 2 r v(c), residue fixed
        out.positive = false;
        out.residue = mod_r(-2 * vC);
        if (-2 * vC > gap_le)
            throw std::invalid_argument("ambiguous case: nu_" + q.get_str() +
                                        " depends on unspecified v(c)");
        return out;
    }
    // RRP: s0(s0-1) = -(C c^p)^2 / (2^4 A a^r B b^r)
    if (t == DivTarget::CMember && vA + vB > 0)
        throw std::invalid_argument("case contradicts coefficients: q | c and q | AB");
    if (t == DivTarget::ABProduct && vC > 0)
        throw std::invalid_argument("case contradicts coefficients: q | ab and q | C");
    if (t == DivTarget::CMember) {
        out.positive = true;
        out.gt2 = true;  // nu = 2 v(Cc^p) - 4[q=2] >= 2p - 4 > 2
        return out;
    }
    if (vC > 0) {
        if (t == DivTarget::None) {
            out.exact = true;
            out.value = 2 * vC - (q == 2 ? 4 : 0);
            out.positive = out.value > 0;
            out.gt2 = out.value > 2;
            out.residue = mod_r(out.value);
            return out;
        }
        throw std::invalid_argument("ambiguous case: specify divisibility of abc by " + q.get_str());
    }
    if (t == DivTarget::ABProduct) {
        out.positive = false;
        out.residue = mod_r(-(q == 2 ? 4 : 0) - vA - vB);
        return out;
    }
    if (t == DivTarget::None || vA + vB > 0) {
        if (t == DivTarget::Unspecified) {
            if (vA + vB == 0)
                throw std::invalid_argument("ambiguous case: specify divisibility of abc by " +
                                            q.get_str());
            out.positive = false;
            out.residue = mod_r(-(q == 2 ? 4 : 0) - vA - vB);
            long upper = -(q == 2 ? 4 : 0) - vA - vB;
            if (upper > gap_le)
                throw std::invalid_argument("ambiguous case: nu depends on unspecified v(ab)");
            return out;
        }
        out.exact = true;
        out.value = -(q == 2 ? 4 : 0) - vA - vB;
        out.positive = out.value > 0;
        out.residue = mod_r(out.value);
        return out;
    }
    throw std::invalid_argument("ambiguous case: specify divisibility of abc by " + q.get_str());
}

}  // namespace detail

/// Predicted newform level after level lowering:
/// PPR: 2^n2 r^nr rad*(AB) rad*(C)^2; RRP: 2^n2 r^nr rad*(C) rad*(AB)^2.
inline LevelIdeal predicted_level(ModelKind kind, const GFEParams& P, const CongruenceCase& kase) {
    if (kind == ModelKind::Plus && P.signature == Signature::RRP)
        throw std::invalid_argument("plus model unavailable for signature (r,r,p)");
    long r = P.r;
    auto mod_r = [&](long x) { return ((x % r) + r) % r; };
    LevelIdeal N;
    // --- exponent at 2 ---
    {
        long thresh = (kind == ModelKind::Minus) ? -8 : -4;
        long cong = (kind == ModelKind::Minus) ? mod_r(-8) : 0;
        detail::FlagNu nu2 = detail::flag_nu(P, kase, Int(2), thresh);
        if (nu2.positive) {
            N.two_exp = 1;
        } else if (nu2.exact && nu2.value > thresh) {
            throw std::domain_error("uncovered case: nu_2 = " + std::to_string(nu2.value) +
                                    " lies in the open even-place gap");
        } else {
            N.two_exp = (nu2.residue == cong) ? 0 : 2;
        }
    }
    // --- exponent at r ---
    {
        detail::FlagNu nur = detail::flag_nu(P, kase, Int(r), 0);
        if (nur.positive) {
            // nu_r > 0; rows nu_r in {1, 2} need the exact value
            if (nur.exact && nur.value == 1) N.r_exp = 2 + (r + 1) / 2;
            else if (nur.exact && nur.value == 2) N.r_exp = 3;
            else if (nur.gt2) N.r_exp = 1;  // toric row
            else throw std::invalid_argument("ambiguous case: nu_r row undetermined");
        } else if (nur.residue != 0) {
            N.r_exp = 2 + r;
        } else {
            if (!kase.gminus_reducible.has_value())
                throw std::invalid_argument(
                    "ambiguous case: nu_r <= 0 and = 0 mod r needs the g_r^- reducibility flag");
            N.r_exp = *kase.gminus_reducible ? 2 : 3;
        }
    }
    // --- odd part from rad*(AB), rad*(C) ---
    auto K = build_field(r);
    std::set<Int> ab_primes, c_primes;
    for (const Int* x : {&P.A, &P.B})
        if (abs_int(*x) != 1)
            for (auto& [p, e] : factor(*x))
                if (p != 2 && p != r) ab_primes.insert(p);
    if (abs_int(P.C) != 1)
        for (auto& [p, e] : factor(P.C))
            if (p != 2 && p != r) c_primes.insert(p);
    long exp_ab = (P.signature == Signature::PPR) ? 1 : 2;
    long exp_c = (P.signature == Signature::PPR) ? 2 : 1;
    std::set<Int> all;
    for (auto& q : ab_primes) all.insert(q);
    for (auto& q : c_primes) all.insert(q);
    for (auto& q : all) {
        long e = ab_primes.count(q) ? exp_ab : exp_c;
        for (auto& place : split_prime(K, q))
            N.odd.push_back({q, place.f, place.index, e});
    }
    auto p2 = split_prime(K, Int(2));
    N.ord_even_f_ = p2[0].f;
    return N;
}

// ---------------------------------------------------------------------------
// absolute irreducibility certificate
// ---------------------------------------------------------------------------

struct IrreducibilityCertificate {
    bool certified = false;
    std::optional<Int> witness_q;  // odd witness
    bool even_witness = false;
};

/// Searches the nu profile for a prime certifying absolute irreducibility of
/// the residual representations (odd witness: nu_q <= 0, nu_q != 0 mod r,
/// ord(q mod r) even; even witness via the nu_2 thresholds).
inline IrreducibilityCertificate irreducibility_certificate(const GFEParams& P, const Table1Data& T,
                                                            ModelKind kind = ModelKind::Minus) {
    IrreducibilityCertificate cert;
    NuProfile nu = nu_profile(T);
    long r = P.r;
    auto mod_r = [&](long x) { return ((x % r) + r) % r; };
    for (auto& [q, v] : nu.nu) {
        if (q == 2 || q == P.r) continue;
        if (v <= 0 && mod_r(v) != 0 && ord_mod(q, Int(r)) % 2 == 0) {
            cert.certified = true;
            cert.witness_q = q;
            return cert;
        }
    }
    long nu2 = nu.at(2);
    if (ord_mod(Int(2), Int(r)) % 2 == 0) {
        if (kind == ModelKind::Minus && nu2 <= -8 && mod_r(nu2) != mod_r(-8)) {
            cert.certified = true;
            cert.even_witness = true;
        }
        if (kind == ModelKind::Plus && nu2 <= -4 && mod_r(nu2) != 0) {
            cert.certified = true;
            cert.even_witness = true;
        }
    }
    return cert;
}

/// Certificate from the coefficients alone (residue-class mode): witnesses
/// q | AB (RRP) or q | C (PPR) work for every solution.
inline IrreducibilityCertificate irreducibility_certificate_from_params(const GFEParams& P) {
    IrreducibilityCertificate cert;
    long r = P.r;
    std::set<Int> candidates;
    const Int& coeff1 = (P.signature == Signature::RRP) ? P.A : P.C;
    const Int& coeff2 = (P.signature == Signature::RRP) ? P.B : P.C;
    for (const Int* x : {&coeff1, &coeff2}) {
        if (abs_int(*x) == 1) continue;
        for (auto& [p, e] : factor(*x))
            if (p != 2 && p != r) candidates.insert(p);
    }
    for (auto& q : candidates) {
        long v = (P.signature == Signature::RRP) ? -(vq(P.A, q) + vq(P.B, q)) : -2 * vq(P.C, q);
        if (((v % r) + r) % r != 0 && ord_mod(q, Int(r)) % 2 == 0) {
            cert.certified = true;
            cert.witness_q = q;
            return cert;
        }
    }
    return cert;
}

}  // namespace gfe

#endif
