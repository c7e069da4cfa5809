#ifndef GFE_TEST_HELPERS_HPP
#define GFE_TEST_HELPERS_HPP

#include <functional>
#include <vector>

#include "gfe/frey.hpp"
#include "gfe/local.hpp"

namespace gfe::testutil {

/// PPR data with c = 1: C := A a^p + B b^p always yields an exact solution.
inline std::optional<std::pair<GFEParams, ExactSolution>> ppr_family(long r, const Int& A,
                                                                     const Int& B, const Int& a,
                                                                     const Int& b, long p) {
    Int C = A * pow_int(a, (unsigned long)p) + B * pow_int(b, (unsigned long)p);
    if (C == 0 || a == 0 || b == 0) return std::nullopt;
    GFEParams P{Signature::PPR, r, A, B, C};
    return std::make_pair(P, ExactSolution{a, b, Int(1), p});
}

/// RRP data with c = 1: C := A a^r + B b^r.
inline std::optional<std::pair<GFEParams, ExactSolution>> rrp_family(long r, const Int& A,
                                                                     const Int& B, const Int& a,
                                                                     const Int& b, long p) {
    Int C = A * pow_int(a, (unsigned long)r) + B * pow_int(b, (unsigned long)r);
    if (C == 0 || a == 0 || b == 0) return std::nullopt;
    GFEParams P{Signature::RRP, r, A, B, C};
    return std::make_pair(P, ExactSolution{a, b, Int(1), p});
}

/// Checks the cluster/discriminant invariant at every bad place of a model.
/// Returns the number of (place, picture) pairs that were verified.
inline long check_cluster_disc_invariant(const GFEParams& P, const Table1Data& T,
                                         std::function<void(bool)> expect) {
    auto K = build_field(P.r);
    long verified = 0;
    NuProfile nu = nu_profile(T);
    std::set<Int> bad = {Int(2), Int(P.r)};
    for (auto& [q, v] : nu.nu) bad.insert(q);
    for (auto& [q, e] : factor(T.d2)) bad.insert(q);
    for (auto& q : bad) {
        for (auto& prime : split_prime(K, q)) {
            LocalPlace L = local_place(P.r, prime);
            // minus picture exists off the good-reduction locus; skip even
            // places with nu_2 <= 0 (no picture drawn there)
            long nuq = vq(T.s0s0m1, q);
            bool even_gap = L.is_even() && nuq <= 0;
            if (!even_gap) {
                bool bad_minus = vq(Rat(T.big), q) != 0 || L.is_r() || (L.is_even() && nuq > 0);
                if (bad_minus) {
                    ClusterPicture C = cluster_minus(L, T);
                    expect(C.pairwise_valuation_sum() == disc_valuation(L, T, ModelKind::Minus));
                    ++verified;
                }
            }
            if (T.s0 && T.deltaQ && !even_gap) {
                Int fourds = Int(2) * pow_int(*T.deltaQ, (unsigned long)P.r) - T.t;
                bool bad_plus = vq(Rat(T.big), q) != 0 || L.is_r() || (L.is_even() && nuq > 0) ||
                                (fourds != 0 && vq(fourds, q) != 0);
                if (bad_plus && fourds != 0) {
                    ClusterPicture C = cluster_plus(L, T);
                    expect(C.pairwise_valuation_sum() == disc_valuation(L, T, ModelKind::Plus));
                    ++verified;
                }
            }
        }
    }
    return verified;
}

}  // namespace gfe::testutil

#endif
