#ifndef GFE_FREY_HPP
#define GFE_FREY_HPP

#include <optional>
#include <string>
#include <vector>

#include "gfe/fq.hpp"
#include "gfe/int.hpp"
#include "gfe/poly.hpp"

namespace gfe {

enum class Signature { PPR, RRP };

inline std::string signature_name(Signature s) { return s == Signature::PPR ? "ppr" : "rrp"; }

/// The equation A x^p + B y^p = C z^r (PPR) or A x^r + B y^r = C z^p (RRP).
struct GFEParams {
    Signature signature = Signature::PPR;
    long r = 5;
    Int A = 1, B = 1, C = 1;
};

struct ExactSolution {
    Int a, b, c;
    long p;  // the varying exponent (may be small for known solutions)
};

struct SanityReport {
    bool coefficients_nonzero = false;
    bool pairwise_coprime = false;
    bool rth_power_free = false;
    bool r_is_odd_prime = false;
    std::optional<bool> equation_holds;    // exact mode only
    std::optional<bool> rrp_congruence;    // A^(r-1) = B^(r-1) mod r^2 (RRP only)
    bool ok() const {
        return coefficients_nonzero && pairwise_coprime && rth_power_free && r_is_odd_prime &&
               (!equation_holds || *equation_holds);
    }
};

inline SanityReport sanity_checks(const GFEParams& P,
                                  const std::optional<ExactSolution>& sol = std::nullopt) {
    SanityReport rep;
    rep.r_is_odd_prime = P.r >= 5 && is_prime(Int(P.r));
    rep.coefficients_nonzero = P.A != 0 && P.B != 0 && P.C != 0;
    rep.pairwise_coprime = gcd_int(P.A, P.B) == 1 && gcd_int(P.A, P.C) == 1 && gcd_int(P.B, P.C) == 1;
    rep.rth_power_free = true;
    if (rep.coefficients_nonzero && rep.r_is_odd_prime) {
        for (const Int* coeff : {&P.A, &P.B, &P.C}) {
            if (abs_int(*coeff) == 1) continue;
            for (auto& [p, e] : factor(*coeff))
                if (e >= P.r) rep.rth_power_free = false;
        }
    }
    if (P.signature == Signature::RRP && rep.r_is_odd_prime) {
        Int r2 = Int(P.r) * Int(P.r);
        Int lhs = powmod(P.A % r2 + r2, Int(P.r - 1), r2);
        Int rhs = powmod(P.B % r2 + r2, Int(P.r - 1), r2);
        rep.rrp_congruence = (lhs == rhs);
    }
    if (sol) {
        if (sol->a * sol->b * sol->c == 0) {
            rep.equation_holds = false;
        } else {
            Int lhs, rhs;
            if (P.signature == Signature::PPR) {
                lhs = P.A * pow_int(sol->a, (unsigned long)sol->p) +
                      P.B * pow_int(sol->b, (unsigned long)sol->p);
                rhs = P.C * pow_int(sol->c, (unsigned long)P.r);
            } else {
                lhs = P.A * pow_int(sol->a, (unsigned long)P.r) +
                      P.B * pow_int(sol->b, (unsigned long)P.r);
                rhs = P.C * pow_int(sol->c, (unsigned long)sol->p);
            }
            rep.equation_holds = (lhs == rhs);
        }
    }
    return rep;
}

/// c_k = r/(r-k) * binom(r-k, k), the coefficients of the expanded g_{r,s}^-.
inline std::vector<Int> c_coeffs(long r) {
    std::vector<Int> out;
    for (long k = 0; 2 * k <= r - 1; ++k)
        out.push_back(exact_div(Int(r) * binomial((unsigned long)(r - k), (unsigned long)k), Int(r - k)));
    return out;
}

/// The Table 1 quantities attached to an exact solution; everything downstream
/// (cluster pictures, reduction types, conductors) is driven by these.
struct Table1Data {
    Signature signature;
    long r;
    Rat s0s0m1;              // s_0 (s_0 - 1)
    Int t;                   // deltaQ^r (2 - 4 s_0)
    Int d2;                  // deltaQ^2
    Int big;                 // 2^4 deltaQ^(2r) s_0(s_0-1) = t^2 - 4 d2^r
    std::optional<Rat> s0;       // rational only when deltaQ is an integer (PPR)
    std::optional<Int> deltaQ;   // the integer deltaQ = Cc itself (PPR)
};

inline Table1Data table1(const GFEParams& P, const ExactSolution& sol) {
    if (sol.a * sol.b * sol.c == 0) throw std::invalid_argument("trivial solution");
    Table1Data T;
    T.signature = P.signature;
    T.r = P.r;
    long g = (P.r - 1) / 2;
    if (P.signature == Signature::PPR) {
        Int Aap = P.A * pow_int(sol.a, (unsigned long)sol.p);
        Int Bbp = P.B * pow_int(sol.b, (unsigned long)sol.p);
        Int Ccr = P.C * pow_int(sol.c, (unsigned long)P.r);
        T.s0s0m1 = Rat(-Aap * Bbp) / Rat(Ccr * Ccr);
        T.s0s0m1.canonicalize();
        T.t = Int(2) * pow_int(P.C, (unsigned long)(P.r - 1)) * (Bbp - Aap);
        Int Cc = P.C * sol.c;
        T.d2 = Cc * Cc;
        T.big = Int(-16) * Aap * Bbp * pow_int(P.C, (unsigned long)(2 * (P.r - 1)));
        T.s0 = Rat(Aap) / Rat(Ccr);
        T.s0->canonicalize();
        T.deltaQ = Cc;
    } else {
        Int Aar = P.A * pow_int(sol.a, (unsigned long)P.r);
        Int Bbr = P.B * pow_int(sol.b, (unsigned long)P.r);
        Int Ccp = P.C * pow_int(sol.c, (unsigned long)sol.p);
        T.s0s0m1 = Rat(-Ccp * Ccp) / Rat(Int(16) * Aar * Bbr);
        T.s0s0m1.canonicalize();
        Int ABg = pow_int(P.A * P.B, (unsigned long)g);
        T.t = ABg * (Bbr - Aar);
        T.d2 = -P.A * P.B * sol.a * sol.b;
        T.big = pow_int(P.A * P.B, (unsigned long)(P.r - 1)) * Ccp * Ccp;
    }
    if (T.big != T.t * T.t - Int(4) * pow_int(T.d2, (unsigned long)P.r))
        throw std::logic_error("table1: big != t^2 - 4 d2^r");
    return T;
}

enum class ModelKind { Minus, Plus };

/// Integral Weierstrass model y^2 = f(x) of the Frey curve (or a twist).
struct FreyModel {
    long r;
    ModelKind kind;
    PolyZ f;
    Int d2, t;
    Int deltaK = 1;
    long genus() const { return (r - 1) / 2; }
};

/// g_r^-: f(x) = sum_k (-1)^k c_k d2^k x^(r-2k) + t, monic of degree r.
inline FreyModel build_minus(long r, const Int& d2, const Int& t) {
    if (t * t == Int(4) * pow_int(d2, (unsigned long)r))
        throw std::invalid_argument("degenerate s0");
    auto cs = c_coeffs(r);
    std::vector<Int> coef((std::size_t)r + 1, 0);
    for (long k = 0; 2 * k <= r - 1; ++k) {
        Int term = cs[(std::size_t)k] * pow_int(d2, (unsigned long)k);
        if (k % 2 == 1) term = -term;
        coef[(std::size_t)(r - 2 * k)] = term;
    }
    coef[0] += t;
    FreyModel M;
    M.r = r;
    M.kind = ModelKind::Minus;
    M.f = PolyZ(std::move(coef));
    M.d2 = d2;
    M.t = t;
    return M;
}

/// g_r^+ = g_r^- * (x + 2 deltaQ); only defined for integral deltaQ.
inline FreyModel build_plus(long r, const Int& deltaQ, const Int& t) {
    FreyModel M = build_minus(r, deltaQ * deltaQ, t);
    M.kind = ModelKind::Plus;
    M.f = M.f * PolyZ({Int(2) * deltaQ, Int(1)});
    return M;
}

/// Discriminant of the hyperelliptic equation y^2 = P(x) (Liu's normalisation):
/// 2^(4g) lc^2 disc(P) for odd degree, 2^(4g) disc(P) for even degree.
inline Int hyperelliptic_disc(const PolyZ& P) {
    long d = P.degree();
    if (d < 3) throw std::domain_error("hyperelliptic_disc: degree too small");
    long g = (d % 2 == 1) ? (d - 1) / 2 : (d - 2) / 2;
    Int disc = discriminant(P);
    Int out = pow_int(Int(2), (unsigned long)(4 * g)) * disc;
    if (d % 2 == 1) out *= P.lc() * P.lc();
    return out;
}

/// 2^(4g) disc(f) via resultants; 0 iff f is not squarefree.
inline Int disc_oracle(const PolyZ& f) { return hyperelliptic_disc(f); }

/// Closed form for Delta(W^(kind, deltaK)) from the Table 1 data.
inline Int disc_closed_form(long r, ModelKind kind, const Int& d2, const Int& t,
                            const Int& deltaK = 1,
                            const std::optional<Int>& deltaQ = std::nullopt) {
    long g = (r - 1) / 2;
    Int big = t * t - Int(4) * pow_int(d2, (unsigned long)r);
    if (big == 0) throw std::invalid_argument("degenerate s0");
    Int out = pow_int(Int(2), (unsigned long)(2 * (r - 1))) * pow_int(Int(r), (unsigned long)r) *
              pow_int(big, (unsigned long)g) * pow_int(deltaK, (unsigned long)(2 * r));
    if (g % 2 == 1) out = -out;
    if (kind == ModelKind::Plus) {
        if (!deltaQ) throw std::invalid_argument("plus model needs integral deltaQ");
        // 4 deltaQ^r s0 = 2 deltaQ^r - t
        Int fourds = Int(2) * pow_int(*deltaQ, (unsigned long)r) - t;
        out *= fourds * fourds;
    }
    return out;
}

/// Quadratic twist y^2 = delta f(x); the discriminant picks up delta^(2r).
inline FreyModel twist(const FreyModel& M, const Int& delta) {
    if (delta == 0) throw std::invalid_argument("twist by zero");
    FreyModel out = M;
    out.f = M.f * delta;
    out.deltaK = M.deltaK * delta;
    return out;
}

/// A Frey model with parameters reduced into F_q (residue-class mode):
/// PPR uses u ~ A a^p, v ~ c; RRP uses u ~ a, v ~ b.
struct ResidueModel {
    long r;
    Int q;
    FpVec f;
    Int u, v;
    bool all_degenerate = false;  // both parameters vanish (excluded by coprimality)
    bool singular = false;        // disc(f) = 0 in F_q
};

inline ResidueModel model_residue(const GFEParams& P, const Int& q, const Int& u, const Int& v) {
    if (!is_prime(q) || q == 2 || q == P.r)
        throw std::invalid_argument("model_residue: q must be a prime not dividing 2r");
    PrimeField F(q.get_ui());
    long r = P.r, g = (r - 1) / 2;
    auto cs = c_coeffs(r);
    std::vector<Int> coef((std::size_t)r + 1, 0);
    if (P.signature == Signature::PPR) {
        // H_r^-(a, c): y^2 = sum (-1)^k c_k (Cv)^2k x^(r-2k) + 2 C^(r-1) (C v^r - 2u)
        Int Cv = P.C * v;
        for (long k = 0; k <= g; ++k) {
            Int term = cs[(std::size_t)k] * pow_int(Cv * Cv, (unsigned long)k);
            if (k % 2 == 1) term = -term;
            coef[(std::size_t)(r - 2 * k)] = term;
        }
        coef[0] += Int(2) * pow_int(P.C, (unsigned long)(r - 1)) *
                   (P.C * pow_int(v, (unsigned long)r) - Int(2) * u);
    } else {
        // H_r(a, b): y^2 = sum c_k (AB u v)^k x^(r-2k) + (AB)^g (B v^r - A u^r)
        Int ABuv = P.A * P.B * u * v;
        for (long k = 0; k <= g; ++k)
            coef[(std::size_t)(r - 2 * k)] = cs[(std::size_t)k] * pow_int(ABuv, (unsigned long)k);
        coef[0] += pow_int(P.A * P.B, (unsigned long)g) *
                   (P.B * pow_int(v, (unsigned long)r) - P.A * pow_int(u, (unsigned long)r));
    }
    ResidueModel M;
    M.r = r;
    M.q = q;
    M.u = ((u % q) + q) % q;
    M.v = ((v % q) + q) % q;
    M.f = fp_from_polyz(F, PolyZ(std::move(coef)));
    M.all_degenerate = (M.u == 0 && M.v == 0);
    M.singular = M.all_degenerate || fp_deg(M.f) < r || fp_discriminant(F, M.f) == 0;
    return M;
}

}  // namespace gfe

#endif
