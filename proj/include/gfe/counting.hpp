#ifndef GFE_COUNTING_HPP
#define GFE_COUNTING_HPP

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "gfe/cyclotomic.hpp"
#include "gfe/fq.hpp"
#include "gfe/frey.hpp"
#include "gfe/poly.hpp"

namespace gfe {

/// y^2 = f(x) over F_(q^n), f with prime-field coefficients (every model in
/// this pipeline arises by reducing an integer model mod q).
struct CurveOverFq {
    Int q;
    long n = 1;
    FpVec f;
    long genus() const { return (fp_deg(f) % 2 == 1) ? (fp_deg(f) - 1) / 2 : (fp_deg(f) - 2) / 2; }
};

inline CurveOverFq curve_from_residue(const ResidueModel& M, long n = 1) {
    return CurveOverFq{M.q, n, M.f};
}

/// true iff disc(f) = 0 in F_q (equivalently in any extension).
struct SingularityReport {
    bool singular;
    std::string reason;
};

inline SingularityReport is_singular(const CurveOverFq& C) {
    PrimeField F(C.q.get_ui());
    if (fp_deg(C.f) < 1) return {true, "degenerate polynomial"};
    if (fp_discriminant(F, C.f) == 0) return {true, "disc(f) = 0 mod q"};
    return {false, ""};
}

namespace detail {

/// Allocation-free arithmetic in F_(q^d) for the counting hot loop, with the
/// field's square table cached across curves. Element encoding (counting-order
/// rank) and modulus match ExtField.
struct FlatField {
    static constexpr long kMaxDeg = 8;
    std::uint64_t q;
    long d;
    std::array<std::uint64_t, kMaxDeg> mod_low{};  // lower coefficients of the monic modulus
    std::vector<std::uint8_t> square_table;        // indexed by rank
    std::size_t size;

    using Elt = std::array<std::uint64_t, kMaxDeg>;

    FlatField(std::uint64_t q_, long d_) : q(q_), d(d_) {
        if (d > kMaxDeg) throw std::invalid_argument("FlatField: extension degree too large");
        PrimeField F(q);
        FpVec m = (d == 1) ? FpVec{0, 1} : fp_first_irreducible(F, d);
        for (long i = 0; i < d; ++i) mod_low[(std::size_t)i] = i < (long)m.size() ? m[(std::size_t)i] : 0;
        std::size_t s = 1;
        for (long i = 0; i < d; ++i) s *= (std::size_t)q;
        size = s;
        square_table.assign(size, 0);
        Elt y{}, y2;
        for (std::size_t k = 0; k < size; ++k) {
            decode(k, y);
            mul(y, y, y2);
            square_table[rank(y2)] = 1;
        }
    }

    void decode(std::size_t k, Elt& out) const {
        for (long i = 0; i < d; ++i) {
            out[(std::size_t)i] = k % q;
            k /= q;
        }
    }
    std::size_t rank(const Elt& a) const {
        std::size_t out = 0;
        for (long i = d; i-- > 0;) out = out * q + a[(std::size_t)i];
        return out;
    }
    void mul(const Elt& a, const Elt& b, Elt& out) const {
        std::array<unsigned __int128, 2 * kMaxDeg> acc{};
        for (long i = 0; i < d; ++i) {
            if (a[(std::size_t)i] == 0) continue;
            for (long j = 0; j < d; ++j)
                acc[(std::size_t)(i + j)] += (unsigned __int128)a[(std::size_t)i] * b[(std::size_t)j];
        }
        // reduce x^(d+k) = -mod_low * x^k from the top down
        for (long i = 2 * d - 2; i >= d; --i) {
            std::uint64_t c = (std::uint64_t)(acc[(std::size_t)i] % q);
            if (c == 0) continue;
            std::uint64_t neg = q - c;
            for (long j = 0; j < d; ++j)
                acc[(std::size_t)(i - d + j)] += (unsigned __int128)neg * mod_low[(std::size_t)j];
        }
        for (long i = 0; i < d; ++i) out[(std::size_t)i] = (std::uint64_t)(acc[(std::size_t)i] % q);
    }
};

inline const FlatField& flat_field(std::uint64_t q, long d) {
    static std::map<std::pair<std::uint64_t, long>, std::unique_ptr<FlatField>> registry;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(q, d);
    auto it = registry.find(key);
    if (it == registry.end()) it = registry.emplace(key, std::make_unique<FlatField>(q, d)).first;
    return *it->second;
}

}  // namespace detail

/// #C(F_(q^(n*m))) by character-sum enumeration with a precomputed square
/// table; the point(s) at infinity follow the degree/leading-coefficient rule.
inline Int count_points(const CurveOverFq& C, long m = 1, bool allow_singular = false) {
    if (C.q == 2) throw std::invalid_argument("count_points: even q unsupported");
    if (!allow_singular && is_singular(C).singular)
        throw std::domain_error("count_points: singular curve (pass allow_singular to override)");
    const detail::FlatField& E = detail::flat_field(C.q.get_ui(), C.n * m);
    long deg = fp_deg(C.f);
    detail::FlatField::Elt x{}, v{}, t{};
    long total_sq = 0, total_zero = 0;
    for (std::size_t k = 0; k < E.size; ++k) {
        E.decode(k, x);
        // Horner with prime-field coefficients
        v.fill(0);
        for (long i = deg; i >= 0; --i) {
            E.mul(v, x, t);
            t[0] += C.f[(std::size_t)i];
            if (t[0] >= E.q) t[0] -= E.q;
            v = t;
        }
        bool zero = true;
        for (long i = 0; i < E.d; ++i)
            if (v[(std::size_t)i]) zero = false;
        if (zero) ++total_zero;
        else if (E.square_table[E.rank(v)]) ++total_sq;
    }
    Int total = Int(2) * total_sq + total_zero;
    // infinity: one point for odd degree, two or zero for even degree
    if (deg % 2 == 1) total += 1;
    else {
        detail::FlatField::Elt lc{};
        lc[0] = C.f.back() % E.q;
        total += E.square_table[E.rank(lc)] ? 2 : 0;
    }
    return total;
}

/// Numerator of the zeta function: degree-2g integer polynomial with the Weil
/// functional equation; base size Q = q^n.
struct LPolynomial {
    Int Q;
    std::vector<Int> c;  // c[0] = 1, ..., c[2g]
    long genus() const { return ((long)c.size() - 1) / 2; }

    bool functional_equation_holds() const {
        long g = genus();
        for (long i = 0; i <= g; ++i) {
            if (c[(std::size_t)(2 * g - i)] != pow_int(Q, (unsigned long)(g - i)) * c[(std::size_t)i])
                return false;
        }
        return true;
    }

    /// Power sums of the inverse roots, p_1..p_k (Newton).
    std::vector<Int> power_sums(long k) const {
        std::vector<Int> p((std::size_t)k + 1, 0);
        for (long m = 1; m <= k; ++m) {
            Int s = (m < (long)c.size()) ? Int(m) * c[(std::size_t)m] : Int(0);
            for (long i = 1; i < m && i < (long)c.size(); ++i) s += c[(std::size_t)i] * p[(std::size_t)(m - i)];
            p[(std::size_t)m] = -s;
        }
        p.erase(p.begin());
        return p;
    }

    /// #C(F_(Q^m)) implied by this polynomial.
    Int implied_count(long m) const {
        auto p = power_sums(m);
        return pow_int(Q, (unsigned long)m) + 1 - p[(std::size_t)m - 1];
    }

    /// Weil bound check, exact: (N_m - Q^m - 1)^2 <= 4 g^2 Q^m for m <= 2g.
    bool weil_bound_holds() const {
        long g = genus();
        auto p = power_sums(2 * g);
        for (long m = 1; m <= 2 * g; ++m) {
            Int dev = p[(std::size_t)m - 1];
            if (dev * dev > Int(4) * Int(g) * Int(g) * pow_int(Q, (unsigned long)m)) return false;
        }
        return true;
    }
};

namespace detail {

/// L-polynomial from the counts N_1..N_g over F_Q, ..., F_(Q^g).
inline LPolynomial lpoly_from_counts(const Int& Q, const std::vector<Int>& counts, long g) {
    std::vector<Int> p((std::size_t)g + 1, 0);  // power sums
    for (long m = 1; m <= g; ++m) p[(std::size_t)m] = pow_int(Q, (unsigned long)m) + 1 - counts[(std::size_t)m - 1];
    std::vector<Int> e((std::size_t)g + 1, 0);  // elementary symmetric
    e[0] = 1;
    for (long k = 1; k <= g; ++k) {
        Int s = 0;
        for (long i = 1; i < k; ++i) {
            Int term = e[(std::size_t)i] * p[(std::size_t)(k - i)];
            if (i % 2 == 0) s -= term;
            else s += term;
        }
        Int num = p[(std::size_t)k] - s;
        if (k % 2 == 0) num = -num;
        if (!divides(Int(k), num)) throw std::logic_error("lpolynomial: Newton identity not integral");
        e[(std::size_t)k] = exact_div(num, Int(k));
    }
    LPolynomial L;
    L.Q = Q;
    L.c.assign((std::size_t)(2 * g + 1), 0);
    L.c[0] = 1;
    for (long k = 1; k <= g; ++k) {
        Int v = e[(std::size_t)k];
        if (k % 2 == 1) v = -v;
        L.c[(std::size_t)k] = v;
    }
    for (long i = 0; i < g; ++i)
        L.c[(std::size_t)(2 * g - i)] = pow_int(Q, (unsigned long)(g - i)) * L.c[(std::size_t)i];
    if (!L.weil_bound_holds()) throw std::logic_error("lpolynomial: Weil bound violated (counting bug)");
    return L;
}

/// Replaces the inverse roots alpha by alpha^k (base change of degree k).
inline LPolynomial lpoly_base_change(const LPolynomial& L, long k) {
    if (k == 1) return L;
    long g = L.genus();
    auto p = L.power_sums(2 * g * k);
    std::vector<Int> pk((std::size_t)(2 * g) + 1, 0);
    for (long m = 1; m <= 2 * g; ++m) pk[(std::size_t)m] = p[(std::size_t)(m * k) - 1];
    // rebuild from power sums
    std::vector<Int> l((std::size_t)(2 * g) + 1, 0);
    l[0] = 1;
    for (long m = 1; m <= 2 * g; ++m) {
        Int s = pk[(std::size_t)m];
        for (long i = 1; i < m; ++i) s += l[(std::size_t)i] * pk[(std::size_t)(m - i)];
        if (!divides(Int(m), s)) throw std::logic_error("lpoly_base_change: not integral");
        l[(std::size_t)m] = -exact_div(s, Int(m));
    }
    LPolynomial out;
    out.Q = pow_int(L.Q, (unsigned long)k);
    out.c = std::move(l);
    return out;
}

}  // namespace detail

/// L-polynomial of the curve over F_(q^n); counts over the prime field drive
/// the computation, the base change is exact root-power arithmetic.
inline LPolynomial lpolynomial(const CurveOverFq& C) {
    long g = C.genus();
    CurveOverFq base{C.q, 1, C.f};
    std::vector<Int> counts;
    for (long m = 1; m <= g; ++m) counts.push_back(count_points(base, m));
    LPolynomial L = detail::lpoly_from_counts(C.q, counts, g);
    return detail::lpoly_base_change(L, C.n);
}

/// The "trace polynomial": monic of degree g whose roots are the g real
/// numbers t_j = alpha_j + Q/alpha_j pairing each inverse root with its Weil
/// partner. Exact integer construction from the L-polynomial.
inline PolyZ trace_polynomial(const LPolynomial& L) {
    long g = L.genus();
    auto p = L.power_sums(g);
    std::vector<Int> T((std::size_t)g + 1, 0);
    for (long k = 1; k <= g; ++k) {
        Int sum = 0;
        for (long m = 0; 2 * m < k; ++m)
            sum += binomial((unsigned long)k, (unsigned long)m) * pow_int(L.Q, (unsigned long)m) *
                   p[(std::size_t)(k - 2 * m) - 1];
        if (k % 2 == 0)
            sum += binomial((unsigned long)k, (unsigned long)(k / 2)) *
                   pow_int(L.Q, (unsigned long)(k / 2)) * Int(g);
        T[(std::size_t)k] = sum;
    }
    // Newton back to elementary symmetric functions
    std::vector<Int> E((std::size_t)g + 1, 0);
    E[0] = 1;
    for (long k = 1; k <= g; ++k) {
        Int s = 0;
        for (long i = 1; i < k; ++i) {
            Int term = E[(std::size_t)i] * T[(std::size_t)(k - i)];
            if (i % 2 == 0) s -= term;
            else s += term;
        }
        Int num = T[(std::size_t)k] - s;
        if (k % 2 == 0) num = -num;
        if (!divides(Int(k), num)) throw std::logic_error("trace_polynomial: non-integral data");
        E[(std::size_t)k] = exact_div(num, Int(k));
    }
    std::vector<Int> chi((std::size_t)g + 1, 0);
    for (long k = 0; k <= g; ++k) {
        Int v = E[(std::size_t)(g - k)];
        if ((g - k) % 2 == 1) v = -v;
        chi[(std::size_t)k] = v;
    }
    return PolyZ(std::move(chi));
}

struct FrobTrace {
    PrimeIdealK place;
    OKElement a;
    LPolynomial L;  // the verified factorisation target
};

namespace detail {

/// Exact check: prod_k (1 - sigma_k(a) T + Q T^2) = L(T) in O_K[T].
inline bool verify_rm_factorisation(const OKElement& a, const LPolynomial& L) {
    auto K = a.field;
    long g = K->degree();
    std::vector<OKElement> prod = {OKElement::from_int(K, 1)};
    for (long k = 1; k <= g; ++k) {
        OKElement sk = galois_apply(a, k);
        // multiply prod by (1 - sk T + Q T^2)
        std::vector<OKElement> next((std::size_t)prod.size() + 2, OKElement::from_int(K, 0));
        for (std::size_t i = 0; i < prod.size(); ++i) {
            next[i] = next[i] + prod[i];
            next[i + 1] = next[i + 1] - prod[i] * sk;
            next[i + 2] = next[i + 2] + prod[i] * L.Q;
        }
        prod = std::move(next);
    }
    if (prod.size() != L.c.size()) return false;
    for (std::size_t i = 0; i < prod.size(); ++i) {
        // coefficient must be the rational integer L.c[i]
        if (prod[i].coords[0] != L.c[i]) return false;
        for (long j = 1; j < g; ++j)
            if (prod[i].coords[(std::size_t)j] != 0) return false;
    }
    return true;
}

}  // namespace detail

/// Recovers a_frak(J) in Z[omega] from the L-polynomial over the residue field
/// of the place. The real roots of the trace polynomial are matched against
/// the embeddings of K at 256-bit precision; the result is accepted only after
/// the exact product verification, so rounding can never corrupt the answer.
/// The returned representative is well-defined up to Gal(K/Q).
inline FrobTrace rm_trace(const std::shared_ptr<const RealCyclotomicField>& K,
                          const PrimeIdealK& place, const ResidueModel& model) {
    if (model.singular) throw std::domain_error("rm_trace: singular residue model");
    if (Int(model.r) != Int(2L * K->degree() + 1))
        throw std::invalid_argument("rm_trace: model genus does not match the field");
    CurveOverFq C = curve_from_residue(model, place.f);
    LPolynomial L = lpolynomial(C);
    long g = K->degree();
    if (g == 2) {
        // quadratic field: a = x0 + x1 w solves Tr(a) = -c1, Nm(a) = c2 - 2Q
        // exactly, via (Tr^2 - 4 Nm) = x1^2 disc(h)
        Int T = -L.c[1];
        Int N = L.c[2] - 2 * L.Q;
        Int D = discriminant(K->h());
        Int h1 = K->h().coeff(1);
        Int num = T * T - 4 * N;
        if (divides(D, num)) {
            Int sq = exact_div(num, D);
            Int x1;
            if (sq >= 0 && mpz_root(x1.get_mpz_t(), sq.get_mpz_t(), 2) != 0) {
                for (Int s : {x1, Int(-x1)}) {
                    Int twice_x0 = T + h1 * s;
                    if (!divides(Int(2), twice_x0)) continue;
                    OKElement a(K, {exact_div(twice_x0, Int(2)), s});
                    if (detail::verify_rm_factorisation(a, L)) {
                        FrobTrace out;
                        out.place = place;
                        out.a = a;
                        out.L = L;
                        return out;
                    }
                }
            }
        }
        throw std::domain_error("RM factorization failed: no verified representative");
    }
    PolyZ chi = trace_polynomial(L);
    auto roots = real_roots(to_poly_q(chi), 256);
    long total = 0;
    for (auto& rt : roots) total += rt.multiplicity;
    if (total != g) throw std::domain_error("RM factorization failed: trace polynomial not totally real");
    // flatten with multiplicity, ascending
    std::vector<Rat> ts;
    for (auto& rt : roots)
        for (long i = 0; i < rt.multiplicity; ++i) ts.push_back(rt.approx);
    // embeddings: omega_k is the k-th largest root of h_r (omega_k = 2cos(2 pi k/r))
    auto omega_roots = real_roots(to_poly_q(K->h()), 256);
    if ((long)omega_roots.size() != g) throw std::logic_error("h_r is not totally real?");
    std::vector<Rat> w;
    for (auto it = omega_roots.rbegin(); it != omega_roots.rend(); ++it) w.push_back(it->approx);
    // try assignments of the t-multiset to embedding slots
    std::vector<std::size_t> idx(ts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end());
    std::vector<Rat> assigned((std::size_t)g);
    do {
        // solve sum_i x_i w_k^i = t_idx[k] by exact elimination on approximations
        std::vector<std::vector<Rat>> M((std::size_t)g, std::vector<Rat>((std::size_t)g + 1));
        for (long k = 0; k < g; ++k) {
            Rat pw(1);
            for (long i = 0; i < g; ++i) {
                M[(std::size_t)k][(std::size_t)i] = pw;
                pw *= w[(std::size_t)k];
            }
            M[(std::size_t)k][(std::size_t)g] = ts[idx[(std::size_t)k]];
        }
        bool ok = true;
        for (long col = 0; col < g && ok; ++col) {
            long piv = -1;
            for (long row = col; row < g; ++row)
                if (M[(std::size_t)row][(std::size_t)col] != 0) {
                    piv = row;
                    break;
                }
            if (piv < 0) {
                ok = false;
                break;
            }
            std::swap(M[(std::size_t)col], M[(std::size_t)piv]);
            for (long row = 0; row < g; ++row) {
                if (row == col) continue;
                Rat fmul = M[(std::size_t)row][(std::size_t)col] / M[(std::size_t)col][(std::size_t)col];
                for (long j = col; j <= g; ++j)
                    M[(std::size_t)row][(std::size_t)j] -= fmul * M[(std::size_t)col][(std::size_t)j];
            }
        }
        if (!ok) continue;
        std::vector<Int> coords((std::size_t)g);
        for (long i = 0; i < g; ++i) {
            Rat xi = M[(std::size_t)i][(std::size_t)g] / M[(std::size_t)i][(std::size_t)i];
            // round to nearest integer (ties away from zero)
            Rat shifted = xi + (xi < 0 ? Rat(-1, 2) : Rat(1, 2));
            coords[(std::size_t)i] = Int(shifted.get_num()) / Int(shifted.get_den());
        }
        OKElement a(K, coords);
        if (detail::verify_rm_factorisation(a, L)) {
            FrobTrace out;
            out.place = place;
            out.a = a;
            out.L = L;
            return out;
        }
    } while (std::next_permutation(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return ts[x] < ts[y];
    }));
    throw std::domain_error("RM factorization failed: no verified representative");
}

}  // namespace gfe

#endif
