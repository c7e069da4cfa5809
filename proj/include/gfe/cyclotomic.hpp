#ifndef GFE_CYCLOTOMIC_HPP
#define GFE_CYCLOTOMIC_HPP

#include <memory>
#include <string>
#include <vector>

#include "gfe/fq.hpp"
#include "gfe/int.hpp"
#include "gfe/poly.hpp"

namespace gfe {

/// K = Q(zeta_r + zeta_r^-1), the maximal totally real subfield of Q(zeta_r).
/// h_r is expanded symbolically from omega_j = zeta^j + zeta^-j inside the
/// group ring Z[y]/(y^r - 1); the Chebyshev-style polynomials e_j with
/// e_j(omega) = omega_j come from e_0 = 2, e_1 = x, e_j = x e_{j-1} - e_{j-2}.
class RealCyclotomicField {
  public:
    explicit RealCyclotomicField(long r) : r_(r) {
        if (r < 5 || !is_prime(Int(r))) throw std::invalid_argument("r must be an odd prime >= 5");
        g_ = (r - 1) / 2;
        build_h();
        build_sigma_images();
        build_power_traces();
    }

    long r() const { return r_; }
    long degree() const { return g_; }
    const PolyZ& h() const { return h_; }

    /// e_k(x) reduced mod h_r: the image of omega under sigma_k.
    const PolyZ& omega_image(long k) const {
        long kk = ((k % r_) + r_) % r_;
        if (kk == 0) throw std::invalid_argument("galois index divisible by r");
        if (kk > g_) kk = r_ - kk;  // sigma_k depends only on the class of +-k
        return sigma_[kk - 1];
    }

    /// Trace of omega^i for 0 <= i < degree (Newton power sums of h_r).
    const Int& power_trace(long i) const { return ptr_[i]; }

  private:
    long r_, g_;
    PolyZ h_;
    std::vector<PolyZ> sigma_;  // sigma_[k-1] = e_k mod h, k = 1..g
    std::vector<Int> ptr_;

    // group ring Z[y]/(y^r - 1)
    using GR = std::vector<Int>;
    GR gr_mul(const GR& a, const GR& b) const {
        GR out(r_, 0);
        for (long i = 0; i < r_; ++i) {
            if (a[i] == 0) continue;
            for (long j = 0; j < r_; ++j) out[(i + j) % r_] += a[i] * b[j];
        }
        return out;
    }

    void build_h() {
        // product over j of (X - omega_j), coefficients in the group ring
        std::vector<GR> coeffs(1, GR(r_, 0));
        coeffs[0][0] = 1;  // polynomial "1"
        for (long j = 1; j <= g_; ++j) {
            GR omega_j(r_, 0);
            omega_j[j % r_] += 1;
            omega_j[(r_ - j) % r_] += 1;
            std::vector<GR> next(coeffs.size() + 1, GR(r_, 0));
            for (std::size_t d = 0; d < coeffs.size(); ++d) {
                for (long i = 0; i < r_; ++i) next[d + 1][i] += coeffs[d][i];
                GR prod = gr_mul(coeffs[d], omega_j);
                for (long i = 0; i < r_; ++i) next[d][i] -= prod[i];
            }
            coeffs = std::move(next);
        }
        std::vector<Int> hc(coeffs.size());
        for (std::size_t d = 0; d < coeffs.size(); ++d) {
            const GR& v = coeffs[d];
            for (long i = 2; i < r_; ++i)
                if (v[i] != v[1]) throw std::logic_error("h_r expansion not rational");
            hc[d] = v[0] - v[1];
        }
        h_ = PolyZ(std::move(hc));
        if (h_.degree() != g_ || h_.lc() != 1) throw std::logic_error("h_r malformed");
    }

    void build_sigma_images() {
        PolyZ e_prev = PolyZ::constant(Int(2));  // e_0
        PolyZ e_cur = PolyZ::x_power(1);         // e_1
        sigma_.push_back(divrem_monic(e_cur, h_).second);
        for (long j = 2; j <= g_; ++j) {
            PolyZ e_next = PolyZ::x_power(1) * e_cur - e_prev;
            e_prev = e_cur;
            e_cur = divrem_monic(e_next, h_).second;
            sigma_.push_back(e_cur);
        }
    }

    void build_power_traces() {
        // Newton: p_0 = g; p_i + sum_{j<i} h[g-j] p_{i-j} + i*h[g-i] = 0 (monic h)
        ptr_.assign(g_, 0);
        ptr_[0] = g_;
        for (long i = 1; i < g_; ++i) {
            Int s = Int(i) * h_.coeff(g_ - i);
            for (long j = 1; j < i; ++j) s += h_.coeff(g_ - j) * ptr_[i - j];
            ptr_[i] = -s;
        }
    }
};

/// Element of O_K = Z[omega] in the power basis 1, omega, ..., omega^(g-1).
struct OKElement {
    std::shared_ptr<const RealCyclotomicField> field;
    std::vector<Int> coords;

    OKElement() = default;
    OKElement(std::shared_ptr<const RealCyclotomicField> f, std::vector<Int> c)
        : field(std::move(f)), coords(std::move(c)) {
        coords.resize(field->degree(), 0);
    }
    static OKElement from_int(std::shared_ptr<const RealCyclotomicField> f, const Int& v) {
        std::vector<Int> c(f->degree(), 0);
        c[0] = v;
        return OKElement(std::move(f), std::move(c));
    }
    static OKElement omega(std::shared_ptr<const RealCyclotomicField> f) {
        std::vector<Int> c(f->degree(), 0);
        if (f->degree() > 1) c[1] = 1;
        else c[0] = 0;  // degenerate, degree-1 never occurs for r >= 5
        return OKElement(std::move(f), std::move(c));
    }

    PolyZ as_poly() const { return PolyZ(coords); }
    bool is_zero() const {
        for (auto& v : coords)
            if (v != 0) return false;
        return true;
    }
    bool operator==(const OKElement& o) const { return coords == o.coords; }

    OKElement operator+(const OKElement& o) const {
        std::vector<Int> c = coords;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coords[i];
        return OKElement(field, std::move(c));
    }
    OKElement operator-(const OKElement& o) const {
        std::vector<Int> c = coords;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.coords[i];
        return OKElement(field, std::move(c));
    }
    OKElement operator-() const {
        std::vector<Int> c = coords;
        for (auto& v : c) v = -v;
        return OKElement(field, std::move(c));
    }
    OKElement operator*(const OKElement& o) const {
        PolyZ prod = as_poly() * o.as_poly();
        PolyZ red = divrem_monic(prod, field->h()).second;
        std::vector<Int> c(field->degree(), 0);
        for (long i = 0; i <= red.degree(); ++i) c[i] = red.coeff(i);
        return OKElement(field, std::move(c));
    }
    OKElement operator*(const Int& s) const {
        std::vector<Int> c = coords;
        for (auto& v : c) v *= s;
        return OKElement(field, std::move(c));
    }

    Int trace() const {
        Int t = 0;
        for (long i = 0; i < field->degree(); ++i) t += coords[i] * field->power_trace(i);
        return t;
    }
    Int norm() const {
        if (is_zero()) return 0;
        return resultant(field->h(), as_poly());
    }

    std::string str() const { return as_poly().str("w"); }
};

/// sigma_k : omega -> omega_k, a ring automorphism; depends only on +-k mod r.
inline OKElement galois_apply(const OKElement& a, long k) {
    const auto& f = a.field;
    PolyZ composed = a.as_poly().compose(f->omega_image(k));
    PolyZ red = divrem_monic(composed, f->h()).second;
    std::vector<Int> c(f->degree(), 0);
    for (long i = 0; i <= red.degree(); ++i) c[i] = red.coeff(i);
    return OKElement(f, std::move(c));
}

/// A place of K above the rational prime q.
struct PrimeIdealK {
    Int q;
    long f = 1;      // residue degree
    long index = 1;  // 1-based ordinal in the canonical ordering
    PolyZ factor;    // irreducible factor of h_r mod q (x - 2 at the ramified place)
    bool ramified = false;

    Int norm() const { return pow_int(q, (unsigned long)f); }
    std::string label() const {
        return q.get_str() + "." + std::to_string(f) + "." + std::to_string(index);
    }
};

/// Factors q in O_K. Places are ordered by the lexicographically smallest
/// coefficient representation of their defining factor of h_r mod q; this
/// ordering is part of the newform-file contract.
inline std::vector<PrimeIdealK> split_prime(const std::shared_ptr<const RealCyclotomicField>& K,
                                            const Int& q) {
    if (!is_prime(q)) throw std::invalid_argument("split_prime: q must be prime");
    std::vector<PrimeIdealK> out;
    if (q == K->r()) {
        PrimeIdealK P;
        P.q = q;
        P.f = 1;
        P.index = 1;
        P.factor = PolyZ({Int(((-2 % q) + q) % q), Int(1)});  // x - 2 mod r
        P.ramified = true;
        out.push_back(P);
        return out;
    }
    PrimeField F(q.get_ui());
    FpVec h = fp_from_polyz(F, K->h());
    auto factors = fp_factor_squarefree(F, h);
    std::sort(factors.begin(), factors.end());
    long expected_f = ord_mod(q, Int(K->r()));
    expected_f = expected_f / (expected_f % 2 == 0 ? 2 : 1);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        PrimeIdealK P;
        P.q = q;
        P.f = fp_deg(factors[i]);
        P.index = (long)i + 1;
        std::vector<Int> c(factors[i].size());
        for (std::size_t j = 0; j < factors[i].size(); ++j) c[j] = Int((unsigned long)factors[i][j]);
        P.factor = PolyZ(std::move(c));
        if (P.f != expected_f) throw std::logic_error("split_prime: residue degree mismatch");
        out.push_back(P);
    }
    if ((long)out.size() * expected_f != K->degree())
        throw std::logic_error("split_prime: sum e_i f_i != degree");
    return out;
}

/// Index (0-based, into split_prime's canonical list) of sigma_k(places[i]).
inline std::vector<std::size_t> galois_place_permutation(
    const std::shared_ptr<const RealCyclotomicField>& K, const std::vector<PrimeIdealK>& places,
    long k) {
    if (places.size() == 1) return {0};
    const Int& q = places[0].q;
    PrimeField F(q.get_ui());
    FpVec ek = fp_from_polyz(F, K->omega_image(k));
    FpVec h = fp_from_polyz(F, K->h());
    std::vector<std::size_t> perm(places.size());
    for (std::size_t i = 0; i < places.size(); ++i) {
        // sigma_k(q, F_i(omega)) = (q, F_i(e_k(omega))); find the factor it lands in
        FpVec Fi = fp_from_polyz(F, places[i].factor);
        // compose F_i(e_k(x)) mod h mod q
        FpVec acc = {};
        for (std::size_t d = Fi.size(); d-- > 0;) {
            acc = fp_mod(F, fp_mul(F, acc, ek), h);
            if (Fi[d] != 0) acc = fp_add(F, acc, FpVec{Fi[d]});
        }
        bool found = false;
        for (std::size_t j = 0; j < places.size(); ++j) {
            FpVec Gj = fp_from_polyz(F, places[j].factor);
            if (fp_mod(F, acc, Gj).empty()) {
                perm[i] = j;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("galois_place_permutation: image not found");
    }
    return perm;
}

/// Convenience: builds the field as a shared pointer (cached per r).
inline std::shared_ptr<const RealCyclotomicField> build_field(long r) {
    return std::make_shared<const RealCyclotomicField>(r);
}

}  // namespace gfe

#endif
