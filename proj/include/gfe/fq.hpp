#ifndef GFE_FQ_HPP
#define GFE_FQ_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gfe/int.hpp"
#include "gfe/poly.hpp"

namespace gfe {

/// Arithmetic in F_p for a word-sized prime p.
class PrimeField {
  public:
    explicit PrimeField(std::uint64_t p) : p_(p) {
        if (p < 2 || p >= (1ULL << 62)) throw std::invalid_argument("PrimeField: p out of range");
    }
    std::uint64_t p() const { return p_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return (std::uint64_t)((unsigned __int128)a * b % p_);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t acc = 1 % p_;
        while (e) {
            if (e & 1) acc = mul(acc, a);
            a = mul(a, a);
            e >>= 1;
        }
        return acc;
    }
    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return pow(a, p_ - 2);
    }
    std::uint64_t from_int(const Int& x) const {
        Int m = x % Int((unsigned long)p_);
        if (m < 0) m += Int((unsigned long)p_);
        return m.get_ui();
    }

  private:
    std::uint64_t p_;
};

/// Polynomials over F_p as coefficient vectors, ascending degree, trimmed.
using FpVec = std::vector<std::uint64_t>;

inline void fp_trim(FpVec& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline long fp_deg(const FpVec& f) { return (long)f.size() - 1; }

inline FpVec fp_from_polyz(const PrimeField& F, const PolyZ& p) {
    FpVec out(p.c.size());
    for (std::size_t i = 0; i < p.c.size(); ++i) out[i] = F.from_int(p.c[i]);
    fp_trim(out);
    return out;
}

inline FpVec fp_add(const PrimeField& F, const FpVec& a, const FpVec& b) {
    FpVec r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    fp_trim(r);
    return r;
}

inline FpVec fp_sub(const PrimeField& F, const FpVec& a, const FpVec& b) {
    FpVec r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
    fp_trim(r);
    return r;
}

inline FpVec fp_mul(const PrimeField& F, const FpVec& a, const FpVec& b) {
    if (a.empty() || b.empty()) return {};
    FpVec r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (std::uint64_t)(((unsigned __int128)a[i] * b[j] + r[i + j]) % F.p());
    }
    fp_trim(r);
    return r;
}

inline FpVec fp_scale(const PrimeField& F, const FpVec& a, std::uint64_t s) {
    FpVec r = a;
    for (auto& v : r) v = F.mul(v, s);
    fp_trim(r);
    return r;
}

inline std::pair<FpVec, FpVec> fp_divrem(const PrimeField& F, FpVec a, const FpVec& b) {
    if (b.empty()) throw std::domain_error("fp_divrem: division by zero");
    FpVec q;
    long db = fp_deg(b);
    std::uint64_t binv = F.inv(b.back());
    while (fp_deg(a) >= db) {
        long k = fp_deg(a) - db;
        std::uint64_t f = F.mul(a.back(), binv);
        if ((long)q.size() < k + 1) q.resize(k + 1, 0);
        q[k] = F.add(q[k], f);
        for (long i = 0; i <= db; ++i) a[k + i] = F.sub(a[k + i], F.mul(f, b[i]));
        fp_trim(a);
    }
    fp_trim(q);
    return {q, a};
}

inline FpVec fp_mod(const PrimeField& F, const FpVec& a, const FpVec& m) {
    return fp_divrem(F, a, m).second;
}

inline FpVec fp_monic(const PrimeField& F, const FpVec& a) {
    if (a.empty()) return a;
    return fp_scale(F, a, F.inv(a.back()));
}

inline FpVec fp_gcd(const PrimeField& F, FpVec a, FpVec b) {
    while (!b.empty()) {
        FpVec r = fp_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(F, a);
}

inline FpVec fp_powmod(const PrimeField& F, FpVec base, Int e, const FpVec& m) {
    FpVec acc = {1};
    base = fp_mod(F, base, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = fp_mod(F, fp_mul(F, acc, base), m);
        base = fp_mod(F, fp_mul(F, base, base), m);
        e >>= 1;
    }
    return acc;
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
inline std::tuple<FpVec, FpVec, FpVec> fp_extgcd(const PrimeField& F, FpVec a, FpVec b) {
    FpVec s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (!b.empty()) {
        auto [q, r] = fp_divrem(F, a, b);
        a = std::move(b);
        b = std::move(r);
        FpVec s2 = fp_sub(F, s0, fp_mul(F, q, s1));
        FpVec t2 = fp_sub(F, t0, fp_mul(F, q, t1));
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (!a.empty()) {
        std::uint64_t inv = F.inv(a.back());
        a = fp_scale(F, a, inv);
        s0 = fp_scale(F, s0, inv);
        t0 = fp_scale(F, t0, inv);
    }
    return {a, s0, t0};
}

inline FpVec fp_derivative(const PrimeField& F, const FpVec& f) {
    FpVec r;
    for (std::size_t i = 1; i < f.size(); ++i) r.push_back(F.mul(f[i], i % F.p()));
    fp_trim(r);
    return r;
}

/// Resultant over F_p via the Euclidean remainder sequence.
inline std::uint64_t fp_resultant(const PrimeField& F, FpVec a, FpVec b) {
    if (a.empty() || b.empty()) return 0;
    std::uint64_t res = 1;
    bool swapped_sign = false;
    if (fp_deg(a) < fp_deg(b)) {
        if ((fp_deg(a) & 1) && (fp_deg(b) & 1)) swapped_sign = !swapped_sign;
        std::swap(a, b);
    }
    while (fp_deg(b) > 0) {
        FpVec r = fp_mod(F, a, b);
        long da = fp_deg(a), db = fp_deg(b), dr = fp_deg(r);
        if ((da & 1) && (db & 1)) swapped_sign = !swapped_sign;
        res = F.mul(res, F.pow(b.back(), (std::uint64_t)(da - (dr < 0 ? 0 : dr))));
        if (dr < 0) {
            return 0;  // common factor
        }
        a = std::move(b);
        b = std::move(r);
    }
    res = F.mul(res, F.pow(b[0], (std::uint64_t)fp_deg(a)));
    return swapped_sign ? F.neg(res) : res;
}

/// disc(f) in F_p: (-1)^(d(d-1)/2) res(f, f') / lc(f).
inline std::uint64_t fp_discriminant(const PrimeField& F, const FpVec& f) {
    long d = fp_deg(f);
    if (d < 1) throw std::domain_error("fp_discriminant: degree >= 1 required");
    FpVec fd = fp_derivative(F, f);
    if (fd.empty()) return 0;
    std::uint64_t res = fp_resultant(F, f, fd);
    std::uint64_t out = F.mul(res, F.inv(f.back()));
    if (((d * (d - 1) / 2) & 1) != 0) out = F.neg(out);
    return out;
}

inline bool fp_is_irreducible(const PrimeField& F, const FpVec& f) {
    long n = fp_deg(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    FpVec x = {0, 1};
    // x^(p^n) == x mod f, and gcd(x^(p^(n/l)) - x, f) == 1 for prime l | n
    FpVec xp = fp_powmod(F, x, pow_int(Int((unsigned long)F.p()), (unsigned long)n), f);
    if (fp_sub(F, xp, x) != FpVec{}) return false;
    for (long l = 2; l <= n; ++l) {
        if (n % l != 0 || !is_prime(Int(l))) continue;
        FpVec xq = fp_powmod(F, x, pow_int(Int((unsigned long)F.p()), (unsigned long)(n / l)), f);
        FpVec g = fp_gcd(F, fp_sub(F, xq, x), f);
        if (fp_deg(g) != 0) return false;
    }
    return true;
}

/// Lexicographically first monic irreducible of degree n: low coefficients scanned
/// in base-p counting order (deterministic modulus choice).
inline FpVec fp_first_irreducible(const PrimeField& F, long n) {
    if (n == 1) return {0, 1};
    std::uint64_t p = F.p();
    for (std::uint64_t counter = 0;; ++counter) {
        FpVec f(n + 1, 0);
        std::uint64_t c = counter;
        for (long i = 0; i < n; ++i) {
            f[i] = c % p;
            c /= p;
        }
        if (c != 0) throw std::runtime_error("no irreducible found in range");
        f[n] = 1;
        if (fp_is_irreducible(F, f)) return f;
    }
}

namespace detail {

inline void fp_edf(const PrimeField& F, const FpVec& f, long d, std::vector<FpVec>& out) {
    // equal-degree factorization: f squarefree, all factors of degree d
    if (fp_deg(f) == d) {
        out.push_back(fp_monic(F, f));
        return;
    }
    Int q((unsigned long)F.p());
    if (F.p() == 2) {
        // trace map splitting over F_2: T + T^2 + ... + T^(2^(d-1)) mod f
        for (std::uint64_t counter = 1;; ++counter) {
            FpVec t;
            std::uint64_t c = counter;
            for (long i = 0; c; ++i, c >>= 1)
                if (c & 1) {
                    if ((long)t.size() < i + 2) t.resize(i + 2, 0);
                    t[i + 1] = 1;  // skip constants; they never split
                }
            fp_trim(t);
            FpVec acc = {};
            FpVec cur = fp_mod(F, t, f);
            for (long i = 0; i < d; ++i) {
                acc = fp_add(F, acc, cur);
                cur = fp_mod(F, fp_mul(F, cur, cur), f);
            }
            FpVec g = fp_gcd(F, acc, f);
            if (fp_deg(g) > 0 && fp_deg(g) < fp_deg(f)) {
                fp_edf(F, g, d, out);
                fp_edf(F, fp_divrem(F, f, g).first, d, out);
                return;
            }
        }
    }
    Int e = (pow_int(q, (unsigned long)d) - 1) / 2;
    for (std::uint64_t counter = 0;; ++counter) {
        // trial elements x + c, then higher-degree trials, in a fixed order
        FpVec t;
        if (counter < F.p()) t = {counter % F.p(), 1};
        else {
            std::uint64_t c = counter - F.p();
            t = {c % F.p(), (c / F.p()) % F.p(), 1};
        }
        FpVec h = fp_powmod(F, t, e, f);
        if (h.empty()) continue;
        h[0] = F.sub(h[0], 1);
        fp_trim(h);
        FpVec g = fp_gcd(F, h, f);
        if (fp_deg(g) > 0 && fp_deg(g) < fp_deg(f)) {
            fp_edf(F, g, d, out);
            fp_edf(F, fp_divrem(F, f, g).first, d, out);
            return;
        }
    }
}

}  // namespace detail

/// Factors a squarefree monic polynomial over F_p into monic irreducibles.
inline std::vector<FpVec> fp_factor_squarefree(const PrimeField& F, FpVec f) {
    std::vector<FpVec> out;
    f = fp_monic(F, f);
    FpVec x = {0, 1};
    FpVec xp = x;
    Int q((unsigned long)F.p());
    long d = 0;
    while (fp_deg(f) > 0) {
        ++d;
        if (2 * d > fp_deg(f)) {
            out.push_back(f);
            break;
        }
        xp = fp_powmod(F, xp, q, f);
        FpVec g = fp_gcd(F, fp_sub(F, xp, x), f);
        if (fp_deg(g) > 0) {
            detail::fp_edf(F, g, d, out);
            f = fp_divrem(F, f, g).first;
            xp = fp_mod(F, xp, f);
        }
    }
    return out;
}

inline Int fp_to_int(const FpVec&) = delete;

/// Elements of F_{p^n} as polynomials of degree < n modulo a fixed irreducible.
class ExtField {
  public:
    using Elt = FpVec;

    ExtField(std::uint64_t p, long n)
        : F_(p), n_(n), modulus_(n == 1 ? FpVec{0, 1} : fp_first_irreducible(F_, n)) {}
    ExtField(std::uint64_t p, long n, FpVec modulus) : F_(p), n_(n), modulus_(std::move(modulus)) {
        if (fp_deg(modulus_) != n) throw std::invalid_argument("ExtField: modulus degree mismatch");
    }

    const PrimeField& base() const { return F_; }
    long degree() const { return n_; }
    const FpVec& modulus() const { return modulus_; }
    Int order() const { return pow_int(Int((unsigned long)F_.p()), (unsigned long)n_); }

    Elt zero() const { return {}; }
    Elt one() const { return {1}; }
    Elt from_base(std::uint64_t v) const { return v % F_.p() == 0 ? Elt{} : Elt{v % F_.p()}; }
    Elt from_int(const Int& v) const { return from_base(F_.from_int(v)); }

    bool is_zero(const Elt& a) const { return a.empty(); }
    Elt add(const Elt& a, const Elt& b) const { return fp_add(F_, a, b); }
    Elt sub(const Elt& a, const Elt& b) const { return fp_sub(F_, a, b); }
    Elt neg(const Elt& a) const { return fp_sub(F_, {}, a); }
    Elt mul(const Elt& a, const Elt& b) const {
        if (n_ == 1) return a.empty() || b.empty() ? Elt{} : Elt{F_.mul(a[0], b[0])};
        return fp_mod(F_, fp_mul(F_, a, b), modulus_);
    }
    Elt pow(const Elt& a, Int e) const {
        Elt acc = one(), base = a;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }
    Elt inv(const Elt& a) const {
        if (a.empty()) throw std::domain_error("inverse of zero");
        return pow(a, order() - 2);
    }
    /// Frobenius x -> x^p.
    Elt frobenius(const Elt& a) const { return pow(a, Int((unsigned long)F_.p())); }

    /// Integer rank of an element in counting order; inverse of element_at.
    std::size_t rank(const Elt& a) const {
        std::size_t out = 0;
        for (std::size_t i = a.size(); i-- > 0;) out = out * F_.p() + a[i];
        return out;
    }
    Elt element_at(std::size_t k) const {
        Elt e;
        while (k) {
            e.push_back(k % F_.p());
            k /= F_.p();
        }
        return e;
    }
    std::size_t size() const {
        Int o = order();
        if (!o.fits_ulong_p()) throw std::overflow_error("field too large to enumerate");
        return o.get_ui();
    }

  private:
    PrimeField F_;
    long n_;
    FpVec modulus_;
};

}  // namespace gfe

#endif
