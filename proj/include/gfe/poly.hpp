#ifndef GFE_POLY_HPP
#define GFE_POLY_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfe/int.hpp"

namespace gfe {

/// Dense univariate polynomial, coefficients ascending by degree.
template <class T>
struct Poly {
    std::vector<T> c;

    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(const T& v) {
        Poly p;
        if (!(v == 0)) p.c = {v};
        return p;
    }
    static Poly x_power(std::size_t k, const T& lead = T(1)) {
        Poly p;
        p.c.assign(k + 1, T(0));
        p.c[k] = lead;
        p.trim();
        return p;
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    long degree() const { return c.empty() ? -1 : (long)c.size() - 1; }
    const T& lc() const {
        if (c.empty()) throw std::domain_error("lc of zero polynomial");
        return c.back();
    }
    T coeff(std::size_t i) const { return i < c.size() ? c[i] : T(0); }

    bool operator==(const Poly& o) const { return c == o.c; }

    Poly operator+(const Poly& o) const {
        Poly r;
        r.c.resize(std::max(c.size(), o.c.size()), T(0));
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
        r.trim();
        return r;
    }
    Poly operator-(const Poly& o) const {
        Poly r;
        r.c.resize(std::max(c.size(), o.c.size()), T(0));
        for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] -= o.c[i];
        r.trim();
        return r;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& v : r.c) v = -v;
        return r;
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        Poly r;
        r.c.assign(c.size() + o.c.size() - 1, T(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        r.trim();
        return r;
    }
    Poly operator*(const T& s) const {
        Poly r = *this;
        for (auto& v : r.c) v *= s;
        r.trim();
        return r;
    }

    template <class U>
    U eval(const U& x) const {
        U acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + U(c[i]);
        return acc;
    }

    Poly derivative() const {
        Poly r;
        if (c.size() <= 1) return r;
        r.c.resize(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * T((long)i);
        r.trim();
        return r;
    }

    /// Substitution p(q(x)).
    Poly compose(const Poly& q) const {
        Poly acc;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * q + Poly::constant(c[i]);
        return acc;
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = c.size(); i-- > 0;) {
            if (c[i] == 0) continue;
            std::string term = to_string(c[i]);
            if (i > 0) {
                if (term == "1") term = "";
                else if (term == "-1") term = "-";
                term += var;
                if (i > 1) term += "^" + std::to_string(i);
            }
            if (!s.empty()) {
                if (!term.empty() && term[0] == '-') s += " - ", term = term.substr(1);
                else s += " + ";
            }
            s += term;
        }
        return s;
    }
};

using PolyZ = Poly<Int>;
using PolyQ = Poly<Rat>;

inline PolyQ to_poly_q(const PolyZ& p) {
    std::vector<Rat> c(p.c.size());
    for (std::size_t i = 0; i < p.c.size(); ++i) c[i] = Rat(p.c[i]);
    return PolyQ(std::move(c));
}

/// Clears denominators; returns primitive integer polynomial with the same roots.
inline PolyZ clear_denominators(const PolyQ& p) {
    Int l = 1;
    for (auto& v : p.c) {
        Int den(v.get_den());
        l = l / gcd_int(l, den) * den;
    }
    std::vector<Int> c(p.c.size());
    for (std::size_t i = 0; i < p.c.size(); ++i) {
        Rat t = p.c[i] * Rat(l);
        c[i] = Int(t.get_num());
    }
    return PolyZ(std::move(c));
}

/// Division with remainder over Q; divisor must be nonzero.
inline std::pair<PolyQ, PolyQ> divrem(const PolyQ& a, const PolyQ& b) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    PolyQ q, r = a;
    long db = b.degree();
    while (r.degree() >= db) {
        long k = r.degree() - db;
        Rat f = r.lc() / b.lc();
        PolyQ t = PolyQ::x_power((std::size_t)k, f);
        q = q + t;
        r = r - t * b;
    }
    return {q, r};
}

/// Exact division with remainder by a monic integer polynomial.
inline std::pair<PolyZ, PolyZ> divrem_monic(const PolyZ& a, const PolyZ& b) {
    if (b.is_zero() || b.lc() != 1) throw std::domain_error("divrem_monic: divisor not monic");
    PolyZ q, r = a;
    long db = b.degree();
    while (r.degree() >= db) {
        long k = r.degree() - db;
        PolyZ t = PolyZ::x_power((std::size_t)k, r.lc());
        q = q + t;
        r = r - t * b;
    }
    return {q, r};
}

inline PolyQ gcd_poly(PolyQ a, PolyQ b) {
    while (!b.is_zero()) {
        auto [q, r] = divrem(a, b);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    // monic normalisation
    Rat inv = Rat(1) / a.lc();
    return a * inv;
}

inline Int content(const PolyZ& p) {
    Int g = 0;
    for (auto& v : p.c) g = gcd_int(g, v);
    return g;
}

namespace detail {

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, all divisions exact.
inline PolyZ pseudo_rem(const PolyZ& a, const PolyZ& b) {
    long delta = a.degree() - b.degree();
    PolyZ r = a * pow_int(b.lc(), (unsigned long)(delta + 1));
    while (r.degree() >= b.degree()) {
        long k = r.degree() - b.degree();
        PolyZ t = PolyZ::x_power((std::size_t)k, exact_div(r.lc(), b.lc()));
        r = r - t * b;
    }
    return r;
}

}  // namespace detail

/// Resultant of two integer polynomials (subresultant PRS, Cohen Alg. 3.3.7).
inline Int resultant(const PolyZ& A, const PolyZ& B) {
    if (A.is_zero() || B.is_zero()) return 0;
    PolyZ a = A, b = B;
    Int s = 1;
    if (a.degree() < b.degree()) {
        std::swap(a, b);
        if ((a.degree() & 1) && (b.degree() & 1)) s = -1;
    }
    if (b.degree() == 0) return s * pow_int(b.c[0], (unsigned long)a.degree());
    Int g = 1, h = 1;
    while (true) {
        long da = a.degree(), db = b.degree();
        long delta = da - db;
        if ((da & 1) && (db & 1)) s = -s;
        PolyZ rem = detail::pseudo_rem(a, b);
        a = b;
        Int divisor = g * pow_int(h, (unsigned long)delta);
        std::vector<Int> nc(rem.c.size());
        for (std::size_t i = 0; i < rem.c.size(); ++i) nc[i] = exact_div(rem.c[i], divisor);
        b = PolyZ(std::move(nc));
        g = a.lc();
        if (delta >= 1) h = exact_div(pow_int(g, (unsigned long)delta), pow_int(h, (unsigned long)(delta - 1)));
        if (b.is_zero()) return 0;
        if (b.degree() == 0) {
            long dap = a.degree();
            Int num = pow_int(b.c[0], (unsigned long)dap);
            return s * exact_div(num, pow_int(h, (unsigned long)(dap - 1)));
        }
    }
}

/// Resultant over Q, via denominator clearing.
inline Rat resultant(const PolyQ& A, const PolyQ& B) {
    if (A.is_zero() || B.is_zero()) return Rat(0);
    Int la = 1, lb = 1;
    for (auto& v : A.c) { Int d(v.get_den()); la = la / gcd_int(la, d) * d; }
    for (auto& v : B.c) { Int d(v.get_den()); lb = lb / gcd_int(lb, d) * d; }
    PolyZ a = clear_denominators(A), b = clear_denominators(B);
    Int rz = resultant(a, b);
    // res(cA, B) = c^deg(B) res(A, B)
    Rat scale = pow_rat(Rat(1, la), B.degree()) * pow_rat(Rat(1, lb), A.degree());
    return Rat(rz) * scale;
}

/// disc(f) = (-1)^(d(d-1)/2) res(f, f') / lc(f).
inline Int discriminant(const PolyZ& f) {
    long d = f.degree();
    if (d < 1) throw std::domain_error("discriminant needs degree >= 1");
    Int res = resultant(f, f.derivative());
    Int out = exact_div(res, f.lc());
    if (((d * (d - 1) / 2) & 1) != 0) out = -out;
    return out;
}

inline PolyQ squarefree_part(const PolyQ& f) {
    if (f.degree() <= 0) return f;
    PolyQ g = gcd_poly(f, f.derivative());
    if (g.degree() <= 0) return f;
    return divrem(f, g).first;
}

/// Yun decomposition: returns list of (factor, multiplicity), factors squarefree and coprime.
inline std::vector<std::pair<PolyQ, long>> squarefree_decomposition(const PolyQ& f) {
    std::vector<std::pair<PolyQ, long>> out;
    if (f.degree() <= 0) return out;
    PolyQ a = f, b = f.derivative();
    PolyQ c = gcd_poly(a, b);
    PolyQ w = divrem(a, c).first;
    PolyQ y = divrem(b, c).first;
    PolyQ z = y - w.derivative();
    long i = 1;
    while (!z.is_zero()) {
        PolyQ g = gcd_poly(w, z);
        if (g.degree() > 0) out.push_back({g, i});
        w = divrem(w, g).first;
        y = divrem(z, g).first;
        z = y - w.derivative();
        ++i;
    }
    if (w.degree() > 0) out.push_back({w, i});
    return out;
}

namespace detail {

inline int sign_rat(const Rat& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

inline std::vector<PolyQ> sturm_chain(const PolyQ& f) {
    std::vector<PolyQ> chain;
    chain.push_back(f);
    chain.push_back(f.derivative());
    while (!chain.back().is_zero()) {
        auto [q, r] = divrem(chain[chain.size() - 2], chain.back());
        chain.push_back(-r);
    }
    chain.pop_back();
    return chain;
}

inline long sign_changes_at(const std::vector<PolyQ>& chain, const Rat& x) {
    long changes = 0;
    int last = 0;
    for (auto& p : chain) {
        int s = sign_rat(p.eval(x));
        if (s != 0) {
            if (last != 0 && s != last) ++changes;
            last = s;
        }
    }
    return changes;
}

}  // namespace detail

/// Number of distinct real roots of f in the half-open interval (a, b].
inline long count_real_roots(const PolyQ& f_in, const Rat& a, const Rat& b) {
    PolyQ f = squarefree_part(f_in);
    if (f.degree() <= 0) return 0;
    auto chain = detail::sturm_chain(f);
    return detail::sign_changes_at(chain, a) - detail::sign_changes_at(chain, b);
}

/// Cauchy-style bound: all real roots lie in [-M, M].
inline Rat root_bound(const PolyQ& f) {
    Rat m(0);
    Rat lc = f.lc();
    for (long i = 0; i < f.degree(); ++i) {
        Rat t = f.coeff((std::size_t)i) / lc;
        if (t < 0) t = -t;
        if (t > m) m = t;
    }
    return m + 1;
}

struct RealRoot {
    Rat approx;   // |approx - root| <= eps
    Rat eps;
    long multiplicity = 1;
};

/// All real roots with multiplicity, each approximated to within 2^-prec_bits.
inline std::vector<RealRoot> real_roots(const PolyQ& f, unsigned prec_bits = 256) {
    std::vector<RealRoot> out;
    if (f.degree() <= 0) return out;
    auto decomp = squarefree_decomposition(f);
    for (auto& [g, mult] : decomp) {
        auto chain = detail::sturm_chain(g);
        Rat bound = root_bound(g);
        // isolate by repeated bisection on a stack of intervals
        struct Iv { Rat lo, hi; long nroots; };
        std::vector<Iv> stack;
        long total = detail::sign_changes_at(chain, -bound) - detail::sign_changes_at(chain, bound);
        if (total > 0) stack.push_back({-bound, bound, total});
        std::vector<std::pair<Rat, Rat>> isolated;
        while (!stack.empty()) {
            Iv iv = stack.back();
            stack.pop_back();
            if (iv.nroots == 1) {
                isolated.push_back({iv.lo, iv.hi});
                continue;
            }
            // pick a split point that is not itself a root, so interval
            // endpoints always carry a definite sign
            Rat mid = (iv.lo + iv.hi) / 2;
            for (long off = 3; g.eval(mid) == 0; off += 2)
                mid = iv.lo + (iv.hi - iv.lo) / off;
            long left = detail::sign_changes_at(chain, iv.lo) - detail::sign_changes_at(chain, mid);
            long right = iv.nroots - left;
            if (left > 0) stack.push_back({iv.lo, mid, left});
            if (right > 0) stack.push_back({mid, iv.hi, right});
        }
        // refine each isolated interval by bisection
        for (auto& [lo0, hi0] : isolated) {
            Rat lo = lo0, hi = hi0;
            int slo = detail::sign_rat(g.eval(lo));
            Rat eps_target = pow_rat(Rat(1, 2), (long)prec_bits);
            while (hi - lo > eps_target) {
                Rat mid = (lo + hi) / 2;
                int sm = detail::sign_rat(g.eval(mid));
                if (sm == 0) {
                    lo = hi = mid;
                    break;
                }
                if (sm == slo) lo = mid;
                else hi = mid;
            }
            RealRoot rr;
            rr.approx = (lo + hi) / 2;
            rr.eps = (hi - lo) / 2;
            rr.multiplicity = mult;
            out.push_back(rr);
        }
    }
    std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.approx < b.approx; });
    return out;
}

}  // namespace gfe

#endif
