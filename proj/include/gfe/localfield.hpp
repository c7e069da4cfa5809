#ifndef GFE_LOCALFIELD_HPP
#define GFE_LOCALFIELD_HPP

#include <memory>
#include <optional>
#include <vector>

#include "gfe/cyclotomic.hpp"
#include "gfe/int.hpp"
#include "gfe/poly.hpp"

namespace gfe {

// ---------------------------------------------------------------------------
// O_K,q / q^2 at an even place: the Galois ring Z4[x]/(H), H a Hensel lift
// mod 4 of the place's factor of h_r mod 2.
// ---------------------------------------------------------------------------

class EvenPlaceRing {
  public:
    using Elt = std::vector<long>;  // coords mod 4, length f

    EvenPlaceRing(std::shared_ptr<const RealCyclotomicField> K, const PrimeIdealK& place)
        : K_(std::move(K)), f_(place.f) {
        if (place.q != 2) throw std::invalid_argument("EvenPlaceRing: place must lie above 2");
        modulus_ = hensel_lift_factor(place.factor);
    }

    long f() const { return f_; }
    const PolyZ& modulus() const { return modulus_; }

    Elt from_poly(const PolyZ& p) const {
        PolyZ red = p;
        // reduce coefficients mod 4 first to keep divrem small
        std::vector<Int> c(red.c);
        for (auto& v : c) v = ((v % 4) + 4) % 4;
        red = divrem_monic(PolyZ(c), modulus_).second;
        Elt out(f_, 0);
        for (long i = 0; i <= red.degree(); ++i) {
            Int v = ((red.coeff(i) % 4) + 4) % 4;
            out[i] = v.get_si();
        }
        return out;
    }
    Elt from_ok(const OKElement& a) const { return from_poly(a.as_poly()); }
    Elt from_int(const Int& v) const { return from_poly(PolyZ::constant(v)); }

    Elt mul(const Elt& a, const Elt& b) const {
        std::vector<Int> pa(a.begin(), a.end()), pb(b.begin(), b.end());
        return from_poly(PolyZ(pa) * PolyZ(pb));
    }
    Elt sub(const Elt& a, const Elt& b) const {
        Elt out(f_);
        for (long i = 0; i < f_; ++i) out[i] = ((a[i] - b[i]) % 4 + 4) % 4;
        return out;
    }
    bool is_zero(const Elt& a) const {
        for (auto v : a)
            if (v % 4 != 0) return false;
        return true;
    }
    bool is_unit(const Elt& a) const {
        for (auto v : a)
            if (v % 2 != 0) return true;
        return false;
    }
    std::size_t size() const { return (std::size_t)1 << (2 * f_); }
    Elt element_at(std::size_t k) const {
        Elt out(f_, 0);
        for (long i = 0; i < f_; ++i) {
            out[i] = (long)(k & 3);
            k >>= 2;
        }
        return out;
    }

  private:
    std::shared_ptr<const RealCyclotomicField> K_;
    long f_;
    PolyZ modulus_;

    PolyZ hensel_lift_factor(const PolyZ& factor_mod2) const {
        // h_r = H*G mod 2 with gcd(H, G) = 1; lift to h_r = H4*G4 mod 4
        PrimeField F2(2);
        FpVec h2 = fp_from_polyz(F2, K_->h());
        FpVec H2 = fp_from_polyz(F2, factor_mod2);
        if (fp_deg(H2) == fp_deg(h2)) {
            // single place above 2: modulus is h_r mod 4 directly
            std::vector<Int> c(K_->h().c);
            for (auto& v : c) v = ((v % 4) + 4) % 4;
            PolyZ out(c);
            out.c.resize(K_->h().degree() + 1, 0);
            out.c[K_->h().degree()] = 1;
            return out;
        }
        FpVec G2 = fp_divrem(F2, h2, H2).first;
        auto [g, S, T] = fp_extgcd(F2, H2, G2);
        if (fp_deg(g) != 0) throw std::logic_error("hensel_lift_factor: factor not coprime to cofactor");
        // A = (h - H*G)/2 mod 2
        auto lift = [](const FpVec& v) {
            std::vector<Int> c(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) c[i] = Int((unsigned long)v[i]);
            return PolyZ(c);
        };
        PolyZ H = lift(H2), G = lift(G2);
        PolyZ diff = K_->h() - H * G;
        std::vector<Int> ac(diff.c.size());
        for (std::size_t i = 0; i < diff.c.size(); ++i) ac[i] = exact_div(diff.c[i], 2);
        FpVec A = fp_from_polyz(F2, PolyZ(ac));
        // H4 = H + 2*(T*A mod H)
        FpVec corr = fp_mod(F2, fp_mul(F2, T, A), H2);
        PolyZ H4 = H + lift(corr) * Int(2);
        // normalize coefficients into [0,4)
        for (auto& v : H4.c) v = ((v % 4) + 4) % 4;
        H4.c.resize((std::size_t)f_ + 1, 0);
        H4.c[f_] = 1;  // monic lift
        return H4;
    }
};

/// SQ predicate at an even place: x (a unit, passed as its unit part) is a
/// square mod q^2, decided by enumerating residues tau mod q^2.
inline bool sq_predicate(const EvenPlaceRing& R, const EvenPlaceRing::Elt& x) {
    if (!R.is_unit(x)) throw std::invalid_argument("sq_predicate: pass the unit part");
    for (std::size_t k = 0; k < R.size(); ++k) {
        auto tau = R.element_at(k);
        if (R.is_zero(R.sub(x, R.mul(tau, tau)))) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// r-th power test in at-most-quadratic extensions of Q_r.
// ---------------------------------------------------------------------------

enum class LocalAmbient { Qr, UnramifiedQuadratic, RamifiedQuadratic };

/// u = pi^valuation * (a + b*y), with the unit part carried modulo
/// m^(2e+2) (coordinates mod r^k). For Qr, b = 0 and y is absent; for the
/// unramified quadratic, y^2 = D with D a unit non-residue; for the ramified
/// quadratic, y = pi with pi^2 = D, v_r(D) = 1.
struct LocalUnit {
    long r = 5;
    LocalAmbient ambient = LocalAmbient::Qr;
    Int D = 0;
    long valuation = 0;
    Int a = 1, b = 0;
};

namespace detail {

inline Int teichmuller_iter(Int x, const Int& step_pow, const Int& modulus, int iters) {
    for (int i = 0; i < iters; ++i) x = powmod(x, step_pow, modulus);
    return x;
}

}  // namespace detail

/// True iff u is an r-th power in its ambient field. Criterion: v(u) = 0 mod r
/// and the principal-unit part w = u * pi^-v * Teich(u bar)^-1 satisfies
/// w = 1 mod m^(1+e); valid since (1+m)^r = 1 + m^(1+e) when e = v_m(r) < r-1.
inline bool rth_power_test_local(const LocalUnit& u) {
    long r = u.r;
    if (r < 5) throw std::invalid_argument("rth_power_test_local: r >= 5 required");
    Int R(r);
    if (u.valuation % r != 0) return false;
    switch (u.ambient) {
        case LocalAmbient::Qr: {
            // e = 1; precision m-exponent 2e+2 = 4
            Int mod4 = pow_int(R, 4);
            Int a = ((u.a % mod4) + mod4) % mod4;
            if (a % R == 0) throw std::invalid_argument("unit part not a unit");
            Int teich = detail::teichmuller_iter(a, R, mod4, 4);
            Int w = a * invmod(teich, mod4) % mod4;
            return w % (R * R) == 1;
        }
        case LocalAmbient::UnramifiedQuadratic: {
            // e = 1; W = Z[y]/(r^4, y^2 - D); residue field F_{r^2}
            Int mod4 = pow_int(R, 4);
            auto norm = [&](const Int& v) -> Int { return ((v % mod4) + mod4) % mod4; };
            Int a = norm(u.a), b = norm(u.b), D = norm(u.D);
            if (a % R == 0 && b % R == 0) throw std::invalid_argument("unit part not a unit");
            auto mul = [&](const std::pair<Int, Int>& x, const std::pair<Int, Int>& y) {
                return std::pair<Int, Int>{norm(x.first * y.first + x.second * y.second % mod4 * D),
                                           norm(x.first * y.second + x.second * y.first)};
            };
            auto powp = [&](std::pair<Int, Int> x, Int e) {
                std::pair<Int, Int> acc{1, 0};
                while (e > 0) {
                    if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, x);
                    x = mul(x, x);
                    e >>= 1;
                }
                return acc;
            };
            // Teichmuller: iterate x -> x^(r^2)
            std::pair<Int, Int> t{a, b};
            for (int i = 0; i < 4; ++i) t = powp(t, R * R);
            // invert t: t * conj(t) = Nm(t) in Z/r^4: conj(a+by) = a-by
            Int nm = norm(t.first * t.first - t.second * t.second % mod4 * D);
            Int nminv = invmod(nm, mod4);
            std::pair<Int, Int> tinv{norm(t.first * nminv), norm(mod4 - t.second * nminv % mod4)};
            auto w = mul({a, b}, tinv);
            // w = 1 mod m^2, m = (r): both coords mod r^2
            Int r2 = R * R;
            return w.first % r2 == 1 && w.second % r2 == 0;
        }
        case LocalAmbient::RamifiedQuadratic: {
            // e = 2; W = Z_r[pi]/(pi^6), pi^2 = D with v_r(D) = 1.
            if (vq(u.D, R) != 1) throw std::invalid_argument("ramified quadratic: need v_r(D) = 1");
            Int mod3 = pow_int(R, 3);
            auto norm = [&](const Int& v) -> Int { return ((v % mod3) + mod3) % mod3; };
            Int a = norm(u.a), b = norm(u.b), D = norm(u.D);
            if (a % R == 0) {
                // v(u) > 0 contradicts the unit-part contract
                throw std::invalid_argument("unit part not a unit in ramified quadratic");
            }
            // Teichmuller of the residue a mod r lives in Z_r
            Int teich = detail::teichmuller_iter(a, R, mod3, 3);
            Int ti = invmod(teich, mod3);
            Int wa = norm(a * ti), wb = norm(b * ti);
            // w = 1 mod m^3 = (pi^3): v_r(wa - 1) >= 2 and v_r(wb) >= 1
            return (wa - 1) % (R * R) == 0 && wb % R == 0;
        }
    }
    throw std::logic_error("unreachable");
}

/// Decides whether u = (-t + sqrt(big))/2 is an r-th power in
/// Q1 = Q_r(sqrt(big)); requires v_r(big) = 0 (Hypothesis 2 in the only
/// branch that consults this). u * conj(u) = d2^r.
inline bool is_rth_power_in_Q1(const Int& t, const Int& big, const Int& d2, long r) {
    Int R(r);
    if (big % R == 0) throw std::invalid_argument("is_rth_power_in_Q1: v_r(big) must be 0");
    // square root of big mod r?
    Int broot = 0;
    bool is_square = false;
    for (Int x = 0; x < R; ++x) {
        if ((x * x - big) % R == 0) {
            broot = x;
            is_square = true;
            break;
        }
    }
    if (!is_square) {
        LocalUnit u;
        u.r = r;
        u.ambient = LocalAmbient::UnramifiedQuadratic;
        u.D = big;
        u.valuation = 0;  // b-part is the unit 1/2, so v(u) = 0
        Int mod4 = pow_int(R, 4);
        Int inv2 = invmod(Int(2), mod4);
        u.a = (mod4 - t % mod4 + mod4) % mod4 * inv2 % mod4;
        u.b = inv2;
        return rth_power_test_local(u);
    }
    // ambient Q_r: Hensel-lift y with y^2 = big to precision r^k,
    // k large enough to see past v(u) <= r * v_r(d2)
    long vbound = (d2 % R == 0) ? r * vq(d2, R) : 0;
    long k = vbound + 6;
    Int modk = pow_int(R, (unsigned long)k);
    Int y = broot;
    // Newton iteration y <- y - (y^2 - big)/(2y)
    for (int i = 0; i < k + 2; ++i) {
        Int num = (y * y - big) % modk;
        y = ((y - num * invmod(2 * y % modk, modk)) % modk + modk) % modk;
    }
    Int uval = ((-t + y) % modk + modk) % modk * invmod(Int(2), modk) % modk;
    if (uval == 0) {
        // u = 0 mod r^k; conj(u) = (-t - y)/2 must then be the unit one
        uval = ((-t - y) % modk + modk) % modk * invmod(Int(2), modk) % modk;
        if (uval == 0) throw std::logic_error("is_rth_power_in_Q1: precision exhausted");
    }
    long v = 0;
    while (uval % R == 0) {
        uval = uval / R;
        ++v;
    }
    LocalUnit u;
    u.r = r;
    u.ambient = LocalAmbient::Qr;
    u.valuation = v;
    u.a = uval;
    return rth_power_test_local(u);
}

}  // namespace gfe

#endif
