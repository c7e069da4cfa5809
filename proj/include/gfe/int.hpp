#ifndef GFE_INT_HPP
#define GFE_INT_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfe {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_from_string(const std::string& s) { return Int(s); }

inline Int pow_int(const Int& x, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), x.get_mpz_t(), e);
    return out;
}

inline Rat pow_rat(const Rat& x, long e) {
    if (e >= 0) {
        Rat out;
        mpz_pow_ui(out.get_num_mpz_t(), x.get_num_mpz_t(), (unsigned long)e);
        mpz_pow_ui(out.get_den_mpz_t(), x.get_den_mpz_t(), (unsigned long)e);
        out.canonicalize();
        return out;
    }
    if (x == 0) throw std::domain_error("pow_rat: 0 to negative power");
    return pow_rat(Rat(1) / x, -e);
}

inline Int gcd_int(const Int& a, const Int& b) {
    Int out;
    mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline bool divides(const Int& d, const Int& n) {
    if (d == 0) return n == 0;
    return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int exact_div(const Int& n, const Int& d) {
    Int out;
    mpz_divexact(out.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return out;
}

inline Int binomial(unsigned long n, unsigned long k) {
    Int out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

inline Int powmod(const Int& base, const Int& exp, const Int& mod) {
    Int out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return out;
}

inline Int invmod(const Int& a, const Int& m) {
    Int out;
    if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("invmod: not invertible");
    return out;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline Int next_prime(const Int& n) {
    Int out;
    mpz_nextprime(out.get_mpz_t(), n.get_mpz_t());
    return out;
}

/// q-adic valuation of a nonzero integer.
inline long vq(const Int& x, const Int& q) {
    if (x == 0) throw std::domain_error("valuation of zero");
    if (q < 2) throw std::invalid_argument("vq: modulus must be >= 2");
    Int t = abs_int(x);
    long v = 0;
    while (divides(q, t)) {
        t = exact_div(t, q);
        ++v;
    }
    return v;
}

/// q-adic valuation of a nonzero rational, normalised so vq(q) = 1.
inline long vq(const Rat& x, const Int& q) {
    if (x == 0) throw std::domain_error("valuation of zero");
    Int num(x.get_num()), den(x.get_den());
    long v = 0;
    if (divides(q, num)) v = vq(num, q);
    if (divides(q, den)) v -= vq(den, q);
    return v;
}

/// Removes all factors of q, returning the unit part u with x = q^v * u.
inline Int unit_part(const Int& x, const Int& q) {
    if (x == 0) throw std::domain_error("unit part of zero");
    Int t = x;
    while (divides(q, t)) t = exact_div(t, q);
    return t;
}

namespace detail {

inline Int pollard_rho(const Int& n) {
    // Brent's cycle variant; n odd composite, not a prime power of interest.
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xB5AD4ECEDA1CE2A9UL);
    while (true) {
        Int y = rng.get_z_range(n - 3) + 2;
        Int c = rng.get_z_range(n - 2) + 1;
        Int x = y, d = 1;
        Int ys = y, q = 1;
        const long m = 128;
        long power = 1, lam = 0;
        while (d == 1) {
            x = y;
            for (long i = 0; i < power; ++i) y = (y * y + c) % n;
            long k = 0;
            while (k < power && d == 1) {
                ys = y;
                long lim = std::min(m, power - k);
                for (long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs_int(x - y) % n;
                }
                d = gcd_int(q, n);
                k += lim;
            }
            power *= 2;
            ++lam;
            if (lam > 96) break;
        }
        if (d == n) {
            // backtrack
            do {
                ys = (ys * ys + c) % n;
                d = gcd_int(abs_int(x - ys), n);
            } while (d == 1);
        }
        if (d != n && d != 1) return d;
    }
}

inline void factor_rec(Int n, std::map<Int, long>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    // strip small primes first
    for (unsigned long p : {2UL, 3UL, 5UL, 7UL, 11UL, 13UL, 17UL, 19UL, 23UL, 29UL, 31UL, 37UL}) {
        Int pp(p);
        while (divides(pp, n)) {
            out[pp] += 1;
            n = exact_div(n, pp);
        }
    }
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    // perfect power check keeps rho off squares
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long e = 2; e <= mpz_sizeinbase(n.get_mpz_t(), 2); ++e) {
            Int root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
                std::map<Int, long> sub;
                factor_rec(root, sub);
                for (auto& [p, m] : sub) out[p] += m * (long)e;
                return;
            }
        }
    }
    Int d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(exact_div(n, d), out);
}

}  // namespace detail

/// Full factorization of a nonzero integer (sign dropped).
inline std::map<Int, long> factor(const Int& n) {
    if (n == 0) throw std::domain_error("factor of zero");
    std::map<Int, long> out;
    detail::factor_rec(abs_int(n), out);
    return out;
}

inline std::set<Int> prime_divisors(const Int& n) {
    std::set<Int> out;
    if (n == 0) throw std::domain_error("prime divisors of zero");
    for (auto& [p, e] : factor(n)) out.insert(p);
    return out;
}

/// Multiplicative order of x modulo the prime r.
inline long ord_mod(const Int& x, const Int& r) {
    Int t = ((x % r) + r) % r;
    if (t == 0) throw std::domain_error("ord_mod: x divisible by r");
    Int acc = t;
    long k = 1;
    while (acc != 1) {
        acc = acc * t % r;
        ++k;
        if (Int(k) > r) throw std::logic_error("ord_mod: no order found (r not prime?)");
    }
    return k;
}

inline std::string to_string(const Int& x) { return x.get_str(); }

inline std::string to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat x(s);
    x.canonicalize();
    return x;
}

}  // namespace gfe

#endif
