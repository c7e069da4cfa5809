#ifndef GFE_NUMBERFIELD_HPP
#define GFE_NUMBERFIELD_HPP

#include <memory>
#include <vector>

#include "gfe/cyclotomic.hpp"
#include "gfe/int.hpp"
#include "gfe/poly.hpp"

namespace gfe {

/// K_g = Q[x]/(f_g) with f_g monic irreducible; irreducibility is trusted from
/// the data source and only spot-checked (squarefreeness mod a few primes).
class NumberField {
  public:
    explicit NumberField(PolyZ defining) : f_(std::move(defining)) {
        if (f_.degree() < 1 || f_.lc() != 1)
            throw std::invalid_argument("NumberField: need a monic polynomial of degree >= 1");
        fq_ = to_poly_q(f_);
    }
    long degree() const { return f_.degree(); }
    const PolyZ& defining() const { return f_; }
    const PolyQ& defining_q() const { return fq_; }

  private:
    PolyZ f_;
    PolyQ fq_;
};

struct NFElement {
    std::shared_ptr<const NumberField> field;
    std::vector<Rat> coords;  // power basis 1, x, ..., x^(d-1)

    NFElement() = default;
    NFElement(std::shared_ptr<const NumberField> f, std::vector<Rat> c)
        : field(std::move(f)), coords(std::move(c)) {
        coords.resize(field->degree(), Rat(0));
    }
    static NFElement from_rat(std::shared_ptr<const NumberField> f, const Rat& v) {
        std::vector<Rat> c(f->degree(), Rat(0));
        c[0] = v;
        return NFElement(std::move(f), std::move(c));
    }
    static NFElement generator(std::shared_ptr<const NumberField> f) {
        std::vector<Rat> c(f->degree(), Rat(0));
        if (f->degree() == 1) {
            // x = root of the degree-1 polynomial: -constant term
            c[0] = -f->defining_q().coeff(0);
        } else {
            c[1] = 1;
        }
        return NFElement(std::move(f), std::move(c));
    }

    PolyQ as_poly() const { return PolyQ(coords); }
    bool is_zero() const {
        for (auto& v : coords)
            if (v != 0) return false;
        return true;
    }
    bool operator==(const NFElement& o) const { return coords == o.coords; }

    NFElement operator+(const NFElement& o) const {
        std::vector<Rat> c = coords;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coords[i];
        return NFElement(field, std::move(c));
    }
    NFElement operator-(const NFElement& o) const {
        std::vector<Rat> c = coords;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.coords[i];
        return NFElement(field, std::move(c));
    }
    NFElement operator*(const NFElement& o) const {
        PolyQ prod = as_poly() * o.as_poly();
        PolyQ red = divrem(prod, field->defining_q()).second;
        std::vector<Rat> c(field->degree(), Rat(0));
        for (long i = 0; i <= red.degree(); ++i) c[i] = red.coeff(i);
        return NFElement(field, std::move(c));
    }
    NFElement operator*(const Rat& s) const {
        std::vector<Rat> c = coords;
        for (auto& v : c) v *= s;
        return NFElement(field, std::move(c));
    }
};

/// Norm from K_g to Q as resultant(f_g, beta); with f_g monic this is exactly
/// the product of the images of beta under all complex embeddings.
inline Rat nf_norm(const NFElement& beta) {
    if (beta.is_zero()) return Rat(0);
    return resultant(beta.field->defining_q(), beta.as_poly());
}

/// Evaluates h at an element of K_g.
inline NFElement nf_eval_poly(const PolyZ& h, const NFElement& x) {
    NFElement acc = NFElement::from_rat(x.field, Rat(0));
    for (long i = h.degree(); i >= 0; --i) {
        acc = acc * x + NFElement::from_rat(x.field, Rat(h.coeff(i)));
    }
    return acc;
}

/// Pushes a in O_K into K_g through a verified embedding omega -> omega_image.
inline NFElement embed_ok(const OKElement& a, const NFElement& omega_image) {
    NFElement acc = NFElement::from_rat(omega_image.field, Rat(0));
    for (std::size_t i = a.coords.size(); i-- > 0;) {
        acc = acc * omega_image + NFElement::from_rat(omega_image.field, Rat(a.coords[i]));
    }
    return acc;
}

}  // namespace gfe

#endif
