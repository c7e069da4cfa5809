#ifndef GFE_NEWFORMS_HPP
#define GFE_NEWFORMS_HPP

#include <json.hpp>

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gfe/cyclotomic.hpp"
#include "gfe/local.hpp"
#include "gfe/numberfield.hpp"
#include "gfe/poly.hpp"

namespace gfe {

struct ContainsK {
    enum class Status { Yes, No, Unknown };
    Status status = Status::Unknown;
    std::optional<NFElement> embedding;  // image of omega, Yes only
    std::optional<Int> witness;          // witness prime, No only
};

/// One Hecke constituent: its coefficient field, eigenvalue data per place
/// label, and the subfield verdict.
struct NewformRecord {
    std::string label;
    std::shared_ptr<const NumberField> field;
    ContainsK contains_K;
    std::map<std::string, std::vector<Rat>> eigenvalues;  // place label -> coords
    std::optional<bool> has_cm;

    NFElement eigenvalue_nf(const std::string& place_label) const {
        auto it = eigenvalues.find(place_label);
        if (it == eigenvalues.end())
            throw std::out_of_range("insufficient eigenvalue data at " + place_label);
        return NFElement(field, it->second);
    }
};

/// a_frak(g) at the place with the given canonical label.
inline NFElement eigenvalue_at(const NewformRecord& rec, const std::string& place_label) {
    return rec.eigenvalue_nf(place_label);
}

struct NewformFile {
    int version = 1;
    long base_r = 5;
    LevelIdeal level;
    std::vector<NewformRecord> forms;
};

// ---------------------------------------------------------------------------
// JSON (de)serialisation; big integers as decimal strings
// ---------------------------------------------------------------------------

namespace detail {

inline std::string schema_err(const std::string& pointer, const std::string& what) {
    return "newform file schema violation at " + pointer + ": " + what;
}

}  // namespace detail

inline nlohmann::json serialize_newforms(const NewformFile& F) {
    nlohmann::json j;
    j["version"] = F.version;
    j["base_r"] = F.base_r;
    nlohmann::json lvl;
    lvl["two_exp"] = F.level.two_exp;
    lvl["r_exp"] = F.level.r_exp;
    lvl["odd"] = nlohmann::json::array();
    for (auto& part : F.level.odd) {
        lvl["odd"].push_back({{"q", part.q.get_si()},
                              {"f", part.f},
                              {"index", part.index},
                              {"exp", part.exp}});
    }
    j["level"] = lvl;
    j["forms"] = nlohmann::json::array();
    for (auto& rec : F.forms) {
        nlohmann::json rj;
        rj["label"] = rec.label;
        rj["field_poly"] = nlohmann::json::array();
        for (auto& c : rec.field->defining().c) rj["field_poly"].push_back(to_string(c));
        nlohmann::json ck;
        ck["status"] = rec.contains_K.status == ContainsK::Status::Yes     ? "yes"
                       : rec.contains_K.status == ContainsK::Status::No    ? "no"
                                                                           : "unknown";
        if (rec.contains_K.embedding) {
            ck["embedding"] = nlohmann::json::array();
            for (auto& c : rec.contains_K.embedding->coords) ck["embedding"].push_back(to_string(c));
        }
        if (rec.contains_K.witness) ck["witness"] = rec.contains_K.witness->get_si();
        rj["contains_K"] = ck;
        rj["eigenvalues"] = nlohmann::json::object();
        for (auto& [label, coords] : rec.eigenvalues) {
            nlohmann::json arr = nlohmann::json::array();
            for (auto& c : coords) arr.push_back(to_string(c));
            rj["eigenvalues"][label] = arr;
        }
        if (rec.has_cm) rj["has_cm"] = *rec.has_cm;
        j["forms"].push_back(rj);
    }
    return j;
}

inline NewformFile parse_newforms(const nlohmann::json& j) {
    NewformFile F;
    if (!j.contains("version") || !j["version"].is_number_integer())
        throw std::invalid_argument(detail::schema_err("/version", "missing or not an integer"));
    F.version = j["version"].get<int>();
    if (F.version != 1)
        throw std::invalid_argument(detail::schema_err("/version", "unknown version"));
    if (!j.contains("base_r")) throw std::invalid_argument(detail::schema_err("/base_r", "missing"));
    F.base_r = j["base_r"].get<long>();
    if (!j.contains("level") || !j["level"].is_object())
        throw std::invalid_argument(detail::schema_err("/level", "missing object"));
    const auto& lvl = j["level"];
    F.level.two_exp = lvl.value("two_exp", 0L);
    F.level.r_exp = lvl.value("r_exp", 0L);
    if (lvl.contains("odd")) {
        std::size_t i = 0;
        for (auto& part : lvl["odd"]) {
            for (const char* key : {"q", "f", "index", "exp"})
                if (!part.contains(key))
                    throw std::invalid_argument(detail::schema_err(
                        "/level/odd/" + std::to_string(i), std::string("missing ") + key));
            F.level.odd.push_back({Int(part["q"].get<long>()), part["f"].get<long>(),
                                   part["index"].get<long>(), part["exp"].get<long>()});
            ++i;
        }
    }
    if (!j.contains("forms") || !j["forms"].is_array())
        throw std::invalid_argument(detail::schema_err("/forms", "missing array"));
    std::set<std::string> seen_labels;
    std::size_t fi = 0;
    for (auto& rj : j["forms"]) {
        std::string ptr = "/forms/" + std::to_string(fi);
        NewformRecord rec;
        if (!rj.contains("label")) throw std::invalid_argument(detail::schema_err(ptr, "missing label"));
        rec.label = rj["label"].get<std::string>();
        if (!seen_labels.insert(rec.label).second)
            throw std::invalid_argument(detail::schema_err(ptr + "/label", "duplicate label"));
        if (!rj.contains("field_poly") || !rj["field_poly"].is_array() || rj["field_poly"].empty())
            throw std::invalid_argument(detail::schema_err(ptr + "/field_poly", "missing array"));
        std::vector<Int> coeffs;
        for (auto& c : rj["field_poly"]) coeffs.push_back(int_from_string(c.get<std::string>()));
        PolyZ fp(coeffs);
        if (fp.degree() < 1 || fp.lc() != 1)
            throw std::invalid_argument(detail::schema_err(ptr + "/field_poly", "not monic of degree >= 1"));
        rec.field = std::make_shared<const NumberField>(fp);
        if (rj.contains("contains_K")) {
            const auto& ck = rj["contains_K"];
            std::string st = ck.value("status", "unknown");
            if (st == "yes") rec.contains_K.status = ContainsK::Status::Yes;
            else if (st == "no") rec.contains_K.status = ContainsK::Status::No;
            else if (st == "unknown") rec.contains_K.status = ContainsK::Status::Unknown;
            else throw std::invalid_argument(detail::schema_err(ptr + "/contains_K/status", st));
            if (ck.contains("embedding")) {
                std::vector<Rat> emb;
                for (auto& c : ck["embedding"]) emb.push_back(rat_from_string(c.get<std::string>()));
                if ((long)emb.size() != rec.field->degree())
                    throw std::invalid_argument(
                        detail::schema_err(ptr + "/contains_K/embedding", "wrong length"));
                rec.contains_K.embedding = NFElement(rec.field, emb);
            }
            if (ck.contains("witness")) rec.contains_K.witness = Int(ck["witness"].get<long>());
        }
        if (rj.contains("eigenvalues")) {
            for (auto& [label, arr] : rj["eigenvalues"].items()) {
                if (!arr.is_array() || (long)arr.size() != rec.field->degree())
                    throw std::invalid_argument(detail::schema_err(
                        ptr + "/eigenvalues/" + label, "coordinate vector length != deg f_g"));
                std::vector<Rat> coords;
                for (auto& c : arr) coords.push_back(rat_from_string(c.get<std::string>()));
                rec.eigenvalues[label] = coords;
            }
        }
        if (rj.contains("has_cm")) rec.has_cm = rj["has_cm"].get<bool>();
        F.forms.push_back(std::move(rec));
        ++fi;
    }
    return F;
}

inline NewformFile parse_newforms(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    return parse_newforms(j);
}

inline NewformFile load_newforms(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return parse_newforms(j);
}

inline void save_newforms(const NewformFile& F, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_newforms(F).dump(1) << "\n";
}

// ---------------------------------------------------------------------------
// subfield test K c K_g
// ---------------------------------------------------------------------------

namespace detail {

/// Hensel-lifts a simple root x0 of f mod ell to a root mod ell^k.
inline Int hensel_root(const PolyZ& f, const Int& ell, const Int& x0, long k) {
    Int mod = ell;
    Int x = x0 % ell;
    while (mod < pow_int(ell, (unsigned long)k)) {
        mod = mod * mod;
        Int target = pow_int(ell, (unsigned long)k);
        if (mod > target) mod = target;
        Int fx = f.eval(x) % mod;
        Int dfx = f.derivative().eval(x) % mod;
        x = ((x - fx * invmod(dfx, mod)) % mod + mod) % mod;
    }
    return x;
}

/// Rational reconstruction: p/q = b mod m with |p|, q <= sqrt(m/2).
inline std::optional<Rat> rational_reconstruct(const Int& b, const Int& m) {
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(m / 2).get_mpz_t());
    Int r0 = m, r1 = ((b % m) + m) % m;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    if (gcd_int(r1, t1) != 1) return std::nullopt;
    Rat out(r1, t1);
    out.canonicalize();
    if (abs_int(Int(out.get_den())) > bound) return std::nullopt;
    return out;
}

}  // namespace detail

struct SubfieldBudget {
    Int max_witness_prime = 500;
    long max_combinations = 4096;  // 2^12
    long max_degree = 24;
    std::vector<long> precisions = {8, 16, 24};
};

/// Finds a root of the (monic, squarefree) integer polynomial target inside
/// K_g, by Hensel lifting at a prime where both split completely, combining
/// branch choices, and rationally reconstructing the coordinates. The root is
/// verified exactly before being returned.
inline std::optional<NFElement> find_root_in_field(const PolyZ& target,
                                                   const std::shared_ptr<const NumberField>& Kg,
                                                   const SubfieldBudget& budget = {}) {
    long d = Kg->degree();
    long deg_t = target.degree();
    if (deg_t < 1) return std::nullopt;
    const PolyZ& fg = Kg->defining();
    if (fg == target) return NFElement::generator(Kg);
    // linear target: rational root
    if (deg_t == 1) return NFElement::from_rat(Kg, Rat(-target.coeff(0)) / Rat(target.coeff(1)));
    std::optional<Int> split_ell;
    for (Int ell = 3; ell <= budget.max_witness_prime; ell = next_prime(ell)) {
        PrimeField F(ell.get_ui());
        FpVec f_mod = fp_from_polyz(F, fg);
        FpVec t_mod = fp_from_polyz(F, target);
        if (fp_deg(f_mod) != d || fp_deg(t_mod) != deg_t) continue;
        if (fp_deg(fp_gcd(F, f_mod, fp_derivative(F, f_mod))) != 0) continue;
        if (fp_deg(fp_gcd(F, t_mod, fp_derivative(F, t_mod))) != 0) continue;
        auto ffac = fp_factor_squarefree(F, f_mod);
        auto tfac = fp_factor_squarefree(F, t_mod);
        bool split = (long)ffac.size() == d && (long)tfac.size() == deg_t;
        if (split) {
            split_ell = ell;
            break;
        }
    }
    if (!split_ell) return std::nullopt;
    Int ell = *split_ell;
    PrimeField F(ell.get_ui());
    auto froots_mod = fp_factor_squarefree(F, fp_from_polyz(F, fg));
    auto troots_mod = fp_factor_squarefree(F, fp_from_polyz(F, target));
    long nroots = (long)troots_mod.size();
    for (long k : budget.precisions) {
        Int mod = pow_int(ell, (unsigned long)k);
        std::vector<Int> rho, w;
        for (auto& fac : froots_mod)
            rho.push_back(detail::hensel_root(fg, ell, Int((unsigned long)F.neg(fac[0])), k));
        for (auto& fac : troots_mod)
            w.push_back(detail::hensel_root(target, ell, Int((unsigned long)F.neg(fac[0])), k));
        std::vector<std::vector<Int>> V((std::size_t)d, std::vector<Int>((std::size_t)d));
        for (long j = 0; j < d; ++j) {
            Int pw = 1;
            for (long i = 0; i < d; ++i) {
                V[(std::size_t)j][(std::size_t)i] = pw;
                pw = pw * rho[(std::size_t)j] % mod;
            }
        }
        long combos = 0;
        std::vector<long> choice((std::size_t)d, 0);
        while (combos < budget.max_combinations) {
            ++combos;
            std::vector<std::vector<Int>> M = V;
            std::vector<Int> rhs((std::size_t)d);
            for (long j = 0; j < d; ++j) rhs[(std::size_t)j] = w[(std::size_t)choice[(std::size_t)j]];
            bool ok = true;
            for (long col = 0; col < d && ok; ++col) {
                long piv = -1;
                for (long row = col; row < d; ++row)
                    if (M[(std::size_t)row][(std::size_t)col] % ell != 0) {
                        piv = row;
                        break;
                    }
                if (piv < 0) {
                    ok = false;
                    break;
                }
                std::swap(M[(std::size_t)col], M[(std::size_t)piv]);
                std::swap(rhs[(std::size_t)col], rhs[(std::size_t)piv]);
                Int inv = invmod(M[(std::size_t)col][(std::size_t)col], mod);
                for (long jj = col; jj < d; ++jj)
                    M[(std::size_t)col][(std::size_t)jj] = M[(std::size_t)col][(std::size_t)jj] * inv % mod;
                rhs[(std::size_t)col] = rhs[(std::size_t)col] * inv % mod;
                for (long row = 0; row < d; ++row) {
                    if (row == col) continue;
                    Int fmul = M[(std::size_t)row][(std::size_t)col] % mod;
                    if (fmul == 0) continue;
                    for (long jj = col; jj < d; ++jj)
                        M[(std::size_t)row][(std::size_t)jj] =
                            ((M[(std::size_t)row][(std::size_t)jj] - fmul * M[(std::size_t)col][(std::size_t)jj]) % mod + mod) % mod;
                    rhs[(std::size_t)row] = ((rhs[(std::size_t)row] - fmul * rhs[(std::size_t)col]) % mod + mod) % mod;
                }
            }
            if (ok) {
                std::vector<Rat> coords;
                bool recon = true;
                for (long i = 0; i < d && recon; ++i) {
                    auto c = detail::rational_reconstruct(rhs[(std::size_t)i], mod);
                    if (!c) recon = false;
                    else coords.push_back(*c);
                }
                if (recon) {
                    NFElement beta(Kg, coords);
                    if (nf_eval_poly(target, beta).is_zero()) return beta;
                }
            }
            long pos = 0;
            while (pos < d) {
                choice[(std::size_t)pos] += 1;
                if (choice[(std::size_t)pos] < nroots) break;
                choice[(std::size_t)pos] = 0;
                ++pos;
            }
            if (pos == d) break;
        }
    }
    return std::nullopt;
}

/// Decides K c K_g. No is certified by a prime ell whose residue degree in K
/// fails to divide some factor degree of f_g mod ell; Yes is certified by an
/// exactly verified root of h_r in K_g (Hensel lift + rational reconstruction
/// of the coordinates). Unknown only after the budget is exhausted.
inline ContainsK subfield_test(const std::shared_ptr<const RealCyclotomicField>& K,
                               const std::shared_ptr<const NumberField>& Kg,
                               const SubfieldBudget& budget = {}) {
    ContainsK out;
    long g = K->degree();
    long d = Kg->degree();
    long r = K->r();
    if (d > budget.max_degree) return out;  // Unknown
    const PolyZ& fg = Kg->defining();
    if (g == d && fg == K->h()) {
        out.status = ContainsK::Status::Yes;
        out.embedding = NFElement::generator(Kg);
        return out;
    }
    // witness scan: if K c K_g then at every unramified ell the residue degree
    // of ell in K divides every factor degree of f_g mod ell
    for (Int ell = 2; ell <= budget.max_witness_prime; ell = next_prime(ell)) {
        if (ell == r) continue;
        PrimeField F(ell.get_ui());
        FpVec f_mod = fp_from_polyz(F, fg);
        if (fp_deg(f_mod) != d) continue;
        if (fp_deg(fp_gcd(F, f_mod, fp_derivative(F, f_mod))) != 0) continue;
        long fK = ord_mod(ell, Int(r));
        fK = fK / (fK % 2 == 0 ? 2 : 1);
        if (fK == 1) continue;
        for (auto& fac : fp_factor_squarefree(F, f_mod)) {
            if (fp_deg(fac) % fK != 0) {
                out.status = ContainsK::Status::No;
                out.witness = ell;
                return out;
            }
        }
    }
    // without a witness a Yes needs g | d; otherwise stay Unknown (the scan
    // above nearly always certifies No first)
    if (g > 0 && d % g != 0) return out;
    auto beta = find_root_in_field(K->h(), Kg, budget);
    if (beta) {
        out.status = ContainsK::Status::Yes;
        out.embedding = *beta;
    }
    return out;
}

}  // namespace gfe

#endif
