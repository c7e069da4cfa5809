#ifndef GFE_LMFDB_HPP
#define GFE_LMFDB_HPP

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "gfe/newforms.hpp"

namespace gfe::lmfdb {

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers;
};

using Transport = std::function<HttpResponse(const std::string& url)>;

inline std::string default_base_url() {
    const char* env = std::getenv("GFE_LMFDB_URL");
    return env && *env ? env : "https://www.lmfdb.org/api";
}

inline std::string default_cache_dir() {
    const char* env = std::getenv("GFE_CACHE_DIR");
    return env && *env ? env : ".gfe-cache";
}

namespace detail {

inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

}  // namespace detail

/// JSON-over-HTTP client with an on-disk cache keyed by URL hash. Fetches are
/// single-flight per client; a response is cached only after it parses, so a
/// malformed body can never poison the cache.
class Client {
  public:
    explicit Client(Transport transport, std::string cache_dir = default_cache_dir())
        : transport_(std::move(transport)), cache_dir_(std::move(cache_dir)) {}

    nlohmann::json get_json(const std::string& url) {
        std::lock_guard<std::mutex> lock(mu_);
        std::filesystem::path cpath =
            std::filesystem::path(cache_dir_) / (detail::fnv1a_hex(url) + ".json");
        if (std::filesystem::exists(cpath)) {
            std::ifstream in(cpath);
            nlohmann::json j;
            in >> j;
            return j;
        }
        int attempts = 0;
        while (true) {
            ++attempts;
            ++requests_;
            HttpResponse resp = transport_(url);
            if ((resp.status == 429 || resp.status == 503) && attempts < 4) {
                long wait = 1;
                auto it = resp.headers.find("Retry-After");
                if (it != resp.headers.end()) wait = std::min(30L, std::atol(it->second.c_str()));
                std::this_thread::sleep_for(std::chrono::seconds(wait));
                continue;
            }
            if (resp.status != 200)
                throw std::runtime_error("lmfdb: HTTP " + std::to_string(resp.status) + " for " + url);
            nlohmann::json j = nlohmann::json::parse(resp.body);  // throws on malformed body
            std::filesystem::create_directories(cache_dir_);
            std::ofstream out(cpath);
            out << j.dump();
            return j;
        }
    }

    long request_count() const { return requests_; }

  private:
    Transport transport_;
    std::string cache_dir_;
    std::mutex mu_;
    long requests_ = 0;
};

// ---------------------------------------------------------------------------
// expression parsing for LMFDB polynomial strings
// ---------------------------------------------------------------------------

/// Parses "x^2 - x - 4", "-1/2*e^3 + e - 7", ... into ascending coefficients.
inline std::vector<Rat> parse_poly_expr(const std::string& text, char var) {
    std::vector<Rat> coeffs;
    auto bump = [&](std::size_t deg, const Rat& v) {
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, Rat(0));
        coeffs[deg] += v;
    };
    std::string s;
    for (char c : text)
        if (!isspace((unsigned char)c)) s += c;
    if (s.empty()) throw std::invalid_argument("empty polynomial expression");
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        if (i >= s.size()) throw std::invalid_argument("dangling sign in " + text);
        // coefficient
        std::string num;
        while (i < s.size() && (isdigit((unsigned char)s[i]) || s[i] == '/')) num += s[i++];
        Rat coef = num.empty() ? Rat(1) : rat_from_string(num);
        if (i < s.size() && s[i] == '*') ++i;
        std::size_t deg = 0;
        if (i < s.size() && s[i] == var) {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string e;
                while (i < s.size() && isdigit((unsigned char)s[i])) e += s[i++];
                if (e.empty()) throw std::invalid_argument("missing exponent in " + text);
                deg = (std::size_t)std::stoul(e);
            }
        }
        bump(deg, sign < 0 ? Rat(-coef) : coef);
    }
    return coeffs;
}

/// Detects the polynomial variable used in an expression (single letter).
inline char detect_var(const std::string& text, char fallback = 'a') {
    for (char c : text)
        if (isalpha((unsigned char)c)) return c;
    return fallback;
}

// ---------------------------------------------------------------------------
// adapter: LMFDB Hilbert-newform records -> NewformFile
// ---------------------------------------------------------------------------

struct FetchQuery {
    long r = 5;
    std::string field_label = "2.2.5.1";
    Int level_norm = 0;          // exact level norm (0: use bound)
    Int level_norm_bound = 0;    // upper bound on the level norm
    std::string base_url = default_base_url();
    SubfieldBudget subfield_budget;
};

struct FetchOutcome {
    NewformFile file;
    bool incomplete = false;      // some record could not be fully mapped
    std::vector<std::string> notes;
};

namespace detail {

/// Maps an LMFDB prime label "[norm, p, gen]" to the canonical place label,
/// using the exact image of the LMFDB field generator inside K = Q(omega).
inline std::optional<std::string> map_prime_label(
    const std::shared_ptr<const RealCyclotomicField>& K, const NFElement& gen_image_unused,
    const std::vector<Rat>& gen_in_omega, const std::string& label) {
    // parse "[N, p, expr]"
    std::string s = label;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
    s = s.substr(1, s.size() - 2);
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            if (c == '[' || c == '(') ++depth;
            if (c == ']' || c == ')') --depth;
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3) return std::nullopt;
    Int norm = int_from_string(parts[0].substr(parts[0].find_first_not_of(' ')));
    Int q = int_from_string(parts[1].substr(parts[1].find_first_not_of(' ')));
    long f = 0;
    Int nn = norm;
    while (nn > 1 && divides(q, nn)) {
        nn = exact_div(nn, q);
        ++f;
    }
    if (nn != 1 || f == 0) return std::nullopt;
    auto places = split_prime(K, q);
    if (places.size() == 1) return places[0].label();
    // compute gen as an element of Z[omega] modulo q: substitute the image of
    // the LMFDB generator (rational coordinates with denominator prime to q)
    char var = detect_var(parts[2]);
    std::vector<Rat> expr = parse_poly_expr(parts[2], var);
    long g = K->degree();
    // gen = sum expr[j] * (gen_in_omega)^j in K, tracked as rational coords
    std::vector<Rat> acc(g, Rat(0));
    // horner over NFElement-like arithmetic in Q[x]/h_r with rational coords
    auto mulmod = [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
        PolyQ pa{std::vector<Rat>(a)}, pb{std::vector<Rat>(b)};
        PolyQ prod = pa * pb;
        PolyQ red = divrem(prod, to_poly_q(K->h())).second;
        std::vector<Rat> out(g, Rat(0));
        for (long i = 0; i <= red.degree(); ++i) out[(std::size_t)i] = red.coeff((std::size_t)i);
        return out;
    };
    for (std::size_t j = expr.size(); j-- > 0;) {
        acc = mulmod(acc, gen_in_omega);
        acc[0] += expr[j];
    }
    // reduce modulo each factor and test membership
    PrimeField F(q.get_ui());
    std::optional<std::string> found;
    for (auto& place : places) {
        // clear denominators (must be units mod q)
        Int den = 1;
        for (auto& c : acc) {
            Int d(c.get_den());
            den = den / gcd_int(den, d) * d;
        }
        if (divides(q, den)) return std::nullopt;
        std::vector<Int> ic;
        for (auto& c : acc) {
            Rat t = c * Rat(den);
            ic.push_back(Int(t.get_num()));
        }
        FpVec v = fp_from_polyz(F, PolyZ(ic));
        FpVec fac = fp_from_polyz(F, place.factor);
        if (fp_mod(F, v, fac).empty()) {
            if (found) return std::nullopt;  // ambiguous
            found = place.label();
        }
    }
    return found;
}

}  // namespace detail

/// Downloads Hilbert newform eigenvalue data and normalises it into the
/// NewformFile schema with canonical place labels. Partial data is marked
/// incomplete, never silently truncated.
inline FetchOutcome fetch_lmfdb(Client& client, const FetchQuery& query, const LevelIdeal& level) {
    FetchOutcome out;
    out.file.base_r = query.r;
    out.file.level = level;
    auto K = build_field(query.r);
    // 1. defining polynomial of the base field
    nlohmann::json field_resp = client.get_json(query.base_url + "/nf_fields/?label=" +
                                                query.field_label + "&_format=json&_fields=coeffs");
    if (!field_resp.contains("data") || field_resp["data"].empty())
        throw std::runtime_error("lmfdb: base field " + query.field_label + " not found");
    std::vector<Int> bc;
    for (auto& c : field_resp["data"][0]["coeffs"]) {
        if (c.is_string()) bc.push_back(int_from_string(c.get<std::string>()));
        else bc.push_back(Int(c.get<long>()));
    }
    PolyZ f_base(bc);
    // exact image of the LMFDB generator in K = Q(omega)
    auto Kh = std::make_shared<const NumberField>(K->h());
    auto root = find_root_in_field(f_base, Kh, query.subfield_budget);
    if (!root) throw std::runtime_error("lmfdb: cannot express the field generator in Q(omega)");
    std::vector<Rat> gen_in_omega = root->coords;
    // 2. newform records
    std::string url = query.base_url + "/mf_hilbert/?field_label=" + query.field_label +
                      "&_format=json";
    if (query.level_norm != 0) url += "&level_norm=" + query.level_norm.get_str();
    else if (query.level_norm_bound != 0) url += "&level_norm=le" + query.level_norm_bound.get_str();
    long synthetic = 0;
    for (int page = 0; page < 50; ++page) {
        nlohmann::json resp = client.get_json(url + "&_offset=" + std::to_string(page * 100));
        if (!resp.contains("data")) throw std::runtime_error("lmfdb: response without data array");
        const auto& data = resp["data"];
        if (data.empty()) break;
        for (auto& rec : data) {
            NewformRecord form;
            if (rec.contains("label") && rec["label"].is_string())
                form.label = rec["label"].get<std::string>();
            else form.label = "c" + std::to_string(++synthetic);
            try {
                std::string hp = rec["hecke_polynomial"].is_string()
                                     ? rec["hecke_polynomial"].get<std::string>()
                                     : "x";
                char pv = detect_var(hp, 'x');
                auto pc = parse_poly_expr(hp, pv);
                PolyQ fq{std::vector<Rat>(pc)};
                PolyZ fz = clear_denominators(fq);
                if (fz.lc() < 0) fz = -fz;
                if (fz.lc() != 1) throw std::runtime_error("non-monic hecke polynomial");
                form.field = std::make_shared<const NumberField>(fz);
                long d = form.field->degree();
                const auto& primes = rec["primes"];
                const auto& eigs = rec["hecke_eigenvalues"];
                std::size_t n = std::min(primes.size(), eigs.size());
                if (primes.size() != eigs.size()) {
                    out.incomplete = true;
                    out.notes.push_back(form.label + ": primes/eigenvalues length mismatch");
                }
                for (std::size_t i = 0; i < n; ++i) {
                    auto mapped = detail::map_prime_label(K, NFElement(), gen_in_omega,
                                                          primes[i].get<std::string>());
                    if (!mapped) {
                        out.incomplete = true;
                        continue;
                    }
                    std::string es = eigs[i].get<std::string>();
                    char ev = 'e';
                    for (char c : es)
                        if (isalpha((unsigned char)c)) ev = c;
                    auto coords = parse_poly_expr(es, ev);
                    if ((long)coords.size() > d) throw std::runtime_error("eigenvalue degree too big");
                    coords.resize((std::size_t)d, Rat(0));
                    form.eigenvalues[*mapped] = coords;
                }
                if (rec.contains("is_CM")) {
                    if (rec["is_CM"].is_boolean()) form.has_cm = rec["is_CM"].get<bool>();
                    else if (rec["is_CM"].is_string()) form.has_cm = rec["is_CM"].get<std::string>() == "yes";
                }
                form.contains_K = subfield_test(K, form.field, query.subfield_budget);
                out.file.forms.push_back(std::move(form));
            } catch (const std::exception& e) {
                out.incomplete = true;
                out.notes.push_back(form.label + ": " + e.what());
            }
        }
        if (data.size() < 100) break;
    }
    return out;
}

}  // namespace gfe::lmfdb

#endif
