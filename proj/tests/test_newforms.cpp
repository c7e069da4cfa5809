#include <catch2/catch_amalgamated.hpp>

#include "gfe/newforms.hpp"

using namespace gfe;

static std::shared_ptr<const NumberField> make_nf(std::vector<long> coeffs) {
    std::vector<Int> c(coeffs.begin(), coeffs.end());
    return std::make_shared<const NumberField>(PolyZ(c));
}

static NewformFile sample_file() {
    NewformFile F;
    F.base_r = 5;
    F.level.two_exp = 1;
    F.level.r_exp = 1;
    F.level.odd = {{Int(7), 2, 1, 2}};
    NewformRecord rec;
    rec.label = "c001";
    rec.field = make_nf({-5, 0, 1});
    rec.contains_K.status = ContainsK::Status::Yes;
    rec.contains_K.embedding = NFElement(rec.field, {Rat(-1, 2), Rat(1, 2)});
    rec.eigenvalues["11.1.1"] = {Rat(2), Rat(0)};
    rec.eigenvalues["11.1.2"] = {Rat(-1), Rat(1)};
    rec.eigenvalues["3.2.1"] = {Rat(0), Rat(-2)};
    F.forms.push_back(rec);
    NewformRecord rec2;
    rec2.label = "c002";
    rec2.field = make_nf({-7, 1});
    rec2.contains_K.status = ContainsK::Status::No;
    rec2.contains_K.witness = Int(7);
    rec2.has_cm = false;
    F.forms.push_back(rec2);
    return F;
}

TEST_CASE("newform file JSON round trip") {
    NewformFile F = sample_file();
    nlohmann::json j = serialize_newforms(F);
    NewformFile G = parse_newforms(j);
    CHECK(serialize_newforms(G) == j);  // parse о serialize = identity
    CHECK(G.forms.size() == 2);
    CHECK(G.forms[0].contains_K.status == ContainsK::Status::Yes);
    CHECK(G.forms[0].eigenvalues.at("3.2.1")[1] == Rat(-2));
    CHECK(G.forms[1].contains_K.witness.value() == 7);
    CHECK(G.level.odd[0].q == 7);
}

TEST_CASE("schema violations carry JSON pointers") {
    nlohmann::json j = serialize_newforms(sample_file());
    j["version"] = 3;
    CHECK_THROWS_WITH(parse_newforms(j), Catch::Matchers::ContainsSubstring("/version"));
    j["version"] = 1;
    j["forms"][0]["eigenvalues"]["11.1.1"] = {"1", "2", "3"};  // wrong length
    CHECK_THROWS_WITH(parse_newforms(j),
                      Catch::Matchers::ContainsSubstring("/forms/0/eigenvalues/11.1.1"));
    j = serialize_newforms(sample_file());
    j["forms"][1]["label"] = "c001";  // duplicate
    CHECK_THROWS_WITH(parse_newforms(j), Catch::Matchers::ContainsSubstring("duplicate"));
    CHECK_THROWS(parse_newforms(std::string("{\"version\":1}")));
}

TEST_CASE("eigenvalue_at") {
    NewformFile F = sample_file();
    CHECK(eigenvalue_at(F.forms[0], "11.1.1").coords[0] == 2);
    CHECK_THROWS_WITH(eigenvalue_at(F.forms[0], "13.1.1"),
                      Catch::Matchers::ContainsSubstring("insufficient eigenvalue data at 13.1.1"));
    // consistency: one value per place above q = 11
    auto K = build_field(5);
    auto places = split_prime(K, Int(11));
    for (auto& P : places) CHECK_NOTHROW(eigenvalue_at(F.forms[0], P.label()));
}

TEST_CASE("subfield test: yes with verified embedding for x^2 - 5") {
    auto K = build_field(5);
    auto Kg = make_nf({-5, 0, 1});
    ContainsK res = subfield_test(K, Kg);
    REQUIRE(res.status == ContainsK::Status::Yes);
    REQUIRE(res.embedding.has_value());
    // omega = (-1 + sqrt5)/2
    CHECK(res.embedding->coords == std::vector<Rat>{Rat(-1, 2), Rat(1, 2)});
    CHECK(nf_eval_poly(K->h(), *res.embedding).is_zero());
}

TEST_CASE("subfield test: no with witness for x^2 - 2") {
    auto K = build_field(5);
    auto Kg = make_nf({-2, 0, 1});
    ContainsK res = subfield_test(K, Kg);
    REQUIRE(res.status == ContainsK::Status::No);
    REQUIRE(res.witness.has_value());
    // soundness of the witness: ell is inert-pattern in K and f_g mod ell has
    // a factor whose degree the residue degree does not divide
    Int ell = *res.witness;
    long fK = ord_mod(ell, Int(5));
    fK /= (fK % 2 == 0) ? 2 : 1;
    CHECK(fK > 1);
    PrimeField F(ell.get_ui());
    auto factors = fp_factor_squarefree(F, fp_from_polyz(F, Kg->defining()));
    bool found = false;
    for (auto& fac : factors)
        if (fp_deg(fac) % fK != 0) found = true;
    CHECK(found);
}

TEST_CASE("subfield test: identity embedding on h_r itself") {
    auto K = build_field(5);
    auto Kg = std::make_shared<const NumberField>(K->h());
    ContainsK res = subfield_test(K, Kg);
    REQUIRE(res.status == ContainsK::Status::Yes);
    CHECK(*res.embedding == NFElement::generator(Kg));
}

TEST_CASE("subfield test: cyclotomic quartic contains K5") {
    auto K = build_field(5);
    auto Kg = make_nf({1, 1, 1, 1, 1});  // x^4+x^3+x^2+x+1, the 5th cyclotomic
    ContainsK res = subfield_test(K, Kg);
    REQUIRE(res.status == ContainsK::Status::Yes);
    CHECK(nf_eval_poly(K->h(), *res.embedding).is_zero());
}

TEST_CASE("subfield test: cubic cannot contain a quadratic") {
    auto K = build_field(5);
    auto Kg = make_nf({-2, 0, 0, 1});  // x^3 - 2
    ContainsK res = subfield_test(K, Kg);
    CHECK(res.status == ContainsK::Status::No);
    REQUIRE(res.witness.has_value());
}

TEST_CASE("subfield test for K7") {
    auto K = build_field(7);
    // h_7 itself
    auto Kg = std::make_shared<const NumberField>(K->h());
    CHECK(subfield_test(K, Kg).status == ContainsK::Status::Yes);
    // x^3 - 3 defines a non-Galois cubic, not K7
    auto Kg2 = make_nf({-3, 0, 0, 1});
    auto res = subfield_test(K, Kg2);
    CHECK(res.status == ContainsK::Status::No);
    // a quadratic can never contain the cubic K7
    auto Kg3 = make_nf({-5, 0, 1});
    CHECK(subfield_test(K, Kg3).status == ContainsK::Status::No);
}

TEST_CASE("rational reconstruction") {
    Int m = pow_int(Int(11), 8);
    // encode -3/7 mod m
    Int enc = (m - 3) * invmod(Int(7), m) % m;
    auto rec = gfe::detail::rational_reconstruct(enc, m);
    REQUIRE(rec.has_value());
    CHECK(*rec == Rat(-3, 7));
}
