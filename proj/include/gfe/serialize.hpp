#ifndef GFE_SERIALIZE_HPP
#define GFE_SERIALIZE_HPP

#include <json.hpp>

#include "gfe/counting.hpp"
#include "gfe/frey.hpp"
#include "gfe/local.hpp"

namespace gfe {

/// Canonical FreyModel object: {r, kind, coeffs (decimal strings, ascending
/// degree), d2, t, deltaK}.
inline nlohmann::json frey_model_json(const FreyModel& M) {
    nlohmann::json j;
    j["r"] = M.r;
    j["kind"] = M.kind == ModelKind::Minus ? "minus" : "plus";
    j["coeffs"] = nlohmann::json::array();
    for (long i = 0; i <= M.f.degree(); ++i) j["coeffs"].push_back(to_string(M.f.coeff((std::size_t)i)));
    j["d2"] = to_string(M.d2);
    j["t"] = to_string(M.t);
    j["deltaK"] = to_string(M.deltaK);
    return j;
}

inline FreyModel frey_model_from_json(const nlohmann::json& j) {
    FreyModel M;
    M.r = j.at("r").get<long>();
    M.kind = j.at("kind").get<std::string>() == "plus" ? ModelKind::Plus : ModelKind::Minus;
    std::vector<Int> c;
    for (auto& s : j.at("coeffs")) c.push_back(int_from_string(s.get<std::string>()));
    M.f = PolyZ(std::move(c));
    M.d2 = int_from_string(j.at("d2").get<std::string>());
    M.t = int_from_string(j.at("t").get<std::string>());
    M.deltaK = int_from_string(j.at("deltaK").get<std::string>());
    return M;
}

inline nlohmann::json level_ideal_json(const LevelIdeal& N, long r) {
    nlohmann::json j;
    j["two_exp"] = N.two_exp;
    j["r_exp"] = N.r_exp;
    j["odd"] = nlohmann::json::array();
    for (auto& part : N.odd)
        j["odd"].push_back(
            {{"q", part.q.get_si()}, {"f", part.f}, {"index", part.index}, {"exp", part.exp}});
    j["human"] = N.human(r);
    return j;
}

inline nlohmann::json reduction_report_json(const ReductionReport& rep) {
    nlohmann::json j;
    j["place"] = rep.place.label();
    j["kind"] = rep.kind == ModelKind::Minus ? "minus" : "plus";
    j["reduction"] = reduction_name(rep.reduction);
    j["branch"] = rep.branch;
    j["attains_good_over"] = rep.attains_good_over;
    switch (rep.sq) {
        case SqStatus::NotNeeded: break;
        case SqStatus::Holds: j["sq"] = "holds"; break;
        case SqStatus::Fails: j["sq"] = "fails"; break;
        case SqStatus::Conditional: j["sq"] = "conditional"; break;
    }
    return j;
}

inline nlohmann::json conductor_json(const ConductorExponent& c) {
    nlohmann::json j;
    j["place"] = c.place.label();
    j["n"] = c.n;
    j["tame"] = c.n_tame;
    j["wild"] = c.n_wild;
    j["inertial_type"] = inertial_name(c.inertial);
    j["row"] = c.row;
    return j;
}

/// FrobTrace as {q, f, index, coords}.
inline nlohmann::json frob_trace_json(const FrobTrace& t) {
    nlohmann::json j;
    j["q"] = to_string(t.place.q);
    j["f"] = t.place.f;
    j["index"] = t.place.index;
    j["coords"] = nlohmann::json::array();
    for (auto& c : t.a.coords) j["coords"].push_back(to_string(c));
    return j;
}

}  // namespace gfe

#endif
