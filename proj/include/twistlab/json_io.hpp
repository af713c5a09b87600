#pragma once

// JSON wire formats for specs, vectors, factorizations and tuples.
// Emission is canonical (ordered keys, sparse vectors as index maps) so that
// fixed seeds give byte-identical reports; parsing is permissive about the
// documented aliases and about dense-vs-sparse vector shapes.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "centralizers.hpp"
#include "derived.hpp"
#include "errors.hpp"
#include "factorization.hpp"
#include "orlicz.hpp"
#include "spaces.hpp"
#include "sparse_vector.hpp"

namespace twistlab {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars and vectors

inline json cplx_to_json(cplx v) {
    if (v.imag() == 0.0) return json(v.real());
    return json::array({v.real(), v.imag()});
}

inline cplx cplx_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InputError("complex entries must be numbers or [re, im] pairs");
}

// canonical form: sparse map {"index": value}, indices in increasing order
inline json vector_to_json(const SparseVector& x) {
    json j = json::object();
    for (const auto& e : x.entries()) j[std::to_string(e.first)] = cplx_to_json(e.second);
    return j;
}

// accepts a dense array (index = position, 1-based) or a sparse index map
inline SparseVector vector_from_json(const json& j) {
    std::vector<SparseVector::Entry> entries;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            cplx v = cplx_from_json(j[i]);
            if (v != cplx(0.0, 0.0)) entries.emplace_back(std::int64_t(i) + 1, v);
        }
    } else if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            std::int64_t idx = 0;
            try {
                idx = std::stoll(it.key());
            } catch (...) {
                throw InputError("sparse vector keys must be integer indices");
            }
            cplx v = cplx_from_json(it.value());
            if (v != cplx(0.0, 0.0)) entries.emplace_back(idx, v);
        }
    } else {
        throw InputError("vectors must be arrays or {\"index\": value} maps");
    }
    return SparseVector::from_entries(std::move(entries));
}

// ---------------------------------------------------------------------------
// Orlicz functions

inline std::string orlicz_param_key(const std::string& name) {
    if (name == "power") return "p";
    if (name == "exp_alpha") return "alpha";
    return "r"; // twist0 / twist1
}

inline OrliczFunction orlicz_by_name(std::string name, double param) {
    if (name == "twist_r") name = "twist1";
    if (name == "m_alpha") name = "exp_alpha";
    if (name == "power") return orlicz_power(param);
    if (name == "exp_alpha") return orlicz_exp_alpha(param);
    if (name == "twist0") return orlicz_twist0(param);
    if (name == "twist1") return orlicz_twist1(param);
    throw ConfigError("unknown orlicz function name: " + name);
}

inline double orlicz_param_from_json(const json& j) {
    for (const char* key : {"param", "r", "alpha", "p"})
        if (j.contains(key)) return j.at(key).get<double>();
    throw InputError("orlicz spec needs a parameter (param / r / alpha / p)");
}

// ---------------------------------------------------------------------------
// Spaces

inline json space_to_json(const SpaceSpec& s) {
    json j = json::object();
    switch (s.kind) {
        case SpaceKind::Lp:
            j["kind"] = "lp";
            if (std::isinf(s.p)) j["p"] = "inf";
            else j["p"] = s.p;
            break;
        case SpaceKind::WeightedLp: {
            j["kind"] = "weighted_lp";
            if (std::isinf(s.p)) j["p"] = "inf";
            else j["p"] = s.p;
            json w = json::object();
            for (const auto& e : s.weights) w[std::to_string(e.first)] = e.second;
            j["weights"] = w;
            break;
        }
        case SpaceKind::Orlicz:
            j["kind"] = "orlicz";
            j["name"] = s.orlicz_fn.name;
            j[orlicz_param_key(s.orlicz_fn.name)] = s.orlicz_fn.param;
            if (!s.orlicz_fn.extension_note.empty()) j["note"] = s.orlicz_fn.extension_note;
            break;
        case SpaceKind::Tsirelson:
            j["kind"] = "tsirelson";
            break;
        case SpaceKind::PConvex:
            j["kind"] = "pconvex";
            j["p"] = s.p;
            j["base"] = space_to_json(*s.base);
            break;
        case SpaceKind::PConcave:
            j["kind"] = "pconcave";
            j["p"] = s.p;
            j["base"] = space_to_json(*s.base);
            break;
    }
    return j;
}

inline double p_from_json(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw InputError("exponent must be a number or \"inf\"");
    }
    return v.get<double>();
}

inline SpaceSpec space_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw InputError("space spec must be an object with a \"kind\"");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "lp") return SpaceSpec::lp(p_from_json(j, "p"));
    if (kind == "weighted_lp") {
        std::vector<std::pair<std::int64_t, double>> w;
        const json& jw = j.at("weights");
        if (jw.is_array()) {
            for (std::size_t i = 0; i < jw.size(); ++i)
                w.emplace_back(std::int64_t(i) + 1, jw[i].get<double>());
        } else if (jw.is_object()) {
            for (auto it = jw.begin(); it != jw.end(); ++it)
                w.emplace_back(std::stoll(it.key()), it.value().get<double>());
        } else {
            throw InputError("weights must be an array or index map");
        }
        return SpaceSpec::weighted_lp(p_from_json(j, "p"), std::move(w));
    }
    if (kind == "orlicz")
        return SpaceSpec::orlicz(
            orlicz_by_name(j.at("name").get<std::string>(), orlicz_param_from_json(j)));
    if (kind == "tsirelson") return SpaceSpec::tsirelson();
    if (kind == "pconvex")
        return SpaceSpec::pconvex(space_from_json(j.at("base")), j.at("p").get<double>());
    if (kind == "pconcave")
        return SpaceSpec::pconcave(space_from_json(j.at("base")), j.at("p").get<double>());
    throw InputError("unknown space kind: " + kind);
}

// ---------------------------------------------------------------------------
// Couples

inline json couple_to_json(const Couple& c) {
    json j = json::object();
    j["x0"] = space_to_json(c.x0);
    j["x1"] = space_to_json(c.x1);
    j["theta"] = c.theta;
    return j;
}

inline Couple couple_from_json(const json& j) {
    if (!j.is_object()) throw InputError("couple must be an object");
    return Couple{space_from_json(j.at("x0")), space_from_json(j.at("x1")),
                  j.at("theta").get<double>()};
}

// ---------------------------------------------------------------------------
// Phase functions and centralizers

inline json phi_to_json(const PhiSpec& p) {
    json j = json::object();
    switch (p.kind) {
        case PhiKind::Phi1:
            j["kind"] = "phi1";
            break;
        case PhiKind::PhiR:
            j["kind"] = "phi_r";
            j["r"] = p.r;
            break;
        case PhiKind::ComplexPower:
            j["kind"] = "complex_power";
            j["alpha"] = p.alpha;
            break;
    }
    return j;
}

inline PhiSpec phi_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "phi1") return PhiSpec::phi1();
    if (kind == "phi_r") return PhiSpec::phi_r(j.at("r").get<double>());
    if (kind == "complex_power") return PhiSpec::complex_power(j.at("alpha").get<double>());
    throw InputError("unknown phi kind: " + kind);
}

inline json centralizer_to_json(const CentralizerSpec& s) {
    json j = json::object();
    switch (s.kind) {
        case CentralizerKind::KaltonPeck:
            j["kind"] = "kalton_peck";
            j["space"] = space_to_json(s.space);
            j["phi"] = phi_to_json(s.phi);
            break;
        case CentralizerKind::PConvexForm:
            j["kind"] = "pconvex_form";
            j["space"] = space_to_json(s.space);
            j["factor"] = s.factor;
            break;
        case CentralizerKind::OrliczHilbert:
            j["kind"] = "orlicz_hilbert";
            j["phi1"] = json{{"name", s.phi1.name},
                             {orlicz_param_key(s.phi1.name), s.phi1.param}};
            break;
        case CentralizerKind::Scaled:
            j["kind"] = "scaled";
            j["mu"] = json::array({s.mu.real(), s.mu.imag()});
            j["inner"] = centralizer_to_json(*s.inner);
            break;
        case CentralizerKind::Interpolated:
            j["kind"] = "interpolated";
            j["couple"] = couple_to_json(*s.couple);
            break;
    }
    return j;
}

inline CentralizerSpec centralizer_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "kalton_peck")
        return CentralizerSpec::kalton_peck(space_from_json(j.at("space")),
                                            phi_from_json(j.at("phi")));
    if (kind == "pconvex_form")
        return CentralizerSpec::pconvex_form(space_from_json(j.at("space")),
                                             j.at("factor").get<double>());
    if (kind == "orlicz_hilbert") {
        const json& f = j.at("phi1");
        return CentralizerSpec::orlicz_hilbert(
            orlicz_by_name(f.at("name").get<std::string>(), orlicz_param_from_json(f)));
    }
    if (kind == "scaled") {
        cplx mu = cplx_from_json(j.at("mu"));
        return CentralizerSpec::scaled(mu, centralizer_from_json(j.at("inner")));
    }
    if (kind == "interpolated") return CentralizerSpec::interpolated(couple_from_json(j.at("couple")));
    throw InputError("unknown centralizer kind: " + kind);
}

// ---------------------------------------------------------------------------
// Factorizations and tuples

inline json factorization_to_json(const Factorization& f) {
    json j = json::object();
    j["a0"] = vector_to_json(f.a0);
    j["a1"] = vector_to_json(f.a1);
    j["theta"] = f.theta;
    j["objective"] = f.objective;
    j["optimality_ratio"] = f.optimality_ratio;
    j["certified"] = f.certified;
    j["lower"] = f.lower;
    j["method"] = f.method;
    j["iterations"] = f.iterations;
    return j;
}

// tuple coefficients are emitted densely (index = position), coefficients
// ordered top-down exactly as the tuple stores them
inline json tuple_to_json(const RochbergTuple& t) {
    json j = json::object();
    j["theta"] = t.theta;
    json cs = json::array();
    for (const auto& v : t.coeffs) {
        std::int64_t dim = 0;
        for (const auto& e : v.entries()) dim = std::max(dim, e.first);
        json arr = json::array();
        for (std::int64_t i = 1; i <= dim; ++i) arr.push_back(cplx_to_json(v.at(i)));
        cs.push_back(arr);
    }
    j["coeffs"] = cs;
    return j;
}

inline RochbergTuple tuple_from_json(const json& j) {
    RochbergTuple t;
    t.theta = j.at("theta").get<double>();
    for (const json& c : j.at("coeffs")) t.coeffs.push_back(vector_from_json(c));
    return t;
}

// ---------------------------------------------------------------------------
// Inline-or-path argument helper

inline json parse_json_arg(const std::string& arg) {
    std::string text = arg;
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw InputError("empty JSON argument");
    if (text[first] != '{' && text[first] != '[') {
        std::ifstream in(arg);
        if (!in) throw InputError("cannot open input file: " + arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("bad JSON: ") + e.what());
    }
}

} // namespace twistlab
