#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "centfoc/oracle.hpp"
#include "centfoc/retmap.hpp"
#include "centfoc/system.hpp"

namespace centfoc {

using json = nlohmann::json;

// One batch job: the input system plus run options. Parsing is strict:
// unknown fields are rejected.
struct JobDocument {
    SystemSpec spec;
    int order = 12;
    std::vector<double> epsilons;  // defaults to geometric 0.02 -> 0.08
    bool verify = false;
    double classify_tol = 1e-7;
    double oracle_tol = 1e-12;
    std::string output_path;
};

inline std::vector<double> default_epsilons() {
    std::vector<double> eps;
    for (int i = 0; i < 5; ++i) eps.push_back(0.02 * std::pow(4.0, i / 4.0));
    return eps;
}

inline JobDocument parse_job(const json& j) {
    static const std::set<std::string> allowed = {
        "f", "g", "k", "l", "order", "epsilons", "verify", "tolerances", "output_path"};
    if (!j.is_object()) throw Error("parse", "job document must be an object");
    for (auto& [key, _] : j.items())
        if (!allowed.count(key)) throw Error("parse", "unknown field '" + key + "'");
    for (const char* req : {"f", "g", "k", "l"})
        if (!j.contains(req)) throw Error("parse", std::string("missing field '") + req + "'");

    JobDocument doc;
    auto number_list = [](const json& v, const char* name) {
        if (!v.is_array()) throw Error("parse", std::string(name) + " must be an array");
        std::vector<double> out;
        for (auto& e : v) {
            if (!e.is_number()) throw Error("parse", std::string(name) + " must hold numbers");
            out.push_back(e.get<double>());
        }
        return out;
    };
    doc.spec.f = number_list(j["f"], "f");
    doc.spec.g = number_list(j["g"], "g");
    if (!j["k"].is_number_integer() || !j["l"].is_number_integer())
        throw Error("parse", "k and l must be integers");
    doc.spec.k = j["k"].get<int>();
    doc.spec.l = j["l"].get<int>();
    if (j.contains("order")) {
        if (!j["order"].is_number_integer()) throw Error("parse", "order must be an integer");
        doc.order = j["order"].get<int>();
    }
    doc.epsilons = j.contains("epsilons") ? number_list(j["epsilons"], "epsilons")
                                          : default_epsilons();
    if (j.contains("verify")) {
        if (!j["verify"].is_boolean()) throw Error("parse", "verify must be a boolean");
        doc.verify = j["verify"].get<bool>();
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) throw Error("parse", "tolerances must be an object");
        for (auto& [key, _] : t.items())
            if (key != "classify" && key != "oracle")
                throw Error("parse", "unknown tolerance '" + key + "'");
        if (t.contains("classify")) doc.classify_tol = t["classify"].get<double>();
        if (t.contains("oracle")) doc.oracle_tol = t["oracle"].get<double>();
    }
    if (j.contains("output_path")) {
        if (!j["output_path"].is_string()) throw Error("parse", "output_path must be a string");
        doc.output_path = j["output_path"].get<std::string>();
    }
    return doc;
}

inline json verification_to_json(const VerificationReport& rep) {
    json v;
    v["order"] = rep.order;
    v["closed_form_error"] = rep.closed_form_error;
    v["fixed_point_residual"] = rep.fixed_point_res;
    v["delta0"] = rep.bounds.delta0;
    v["c0"] = rep.bounds.c0;
    v["M"] = rep.bounds.M;
    v["eps"] = rep.eps_used;
    v["z_numeric"] = rep.z_numeric;
    v["residuals"] = rep.residuals;
    v["eps_skipped"] = rep.eps_skipped;
    v["noise_floor"] = rep.noise_floor;
    if (rep.fit_valid) {
        v["fit"] = {{"slope", rep.fit.slope},
                    {"intercept", rep.fit.intercept},
                    {"r_squared", rep.fit.r_squared}};
    }
    v["pass"] = rep.passes();
    if (!rep.errors.empty()) {
        json errs = json::array();
        for (auto& e : rep.errors)
            errs.push_back({{"stage", e.stage}, {"code", e.code}, {"message", e.message}});
        v["errors"] = errs;
    }
    return v;
}

// Run one job and build the machine-readable report. Throws Error on
// validation problems; numeric failures inside verify are collected per item.
inline json run_job(const JobDocument& doc, bool with_timestamp = true) {
    json rep;
    rep["schema_version"] = "1";
    rep["input"] = {{"f", doc.spec.f}, {"g", doc.spec.g}, {"k", doc.spec.k},
                    {"l", doc.spec.l}, {"order", doc.order}};

    ReturnMapResult rm = return_map(doc.spec, doc.order);
    rep["normalized"] = {{"F", rm.ns.F.coeffs()},   {"p", rm.ns.p},
                         {"B0", rm.ns.B0},          {"B1", rm.ns.B1},
                         {"theta_p", rm.ns.theta_p}, {"radius_r", rm.ns.radius_r}};
    rep["return_map"] = {{"order", rm.Z.order()},
                         {"Z", rm.Z.coeffs()},
                         {"closed_form_leading", {rm.Zp1_closed, rm.Zp2_closed}},
                         {"matching_residual", rm.matching_residual}};
    rep["diagnostics"] = {{"delta0", rm.bounds.delta0},
                          {"c0", rm.bounds.c0},
                          {"M", rm.bounds.M},
                          {"mu", rm.bounds.mu},
                          {"r_eff", rm.bounds.r_eff}};

    Classification cls = classify(rm, doc.classify_tol);
    if (cls.is_focus()) {
        rep["classification"] = {{"type", "focus"},
                                 {"order", cls.order},
                                 {"sign", cls.sign}};
    } else {
        rep["classification"] = {{"type", "center_candidate"},
                                 {"verified_up_to", cls.verified_up_to}};
    }

    if (doc.verify) {
        VerificationReport vr = verify(doc.spec, doc.order, doc.epsilons, doc.oracle_tol);
        rep["verification"] = verification_to_json(vr);
    }

    if (with_timestamp) {
        rep["timestamp"] = static_cast<long long>(
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count());
    }
    return rep;
}

}  // namespace centfoc
