#include "omcl/concepts.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace omcl {

using nlohmann::json;

void ConceptConfig::check() const {
    if (!(k_rho0 >= 0.0) || !(k_lambda0 >= 0.0))
        throw ValidationError("concepts: initial weights must be >= 0");
    if (!(alpha_k > 0.0) || !(alpha_k < 1.0))
        throw ValidationError("concepts: alpha_k must lie in (0, 1)");
}

std::vector<int> dominant_objects(const MotionPrototype& p) {
    std::vector<int> out;
    out.reserve(p.rho.size());
    for (const auto& rho : p.rho) {
        int best = kNoObject;
        double best_val = 0.0;
        for (std::size_t o = 0; o < rho.size(); ++o) {
            if (rho[o] > best_val) {
                best_val = rho[o];
                best = static_cast<int>(o);
            }
        }
        out.push_back(best);
    }
    return out;
}

int dominant_location(const MotionPrototype& p) {
    int best = 0;
    for (std::size_t l = 1; l < p.lambda.size(); ++l)
        if (p.lambda[l] > p.lambda[best]) best = static_cast<int>(l);
    return best;
}

ConceptRegistry::ConceptRegistry(EnvironmentCatalog catalog, PrimitiveLibrary library,
                                 ConceptConfig config)
    : catalog_(std::move(catalog)), library_(std::move(library)), config_(config) {
    catalog_.check();
    config_.check();
}

bool ConceptRegistry::contains(const std::string& designation) const {
    return std::any_of(concepts_.begin(), concepts_.end(),
                       [&](const MotionConcept& c) { return c.designation == designation; });
}

const MotionConcept& ConceptRegistry::concept_named(const std::string& designation) const {
    for (const auto& c : concepts_)
        if (c.designation == designation) return c;
    throw Error("registry: no concept named '" + designation + "'");
}

const MotionConcept& ConceptRegistry::create_concept(MotionPrototype p,
                                                     const std::string& designation) {
    if (designation.empty()) throw ValidationError("registry: empty designation");
    if (contains(designation))
        throw Error("registry: concept '" + designation + "' already exists");
    MotionConcept c;
    c.designation = designation;
    c.prototypes.push_back(std::move(p));
    c.k_rho = config_.k_rho0;
    c.k_lambda = config_.k_lambda0;
    concepts_.push_back(std::move(c));
    return concepts_.back();
}

const MotionConcept& ConceptRegistry::update_concept(const std::string& designation,
                                                     MotionPrototype p) {
    auto it = std::find_if(concepts_.begin(), concepts_.end(),
                           [&](const MotionConcept& c) { return c.designation == designation; });
    if (it == concepts_.end())
        throw Error("registry: no concept named '" + designation + "'");
    MotionConcept& c = *it;

    const std::vector<int> incoming_objects = dominant_objects(p);
    const int incoming_location = dominant_location(p);

    long object_agreements = 0;
    long location_agreements = 0;
    for (const auto& prior : c.prototypes) {
        if (dominant_objects(prior) == incoming_objects) ++object_agreements;
        if (dominant_location(prior) == incoming_location) ++location_agreements;
    }
    const double half = static_cast<double>(c.prototypes.size()) / 2.0;
    c.k_rho *= (object_agreements > half) ? (1.0 + config_.alpha_k) : (1.0 - config_.alpha_k);
    c.k_lambda *=
        (location_agreements > half) ? (1.0 + config_.alpha_k) : (1.0 - config_.alpha_k);

    c.prototypes.push_back(std::move(p));
    return c;
}

namespace {

json prototype_to_json(const MotionPrototype& p) {
    return json{{"tau", p.tau}, {"rho", p.rho}, {"lambda", p.lambda}};
}

MotionPrototype prototype_from_json(const json& j) {
    MotionPrototype p;
    p.tau = j.at("tau").get<std::vector<std::vector<int>>>();
    p.rho = j.at("rho").get<std::vector<std::vector<double>>>();
    p.lambda = j.at("lambda").get<std::vector<double>>();
    return p;
}

} // namespace

json ConceptRegistry::to_json() const {
    json j;
    j["catalog"] = {{"name", catalog_.name},
                    {"objects", catalog_.objects},
                    {"locations", catalog_.locations}};
    j["config"] = {{"k_rho0", config_.k_rho0},
                   {"k_lambda0", config_.k_lambda0},
                   {"alpha_k", config_.alpha_k}};
    j["library"] = library_.to_json();
    json concepts = json::array();
    for (const auto& c : concepts_) {
        json prototypes = json::array();
        for (const auto& p : c.prototypes) prototypes.push_back(prototype_to_json(p));
        concepts.push_back({{"designation", c.designation},
                            {"k_rho", c.k_rho},
                            {"k_lambda", c.k_lambda},
                            {"prototypes", std::move(prototypes)}});
    }
    j["concepts"] = std::move(concepts);
    return j;
}

ConceptRegistry ConceptRegistry::from_json(const json& j) {
    EnvironmentCatalog catalog;
    const json& cj = j.at("catalog");
    catalog.name = cj.at("name").get<std::string>();
    catalog.objects = cj.at("objects").get<std::vector<std::string>>();
    catalog.locations = cj.at("locations").get<std::vector<std::string>>();

    ConceptConfig config;
    const json& fj = j.at("config");
    config.k_rho0 = fj.at("k_rho0").get<double>();
    config.k_lambda0 = fj.at("k_lambda0").get<double>();
    config.alpha_k = fj.at("alpha_k").get<double>();

    ConceptRegistry reg(std::move(catalog), PrimitiveLibrary::from_json(j.at("library")),
                        config);
    for (const auto& cjn : j.at("concepts")) {
        MotionConcept c;
        c.designation = cjn.at("designation").get<std::string>();
        c.k_rho = cjn.at("k_rho").get<double>();
        c.k_lambda = cjn.at("k_lambda").get<double>();
        for (const auto& pj : cjn.at("prototypes"))
            c.prototypes.push_back(prototype_from_json(pj));
        for (const auto& p : c.prototypes)
            for (const auto& tau_k : p.tau)
                for (int id : tau_k)
                    if (!reg.library_.contains(id))
                        throw ValidationError("registry: concept '" + c.designation +
                                              "' references unknown primitive " +
                                              std::to_string(id));
        reg.concepts_.push_back(std::move(c));
    }
    return reg;
}

ConceptRegistry load_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open registry file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("registry " + path.string() + ": " + e.what());
    }
    return ConceptRegistry::from_json(j);
}

void save_registry(const ConceptRegistry& registry, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write registry file: " + path.string());
    out << registry.to_json().dump() << "\n";
}

} // namespace omcl
