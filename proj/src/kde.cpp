#include "omcl/kde.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace omcl {

using nlohmann::json;

double KdeParams::default_novelty_threshold(int dim, double seed_sigma) {
    return -0.5 * dim * std::log(2.0 * std::numbers::pi * seed_sigma * seed_sigma) - 12.5;
}

void KdeParams::check() const {
    if (feature_dim < 1) throw ValidationError("kde: feature_dim must be >= 1");
    if (!(seed_sigma > 0.0)) throw ValidationError("kde: seed_sigma must be > 0");
    if (!(variance_floor > 0.0)) throw ValidationError("kde: variance_floor must be > 0");
    if (component_cap < 1) throw ValidationError("kde: component_cap must be >= 1");
}

double log_density(const MotionPrimitive& p, const FeatureVector& f, double log_floor) {
    constexpr double log_two_pi = 1.8378770664093454836;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    logs.reserve(p.components.size());
    for (const auto& c : p.components) {
        double quad = 0.0, logdet = 0.0;
        for (std::size_t d = 0; d < c.mean.size(); ++d) {
            const double diff = f[d] - c.mean[d];
            quad += diff * diff / c.variance[d];
            logdet += std::log(c.variance[d]);
        }
        const double lp = std::log(c.weight) -
                          0.5 * (static_cast<double>(c.mean.size()) * log_two_pi + logdet + quad);
        logs.push_back(lp);
        best = std::max(best, lp);
    }
    if (!std::isfinite(best)) return log_floor;
    double sum = 0.0;
    for (double lp : logs) sum += std::exp(lp - best);
    const double result = best + std::log(sum);
    return std::isfinite(result) ? std::max(result, log_floor) : log_floor;
}

PrimitiveLibrary::PrimitiveLibrary(KdeParams params) : params_(params) {
    params_.check();
}

const MotionPrimitive& PrimitiveLibrary::primitive(int id) const {
    auto it = primitives_.find(id);
    if (it == primitives_.end())
        throw Error("primitive library: unknown id " + std::to_string(id));
    return it->second;
}

void PrimitiveLibrary::check_dim(const FeatureVector& f) const {
    if (static_cast<int>(f.size()) != params_.feature_dim)
        throw ValidationError("primitive library: feature dimension " +
                              std::to_string(f.size()) + " != configured " +
                              std::to_string(params_.feature_dim));
}

double PrimitiveLibrary::log_density(int id, const FeatureVector& f) const {
    check_dim(f);
    return omcl::log_density(primitive(id), f, params_.log_floor);
}

std::pair<int, double> PrimitiveLibrary::best_primitive(const FeatureVector& f) const {
    check_dim(f);
    if (primitives_.empty())
        throw Error("primitive library: best_primitive on an empty library");
    int best_id = -1;
    double best_log = -std::numeric_limits<double>::infinity();
    for (const auto& [id, p] : primitives_) {
        const double lp = omcl::log_density(p, f, params_.log_floor);
        if (best_id < 0 || lp > best_log) {
            best_id = id;
            best_log = lp;
        }
    }
    return {best_id, best_log};
}

int PrimitiveLibrary::observe(const FeatureVector& f) {
    check_dim(f);

    const double seed_var =
        std::max(params_.seed_sigma * params_.seed_sigma, params_.variance_floor);

    if (!primitives_.empty()) {
        const auto [best_id, best_log] = best_primitive(f);
        if (best_log >= params_.novelty_log_threshold) {
            MotionPrimitive& p = primitives_.at(best_id);
            const double n = static_cast<double>(p.sample_count);
            for (auto& c : p.components) c.weight *= n / (n + 1.0);
            p.components.push_back(
                {1.0 / (n + 1.0), f, std::vector<double>(f.size(), seed_var)});
            p.sample_count += 1;

            while (static_cast<int>(p.components.size()) > params_.component_cap) {
                // merge the closest pair of components, moment-matched
                std::size_t bi = 0, bj = 1;
                double best_dist = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i + 1 < p.components.size(); ++i) {
                    for (std::size_t j = i + 1; j < p.components.size(); ++j) {
                        double dist = 0.0;
                        for (std::size_t d = 0; d < f.size(); ++d) {
                            const double diff =
                                p.components[i].mean[d] - p.components[j].mean[d];
                            dist += diff * diff;
                        }
                        if (dist < best_dist) {
                            best_dist = dist;
                            bi = i;
                            bj = j;
                        }
                    }
                }
                GaussianComponent& a = p.components[bi];
                const GaussianComponent& b = p.components[bj];
                const double w = a.weight + b.weight;
                for (std::size_t d = 0; d < f.size(); ++d) {
                    const double m = (a.weight * a.mean[d] + b.weight * b.mean[d]) / w;
                    const double second =
                        (a.weight * (a.variance[d] + a.mean[d] * a.mean[d]) +
                         b.weight * (b.variance[d] + b.mean[d] * b.mean[d])) /
                        w;
                    a.mean[d] = m;
                    a.variance[d] = std::max(second - m * m, params_.variance_floor);
                }
                a.weight = w;
                p.components.erase(p.components.begin() + static_cast<long>(bj));
            }

            double total = 0.0;
            for (const auto& c : p.components) total += c.weight;
            for (auto& c : p.components) c.weight /= total;
            return best_id;
        }
    }

    MotionPrimitive p;
    p.id = next_id_++;
    p.sample_count = 1;
    p.components.push_back({1.0, f, std::vector<double>(f.size(), seed_var)});
    primitives_.emplace(p.id, std::move(p));
    return next_id_ - 1;
}

json PrimitiveLibrary::to_json() const {
    json j;
    j["feature_dim"] = params_.feature_dim;
    j["seed_sigma"] = params_.seed_sigma;
    j["variance_floor"] = params_.variance_floor;
    j["component_cap"] = params_.component_cap;
    j["novelty_log_threshold"] = params_.novelty_log_threshold;
    j["log_floor"] = params_.log_floor;
    j["next_id"] = next_id_;
    json prims = json::array();
    for (const auto& [id, p] : primitives_) {
        json comps = json::array();
        for (const auto& c : p.components)
            comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"variance", c.variance}});
        prims.push_back(
            {{"id", id}, {"sample_count", p.sample_count}, {"components", std::move(comps)}});
    }
    j["primitives"] = std::move(prims);
    return j;
}

PrimitiveLibrary PrimitiveLibrary::from_json(const json& j) {
    KdeParams params;
    params.feature_dim = j.at("feature_dim").get<int>();
    params.seed_sigma = j.at("seed_sigma").get<double>();
    params.variance_floor = j.at("variance_floor").get<double>();
    params.component_cap = j.at("component_cap").get<int>();
    params.novelty_log_threshold = j.at("novelty_log_threshold").get<double>();
    params.log_floor = j.at("log_floor").get<double>();
    PrimitiveLibrary lib(params);
    lib.next_id_ = j.at("next_id").get<int>();
    for (const auto& pj : j.at("primitives")) {
        MotionPrimitive p;
        p.id = pj.at("id").get<int>();
        p.sample_count = pj.at("sample_count").get<long>();
        for (const auto& cj : pj.at("components")) {
            GaussianComponent c;
            c.weight = cj.at("weight").get<double>();
            c.mean = cj.at("mean").get<std::vector<double>>();
            c.variance = cj.at("variance").get<std::vector<double>>();
            p.components.push_back(std::move(c));
        }
        lib.primitives_.emplace(p.id, std::move(p));
    }
    return lib;
}

} // namespace omcl
