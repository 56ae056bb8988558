#include "omcl/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omcl {

double dtw_01(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() || b.empty()) throw ValidationError("dtw_01: empty sequence");
    const std::size_t n = a.size(), m = b.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> prev(m + 1, inf), curr(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        curr[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double local = (a[i - 1] == b[j - 1]) ? 0.0 : 1.0;
            curr[j] = local + std::min({prev[j - 1], prev[j], curr[j - 1]});
        }
        std::swap(prev, curr);
    }
    return prev[m] / static_cast<double>(std::max(n, m));
}

double motion_cost(const MotionConcept& c, const std::vector<std::vector<int>>& tau) {
    double total = 0.0;
    long terms = 0;
    for (const auto& p : c.prototypes) {
        if (p.tau.size() != tau.size())
            throw ValidationError("motion_cost: channel count mismatch");
        for (std::size_t k = 0; k < tau.size(); ++k) {
            total += dtw_01(p.tau[k], tau[k]);
            ++terms;
        }
    }
    return total / static_cast<double>(terms);
}

double context_cost_objects(const MotionConcept& c,
                            const std::vector<std::vector<double>>& rho) {
    double total = 0.0;
    long terms = 0;
    for (const auto& p : c.prototypes) {
        if (p.rho.size() != rho.size())
            throw ValidationError("context_cost_objects: channel count mismatch");
        for (std::size_t m = 0; m < rho.size(); ++m) {
            double sum = 0.0;
            for (std::size_t o = 0; o < rho[m].size(); ++o)
                sum += std::abs(p.rho[m][o] - rho[m][o]);
            total += sum / static_cast<double>(rho[m].size());
            ++terms;
        }
    }
    return total / static_cast<double>(terms);
}

double context_cost_location(const MotionConcept& c, const std::vector<double>& lambda) {
    double total = 0.0;
    for (const auto& p : c.prototypes) {
        double sum = 0.0;
        for (std::size_t l = 0; l < lambda.size(); ++l)
            sum += std::abs(p.lambda[l] - lambda[l]);
        total += 0.5 * sum;
    }
    return total / static_cast<double>(c.prototypes.size());
}

double assignment_cost(const MotionConcept& c, const MotionPrototype& p) {
    return assignment_cost(c, p, c.k_rho, c.k_lambda);
}

double assignment_cost(const MotionConcept& c, const MotionPrototype& p, double k_rho,
                       double k_lambda) {
    return motion_cost(c, p.tau) + k_rho * context_cost_objects(c, p.rho) +
           k_lambda * context_cost_location(c, p.lambda);
}

RecognitionDecision decide_from_costs(std::vector<std::pair<std::string, double>> costs,
                                      const RecognitionParams& params) {
    RecognitionDecision decision;
    decision.per_concept_costs = std::move(costs);
    if (decision.per_concept_costs.empty()) {
        decision.outcome = Outcome::Novel;
        return decision;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < decision.per_concept_costs.size(); ++i)
        if (decision.per_concept_costs[i].second < decision.per_concept_costs[best].second)
            best = i;
    const double c_r = decision.per_concept_costs[best].second;
    decision.designation = decision.per_concept_costs[best].first;
    decision.best_cost = c_r;

    if (decision.per_concept_costs.size() == 1) {
        decision.outcome = (c_r <= params.c_abs) ? Outcome::Recognized : Outcome::Novel;
        return decision;
    }

    double rest = 0.0;
    for (std::size_t i = 0; i < decision.per_concept_costs.size(); ++i)
        if (i != best) rest += decision.per_concept_costs[i].second;
    const double c_w = rest / static_cast<double>(decision.per_concept_costs.size() - 1);
    decision.wrong_cost = c_w;

    decision.outcome = (std::abs(c_r - c_w) >= params.delta_c * c_r) ? Outcome::Recognized
                                                                     : Outcome::Novel;
    return decision;
}

RecognitionDecision recognize(const ConceptRegistry& reg, const MotionPrototype& p,
                              const RecognitionParams& params) {
    std::vector<std::pair<std::string, double>> costs;
    costs.reserve(reg.concepts().size());
    for (const auto& c : reg.concepts()) {
        const double cost = params.zero_context ? assignment_cost(c, p, 0.0, 0.0)
                                                : assignment_cost(c, p);
        costs.emplace_back(c.designation, cost);
    }
    return decide_from_costs(std::move(costs), params);
}

} // namespace omcl
