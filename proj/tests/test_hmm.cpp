#include <doctest.h>

#include "omcl/hmm.hpp"
#include "omcl/synthetic.hpp"

#include <cmath>
#include <random>

using namespace omcl;

namespace {

FeatureSequence random_sequence(std::mt19937_64& rng, int frames, int dim, double spread) {
    std::normal_distribution<double> g(0.0, spread);
    FeatureSequence seq(frames, std::vector<double>(dim));
    for (auto& f : seq)
        for (auto& v : f) v = g(rng);
    return seq;
}

double component_log(const GaussianComponent& c, const std::vector<double>& x) {
    double lp = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - c.mean[d];
        lp += -0.5 * std::log(2.0 * M_PI * c.variance[d]) - 0.5 * diff * diff / c.variance[d];
    }
    return lp;
}

double emission_log(const GmmHmmModel& m, int state, const std::vector<double>& x) {
    double density = 0.0;
    for (const auto& c : m.emissions[state])
        density += c.weight * std::exp(component_log(c, x));
    return std::log(density);
}

// exhaustive path-sum oracle: log sum over all h^T state paths
double loglik_oracle(const GmmHmmModel& m, const FeatureSequence& seq) {
    const int t_len = static_cast<int>(seq.size());
    std::vector<int> path(t_len, 0);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    while (true) {
        double lp = std::log(m.initial[path[0]]) + emission_log(m, path[0], seq[0]);
        for (int t = 1; t < t_len; ++t)
            lp += std::log(m.transition[path[t - 1]][path[t]]) +
                  emission_log(m, path[t], seq[t]);
        logs.push_back(lp);
        best = std::max(best, lp);
        int t = t_len - 1;
        while (t >= 0 && ++path[t] == m.states) path[t--] = 0;
        if (t < 0) break;
    }
    double sum = 0.0;
    for (double lp : logs) sum += std::exp(lp - best);
    return best + std::log(sum);
}

} // namespace

TEST_CASE("hmm_features shape and origin shift") {
    GeneratorConfig cfg;
    cfg.seed = 2;
    const Demonstration d = generate_demo("Cut", cfg, 0);
    const FeatureSequence seq = hmm_features(d);
    REQUIRE(static_cast<int>(seq.size()) == d.sample_count());
    CHECK(seq.front().size() == 18); // K = 3 channels
    for (double v : seq.front()) CHECK(v == 0.0);
}

TEST_CASE("stationary demonstration maps to all-zero features") {
    Demonstration d;
    d.sample_rate = 60.0;
    MotionStream s;
    const Eigen::Quaterniond q(Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitX()));
    for (int t = 0; t < 30; ++t) {
        s.positions.emplace_back(0.3, 0.2, 1.0);
        s.orientations.push_back(q);
    }
    d.motion = {s, s};
    const FeatureSequence seq = hmm_features(d);
    for (const auto& f : seq)
        for (double v : f) CHECK(v == doctest::Approx(0.0).scale(1e-12));
}

TEST_CASE("single-state single-component training hits the sample statistics") {
    std::mt19937_64 rng(3);
    const FeatureSequence seq = random_sequence(rng, 50, 3, 0.8);
    GmmHmmParams params;
    params.states = 1;
    params.components = 1;
    params.iterations = 3;
    const GmmHmmModel m = hmm_train({seq}, params);

    for (int d = 0; d < 3; ++d) {
        double mean = 0.0;
        for (const auto& f : seq) mean += f[d];
        mean /= seq.size();
        double var = 0.0;
        for (const auto& f : seq) var += (f[d] - mean) * (f[d] - mean);
        var = std::max(var / seq.size(), params.variance_floor);
        CHECK(m.emissions[0][0].mean[d] == doctest::Approx(mean).epsilon(1e-9));
        CHECK(m.emissions[0][0].variance[d] == doctest::Approx(var).epsilon(1e-9));
    }
}

TEST_CASE("degenerate all-identical frames survive via the variance floor") {
    FeatureSequence seq(40, std::vector<double>(2, 0.5));
    GmmHmmParams params;
    params.states = 2;
    params.components = 2;
    params.iterations = 4;
    const GmmHmmModel m = hmm_train({seq}, params);
    for (const auto& state : m.emissions)
        for (const auto& c : state)
            for (double v : c.variance) CHECK(v >= params.variance_floor);
    CHECK(std::isfinite(hmm_loglik(m, seq)));
}

TEST_CASE("EM log-likelihood is non-decreasing on 20 seeded runs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed * 7919 + 1);
        std::vector<FeatureSequence> data = {random_sequence(rng, 40, 3, 1.0),
                                             random_sequence(rng, 35, 3, 1.0)};
        GmmHmmParams params;
        params.states = 3;
        params.components = 2;
        params.iterations = 10;
        params.seed = seed;
        const GmmHmmModel m = hmm_train(data, params);
        REQUIRE(m.training_loglik.size() == 11);
        for (std::size_t i = 1; i < m.training_loglik.size(); ++i) {
            const double prev = m.training_loglik[i - 1];
            CHECK(m.training_loglik[i] >= prev - 1e-6 * (1.0 + std::abs(prev)));
        }
    }
}

TEST_CASE("stochasticity invariants hold after training") {
    std::mt19937_64 rng(17);
    const FeatureSequence seq = random_sequence(rng, 60, 2, 1.0);
    GmmHmmParams params;
    params.states = 4;
    params.components = 3;
    params.iterations = 6;
    const GmmHmmModel m = hmm_train({seq}, params);

    double pi = 0.0;
    for (double v : m.initial) pi += v;
    CHECK(pi == doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 0; i < m.states; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.states; ++j) row += m.transition[i][j];
        CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
        double w = 0.0;
        for (const auto& c : m.emissions[i]) w += c.weight;
        CHECK(w == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("forward log-likelihood equals exhaustive path summation") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const int h = 1 + static_cast<int>(rng() % 3);
        const int t_len = 1 + static_cast<int>(rng() % 4);
        const FeatureSequence seq = random_sequence(rng, t_len, 2, 1.0);
        GmmHmmParams params;
        params.states = h;
        params.components = 2;
        params.iterations = 2;
        params.seed = trial;
        const GmmHmmModel m = hmm_train({random_sequence(rng, 12, 2, 1.0)}, params);
        CHECK(hmm_loglik(m, seq) == doctest::Approx(loglik_oracle(m, seq)).epsilon(1e-9));
    }
}

TEST_CASE("forward collapses to a plain Gaussian sum when h = k = 1") {
    std::mt19937_64 rng(29);
    const FeatureSequence train = random_sequence(rng, 30, 2, 1.0);
    GmmHmmParams params;
    params.states = 1;
    params.components = 1;
    params.iterations = 2;
    const GmmHmmModel m = hmm_train({train}, params);

    const FeatureSequence query = random_sequence(rng, 8, 2, 1.0);
    double direct = 0.0;
    for (const auto& f : query) direct += component_log(m.emissions[0][0], f);
    CHECK(hmm_loglik(m, query) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("far-off queries stay finite under scaling") {
    std::mt19937_64 rng(31);
    const FeatureSequence train = random_sequence(rng, 40, 3, 0.5);
    GmmHmmParams params;
    params.states = 4;
    params.components = 2;
    params.iterations = 4;
    const GmmHmmModel m = hmm_train({train}, params);

    FeatureSequence far = random_sequence(rng, 40, 3, 0.5);
    for (auto& f : far)
        for (auto& v : f) v += 1000.0;
    CHECK(std::isfinite(hmm_loglik(m, far)));
}

TEST_CASE("classification picks the likeliest class, ties lexicographic") {
    std::mt19937_64 rng(37);
    const FeatureSequence a = random_sequence(rng, 40, 2, 0.2);
    FeatureSequence b = random_sequence(rng, 40, 2, 0.2);
    for (auto& f : b)
        for (auto& v : f) v += 5.0;

    GmmHmmParams params;
    params.states = 2;
    params.components = 1;
    params.iterations = 4;
    std::map<std::string, GmmHmmModel> models;
    models.emplace("near", hmm_train({a}, params));
    models.emplace("far", hmm_train({b}, params));
    CHECK(hmm_classify(models, a) == "near");
    CHECK(hmm_classify(models, b) == "far");

    std::map<std::string, GmmHmmModel> twins;
    twins.emplace("zebra", models.at("near"));
    twins.emplace("aardvark", models.at("near"));
    CHECK(hmm_classify(twins, a) == "aardvark");

    CHECK_THROWS_AS(hmm_classify({}, a), ValidationError);
}

TEST_CASE("omcl_n_recognize follows the motion term only") {
    EnvironmentCatalog cat;
    cat.name = "c";
    cat.objects = {"Mug", "Sponge"};
    cat.locations = {"Kitchen", "Bathroom"};
    KdeParams kde;
    kde.feature_dim = 6;
    kde.novelty_log_threshold = KdeParams::default_novelty_threshold(6, kde.seed_sigma);
    ConceptRegistry reg(cat, PrimitiveLibrary(kde), ConceptConfig{});

    MotionPrototype a;
    a.tau = {{1, 2, 1}};
    a.rho = {{0.0, 0.9}};
    a.lambda = {0.0, 1.0};
    MotionPrototype b;
    b.tau = {{3, 4, 3}};
    b.rho = {{0.9, 0.0}};
    b.lambda = {1.0, 0.0};
    reg.create_concept(a, "A");
    reg.create_concept(b, "B");

    // tau matches A, context matches B: the ablation must pick A
    MotionPrototype query;
    query.tau = {{1, 2, 1}};
    query.rho = {{0.9, 0.0}};
    query.lambda = {1.0, 0.0};
    RecognitionParams params;
    CHECK(omcl_n_recognize(reg, query, params).designation == "A");
    CHECK(recognize(reg, query, params).designation == "A"); // motion dominates here too

    // with all context costs zero the two paths coincide exactly
    const RecognitionDecision full = recognize(reg, a, params);
    const RecognitionDecision ablated = omcl_n_recognize(reg, a, params);
    CHECK(full.designation == ablated.designation);
    CHECK(*full.best_cost == *ablated.best_cost);
}

TEST_CASE("a one-shot model prefers its own class") {
    GeneratorConfig cfg;
    cfg.seed = 41;
    GmmHmmParams params;
    params.states = 4;
    params.components = 1;
    params.iterations = 5;

    const Demonstration wave = generate_demo("Wave", cfg, 0);
    const Demonstration stir = generate_demo("Stir Pot", cfg, 0);
    const GmmHmmModel wave_model = hmm_train({hmm_features(wave)}, params);
    const GmmHmmModel stir_model = hmm_train({hmm_features(stir)}, params);

    const FeatureSequence wave_query = hmm_features(generate_demo("Wave", cfg, 1));
    CHECK(hmm_loglik(wave_model, wave_query) > hmm_loglik(stir_model, wave_query));
}
