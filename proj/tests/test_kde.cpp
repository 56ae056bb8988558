#include <doctest.h>

#include "omcl/kde.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace omcl;

namespace {

// Direct-evaluation oracle: densities summed in linear space.
double direct_log_density(const MotionPrimitive& p, const FeatureVector& f) {
    double density = 0.0;
    for (const auto& c : p.components) {
        double comp = c.weight;
        for (std::size_t d = 0; d < f.size(); ++d) {
            const double diff = f[d] - c.mean[d];
            comp *= std::exp(-0.5 * diff * diff / c.variance[d]) /
                    std::sqrt(2.0 * M_PI * c.variance[d]);
        }
        density += comp;
    }
    return std::log(density);
}

KdeParams test_params(int dim) {
    KdeParams p;
    p.feature_dim = dim;
    p.novelty_log_threshold = KdeParams::default_novelty_threshold(dim, p.seed_sigma);
    return p;
}

} // namespace

TEST_CASE("log_density analytic cases") {
    MotionPrimitive p;
    p.id = 0;
    p.sample_count = 1;
    p.components.push_back({1.0, {0.3, -0.7}, {1.0, 1.0}});

    SUBCASE("peak of a unit Gaussian in 2d") {
        CHECK(log_density(p, {0.3, -0.7}) ==
              doctest::Approx(std::log(1.0 / (2.0 * M_PI))).epsilon(1e-12));
    }
    SUBCASE("two identical equal-weight components collapse") {
        MotionPrimitive q = p;
        q.components[0].weight = 0.5;
        q.components.push_back(q.components[0]);
        const FeatureVector f = {0.9, 0.1};
        CHECK(log_density(q, f) == doctest::Approx(log_density(p, f)).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch via library") {
        PrimitiveLibrary lib(test_params(2));
        lib.observe({0.0, 0.0});
        CHECK_THROWS_AS(lib.log_density(0, {0.0, 0.0, 0.0}), ValidationError);
    }
}

TEST_CASE("log_density matches the direct-summation oracle on 1000 random mixtures") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 7);
        MotionPrimitive p;
        p.id = 0;
        p.sample_count = 3;
        double wsum = 0.0;
        for (int c = 0; c < 3; ++c) {
            GaussianComponent comp;
            comp.weight = 0.1 + u(rng);
            wsum += comp.weight;
            for (int d = 0; d < dim; ++d) {
                comp.mean.push_back(2.0 * u(rng) - 1.0);
                comp.variance.push_back(0.05 + u(rng));
            }
            p.components.push_back(std::move(comp));
        }
        for (auto& c : p.components) c.weight /= wsum;

        FeatureVector f;
        for (int d = 0; d < dim; ++d) f.push_back(2.0 * u(rng) - 1.0);
        if (std::abs(log_density(p, f) - direct_log_density(p, f)) > 1e-9) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("best_primitive") {
    SUBCASE("single primitive wins by default") {
        PrimitiveLibrary lib(test_params(2));
        lib.observe({0.1, 0.2});
        CHECK(lib.best_primitive({5.0, 5.0}).first == 0);
    }
    SUBCASE("isotropic Gaussians rank by distance") {
        PrimitiveLibrary lib(test_params(2));
        lib.observe({0.0, 0.0});
        lib.observe({1.0, 1.0}); // far beyond the default threshold: new primitive
        REQUIRE(lib.size() == 2);
        CHECK(lib.best_primitive({0.2, 0.1}).first == 0);
        CHECK(lib.best_primitive({0.9, 0.8}).first == 1);
    }
    SUBCASE("agrees with an exhaustive direct-evaluation scan") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        PrimitiveLibrary lib(test_params(3));
        for (int i = 0; i < 5; ++i)
            lib.observe({0.3 * i + u(rng) * 0.01, u(rng) * 0.01, u(rng) * 0.01});
        REQUIRE(lib.size() == 5);
        for (int q = 0; q < 100; ++q) {
            // near some primitive so the linear-space oracle cannot underflow
            const FeatureVector f = {0.3 * static_cast<double>(rng() % 5) + u(rng) * 0.1,
                                     u(rng) * 0.1, u(rng) * 0.1};
            int best = -1;
            double best_log = -1e300;
            for (const auto& [id, prim] : lib.primitives()) {
                const double ld = direct_log_density(prim, f);
                if (best < 0 || ld > best_log + 1e-12) {
                    best = id;
                    best_log = ld;
                }
            }
            CHECK(lib.best_primitive(f).first == best);
        }
    }
    SUBCASE("empty library refuses") {
        PrimitiveLibrary lib(test_params(2));
        CHECK_THROWS(lib.best_primitive({0.0, 0.0}));
    }
}

TEST_CASE("observe grows and updates the library") {
    SUBCASE("first observation founds primitive 0") {
        PrimitiveLibrary lib(test_params(4));
        CHECK(lib.observe({0, 0, 0, 0}) == 0);
        CHECK(lib.primitive(0).sample_count == 1);
        CHECK(lib.primitive(0).components.size() == 1);
    }
    SUBCASE("re-observing the same feature updates, not creates") {
        PrimitiveLibrary lib(test_params(4));
        lib.observe({0, 0, 0, 0});
        CHECK(lib.observe({0, 0, 0, 0}) == 0);
        CHECK(lib.size() == 1);
        CHECK(lib.primitive(0).sample_count == 2);
    }
    SUBCASE("features beyond the seed ball found new primitives") {
        KdeParams params = test_params(4);
        params.novelty_log_threshold = -50.0;
        // seed Gaussian log-density at distance 1: far below -50
        const double at_far = -0.5 * 4 * std::log(2.0 * M_PI * 0.05 * 0.05) -
                              0.5 / (0.05 * 0.05);
        REQUIRE(at_far < -50.0);
        PrimitiveLibrary lib(params);
        lib.observe({0, 0, 0, 0});
        lib.observe({1, 0, 0, 0});
        CHECK(lib.size() == 2);
    }
}

TEST_CASE("observe keeps mixture weights normalized and capped") {
    KdeParams params = test_params(3);
    params.component_cap = 4;
    PrimitiveLibrary lib(params);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.02, 0.02);
    for (int i = 0; i < 60; ++i)
        lib.observe({u(rng), u(rng), u(rng)});

    REQUIRE(lib.size() == 1);
    const MotionPrimitive& p = lib.primitive(0);
    CHECK(p.sample_count == 60);
    CHECK(static_cast<int>(p.components.size()) <= 4);
    double w = 0.0;
    for (const auto& c : p.components) {
        w += c.weight;
        for (double v : c.variance) CHECK(v >= params.variance_floor);
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("observing a primitive's own mean never creates a new primitive") {
    PrimitiveLibrary lib(test_params(3));
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) lib.observe({4.0 * u(rng), 4.0 * u(rng), 4.0 * u(rng)});
    const int before = lib.size();
    for (const auto& [id, p] : lib.primitives()) {
        const int got = lib.observe(p.components.front().mean);
        CHECK(got == id);
    }
    CHECK(lib.size() == before);
}

TEST_CASE("library snapshots round-trip bit-exactly") {
    PrimitiveLibrary lib(test_params(3));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 30; ++i) lib.observe({u(rng), u(rng), u(rng)});

    const std::string once = lib.to_json().dump();
    const PrimitiveLibrary back = PrimitiveLibrary::from_json(nlohmann::json::parse(once));
    CHECK(back.to_json().dump() == once);

    // reloaded library keeps assigning fresh ids
    PrimitiveLibrary grow = back;
    const int next = grow.observe({100.0, 100.0, 100.0});
    CHECK(next == lib.size());
}
