#include <doctest.h>

#include "omcl/concepts.hpp"

#include <nlohmann/json.hpp>

#include <random>

using namespace omcl;

namespace {

EnvironmentCatalog catalog4() {
    EnvironmentCatalog c;
    c.name = "test";
    c.objects = {"Knife", "Fork", "Mug", "Glass"};
    c.locations = {"Kitchen", "Living-Room", "Bathroom"};
    return c;
}

MotionPrototype proto(std::vector<int> tau, std::vector<double> rho,
                      std::vector<double> lambda) {
    MotionPrototype p;
    p.tau = {std::move(tau)};
    p.rho = {std::move(rho)};
    p.lambda = std::move(lambda);
    return p;
}

ConceptRegistry fresh_registry() {
    KdeParams kde;
    kde.feature_dim = 6;
    kde.novelty_log_threshold = KdeParams::default_novelty_threshold(6, kde.seed_sigma);
    return ConceptRegistry(catalog4(), PrimitiveLibrary(kde), ConceptConfig{});
}

} // namespace

TEST_CASE("create_concept uses the configured initial weights") {
    ConceptRegistry reg = fresh_registry();
    const MotionConcept& c =
        reg.create_concept(proto({0}, {1, 0, 0, 0}, {1, 0, 0}), "Wave");
    CHECK(c.k_rho == 0.05);
    CHECK(c.k_lambda == 0.005);
    CHECK(reg.concepts().size() == 1);
    CHECK(reg.contains("Wave"));

    CHECK_THROWS(reg.create_concept(proto({0}, {0, 0, 0, 0}, {1, 0, 0}), "Wave"));
    CHECK_THROWS(reg.create_concept(proto({0}, {0, 0, 0, 0}, {1, 0, 0}), ""));
}

TEST_CASE("dominant objects and locations") {
    SUBCASE("clear winner") {
        const auto dom = dominant_objects(proto({0}, {0.1, 0.0, 0.8, 0.05}, {1, 0, 0}));
        CHECK(dom == std::vector<int>{2});
    }
    SUBCASE("all-zero channel returns the none sentinel") {
        CHECK(dominant_objects(proto({0}, {0, 0, 0, 0}, {1, 0, 0})) ==
              std::vector<int>{kNoObject});
    }
    SUBCASE("exact ties break toward the smaller catalog index") {
        CHECK(dominant_objects(proto({0}, {0.5, 0.5, 0, 0}, {1, 0, 0})) ==
              std::vector<int>{0});
        CHECK(dominant_location(proto({0}, {1, 0, 0, 0}, {0.5, 0.5, 0.0})) == 0);
    }
}

TEST_CASE("update_concept adapts weights by exactly (1 +- alpha)") {
    ConceptRegistry reg = fresh_registry();
    // Drink(Mug, Kitchen)
    reg.create_concept(proto({0, 1}, {0, 0, 0.9, 0}, {1, 0, 0}), "Drink");

    SUBCASE("agreement on both channels grows both weights") {
        const MotionConcept& c =
            reg.update_concept("Drink", proto({0, 1}, {0, 0, 0.7, 0.1}, {0.8, 0.2, 0}));
        CHECK(c.k_rho == 0.05 * 1.1);
        CHECK(c.k_lambda == 0.005 * 1.1);
        CHECK(c.prototypes.size() == 2);
    }
    SUBCASE("object disagreement shrinks k_rho only") {
        const MotionConcept& c =
            reg.update_concept("Drink", proto({0, 1}, {0, 0, 0.1, 0.8}, {1, 0, 0}));
        CHECK(c.k_rho == 0.05 * 0.9);
        CHECK(c.k_lambda == 0.005 * 1.1);
    }
    SUBCASE("strict majority of prior prototypes decides") {
        reg.update_concept("Drink", proto({0}, {0, 0, 0.8, 0}, {1, 0, 0}));   // Mug
        reg.update_concept("Drink", proto({0}, {0, 0, 0.1, 0.9}, {1, 0, 0})); // Glass
        // priors: Mug, Mug, Glass -> incoming Mug agrees with 2 of 3
        const double before = reg.concept_named("Drink").k_rho;
        const MotionConcept& c =
            reg.update_concept("Drink", proto({0}, {0, 0, 1.0, 0}, {1, 0, 0}));
        CHECK(c.k_rho == before * 1.1);
    }
    SUBCASE("unknown designation") {
        CHECK_THROWS(reg.update_concept("Jump", proto({0}, {0, 0, 0, 0}, {1, 0, 0})));
    }
}

TEST_CASE("stored prototypes are never modified by updates") {
    ConceptRegistry reg = fresh_registry();
    const MotionPrototype first = proto({3, 1, 2}, {0.2, 0, 0.6, 0}, {0, 1, 0});
    reg.create_concept(first, "Pet");
    for (int i = 0; i < 5; ++i)
        reg.update_concept("Pet", proto({1}, {0, double(i % 2), 0, 0}, {0, 0, 1}));

    const MotionConcept& c = reg.concept_named("Pet");
    CHECK(c.prototypes.size() == 6);
    CHECK(c.prototypes[0].tau == first.tau);
    CHECK(c.prototypes[0].rho == first.rho);
    CHECK(c.prototypes[0].lambda == first.lambda);
}

TEST_CASE("weights stay strictly positive under any update sequence") {
    ConceptRegistry reg = fresh_registry();
    reg.create_concept(proto({0}, {1, 0, 0, 0}, {1, 0, 0}), "X");
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const bool agree = rng() % 2;
        reg.update_concept("X", proto({0}, {agree ? 1.0 : 0.0, agree ? 0.0 : 1.0, 0, 0},
                                      {1, 0, 0}));
        CHECK(reg.concept_named("X").k_rho > 0.0);
        CHECK(reg.concept_named("X").k_lambda > 0.0);
    }
}

TEST_CASE("registry snapshots round-trip bit-exactly") {
    ConceptRegistry reg = fresh_registry();
    reg.library().observe({0.1, 0.2, 0.3, 0.0, 0.0, 0.0});
    reg.library().observe({5.1, 0.2, 0.3, 0.0, 0.0, 0.0});
    reg.create_concept(proto({0, 1, 0}, {0.25, 0, 0.125, 0}, {0.5, 0.25, 0.25}), "A");
    reg.create_concept(proto({1}, {1.0 / 3.0, 0, 0, 0}, {0, 1, 0}), "B");
    reg.update_concept("A", proto({0}, {0.2, 0, 0, 0}, {1, 0, 0}));

    const std::string once = reg.to_json().dump();
    const ConceptRegistry back = ConceptRegistry::from_json(nlohmann::json::parse(once));
    CHECK(back.to_json().dump() == once);
    CHECK(back.concepts().size() == 2);
    CHECK(back.concept_named("A").prototypes.size() == 2);
}

TEST_CASE("snapshots referencing unknown primitives are rejected") {
    ConceptRegistry reg = fresh_registry();
    reg.library().observe({0, 0, 0, 0, 0, 0});
    reg.create_concept(proto({0}, {1, 0, 0, 0}, {1, 0, 0}), "A");
    nlohmann::json j = reg.to_json();
    j["concepts"][0]["prototypes"][0]["tau"][0][0] = 42;
    CHECK_THROWS_AS(ConceptRegistry::from_json(j), ValidationError);
}
