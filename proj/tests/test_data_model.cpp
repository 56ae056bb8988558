#include <doctest.h>

#include "omcl/demo_io.hpp"
#include "omcl/synthetic.hpp"

#include <nlohmann/json.hpp>

using namespace omcl;
using nlohmann::json;

namespace {

EnvironmentCatalog small_catalog() {
    EnvironmentCatalog c;
    c.name = "test";
    c.objects = {"Mug", "Glass", "Knife", "Fork"};
    c.locations = {"Kitchen", "Living-Room"};
    return c;
}

Demonstration small_demo(int samples = 6) {
    Demonstration d;
    d.label = "demo";
    d.sample_rate = 60.0;
    for (int k = 0; k < 2; ++k) {
        MotionStream s;
        for (int t = 0; t < samples; ++t) {
            s.positions.emplace_back(0.01 * t, 0.0, 1.0 + 0.001 * k);
            s.orientations.push_back(Eigen::Quaterniond::Identity());
        }
        d.motion.push_back(std::move(s));
    }
    for (int m = 0; m < 2; ++m) {
        ObjectStream s;
        s.observations.assign(samples, std::vector<std::uint8_t>(4, 0));
        d.objects.push_back(std::move(s));
    }
    d.location.locations.assign(samples, 0);
    return d;
}

} // namespace

TEST_CASE("catalog invariants") {
    EnvironmentCatalog c = small_catalog();
    c.check();
    CHECK(c.object_index("Knife") == 2);
    CHECK(c.object_index("Spoon") == -1);
    CHECK(c.location_index("Living-Room") == 1);

    c.objects.push_back("Mug");
    CHECK_THROWS_AS(c.check(), CatalogError);
    c = small_catalog();
    c.locations.clear();
    CHECK_THROWS_AS(c.check(), CatalogError);
}

TEST_CASE("parse of a synthetic record recovers T") {
    const EnvironmentCatalog catalog = household_catalog();
    GeneratorConfig cfg;
    cfg.seed = 5;
    const Demonstration d = generate_demo("Wave", cfg, 0);
    CHECK(d.motion_channels() == 3);
    CHECK(d.object_channels() == 3);
    CHECK(d.sample_count() == 360); // 6 s at 60 Hz

    const Demonstration parsed = parse_demonstration(serialize_demonstration(d, catalog), catalog);
    CHECK(parsed.time_steps() == 359);
    CHECK(parsed.label == "Wave");
}

TEST_CASE("parse rejects bad records") {
    const EnvironmentCatalog catalog = small_catalog();
    const Demonstration d = small_demo();
    json j = json::parse(serialize_demonstration(d, catalog));

    SUBCASE("location index outside the catalog") {
        j["location"][2] = 7;
        CHECK_THROWS_AS(parse_demonstration(j.dump(), catalog), CatalogError);
    }
    SUBCASE("stream length mismatch") {
        j["objects"][0].erase(5);
        j["objects"][0].erase(4);
        CHECK_THROWS_AS(parse_demonstration(j.dump(), catalog), ValidationError);
    }
    SUBCASE("malformed field names the problem") {
        j.erase("sample_rate");
        CHECK_THROWS_WITH_AS(parse_demonstration(j.dump(), catalog),
                             doctest::Contains("sample_rate"), ParseError);
    }
    SUBCASE("bit vector width") {
        j["objects"][1][3] = "01";
        CHECK_THROWS_AS(parse_demonstration(j.dump(), catalog), CatalogError);
    }
    SUBCASE("not json at all") {
        CHECK_THROWS_AS(parse_demonstration("{oops", catalog), ParseError);
    }
}

TEST_CASE("validate_demonstration reports violations as data") {
    const EnvironmentCatalog catalog = small_catalog();

    SUBCASE("well-formed") {
        CHECK(validate_demonstration(small_demo(), catalog).empty());
    }
    SUBCASE("quaternion off the unit sphere") {
        Demonstration d = small_demo();
        d.motion[1].orientations[3] = Eigen::Quaterniond(1.5, 0, 0, 0);
        const auto v = validate_demonstration(d, catalog);
        REQUIRE(v.size() == 1);
        CHECK(v[0].stream == "motion[1].orientations");
    }
    SUBCASE("non-binary object entry") {
        Demonstration d = small_demo();
        d.objects[0].observations[2][1] = 2;
        const auto v = validate_demonstration(d, catalog);
        REQUIRE(v.size() == 1);
        CHECK(v[0].stream == "objects[0].observations");
    }
    SUBCASE("several violations accumulate") {
        Demonstration d = small_demo();
        d.sample_rate = 0.0;
        d.location.locations[0] = 9;
        CHECK(validate_demonstration(d, catalog).size() == 2);
    }
}

TEST_CASE("serialize/parse round-trips bit-exactly") {
    const EnvironmentCatalog catalog = household_catalog();
    GeneratorConfig cfg;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        cfg.seed = seed;
        const Demonstration d = generate_demo("Stir Pot", cfg, seed);
        const std::string once = serialize_demonstration(d, catalog);
        const Demonstration back = parse_demonstration(once, catalog);
        const std::string twice = serialize_demonstration(back, catalog);
        CHECK(once == twice);

        REQUIRE(back.motion_channels() == d.motion_channels());
        for (int k = 0; k < d.motion_channels(); ++k) {
            for (int t = 0; t < d.sample_count(); ++t) {
                CHECK((back.motion[k].positions[t].array() ==
                       d.motion[k].positions[t].array())
                          .all());
                CHECK((back.motion[k].orientations[t].coeffs().array() ==
                       d.motion[k].orientations[t].coeffs().array())
                          .all());
            }
        }
        CHECK(back.location.locations == d.location.locations);
    }
}

TEST_CASE("every generator record validates cleanly") {
    const EnvironmentCatalog catalog = household_catalog();
    GeneratorConfig cfg;
    cfg.seed = 17;
    for (const auto& d : generate_dataset(cfg, 1)) {
        const Demonstration parsed =
            parse_demonstration(serialize_demonstration(d, catalog), catalog);
        CHECK(validate_demonstration(parsed, catalog).empty());
    }
}
