#include <catch2/catch_amalgamated.hpp>

#include <vs2/rescale.hpp>
#include <vs2/rng.hpp>

#include <support/oracles.hpp>

#include <set>
#include <string>

using namespace vs2;

// Literal transcription of the three piecewise case expressions, used as the
// oracle for mj_bench_map.
static std::array<int, 3> mj_oracle(int x_v, int x_t, int x_p) {
    int v, t, p;
    if (x_v == 1 || x_v == 2)
        v = 0;
    else if (x_v == 3 || x_v == 4)
        v = 1;
    else
        v = 2;
    if (x_t == 1)
        t = 0;
    else if (x_t == 2 || x_t == 3)
        t = 1;
    else
        t = 2;
    if (x_p == 1)
        p = 0;
    else if (x_p == 2 || x_p == 3)
        p = 1;
    else
        p = 2;
    return {v, t, p};
}

TEST_CASE("normal_quantile agrees with the bisection oracle") {
    for (double p : {0.2, 0.4, 0.6, 0.8}) {
        CHECK(normal_quantile(p) ==
              Catch::Approx(oracle::normal_quantile_bisect(p)).margin(1e-10));
    }
    // Reference magnitudes.
    CHECK(normal_quantile(0.2) == Catch::Approx(-0.8416).margin(5e-5));
    CHECK(normal_quantile(0.4) == Catch::Approx(-0.2533).margin(5e-5));
    CHECK(normal_quantile(0.6) == Catch::Approx(+0.2533).margin(5e-5));
    CHECK(normal_quantile(0.8) == Catch::Approx(+0.8416).margin(5e-5));
    // Wider sweep including the tails.
    for (double p = 0.001; p < 1.0; p += 0.0137) {
        CHECK(normal_quantile(p) ==
              Catch::Approx(oracle::normal_quantile_bisect(p)).margin(1e-9));
    }
    CHECK(normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("linear_rescale endpoints, midpoint, and hand case") {
    CHECK(linear_rescale(0.5, 0.0, 1.0) == 3);
    CHECK(linear_rescale(1.0, 0.0, 1.0) == 5);
    CHECK(linear_rescale(0.0, 0.0, 1.0) == 1);
    CHECK(linear_rescale(72.0, 0.0, 100.0) == 4);  // 1 + 4*0.72 = 3.88
    CHECK(linear_rescale(0.74, 0.0, 1.0) == 4);    // 3.96
    // Out-of-range inputs clamp to the endpoints.
    CHECK(linear_rescale(-3.0, 0.0, 1.0) == 1);
    CHECK(linear_rescale(9.0, 0.0, 1.0) == 5);
    CHECK_THROWS_AS(linear_rescale(0.5, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("linear_rescale matches a grid oracle and is monotone") {
    // Oracle on a 0.01 grid over [0,1]: y = 1 + 4x rounded half-up via
    // integer arithmetic on k (y*100 = 100 + 4k exactly).
    int prev = 1;
    for (int k = 0; k <= 100; ++k) {
        int y_times_100 = 100 + 4 * k;
        int want = (y_times_100 + 50) / 100;
        int got = linear_rescale(k / 100.0, 0.0, 1.0);
        CAPTURE(k);
        CHECK(got == want);
        CHECK(got >= prev);
        prev = got;
    }
}

TEST_CASE("gaussian_quantile_rescale piecewise rule") {
    CHECK(gaussian_quantile_rescale(0.0, 1.0) == 3);
    CHECK(gaussian_quantile_rescale(0.0, 7.7) == 3);
    CHECK(gaussian_quantile_rescale(-3.0, 1.0) == 1);
    CHECK(gaussian_quantile_rescale(3.0, 1.0) == 5);
    // -1.2 with sigma 1.5: u = -0.8, just above the 20% threshold -0.8416.
    CHECK(gaussian_quantile_rescale(-1.2, 1.5) == 2);
    // Exactly at a threshold: strict < on the upper bound puts the threshold
    // value into the higher bucket.
    double t1 = gaussian_thresholds()[0];
    CHECK(gaussian_quantile_rescale(t1, 1.0) == 2);
    CHECK_THROWS_AS(gaussian_quantile_rescale(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_quantile_rescale(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("gaussian_quantile_rescale is monotone and respects the sigma identity") {
    int prev = 1;
    for (int i = -5000; i <= 5000; ++i) {
        double z = i / 1000.0;
        int got = gaussian_quantile_rescale(z, 1.0);
        CHECK(got >= prev);
        prev = got;
        // Dividing by sigma first is bit-identical to passing sigma.
        for (double sigma : {0.5, 1.5, 2.0}) {
            if (gaussian_quantile_rescale(z, sigma) !=
                gaussian_quantile_rescale(z / sigma, 1.0)) {
                CAPTURE(z, sigma);
                REQUIRE(gaussian_quantile_rescale(z, sigma) ==
                        gaussian_quantile_rescale(z / sigma, 1.0));
            }
        }
    }
}

TEST_CASE("identity_rescale rounds and validates") {
    CHECK(identity_rescale(3.0) == 3);
    CHECK(identity_rescale(3.5) == 4);   // half away from zero
    CHECK(identity_rescale(4.4) == 4);
    CHECK_THROWS_AS(identity_rescale(5.6), std::out_of_range);
    CHECK_THROWS_AS(identity_rescale(0.2), std::out_of_range);
}

TEST_CASE("mj_bench_map matches the transcription oracle on all 125 triples") {
    CHECK(mj_bench_map(3, 3, 3) == std::array<int, 3>{1, 1, 1});
    CHECK(mj_bench_map(5, 1, 4) == std::array<int, 3>{2, 0, 2});
    for (int v = 1; v <= 5; ++v)
        for (int t = 1; t <= 5; ++t)
            for (int p = 1; p <= 5; ++p) {
                CAPTURE(v, t, p);
                CHECK(mj_bench_map(v, t, p) == mj_oracle(v, t, p));
            }
    CHECK_THROWS_AS(mj_bench_map(0, 3, 3), std::out_of_range);
    CHECK_THROWS_AS(mj_bench_map(3, 6, 3), std::out_of_range);
}

TEST_CASE("mj_bench_map is monotone per dimension") {
    for (int a = 1; a <= 4; ++a) {
        CHECK(mj_bench_map(a, 1, 1)[0] <= mj_bench_map(a + 1, 1, 1)[0]);
        CHECK(mj_bench_map(1, a, 1)[1] <= mj_bench_map(1, a + 1, 1)[1]);
        CHECK(mj_bench_map(1, 1, a)[2] <= mj_bench_map(1, 1, a + 1)[2]);
    }
}

TEST_CASE("map_dimensions rules") {
    RescaleSpec broadcast;
    broadcast.mapping = RescaleSpec::Mapping::Broadcast;
    auto b = map_dimensions(json{{"score", 4.0}}, broadcast);
    CHECK(b == std::array<std::optional<double>, 3>{4.0, 4.0, 4.0});
    CHECK_THROWS_WITH(map_dimensions(json{{"value", 4.0}}, broadcast),
                      Catch::Matchers::ContainsSubstring("score"));

    RescaleSpec good;
    good.mapping = RescaleSpec::Mapping::GoodMatch;
    auto g = map_dimensions(json{{"vq", 5.0}, {"ta", 3.0}, {"pc", 2.0}}, good);
    CHECK(g == std::array<std::optional<double>, 3>{5.0, 3.0, 2.0});
    CHECK_THROWS_WITH(map_dimensions(json{{"vq", 5.0}, {"ta", 3.0}}, good),
                      Catch::Matchers::ContainsSubstring("pc"));

    RescaleSpec vr;
    vr.mapping = RescaleSpec::Mapping::Customized;
    vr.rule = "videoreward";
    auto v = map_dimensions(json{{"VQ", 1.8}, {"TA", -0.3}, {"MQ", 0.9}}, vr);
    CHECK(v[0] == 1.8);
    CHECK(v[1] == -0.3);
    CHECK_FALSE(v[2].has_value());  // motion quality dropped, pc absent

    RescaleSpec macs;
    macs.mapping = RescaleSpec::Mapping::Customized;
    macs.rule = "aigve_macs";
    auto m = map_dimensions(json{{"technical", 4},
                                 {"element", 2},
                                 {"action", 3},
                                 {"element_presence", 5},
                                 {"action_presence", 3},
                                 {"physics", 2}},
                            macs);
    CHECK(m[0] == Catch::Approx(3.0));
    CHECK(m[1] == Catch::Approx(4.0));
    CHECK(m[2] == Catch::Approx(2.0));
    CHECK_THROWS_WITH(map_dimensions(json{{"technical", 4}}, macs),
                      Catch::Matchers::ContainsSubstring("element"));

    RescaleSpec phy;
    phy.mapping = RescaleSpec::Mapping::Customized;
    phy.rule = "videophy2";
    auto ph = map_dimensions(json{{"SA", 4}, {"PC", 2}}, phy);
    CHECK_FALSE(ph[0].has_value());
    CHECK(ph[1] == 4.0);
    CHECK(ph[2] == 2.0);

    RescaleSpec bogus;
    bogus.mapping = RescaleSpec::Mapping::Customized;
    bogus.rule = "nope";
    CHECK_THROWS_WITH(map_dimensions(json::object(), bogus),
                      Catch::Matchers::ContainsSubstring("nope"));
}

TEST_CASE("rescale_native composes mapping and method") {
    const auto& specs = builtin_rescale_specs();

    // q_align: broadcast + linear [0,1]; 0.74 -> 3.96 -> 4 on all dims.
    auto qa = rescale_native(json{{"score", 0.74}}, specs.at("q_align"));
    CHECK(qa == std::array<std::optional<int>, 3>{4, 4, 4});

    // videoreward: (1.8, -0.3, MQ dropped) under gaussian sigma=1.5.
    auto vr = rescale_native(json{{"VQ", 1.8}, {"TA", -0.3}, {"MQ", 0.9}},
                             specs.at("videoreward"));
    CHECK(vr[0] == gaussian_quantile_rescale(1.8, 1.5));
    CHECK(vr[1] == gaussian_quantile_rescale(-0.3, 1.5));
    CHECK_FALSE(vr[2].has_value());

    // aigve_macs identity: means (3.5 -> 4 by half-away rounding).
    auto macs = rescale_native(json{{"technical", 4},
                                    {"element", 3},
                                    {"action", 4},
                                    {"element_presence", 4},
                                    {"action_presence", 3},
                                    {"physics", 5}},
                               specs.at("aigve_macs"));
    CHECK(macs[0] == 4);  // mean 11/3 = 3.67 -> 4
    CHECK(macs[1] == 4);  // mean 3.5 -> 4
    CHECK(macs[2] == 5);

    // unifiedreward identity passes integers through.
    auto ur = rescale_native(json{{"vq", 2}, {"ta", 5}, {"pc", 1}},
                             specs.at("unifiedreward"));
    CHECK(ur == std::array<std::optional<int>, 3>{2, 5, 1});
}

TEST_CASE("builtin registry round-trips through JSON and matches the asset") {
    const auto& builtin = builtin_rescale_specs();
    REQUIRE(builtin.size() == 10);
    for (const auto& [name, spec] : builtin) {
        auto back = rescale_spec_from_json(to_json(spec));
        CHECK(back == spec);
    }
    auto from_file =
        load_rescale_specs(std::string(VS2_SOURCE_DIR) + "/assets/rescale_specs.json");
    REQUIRE(from_file.size() == builtin.size());
    for (const auto& [name, spec] : builtin) {
        CAPTURE(name);
        REQUIRE(from_file.count(name) == 1);
        CHECK(from_file.at(name) == spec);
    }
}

TEST_CASE("rescale outputs always land in the target set") {
    Rng rng(555);
    const auto& specs = builtin_rescale_specs();
    for (int i = 0; i < 2000; ++i) {
        double z = rng.unit_real() * 20.0 - 10.0;
        int g = gaussian_quantile_rescale(z, 0.1 + rng.unit_real() * 3.0);
        CHECK(g >= 1);
        CHECK(g <= 5);
        int l = linear_rescale(z, -10.0, 10.0);
        CHECK(l >= 1);
        CHECK(l <= 5);
    }
    (void)specs;
}

TEST_CASE("derive_pairs_from_scores labels by score comparison") {
    std::vector<std::pair<std::string, double>> entries = {{"a", 80.0}, {"b", 60.0}};
    auto pairs = derive_pairs_from_scores(entries, 1, 7);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].video_a == "a");
    CHECK(pairs[0].video_b == "b");
    CHECK(pairs[0].gt_label == PrefLabel::A);

    std::vector<std::pair<std::string, double>> equal = {{"a", 50.0}, {"b", 50.0}};
    CHECK(derive_pairs_from_scores(equal, 1, 7)[0].gt_label == PrefLabel::Tie);

    // Determinism and distinctness.
    std::vector<std::pair<std::string, double>> many;
    for (int i = 0; i < 40; ++i)
        many.push_back({"v" + std::to_string(i), static_cast<double>(i % 7)});
    auto p1 = derive_pairs_from_scores(many, 100, 99);
    auto p2 = derive_pairs_from_scores(many, 100, 99);
    REQUIRE(p1.size() == 100);
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        CHECK(p1[i].video_a == p2[i].video_a);
        CHECK(p1[i].video_b == p2[i].video_b);
        CHECK(p1[i].gt_label == p2[i].gt_label);
        CHECK(p1[i].video_a != p1[i].video_b);
        seen.insert({p1[i].video_a, p1[i].video_b});
    }
    CHECK(seen.size() == 100);  // without replacement

    CHECK_THROWS_AS(derive_pairs_from_scores(entries, 2, 7), std::invalid_argument);
    CHECK_THROWS_AS(derive_pairs_from_scores({{"a", 1.0}}, 1, 7), std::invalid_argument);
}
