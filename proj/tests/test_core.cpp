#include <catch2/catch_amalgamated.hpp>

#include <vs2/core.hpp>
#include <vs2/rng.hpp>

using namespace vs2;

// Independent rounding oracle for grid points v = k/100, k >= 0: half-away
// rounding of a non-negative value equals integer floor((k + 50) / 100).
static int grid_round_oracle(int k) { return (k + 50) / 100; }

TEST_CASE("round_half_away basics") {
    CHECK(round_half_away(2.5) == 3);
    CHECK(round_half_away(3.5) == 4);
    CHECK(round_half_away(2.49) == 2);
    CHECK(round_half_away(-2.5) == -3);
    CHECK(round_half_away(-0.4) == 0);
    CHECK(round_half_away(0.0) == 0);
    CHECK(round_half_away(4.999) == 5);
}

TEST_CASE("round_triple on spot cases") {
    CHECK(round_triple({3.26, 4.50, 1.49}) == IntTriple{3, 5, 1});
    CHECK(round_triple({1.0, 2.5, 4.99}) == IntTriple{1, 3, 5});
    // Clamping: values outside [1, 5] land on the boundary.
    CHECK(round_triple({0.2, 5.9, 0.49}) == IntTriple{1, 5, 1});
    CHECK(round_triple({5.5, 0.5, 6.0}) == IntTriple{5, 1, 5});
}

TEST_CASE("round_triple matches the integer oracle on a 0.01 grid") {
    for (int k = 0; k <= 600; ++k) {
        double v = k / 100.0;
        int expected = grid_round_oracle(k);
        if (expected < 1) expected = 1;
        if (expected > 5) expected = 5;
        IntTriple got = round_triple({v, v, v});
        CAPTURE(k, v);
        CHECK(got.vq == expected);
        CHECK(got.ta == expected);
        CHECK(got.pc == expected);
    }
}

TEST_CASE("round_triple is idempotent on integer-valued soft scores") {
    for (int s = 1; s <= 5; ++s) {
        double v = static_cast<double>(s);
        CHECK(round_triple({v, v, v}) == IntTriple{s, s, s});
    }
}

TEST_CASE("dimension helpers") {
    CHECK(dim_index(Dimension::VisualQuality) == 0);
    CHECK(dim_index(Dimension::PhysicalConsistency) == 2);
    CHECK(std::string(dimension_key(Dimension::TextAlignment)) == "ta");
    CHECK(std::string(dimension_name(Dimension::PhysicalConsistency)) ==
          "physical consistency");
    IntTriple t{2, 3, 4};
    CHECK(t.at(Dimension::TextAlignment) == 3);
    t.at(Dimension::VisualQuality) = 5;
    CHECK(t.vq == 5);
}

TEST_CASE("tier and label parsing is case-insensitive") {
    CHECK(tier_from_string("Perfect") == Tier::Perfect);
    CHECK(tier_from_string("MODERATE") == Tier::Moderate);
    CHECK_FALSE(tier_from_string("great").has_value());
    CHECK(pref_label_from_string("tie") == PrefLabel::Tie);
    CHECK(pref_label_from_string("A") == PrefLabel::A);
    CHECK_FALSE(pref_label_from_string("C").has_value());
    CHECK(pref_scope_from_string("overall") == PrefScope::Overall);
    CHECK(pref_scope_from_string("VQ") == PrefScope::VisualQuality);
}

TEST_CASE("token distribution validity") {
    TokenScoreDistribution d;
    CHECK_FALSE(d.valid());  // all-zero mass
    d.set(3, 0.5);
    d.set(4, 0.25);
    CHECK(d.valid());
    CHECK(d.total() == Catch::Approx(0.75));
    d.set(2, -0.1);
    CHECK_FALSE(d.valid());  // negative weight
}

TEST_CASE("token distribution serializes sparsely") {
    TokenScoreDistribution d;
    d.set(2, 0.2);
    d.set(4, 0.8);
    json j = to_json(d);
    CHECK(j == json{{"2", 0.2}, {"4", 0.8}});
    TokenScoreDistribution back = token_dist_from_json(j);
    CHECK(back == d);
    CHECK(back.weight(1) == 0.0);
    CHECK(back.weight(3) == 0.0);
}

TEST_CASE("lint_annotation flags low scores without comments") {
    AnnotationRecord rec;
    rec.video_id = "v1";
    rec.scores = {5, 3, 4};
    rec.comments[dim_index(Dimension::TextAlignment)] = "object missing";
    auto warnings = lint_annotation(rec);
    REQUIRE(warnings.size() == 1);  // pc=4 uncommented; ta=3 has one; vq=5 exempt
    CHECK(warnings[0].find("pc") != std::string::npos);

    rec.comments[dim_index(Dimension::PhysicalConsistency)] = "limb clipping";
    CHECK(lint_annotation(rec).empty());
}

TEST_CASE("validate rejects inconsistent records") {
    VideoEntry v;
    v.video_id = "v1";
    v.fps = 24.0;
    v.duration_s = 4.0;
    v.width = 512;
    v.height = 512;
    CHECK_NOTHROW(validate(v));
    v.fps = 0.0;
    CHECK_THROWS_AS(validate(v), std::invalid_argument);

    Judgment jd;
    jd.video_id = "v1";
    jd.parse_failed = true;
    CHECK_NOTHROW(validate(jd));  // failed parse legitimately has no scores
    jd.parse_failed = false;
    CHECK_THROWS_AS(validate(jd), std::invalid_argument);  // no scores, not failed
    jd.scores = IntTriple{3, 6, 2};
    CHECK_THROWS_AS(validate(jd), std::invalid_argument);  // out of range
    jd.scores = IntTriple{3, 5, 2};
    CHECK_NOTHROW(validate(jd));
    jd.soft_scores = FloatTriple{3.1, 4.9, 2.0};
    CHECK_THROWS_AS(validate(jd), std::invalid_argument);  // soft without dists

    PreferencePair p;
    p.video_a = "x";
    p.video_b = "x";
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Round-trip properties with generated records

namespace {

std::string random_id(Rng& rng, const char* prefix) {
    return std::string(prefix) + std::to_string(rng.bounded(100000));
}

VideoEntry random_video(Rng& rng) {
    VideoEntry v;
    v.video_id = random_id(rng, "vid-");
    v.prompt_id = random_id(rng, "p-");
    v.prompt_text = "prompt " + std::to_string(rng.bounded(1000));
    v.model_id = "model-" + std::to_string(rng.bounded(25));
    v.tier = kTiers[rng.pick_index(4)];
    v.media_uri = "videos/" + v.video_id + ".mp4";
    v.fps = 8.0 + static_cast<double>(rng.bounded(17));
    v.duration_s = 1.0 + rng.unit_real() * 9.0;
    v.width = 256 + static_cast<int>(rng.bounded(4)) * 128;
    v.height = 256 + static_cast<int>(rng.bounded(4)) * 128;
    if (rng.bounded(2) == 0) v.extra["source"] = "batch-7";
    return v;
}

IntTriple random_triple(Rng& rng) {
    return IntTriple{1 + static_cast<int>(rng.bounded(5)),
                     1 + static_cast<int>(rng.bounded(5)),
                     1 + static_cast<int>(rng.bounded(5))};
}

Judgment random_judgment(Rng& rng) {
    Judgment jd;
    jd.video_id = random_id(rng, "vid-");
    jd.rationale = "reasoning text";
    jd.raw_text = "<think>reasoning text</think> visual quality: 3";
    if (rng.bounded(8) == 0) {
        jd.parse_failed = true;
        return jd;
    }
    jd.scores = random_triple(rng);
    if (rng.bounded(2) == 0) {
        std::array<TokenScoreDistribution, 3> dists;
        FloatTriple soft;
        for (Dimension d : kDimensions) {
            auto& dist = dists[dim_index(d)];
            dist.set(jd.scores->at(d), 0.5 + rng.unit_real() * 0.5);
            int other = 1 + static_cast<int>(rng.bounded(5));
            if (other != jd.scores->at(d)) dist.set(other, rng.unit_real() * 0.4);
            soft.at(d) = static_cast<double>(jd.scores->at(d));
        }
        jd.token_dists = dists;
        jd.soft_scores = soft;
    }
    return jd;
}

}  // namespace

TEST_CASE("video entry JSON round trip") {
    Rng rng(101);
    for (int i = 0; i < 200; ++i) {
        VideoEntry v = random_video(rng);
        json j = to_json(v);
        VideoEntry back = video_entry_from_json(j);
        CHECK(to_json(back) == j);
        CHECK(back.video_id == v.video_id);
        CHECK(back.tier == v.tier);
        CHECK(back.extra == v.extra);
    }
}

TEST_CASE("judgment JSON round trip") {
    Rng rng(202);
    for (int i = 0; i < 200; ++i) {
        Judgment jd = random_judgment(rng);
        json j = to_json(jd);
        Judgment back = judgment_from_json(j);
        CHECK(to_json(back) == j);
        CHECK(back.scores == jd.scores);
        CHECK(back.parse_failed == jd.parse_failed);
        CHECK(back.token_dists.has_value() == jd.token_dists.has_value());
    }
}

TEST_CASE("annotation JSON round trip keeps per-dimension comments") {
    AnnotationRecord rec;
    rec.video_id = "v9";
    rec.annotator_id = "ann-3";
    rec.scores = {4, 5, 2};
    rec.comments[0] = "slight flicker";
    rec.comments[2] = "object passes through wall";
    rec.extra["batch"] = 12;
    json j = to_json(rec);
    AnnotationRecord back = annotation_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.comments[0] == rec.comments[0]);
    CHECK_FALSE(back.comments[1].has_value());
    CHECK(back.comments[2] == rec.comments[2]);
    CHECK(back.extra == rec.extra);
}

TEST_CASE("preference pair JSON round trip") {
    PreferencePair p;
    p.pair_id = "pair-7";
    p.video_a = "va";
    p.video_b = "vb";
    p.gt_label = PrefLabel::B;
    p.dimension_scope = PrefScope::PhysicalConsistency;
    json j = to_json(p);
    PreferencePair back = pair_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.gt_label == PrefLabel::B);
    CHECK(back.dimension_scope == PrefScope::PhysicalConsistency);
}

TEST_CASE("unknown input fields are echoed on output") {
    json j = json::parse(R"({"video_id":"v1","scores":{"vq":3,"ta":4,"pc":5},
                             "zeta":42,"nested":{"a":[1,2]}})");
    AnnotationRecord rec = annotation_from_json(j);
    CHECK(rec.extra == json({{"zeta", 42}, {"nested", {{"a", {1, 2}}}}}));
    json out = to_json(rec);
    CHECK(out["zeta"] == 42);
    CHECK(out["nested"]["a"][1] == 2);
}

TEST_CASE("missing required fields raise named errors") {
    CHECK_THROWS_WITH(int_triple_from_json(json{{"vq", 1}, {"ta", 2}}),
                      Catch::Matchers::ContainsSubstring("pc"));
    CHECK_THROWS_WITH(video_entry_from_json(json{{"fps", 8}}),
                      Catch::Matchers::ContainsSubstring("video_id"));
    CHECK_THROWS_WITH(pair_from_json(json{{"video_a", "x"}, {"video_b", "y"}}),
                      Catch::Matchers::ContainsSubstring("gt_label"));
}
