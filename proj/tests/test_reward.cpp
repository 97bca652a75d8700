#include <catch2/catch_amalgamated.hpp>

#include <vs2/reward.hpp>
#include <vs2/rng.hpp>
#include <vs2/scoring.hpp>

#include <support/oracles.hpp>

using namespace vs2;

TEST_CASE("accuracy_reward spot cases") {
    CHECK(accuracy_reward({4, 3, 5}, {4, 3, 5}) == 1.0);
    CHECK(accuracy_reward({4, 3, 4}, {4, 3, 5}) == 0.7);
    CHECK(accuracy_reward({4, 2, 4}, {4, 3, 5}) == 0.4);
    CHECK(accuracy_reward({3, 2, 4}, {4, 3, 5}) == 0.1);
    CHECK(accuracy_reward({3, 3, 3}, {5, 3, 3}) == 0.0);  // one dim off by 2
    CHECK(accuracy_reward({1, 1, 1}, {5, 5, 5}) == 0.0);
}

TEST_CASE("accuracy_reward matches the case-analysis oracle on all pairs") {
    // All 5^6 = 15,625 x ... pairs of true/predicted triples.
    for (int a = 1; a <= 5; ++a)
        for (int b = 1; b <= 5; ++b)
            for (int c = 1; c <= 5; ++c)
                for (int x = 1; x <= 5; ++x)
                    for (int y = 1; y <= 5; ++y)
                        for (int z = 1; z <= 5; ++z) {
                            IntTriple pred{a, b, c}, gt{x, y, z};
                            double got = accuracy_reward(pred, gt);
                            double want = oracle::accuracy_reward({a, b, c}, {x, y, z});
                            if (got != want) {
                                CAPTURE(a, b, c, x, y, z);
                                REQUIRE(got == want);
                            }
                        }
    SUCCEED("all 15625 triple pairs agree");
}

TEST_CASE("accuracy_reward symmetry and permutation invariance") {
    Rng rng(17);
    for (int i = 0; i < 2000; ++i) {
        IntTriple p{1 + (int)rng.bounded(5), 1 + (int)rng.bounded(5),
                    1 + (int)rng.bounded(5)};
        IntTriple g{1 + (int)rng.bounded(5), 1 + (int)rng.bounded(5),
                    1 + (int)rng.bounded(5)};
        CHECK(accuracy_reward(p, g) == accuracy_reward(g, p));
        // Apply the same permutation of dimensions to both triples.
        IntTriple p2{p.pc, p.vq, p.ta}, g2{g.pc, g.vq, g.ta};
        CHECK(accuracy_reward(p, g) == accuracy_reward(p2, g2));
        // Positive iff max deviation <= 1.
        int max_dev = 0;
        for (Dimension d : kDimensions)
            max_dev = std::max(max_dev, std::abs(p.at(d) - g.at(d)));
        CHECK((accuracy_reward(p, g) > 0.0) == (max_dev <= 1));
    }
}

TEST_CASE("fixing one off-by-one dimension never lowers the reward") {
    for (int d0 = 0; d0 <= 1; ++d0)
        for (int d1 = 0; d1 <= 1; ++d1)
            for (int d2 = 0; d2 <= 1; ++d2) {
                IntTriple gt{3, 3, 3};
                IntTriple pred{3 + d0, 3 + d1, 3 + d2};
                double before = accuracy_reward(pred, gt);
                for (Dimension dim : kDimensions) {
                    if (pred.at(dim) == gt.at(dim)) continue;
                    IntTriple improved = pred;
                    improved.at(dim) = gt.at(dim);
                    CHECK(accuracy_reward(improved, gt) >= before);
                }
            }
}

TEST_CASE("format_reward accepts well-formed output only") {
    CHECK(format_reward("<think>blurry, unstable</think> scores: 2, 3, 2") == 1.0);
    CHECK(format_reward("scores: 2, 3, 2") == 0.0);            // no think tag
    CHECK(format_reward("<think></think> scores: 2, 3, 2") == 0.0);  // empty rationale
    CHECK(format_reward("<think> \n\t </think> scores: 2, 3, 2") == 0.0);
    CHECK(format_reward("<think>ok</think> no numbers") == 0.0);     // missing scores
    CHECK(format_reward("<think>ok</think> visual: 9, text: 3, physical: 1") == 0.0);
    CHECK(format_reward("</think>backwards<think> 1, 2, 3") == 0.0);  // tags reversed
    CHECK(format_reward(render_judgment("fine detail", {4, 4, 4})) == 1.0);
}

TEST_CASE("total_reward combines the parts exactly") {
    auto rb = total_reward({4, 3, 5}, {4, 3, 5},
                           "<think>ok</think> visual: 4, text: 3, physical: 5", 0.3);
    CHECK(rb.r_acc == 1.0);
    CHECK(rb.r_fmt == 1.0);
    CHECK(rb.total == 1.3);

    auto sft = total_reward({4, 3, 5}, {4, 3, 5},
                            "<think>ok</think> visual: 4, text: 3, physical: 5", 0.0);
    CHECK(sft.total == 1.0);

    auto weak = total_reward({3, 2, 4}, {4, 3, 5}, "no tags 3 2 4", 0.3);
    CHECK(weak.r_acc == 0.1);
    CHECK(weak.r_fmt == 0.0);
    CHECK(weak.total == 0.1);

    CHECK_THROWS_AS(total_reward({1, 1, 1}, {1, 1, 1}, "", -0.1),
                    std::invalid_argument);
}

TEST_CASE("total_reward invariant holds for random inputs") {
    Rng rng(88);
    for (int i = 0; i < 500; ++i) {
        IntTriple p{1 + (int)rng.bounded(5), 1 + (int)rng.bounded(5),
                    1 + (int)rng.bounded(5)};
        IntTriple g{1 + (int)rng.bounded(5), 1 + (int)rng.bounded(5),
                    1 + (int)rng.bounded(5)};
        std::string text = rng.bounded(2) ? render_judgment("r", p) : "bare text";
        double lambda = rng.unit_real();
        auto rb = total_reward(p, g, text, lambda);
        CHECK(rb.total == rb.r_acc + rb.lambda * rb.r_fmt);  // exact, not approx
    }
}

TEST_CASE("start point fixes the default lambda") {
    CHECK(default_lambda(StartPoint::Base) == 0.3);
    CHECK(default_lambda(StartPoint::Sft) == 0.0);
}

TEST_CASE("group_advantages normalizes within the group") {
    auto zeros = group_advantages({1.0, 1.0, 1.0});
    CHECK(zeros == std::vector<double>{0.0, 0.0, 0.0});

    auto two = group_advantages({0.0, 1.0});
    REQUIRE(two.size() == 2);
    // mean 0.5, population std 0.5 -> advantages ±0.5/(0.5 + 1e-6).
    CHECK(two[0] == Catch::Approx(-0.999998).epsilon(1e-5));
    CHECK(two[1] == Catch::Approx(+0.999998).epsilon(1e-5));
    CHECK(two[0] == -two[1]);

    CHECK_THROWS_WITH(group_advantages({1.0}),
                      Catch::Matchers::ContainsSubstring("group too small"));
    CHECK_THROWS_AS(group_advantages({}), std::invalid_argument);
}

TEST_CASE("group_advantages matches a second-pass oracle on random groups") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> rewards;
        for (int i = 0; i < 8; ++i) {
            // Typical reward values: tier levels plus optional format bonus.
            static const double kLevels[] = {0.0, 0.1, 0.4, 0.7, 1.0};
            rewards.push_back(kLevels[rng.pick_index(5)] +
                              0.3 * static_cast<double>(rng.bounded(2)));
        }
        bool all_equal = true;
        for (double r : rewards) all_equal &= (r == rewards.front());
        auto adv = group_advantages(rewards);
        if (all_equal) {
            for (double a : adv) CHECK(a == 0.0);
            continue;
        }
        double m = oracle::mean(rewards);
        double sd = oracle::pop_std(rewards);
        double sum = 0.0;
        for (std::size_t i = 0; i < adv.size(); ++i) {
            CHECK(adv[i] == Catch::Approx((rewards[i] - m) / (sd + 1e-6)).margin(1e-9));
            sum += adv[i];
        }
        CHECK(sum / 8.0 == Catch::Approx(0.0).margin(1e-9));
    }
}
