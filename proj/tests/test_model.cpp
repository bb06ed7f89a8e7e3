#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "irsa/config_file.hpp"
#include "irsa/model.hpp"
#include "irsa/rng.hpp"

#include <cmath>
#include <string>

using namespace irsa;

namespace {

SystemConfig fig_defaults() {
    SystemConfig c;
    c.num_devices = 1000;
    c.frame_length = 100;
    c.update_prob = 0.001;
    c.battery_capacity = 2;
    c.harvest_prob = 0.02;
    c.max_degree = 3;
    return c;
}

}  // namespace

TEST_CASE("activation probability matches per-slot Monte Carlo") {
    // Oracle: simulate M independent Bernoulli(alpha) slots per frame and
    // count frames with at least one arrival.
    SystemConfig c = fig_defaults();
    c.update_prob = 0.007;
    SplitMix64 rng{3};
    const int trials = 200000;
    int active = 0;
    for (int t = 0; t < trials; ++t) {
        bool any = false;
        for (int s = 0; s < c.frame_length; ++s)
            if (rng.next_double() < c.update_prob) any = true;
        if (any) ++active;
    }
    double sigma = activation_prob(c);
    double se = std::sqrt(sigma * (1 - sigma) / trials);
    CHECK(std::abs(active / double(trials) - sigma) < 4 * se);

    // Closed-form anchors.
    c.update_prob = 0.0;
    CHECK(activation_prob(c) == doctest::Approx(0.0));
    c.update_prob = 1.0;
    CHECK(activation_prob(c) == doctest::Approx(1.0));
    c.update_prob = 0.001;
    CHECK(activation_prob(c) == doctest::Approx(1.0 - std::pow(0.999, 100)).epsilon(1e-12));
    c.update_prob = 0.0012;
    CHECK(activation_prob(c) == doctest::Approx(0.11314).epsilon(1e-4));
}

TEST_CASE("channel load scales activation by U/M") {
    SystemConfig c = fig_defaults();
    CHECK(channel_load(c) ==
          doctest::Approx(c.num_devices * activation_prob(c) / c.frame_length).epsilon(1e-12));
    // Figure-grid anchors: the secondary axis maps alpha*U to G.
    CHECK(channel_load(c) == doctest::Approx(0.952079).epsilon(1e-4));
    c.update_prob = 0.0012;
    CHECK(channel_load(c) == doctest::Approx(1.13).epsilon(0.005));
    c.update_prob = 0.0004;
    CHECK(channel_load(c) == doctest::Approx(0.39).epsilon(0.005));
}

TEST_CASE("validate_config rejects out-of-range fields") {
    CHECK_NOTHROW(validate_config(fig_defaults()));
    auto bad = [](auto mutate) {
        SystemConfig c = fig_defaults();
        mutate(c);
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    };
    bad([](SystemConfig& c) { c.num_devices = 0; });
    bad([](SystemConfig& c) { c.frame_length = 0; });
    bad([](SystemConfig& c) { c.update_prob = -0.1; });
    bad([](SystemConfig& c) { c.update_prob = 1.5; });
    bad([](SystemConfig& c) { c.battery_capacity = -3; });
    bad([](SystemConfig& c) { c.harvest_prob = 1.0001; });
    bad([](SystemConfig& c) { c.max_degree = -1; });

    SystemConfig unlim = fig_defaults();
    unlim.battery_capacity = kUnlimitedCapacity;
    CHECK_NOTHROW(validate_config(unlim));
}

TEST_CASE("degree distribution constructors") {
    auto mono = DegreeDistribution::monomial(3, 5);
    CHECK(mono.rows() == 1);
    CHECK(mono.max_degree() == 5);
    CHECK(mono.table[0][3] == 1.0);
    CHECK(mono.table[0][0] == 0.0);

    auto shared = DegreeDistribution::nonadaptive({0.5, 0.25, 0.25});
    CHECK(shared.max_degree() == 2);
    CHECK_FALSE(shared.adaptive);
    CHECK(shared.row(0) == shared.row(2));

    auto spend = DegreeDistribution::battery_monomial(2, 3);
    CHECK(spend.adaptive);
    CHECK(spend.rows() == 3);
    for (int b = 0; b <= 2; ++b)
        for (int l = 0; l <= 3; ++l)
            CHECK(spend.table[b][l] == (l == std::min(b, 3) ? 1.0 : 0.0));

    // Capacity above max_degree saturates the spend rule.
    auto cap = DegreeDistribution::battery_monomial(4, 2);
    CHECK(cap.rows() == 5);
    CHECK(cap.table[4][2] == 1.0);
    CHECK(cap.table[3][2] == 1.0);
}

TEST_CASE("avoid mask accepts battery-feasible tables only") {
    CHECK(validate_avoid_mask(DegreeDistribution::battery_monomial(2, 3), 2));
    auto bad = DegreeDistribution::monomial(3, 3, 3);
    bad.adaptive = true;
    CHECK_FALSE(validate_avoid_mask(bad, 2));  // row b=0 puts mass on degree 3
    auto zero = DegreeDistribution::monomial(0, 3, 3);
    zero.adaptive = true;
    CHECK(validate_avoid_mask(zero, 2));
}

TEST_CASE("validate_distribution checks shape and row sums") {
    SystemConfig c = fig_defaults();
    CHECK_NOTHROW(validate_distribution(DegreeDistribution::monomial(3, 3), c));

    auto wrong_cols = DegreeDistribution::monomial(2, 2);
    CHECK_THROWS_AS(validate_distribution(wrong_cols, c), ConfigError);

    auto unnormalized = DegreeDistribution::nonadaptive({0.5, 0.25, 0.2, 0.0});
    CHECK_THROWS_AS(validate_distribution(unnormalized, c), ConfigError);

    auto negative = DegreeDistribution::nonadaptive({1.2, -0.2, 0.0, 0.0});
    CHECK_THROWS_AS(validate_distribution(negative, c), ConfigError);

    auto adaptive_short = DegreeDistribution::battery_monomial(1, 3);
    CHECK_THROWS_AS(validate_distribution(adaptive_short, c), ConfigError);  // needs E+1 rows
    CHECK_NOTHROW(validate_distribution(DegreeDistribution::battery_monomial(2, 3), c));
}

TEST_CASE("scenario text parses the documented format") {
    const std::string text =
        "# figure defaults\n"
        "num_devices = 1000\n"
        "frame_length = 100   # slots\n"
        "update_prob = 0.001\n"
        "battery_capacity = 2\n"
        "harvest_prob = 0.02\n"
        "max_degree = 3\n"
        "adaptive = false\n"
        "degree_table = 0, 0, 0, 1\n";
    auto parsed = parse_scenario_text(text, "inline");
    CHECK(parsed.config.num_devices == 1000);
    CHECK(parsed.config.frame_length == 100);
    CHECK(parsed.config.update_prob == doctest::Approx(0.001));
    CHECK(parsed.config.battery_capacity == 2);
    CHECK(parsed.config.harvest_prob == doctest::Approx(0.02));
    CHECK(parsed.config.max_degree == 3);
    CHECK_FALSE(parsed.dist.adaptive);
    CHECK(parsed.dist.rows() == 1);
    CHECK(parsed.dist.table[0][3] == 1.0);
}

TEST_CASE("scenario text accepts whitespace pairs and per-row tables") {
    const std::string text =
        "num_devices 10\n"
        "frame_length 5\n"
        "update_prob 0.5\n"
        "battery_capacity 2\n"
        "harvest_prob 0.1\n"
        "max_degree 2\n"
        "adaptive true\n"
        "degree_table 1 0 0; 0 1 0; 0 0 1\n";
    auto parsed = parse_scenario_text(text, "inline");
    CHECK(parsed.dist.adaptive);
    CHECK(parsed.dist.rows() == 3);
    CHECK(parsed.dist.table[1][1] == 1.0);
    CHECK(parsed.dist.row(2)[2] == 1.0);
}

TEST_CASE("scenario text handles unlimited capacity") {
    const std::string text =
        "num_devices = 10\n"
        "frame_length = 5\n"
        "update_prob = 0.5\n"
        "battery_capacity = unlimited\n"
        "harvest_prob = 0\n"
        "max_degree = 3\n"
        "degree_table = 0 0 0 1\n";
    auto parsed = parse_scenario_text(text, "inline");
    CHECK(parsed.config.unlimited());
    CHECK(parsed.dist.rows() == 1);
}

TEST_CASE("scenario text rejects malformed input") {
    auto throws = [](const std::string& text) {
        CHECK_THROWS_AS(parse_scenario_text(text, "inline"), ConfigError);
    };
    const std::string base =
        "num_devices = 10\nframe_length = 5\nupdate_prob = 0.5\n"
        "battery_capacity = 2\nharvest_prob = 0.1\nmax_degree = 2\n";

    throws(base);                                     // missing degree_table
    throws(base + "degree_table = 1 0\n");            // wrong column count
    throws(base + "degree_table = 0.9 0 0\n");        // row does not sum to 1
    throws(base + "degree_table = 1 0 0\nbogus = 1\n");  // unknown key
    throws(base + "degree_table = 1 0 0\nmax_degree = 2\n");  // duplicate key
    throws(base + "degree_table = 1 0 zebra\n");      // non-numeric entry
    throws("num_devices = ten\n" + base + "degree_table = 1 0 0\n");
    // adaptive with a single shared row
    throws(base + "adaptive = true\ndegree_table = 1 0 0\n");
    // adaptive with unlimited capacity
    throws(
        "num_devices = 10\nframe_length = 5\nupdate_prob = 0.5\n"
        "battery_capacity = unlimited\nharvest_prob = 0.1\nmax_degree = 2\n"
        "adaptive = true\ndegree_table = 1 0 0\n");
}

TEST_CASE("parse_scenario_file reports unreadable paths") {
    CHECK_THROWS_AS(parse_scenario_file("/nonexistent/path.cfg"), ConfigError);
}
