#include <doctest.h>

#include <cmath>
#include <string>

#include "routersim/harness.hpp"
#include "routersim/plot.hpp"
#include "routersim/stats.hpp"

using namespace routersim;

TEST_CASE("empty config yields the documented defaults") {
    const SimConfig cfg = harness::parse_config("");
    CHECK(cfg.architecture == Architecture::Router);
    CHECK(cfg.m == 4);
    CHECK(cfg.n_pairs == 500);
    CHECK(cfg.fab.m == 8);
    CHECK(cfg.channel_left.length_km == 10.0);
    CHECK(cfg.master_seed == 12345);
    CHECK(std::isinf(cfg.client.t1));
}

TEST_CASE("config parsing: comments, whitespace, inf, and overrides") {
    const SimConfig cfg = harness::parse_config(
        "# comment line\n"
        "architecture = routerless\n"
        "protocol.m = 8   # trailing comment\n"
        "coherence.nuclear.t2_s = inf\n"
        "coherence.nuclear.t1_s = inf\n"
        "channel.left.length_km = 5\n"
        "channel.length_km = 20\n");
    CHECK(cfg.architecture == Architecture::Routerless);
    CHECK(cfg.m == 8);
    CHECK(std::isinf(cfg.nuclear.t2));
    // Side-specific keys win over the generic one regardless of file order.
    CHECK(cfg.channel_left.length_km == 5.0);
    CHECK(cfg.channel_right.length_km == 20.0);
}

TEST_CASE("config parsing rejects malformed input with line numbers") {
    CHECK_THROWS_WITH_AS(harness::parse_config("nonsense.key = 1\n"),
                         doctest::Contains("unknown key 'nonsense.key'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(harness::parse_config("protocol.m = 4\nprotocol.m = 8\n"),
                         doctest::Contains("duplicate key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(harness::parse_config("protocol.m\n"), doctest::Contains("line 1"),
                         std::invalid_argument);
    CHECK_THROWS_AS(harness::parse_config("protocol.m = four\n"), std::invalid_argument);
    CHECK_THROWS_AS(harness::parse_config("protocol.m = \n"), std::invalid_argument);
}

TEST_CASE("config validation catches physical inconsistencies") {
    // Router needs an even register count.
    CHECK_THROWS_AS(harness::parse_config("architecture = router\nprotocol.m = 3\n"),
                    std::invalid_argument);
    // T2 > 2 T1 has no CP realization.
    CHECK_THROWS_AS(
        harness::parse_config("coherence.electron.t1_s = 1e-3\ncoherence.electron.t2_s = 3e-3\n"),
        std::invalid_argument);
    CHECK_THROWS_AS(harness::parse_config("fabric.m = 6\n"), std::invalid_argument);
    CHECK_THROWS_AS(harness::parse_config("link.p_distant = 1.5\n"), std::invalid_argument);
}

TEST_CASE("defaults table lists every key with its default") {
    const std::string table = harness::defaults_table();
    CHECK(table.find("protocol.m") != std::string::npos);
    CHECK(table.find("noise.attempt.a") != std::string::npos);
    CHECK(table.find("seed.master") != std::string::npos);
    CHECK(table.find("12345") != std::string::npos);
}

TEST_CASE("CSV writer emits the exact header and round-trips") {
    harness::SummaryRow row;
    row.architecture = "router";
    row.m = 4;
    row.l_km = 10.0;
    row.runs = 3;
    row.rate_hz_mean = 123.456789012345678;
    row.rate_hz_sem = 1.5;
    row.fidelity_mean = 0.987654321;
    row.fidelity_sem = 0.001;
    row.infidelity_mean = 1.0 - row.fidelity_mean;
    row.mean_idle_cycles = 3.25;
    row.mean_stored_attempts = 8.5;
    row.master_seed = 12345;

    const std::string csv = harness::to_csv({row});
    CHECK(csv.rfind("architecture,m,L_km,runs,rate_hz_mean,rate_hz_sem,fidelity_mean,fidelity_sem,"
                    "infidelity_mean,mean_idle_cycles,mean_stored_attempts,master_seed\n",
                    0) == 0);
    CHECK(csv.find("\r") == std::string::npos);  // LF only

    const auto parsed = harness::parse_csv(csv);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].rate_hz_mean == row.rate_hz_mean);  // 17 significant digits round-trip
    CHECK(parsed[0].fidelity_mean == row.fidelity_mean);
    CHECK(harness::to_csv(parsed) == csv);

    CHECK_THROWS_AS(harness::parse_csv("bogus\n"), std::invalid_argument);
}

TEST_CASE("run_point output is deterministic given the config") {
    SimConfig cfg = harness::parse_config(
        "architecture = routerless\nprotocol.m = 2\nprotocol.n_pairs = 40\n");
    const std::string a = harness::to_csv({harness::run_point(cfg, 2).row});
    const std::string b = harness::to_csv({harness::run_point(cfg, 2).row});
    CHECK(a == b);

    cfg.master_seed = 54321;
    const std::string c = harness::to_csv({harness::run_point(cfg, 2).row});
    CHECK(a != c);
}

TEST_CASE("sweep emits rows in architecture-major, then m, then L order") {
    SimConfig base = harness::parse_config("protocol.n_pairs = 30\n");
    harness::SweepGrid grid;
    grid.m_values = {2, 4};
    grid.l_values_km = {1.0, 10.0};
    grid.architectures = {Architecture::Router, Architecture::Routerless};
    grid.runs_per_point = 1;

    const auto rows = harness::sweep(grid, base);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].architecture == "router");
    CHECK(rows[0].m == 2);
    CHECK(rows[0].l_km == 1.0);
    CHECK(rows[1].l_km == 10.0);
    CHECK(rows[2].m == 4);
    CHECK(rows[4].architecture == "routerless");
    for (const auto& row : rows) {
        CHECK(row.rate_hz_mean > 0);
        CHECK(row.fidelity_mean > 0.5);
        CHECK(row.infidelity_mean == doctest::Approx(1.0 - row.fidelity_mean).epsilon(1e-15));
    }
}

TEST_CASE("unknown oracle scenarios are rejected; the registry is stable") {
    const SimConfig cfg = harness::parse_config("");
    CHECK_THROWS_AS(harness::oracle_check("no-such-scenario", cfg), std::invalid_argument);
    const auto names = harness::oracle_scenarios();
    CHECK(names.size() == 5);
}

TEST_CASE("plot: kinds parse and ratio demands both architectures") {
    CHECK(plot::parse_plot_kind("rate") == plot::PlotKind::Rate);
    CHECK_THROWS_AS(plot::parse_plot_kind("pie"), std::invalid_argument);

    harness::SummaryRow row;
    row.architecture = "router";
    row.m = 2;
    row.l_km = 10.0;
    row.rate_hz_mean = 100.0;
    row.fidelity_mean = 0.9;
    row.infidelity_mean = 0.1;

    const std::string svg = plot::render_plot({row}, plot::PlotKind::Rate);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg == plot::render_plot({row}, plot::PlotKind::Rate));  // deterministic

    CHECK_THROWS_AS(plot::render_plot({row}, plot::PlotKind::Ratio), std::invalid_argument);
    CHECK_THROWS_AS(plot::render_plot({}, plot::PlotKind::Rate), std::invalid_argument);
}

TEST_CASE("linear fit recovers a known line") {
    const std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double xi : x) y.push_back(3.0 * xi + 2.0);
    const auto fit = stats::linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("geometric order-statistic helpers agree with direct summation") {
    const double p = 0.2;
    CHECK(stats::geometric_max_mean(p) == doctest::Approx(65.0 / 9.0).epsilon(1e-12));
    // Direct series for E[max] as a cross-check.
    double direct = 0.0;
    for (int g = 1; g < 400; ++g) {
        const double cdf_prev = 1.0 - std::pow(1.0 - p, g - 1);
        const double cdf = 1.0 - std::pow(1.0 - p, g);
        direct += g * (cdf * cdf - cdf_prev * cdf_prev);
    }
    CHECK(stats::geometric_max_mean(p) == doctest::Approx(direct).epsilon(1e-9));
    CHECK(stats::geometric_max_stddev(p) > 0);
}
