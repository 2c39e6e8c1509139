#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "chorefair/experiments.hpp"

using namespace chorefair;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n_values = {4, 6};
    c.m_rule = ChoreRule::parse("ratio:2.5");
    c.task = TrialTask::parse("ef");
    c.trials = 12;
    c.seed = 99;
    return c;
}

TrialRecord record(bool found, bool ef) {
    TrialRecord r;
    r.n = 3;
    r.m = 6;
    r.algorithm = "ef";
    r.found = found;
    r.envy_free = ef;
    r.proportional = ef;
    return r;
}

}  // namespace

TEST_CASE("Wilson interval") {
    const auto half = wilson_interval(50, 100);
    CHECK(half.low == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(half.high == doctest::Approx(0.5962).epsilon(1e-3));
    const auto all = wilson_interval(10, 10);
    CHECK(all.high == doctest::Approx(1.0));
    CHECK(all.low < 1.0);
    CHECK(wilson_interval(0, 10).low == doctest::Approx(0.0));
    const auto empty = wilson_interval(0, 0);
    CHECK(empty.low == 0.0);
    CHECK(empty.high == 1.0);
}

TEST_CASE("chore rules") {
    CHECK(ChoreRule::parse("ratio:1.05").chores_for(80) == 84);
    CHECK(ChoreRule::parse("ratio:2").chores_for(20) == 40);
    CHECK(ChoreRule::parse("fixed:30").chores_for(5000) == 30);
    CHECK(ChoreRule::parse("div:3").chores_for(7) == 21);
    CHECK(ChoreRule::parse("ratio:1.05").to_string() == "ratio:1.05");
    CHECK_THROWS_AS(ChoreRule::parse("ratio"), std::invalid_argument);
    CHECK_THROWS_AS(ChoreRule::parse("fixed:-2"), std::invalid_argument);
    CHECK_THROWS_AS(ChoreRule::parse("sqrt:2"), std::invalid_argument);
}

TEST_CASE("trial tasks") {
    CHECK(TrialTask::parse("cert-ef").kind == TrialTask::Kind::Certify);
    CHECK(TrialTask::parse("oracle-prop").kind == TrialTask::Kind::Oracle);
    CHECK_FALSE(TrialTask::parse("oracle-prop").envy_notion);
    CHECK(TrialTask::parse("twostage").name() == "twostage");
    CHECK_THROWS_AS(TrialTask::parse("nope"), std::invalid_argument);
}

TEST_CASE("a single trial replays a direct allocation") {
    auto c = small_config();
    c.trials = 1;
    const auto grid = run_grid(c);
    REQUIRE(grid.records.size() == 2);
    const auto& rec = grid.records.front();
    CHECK(rec.seed == derive_trial_seed(99, 4, 10, 0));
    const auto d = sample_instance(4, 10, c.dist, rec.seed);
    const auto o = run_allocator(AllocatorChoice::EnvyFree, d, c.options);
    CHECK(rec.found == o.found());
    CHECK(rec.envy_free == (o.found() && is_envy_free(d, *o.allocation)));
    CHECK(rec.proportional == (o.found() && is_proportional(d, *o.allocation)));
    CHECK(rec.repeated_favorites == count_repeated_favorites(d));
}

TEST_CASE("records do not depend on the worker count") {
    auto c = small_config();
    c.workers = 1;
    auto a = run_grid(c);
    c.workers = 4;
    auto b = run_grid(c);
    REQUIRE(a.records.size() == 24);
    for (auto* g : {&a, &b}) {
        for (auto& r : g->records) {
            r.runtime_ns = 0;
        }
    }
    CHECK(a.records == b.records);
    std::ostringstream x;
    std::ostringstream y;
    write_records_csv(x, a.records, true);
    write_records_csv(y, b.records, true);
    CHECK(x.str() == y.str());
    CHECK(x.str().rfind("schema=1\nn,m,trial,seed,algo,found,ef,prop,cert,T,runtime_ns\n", 0) == 0);
}

TEST_CASE("invalid configs are rejected") {
    auto c = small_config();
    c.trials = 0;
    CHECK_THROWS_AS(run_grid(c), std::invalid_argument);
    c = small_config();
    c.n_values.clear();
    CHECK_THROWS_AS(run_grid(c), std::invalid_argument);
}

TEST_CASE("failed trials become error records") {
    ExperimentConfig c;
    c.n_values = {5};
    c.m_rule = ChoreRule::parse("fixed:7");
    c.task = TrialTask::parse("algdiv");
    c.trials = 2;
    const auto g = run_grid(c);
    REQUIRE(g.records.size() == 2);
    CHECK_FALSE(g.records[0].error.empty());
    CHECK_FALSE(g.records[0].found);
    CHECK(g.summary.front().errors == 2);
}

TEST_CASE("summaries") {
    const auto one = summarize({record(true, true)});
    REQUIRE(one.size() == 1);
    CHECK(one[0].success_rate == 1.0);
    CHECK(one[0].ef_rate == 1.0);
    CHECK(one[0].prop_rate == 1.0);

    const auto mixed = summarize({record(true, true), record(true, false), record(false, false)});
    CHECK(mixed[0].trials == 3);
    CHECK(mixed[0].success_rate == 2.0 / 3.0);
    CHECK(mixed[0].ef_rate == 1.0 / 3.0);
    CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("mean T agrees with the closed form on n = m = 20") {
    ExperimentConfig c;
    c.n_values = {20};
    c.m_rule = ChoreRule::parse("fixed:20");
    c.task = TrialTask::parse("cert-ef");
    c.trials = 4000;
    c.workers = 4;
    const auto g = run_grid(c);
    const auto& s = g.summary.front();
    double sq = 0.0;
    for (const auto& r : g.records) {
        const double dev = static_cast<double>(r.repeated_favorites) - s.mean_T;
        sq += dev * dev;
    }
    const double se = std::sqrt(sq / (c.trials - 1) / c.trials);
    CHECK(std::abs(s.mean_T - s.expected_T) <= 3.0 * se);
}
