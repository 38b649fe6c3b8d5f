#include <doctest.h>

#include <filesystem>

#include "socsim/engine.hpp"
#include "socsim/scenario.hpp"
#include "test_support.hpp"

using namespace socsim;
namespace fs = std::filesystem;

TEST_CASE("demo scenario validates cleanly") {
    auto config = load_scenario(test::scenario_path("demo_event2.json"));
    CHECK(config.event.horizon_days == 7);
    CHECK(config.crowd.agents.size() == 10);
    CHECK(config.rng_seed == 42);
    CHECK(validate_scenario(config).empty());
}

TEST_CASE("out-of-range attitude names the agent and the bound") {
    auto config = load_scenario(test::scenario_path("demo_event2.json"));
    config.crowd.agents[0].attitude = 1.5;
    const auto report = validate_scenario(config);
    REQUIRE(report.size() == 1);
    CHECK(report[0].message.find("students") != std::string::npos);
    CHECK(report[0].message.find("[-1, 1]") != std::string::npos);
}

TEST_CASE("control outside 1..5 is a violation") {
    auto config = load_scenario(test::scenario_path("demo_event2.json"));
    config.control = 6;
    const auto report = validate_scenario(config);
    REQUIRE(report.size() == 1);
    CHECK(report[0].message == "control must be in 1..5");
}

TEST_CASE("assorted range violations are caught") {
    auto config = load_scenario(test::scenario_path("demo_event2.json"));

    SUBCASE("horizon") {
        config.event.horizon_days = 0;
        CHECK_FALSE(validate_scenario(config).empty());
    }
    SUBCASE("epsilon") {
        config.crowd.agents[2].epsilon = 1.2;
        CHECK_FALSE(validate_scenario(config).empty());
    }
    SUBCASE("population") {
        config.crowd.agents[0].population_size = 0;
        CHECK_FALSE(validate_scenario(config).empty());
    }
    SUBCASE("inactive schedule entry with valence") {
        ScheduleEntry entry;
        entry.t = 2;
        entry.kind = InterventionKind::Inactive;
        entry.valence = 0.3;
        config.source_agents[0].schedule.push_back(entry);
        CHECK_FALSE(validate_scenario(config).empty());
    }
    SUBCASE("schedule t outside horizon") {
        config.source_agents[0].schedule[0].t = 9;
        CHECK_FALSE(validate_scenario(config).empty());
    }
    SUBCASE("duplicate agent ids") {
        config.crowd.agents[1].agent_id = config.crowd.agents[0].agent_id;
        CHECK_FALSE(validate_scenario(config).empty());
    }
    SUBCASE("lambda") {
        config.engine.lambda = 1.5;
        CHECK_FALSE(validate_scenario(config).empty());
    }
}

TEST_CASE("serialize(deserialize(x)) is byte-identical for the bundled corpus") {
    int checked = 0;
    for (const auto& entry : fs::directory_iterator(test::source_dir() + "/scenarios")) {
        if (entry.path().extension() != ".json") continue;
        const std::string original = test::read_file(entry.path().string());
        const auto config = load_scenario(entry.path().string());
        CHECK_MESSAGE(serialize_scenario(config) == original, entry.path().string());
        ++checked;
    }
    CHECK(checked >= 6);
}

TEST_CASE("scenario load errors carry types") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), FileError);

    test::TempDir tmp("scenario");
    {
        std::ofstream out(tmp.str("bad.json"));
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_scenario(tmp.str("bad.json")), SchemaError);

    {
        std::ofstream out(tmp.str("badkind.json"));
        out << R"({"event":{"id":"x"},"source_agents":[{"id":"s","schedule":[{"kind":"Boost","t":1}]}]})";
    }
    CHECK_THROWS_AS(load_scenario(tmp.str("badkind.json")), SchemaError);
}

TEST_CASE("every initializer of the simulation loop is reachable from the config") {
    auto config = load_scenario(test::scenario_path("demo_event2.json"));
    CHECK_FALSE(config.event.id.empty());     // the event
    CHECK(config.source_agents.size() == 2);  // source agent count
    CHECK(config.crowd.agents.size() == 10);  // crowd agent count

    auto crowd = crowd_from_specs(config.crowd.agents, config.engine, config.rng_seed);
    for (const auto& agent : crowd) {
        CHECK_FALSE(agent.cognitive_state.empty());  // initial cognitive state
        CHECK(agent.memory_trace.empty());           // initial memory trace
        CHECK(agent.attitude >= -0.2);               // initial attitude
        CHECK(agent.attitude <= 0.2);
    }

    Engine engine(config, ProviderSet{});
    const auto state = engine.initialize();  // initial population signal
    std::int64_t histogram_total = 0;
    for (auto count : state.population_signal.attitude_histogram) histogram_total += count;
    CHECK(histogram_total == 10);
}
