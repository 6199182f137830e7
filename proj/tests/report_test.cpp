#include "corpus.hpp"
#include "dps/generators.hpp"
#include "dps/report.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

using namespace dps;
using Json = nlohmann::json;

namespace {

SynthesisResult success_with(const Model& m, std::initializer_list<std::pair<const char*, const char*>> rules)
{
    SynthesisResult r;
    r.status = SynthesisResult::Status::Success;
    for (const auto& [lo, hi] : rules)
        r.priorities.insert({m.system.interaction_index(lo), m.system.interaction_index(hi)});
    r.stats.sat_calls = 3;
    r.stats.time_ms = 42;
    return r;
}

TEST(ReportTest, ControllersFollowTheLowInteraction)
{
    auto m = gen_multicore(4, {"A"});
    auto doc = Json::parse(result_json(m, success_with(m, {{"B1", "A1"}})));
    EXPECT_EQ(doc["status"], "success");
    EXPECT_EQ(doc["priorities"], Json::parse(R"([["B1","A1"]])"));
    const auto& ctl = doc["controllers"];
    EXPECT_EQ(ctl.size(), m.system.num_components());
    EXPECT_EQ(ctl["B"], Json::parse(R"([["B1","A1"]])"));
    EXPECT_EQ(ctl["M1"], Json::parse(R"([["B1","A1"]])"));
    EXPECT_TRUE(ctl["A"].empty());
    EXPECT_TRUE(ctl["M2"].empty());
}

TEST(ReportTest, EmptySetLeavesEveryControllerUnrestricted)
{
    auto m = gen_multicore(4, {"A"});
    auto r = success_with(m, {});
    auto doc = Json::parse(result_json(m, r));
    for (const auto& [name, rules] : doc["controllers"].items())
        EXPECT_TRUE(rules.empty()) << name;
    EXPECT_NE(result_table(m, r).find("unrestricted"), std::string::npos);
}

TEST(ReportTest, TimingIsOptIn)
{
    auto m = corpus::two_choice_model(true);
    auto r = success_with(m, {});
    auto plain = Json::parse(result_json(m, r));
    EXPECT_FALSE(plain["stats"].contains("timeMs"));
    EXPECT_EQ(plain["stats"]["satCalls"], 3);
    auto timed = Json::parse(result_json(m, r, {.timing = true}));
    EXPECT_EQ(timed["stats"]["timeMs"], 42);
}

TEST(ReportTest, FailureCarriesEvidence)
{
    auto m = corpus::two_choice_model(false);
    SynthesisResult r;
    r.status = SynthesisResult::Status::Infeasible;
    r.evidence = "no way out";
    auto doc = Json::parse(result_json(m, r));
    EXPECT_EQ(doc["status"], "infeasible");
    EXPECT_EQ(doc["evidence"], "no way out");
    EXPECT_TRUE(doc["priorities"].empty());
    EXPECT_NE(result_table(m, r).find("no way out"), std::string::npos);
}

TEST(ReportTest, TableListsRulesPerController)
{
    auto m = gen_multicore(4, {"A"});
    auto table = result_table(m, success_with(m, {{"B1", "A1"}, {"C1", "A1"}}));
    EXPECT_NE(table.find("Controller B"), std::string::npos);
    EXPECT_NE(table.find("Controller C"), std::string::npos);
    EXPECT_NE(table.find("(B1 < A1)"), std::string::npos);
    EXPECT_EQ(table.find("Controller A "), std::string::npos);
}

TEST(ReportTest, ResultRoundTrips)
{
    auto m = gen_multicore(4, {"A"});
    auto r = success_with(m, {{"B1", "A1"}, {"D2", "idleA"}});
    auto back = parse_result(result_json(m, r), m);
    EXPECT_EQ(back.status, SynthesisResult::Status::Success);
    EXPECT_EQ(back.priorities, r.priorities);
}

TEST(ReportTest, RefinedModelIsEmbedded)
{
    auto m = corpus::two_choice_model(true);
    SynthesisOptions o;
    o.refine = Refinement::Eager;
    o.budget_seconds = 0;
    auto r = synthesize(m, o);
    ASSERT_TRUE(r.success());
    auto text = result_json(m, r);
    if (r.refined) {
        EXPECT_TRUE(Json::parse(text).contains("model"));
        auto back = parse_result(text, m);
        EXPECT_EQ(back.model.system.interactions, r.refined->system.interactions);
        EXPECT_EQ(back.priorities, r.priorities);
    } else {
        EXPECT_FALSE(Json::parse(text).contains("model"));
    }
}

TEST(ReportTest, MalformedResultsAreRejected)
{
    auto m = corpus::two_choice_model(true);
    EXPECT_THROW((void)parse_result("{", m), ModelError);
    EXPECT_THROW((void)parse_result(R"({"status":"maybe","priorities":[]})", m), ModelError);
    EXPECT_THROW((void)parse_result(R"({"status":"success","priorities":[["nope","a"]]})", m), ModelError);
    EXPECT_THROW((void)parse_result(R"({"status":"success","priorities":[["a"]]})", m), ModelError);
}

TEST(ReportTest, TraceHasOneLinePerStep)
{
    auto m = gen_philosophers(3, PhilosopherArch::CounterClockwise);
    auto t = simulate_distributed(m.system, m.architecture, m.risk, {.steps = 5, .seed = 7});
    auto text = trace_jsonl(m.system, t);
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        auto rec = Json::parse(line);
        EXPECT_TRUE(rec.contains("config"));
        EXPECT_TRUE(rec.contains("chosen"));
        EXPECT_TRUE(rec["enabledSet"].is_array());
        EXPECT_EQ(rec["config"]["Phil0"].is_string(), true);
        ++n;
    }
    EXPECT_EQ(n, t.steps.size());
}

TEST(ReportTest, VerdictShowsWitness)
{
    auto m = gen_philosophers(2, PhilosopherArch::None);
    auto v = check_safe(m.system, m.risk);
    auto doc = Json::parse(verdict_json(m.system, v));
    EXPECT_EQ(doc["verdict"], "deadlock");
    EXPECT_EQ(doc["witness"].size(), doc["labels"].size() + 1);
}

TEST(ReportTest, OutputIsDeterministic)
{
    auto m = gen_philosophers(3, PhilosopherArch::CounterClockwise);
    SynthesisOptions o;
    o.budget_seconds = 0;
    EXPECT_EQ(result_json(m, synthesize(m, o)), result_json(m, synthesize(m, o)));
}

} // namespace
