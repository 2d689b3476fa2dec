#include "astra/evaluator.hpp"
#include "astra/model_client.hpp"
#include "astra/structure.hpp"
#include "normalize_cases.hpp"
#include "score_tables.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

using namespace astra;
namespace fs = std::filesystem;

namespace {

std::string chomp(std::string s) {
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

nlohmann::json oracle_scores() { return nlohmann::json::parse(fixtures::read("oracle/evaluator_scores.json")); }

}  // namespace

TEST(ScorePair, SelfSimilarity) {
    const HashedBowEmbedder e;
    const auto ref = fixtures::read("evaluator/tasks/fill_gaussian.reference.cpp");
    EXPECT_NEAR(score_pair(ref, ref, {}, e), 1.0, 1e-9);
}

TEST(ScorePair, RenameInvariantOverFixtures) {
    const HashedBowEmbedder e;
    std::mt19937 rng(11);
    for (const auto& f : fixtures::load_norm_fixtures()) {
        const auto renamed = fixtures::rename_locals(f.code, f.locals, rng);
        EXPECT_NEAR(score_pair(renamed, f.code, {}, e), 1.0, 1e-9) << f.name;
    }
}

TEST(ScorePair, HandNormalizedTextsMatch) {
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"evaluator/tasks/fill_gaussian.reference.cpp", "fill_gaussian.reference"},
        {"evaluator/tasks/sum_squares.reference.cpp", "sum_squares.reference"},
        {"evaluator/generations/sum_squares/replay/baseline.txt", "sum_squares.baseline"},
        {"evaluator/clamp/reference.cpp", "clamp.reference"},
        {"evaluator/clamp/generated.cpp", "clamp.generated"},
    };
    for (const auto& [src, norm] : cases) {
        EXPECT_EQ(chomp(normalize_identifiers(fixtures::read(src))),
                  chomp(fixtures::read("evaluator/normalized/" + norm + ".cpp")))
            << src;
    }
    for (const auto& [gen, norm] : std::vector<std::pair<std::string, std::string>>{
             {"fill_gaussian/replay/baseline.txt", "fill_gaussian.baseline"},
             {"fill_gaussian/replay/augmented.txt", "fill_gaussian.augmented"},
             {"sum_squares/replay/augmented.txt", "sum_squares.augmented"}}) {
        const auto code = extract_code_block(fixtures::read("evaluator/generations/" + gen));
        EXPECT_EQ(chomp(normalize_identifiers(code)), chomp(fixtures::read("evaluator/normalized/" + norm + ".cpp")))
            << gen;
    }
}

TEST(ScorePair, AddedStatementMatchesOracle) {
    const HashedBowEmbedder e;
    const double s = score_pair(fixtures::read("evaluator/clamp/generated.cpp"),
                                fixtures::read("evaluator/clamp/reference.cpp"), {}, e);
    EXPECT_LT(s, 1.0);
    EXPECT_NEAR(s, oracle_scores()["clamp/added_statement"].get<double>(), 1e-4);
}

TEST(ScorePair, RenamedTwinScoresOne) {
    const HashedBowEmbedder e;
    const auto twin = extract_code_block(fixtures::read("evaluator/generations/sum_squares/replay/augmented.txt"));
    EXPECT_NEAR(score_pair(twin, fixtures::read("evaluator/tasks/sum_squares.reference.cpp"), {}, e), 1.0, 1e-9);
}

TEST(ScorePair, NamesOffendingSide) {
    const HashedBowEmbedder e;
    std::string msg;
    EXPECT_EQ(fixtures::error_kind([&] { score_pair("int x;", "int f() { return 1; }", {}, e); }, &msg),
              ErrorKind::NotAFunction);
    EXPECT_NE(msg.find("generated"), std::string::npos);
    EXPECT_EQ(fixtures::error_kind([&] { score_pair("int f() { return 1; }", "int x;", {}, e); }, &msg),
              ErrorKind::NotAFunction);
    EXPECT_NE(msg.find("reference"), std::string::npos);
}

TEST(Benchmark, FixtureMatchesOracle) {
    const auto tasks = load_manifest(fixtures::dir("evaluator/manifest.json"));
    ASSERT_EQ(tasks.size(), 2u);
    for (const auto& t : tasks) EXPECT_NO_THROW(validate_task(t));
    const auto gens = scan_generations(fixtures::dir("evaluator/generations"), tasks);
    EXPECT_EQ(gens.size(), 4u);
    const HashedBowEmbedder e;
    const auto records = run_benchmark(tasks, gens, e);
    ASSERT_EQ(records.size(), 4u);
    const auto oracle = oracle_scores();
    for (const auto& r : records) {
        const std::string key = r.task_id + "/" + std::string(to_string(r.mode));
        EXPECT_NEAR(r.score, oracle[key].get<double>(), 1e-4) << key;
        EXPECT_EQ(r.model_name, "replay");
        EXPECT_EQ(r.embedder_id, e.id());
    }
    EXPECT_EQ(records[0].task_id, "fill_gaussian");
    EXPECT_EQ(records[0].mode, EvalMode::Baseline);
    EXPECT_EQ(records[1].mode, EvalMode::Augmented);
}

TEST(Benchmark, Cardinality) {
    const auto tasks = load_manifest(fixtures::dir("evaluator/manifest.json"));
    GenerationMap one;
    for (const auto& [k, v] : scan_generations(fixtures::dir("evaluator/generations"), tasks)) {
        if (k.task_id == "sum_squares") one[k] = v;
    }
    const std::vector<BenchmarkTask> only{tasks[1]};
    EXPECT_EQ(run_benchmark(only, one, HashedBowEmbedder()).size(), 2u);
    EXPECT_TRUE(run_benchmark(only, {}, HashedBowEmbedder()).empty());
}

TEST(Benchmark, MissingGenerationListsFiles) {
    const auto tasks = load_manifest(fixtures::dir("evaluator/manifest.json"));
    auto gens = scan_generations(fixtures::dir("evaluator/generations"), tasks);
    gens[GenerationKey{"sum_squares", "replay", EvalMode::Augmented}] = "/nonexistent/augmented.txt";
    std::string msg;
    EXPECT_EQ(fixtures::error_kind([&] { run_benchmark(tasks, gens, HashedBowEmbedder()); }, &msg),
              ErrorKind::MissingGeneration);
    EXPECT_NE(msg.find("sum_squares/replay/augmented"), std::string::npos) << msg;
}

TEST(Manifest, InvalidTasks) {
    fixtures::TempDir tmp;
    util::write_file(tmp / "m.json", R"([{"id": "Bad Id", "prompt_file": "p", "reference_file": "r"}])");
    EXPECT_EQ(fixtures::error_kind([&] { load_manifest(tmp / "m.json"); }), ErrorKind::InvalidTask);
    util::write_file(tmp / "d.json", R"([{"id": "a", "prompt_file": "p", "reference_file": "r"},
                                         {"id": "a", "prompt_file": "p", "reference_file": "r"}])");
    EXPECT_EQ(fixtures::error_kind([&] { load_manifest(tmp / "d.json"); }), ErrorKind::InvalidTask);
    util::write_file(tmp / "two.cpp", "int f() { return 1; }\nint g() { return 2; }\n");
    BenchmarkTask t{"two", "", tmp / "p", tmp / "two.cpp", {}};
    EXPECT_EQ(fixtures::error_kind([&] { validate_task(t); }), ErrorKind::InvalidTask);
}

TEST(Table, TranscribedRowsRenderToTwoDecimals) {
    const auto text = render_table(fixtures::table_records(), fixtures::kTableModels, fixtures::table_labels(),
                                   fixtures::table_task_order());
    EXPECT_EQ(fixtures::table_row(text, "baseline", fixtures::kTableTasks[0]),
              (std::vector<std::string>{"0.32", "0.99", "0.92", "0.94"}));
    EXPECT_EQ(fixtures::table_row(text, "augmented", fixtures::kTableTasks[4]),
              (std::vector<std::string>{"0.99", "0.99", "0.92", "0.90"}));
    EXPECT_EQ(text.rfind("mode: baseline\n", 0), 0u);
}

TEST(Table, NoRecordsIsHeaderOnly) {
    const auto text = render_table({}, {"m1", "m2"});
    EXPECT_EQ(text, "mode: baseline\ntask  m1  m2\n\nmode: augmented\ntask  m1  m2\n");
}

TEST(Table, MissingCellIsDash) {
    const auto text = render_table({{"a", "m1", EvalMode::Baseline, 0.5, "e"}}, {"m1", "m2"});
    EXPECT_NE(text.find("a     0.50   —"), std::string::npos) << text;
}

TEST(Csv, FullPrecision) {
    const auto csv = render_csv({{"a", "m", EvalMode::Augmented, 0.1, "e"}});
    EXPECT_EQ(csv, "task_id,model,mode,score,embedder_id\na,m,augmented,0.10000000000000001,e\n");
}
