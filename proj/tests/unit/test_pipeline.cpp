#include "astra/pipeline.hpp"
#include "astra/util.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace astra;
namespace fs = std::filesystem;

namespace {

PipelineConfig e2e_config(const fs::path& run_root, const fs::path& replay_dir) {
    ConfigOverrides flags;
    flags.index_path = fixtures::dir("golden/fill_kernel_index.json");
    flags.general_instructions_path = fixtures::dir("e2e/instructions.txt");
    flags.model_kind = "replay";
    flags.replay_dir = replay_dir;
    flags.run_root = run_root;
    return load_config(std::nullopt, flags, {});
}

struct E2E {
    fixtures::TempDir tmp;
    fs::path target = tmp / "FieldSolver.cpp";
    PipelineConfig config = e2e_config(tmp / "runs", fixtures::dir("e2e/replay"));

    E2E() { fs::copy_file(fixtures::dir("e2e/FieldSolver.cpp"), target); }

    RunOutcome run(EditDecision decision, std::istream* in = nullptr) {
        RunOptions o;
        o.prompt_file = fixtures::dir("e2e/edit_prompt.txt");
        o.target_file = target;
        o.decision = decision;
        o.in = in;
        return run_pipeline(o, config);
    }
};

}  // namespace

TEST(Pipeline, AcceptRewritesTarget) {
    E2E e;
    const auto out = e.run(EditDecision::Accept);
    EXPECT_EQ(out.intent.kind, IntentKind::Edit);
    EXPECT_EQ(out.action, "accepted");
    ASSERT_TRUE(out.proposal);
    EXPECT_EQ(out.proposal->range, (SourceRange{10, 19}));
    EXPECT_EQ(out.generation.model_name, "codellama:13b-instruct");
    EXPECT_EQ(out.generation.chunks.size(), 4u);
    EXPECT_EQ(util::read_file(e.target), fixtures::read("e2e/FieldSolver.accepted.cpp"));
    EXPECT_FALSE(fs::exists(backup_path(e.target)));
    for (const char* f : {"prompt.txt", "retrieval.json", "response.txt", "code.txt", "proposal.json",
                          "outcome.json"}) {
        EXPECT_TRUE(fs::is_regular_file(out.run_dir / f)) << f;
    }
    EXPECT_EQ(util::read_file(out.run_dir / "prompt.txt"), out.prompt);
    ASSERT_EQ(out.retrieved.size(), 1u);
    EXPECT_EQ(out.retrieved[0].chunk_id, "multifab/fill_parallelfor.cpp#0");
}

TEST(Pipeline, RecordOnlyLeavesTarget) {
    E2E e;
    const auto out = e.run(EditDecision::RecordOnly);
    EXPECT_EQ(out.action, "recorded");
    EXPECT_TRUE(out.proposal);
    EXPECT_EQ(util::read_file(e.target), fixtures::read("e2e/FieldSolver.cpp"));
    EXPECT_TRUE(fs::is_regular_file(out.run_dir / "proposal.json"));
}

TEST(Pipeline, MarkersThenResolve) {
    E2E e;
    const auto out = e.run(EditDecision::Markers);
    EXPECT_EQ(out.action, "markers");
    const auto marked = util::read_file(e.target);
    EXPECT_TRUE(has_markers(marked));
    EXPECT_TRUE(fs::exists(backup_path(e.target)));
    resolve_file(e.target, Resolution::Reject);
    EXPECT_EQ(util::read_file(e.target), fixtures::read("e2e/FieldSolver.cpp"));
    EXPECT_FALSE(fs::exists(backup_path(e.target)));
}

TEST(Pipeline, InteractiveAnswers) {
    {
        E2E e;
        std::istringstream in("r\n");
        EXPECT_EQ(e.run(EditDecision::Interactive, &in).action, "rejected");
        EXPECT_EQ(util::read_file(e.target), fixtures::read("e2e/FieldSolver.cpp"));
    }
    {
        E2E e;
        std::istringstream in("a\n");
        EXPECT_EQ(e.run(EditDecision::Interactive, &in).action, "accepted");
        EXPECT_EQ(util::read_file(e.target), fixtures::read("e2e/FieldSolver.accepted.cpp"));
    }
    {
        E2E e;
        std::istringstream in("");
        e.run(EditDecision::Interactive, &in);
        EXPECT_TRUE(has_markers(util::read_file(e.target)));
    }
}

TEST(Pipeline, ExplainPromptMakesNoProposal) {
    fixtures::TempDir tmp;
    const fs::path target = tmp / "FieldSolver.cpp";
    fs::copy_file(fixtures::dir("e2e/FieldSolver.cpp"), target);
    util::write_file(tmp / "explain.txt", "Explain what initField does.\n");
    const auto config = e2e_config(tmp / "runs", tmp / "replay");

    const auto composed = compose_for(util::read_file(tmp / "explain.txt"), target, std::nullopt, config);
    EXPECT_EQ(composed.intent.kind, IntentKind::Explain);
    store_replay(tmp / "replay", composed.prompt, {"It fills a Gaussian.", {"It fills a Gaussian."}, "replay"});

    RunOptions o;
    o.prompt_file = tmp / "explain.txt";
    o.target_file = target;
    o.decision = EditDecision::Accept;
    const auto out = run_pipeline(o, config);
    EXPECT_EQ(out.prompt, composed.prompt);
    EXPECT_FALSE(out.proposal);
    EXPECT_EQ(out.action, "none");
    EXPECT_FALSE(fs::exists(out.run_dir / "proposal.json"));
    EXPECT_EQ(util::read_file(target), fixtures::read("e2e/FieldSolver.cpp"));
}

TEST(Pipeline, BlankPrompt) {
    fixtures::TempDir tmp;
    util::write_file(tmp / "blank.txt", "  \n\n");
    RunOptions o;
    o.prompt_file = tmp / "blank.txt";
    EXPECT_EQ(fixtures::error_kind([&] { run_pipeline(o, e2e_config(tmp / "runs", tmp.path())); }), ErrorKind::BlankPrompt);
}
