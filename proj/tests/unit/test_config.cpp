#include "astra/config.hpp"
#include "astra/util.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace astra;

TEST(Config, Defaults) {
    const auto c = load_config(std::nullopt, {}, {});
    EXPECT_EQ(c.top_k, 3u);
    EXPECT_EQ(c.embedder.dimension, 384u);
    EXPECT_EQ(c.embedder.kind, EmbedderKind::Deterministic);
    EXPECT_EQ(c.model.kind, EndpointKind::LocalRuntime);
    EXPECT_EQ(c.model.base_url, std::string(kDefaultModelUrl));
    EXPECT_EQ(c.model.model_name, std::string(kDefaultModelName));
    EXPECT_EQ(c.char_budget, 0u);
    EXPECT_FALSE(c.min_score);
}

TEST(Config, Layering) {
    fixtures::TempDir tmp;
    util::write_file(tmp / "c.toml", R"(top_k = 5
min_score = 0.25

[model]
base_url = "http://file:1"
model_name = "from-file"

[embedder]
dimension = 64
)");
    const Environment env{{"ASTRA_MODEL_ENDPOINT", "http://env:2"}};

    auto c = load_config(tmp / "c.toml", {}, {});
    EXPECT_EQ(c.top_k, 5u);
    EXPECT_EQ(c.model.base_url, "http://file:1");
    EXPECT_EQ(c.embedder.dimension, 64u);
    ASSERT_TRUE(c.min_score);
    EXPECT_DOUBLE_EQ(*c.min_score, 0.25);

    c = load_config(tmp / "c.toml", {}, env);
    EXPECT_EQ(c.model.base_url, "http://env:2");
    EXPECT_EQ(c.model.model_name, "from-file");

    ConfigOverrides flags;
    flags.endpoint = "http://flag:3";
    flags.top_k = 7;
    c = load_config(tmp / "c.toml", flags, env);
    EXPECT_EQ(c.model.base_url, "http://flag:3");
    EXPECT_EQ(c.top_k, 7u);
}

TEST(Config, InvalidValuesNameTheKey) {
    fixtures::TempDir tmp;
    std::string msg;
    ConfigOverrides flags;
    flags.top_k = 0;
    EXPECT_EQ(fixtures::error_kind([&] { load_config(std::nullopt, flags, {}); }, &msg), ErrorKind::InvalidValue);
    EXPECT_NE(msg.find("top_k"), std::string::npos);

    util::write_file(tmp / "zero.toml", "top_k = 0\n");
    EXPECT_EQ(fixtures::error_kind([&] { load_config(tmp / "zero.toml", {}, {}); }, &msg), ErrorKind::InvalidValue);
    EXPECT_NE(msg.find("top_k"), std::string::npos);

    util::write_file(tmp / "unknown.toml", "topk = 3\n");
    EXPECT_EQ(fixtures::error_kind([&] { load_config(tmp / "unknown.toml", {}, {}); }, &msg),
              ErrorKind::InvalidValue);
    EXPECT_NE(msg.find("topk"), std::string::npos);

    util::write_file(tmp / "type.toml", "[model]\ntimeout_s = \"soon\"\n");
    EXPECT_EQ(fixtures::error_kind([&] { load_config(tmp / "type.toml", {}, {}); }, &msg), ErrorKind::InvalidValue);
    EXPECT_NE(msg.find("timeout_s"), std::string::npos);
}

TEST(Config, UnreadableFile) {
    fixtures::TempDir tmp;
    EXPECT_EQ(fixtures::error_kind([&] { load_config(tmp / "missing.toml", {}, {}); }), ErrorKind::UnreadableConfig);
    util::write_file(tmp / "bad.toml", "top_k = = 3\n");
    std::string msg;
    EXPECT_EQ(fixtures::error_kind([&] { load_config(tmp / "bad.toml", {}, {}); }, &msg), ErrorKind::UnreadableConfig);
    EXPECT_NE(msg.find("bad.toml:1"), std::string::npos) << msg;
}

TEST(Config, RenderParsesBack) {
    fixtures::TempDir tmp;
    ConfigOverrides flags;
    flags.top_k = 4;
    flags.min_score = 0.5;
    flags.model_name = "m";
    const auto c = load_config(std::nullopt, flags, {});
    const auto text = render_config(c);
    util::write_file(tmp / "r.toml", text);
    const auto back = load_config(tmp / "r.toml", {}, {});
    EXPECT_EQ(render_config(back), text);
    EXPECT_EQ(back.top_k, 4u);
    EXPECT_EQ(back.model.model_name, "m");
}
