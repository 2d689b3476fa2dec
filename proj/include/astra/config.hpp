#pragma once

#include "astra/embedding.hpp"
#include "astra/model_client.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace astra {

inline constexpr std::string_view kDefaultConfigPath = ".astra/config.toml";
inline constexpr std::string_view kDefaultModelUrl = "http://localhost:11434";
inline constexpr std::string_view kDefaultModelName = "codellama:13b-instruct";

struct PipelineConfig {
    std::filesystem::path index_path = ".astra/index.json";
    std::optional<std::filesystem::path> compile_db_path;
    EmbedderConfig embedder;
    ModelEndpointConfig model;
    std::size_t top_k = 3;
    std::optional<double> min_score;
    std::size_t char_budget = 0;  // 0 = unlimited
    std::optional<std::filesystem::path> general_instructions_path;
    std::filesystem::path run_root = ".astra/runs";
};

PipelineConfig default_config();

/// Values given on the command line; unset fields leave lower layers alone.
struct ConfigOverrides {
    std::optional<std::filesystem::path> index_path;
    std::optional<std::filesystem::path> compile_db_path;
    std::optional<std::size_t> top_k;
    std::optional<double> min_score;
    std::optional<std::size_t> char_budget;
    std::optional<std::filesystem::path> general_instructions_path;
    std::optional<std::filesystem::path> run_root;
    std::optional<std::string> embedder_kind;
    std::optional<std::size_t> embedder_dimension;
    std::optional<std::string> embed_endpoint;
    std::optional<std::string> model_kind;
    std::optional<std::string> endpoint;
    std::optional<std::string> model_name;
    std::optional<std::filesystem::path> replay_dir;
    std::optional<double> timeout_s;
};

using Environment = std::map<std::string, std::string>;

/// Reads ASTRA_MODEL_ENDPOINT and ASTRA_EMBED_ENDPOINT from the process.
Environment process_environment();

/// defaults < TOML file < environment < flags. `file` unset means
/// `.astra/config.toml` when it exists. Throws UnreadableConfig and
/// InvalidValue naming the key.
PipelineConfig load_config(const std::optional<std::filesystem::path>& file, const ConfigOverrides& flags = {},
                           const Environment& env = process_environment());

/// The effective configuration as TOML.
std::string render_config(const PipelineConfig& config);

}  // namespace astra
