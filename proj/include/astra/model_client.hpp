#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace astra {

enum class EndpointKind { LocalRuntime, RemoteApi, Replay };
std::string_view to_string(EndpointKind kind);
/// Accepts "local_runtime"/"local", "remote_api"/"remote", "replay".
EndpointKind parse_endpoint_kind(std::string_view text);

inline constexpr double kDefaultTimeoutSeconds = 300.0;
inline constexpr std::string_view kDefaultApiKeyEnv = "ASTRA_API_KEY";

struct ModelEndpointConfig {
    EndpointKind kind = EndpointKind::LocalRuntime;
    std::optional<std::string> base_url;
    std::string model_name;
    std::optional<std::string> api_key_env;
    std::optional<std::filesystem::path> replay_dir;
    double timeout_s = kDefaultTimeoutSeconds;

    /// Throws InvalidConfig.
    void validate() const;
};

struct GenerationResult {
    std::string full_text;
    std::vector<std::string> chunks;
    std::string model_name;
};

using ChunkConsumer = std::function<void(std::string_view)>;

class ModelClient {
public:
    virtual ~ModelClient() = default;
    /// `on_chunk` may be empty; otherwise it is called once per fragment, in order.
    virtual GenerationResult generate(std::string_view prompt, const ChunkConsumer& on_chunk) = 0;
};

/// First 16 hex digits of SHA-256(prompt); the replay key.
std::string prompt_digest(std::string_view prompt);

/// Serves `<digest>.txt` from a directory; `<digest>.meta.json` (optional)
/// holds the model name and fragment lengths.
class ReplayClient : public ModelClient {
public:
    ReplayClient(std::filesystem::path dir, std::string default_model_name);
    GenerationResult generate(std::string_view prompt, const ChunkConsumer& on_chunk) override;

private:
    std::filesystem::path dir_;
    std::string default_model_name_;
};

/// Writes a result into a replay directory so ReplayClient reproduces it.
void store_replay(const std::filesystem::path& dir, std::string_view prompt, const GenerationResult& result);

/// Newline-delimited JSON from `POST {base_url}/api/generate`.
class LocalRuntimeClient : public ModelClient {
public:
    explicit LocalRuntimeClient(ModelEndpointConfig config);
    GenerationResult generate(std::string_view prompt, const ChunkConsumer& on_chunk) override;

private:
    ModelEndpointConfig config_;
};

/// Server-sent events from `POST {base_url}/v1/chat/completions`.
class RemoteApiClient : public ModelClient {
public:
    explicit RemoteApiClient(ModelEndpointConfig config);
    GenerationResult generate(std::string_view prompt, const ChunkConsumer& on_chunk) override;

private:
    ModelEndpointConfig config_;
};

/// Forwards to another client and stores every result for later replay.
class RecordingClient : public ModelClient {
public:
    RecordingClient(std::unique_ptr<ModelClient> inner, std::filesystem::path dir);
    GenerationResult generate(std::string_view prompt, const ChunkConsumer& on_chunk) override;

private:
    std::unique_ptr<ModelClient> inner_;
    std::filesystem::path dir_;
};

std::unique_ptr<ModelClient> make_model_client(const ModelEndpointConfig& config);

GenerationResult generate(std::string_view prompt, const ModelEndpointConfig& config, const ChunkConsumer& on_chunk);

/// First fenced block; else the longest brace-balanced run of code-looking
/// lines containing a ';'; else the whole response. Blank edge lines are
/// trimmed. Throws EmptyResponse on a blank response.
std::string extract_code_block(std::string_view response);

}  // namespace astra
