#include "astra/model_client.hpp"

#include "astra/cpp_lexer.hpp"
#include "astra/error.hpp"
#include "astra/http.hpp"
#include "astra/util.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>

namespace astra {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kModule = "model_client";

void emit(GenerationResult& result, const ChunkConsumer& on_chunk, std::string fragment) {
    if (fragment.empty()) return;
    if (on_chunk) on_chunk(fragment);
    result.full_text += fragment;
    result.chunks.push_back(std::move(fragment));
}

/// Splits a byte stream into lines, carrying partial lines between calls.
class LineBuffer {
public:
    template <typename F>
    void feed(std::string_view data, F&& on_line) {
        pending_.append(data);
        std::size_t start = 0;
        std::size_t nl;
        while ((nl = pending_.find('\n', start)) != std::string::npos) {
            std::string line = pending_.substr(start, nl - start);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            on_line(line);
            start = nl + 1;
        }
        pending_.erase(0, start);
    }

    template <typename F>
    void finish(F&& on_line) {
        if (!pending_.empty()) {
            std::string line;
            line.swap(pending_);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            on_line(line);
        }
    }

private:
    std::string pending_;
};

struct StreamRequest {
    std::string url;
    std::string path;
    httplib::Headers headers;
    std::string body;
    double timeout_s;
};

/// Posts `body` and hands each response line to `on_line`; an exception from
/// `on_line` aborts the transfer and is rethrown.
void post_streaming(const StreamRequest& r, const std::function<void(const std::string&)>& on_line) {
    const auto base = http::parse_base_url(r.url);
    httplib::Client client(base.scheme_host_port);
    const auto secs = static_cast<time_t>(r.timeout_s);
    const auto usecs = static_cast<time_t>((r.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Request req;
    req.method = "POST";
    req.path = base.path(r.path);
    req.headers = r.headers;
    req.headers.emplace("Content-Type", "application/json");
    req.body = r.body;

    int status = 0;
    std::string error_body;
    std::exception_ptr failure;
    LineBuffer lines;
    req.response_handler = [&](const httplib::Response& res) {
        status = res.status;
        return true;
    };
    req.content_receiver = [&](const char* data, std::size_t len, uint64_t, uint64_t) {
        if (status != 200) {
            error_body.append(data, len);
            return true;
        }
        try {
            lines.feed(std::string_view(data, len), on_line);
        } catch (...) {
            failure = std::current_exception();
            return false;
        }
        return true;
    };

    auto res = client.send(req);
    if (failure) std::rethrow_exception(failure);
    if (!res) {
        throw Error(ErrorKind::EndpointUnreachable, kModule,
                    r.url + r.path + ": " + httplib::to_string(res.error()));
    }
    if (status != 200) {
        throw Error(ErrorKind::ProtocolError, kModule,
                    "HTTP " + std::to_string(status) + " from " + r.url + r.path + ": " +
                        std::string(util::trim(error_body)));
    }
    lines.finish(on_line);
}

json parse_json_line(const std::string& line, const char* what) {
    try {
        return json::parse(line);
    } catch (const json::parse_error&) {
        throw Error(ErrorKind::ProtocolError, kModule, std::string("malformed ") + what + ": " + line);
    }
}

bool is_code_like(std::string_view line) {
    const auto t = util::trim(line);
    if (t.empty()) return false;
    if (t.front() == '#' || t.substr(0, 2) == "//" || t.substr(0, 2) == "/*" || t.front() == '*') return true;
    return t.find_first_of(";{}()=<>") != std::string_view::npos;
}

bool braces_balance(std::string_view text) {
    long depth[3] = {0, 0, 0};
    for (const auto& tok : cpp::significant_tokens(text)) {
        if (tok.kind != cpp::TokenKind::Punct) continue;
        const std::string_view opens = "({[";
        const std::string_view closes = ")}]";
        if (auto i = opens.find(tok.text); tok.text.size() == 1 && i != std::string_view::npos) ++depth[i];
        if (auto i = closes.find(tok.text); tok.text.size() == 1 && i != std::string_view::npos) {
            if (--depth[i] < 0) return false;
        }
    }
    return depth[0] == 0 && depth[1] == 0 && depth[2] == 0;
}

}  // namespace

std::string_view to_string(EndpointKind kind) {
    switch (kind) {
    case EndpointKind::LocalRuntime: return "local_runtime";
    case EndpointKind::RemoteApi: return "remote_api";
    case EndpointKind::Replay: return "replay";
    }
    return "local_runtime";
}

EndpointKind parse_endpoint_kind(std::string_view text) {
    if (text == "local_runtime" || text == "local") return EndpointKind::LocalRuntime;
    if (text == "remote_api" || text == "remote") return EndpointKind::RemoteApi;
    if (text == "replay") return EndpointKind::Replay;
    throw Error(ErrorKind::InvalidConfig, kModule, "unknown endpoint kind \"" + std::string(text) + "\"");
}

void ModelEndpointConfig::validate() const {
    if (kind == EndpointKind::Replay) {
        if (!replay_dir || replay_dir->empty()) {
            throw Error(ErrorKind::InvalidConfig, kModule, "replay endpoint requires replay_dir");
        }
    } else {
        if (!base_url || base_url->empty()) {
            throw Error(ErrorKind::InvalidConfig, kModule, std::string(to_string(kind)) + " endpoint requires base_url");
        }
        http::parse_base_url(*base_url);
        if (model_name.empty()) throw Error(ErrorKind::InvalidConfig, kModule, "model_name is empty");
    }
    if (!(timeout_s > 0)) throw Error(ErrorKind::InvalidConfig, kModule, "timeout must be positive");
}

std::string prompt_digest(std::string_view prompt) { return util::sha256_hex(prompt).substr(0, 16); }

ReplayClient::ReplayClient(fs::path dir, std::string default_model_name)
    : dir_(std::move(dir)), default_model_name_(std::move(default_model_name)) {}

GenerationResult ReplayClient::generate(std::string_view prompt, const ChunkConsumer& on_chunk) {
    const std::string digest = prompt_digest(prompt);
    const fs::path text_path = dir_ / (digest + ".txt");
    std::error_code ec;
    if (!fs::is_regular_file(text_path, ec)) {
        throw Error(ErrorKind::ReplayMiss, kModule, "no stored response for prompt digest " + digest + " in " +
                                                        dir_.string());
    }
    const std::string text = util::read_file(text_path);

    GenerationResult result;
    result.model_name = default_model_name_;
    std::vector<std::size_t> lengths;
    const fs::path meta_path = dir_ / (digest + ".meta.json");
    if (fs::is_regular_file(meta_path, ec)) {
        json meta;
        try {
            meta = json::parse(util::read_file(meta_path));
            if (meta.contains("model_name")) result.model_name = meta.at("model_name").get<std::string>();
            if (meta.contains("fragment_lengths")) lengths = meta.at("fragment_lengths").get<std::vector<std::size_t>>();
        } catch (const json::exception& e) {
            throw Error(ErrorKind::ProtocolError, kModule, meta_path.string() + ": " + e.what());
        }
        std::size_t total = 0;
        for (auto n : lengths) total += n;
        if (total != text.size()) {
            throw Error(ErrorKind::ProtocolError, kModule,
                        meta_path.string() + ": fragment lengths sum to " + std::to_string(total) +
                            " but the response has " + std::to_string(text.size()) + " bytes");
        }
    }
    if (lengths.empty()) lengths.push_back(text.size());
    std::size_t offset = 0;
    for (auto n : lengths) {
        emit(result, on_chunk, text.substr(offset, n));
        offset += n;
    }
    return result;
}

void store_replay(const fs::path& dir, std::string_view prompt, const GenerationResult& result) {
    const std::string digest = prompt_digest(prompt);
    util::write_file(dir / (digest + ".txt"), result.full_text);
    nlohmann::ordered_json meta;
    meta["model_name"] = result.model_name;
    std::vector<std::size_t> lengths;
    for (const auto& c : result.chunks) lengths.push_back(c.size());
    meta["fragment_lengths"] = lengths;
    util::write_file(dir / (digest + ".meta.json"), meta.dump(2) + "\n");
}

LocalRuntimeClient::LocalRuntimeClient(ModelEndpointConfig config) : config_(std::move(config)) { config_.validate(); }

GenerationResult LocalRuntimeClient::generate(std::string_view prompt, const ChunkConsumer& on_chunk) {
    GenerationResult result;
    result.model_name = config_.model_name;
    json body = {{"model", config_.model_name}, {"prompt", std::string(prompt)}, {"stream", true}};
    bool done = false;
    post_streaming({*config_.base_url, "/api/generate", {}, body.dump(), config_.timeout_s},
                   [&](const std::string& line) {
                       if (done || util::is_blank(line)) return;
                       const json j = parse_json_line(line, "NDJSON line");
                       if (!j.is_object()) throw Error(ErrorKind::ProtocolError, kModule, "NDJSON line is not an object");
                       if (j.contains("error")) {
                           throw Error(ErrorKind::ProtocolError, kModule, "endpoint error: " + j["error"].dump());
                       }
                       if (j.contains("response")) {
                           if (!j["response"].is_string()) {
                               throw Error(ErrorKind::ProtocolError, kModule, "\"response\" is not a string");
                           }
                           emit(result, on_chunk, j["response"].get<std::string>());
                       }
                       if (j.value("done", false)) done = true;
                   });
    if (!done) throw Error(ErrorKind::ProtocolError, kModule, "stream ended without a done fragment");
    return result;
}

RemoteApiClient::RemoteApiClient(ModelEndpointConfig config) : config_(std::move(config)) { config_.validate(); }

GenerationResult RemoteApiClient::generate(std::string_view prompt, const ChunkConsumer& on_chunk) {
    const std::string key_env = config_.api_key_env.value_or(std::string(kDefaultApiKeyEnv));
    const char* key = std::getenv(key_env.c_str());
    if (key == nullptr || *key == '\0') {
        throw Error(ErrorKind::AuthMissing, kModule, "environment variable " + key_env + " is not set");
    }
    GenerationResult result;
    result.model_name = config_.model_name;
    json body = {{"model", config_.model_name},
                 {"stream", true},
                 {"messages", json::array({{{"role", "user"}, {"content", std::string(prompt)}}})}};
    bool done = false;
    bool finished = false;
    httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}, {"Accept", "text/event-stream"}};
    post_streaming({*config_.base_url, "/v1/chat/completions", headers, body.dump(), config_.timeout_s},
                   [&](const std::string& line) {
                       if (done || line.rfind("data:", 0) != 0) return;
                       const std::string payload(util::trim(std::string_view(line).substr(5)));
                       if (payload == "[DONE]") {
                           done = true;
                           return;
                       }
                       const json j = parse_json_line(payload, "event payload");
                       if (j.contains("error")) {
                           throw Error(ErrorKind::ProtocolError, kModule, "endpoint error: " + j["error"].dump());
                       }
                       if (!j.contains("choices") || !j["choices"].is_array()) {
                           throw Error(ErrorKind::ProtocolError, kModule, "event without choices: " + payload);
                       }
                       for (const auto& choice : j["choices"]) {
                           if (choice.contains("delta") && choice["delta"].contains("content") &&
                               choice["delta"]["content"].is_string()) {
                               emit(result, on_chunk, choice["delta"]["content"].get<std::string>());
                           }
                           if (choice.contains("finish_reason") && !choice["finish_reason"].is_null()) finished = true;
                       }
                   });
    if (!done && !finished) throw Error(ErrorKind::ProtocolError, kModule, "event stream ended without [DONE]");
    return result;
}

RecordingClient::RecordingClient(std::unique_ptr<ModelClient> inner, fs::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {}

GenerationResult RecordingClient::generate(std::string_view prompt, const ChunkConsumer& on_chunk) {
    auto result = inner_->generate(prompt, on_chunk);
    store_replay(dir_, prompt, result);
    return result;
}

std::unique_ptr<ModelClient> make_model_client(const ModelEndpointConfig& config) {
    config.validate();
    switch (config.kind) {
    case EndpointKind::Replay: return std::make_unique<ReplayClient>(*config.replay_dir, config.model_name);
    case EndpointKind::LocalRuntime: return std::make_unique<LocalRuntimeClient>(config);
    case EndpointKind::RemoteApi: return std::make_unique<RemoteApiClient>(config);
    }
    throw Error(ErrorKind::InvalidConfig, kModule, "unknown endpoint kind");
}

GenerationResult generate(std::string_view prompt, const ModelEndpointConfig& config, const ChunkConsumer& on_chunk) {
    if (prompt.empty()) throw Error(ErrorKind::InvalidArgument, kModule, "prompt is empty");
    return make_model_client(config)->generate(prompt, on_chunk);
}

std::string extract_code_block(std::string_view response) {
    if (util::is_blank(response)) throw Error(ErrorKind::EmptyResponse, kModule, "model response is empty");
    const auto lines = util::split_lines(response);

    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (util::trim(lines[i]).substr(0, 3) != "```") continue;
        std::vector<std::string> body;
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (util::trim(lines[j]).substr(0, 3) == "```") break;
            body.push_back(lines[j]);
        }
        return util::trim_blank_lines(util::join(body, "\n"));
    }

    // No fence: longest run of code-looking lines (blank lines allowed inside).
    std::string best;
    std::size_t best_lines = 0;
    for (std::size_t i = 0; i < lines.size();) {
        if (!is_code_like(lines[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        std::size_t last_code = i;
        while (j < lines.size() && (is_code_like(lines[j]) || util::is_blank(lines[j]))) {
            if (is_code_like(lines[j])) last_code = j;
            ++j;
        }
        const std::vector<std::string> run(lines.begin() + static_cast<std::ptrdiff_t>(i),
                                           lines.begin() + static_cast<std::ptrdiff_t>(last_code + 1));
        const std::string text = util::join(run, "\n");
        if (run.size() > best_lines && text.find(';') != std::string::npos && braces_balance(text)) {
            best = text;
            best_lines = run.size();
        }
        i = j;
    }
    if (best_lines > 0) return util::trim_blank_lines(best);
    return util::trim_blank_lines(response);
}

}  // namespace astra
