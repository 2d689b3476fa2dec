#include "astra/config.hpp"

#include "astra/error.hpp"
#include "astra/util.hpp"

#include <toml.hpp>
#include <json.hpp>

#include <cstdlib>
#include <set>

namespace astra {

namespace fs = std::filesystem;

namespace {

const char* kModule = "config";

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
    throw Error(ErrorKind::InvalidValue, kModule, key + ": " + why);
}

std::string get_string(const toml::node& node, const std::string& key) {
    if (auto v = node.value<std::string>()) return *v;
    invalid(key, "expected a string");
}

std::int64_t get_int(const toml::node& node, const std::string& key) {
    if (!node.is_integer()) invalid(key, "expected an integer");
    return *node.value<std::int64_t>();
}

double get_number(const toml::node& node, const std::string& key) {
    if (!node.is_number()) invalid(key, "expected a number");
    return *node.value<double>();
}

std::size_t positive(std::int64_t v, const std::string& key) {
    if (v < 1) invalid(key, "must be at least 1, got " + std::to_string(v));
    return static_cast<std::size_t>(v);
}

void apply_embedder_table(const toml::table& t, EmbedderConfig& e) {
    for (const auto& [k, node] : t) {
        const std::string key = "embedder." + std::string(k.str());
        if (k == "kind") {
            auto kind = parse_embedder_kind(get_string(node, key));
            if (!kind) invalid(key, "expected \"deterministic\" or \"remote\"");
            e.kind = *kind;
        } else if (k == "dimension") {
            e.dimension = positive(get_int(node, key), key);
        } else if (k == "endpoint") {
            e.endpoint = get_string(node, key);
        } else if (k == "model_name") {
            e.model_name = get_string(node, key);
        } else {
            invalid(key, "unknown key");
        }
    }
}

void apply_model_table(const toml::table& t, ModelEndpointConfig& m) {
    for (const auto& [k, node] : t) {
        const std::string key = "model." + std::string(k.str());
        if (k == "kind") {
            try {
                m.kind = parse_endpoint_kind(get_string(node, key));
            } catch (const Error&) {
                invalid(key, "expected local_runtime, remote_api or replay");
            }
        } else if (k == "base_url") {
            m.base_url = get_string(node, key);
        } else if (k == "model_name") {
            m.model_name = get_string(node, key);
        } else if (k == "api_key_env") {
            m.api_key_env = get_string(node, key);
        } else if (k == "replay_dir") {
            m.replay_dir = fs::path(get_string(node, key));
        } else if (k == "timeout_s") {
            m.timeout_s = get_number(node, key);
            if (!(m.timeout_s > 0)) invalid(key, "must be positive");
        } else {
            invalid(key, "unknown key");
        }
    }
}

void apply_file(const toml::table& root, PipelineConfig& c) {
    for (const auto& [k, node] : root) {
        const std::string key(k.str());
        if (key == "index_path") {
            c.index_path = get_string(node, key);
        } else if (key == "compile_db_path") {
            c.compile_db_path = fs::path(get_string(node, key));
        } else if (key == "top_k") {
            c.top_k = positive(get_int(node, key), key);
        } else if (key == "min_score") {
            c.min_score = get_number(node, key);
        } else if (key == "char_budget") {
            const auto v = get_int(node, key);
            if (v < 0) invalid(key, "must not be negative");
            c.char_budget = static_cast<std::size_t>(v);
        } else if (key == "general_instructions_path") {
            c.general_instructions_path = fs::path(get_string(node, key));
        } else if (key == "run_root") {
            c.run_root = get_string(node, key);
        } else if (key == "embedder") {
            if (!node.is_table()) invalid(key, "expected a table");
            apply_embedder_table(*node.as_table(), c.embedder);
        } else if (key == "model") {
            if (!node.is_table()) invalid(key, "expected a table");
            apply_model_table(*node.as_table(), c.model);
        } else {
            invalid(key, "unknown key");
        }
    }
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

PipelineConfig default_config() {
    PipelineConfig c;
    c.model.kind = EndpointKind::LocalRuntime;
    c.model.base_url = std::string(kDefaultModelUrl);
    c.model.model_name = std::string(kDefaultModelName);
    return c;
}

Environment process_environment() {
    Environment env;
    for (const char* name : {"ASTRA_MODEL_ENDPOINT", "ASTRA_EMBED_ENDPOINT"}) {
        if (const char* v = std::getenv(name); v != nullptr && *v != '\0') env[name] = v;
    }
    return env;
}

PipelineConfig load_config(const std::optional<fs::path>& file, const ConfigOverrides& flags, const Environment& env) {
    PipelineConfig c = default_config();

    std::optional<fs::path> path = file;
    std::error_code ec;
    if (!path && fs::is_regular_file(kDefaultConfigPath, ec)) path = fs::path(kDefaultConfigPath);
    if (path) {
        std::string text;
        try {
            text = util::read_file(*path);
        } catch (const Error& e) {
            throw Error(ErrorKind::UnreadableConfig, kModule, e.detail());
        }
        toml::table root;
        try {
            root = toml::parse(text, path->string());
        } catch (const toml::parse_error& e) {
            throw Error(ErrorKind::UnreadableConfig, kModule,
                        path->string() + ":" + std::to_string(e.source().begin.line) + ": " +
                            std::string(e.description()));
        }
        apply_file(root, c);
    }

    if (auto it = env.find("ASTRA_MODEL_ENDPOINT"); it != env.end()) c.model.base_url = it->second;
    if (auto it = env.find("ASTRA_EMBED_ENDPOINT"); it != env.end()) c.embedder.endpoint = it->second;

    if (flags.index_path) c.index_path = *flags.index_path;
    if (flags.compile_db_path) c.compile_db_path = *flags.compile_db_path;
    if (flags.top_k) {
        if (*flags.top_k < 1) invalid("top_k", "must be at least 1, got 0");
        c.top_k = *flags.top_k;
    }
    if (flags.min_score) c.min_score = *flags.min_score;
    if (flags.char_budget) c.char_budget = *flags.char_budget;
    if (flags.general_instructions_path) c.general_instructions_path = *flags.general_instructions_path;
    if (flags.run_root) c.run_root = *flags.run_root;
    if (flags.embedder_kind) {
        auto kind = parse_embedder_kind(*flags.embedder_kind);
        if (!kind) invalid("embedder.kind", "expected \"deterministic\" or \"remote\"");
        c.embedder.kind = *kind;
    }
    if (flags.embedder_dimension) {
        if (*flags.embedder_dimension < 1) invalid("embedder.dimension", "must be at least 1");
        c.embedder.dimension = *flags.embedder_dimension;
    }
    if (flags.embed_endpoint) c.embedder.endpoint = *flags.embed_endpoint;
    if (flags.model_kind) {
        try {
            c.model.kind = parse_endpoint_kind(*flags.model_kind);
        } catch (const Error&) {
            invalid("model.kind", "expected local_runtime, remote_api or replay");
        }
    }
    if (flags.endpoint) c.model.base_url = *flags.endpoint;
    if (flags.model_name) c.model.model_name = *flags.model_name;
    if (flags.replay_dir) c.model.replay_dir = *flags.replay_dir;
    if (flags.timeout_s) {
        if (!(*flags.timeout_s > 0)) invalid("model.timeout_s", "must be positive");
        c.model.timeout_s = *flags.timeout_s;
    }
    return c;
}

std::string render_config(const PipelineConfig& c) {
    std::string out;
    const auto line = [&](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };
    line("index_path", quoted(c.index_path.string()));
    if (c.compile_db_path) line("compile_db_path", quoted(c.compile_db_path->string()));
    line("top_k", std::to_string(c.top_k));
    if (c.min_score) line("min_score", util::fixed(*c.min_score, 6));
    line("char_budget", std::to_string(c.char_budget));
    if (c.general_instructions_path) line("general_instructions_path", quoted(c.general_instructions_path->string()));
    line("run_root", quoted(c.run_root.string()));
    out += "\n[embedder]\n";
    line("kind", quoted(std::string(to_string(c.embedder.kind))));
    line("dimension", std::to_string(c.embedder.dimension));
    if (c.embedder.endpoint) line("endpoint", quoted(*c.embedder.endpoint));
    if (c.embedder.model_name) line("model_name", quoted(*c.embedder.model_name));
    out += "\n[model]\n";
    line("kind", quoted(std::string(to_string(c.model.kind))));
    if (c.model.base_url) line("base_url", quoted(*c.model.base_url));
    line("model_name", quoted(c.model.model_name));
    line("api_key_env", quoted(c.model.api_key_env.value_or(std::string(kDefaultApiKeyEnv))));
    if (c.model.replay_dir) line("replay_dir", quoted(c.model.replay_dir->string()));
    line("timeout_s", util::fixed(c.model.timeout_s, 1));
    return out;
}

}  // namespace astra
