#include "astra/evaluator.hpp"

#include "astra/error.hpp"
#include "astra/model_client.hpp"
#include "astra/structure.hpp"
#include "astra/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <regex>
#include <set>

namespace astra {

namespace fs = std::filesystem;

namespace {

const char* kModule = "evaluator";
constexpr std::string_view kMissingCell = "—";

std::string pad(const std::string& s, std::size_t width, bool right) {
    const std::size_t w = util::display_width(s);
    if (w >= width) return s;
    const std::string fill(width - w, ' ');
    return right ? fill + s : s + fill;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string_view to_string(EvalMode mode) { return mode == EvalMode::Baseline ? "baseline" : "augmented"; }

std::optional<EvalMode> parse_eval_mode(std::string_view text) {
    if (text == "baseline") return EvalMode::Baseline;
    if (text == "augmented") return EvalMode::Augmented;
    return std::nullopt;
}

std::vector<BenchmarkTask> load_manifest(const fs::path& manifest) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(util::read_file(manifest));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidTask, kModule, manifest.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw Error(ErrorKind::InvalidTask, kModule, manifest.string() + ": expected a JSON array");
    static const std::regex slug("^[A-Za-z0-9][A-Za-z0-9_.-]*$");
    const fs::path base = manifest.parent_path();
    std::vector<BenchmarkTask> tasks;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& t = doc[i];
        const std::string where = manifest.string() + " task " + std::to_string(i);
        try {
            BenchmarkTask task;
            task.id = t.at("id").get<std::string>();
            task.description = t.value("description", std::string{});
            task.prompt_file = t.value("prompt_file", std::string{});
            task.reference_file = t.at("reference_file").get<std::string>();
            task.preserve_identifiers = t.value("preserve_identifiers", std::vector<std::string>{});
            if (!std::regex_match(task.id, slug)) throw Error(ErrorKind::InvalidTask, kModule, where + ": bad id");
            if (!ids.insert(task.id).second) {
                throw Error(ErrorKind::InvalidTask, kModule, where + ": duplicate id " + task.id);
            }
            if (!task.prompt_file.empty() && task.prompt_file.is_relative()) task.prompt_file = base / task.prompt_file;
            if (task.reference_file.is_relative()) task.reference_file = base / task.reference_file;
            tasks.push_back(std::move(task));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::InvalidTask, kModule, where + ": " + e.what());
        }
    }
    return tasks;
}

void validate_task(const BenchmarkTask& task) {
    const std::string text = util::read_file(task.reference_file);
    const auto report = extract_structure(text, task.reference_file.string());
    std::size_t defs = 0;
    for (const auto& f : report.free_functions) defs += f.is_definition ? 1 : 0;
    for (const auto& c : report.classes) {
        for (const auto& m : c.methods) defs += m.is_definition ? 1 : 0;
    }
    if (defs != 1) {
        throw Error(ErrorKind::InvalidTask, kModule,
                    task.id + ": reference " + task.reference_file.string() + " has " + std::to_string(defs) +
                        " function definitions, expected exactly one");
    }
}

double score_pair(std::string_view generated, std::string_view reference, const std::vector<std::string>& preserve,
                  const Embedder& embedder) {
    const auto normalize = [&](std::string_view text, const char* side) {
        try {
            return normalize_identifiers(text, preserve);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotAFunction) throw;
            throw Error(ErrorKind::NotAFunction, kModule, std::string(side) + ": " + e.detail());
        }
    };
    const std::string g = normalize(generated, "generated code");
    const std::string r = normalize(reference, "reference code");
    return cosine_similarity(embedder.embed(g), embedder.embed(r));
}

GenerationMap scan_generations(const fs::path& dir, const std::vector<BenchmarkTask>& tasks) {
    GenerationMap out;
    std::error_code ec;
    for (const auto& task : tasks) {
        const fs::path task_dir = dir / task.id;
        if (!fs::is_directory(task_dir, ec)) continue;
        for (const auto& model : fs::directory_iterator(task_dir)) {
            if (!model.is_directory()) continue;
            for (EvalMode mode : {EvalMode::Baseline, EvalMode::Augmented}) {
                const fs::path file = model.path() / (std::string(to_string(mode)) + ".txt");
                if (fs::is_regular_file(file, ec)) out[{task.id, model.path().filename().string(), mode}] = file;
            }
        }
    }
    return out;
}

std::vector<std::string> models_in(const GenerationMap& generations) {
    std::set<std::string> names;
    for (const auto& [key, path] : generations) names.insert(key.model_name);
    return {names.begin(), names.end()};
}

std::vector<SimilarityRecord> run_benchmark(const std::vector<BenchmarkTask>& tasks, const GenerationMap& generations,
                                            const Embedder& embedder, const std::vector<std::string>& models) {
    std::vector<std::string> missing;
    std::error_code ec;
    for (const auto& [key, path] : generations) {
        if (!fs::is_regular_file(path, ec)) {
            missing.push_back(key.task_id + "/" + key.model_name + "/" + std::string(to_string(key.mode)) + " (" +
                              path.string() + ")");
        }
    }
    if (!missing.empty()) throw Error(ErrorKind::MissingGeneration, kModule, util::join(missing, ", "));

    std::vector<std::string> order = models.empty() ? models_in(generations) : models;
    for (const auto& m : models_in(generations)) {
        if (std::find(order.begin(), order.end(), m) == order.end()) order.push_back(m);
    }

    std::vector<SimilarityRecord> records;
    for (const auto& task : tasks) {
        bool any = false;
        for (const auto& [key, path] : generations) any = any || key.task_id == task.id;
        if (!any) continue;
        validate_task(task);
        const std::string reference = util::read_file(task.reference_file);
        for (const auto& model : order) {
            for (EvalMode mode : {EvalMode::Baseline, EvalMode::Augmented}) {
                auto it = generations.find({task.id, model, mode});
                if (it == generations.end()) continue;
                const std::string code = extract_code_block(util::read_file(it->second));
                records.push_back({task.id, model, mode,
                                   score_pair(code, reference, task.preserve_identifiers, embedder), embedder.id()});
            }
        }
    }
    return records;
}

std::string render_table(const std::vector<SimilarityRecord>& records, const std::vector<std::string>& models,
                         const std::map<std::string, std::string>& task_labels,
                         const std::vector<std::string>& task_order) {
    std::vector<std::string> cols = models;
    if (cols.empty()) {
        std::set<std::string> names;
        for (const auto& r : records) names.insert(r.model_name);
        cols.assign(names.begin(), names.end());
    }
    std::vector<std::string> tasks = task_order;
    for (const auto& r : records) {
        if (std::find(tasks.begin(), tasks.end(), r.task_id) == tasks.end()) tasks.push_back(r.task_id);
    }

    std::vector<std::string> blocks;
    for (EvalMode mode : {EvalMode::Baseline, EvalMode::Augmented}) {
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"task"});
        rows[0].insert(rows[0].end(), cols.begin(), cols.end());
        for (const auto& task : tasks) {
            auto label = task_labels.find(task);
            std::vector<std::string> row = {label == task_labels.end() ? task : label->second};
            for (const auto& model : cols) {
                auto rec = std::find_if(records.begin(), records.end(), [&](const SimilarityRecord& r) {
                    return r.task_id == task && r.model_name == model && r.mode == mode;
                });
                row.push_back(rec == records.end() ? std::string(kMissingCell) : util::fixed(rec->score, 2));
            }
            rows.push_back(std::move(row));
        }
        std::vector<std::size_t> width(cols.size() + 1, 0);
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], util::display_width(row[c]));
        }
        std::string block = "mode: " + std::string(to_string(mode));
        for (const auto& row : rows) {
            std::string line;
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c > 0) line += "  ";
                line += pad(row[c], width[c], c > 0);
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            block += "\n" + line;
        }
        blocks.push_back(std::move(block));
    }
    return util::join(blocks, "\n\n") + "\n";
}

std::string render_csv(const std::vector<SimilarityRecord>& records) {
    std::string out = "task_id,model,mode,score,embedder_id\n";
    for (const auto& r : records) {
        out += csv_field(r.task_id) + "," + csv_field(r.model_name) + "," + std::string(to_string(r.mode)) + "," +
               full_precision(r.score) + "," + csv_field(r.embedder_id) + "\n";
    }
    return out;
}

}  // namespace astra
