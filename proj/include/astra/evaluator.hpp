#pragma once

#include "astra/embedding.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace astra {

enum class EvalMode { Baseline, Augmented };
std::string_view to_string(EvalMode mode);
std::optional<EvalMode> parse_eval_mode(std::string_view text);

struct BenchmarkTask {
    std::string id;
    std::string description;
    std::filesystem::path prompt_file;
    std::filesystem::path reference_file;
    std::vector<std::string> preserve_identifiers;
};

/// JSON array of task objects; relative paths resolve against the manifest's
/// directory. Throws InvalidTask, Unreadable.
std::vector<BenchmarkTask> load_manifest(const std::filesystem::path& manifest);

/// Throws InvalidTask unless the reference holds exactly one function definition.
void validate_task(const BenchmarkTask& task);

struct SimilarityRecord {
    std::string task_id;
    std::string model_name;
    EvalMode mode = EvalMode::Baseline;
    double score = 0.0;
    std::string embedder_id;

    friend bool operator==(const SimilarityRecord&, const SimilarityRecord&) = default;
};

/// cosine(embed(normalize(generated)), embed(normalize(reference))).
/// Throws NotAFunction naming the offending side.
double score_pair(std::string_view generated, std::string_view reference, const std::vector<std::string>& preserve,
                  const Embedder& embedder);

struct GenerationKey {
    std::string task_id;
    std::string model_name;
    EvalMode mode = EvalMode::Baseline;

    friend auto operator<=>(const GenerationKey& a, const GenerationKey& b) {
        return std::tie(a.task_id, a.model_name, a.mode) <=> std::tie(b.task_id, b.model_name, b.mode);
    }
    friend bool operator==(const GenerationKey&, const GenerationKey&) = default;
};

using GenerationMap = std::map<GenerationKey, std::filesystem::path>;

/// `<dir>/<task_id>/<model>/<baseline|augmented>.txt` for the given tasks.
GenerationMap scan_generations(const std::filesystem::path& dir, const std::vector<BenchmarkTask>& tasks);

/// Models in lexicographic order of their names in `generations`.
std::vector<std::string> models_in(const GenerationMap& generations);

/// One record per generation, ordered by task, then `models` (lexicographic
/// when empty), then baseline before augmented. Responses pass through
/// extract_code_block. Throws MissingGeneration listing every absent file.
std::vector<SimilarityRecord> run_benchmark(const std::vector<BenchmarkTask>& tasks, const GenerationMap& generations,
                                            const Embedder& embedder, const std::vector<std::string>& models = {});

/// One aligned table per mode, titled "mode: <mode>": one row per task
/// (labelled via `task_labels` when present), one column per model, scores
/// to 2 decimals, "—" for missing cells.
std::string render_table(const std::vector<SimilarityRecord>& records, const std::vector<std::string>& models,
                         const std::map<std::string, std::string>& task_labels = {},
                         const std::vector<std::string>& task_order = {});

/// task_id,model,mode,score,embedder_id with full-precision scores.
std::string render_csv(const std::vector<SimilarityRecord>& records);

}  // namespace astra
