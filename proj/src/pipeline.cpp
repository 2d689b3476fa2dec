#include "astra/pipeline.hpp"

#include "astra/corpus_indexer.hpp"
#include "astra/error.hpp"
#include "astra/util.hpp"

#include <json.hpp>

#include <ctime>
#include <iostream>

namespace astra {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const char* kModule = "cli_driver";

std::string utc_stamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

fs::path fresh_run_dir(const fs::path& root, const std::string& digest) {
    const std::string base = utc_stamp() + "-" + digest;
    fs::path dir = root / base;
    for (int n = 2; fs::exists(dir); ++n) dir = root / (base + "-" + std::to_string(n));
    fs::create_directories(dir);
    return dir;
}

std::string short_name(const std::string& qualified) {
    const auto pos = qualified.rfind("::");
    return pos == std::string::npos ? qualified : qualified.substr(pos + 2);
}

/// First function named in the prompt that exists in the reports, with the
/// first mentioned class that owns it.
std::optional<Focus> focus_from_intent(const Intent& intent, const std::vector<StructuralReport>& reports) {
    for (const auto& fn : intent.mentioned_functions) {
        for (const auto& cls_name : intent.mentioned_classes) {
            for (const auto& r : reports) {
                for (const auto& cls : r.classes) {
                    if (short_name(cls.name) != cls_name && cls.name != cls_name) continue;
                    for (const auto& m : cls.methods) {
                        if (m.name == fn) return Focus{cls.name, fn};
                    }
                }
                for (const auto& f : r.free_functions) {
                    if (f.name == fn && !f.qualifier.empty() && short_name(f.qualifier) == cls_name) {
                        return Focus{f.qualifier, fn};
                    }
                }
            }
        }
        return Focus{std::nullopt, fn};
    }
    return std::nullopt;
}

std::string general_instructions(const PipelineConfig& config) {
    if (!config.general_instructions_path) return default_general_instructions();
    return std::string(util::trim(util::read_file(*config.general_instructions_path)));
}

void note(std::ostream* out, const std::string& text) {
    if (out) *out << text << "\n";
}

}  // namespace

ChunkIndex open_index(const PipelineConfig& config, const Embedder& embedder) {
    ChunkIndex index = load_index(config.index_path);
    if (index.embedder_id() != embedder.id()) {
        throw Error(ErrorKind::EmbedderMismatch, kModule,
                    "index " + config.index_path.string() + " was built with " + index.embedder_id() +
                        ", configured embedder is " + embedder.id());
    }
    return index;
}

ComposedRun compose_for(std::string_view user_prompt, const std::optional<fs::path>& target_file,
                        const std::optional<Focus>& focus, const PipelineConfig& config) {
    ComposedRun run;
    if (util::is_blank(user_prompt)) throw Error(ErrorKind::BlankPrompt, "prompt_composer", "user prompt is blank");

    if (target_file) {
        run.reports.push_back(extract_structure(util::read_file(*target_file), target_file->string()));
        if (config.compile_db_path) {
            const CompileDb db = load_compile_db(*config.compile_db_path);
            for (const auto& w : db.warnings) run.warnings.push_back("compile db: " + w);
            if (db.find(*target_file) == nullptr) {
                run.warnings.push_back(target_file->string() + " is not in the compile database");
            }
            for (const auto& header : companion_headers(*target_file)) {
                run.reports.push_back(extract_structure(util::read_file(header), header.string()));
            }
        }
        for (const auto& r : run.reports) {
            for (const auto& w : r.warnings) run.warnings.push_back(r.file + ": " + w);
        }
    }

    std::vector<std::string> classes;
    std::vector<std::string> functions;
    for (const auto& r : run.reports) {
        for (const auto& c : r.classes) {
            classes.push_back(short_name(c.name));
            for (const auto& m : c.methods) functions.push_back(m.name);
        }
        for (const auto& f : r.free_functions) functions.push_back(f.name);
    }
    run.intent = classify_intent(user_prompt, classes, functions);

    run.focus = focus ? focus : focus_from_intent(run.intent, run.reports);

    const auto embedder = make_embedder(config.embedder);
    const ChunkIndex index = open_index(config, *embedder);
    run.retrieved = retrieve_top_k(index, embedder->embed(util::trim(user_prompt)), config.top_k, config.min_score);
    std::vector<std::string> rag_blocks;
    for (const auto& r : run.retrieved) rag_blocks.push_back(format_rag_block(index, r));

    std::vector<AstBlock> ast_blocks;
    try {
        ast_blocks = ast_context_blocks(run.reports, run.focus, run.intent.mentioned_classes);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::FocusNotFound) throw;
        if (focus) throw;
        run.warnings.push_back("focus not found: " + e.detail());
        run.focus.reset();
        ast_blocks = ast_context_blocks(run.reports, std::nullopt, run.intent.mentioned_classes);
    }

    auto assembled = assemble_prompt(general_instructions(config), rag_blocks, ast_blocks,
                                     std::string(util::trim(user_prompt)), config.char_budget);
    if (assembled.dropped_rag_blocks > 0 || assembled.dropped_ast_blocks > 0) {
        run.warnings.push_back("character budget: dropped " + std::to_string(assembled.dropped_rag_blocks) +
                               " retrieved example(s) and " + std::to_string(assembled.dropped_ast_blocks) +
                               " AST block(s)");
        run.retrieved.resize(run.retrieved.size() - assembled.dropped_rag_blocks);
    }
    if (assembled.over_budget) run.warnings.push_back("character budget exceeded by focused context alone");
    run.prompt = compose_prompt(assembled.bundle);
    return run;
}

RunOutcome run_pipeline(const RunOptions& options, const PipelineConfig& config) {
    RunOutcome outcome;
    const std::string user_prompt = util::read_file(options.prompt_file);
    ComposedRun composed = compose_for(user_prompt, options.target_file, options.focus, config);
    outcome.intent = composed.intent;
    outcome.retrieved = composed.retrieved;
    outcome.prompt = composed.prompt;
    outcome.warnings = composed.warnings;

    std::unique_ptr<ModelClient> client = make_model_client(config.model);
    if (options.record_dir) client = std::make_unique<RecordingClient>(std::move(client), *options.record_dir);
    std::ostream* out = options.out;
    outcome.generation = client->generate(outcome.prompt, [out](std::string_view fragment) {
        if (out) *out << fragment << std::flush;
    });
    if (out && !outcome.generation.full_text.empty() && outcome.generation.full_text.back() != '\n') *out << "\n";
    outcome.code = extract_code_block(outcome.generation.full_text);

    outcome.action = "none";
    if (outcome.intent.kind == IntentKind::Edit && options.target_file) {
        if (!composed.focus) {
            outcome.warnings.push_back("edit intent but no target function identified; no proposal made");
        } else {
            const auto& target = *options.target_file;
            const std::string text = util::read_file(target);
            std::optional<SourceRange> range;
            try {
                range = find_function_range(composed.reports.front(), composed.focus->class_name,
                                            composed.focus->function);
            } catch (const Error& e) {
                outcome.warnings.push_back(std::string("no proposal: ") + e.what());
            }
            if (range) {
                outcome.proposal =
                    make_proposal(target, text, *range, outcome.code, outcome.generation.model_name);
            }
        }
    }

    if (outcome.proposal) {
        const auto& p = *outcome.proposal;
        EditDecision decision = options.decision;
        if (decision == EditDecision::RecordOnly) {
            outcome.action = "recorded";
        } else {
            apply_to_file(p);
            outcome.action = "markers";
            if (decision == EditDecision::Interactive) {
                std::istream& in = options.in ? *options.in : std::cin;
                while (true) {
                    if (out) *out << "[a]ccept / [r]eject / [s]kip? " << std::flush;
                    std::string answer;
                    if (!std::getline(in, answer)) {
                        decision = EditDecision::Markers;
                        break;
                    }
                    const std::string a = util::to_lower_ascii(util::trim(answer));
                    if (a == "a" || a == "accept") {
                        decision = EditDecision::Accept;
                        break;
                    }
                    if (a == "r" || a == "reject") {
                        resolve_file(p.file, Resolution::Reject);
                        outcome.action = "rejected";
                        break;
                    }
                    if (a == "s" || a == "skip") {
                        outcome.action = "skipped";
                        break;
                    }
                }
            }
            if (decision == EditDecision::Accept) {
                resolve_file(p.file, Resolution::Accept);
                outcome.action = "accepted";
                for (const auto& w : verify_braces(util::read_file(p.file), accepted_range(p))) {
                    outcome.warnings.push_back(p.file.string() + ": " + w);
                }
            }
        }
    }

    outcome.run_dir = fresh_run_dir(config.run_root, prompt_digest(user_prompt));
    util::write_file(outcome.run_dir / "prompt.txt", outcome.prompt);
    util::write_file(outcome.run_dir / "response.txt", outcome.generation.full_text);
    util::write_file(outcome.run_dir / "code.txt", outcome.code + "\n");

    ordered_json retrieval = ordered_json::array();
    for (const auto& r : outcome.retrieved) {
        retrieval.push_back({{"rank", r.rank}, {"chunk_id", r.chunk_id}, {"score", r.score}});
    }
    util::write_file(outcome.run_dir / "retrieval.json", retrieval.dump(2) + "\n");

    if (outcome.proposal) {
        const auto& p = *outcome.proposal;
        ordered_json j = {{"file", p.file.string()},
                          {"start_line", p.range.start_line},
                          {"end_line", p.range.end_line},
                          {"marker_label", p.marker_label},
                          {"original_text", p.original_text},
                          {"replacement_text", p.replacement_text}};
        util::write_file(outcome.run_dir / "proposal.json", j.dump(2) + "\n");
    }

    ordered_json result = {{"intent", std::string(to_string(outcome.intent.kind))},
                           {"mentioned_classes", outcome.intent.mentioned_classes},
                           {"mentioned_functions", outcome.intent.mentioned_functions},
                           {"model_name", outcome.generation.model_name},
                           {"embedder_id", make_embedder(config.embedder)->id()},
                           {"action", outcome.action},
                           {"warnings", outcome.warnings}};
    if (composed.focus) {
        result["focus"] = {{"class", composed.focus->class_name ? ordered_json(*composed.focus->class_name)
                                                                : ordered_json(nullptr)},
                           {"function", composed.focus->function}};
    }
    util::write_file(outcome.run_dir / "outcome.json", result.dump(2) + "\n");

    for (const auto& w : outcome.warnings) note(out, "warning: " + w);
    note(out, "run artifacts: " + outcome.run_dir.string());
    return outcome;
}

}  // namespace astra
