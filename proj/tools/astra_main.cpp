#include "astra/config.hpp"
#include "astra/corpus_indexer.hpp"
#include "astra/edit.hpp"
#include "astra/error.hpp"
#include "astra/evaluator.hpp"
#include "astra/pipeline.hpp"
#include "astra/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <iostream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitPipeline = 3;

ordered_json range_json(const astra::SourceRange& r) { return {{"start_line", r.start_line}, {"end_line", r.end_line}}; }

ordered_json method_json(const astra::MethodInfo& m) {
    ordered_json j = {{"name", m.name},
                      {"signature", m.signature_text},
                      {"access", std::string(astra::to_string(m.access))},
                      {"is_definition", m.is_definition},
                      {"range", range_json(m.range)}};
    if (!m.qualifier.empty()) j["qualifier"] = m.qualifier;
    if (!m.template_header.empty()) j["template"] = m.template_header;
    return j;
}

ordered_json report_json(const astra::StructuralReport& r) {
    ordered_json classes = ordered_json::array();
    for (const auto& c : r.classes) {
        ordered_json fields = ordered_json::array();
        for (const auto& f : c.fields) {
            fields.push_back({{"name", f.name}, {"type", f.type_text}, {"access", std::string(astra::to_string(f.access))}});
        }
        ordered_json methods = ordered_json::array();
        for (const auto& m : c.methods) methods.push_back(method_json(m));
        classes.push_back({{"name", c.name},
                           {"kind", c.kind == astra::ClassKind::Struct ? "struct" : "class"},
                           {"range", range_json(c.range)},
                           {"fields", fields},
                           {"methods", methods}});
    }
    ordered_json free = ordered_json::array();
    for (const auto& f : r.free_functions) free.push_back(method_json(f));
    return {{"file", r.file}, {"classes", classes}, {"free_functions", free}, {"warnings", r.warnings}};
}

std::optional<astra::Focus> focus_of(const std::string& cls, const std::string& fn) {
    if (fn.empty()) return std::nullopt;
    return astra::Focus{cls.empty() ? std::nullopt : std::optional<std::string>(cls), fn};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"astra: retrieval- and structure-augmented code generation for C++ projects"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::optional<fs::path> config_file;
    bool show_config = false;
    astra::ConfigOverrides ov;
    app.add_option("--config", config_file, "TOML configuration file (default .astra/config.toml)");
    app.add_flag("--show-config", show_config, "Print the effective configuration and exit");
    app.add_option("--index", ov.index_path, "Chunk index file");
    app.add_option("--compile-db", ov.compile_db_path, "compile_commands.json");
    app.add_option("--top-k", ov.top_k, "Retrieved examples per prompt");
    app.add_option("--min-score", ov.min_score, "Drop retrieved examples scoring below this");
    app.add_option("--char-budget", ov.char_budget, "Prompt size limit in characters (0 = unlimited)");
    app.add_option("--instructions", ov.general_instructions_path, "General instructions file");
    app.add_option("--run-root", ov.run_root, "Directory for run artifacts");
    app.add_option("--embedder", ov.embedder_kind, "deterministic | remote");
    app.add_option("--dimension", ov.embedder_dimension, "Embedding dimension");
    app.add_option("--embed-endpoint", ov.embed_endpoint, "Remote embedding endpoint");
    app.add_option("--endpoint-kind", ov.model_kind, "local | remote | replay");
    app.add_option("--endpoint", ov.endpoint, "Model endpoint base URL");
    app.add_option("--model", ov.model_name, "Model name");
    app.add_option("--replay-dir", ov.replay_dir, "Stored responses for the replay endpoint");
    app.add_option("--timeout", ov.timeout_s, "Generation timeout in seconds");

    auto* index_cmd = app.add_subcommand("index", "Build a chunk index from an annotated corpus");
    fs::path corpus_dir;
    fs::path index_out;
    bool keep_header = false;
    index_cmd->add_option("--corpus", corpus_dir, "Annotated corpus directory")->required();
    index_cmd->add_option("--out", index_out, "Index file to write")->required();
    index_cmd->add_flag("--keep-header", keep_header, "Keep the metadata comment in chunk text");

    auto* query_cmd = app.add_subcommand("query", "Retrieve the chunks closest to a query");
    std::string query_text;
    bool query_json = false;
    query_cmd->add_option("--text", query_text, "Query text")->required();
    query_cmd->add_flag("--json", query_json, "Print results as JSON");

    auto* ast_cmd = app.add_subcommand("ast", "Show the structure of a C++ file");
    fs::path ast_file;
    std::string ast_class, ast_function;
    bool ast_json = false;
    ast_cmd->add_option("--file", ast_file, "C++ source")->required();
    ast_cmd->add_option("--class", ast_class, "Focus class");
    ast_cmd->add_option("--function", ast_function, "Focus function");
    ast_cmd->add_flag("--json", ast_json, "Print the report as JSON");

    auto* prompt_cmd = app.add_subcommand("prompt", "Print the composed prompt");
    auto* generate_cmd = app.add_subcommand("generate", "Compose the prompt and stream a generation");
    auto* run_cmd = app.add_subcommand("run", "Full pipeline: compose, generate, propose and apply an edit");
    fs::path prompt_file;
    std::optional<fs::path> target_file;
    std::string focus_class, focus_function;
    std::optional<fs::path> record_dir;
    for (auto* cmd : {prompt_cmd, generate_cmd, run_cmd}) {
        cmd->add_option("--prompt-file", prompt_file, "User prompt file")->required();
        cmd->add_option("--file", target_file, "Target C++ file");
        cmd->add_option("--class", focus_class, "Class of the target function");
        cmd->add_option("--function", focus_function, "Target function");
    }
    for (auto* cmd : {generate_cmd, run_cmd}) {
        cmd->add_option("--record", record_dir, "Store responses here for later replay");
    }
    bool yes = false, no = false;
    auto* yes_opt = run_cmd->add_flag("--yes", yes, "Apply and accept the edit");
    run_cmd->add_flag("--no", no, "Record the proposal without touching the target")->excludes(yes_opt);

    auto* apply_cmd = app.add_subcommand("apply", "Insert generated code as a conflict block");
    fs::path apply_file, apply_from;
    std::string apply_class, apply_function, apply_label;
    apply_cmd->add_option("--file", apply_file, "Target C++ file")->required();
    apply_cmd->add_option("--class", apply_class, "Class of the target function");
    apply_cmd->add_option("--function", apply_function, "Target function")->required();
    apply_cmd->add_option("--from", apply_from, "File holding the generated code")->required();
    apply_cmd->add_option("--label", apply_label, "Marker label (default: model name)");

    auto* resolve_cmd = app.add_subcommand("resolve", "Accept or reject a conflict block");
    fs::path resolve_file;
    bool accept = false, reject = false;
    resolve_cmd->add_option("--file", resolve_file, "File with markers")->required();
    auto* accept_opt = resolve_cmd->add_flag("--accept", accept, "Keep the generated side");
    auto* reject_opt = resolve_cmd->add_flag("--reject", reject, "Keep the original side");
    accept_opt->excludes(reject_opt);

    auto* eval_cmd = app.add_subcommand("eval", "Score generations against references");
    fs::path manifest, generations_dir;
    std::optional<fs::path> csv_out;
    std::vector<std::string> eval_models;
    eval_cmd->add_option("--manifest", manifest, "Task manifest (JSON)")->required();
    eval_cmd->add_option("--generations", generations_dir, "<task>/<model>/<mode>.txt tree")->required();
    eval_cmd->add_option("--csv", csv_out, "Also write full-precision CSV here");
    eval_cmd->add_option("--models", eval_models, "Column order")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    if (resolve_cmd->parsed() && !accept && !reject) {
        std::cerr << "resolve: one of --accept or --reject is required\n";
        return kExitUsage;
    }

    try {
        const astra::PipelineConfig config = astra::load_config(config_file, ov);
        if (show_config) {
            std::cout << astra::render_config(config);
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return kExitUsage;
        }

        if (index_cmd->parsed()) {
            const auto embedder = astra::make_embedder(config.embedder);
            const auto scan = astra::scan_corpus(corpus_dir, astra::CorpusOptions{keep_header});
            for (const auto& w : scan.warnings) std::cerr << "warning: " << w << "\n";
            const auto index = astra::build_index(scan.snippets, *embedder);
            astra::save_index(index, index_out);
            std::cout << "indexed " << index.size() << " chunks from " << corpus_dir.string() << " into "
                      << index_out.string() << " (" << index.embedder_id() << ")\n";
        } else if (query_cmd->parsed()) {
            const auto embedder = astra::make_embedder(config.embedder);
            const auto index = astra::open_index(config, *embedder);
            const auto results =
                astra::retrieve_top_k(index, embedder->embed(query_text), config.top_k, config.min_score);
            if (query_json) {
                ordered_json out = ordered_json::array();
                for (const auto& r : results) out.push_back({{"rank", r.rank}, {"chunk_id", r.chunk_id}, {"score", r.score}});
                std::cout << out.dump(2) << "\n";
            } else {
                for (const auto& r : results) {
                    std::cout << r.rank << "  " << astra::util::fixed(r.score, 4) << "  " << r.chunk_id << "  "
                              << index.find(r.chunk_id)->metadata.task_type << "\n";
                }
            }
        } else if (ast_cmd->parsed()) {
            std::vector<astra::StructuralReport> reports;
            reports.push_back(astra::extract_structure(astra::util::read_file(ast_file), ast_file.string()));
            if (config.compile_db_path) {
                const auto db = astra::load_compile_db(*config.compile_db_path);
                for (const auto& w : db.warnings) std::cerr << "warning: compile db: " << w << "\n";
                for (const auto& h : astra::companion_headers(ast_file)) {
                    reports.push_back(astra::extract_structure(astra::util::read_file(h), h.string()));
                }
            }
            if (ast_json) {
                ordered_json out = ordered_json::array();
                for (const auto& r : reports) out.push_back(report_json(r));
                std::cout << (reports.size() == 1 ? out[0] : out).dump(2) << "\n";
            } else {
                for (const auto& r : reports) {
                    for (const auto& w : r.warnings) std::cerr << "warning: " << r.file << ": " << w << "\n";
                }
                const std::string text = astra::format_ast_context(reports, focus_of(ast_class, ast_function));
                if (!text.empty()) std::cout << text << "\n";
            }
        } else if (prompt_cmd->parsed() || generate_cmd->parsed()) {
            const auto composed = astra::compose_for(astra::util::read_file(prompt_file), target_file,
                                                     focus_of(focus_class, focus_function), config);
            for (const auto& w : composed.warnings) std::cerr << "warning: " << w << "\n";
            if (prompt_cmd->parsed()) {
                std::cout << composed.prompt;
            } else {
                auto client = astra::make_model_client(config.model);
                if (record_dir) client = std::make_unique<astra::RecordingClient>(std::move(client), *record_dir);
                const auto result = client->generate(composed.prompt, [](std::string_view fragment) {
                    std::cout << fragment << std::flush;
                });
                if (!result.full_text.empty() && result.full_text.back() != '\n') std::cout << "\n";
            }
        } else if (run_cmd->parsed()) {
            astra::RunOptions opts;
            opts.prompt_file = prompt_file;
            opts.target_file = target_file;
            opts.focus = focus_of(focus_class, focus_function);
            opts.record_dir = record_dir;
            opts.out = &std::cout;
            if (yes) opts.decision = astra::EditDecision::Accept;
            else if (no) opts.decision = astra::EditDecision::RecordOnly;
            else if (isatty(STDIN_FILENO)) opts.decision = astra::EditDecision::Interactive;
            else opts.decision = astra::EditDecision::Markers;
            const auto outcome = astra::run_pipeline(opts, config);
            if (outcome.proposal) {
                std::cout << "edit " << outcome.action << ": " << outcome.proposal->file.string() << " lines "
                          << outcome.proposal->range.start_line << "-" << outcome.proposal->range.end_line << "\n";
            }
        } else if (apply_cmd->parsed()) {
            const std::string text = astra::util::read_file(apply_file);
            const auto report = astra::extract_structure(text, apply_file.string());
            const auto range = astra::find_function_range(
                report, apply_class.empty() ? std::nullopt : std::optional<std::string>(apply_class), apply_function);
            const std::string code = astra::extract_code_block(astra::util::read_file(apply_from));
            const auto proposal = astra::make_proposal(apply_file, text, range, code,
                                                       apply_label.empty() ? config.model.model_name : apply_label);
            astra::apply_to_file(proposal);
            std::cout << "markers inserted for lines " << range.start_line << "-" << range.end_line << " of "
                      << apply_file.string() << "; run `astra resolve --file " << apply_file.string()
                      << " --accept|--reject`\n";
        } else if (resolve_cmd->parsed()) {
            astra::resolve_file(resolve_file, accept ? astra::Resolution::Accept : astra::Resolution::Reject);
            std::cout << (accept ? "accepted" : "rejected") << ": " << resolve_file.string() << "\n";
        } else if (eval_cmd->parsed()) {
            const auto tasks = astra::load_manifest(manifest);
            const auto generations = astra::scan_generations(generations_dir, tasks);
            const auto embedder = astra::make_embedder(config.embedder);
            const auto records = astra::run_benchmark(tasks, generations, *embedder, eval_models);
            std::map<std::string, std::string> labels;
            std::vector<std::string> order;
            for (const auto& t : tasks) {
                order.push_back(t.id);
                if (!t.description.empty()) labels[t.id] = t.description;
            }
            std::vector<std::string> models = eval_models.empty() ? astra::models_in(generations) : eval_models;
            std::cout << "embedder: " << embedder->id() << "\n\n"
                      << astra::render_table(records, models, labels, order);
            if (csv_out) astra::util::write_file(*csv_out, astra::render_csv(records));
        }
    } catch (const astra::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return 0;
}
