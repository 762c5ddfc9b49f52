// clicklab — batch clickstream analytics: parse daily dumps, rebuild
// sessions and video views, rank predictive features, train and evaluate
// classifiers for early-exit prediction, and generate synthetic data.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clicklab/errors.hpp"
#include "clicklab/eval.hpp"
#include "clicklab/feature_select.hpp"
#include "clicklab/ingest.hpp"
#include "clicklab/learners/train.hpp"
#include "clicklab/parallel.hpp"
#include "clicklab/rng.hpp"
#include "clicklab/run_manifest.hpp"
#include "clicklab/sessionize.hpp"
#include "clicklab/synth.hpp"
#include "clicklab/tsv.hpp"
#include "clicklab/video_views.hpp"

namespace fs = std::filesystem;
using namespace clicklab;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    double timeout_minutes = 30.0;
    std::size_t folds = 10;
    std::string learners = "all";
    std::string task = "both";
    double top_fraction = 0.10;
    std::string hyper;  // JSON object keyed by learner name

    nlohmann::json hyper_for(LearnerKind kind) const {
        if (hyper.empty()) return nlohmann::json::object();
        nlohmann::json all = nlohmann::json::parse(hyper);
        std::string key(to_string(kind));
        if (all.contains(key)) return all.at(key);
        return nlohmann::json::object();
    }
};

std::int64_t timeout_seconds(const GlobalOptions& options) {
    return static_cast<std::int64_t>(options.timeout_minutes * 60.0);
}

std::vector<LearnerKind> parse_learners(const std::string& spec) {
    if (spec == "all") return all_learner_kinds();
    std::vector<LearnerKind> kinds;
    std::string token;
    std::stringstream stream(spec);
    while (std::getline(stream, token, ',')) {
        auto kind = learner_kind_from(token);
        if (!kind) throw InvalidConfigError("unknown learner: " + token);
        kinds.push_back(*kind);
    }
    if (kinds.empty()) throw InvalidConfigError("no learners selected");
    return kinds;
}

std::vector<EvalTask> parse_tasks(const std::string& spec) {
    if (spec == "multi") return {EvalTask::multiclass5};
    if (spec == "binary") return {EvalTask::binary_early};
    if (spec == "both") return {EvalTask::multiclass5, EvalTask::binary_early};
    throw InvalidConfigError("task must be multi, binary, or both");
}

std::vector<ClickEvent> load_archive(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw EmptyInputError("archive is empty: " + path);
    SchemaMap schema = validate_header(lines[0]);
    lines.erase(lines.begin());
    ParseResult parsed = parse_dump(lines, schema);
    for (const auto& reject : parsed.rejects) {
        std::cerr << path << ":" << reject.line_number << ": " << reject.reason << "\n";
    }
    return filter_crawlers(parsed.events);
}

// Output paths are stored relative to the manifest so identical runs into
// different directories stay byte-identical.
void write_manifest(RunManifest manifest, const std::string& path) {
    manifest.output_paths.push_back(path);
    fs::path base = fs::path(path).parent_path();
    for (auto& output : manifest.output_paths) {
        output = fs::relative(output, base).string();
    }
    std::sort(manifest.output_paths.begin(), manifest.output_paths.end());
    manifest.tool_version = std::string(kToolVersion);
    write_file(path, manifest.to_json());
}

// --- subcommand implementations -------------------------------------------

int cmd_synth(const GlobalOptions& options, const std::string& config_path,
              const std::string& out_dir, bool seed_given) {
    SynthConfig config;
    if (!config_path.empty()) {
        auto text = read_lines(config_path);
        std::string joined;
        for (const auto& line : text) joined += line + "\n";
        config = SynthConfig::from_json(nlohmann::json::parse(joined));
    }
    if (seed_given) config.seed = options.seed;
    config.validate();

    auto paths = generate(config, out_dir, options.jobs);

    RunManifest manifest;
    manifest.command = "synth";
    if (!config_path.empty()) manifest.input_paths.push_back(config_path);
    manifest.seed = config.seed;
    manifest.config_hash = stable_hash({config.to_json().dump()});
    manifest.output_paths = paths;
    manifest.output_paths.push_back(out_dir + "/manifest.json");
    write_manifest(manifest, out_dir + "/run.json");
    std::cerr << "synth: wrote " << paths.size() << " dumps to " << out_dir << "\n";
    return 0;
}

int cmd_ingest(const GlobalOptions& options, std::vector<std::string> inputs,
               const std::string& out_path, const std::string& prune_path) {
    // Directories expand to their *.tsv files, sorted for determinism.
    std::vector<std::string> files;
    for (const auto& input : inputs) {
        if (fs::is_directory(input)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::directory_iterator(input)) {
                if (entry.path().extension() == ".tsv") found.push_back(entry.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(input);
        }
    }
    if (files.empty()) {
        std::cerr << "ingest: no input files\n";
        return 2;
    }

    struct FileResult {
        ParseResult parsed;
        std::vector<std::string> raw_lines;
        std::string header;
        bool failed = false;
        std::string error;
    };

    std::ofstream archive(out_path, std::ios::binary | std::ios::trunc);
    if (!archive.is_open()) throw IoError("cannot write " + out_path);
    archive << canonical_header() << "\n";

    int failures = 0;
    std::unique_ptr<PruneScanner> scanner;
    std::string scanner_header;
    std::size_t total_events = 0;
    std::size_t total_rejects = 0;

    // Files are parsed in parallel batches and flushed in file order, so
    // memory stays bounded by one batch while output is deterministic.
    std::size_t batch = std::max<std::size_t>(1, options.jobs);
    for (std::size_t start = 0; start < files.size(); start += batch) {
        std::size_t count = std::min(batch, files.size() - start);
        std::vector<FileResult> results(count);
        parallel_for(count, options.jobs, [&](std::size_t k) {
            FileResult& result = results[k];
            try {
                auto lines = read_lines(files[start + k]);
                if (lines.empty()) throw EmptyInputError("file is empty");
                SchemaMap schema = validate_header(lines[0]);
                result.header = lines[0];
                lines.erase(lines.begin());
                result.parsed = parse_dump(lines, schema);
                if (!prune_path.empty()) result.raw_lines = std::move(lines);
            } catch (const Error& e) {
                result.failed = true;
                result.error = e.what();
            }
        });
        for (std::size_t k = 0; k < count; ++k) {
            const FileResult& result = results[k];
            const std::string& file = files[start + k];
            if (result.failed) {
                std::cerr << file << ": " << result.error << "\n";
                ++failures;
                continue;
            }
            for (const auto& reject : result.parsed.rejects) {
                std::cerr << file << ":" << reject.line_number << ": " << reject.reason
                          << "\n";
            }
            total_rejects += result.parsed.rejects.size();
            for (const auto& event : filter_crawlers(result.parsed.events)) {
                archive << serialize_event(event) << "\n";
                ++total_events;
            }
            if (!prune_path.empty()) {
                if (!scanner) {
                    SchemaMap schema = validate_header(result.header);
                    scanner = std::make_unique<PruneScanner>(schema.column_names);
                    scanner_header = result.header;
                }
                if (result.header == scanner_header) {
                    for (const auto& line : result.raw_lines) {
                        if (line.empty()) continue;
                        scanner->add_row(split_tsv(line));
                    }
                }
            }
        }
    }
    archive.close();
    if (!archive.good()) throw IoError("short write to " + out_path);
    RunManifest manifest;
    manifest.command = "ingest";
    manifest.input_paths = files;
    manifest.seed = options.seed;
    manifest.config_hash = hash_inputs(files, "ingest");
    manifest.output_paths.push_back(out_path);
    if (!prune_path.empty() && scanner && scanner->rows_seen() > 0) {
        write_file(prune_path, scanner->report().to_json());
        manifest.output_paths.push_back(prune_path);
    }
    write_manifest(manifest, out_path + ".run.json");
    std::cerr << "ingest: " << total_events << " events kept, " << total_rejects
              << " rejects, " << failures << " failed files\n";
    return failures == 0 ? 0 : 2;
}

int cmd_sessionize(const GlobalOptions& options, const std::string& archive,
                   const std::string& out_path) {
    auto events = load_archive(archive);
    auto sessions = sessionize(events, timeout_seconds(options));
    write_file(out_path, sessions_to_jsonl(sessions));

    RunManifest manifest;
    manifest.command = "sessionize";
    manifest.input_paths.push_back(archive);
    manifest.seed = options.seed;
    manifest.config_hash = hash_inputs({archive}, std::to_string(timeout_seconds(options)));
    manifest.output_paths.push_back(out_path);
    write_manifest(manifest, out_path + ".run.json");
    std::cerr << "sessionize: " << sessions.size() << " sessions from "
              << events.size() << " events\n";
    return 0;
}

int cmd_graph(const GlobalOptions& options, const std::string& archive,
              const std::string& out_dir, std::size_t top_k) {
    auto events = load_archive(archive);
    auto sessions = sessionize(events, timeout_seconds(options));
    SectionGraph graph = section_graph(sessions, top_k);
    fs::create_directories(out_dir);
    write_file(out_dir + "/graph_edges.csv", graph_edges_csv(graph));
    write_file(out_dir + "/graph_nodes.csv", graph_nodes_csv(graph));

    RunManifest manifest;
    manifest.command = "graph";
    manifest.input_paths.push_back(archive);
    manifest.seed = options.seed;
    manifest.config_hash = hash_inputs({archive}, "top_k=" + std::to_string(top_k));
    manifest.output_paths = {out_dir + "/graph_edges.csv", out_dir + "/graph_nodes.csv"};
    write_manifest(manifest, out_dir + "/run.json");
    return 0;
}

int cmd_label(const GlobalOptions& options, const std::string& archive,
              const std::string& out_path, const std::string& dropoff_path) {
    auto events = load_archive(archive);
    auto sessions = sessionize(events, timeout_seconds(options));
    ExtractResult extracted = extract_video_views(sessions);
    if (extracted.marker_regressions > 0) {
        std::cerr << "label: warning: " << extracted.marker_regressions
                  << " views had non-monotone marker sequences (labeled by max)\n";
    }
    if (extracted.views.empty()) {
        std::cerr << "label: 0 video views\n";
        return 2;
    }
    write_file(out_path, views_to_tsv(extracted.views));

    RunManifest manifest;
    manifest.command = "label";
    manifest.input_paths.push_back(archive);
    manifest.seed = options.seed;
    manifest.config_hash = hash_inputs({archive}, std::to_string(timeout_seconds(options)));
    manifest.output_paths.push_back(out_path);
    if (!dropoff_path.empty()) {
        write_file(dropoff_path, dropoff_to_csv(dropoff_curve(extracted.views, true)));
        manifest.output_paths.push_back(dropoff_path);
    }
    write_manifest(manifest, out_path + ".run.json");
    std::cerr << "label: " << extracted.views.size() << " video views\n";
    return 0;
}

int cmd_dropoff(const GlobalOptions& options, const std::string& archive,
                const std::string& out_path, bool overall) {
    auto events = load_archive(archive);
    auto sessions = sessionize(events, timeout_seconds(options));
    ExtractResult extracted = extract_video_views(sessions);
    if (extracted.views.empty()) {
        std::cerr << "dropoff: 0 video views\n";
        return 2;
    }
    write_file(out_path, dropoff_to_csv(dropoff_curve(extracted.views, !overall)));

    RunManifest manifest;
    manifest.command = "dropoff";
    manifest.input_paths.push_back(archive);
    manifest.seed = options.seed;
    manifest.config_hash = hash_inputs({archive}, overall ? "overall" : "by_category");
    manifest.output_paths.push_back(out_path);
    write_manifest(manifest, out_path + ".run.json");
    return 0;
}

FeatureTable load_views_table(const std::string& views_path, EvalTask task) {
    auto views = views_from_tsv(read_lines(views_path));
    FeatureTable table = build_feature_table(views);
    if (task == EvalTask::binary_early) return merge_task(table);
    return table;
}

int cmd_rank(const GlobalOptions& options, const std::string& views_path,
             const std::string& out_dir, const std::string& method_spec) {
    FeatureTable table = load_views_table(views_path, EvalTask::multiclass5);
    fs::create_directories(out_dir);

    std::vector<RankedFeatures> rankings;
    if (method_spec == "all") {
        for (ScoreMethod method : all_score_methods()) {
            rankings.push_back(rank(table, method));
        }
    } else {
        auto method = score_method_from(method_spec);
        if (!method) throw InvalidConfigError("unknown method: " + method_spec);
        rankings.push_back(rank(table, *method));
    }
    write_file(out_dir + "/rankings.csv", rankings_to_csv(rankings));

    RunManifest manifest;
    manifest.command = "rank";
    manifest.input_paths.push_back(views_path);
    manifest.seed = options.seed;
    manifest.config_hash = hash_inputs({views_path}, method_spec);
    manifest.output_paths.push_back(out_dir + "/rankings.csv");
    if (rankings.size() == all_score_methods().size()) {
        auto selected = consensus(rankings, options.top_fraction);
        write_file(out_dir + "/consensus.json", consensus_to_json(selected));
        manifest.output_paths.push_back(out_dir + "/consensus.json");
    }
    write_manifest(manifest, out_dir + "/run.json");
    return 0;
}

int cmd_train(const GlobalOptions& options, const std::string& views_path,
              const std::string& learner_name, const std::string& out_path,
              const std::string& task_name, const std::string& hyper_json) {
    auto kind = learner_kind_from(learner_name);
    if (!kind) throw InvalidConfigError("unknown learner: " + learner_name);
    EvalTask task =
        task_name == "binary" ? EvalTask::binary_early : EvalTask::multiclass5;
    FeatureTable table = load_views_table(views_path, task);

    LearnerConfig config;
    config.kind = *kind;
    config.seed = derive_seed(options.seed, "train");
    if (!hyper_json.empty()) config.hyper = nlohmann::json::parse(hyper_json);
    auto model = train_model(table, config);
    write_file(out_path, model_to_json(*model).dump(2) + "\n");

    RunManifest manifest;
    manifest.command = "train";
    manifest.input_paths.push_back(views_path);
    manifest.seed = options.seed;
    manifest.config_hash =
        hash_inputs({views_path}, learner_name + "/" + task_name + "/" + hyper_json);
    manifest.output_paths.push_back(out_path);
    write_manifest(manifest, out_path + ".run.json");
    return 0;
}

int evaluate_into(const GlobalOptions& options, const FeatureTable& base_table,
                  const std::string& out_dir, RunManifest& manifest,
                  std::vector<std::string>& summary_rows) {
    auto kinds = parse_learners(options.learners);
    auto tasks = parse_tasks(options.task);
    fs::create_directories(out_dir);

    for (EvalTask task : tasks) {
        FeatureTable table =
            task == EvalTask::binary_early ? merge_task(base_table) : base_table;
        for (LearnerKind kind : kinds) {
            LearnerConfig config;
            config.kind = kind;
            config.hyper = options.hyper_for(kind);
            config.seed = options.seed;
            EvalReport report =
                cross_validate(config, table, options.folds, options.seed, options.jobs);
            std::string stem = out_dir + "/eval_" + std::string(to_string(kind)) + "_" +
                               std::string(to_string(report.task));
            write_file(stem + ".json", report.to_json());
            write_file(stem + "_roc.csv", report.roc_csv());
            manifest.output_paths.push_back(stem + ".json");
            manifest.output_paths.push_back(stem + "_roc.csv");
            summary_rows.push_back(report.summary_csv_row());
            std::cerr << "evaluate: " << report.learner << " "
                      << to_string(report.task) << " acc=" << report.accuracy
                      << " auroc=" << report.auroc << " (" << report.wall_seconds
                      << "s)\n";
        }
    }
    std::string summary = std::string(kSummaryCsvHeader);
    for (const auto& row : summary_rows) summary += row;
    write_file(out_dir + "/summary.csv", summary);
    manifest.output_paths.push_back(out_dir + "/summary.csv");
    return 0;
}

int cmd_evaluate(const GlobalOptions& options, const std::string& views_path,
                 const std::string& out_dir) {
    FeatureTable table = load_views_table(views_path, EvalTask::multiclass5);
    RunManifest manifest;
    manifest.command = "evaluate";
    manifest.input_paths.push_back(views_path);
    manifest.seed = options.seed;
    manifest.config_hash =
        hash_inputs({views_path}, options.learners + "/" + options.task + "/" +
                                      std::to_string(options.folds) + "/" + options.hyper);
    std::vector<std::string> summary_rows;
    evaluate_into(options, table, out_dir, manifest, summary_rows);
    write_manifest(manifest, out_dir + "/run.json");
    return 0;
}

int cmd_pipeline(const GlobalOptions& options, const std::string& archive,
                 const std::string& out_dir, std::size_t top_k) {
    fs::create_directories(out_dir);
    RunManifest manifest;
    manifest.command = "pipeline";
    manifest.input_paths.push_back(archive);
    manifest.seed = options.seed;
    manifest.config_hash = hash_inputs(
        {archive}, options.learners + "/" + options.task + "/" +
                       std::to_string(options.folds) + "/" +
                       std::to_string(options.top_fraction) + "/" +
                       std::to_string(timeout_seconds(options)) + "/" + options.hyper);

    std::string stage = "ingest";
    try {
        auto events = load_archive(archive);

        stage = "sessionize";
        auto sessions = sessionize(events, timeout_seconds(options));
        write_file(out_dir + "/sessions.jsonl", sessions_to_jsonl(sessions));
        manifest.output_paths.push_back(out_dir + "/sessions.jsonl");
        SectionGraph graph = section_graph(sessions, top_k);
        write_file(out_dir + "/graph_edges.csv", graph_edges_csv(graph));
        write_file(out_dir + "/graph_nodes.csv", graph_nodes_csv(graph));
        manifest.output_paths.push_back(out_dir + "/graph_edges.csv");
        manifest.output_paths.push_back(out_dir + "/graph_nodes.csv");

        stage = "label";
        ExtractResult extracted = extract_video_views(sessions);
        if (extracted.views.empty()) {
            std::cerr << "pipeline: 0 video views\n";
            nlohmann::ordered_json j = nlohmann::ordered_json::parse(manifest.to_json());
            j["incomplete_stage"] = stage;
            write_file(out_dir + "/run.json", j.dump(2) + "\n");
            return 2;
        }
        write_file(out_dir + "/views.tsv", views_to_tsv(extracted.views));
        manifest.output_paths.push_back(out_dir + "/views.tsv");
        write_file(out_dir + "/dropoff.csv",
                   dropoff_to_csv(dropoff_curve(extracted.views, true)));
        manifest.output_paths.push_back(out_dir + "/dropoff.csv");

        stage = "rank";
        FeatureTable table = build_feature_table(extracted.views);
        std::vector<RankedFeatures> rankings;
        for (ScoreMethod method : all_score_methods()) {
            rankings.push_back(rank(table, method));
        }
        write_file(out_dir + "/rankings.csv", rankings_to_csv(rankings));
        manifest.output_paths.push_back(out_dir + "/rankings.csv");
        auto selected = consensus(rankings, options.top_fraction);
        write_file(out_dir + "/consensus.json", consensus_to_json(selected));
        manifest.output_paths.push_back(out_dir + "/consensus.json");

        stage = "evaluate";
        std::vector<std::string> summary_rows;
        evaluate_into(options, table, out_dir, manifest, summary_rows);

        write_manifest(manifest, out_dir + "/run.json");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "pipeline: stage " << stage << " failed: " << e.what() << "\n";
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(manifest.to_json());
        j["incomplete_stage"] = stage;
        write_file(out_dir + "/run.json", j.dump(2) + "\n");
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clickstream analytics toolkit"};
    app.require_subcommand(1);

    GlobalOptions options;
    app.add_option("--seed", options.seed, "master random seed")->capture_default_str();
    app.add_option("--jobs", options.jobs, "worker thread bound")->capture_default_str();
    app.add_option("--timeout-minutes", options.timeout_minutes,
                   "session inactivity timeout")
        ->capture_default_str();
    app.add_option("--folds", options.folds, "cross-validation folds")
        ->capture_default_str();
    app.add_option("--learners", options.learners,
                   "comma list of learners, or 'all'")
        ->capture_default_str();
    app.add_option("--task", options.task, "multi, binary, or both")
        ->capture_default_str();
    app.add_option("--top-fraction", options.top_fraction,
                   "consensus top fraction")
        ->capture_default_str();
    app.add_option("--hyper", options.hyper,
                   "hyperparameter overrides as JSON keyed by learner, e.g. "
                   "{\"c45\":{\"min_leaf\":4}}");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic dumps");
    std::string synth_config, synth_out;
    synth_cmd->add_option("--config", synth_config, "SynthConfig JSON file");
    synth_cmd->add_option("--out", synth_out, "output directory")->required();

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "parse dumps into an archive");
    std::vector<std::string> ingest_inputs;
    std::string ingest_out, ingest_prune;
    ingest_cmd->add_option("inputs", ingest_inputs, "dump files or directories")
        ->required();
    ingest_cmd->add_option("--out", ingest_out, "archive TSV path")->required();
    ingest_cmd->add_option("--prune-report", ingest_prune, "PruneReport JSON path");

    // sessionize
    auto* session_cmd = app.add_subcommand("sessionize", "rebuild user sessions");
    std::string session_archive, session_out;
    session_cmd->add_option("archive", session_archive, "event archive")->required();
    session_cmd->add_option("--out", session_out, "sessions JSONL path")->required();

    // graph
    auto* graph_cmd = app.add_subcommand("graph", "section transition graph");
    std::string graph_archive, graph_out;
    std::size_t graph_top_k = 12;
    graph_cmd->add_option("archive", graph_archive, "event archive")->required();
    graph_cmd->add_option("--out-dir", graph_out, "output directory")->required();
    graph_cmd->add_option("--top-k", graph_top_k, "sections kept")->capture_default_str();

    // label
    auto* label_cmd = app.add_subcommand("label", "extract labeled video views");
    std::string label_archive, label_out, label_dropoff;
    label_cmd->add_option("archive", label_archive, "event archive")->required();
    label_cmd->add_option("--out", label_out, "views TSV path")->required();
    label_cmd->add_option("--dropoff", label_dropoff, "drop-off CSV path");

    // dropoff
    auto* dropoff_cmd = app.add_subcommand("dropoff", "drop-off curves");
    std::string dropoff_archive, dropoff_out;
    bool dropoff_overall = false;
    dropoff_cmd->add_option("archive", dropoff_archive, "event archive")->required();
    dropoff_cmd->add_option("--out", dropoff_out, "CSV path")->required();
    dropoff_cmd->add_flag("--overall", dropoff_overall, "single curve over all views");

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "feature selection rankings");
    std::string rank_views, rank_out, rank_method = "all";
    rank_cmd->add_option("views", rank_views, "views TSV")->required();
    rank_cmd->add_option("--out-dir", rank_out, "output directory")->required();
    rank_cmd->add_option("--method", rank_method, "scorer or 'all'")
        ->capture_default_str();

    // train
    auto* train_cmd = app.add_subcommand("train", "train one model");
    std::string train_views, train_learner, train_out, train_task = "multi",
                                                       train_hyper;
    train_cmd->add_option("views", train_views, "views TSV")->required();
    train_cmd->add_option("--learner", train_learner, "learner kind")->required();
    train_cmd->add_option("--out", train_out, "model JSON path")->required();
    train_cmd->add_option("--model-task", train_task, "multi or binary")
        ->capture_default_str();
    train_cmd->add_option("--hyper", train_hyper, "hyperparameter JSON object");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "cross-validate learners");
    std::string eval_views, eval_out;
    eval_cmd->add_option("views", eval_views, "views TSV")->required();
    eval_cmd->add_option("--out-dir", eval_out, "output directory")->required();

    // pipeline
    auto* pipeline_cmd = app.add_subcommand("pipeline", "archive to full report set");
    std::string pipeline_archive, pipeline_out;
    std::size_t pipeline_top_k = 12;
    pipeline_cmd->add_option("--archive", pipeline_archive, "event archive")->required();
    pipeline_cmd->add_option("--out-dir", pipeline_out, "output directory")->required();
    pipeline_cmd->add_option("--top-k", pipeline_top_k, "graph sections kept")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) {
            return cmd_synth(options, synth_config, synth_out,
                             app.count("--seed") > 0);
        }
        if (ingest_cmd->parsed()) {
            return cmd_ingest(options, ingest_inputs, ingest_out, ingest_prune);
        }
        if (session_cmd->parsed()) {
            return cmd_sessionize(options, session_archive, session_out);
        }
        if (graph_cmd->parsed()) {
            return cmd_graph(options, graph_archive, graph_out, graph_top_k);
        }
        if (label_cmd->parsed()) {
            return cmd_label(options, label_archive, label_out, label_dropoff);
        }
        if (dropoff_cmd->parsed()) {
            return cmd_dropoff(options, dropoff_archive, dropoff_out, dropoff_overall);
        }
        if (rank_cmd->parsed()) {
            return cmd_rank(options, rank_views, rank_out, rank_method);
        }
        if (train_cmd->parsed()) {
            return cmd_train(options, train_views, train_learner, train_out, train_task,
                             train_hyper);
        }
        if (eval_cmd->parsed()) {
            return cmd_evaluate(options, eval_views, eval_out);
        }
        if (pipeline_cmd->parsed()) {
            return cmd_pipeline(options, pipeline_archive, pipeline_out, pipeline_top_k);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
