#include "matmcd/cli/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <optional>

#include "matmcd/da/rag.hpp"
#include "matmcd/da/tools.hpp"
#include "matmcd/graph/graph_io.hpp"
#include "matmcd/graph/metrics.hpp"
#include "matmcd/io/config_file.hpp"
#include "matmcd/io/dataset_io.hpp"
#include "matmcd/llm/embedding.hpp"
#include "matmcd/pipeline/pipeline.hpp"
#include "matmcd/rca/rca.hpp"
#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    // global
    std::string config;
    std::string backend;
    std::string cassette;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool dot = false;
    bool timings = false;
    // shared by discover / refine
    std::string data;
    std::string truth;
    std::string engine;
    double alpha = 0.05;
    std::size_t max_parents = 2;
    std::size_t max_conditioning = 3;
    std::string soft_weight;
    // refine
    int k = 1;
    int max_iterations = 8;
    std::string tool;
    std::string corpus;
    std::string logs;
    std::string blocklist;
    bool no_da = false;
    // evaluate / rca
    std::string pred;
    std::string graph;
    std::string cases;
    std::string stage = "refined";
    double restart = rca::kDefaultRestart;
    double z_threshold = 3.0;
    std::vector<std::size_t> map_k = {5, 10};
};

std::string fmt(double v, int decimals = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

void write_json(const fs::path& path, const nlohmann::json& doc) { io::write_file(path, doc.dump(2) + "\n"); }

// Graph plus names from a bare graph JSON or from a report (initial/refined).
struct LoadedGraph {
    CausalGraph graph;
    MetaData meta;
    std::string engine = "graph";
};

LoadedGraph load_graph_document(const fs::path& path, const std::string& stage) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
    LoadedGraph lg;
    // "shop.graph.json" -> "shop"
    const std::string file = path.filename().string();
    lg.meta.title = file.substr(0, file.find('.'));
    const nlohmann::json* g = &doc;
    if (doc.contains("schema_version")) {
        const std::string key = stage == "initial" ? "initial_graph" : "refined_graph";
        if (!doc.contains(key)) throw Error(path.string() + " has no " + key);
        g = &doc.at(key);
        lg.meta.title = doc.at("dataset").at("title").get<std::string>();
        lg.engine = doc.at("config").at("engine").get<std::string>();
    }
    lg.graph = graph_from_json(*g);
    lg.meta.names = g->at("nodes").get<std::vector<std::string>>();
    return lg;
}

pipeline::PipelineConfig build_config(const Options& o, const CLI::App& app, const CLI::App& sub,
                                      io::ConfigFile& file) {
    if (!o.config.empty()) file = io::load_config(o.config);
    auto& c = file.pipeline;
    auto given = [&](const char* name) {
        const CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option(name);
        } catch (const CLI::OptionNotFound&) {
            opt = app.get_option(name);
        }
        return opt->count() > 0;
    };
    if (given("--seed")) c.seed = o.seed;
    if (given("--backend")) c.backend = pipeline::parse_backend(o.backend);
    if (given("--cassette")) c.cassette = o.cassette;
    if (given("--engine")) c.engine = pipeline::parse_engine(o.engine);
    if (given("--alpha")) c.alpha = o.alpha;
    if (given("--max-parents")) c.max_parents = o.max_parents;
    if (given("--max-conditioning")) c.max_conditioning_size = o.max_conditioning;
    if (given("--soft-weight")) {
        c.soft_weight = text::to_lower(o.soft_weight) == "hard" ? std::numeric_limits<double>::infinity()
                                                                : std::stod(o.soft_weight);
    }
    if (sub.get_name() == "refine") {
        if (given("--k")) c.k = o.k;
        if (given("--max-iterations")) c.max_iterations = o.max_iterations;
        if (given("--tool")) c.tool = pipeline::parse_tool(o.tool);
        if (given("--corpus")) c.corpus_dir = o.corpus;
        if (given("--logs")) c.log_dir = o.logs;
        if (given("--blocklist")) c.blocklist = o.blocklist;
        if (o.no_da) c.da_agent = false;
    }
    if (given("--data")) file.data_csv = o.data;
    if (given("--truth")) file.truth = o.truth;
    return c;
}

Dataset require_dataset(const io::ConfigFile& file) {
    if (file.data_csv.empty()) throw Error("no dataset: pass --data or set [data] csv in the config");
    return io::load_dataset_csv(file.data_csv);
}

std::optional<CausalGraph> optional_truth(const io::ConfigFile& file, const MetaData& meta) {
    if (file.truth.empty()) return std::nullopt;
    return io::load_truth_graph(file.truth, meta.names);
}

void print_metrics_table(std::ostream& out, const std::vector<std::pair<std::string, GraphMetrics>>& rows) {
    out << pad("graph", 10) << pad("Prc", 7) << pad("Rec", 7) << pad("F1", 7) << pad("FPR", 7) << pad("SHD", 6)
        << "NHD\n";
    for (const auto& [name, m] : rows) {
        out << pad(name, 10) << pad(fmt(m.precision), 7) << pad(fmt(m.recall), 7) << pad(fmt(m.f1), 7)
            << pad(fmt(m.fpr), 7) << pad(std::to_string(m.shd), 6) << fmt(round_half_even(m.nhd, 2)) << "\n";
    }
}

fs::path emit_report(const Options& o, const pipeline::RunReport& report, const std::string& stage,
                     const CausalGraph& dot_graph, std::ostream& out) {
    const std::string engine = pipeline::to_string(report.config.engine);
    const fs::path path = fs::path(o.out_dir) / artifact_name(report.meta.title, engine, stage);
    write_json(path, pipeline::report_to_json(report, o.timings));
    out << path.string() << "\n";
    if (o.dot) {
        const fs::path dot = fs::path(o.out_dir) / artifact_name(report.meta.title, engine, stage, "dot");
        io::write_file(dot, to_dot(dot_graph, report.meta));
        out << dot.string() << "\n";
    }
    if (report.initial_metrics && report.refined_metrics) {
        std::vector<std::pair<std::string, GraphMetrics>> rows = {{"initial", *report.initial_metrics}};
        if (stage != "discover") rows.emplace_back("refined", *report.refined_metrics);
        print_metrics_table(out, rows);
    }
    return path;
}

llm::Embedder make_embedder(const pipeline::PipelineConfig& c) {
    if (c.embedder == "remote") {
        llm::RemoteEmbedderOptions opts;
        opts.base_url = c.base_url;
        opts.model = c.embedding_model;
        opts.api_key_env = c.api_key_env;
        return llm::make_remote_embedder(opts);
    }
    return da::HashingEmbedder(c.embedding_dimension);
}

int run_discover(const Options& o, const CLI::App& app, const CLI::App& sub, std::ostream& out) {
    io::ConfigFile file;
    const auto config = build_config(o, app, sub, file);
    const Dataset data = require_dataset(file);
    const auto truth = optional_truth(file, data.meta);
    const auto report = pipeline::run_discovery(data, truth, config);
    emit_report(o, report, "discover", report.initial_graph, out);
    return 0;
}

int run_refine(const Options& o, const CLI::App& app, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    io::ConfigFile file;
    const auto config = build_config(o, app, sub, file);
    config.validate();
    const Dataset data = require_dataset(file);
    const auto truth = optional_truth(file, data.meta);

    llm::ChatGateway gateway(pipeline::make_backend(config), config.model);
    std::unique_ptr<da::SearchTool> tool;
    if (config.da_agent) {
        switch (config.tool) {
            case pipeline::ToolKind::None:
                break;
            case pipeline::ToolKind::Web: {
                da::SerperOptions opts;
                opts.endpoint = config.search_endpoint;
                opts.api_key_env = config.search_key_env;
                opts.results = config.search_results;
                tool = std::make_unique<da::SerperWebTool>(opts);
                break;
            }
            case pipeline::ToolKind::Corpus:
                tool = std::make_unique<da::LocalCorpusTool>(config.corpus_dir, config.search_results);
                break;
            case pipeline::ToolKind::Log:
                tool = std::make_unique<da::LogTool>(da::load_log_store(config.log_dir, data.meta.names), gateway,
                                                     data.meta, config.log_cap, config.seed);
                break;
        }
    }
    pipeline::Services services{&gateway, tool.get(), make_embedder(config)};
    const auto report = pipeline::run_pipeline(data, truth, config, services);
    for (const auto& w : report.provenance.warnings) err << "warning: " << w << "\n";
    emit_report(o, report, "refine", report.refined_graph, out);
    return 0;
}

int run_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
    std::string truth_path = o.truth;
    io::ConfigFile file;
    if (!o.config.empty()) file = io::load_config(o.config);
    if (truth_path.empty()) truth_path = file.truth;
    if (o.pred.empty()) {
        err << "error: evaluate needs --pred (a graph or report JSON)\n";
        return 2;
    }
    if (truth_path.empty()) {
        err << "error: evaluate needs a ground-truth file (--truth or [data] truth in the config)\n";
        return 2;
    }
    std::vector<std::pair<std::string, GraphMetrics>> rows;
    LoadedGraph first = load_graph_document(o.pred, "initial");
    const CausalGraph truth = io::load_truth_graph(truth_path, first.meta.names);
    nlohmann::json doc = {{"schema_version", pipeline::kReportSchemaVersion},
                          {"dataset", first.meta.title},
                          {"truth", fs::path(truth_path).filename().string()}};
    auto add = [&](const std::string& name, const CausalGraph& g) {
        const auto m = confusion_metrics(g, truth);
        rows.emplace_back(name, m);
        doc["metrics"][name] = pipeline::metrics_to_json(m);
    };
    const auto pred_doc = nlohmann::json::parse(io::read_file(o.pred));
    if (pred_doc.contains("schema_version")) {
        add("initial", first.graph);
        if (pred_doc.value("stage", "") == "refine") {
            add("refined", load_graph_document(o.pred, "refined").graph);
        }
    } else {
        add("graph", first.graph);
    }
    const fs::path path = fs::path(o.out_dir) / artifact_name(first.meta.title, first.engine, "evaluate");
    write_json(path, doc);
    out << path.string() << "\n";
    print_metrics_table(out, rows);
    return 0;
}

int run_rca(const Options& o, std::ostream& out, std::ostream& err) {
    io::ConfigFile file;
    if (!o.config.empty()) file = io::load_config(o.config);
    const std::string cases_path = o.cases.empty() ? file.rca_cases : o.cases;
    if (o.graph.empty() || cases_path.empty()) {
        err << "error: rca needs --graph (graph or report JSON) and --cases (or [data] rca_cases)\n";
        return 2;
    }
    const LoadedGraph lg = load_graph_document(o.graph, o.stage);
    if (!is_dag(lg.graph)) throw Error("RCA needs a DAG; " + o.graph + " has a cycle or undirected edges");
    const auto files = io::load_rca_cases(cases_path, lg.meta.names);

    std::vector<rca::EvaluatedCase> all;
    std::map<std::string, std::vector<rca::EvaluatedCase>> groups;
    nlohmann::json faults = nlohmann::json::array();
    out << pad("fault_id", 16) << pad("RK", 5) << "top-5\n";
    for (const auto& f : files) {
        auto scores = f.rca_case.anomaly_scores;
        if (f.series) {
            const auto kept = rca::prefilter_anomalous(*f.series, o.z_threshold);
            if (kept.empty()) {
                throw DataError("fault " + f.rca_case.fault_id + ": no node passes the anomaly filter at z >= " +
                                fmt(o.z_threshold) + "; RCA aborted");
            }
            scores.assign(lg.meta.names.size(), 0.0);
            for (NodeId v : kept) {
                const double z = rca::max_robust_z((*f.series)[v]);
                scores[v] = std::isinf(z) ? 1e6 : z;
            }
        }
        rca::EvaluatedCase ec{rca::rwr_rank(lg.graph, scores, o.restart), f.rca_case.truth_root_causes};
        const std::size_t rank = rca::first_hit_rank(ec);
        std::vector<std::string> top;
        for (std::size_t i = 0; i < ec.ranking.order.size() && i < 5; ++i) {
            top.push_back(lg.meta.names[ec.ranking.order[i]]);
        }
        out << pad(f.rca_case.fault_id, 16) << pad(rank ? std::to_string(rank) : "-", 5) << text::join(top, ", ")
            << "\n";
        nlohmann::json ranking = nlohmann::json::array();
        for (NodeId v : ec.ranking.order) ranking.push_back({{"node", lg.meta.names[v]}, {"score", ec.ranking.scores[v]}});
        faults.push_back({{"fault_id", f.rca_case.fault_id},
                          {"group", f.rca_case.group},
                          {"rank", rank},
                          {"ranking", std::move(ranking)}});
        groups[f.rca_case.group].push_back(ec);
        all.push_back(std::move(ec));
    }
    auto summary = [&](const std::vector<rca::EvaluatedCase>& cs) {
        nlohmann::json s;
        for (std::size_t k : o.map_k) s["map@" + std::to_string(k)] = rca::map_at_k(cs, k);
        s["mrr"] = rca::mrr(cs);
        s["faults"] = cs.size();
        return s;
    };
    nlohmann::json doc = {{"schema_version", pipeline::kReportSchemaVersion},
                          {"dataset", lg.meta.title},
                          {"restart", o.restart},
                          {"graph_stage", o.stage},
                          {"faults", std::move(faults)},
                          {"pooled", summary(all)}};
    if (groups.size() > 1 || (groups.size() == 1 && !groups.begin()->first.empty())) {
        for (const auto& [g, cs] : groups) doc["per_group"][g.empty() ? "(none)" : g] = summary(cs);
    }
    out << "\n" << pad("set", 16);
    for (std::size_t k : o.map_k) out << pad("MAP@" + std::to_string(k), 9);
    out << "MRR\n";
    auto row = [&](const std::string& name, const std::vector<rca::EvaluatedCase>& cs) {
        out << pad(name, 16);
        for (std::size_t k : o.map_k) out << pad(fmt(rca::map_at_k(cs, k), 3), 9);
        out << fmt(rca::mrr(cs), 3) << "\n";
    };
    row("pooled", all);
    if (doc.contains("per_group")) {
        for (const auto& [g, cs] : groups) row(g.empty() ? "(none)" : g, cs);
    }
    const fs::path path = fs::path(o.out_dir) / artifact_name(lg.meta.title, lg.engine, "rca");
    write_json(path, doc);
    out << path.string() << "\n";
    return 0;
}

void add_engine_flags(CLI::App* sub, Options& o) {
    sub->add_option("--data", o.data, "dataset CSV (header row of variable names)");
    sub->add_option("--truth", o.truth, "ground-truth graph JSON {\"edges\": [[from, to], ...]}");
    sub->add_option("--engine", o.engine, "pc | exact | lingam");
    sub->add_option("--alpha", o.alpha, "PC significance level")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--max-parents", o.max_parents, "exact search parent cap")->capture_default_str();
    sub->add_option("--max-conditioning", o.max_conditioning, "PC conditioning-set size cap");
    sub->add_option("--soft-weight", o.soft_weight, "DirectLiNGAM constraint weight, or 'hard'");
}

}  // namespace

std::string artifact_name(const std::string& dataset, const std::string& engine, const std::string& stage,
                          const std::string& extension) {
    auto clean = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            const auto u = static_cast<unsigned char>(c);
            out.push_back(std::isalnum(u) || c == '-' || c == '_' ? c : '_');
        }
        return out.empty() ? std::string("dataset") : out;
    };
    return clean(dataset) + "." + clean(engine) + "." + clean(stage) + "." + extension;
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"MATMCD: causal discovery refined by LLM-agent constraints"};
    app.name("matmcd");
    app.require_subcommand(1);
    app.fallthrough();
    app.failure_message(CLI::FailureMessage::help);
    app.add_option("--config", o.config, "TOML-style config file");
    app.add_option("--seed", o.seed, "seed for sampling steps");
    app.add_option("--backend", o.backend, "live | replay | record | scripted");
    app.add_option("--cassette", o.cassette, "cassette JSON for replay/record");
    app.add_option("--out", o.out_dir, "output directory")->capture_default_str();
    app.add_flag("--dot", o.dot, "also write a DOT file of the resulting graph");
    app.add_flag("--timings", o.timings, "include per-stage timings in the report");

    auto* discover = app.add_subcommand("discover", "run the statistical estimator only");
    add_engine_flags(discover, o);

    auto* refine = app.add_subcommand("refine", "full pipeline: estimator, agents, constrained rerun");
    add_engine_flags(refine, o);
    refine->add_option("--k", o.k, "Top-K guesses per pair");
    refine->add_option("--max-iterations", o.max_iterations, "search loop cap");
    refine->add_option("--tool", o.tool, "web | log | corpus | none");
    refine->add_option("--corpus", o.corpus, "document directory for the corpus tool");
    refine->add_option("--logs", o.logs, "per-entity log directory for the log tool");
    refine->add_option("--blocklist", o.blocklist, "leak screening rules");
    refine->add_flag("--no-da", o.no_da, "skip the DA-agent (meta-data only prompts)");

    auto* evaluate = app.add_subcommand("evaluate", "score a graph or report against the ground truth");
    evaluate->add_option("--pred", o.pred, "graph JSON or report JSON");
    evaluate->add_option("--truth", o.truth, "ground-truth graph JSON");

    auto* rca_cmd = app.add_subcommand("rca", "rank root causes by random walk with restart");
    rca_cmd->add_option("--graph", o.graph, "graph JSON or report JSON");
    rca_cmd->add_option("--cases", o.cases, "RCA case JSON");
    rca_cmd->add_option("--stage", o.stage, "graph of a report to use: initial | refined")
        ->check(CLI::IsMember({"initial", "refined"}));
    rca_cmd->add_option("--restart", o.restart, "restart probability")->check(CLI::Range(0.0, 1.0));
    rca_cmd->add_option("--z-threshold", o.z_threshold, "robust z cut for series input");
    rca_cmd->add_option("--map-k", o.map_k, "K values for MAP@K");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage errors exit 2 like the other argument checks; --help stays 0.
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    try {
        if (*discover) return run_discover(o, app, *discover, out);
        if (*refine) return run_refine(o, app, *refine, out, err);
        if (*evaluate) return run_evaluate(o, out, err);
        if (*rca_cmd) return run_rca(o, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("matmcd");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace matmcd::cli
