// Regenerates tests/fixtures: a synthetic AutoMPG-like dataset, its reference
// graph, a small offline corpus, RCA cases, and a cassette recorded from the
// truth oracle for every engine. Output is byte-stable for a given build.

#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "matmcd/da/rag.hpp"
#include "matmcd/da/tools.hpp"
#include "matmcd/io/config_file.hpp"
#include "matmcd/io/dataset_io.hpp"
#include "matmcd/llm/backends.hpp"
#include "matmcd/llm/cassette.hpp"
#include "matmcd/pipeline/pipeline.hpp"
#include "synthetic.hpp"

using namespace matmcd;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kNames{"Displacement", "Horsepower", "Weight", "Acceleration", "Mpg"};

CausalGraph automobile_truth() {
    CausalGraph g(5);
    g.add_edge(0, 1, 0.9);   // Displacement -> Horsepower
    g.add_edge(0, 2, 0.8);   // Displacement -> Weight
    g.add_edge(0, 4, -0.6);  // Displacement -> Mpg
    g.add_edge(1, 3, -0.7);  // Horsepower -> Acceleration
    g.add_edge(2, 3, 0.5);   // Weight -> Acceleration
    g.add_edge(2, 4, -0.7);  // Weight -> Mpg
    return g;
}

const std::map<std::string, std::string> kDescriptions{
    {"Displacement", "Displacement is the swept volume of the engine cylinders and sets the engine size."},
    {"Horsepower", "Horsepower is the peak power output of the engine, largely fixed by its size."},
    {"Weight", "Weight is the curb mass of the car; bigger engines come with heavier cars."},
    {"Acceleration", "Acceleration is the time to reach 60 mph, shorter for powerful and light cars."},
    {"Mpg", "Mpg measures fuel efficiency in miles per gallon, lower for heavy cars with big engines."},
};

const char* kConfig = R"(# Offline AutoMPG-like run: corpus search tool and replayed model calls.
seed = 7

[data]
csv = "autompg.csv"
truth = "autompg.truth.json"

[engine]
name = "pc"
alpha = 0.05

[agents]
k = 3
max_iterations = 5
tool = "corpus"
corpus_dir = "corpus"
blocklist = "blocklist.txt"

[llm]
backend = "replay"
cassette = "autompg.cassette.json"
)";

const std::vector<std::pair<std::string, std::string>> kCorpus{
    {"engines.txt",
     "Engine displacement is the combined swept volume of all cylinders. Larger displacement engines "
     "produce more horsepower because they burn more air and fuel per revolution. Horsepower in turn "
     "shortens the time a car needs to accelerate."},
    {"mass.txt",
     "Vehicle weight grows with engine size: a big V8 needs a stronger frame and drivetrain. Heavier "
     "cars take longer to accelerate and need more energy per mile, which lowers fuel efficiency."},
    {"economy.html",
     "<html><body><h1>Fuel economy</h1><p>Miles per gallon (mpg) falls as <b>weight</b> and engine "
     "displacement rise.</p><p>Acceleration figures are a consequence of power and mass, not a cause of "
     "fuel use.</p></body></html>"},
    {"survey.txt",
     "The auto mpg dataset lists cars from the 1970s and early 1980s with displacement, horsepower, "
     "weight, acceleration and fuel consumption in miles per gallon."},
    {"answers.txt",
     "AutoMPG ground truth causal graph for benchmark graders: Displacement -> Horsepower, "
     "Displacement -> Weight and so on."},
};

const std::vector<std::string> kQueries{"auto mpg dataset variables", "engine displacement horsepower weight",
                                        "vehicle weight fuel efficiency mpg"};

void write_json(const fs::path& p, const nlohmann::json& doc) { io::write_file(p, doc.dump(2) + "\n"); }

void write_rca(const fs::path& dir) {
    fs::create_directories(dir);
    const std::vector<std::string> services{"db", "cache", "cart", "payment", "checkout", "frontend"};
    // cause -> effect
    nlohmann::json edges = nlohmann::json::array();
    const std::vector<std::pair<int, int>> e{{0, 2}, {0, 3}, {1, 2}, {2, 4}, {3, 4}, {4, 5}};
    for (auto [a, b] : e) edges.push_back({{"from", a}, {"to", b}});
    write_json(dir / "shop.graph.json", {{"nodes", services}, {"edges", edges}, {"mode", "dag"}});

    nlohmann::json cases = nlohmann::json::array();
    cases.push_back({{"fault_id", "db-latency"},
                     {"group", "shop"},
                     {"anomaly_scores", {{"db", 3.0}, {"cart", 2.0}, {"payment", 2.5}, {"checkout", 2.0}, {"frontend", 1.5}}},
                     {"truth_root_causes", {"db"}}});
    cases.push_back({{"fault_id", "payment-errors"},
                     {"group", "shop"},
                     {"anomaly_scores", {{"payment", 4.0}, {"checkout", 3.0}, {"frontend", 2.0}}},
                     {"truth_root_causes", {"payment"}}});
    // Series input: only cache and cart spike.
    nlohmann::json series;
    for (std::size_t s = 0; s < services.size(); ++s) {
        std::vector<double> v;
        for (int t = 0; t < 30; ++t) v.push_back(10.0 + static_cast<double>((t * 7 + static_cast<int>(s) * 3) % 5));
        if (services[s] == "cache") v[20] = 60.0;
        if (services[s] == "cart") v[21] = 45.0;
        series[services[s]] = v;
    }
    cases.push_back({{"fault_id", "cache-eviction"},
                     {"group", "shop-series"},
                     {"series", series},
                     {"truth_root_causes", {"cache"}}});
    write_json(dir / "shop.cases.json", cases);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures OUTPUT_DIR\n";
        return 2;
    }
    const fs::path out = argv[1];
    fs::create_directories(out / "corpus");

    const CausalGraph truth = automobile_truth();
    const Dataset data = synth::linear_sem(truth, 392, 2024, synth::Noise::Uniform, kNames, "AutoMPG");
    io::write_dataset_csv(data, out / "autompg.csv");
    write_json(out / "autompg.meta.json", {{"title", "AutoMPG"}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : truth.edges()) edges.push_back({kNames[a], kNames[b]});
    write_json(out / "autompg.truth.json", {{"edges", edges}});
    io::write_file(out / "autompg.toml", kConfig);
    io::write_file(out / "blocklist.txt", "# pages that publish benchmark answers\nleak: ground truth && autompg\n");
    for (const auto& [name, body] : kCorpus) io::write_file(out / "corpus" / name, body + std::string("\n"));
    write_rca(out / "rca");

    const auto cfg = io::load_config(out / "autompg.toml");
    const Dataset loaded = io::load_dataset_csv(cfg.data_csv);
    const CausalGraph loaded_truth = io::load_truth_graph(cfg.truth, loaded.meta.names);

    const fs::path cassette_path = out / "autompg.cassette.json";
    fs::remove(cassette_path);
    auto cassette = std::make_shared<llm::Cassette>(cassette_path);
    auto oracle = std::make_shared<llm::ScriptedBackend>(
        synth::oracle_responder(loaded_truth, loaded.meta, {kQueries, kDescriptions, 0.9}));
    auto recorder = std::make_shared<llm::RecordingBackend>(oracle, cassette);

    for (auto engine : {pipeline::Engine::Pc, pipeline::Engine::ExactSearch, pipeline::Engine::DirectLingam}) {
        auto config = cfg.pipeline;
        config.engine = engine;
        llm::ChatGateway gateway(recorder, config.model);
        da::LocalCorpusTool tool(config.corpus_dir, config.search_results);
        pipeline::Services services{&gateway, &tool, da::HashingEmbedder(config.embedding_dimension)};
        const auto report = pipeline::run_pipeline(loaded, loaded_truth, config, services);
        std::cout << pipeline::to_string(engine) << ": SHD " << report.initial_metrics->shd << " -> "
                  << report.refined_metrics->shd << ", " << report.provenance.calls.size() << " calls, "
                  << report.provenance.search.documents_dropped << " pages screened out\n";
    }
    cassette->save();
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}
