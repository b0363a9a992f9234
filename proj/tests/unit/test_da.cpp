#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "matmcd/da/html.hpp"
#include "matmcd/da/logs.hpp"
#include "matmcd/da/rag.hpp"
#include "matmcd/da/screening.hpp"
#include "matmcd/da/search.hpp"
#include "matmcd/da/summary.hpp"
#include "matmcd/da/tools.hpp"
#include "matmcd/llm/backends.hpp"
#include "matmcd/util/error.hpp"

using namespace matmcd;
using namespace matmcd::da;

namespace fs = std::filesystem;

namespace {

const MetaData kAuto{"AutoMPG", {"Weight", "Displacement", "Mpg"}};

struct Rig {
    std::shared_ptr<llm::ScriptedBackend> backend = std::make_shared<llm::ScriptedBackend>();
    llm::ChatGateway gateway{backend, "m"};
};

class FakeTool : public SearchTool {
public:
    std::vector<std::string> seen;
    std::vector<Document> fetch(const std::string& query) override {
        seen.push_back(query);
        if (query == "explode") throw GatewayError("HTTP 500");
        return {{"https://example.org/" + std::to_string(seen.size()),
                 "<p>Heavier cars burn more fuel. Query was " + query + ".</p>", true}};
    }
    std::string name() const override { return "fake"; }
};

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "matmcd_da_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Html, StripsMarkupAndDecodes) {
    EXPECT_EQ(deformat_html("<html><head><style>p{}</style><script>var x=1<2;</script></head>"
                            "<body><!-- hidden --><p>Fuel&nbsp;use &amp; <b>weight</b></p><p>next</p></body>"),
              "Fuel use & weight next");
    EXPECT_EQ(deformat_html("a < b and c>d"), "a < b and c>d");
    EXPECT_EQ(deformat_html("un<i>ité</i>"), "unité");
    EXPECT_EQ(decode_entities("&#65;&#x42;&lt;&quot;&apos;&#233;&bogus;"), "AB<\"'\xc3\xa9&bogus;");
    EXPECT_EQ(deformat_html(""), "");
    EXPECT_EQ(deformat_html("<p unclosed"), "");
}

TEST(Screening, DomainGlobSubstringAndLeakRules) {
    auto bl = Blocklist::parse(
        "# comment\n"
        "kaggle.com\n"
        "https://github.com/*/causal*\n"
        "/bnlearn/\n"
        "leak: adjacency matrix && auto mpg\n");
    EXPECT_FALSE(screen_document("x", "https://www.kaggle.com/data", bl));
    EXPECT_FALSE(screen_document("x", "https://kaggle.com", bl));
    EXPECT_TRUE(screen_document("x", "https://notkaggle.com/", bl));
    EXPECT_FALSE(screen_document("x", "https://github.com/someone/causal-benchmarks", bl));
    EXPECT_TRUE(screen_document("x", "https://github.com/someone/cars", bl));
    EXPECT_FALSE(screen_document("x", "https://www.bnlearn.com/bnlearn/networks", bl));
    EXPECT_FALSE(screen_document("The Adjacency Matrix for Auto MPG is", "https://a.org", bl));
    EXPECT_TRUE(screen_document("The adjacency matrix of something else", "https://a.org", bl));

    bl.add_default_leak_rules("AutoMPG");
    EXPECT_FALSE(screen_document("Here is the ground truth causal graph.", "https://a.org", bl));
    EXPECT_FALSE(screen_document("AutoMPG ground truth (causal)", "https://a.org", bl));
    EXPECT_TRUE(screen_document("AutoMPG heavier cars use more fuel", "https://a.org", bl));
}

TEST(Screening, EmptyLeakRuleRejected) {
    EXPECT_THROW(Blocklist::parse("leak:   \n"), Error);
}

TEST(Chunking, FiveThousandCharsMakeThreeChunks) {
    const std::string text(5000, 'x');
    const auto chunks = chunk_text(text, 2000, 200);
    ASSERT_EQ(chunks.size(), 3u);
    EXPECT_EQ(chunks[0].size(), 2000u);
    EXPECT_EQ(chunks[1].size(), 2000u);
    EXPECT_EQ(chunks[2].size(), 1400u);
    EXPECT_EQ(reconstruct_text(chunks, 200), text);
}

TEST(Chunking, LosslessOnRandomWordText) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> len(1, 12);
    std::uniform_int_distribution<int> gap(0, 6);
    for (int t = 0; t < 50; ++t) {
        std::string text;
        const int words = 50 + t * 40;
        for (int w = 0; w < words; ++w) {
            text += std::string(static_cast<std::size_t>(len(rng)), static_cast<char>('a' + w % 26));
            text += gap(rng) == 0 ? "\n" : " ";
        }
        const std::size_t chunk = 300 + static_cast<std::size_t>(t) * 7;
        const std::size_t overlap = 40 + static_cast<std::size_t>(t);
        const auto chunks = chunk_text(text, chunk, overlap);
        for (const auto& c : chunks) EXPECT_LE(c.size(), chunk);
        EXPECT_EQ(reconstruct_text(chunks, overlap), text);
    }
}

TEST(Chunking, ShortTextAndBadArguments) {
    EXPECT_EQ(chunk_text("short", 2000, 200), std::vector<std::string>{"short"});
    EXPECT_TRUE(chunk_text("", 2000, 200).empty());
    EXPECT_THROW(chunk_text("abc", 100, 100), Error);
}

TEST(Embedding, HashingIsUnitNormAndDeterministic) {
    const HashingEmbedder embed(256);
    const auto a = embed("Heavier cars burn more fuel");
    const auto b = embed("heavier CARS burn more fuel!");
    EXPECT_EQ(a, b);
    double norm = 0;
    for (double v : a) norm += v * v;
    EXPECT_NEAR(norm, 1.0, 1e-12);
    const auto empty = embed("   ");
    EXPECT_TRUE(std::all_of(empty.begin(), empty.end(), [](double v) { return v == 0.0; }));
}

TEST(Mips, MatchesBruteForceWithIdTieBreak) {
    const HashingEmbedder embed(64);
    std::mt19937_64 rng(5);
    const std::vector<std::string> vocab{"fuel", "weight", "engine", "mpg", "car", "power", "year", "origin"};
    std::vector<SourceDocument> docs;
    for (int d = 0; d < 40; ++d) {
        std::string body;
        for (int w = 0; w < 6; ++w) body += vocab[rng() % vocab.size()] + " ";
        docs.push_back({"doc" + std::to_string(d), body});
    }
    const auto index = build_rag_index(docs, 2000, 200, embed);
    ASSERT_EQ(index.size(), 40u);
    for (std::size_t k : {1u, 3u, 10u, 60u}) {
        const auto hits = mips_retrieve(index, "fuel weight", k, embed);
        std::vector<std::pair<double, std::size_t>> ref;
        const auto q = embed("fuel weight");
        for (const auto& c : index) {
            double s = 0;
            for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * c.embedding[i];
            ref.emplace_back(-s, c.id);
        }
        std::sort(ref.begin(), ref.end());
        ASSERT_EQ(hits.size(), std::min<std::size_t>(k, index.size()));
        for (std::size_t r = 0; r < hits.size(); ++r) {
            EXPECT_EQ(hits[r].chunk.id, ref[r].second);
            EXPECT_NEAR(hits[r].score, -ref[r].first, 1e-12);
        }
    }
    EXPECT_THROW(mips_retrieve(index, "x", 0, embed), Error);
}

TEST(QueryMemory, NormalizesForDedup) {
    QueryMemory m;
    EXPECT_TRUE(m.add("AutoMPG dataset"));
    EXPECT_FALSE(m.add("  autompg   DATASET? "));
    EXPECT_TRUE(m.contains("AUTOMPG dataset."));
    EXPECT_EQ(m.size(), 1u);
    EXPECT_EQ(m.issued().front(), "AutoMPG dataset");
}

TEST(SearchReply, Parsing) {
    EXPECT_EQ(parse_search_reply("Search Query: \"auto mpg weight\"")->query, "auto mpg weight");
    EXPECT_EQ(parse_search_reply("**Search Query:**\n<car displacement>")->query, "car displacement");
    EXPECT_FALSE(parse_search_reply("Search Query: No query needed.")->query);
    EXPECT_FALSE(parse_search_reply("I think no query needed here")->query);
    EXPECT_FALSE(parse_search_reply("I am not sure"));
    EXPECT_FALSE(parse_search_reply("Search Query: new query"));
}

TEST(NextQuery, FreshQueryDuplicateRetryAndDone) {
    Rig rig;
    QueryMemory memory;
    memory.add("auto mpg");

    rig.backend->push("search", "Search Query: car weight");
    EXPECT_EQ(next_query(rig.gateway, kAuto, memory), "car weight");

    rig.backend->push("search", "Search Query: Auto MPG");
    rig.backend->push("search", "Search Query: engine displacement");
    EXPECT_EQ(next_query(rig.gateway, kAuto, memory), "engine displacement");

    rig.backend->push("search", "Search Query: auto mpg");
    rig.backend->push("search", "Search Query: auto mpg.");
    EXPECT_EQ(next_query(rig.gateway, kAuto, memory), std::nullopt);

    rig.backend->push("search", "No query needed.");
    EXPECT_EQ(next_query(rig.gateway, kAuto, memory), std::nullopt);
}

TEST(SearchPrompt, ListsPreviousQueries) {
    QueryMemory memory;
    EXPECT_NE(render_search_prompt(kAuto, memory).find("None."), std::string::npos);
    memory.add("first q");
    memory.add("second q");
    const auto p = render_search_prompt(kAuto, memory);
    EXPECT_NE(p.find("1. first q\n2. second q"), std::string::npos);
    EXPECT_NE(p.find("Weight, Displacement, Mpg"), std::string::npos);
}

TEST(SearchLoop, ThreeQueriesThenDone) {
    Rig rig;
    for (const char* q : {"a b", "c d", "e f"}) rig.backend->push("search", std::string("Search Query: ") + q);
    rig.backend->push("search", "No query needed.");
    FakeTool tool;
    const auto r = run_search_loop(rig.gateway, kAuto, tool, HashingEmbedder(128));
    EXPECT_EQ(r.tool_calls, 3u);
    EXPECT_EQ(tool.seen, (std::vector<std::string>{"a b", "c d", "e f"}));
    EXPECT_EQ(r.documents_kept, 3u);
    EXPECT_EQ(r.chunks.size(), 3u);
    EXPECT_EQ(r.memory.size(), 3u);
    EXPECT_EQ(rig.gateway.calls().size(), 4u);
}

TEST(SearchLoop, IterationCapToolFailureAndScreening) {
    Rig rig;
    rig.backend->push("search", "Search Query: explode");
    rig.backend->push("search", "Search Query: q2");
    rig.backend->push("search", "Search Query: q3");
    FakeTool tool;
    SearchLoopOptions opts;
    opts.max_iterations = 3;
    opts.blocklist = Blocklist::parse("example.org\n");
    const auto r = run_search_loop(rig.gateway, kAuto, tool, HashingEmbedder(128), opts);
    EXPECT_EQ(r.tool_calls, 3u);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_NE(r.warnings[0].find("HTTP 500"), std::string::npos);
    EXPECT_EQ(r.documents_dropped, 2u);
    EXPECT_TRUE(r.chunks.empty());
}

TEST(Summary, ParsesSectionsAndFillsGaps) {
    const auto b = parse_summary_reply(
        "**Dataset Summary:** Cars from the 1970s.\n"
        "More detail.\n"
        "- Summary of Weight: Vehicle mass in pounds.\n"
        "Summary of \"Mpg\":\nMiles per gallon.\n"
        "Relationships:\nHeavier cars use more fuel.\n",
        kAuto);
    EXPECT_EQ(b.dataset_summary, "Cars from the 1970s. More detail.");
    EXPECT_EQ(b.summary_of("Weight"), "Vehicle mass in pounds.");
    EXPECT_EQ(b.summary_of("Mpg"), "Miles per gallon.");
    EXPECT_EQ(b.summary_of("Displacement"), kNoInformation);
    EXPECT_EQ(b.relationship_notes, "Heavier cars use more fuel.");
    EXPECT_THROW(parse_summary_reply("nothing useful", kAuto), ParseError);
}

TEST(Summary, EmptyIndexSkipsTheModel) {
    Rig rig;
    const auto b = summarize_context(rig.gateway, kAuto, {}, 3, HashingEmbedder(64));
    EXPECT_TRUE(rig.gateway.calls().empty());
    EXPECT_EQ(b.dataset_summary, kNoInformation);
    EXPECT_EQ(b.summary_of("Weight"), kNoInformation);
}

TEST(Summary, PromptCarriesSelectedExcerpts) {
    Rig rig;
    const HashingEmbedder embed(128);
    const auto index = build_rag_index({{"s1", "Weight of the car in pounds"}, {"s2", "Mpg fuel economy"}}, 2000, 200,
                                       embed);
    std::string prompt;
    auto backend = std::make_shared<llm::ScriptedBackend>([&](const llm::ChatRequest& r) -> std::optional<std::string> {
        prompt = r.user;
        return "Dataset Summary: cars";
    });
    llm::ChatGateway gw(backend, "m");
    const auto b = summarize_context(gw, kAuto, index, 3, embed);
    EXPECT_EQ(b.dataset_summary, "cars");
    EXPECT_NE(prompt.find("(source: s1)"), std::string::npos);
    EXPECT_NE(prompt.find("Mpg fuel economy"), std::string::npos);
    EXPECT_EQ(gw.calls().front().tag, "summary");
}

TEST(Logs, SamplingCapAndDeterminism) {
    LogRecord rec{"web", "GET <*> took <*> ms", {}};
    for (int i = 0; i < 25; ++i) rec.occurrences.push_back({"t" + std::to_string(i), "raw" + std::to_string(i)});
    const auto a = sample_occurrences(rec, 10, 7);
    EXPECT_EQ(a.size(), 10u);
    const auto b = sample_occurrences(rec, 10, 7);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].raw, b[i].raw);
    for (std::size_t i = 1; i < a.size(); ++i) {
        EXPECT_LT(std::stoi(a[i - 1].timestamp.substr(1)), std::stoi(a[i].timestamp.substr(1)));
    }
    LogRecord few{"web", "x", {{"1", "a"}, {"2", "b"}, {"3", "c"}}};
    EXPECT_EQ(sample_occurrences(few, 10, 7).size(), 3u);
    EXPECT_EQ(strip_template_markers("GET <*> took <*> ms"), "GET took ms");
    const auto lines = render_log_events({few}, 10, 1);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "1 | x | a");
}

TEST(Logs, StoreLoadingAndLogTool) {
    const auto dir = scratch_dir("store");
    std::ofstream(dir / "Weight.log") << "2024-01-01T00:00:00\tT1\tweight sensor 1200\n"
                                         "2024-01-01T00:00:01\tT2\tweight alarm\n"
                                         "2024-01-01T00:00:02\tT1\tweight sensor 1250\n";
    const auto store = load_log_store(dir, kAuto.names);
    ASSERT_EQ(store.at("Weight").size(), 2u);
    EXPECT_EQ(store.at("Weight")[0].occurrences.size(), 2u);

    std::ofstream(dir / "Unknown.log") << "t\tT\traw\n";
    EXPECT_THROW(load_log_store(dir, kAuto.names), DataError);
    fs::remove(dir / "Unknown.log");

    Rig rig;
    rig.backend->push("log_summary", "The role of the entity is to weigh cars.");
    LogTool tool(store, rig.gateway, kAuto);
    const auto docs = tool.fetch("weight logs");
    ASSERT_EQ(docs.size(), 1u);
    EXPECT_EQ(docs[0].source, "log:Weight");
    EXPECT_TRUE(tool.fetch("Weight again").empty());
    EXPECT_EQ(rig.gateway.calls().size(), 1u);
}

TEST(Corpus, RanksByQueryOverlap) {
    const auto dir = scratch_dir("corpus");
    std::ofstream(dir / "a.txt") << "weight of cars";
    std::ofstream(dir / "b.html") << "<p>fuel weight cars mpg</p>";
    std::ofstream(dir / "c.txt") << "unrelated";
    LocalCorpusTool tool(dir, 5);
    const auto docs = tool.fetch("car fuel weight mpg");
    ASSERT_EQ(docs.size(), 2u);
    EXPECT_EQ(docs[0].source, "corpus:b.html");
    EXPECT_TRUE(docs[0].html);
    EXPECT_EQ(docs[1].source, "corpus:a.txt");
}

TEST(Serper, ParsesOrganicResults) {
    const auto doc = nlohmann::json::parse(R"({"organic":[
        {"title":"T1","link":"https://a.org","snippet":"S1"},
        {"title":"T2","link":"https://b.org"},
        {"title":"T3","link":"https://c.org","snippet":"S3"}]})");
    const auto results = SerperWebTool::parse_response(doc, 2);
    ASSERT_EQ(results.size(), 2u);
    EXPECT_EQ(results[1].url, "https://b.org");
    const auto docs = SerperWebTool::to_documents(results);
    EXPECT_EQ(docs[0].body, "T1. S1");
    EXPECT_FALSE(docs[0].html);
    EXPECT_TRUE(SerperWebTool::parse_response(nlohmann::json::object(), 5).empty());
}
