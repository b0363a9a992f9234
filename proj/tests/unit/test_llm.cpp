#include <gtest/gtest.h>

#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include "matmcd/llm/backends.hpp"
#include "matmcd/llm/cassette.hpp"
#include "matmcd/llm/gateway.hpp"
#include "matmcd/prompt/template.hpp"
#include "matmcd/prompt/templates.hpp"
#include "matmcd/util/error.hpp"

using namespace matmcd;
using namespace matmcd::llm;

namespace fs = std::filesystem;

namespace {

ChatRequest req(std::string user, std::string tag = "t") {
    ChatRequest r;
    r.user = std::move(user);
    r.model = "m";
    r.tag = std::move(tag);
    return r;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "matmcd_llm_tests";
    fs::create_directories(dir);
    const auto p = dir / name;
    fs::remove(p);
    return p;
}

}  // namespace

TEST(Sha256, KnownDigests) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(RequestKey, WhitespaceInsensitiveButTemperatureSensitive) {
    auto a = req("hello   world\n");
    auto b = req(" hello world");
    EXPECT_EQ(request_key(a), request_key(b));
    b.tag = "other";
    EXPECT_EQ(request_key(a), request_key(b));
    b.temperature = 0.7;
    EXPECT_NE(request_key(a), request_key(b));
    b = a;
    b.system = "sys";
    EXPECT_NE(request_key(a), request_key(b));
}

TEST(Scripted, PerTagFifoThenUntaggedThenResponder) {
    auto backend = std::make_shared<ScriptedBackend>([](const ChatRequest& r) -> std::optional<std::string> {
        if (r.tag == "echo") return "echo:" + r.user;
        return std::nullopt;
    });
    backend->push("a", "first");
    backend->push("a", "second");
    backend->push("shared");
    ChatGateway gw(backend, "m");
    EXPECT_EQ(gw.chat(req("x", "a")).content, "first");
    EXPECT_EQ(gw.chat(req("x", "a")).content, "second");
    EXPECT_EQ(gw.chat(req("x", "a")).content, "shared");
    EXPECT_EQ(gw.chat(req("hi", "echo")).content, "echo:hi");
    EXPECT_THROW(gw.chat(req("x", "a")), GatewayError);
    EXPECT_EQ(gw.calls().size(), 5u);
}

TEST(Gateway, RejectsEmptyCompletionAndEmptyPrompt) {
    auto backend = std::make_shared<ScriptedBackend>();
    backend->push("");
    ChatGateway gw(backend, "m");
    EXPECT_THROW(gw.chat(req("x")), GatewayError);
    EXPECT_THROW(gw.chat(req("")), GatewayError);
}

TEST(Gateway, ModelIsFilledFromGateway) {
    std::string seen;
    auto backend = std::make_shared<ScriptedBackend>([&](const ChatRequest& r) -> std::optional<std::string> {
        seen = r.model;
        return "ok";
    });
    ChatGateway gw(backend, "gpt-4o");
    auto r = req("x");
    r.model.clear();
    gw.chat(r);
    EXPECT_EQ(seen, "gpt-4o");
}

TEST(Retry, EscalatesTemperatureAfterFirstAttempt) {
    auto backend = std::make_shared<ScriptedBackend>();
    backend->push("bad");
    backend->push("bad");
    backend->push("good");
    ChatGateway gw(backend, "m");
    const auto r = gw.retry_with_escalation(req("x"), [](const std::string& s) { return s == "good"; });
    EXPECT_EQ(r.content, "good");
    const auto calls = gw.calls();
    ASSERT_EQ(calls.size(), 3u);
    EXPECT_DOUBLE_EQ(calls[0].temperature, 0.5);
    EXPECT_DOUBLE_EQ(calls[1].temperature, 0.7);
    EXPECT_DOUBLE_EQ(calls[2].temperature, 0.7);
}

TEST(Retry, ExhaustionCarriesLastRawResponse) {
    auto backend = std::make_shared<ScriptedBackend>();
    for (int i = 0; i < 3; ++i) backend->push("junk " + std::to_string(i));
    ChatGateway gw(backend, "m");
    try {
        gw.retry_with_escalation(req("x"), [](const std::string&) { return false; });
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.raw(), "junk 2");
    }
    EXPECT_EQ(gw.calls().size(), 3u);
}

TEST(Cassette, RoundTripAndOrderedRepeats) {
    const auto path = scratch("roundtrip.json");
    {
        auto cassette = std::make_shared<Cassette>(path);
        auto inner = std::make_shared<ScriptedBackend>();
        inner->push("one");
        inner->push("two");
        inner->push("other");
        ChatGateway gw(std::make_shared<RecordingBackend>(inner, cassette), "m");
        gw.chat(req("same"));
        gw.chat(req("same"));
        gw.chat(req("different"));
        EXPECT_EQ(cassette->size(), 3u);
    }
    auto cassette = std::make_shared<Cassette>(path);
    ASSERT_EQ(cassette->size(), 3u);
    ChatGateway gw(std::make_shared<ReplayBackend>(cassette), "m");
    EXPECT_EQ(gw.chat(req("different")).content, "other");
    EXPECT_EQ(gw.chat(req("same")).content, "one");
    EXPECT_EQ(gw.chat(req("same")).content, "two");
    EXPECT_EQ(gw.chat(req("same")).content, "two");
    EXPECT_EQ(gw.chat(req("same")).backend, BackendKind::Replay);
}

TEST(Cassette, StrictMissNamesKeyAndTag) {
    auto cassette = std::make_shared<Cassette>();
    ChatGateway gw(std::make_shared<ReplayBackend>(cassette), "m");
    const auto r = req("unseen", "knowledge");
    try {
        gw.chat(r);
        FAIL() << "expected GatewayError";
    } catch (const GatewayError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find(request_key(r)), std::string::npos);
        EXPECT_NE(msg.find("knowledge"), std::string::npos);
    }
}

TEST(Cassette, LenientMissFallsThroughAndRecords) {
    auto cassette = std::make_shared<Cassette>();
    auto fallback = std::make_shared<ScriptedBackend>();
    fallback->push("fresh");
    ChatGateway gw(std::make_shared<ReplayBackend>(cassette, false, fallback), "m");
    EXPECT_EQ(gw.chat(req("new")).content, "fresh");
    EXPECT_EQ(cassette->size(), 1u);
    EXPECT_EQ(gw.chat(req("new")).content, "fresh");
}

TEST(Cassette, MalformedDocumentsRejected) {
    EXPECT_THROW(Cassette::parse(nlohmann::json::object()), GatewayError);
    EXPECT_THROW(Cassette::parse(nlohmann::json::array({{{"key", 1}}})), GatewayError);
}

TEST(LiveBackend, BodyAndContentShapes) {
    auto r = req("question");
    r.system = "be brief";
    const auto body = LiveBackend::request_body(r);
    EXPECT_EQ(body["messages"].size(), 2u);
    EXPECT_EQ(body["messages"][0]["role"], "system");
    EXPECT_EQ(body["temperature"], 0.5);
    const auto ok = nlohmann::json::parse(R"({"choices":[{"message":{"content":"hi"}}]})");
    EXPECT_EQ(LiveBackend::extract_content(ok), "hi");
    EXPECT_THROW(LiveBackend::extract_content(nlohmann::json::parse(R"({"error":"x"})")), GatewayError);
}

TEST(LiveBackend, RetriesServerErrorsAgainstLocalServer) {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions", [&](const httplib::Request& in, httplib::Response& out) {
        if (++hits == 1) {
            out.status = 503;
            return;
        }
        const auto body = nlohmann::json::parse(in.body);
        nlohmann::json reply = {{"choices", {{{"message", {{"content", "echo " + body["messages"][0]["content"].get<std::string>()}}}}}}};
        out.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    LiveBackendOptions opts;
    opts.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    opts.api_key_env = "MATMCD_TEST_UNSET_KEY";
    opts.transport.initial_backoff = std::chrono::milliseconds(1);
    ChatGateway gw(std::make_shared<LiveBackend>(opts), "m");
    EXPECT_EQ(gw.chat(req("ping")).content, "echo ping");
    EXPECT_EQ(hits.load(), 2);

    server.stop();
    worker.join();
}

TEST(Template, RenderSinglePass) {
    EXPECT_EQ(prompt::render("a {{x}} b {{y}}", {{"x", "{{y}}"}, {"y", "2"}}), "a {{y}} b 2");
    EXPECT_THROW(prompt::render("{{x}}", {}), Error);
    EXPECT_THROW(prompt::render("plain", {{"x", "1"}}), Error);
    EXPECT_THROW(prompt::render("{{x", {{"x", "1"}}), Error);
}

TEST(Template, LintReportsMissing) {
    EXPECT_EQ(prompt::lint("{{a}} {{b}}", {"a", "b"}), std::vector<std::string>{});
    EXPECT_EQ(prompt::lint("{{a}}", {"a", "c"}), std::vector<std::string>{"c"});
}

TEST(Template, BuiltInTemplatesExposeTheirSlots) {
    for (const auto& tpl : prompt::all_templates()) {
        EXPECT_TRUE(prompt::lint(tpl.text, tpl.required).empty()) << tpl.name;
        EXPECT_EQ(prompt::placeholders(tpl.text).size(), tpl.required.size()) << tpl.name;
    }
}
