#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "coderag/chat_client.hpp"
#include "coderag/code_tokens.hpp"
#include "coderag/completion.hpp"
#include "coderag/errors.hpp"
#include "coderag/identifier_request.hpp"
#include "coderag/prompt.hpp"
#include "coderag/token_budget.hpp"
#include "support/fake_http.hpp"
#include "support/fixtures.hpp"

using namespace coderag;
namespace ts = testing_support;

namespace {

/// Whitespace-separated words.
class WordCounter : public TokenCounter {
 public:
  std::size_t count(std::string_view text) const override {
    std::size_t n = 0;
    bool in_word = false;
    for (char c : text) {
      const bool space = c == ' ' || c == '\n' || c == '\t';
      if (!space && !in_word) ++n;
      in_word = !space;
    }
    return n;
  }
  std::string name() const override { return "words"; }
};

PromptOptions words(std::size_t budget) {
  PromptOptions o;
  o.budget = budget;
  o.counter = std::make_shared<WordCounter>();
  return o;
}

Corpus snippet_corpus() {
  return Corpus({ts::make_unit(UnitKind::FuncDef, "one", "int one() { return 1; }", "a.cpp", 1),
                 ts::make_unit(UnitKind::FuncDef, "two", "int two() { return 2 + 0; }", "a.cpp", 2),
                 ts::make_unit(UnitKind::FuncDef, "three", "int three() { return 3 + 0 + 0; }", "a.cpp", 3),
                 ts::make_unit(UnitKind::FuncDef, "four", "int four() { return 4 + 0 + 0 + 0; }", "a.cpp", 4),
                 ts::make_unit(UnitKind::FuncDef, "five", "int five() { return 5; }", "a.cpp", 5)});
}

std::vector<ScoredSnippet> ranked(std::vector<DocId> docs) {
  std::vector<ScoredSnippet> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ScoredSnippet s;
    s.doc = docs[i];
    s.rank = i + 1;
    s.score = 1.0 - 0.1 * static_cast<double>(i);
    out.push_back(s);
  }
  return out;
}

std::string chat_body(const std::string& content, const std::string& id = "resp-1") {
  return nlohmann::json{{"id", id}, {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

ChatClientConfig chat_config() {
  ChatClientConfig c;
  c.endpoint = "http://127.0.0.1:9/v1/chat/completions";
  c.model = "test-model";
  c.token_env = "CODERAG_TEST_LLM_TOKEN";
  c.max_retries = 1;
  return c;
}

RetryPolicy recording_sleep(std::vector<std::chrono::milliseconds>& slept) {
  RetryPolicy p;
  p.sleep = [&slept](std::chrono::milliseconds d) { slept.push_back(d); };
  return p;
}

}  // namespace

TEST(TokenBudget, Examples) {
  EXPECT_EQ(enforce_token_budget("", 10).token_count, 0u);
  EXPECT_EQ(count_code_tokens("int add"), 2u);
  EXPECT_EQ(enforce_token_budget("int add", 2).token_count, 2u);
  EXPECT_TRUE(enforce_token_budget("int add", 2).pass);
  EXPECT_FALSE(enforce_token_budget("int add", 1).pass);
  EXPECT_THROW(enforce_token_budget("x", 0), Error);
}

TEST(TokenBudget, CountersByName) {
  EXPECT_EQ(make_token_counter("code")->count("a + b;"), count_code_tokens("a + b;"));
  EXPECT_EQ(make_token_counter("chars4")->count("abcde"), 2u);
  EXPECT_EQ(make_token_counter("chars4")->count(""), 0u);
  EXPECT_THROW(make_token_counter("tiktoken"), Error);
}

TEST(Templates, BuiltinsAreWellFormed) {
  for (TemplateId id : {TemplateId::MsgDef, TemplateId::ClassDef, TemplateId::FuncDec, TemplateId::FuncDef,
                        TemplateId::Similar}) {
    for (Language lang : {Language::En, Language::Zh}) {
      EXPECT_FALSE(PromptTemplate::builtin(id, lang).check().has_value()) << to_string(id) << to_string(lang);
    }
    EXPECT_EQ(parse_template_id(to_string(id)), id);
  }
  EXPECT_FALSE(parse_template_id("snippet").has_value());
}

TEST(Templates, MalformedTemplatesRejected) {
  PromptTemplate t = PromptTemplate::builtin(TemplateId::Similar, Language::En);
  t.body = "// intro\n{snippets}\n{snippets}\n{current_code}";
  EXPECT_TRUE(t.check().has_value());
  t.body = "intro without comment\n{snippets}\n{current_code}";
  EXPECT_TRUE(t.check().has_value());
  t.body = "// intro\n{knowledge}\n{current_code}";
  EXPECT_TRUE(t.check().has_value());
  const auto path = std::filesystem::temp_directory_path() / "coderag_bad_template.txt";
  std::ofstream(path) << "// only instructions\n{current_code}\n";
  try {
    PromptTemplate::from_file(TemplateId::FuncDef, Language::En, path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TemplateMismatch);
  }
  std::ofstream(path) << "// custom\n{knowledge}\n// now finish\n{current_code}\n";
  EXPECT_EQ(PromptTemplate::from_file(TemplateId::FuncDef, Language::En, path).body,
            "// custom\n{knowledge}\n// now finish\n{current_code}");
  std::filesystem::remove(path);
}

TEST(IdentifierPrompt, KnowledgePrecedesContext) {
  const CodeUnit msg = ts::make_unit(UnitKind::MsgDef, "User", "message User {\n  string name = 1;\n}", "u.proto");
  const std::string context = "void Greet(const User& u) {";
  const auto b = build_identifier_prompt(UnitKind::MsgDef, {prompt_item(0, msg)}, context,
                                         PromptTemplate::builtin(TemplateId::MsgDef, Language::En));
  const auto msg_at = b.text.find("message User");
  const auto ctx_at = b.text.find(context);
  ASSERT_NE(msg_at, std::string::npos);
  ASSERT_NE(ctx_at, std::string::npos);
  EXPECT_LT(msg_at, ctx_at);
  EXPECT_EQ(b.included, std::vector<DocId>{0});
  EXPECT_FALSE(b.truncated);
  EXPECT_EQ(find_prompt_item(b.text, 1), msg.text);
}

TEST(IdentifierPrompt, EmptyKnowledgeIsContextOnly) {
  const auto b = build_identifier_prompt(UnitKind::FuncDef, {}, "int main() {",
                                         PromptTemplate::builtin(TemplateId::FuncDef, Language::En));
  EXPECT_TRUE(b.included.empty());
  EXPECT_TRUE(b.base);
  EXPECT_EQ(b.text, render_base_prompt("int main() {", Language::En));
}

TEST(IdentifierPrompt, OverflowDropsLaterUnitsWhole) {
  const auto tmpl = PromptTemplate::builtin(TemplateId::FuncDef, Language::En);
  const Corpus c = snippet_corpus();
  std::vector<PromptItem> items;
  for (DocId d = 0; d < 4; ++d) items.push_back(prompt_item(d, c.at(d)));
  const std::string context = "int total() {";
  const auto all = build_identifier_prompt(UnitKind::FuncDef, items, context, tmpl, words(100000));
  ASSERT_EQ(all.included.size(), 4u);
  const auto two = build_identifier_prompt(UnitKind::FuncDef, {items[0], items[1]}, context, tmpl, words(100000));
  const auto b = build_identifier_prompt(UnitKind::FuncDef, items, context, tmpl, words(two.token_count));
  EXPECT_EQ(b.included, (std::vector<DocId>{0, 1}));
  EXPECT_EQ(b.dropped, 2u);
  EXPECT_TRUE(b.truncated);
  EXPECT_EQ(b.text, two.text);
  EXPECT_LE(b.token_count, b.budget);
  EXPECT_THROW(build_identifier_prompt(UnitKind::MsgDef, items, context, tmpl), Error);
}

TEST(SimilarityPrompt, FourSnippetsInRankOrder) {
  const Corpus c = snippet_corpus();
  const auto b = build_similarity_prompt(ranked({3, 1, 0, 2}), c, "int total() {",
                                         PromptTemplate::builtin(TemplateId::Similar, Language::En));
  EXPECT_EQ(b.included, (std::vector<DocId>{3, 1, 0, 2}));
  EXPECT_EQ(find_prompt_item(b.text, 1), c.at(3).text);
  EXPECT_EQ(find_prompt_item(b.text, 4), c.at(2).text);
  EXPECT_FALSE(find_prompt_item(b.text, 5).has_value());
  EXPECT_FALSE(b.truncated);
}

TEST(SimilarityPrompt, FourthSnippetOverflows) {
  const Corpus c = snippet_corpus();
  const auto tmpl = PromptTemplate::builtin(TemplateId::Similar, Language::En);
  const auto three = build_similarity_prompt(ranked({0, 1, 2}), c, "int total() {", tmpl, words(100000));
  const auto four = build_similarity_prompt(ranked({0, 1, 2, 3}), c, "int total() {", tmpl, words(100000));
  ASSERT_LT(three.token_count, four.token_count);
  const auto b = build_similarity_prompt(ranked({0, 1, 2, 3}), c, "int total() {", tmpl, words(four.token_count - 1));
  EXPECT_EQ(b.included, (std::vector<DocId>{0, 1, 2}));
  EXPECT_EQ(b.text, three.text);
  EXPECT_EQ(b.dropped, 1u);
}

TEST(SimilarityPrompt, AtMostFourSnippets) {
  const Corpus c = snippet_corpus();
  const auto b = build_similarity_prompt(ranked({0, 1, 2, 3, 4}), c, "x",
                                         PromptTemplate::builtin(TemplateId::Similar, Language::En));
  EXPECT_EQ(b.included.size(), 4u);
}

TEST(SimilarityPrompt, ZeroSnippetsEqualsBase) {
  const auto b = build_similarity_prompt({}, snippet_corpus(), "int total() {",
                                         PromptTemplate::builtin(TemplateId::Similar, Language::En));
  EXPECT_TRUE(b.base);
  EXPECT_EQ(b.text, build_base_prompt("int total() {", Language::En).text);
}

TEST(SimilarityPrompt, DroppingIsMonotoneInBudget) {
  const Corpus c = snippet_corpus();
  const auto tmpl = PromptTemplate::builtin(TemplateId::Similar, Language::En);
  std::size_t last = 0;
  for (std::size_t budget = 1; budget < 120; ++budget) {
    try {
      const auto b = build_similarity_prompt(ranked({0, 1, 2, 3}), c, "int total() {\n  int a = 0;", tmpl, words(budget));
      EXPECT_LE(b.token_count, budget);
      EXPECT_GE(b.included.size(), last);
      last = b.included.size();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Config);
      EXPECT_EQ(last, 0u);
    }
  }
  EXPECT_EQ(last, 4u);
}

TEST(SimilarityPrompt, LongContextCutFromTheFront) {
  std::string context;
  for (int i = 0; i < 50; ++i) context += "int v" + std::to_string(i) + " = " + std::to_string(i) + ";\n";
  context += "return v49;";
  const auto b = build_base_prompt(context, Language::En, words(40));
  EXPECT_TRUE(b.context_truncated);
  EXPECT_LE(b.token_count, 40u);
  EXPECT_NE(b.text.find("return v49;"), std::string::npos);
  EXPECT_EQ(b.text.find("int v0 "), std::string::npos);
}

TEST(SimilarityPrompt, RenderingIsDeterministic) {
  const Corpus c = snippet_corpus();
  const auto tmpl = PromptTemplate::builtin(TemplateId::Similar, Language::Zh);
  EXPECT_EQ(build_similarity_prompt(ranked({0, 2}), c, "int t() {", tmpl).text,
            build_similarity_prompt(ranked({0, 2}), c, "int t() {", tmpl).text);
}

TEST(ExtractCode, Cases) {
  EXPECT_EQ(extract_code("Here:\n```cpp\nint x = 1;\n```\nDone."), "int x = 1;");
  EXPECT_EQ(extract_code("```\na\n```\n```\nb\n```"), "a");
  EXPECT_EQ(extract_code("Sure. int f() { return g({1}); } hope it helps"), "Sure. int f() { return g({1}); }");
  EXPECT_EQ(extract_code("return 1;"), "return 1;");
  EXPECT_EQ(extract_code(""), "");
}

TEST(Complete, MockClientEcho) {
  MockChatClient client([](const ChatRequest&) { return "```cpp\nint canned() { return 7; }\n```"; }, "mock-x");
  PromptBundle bundle = build_base_prompt("int canned() {", Language::En);
  const auto rec = complete(bundle, client, "ex-1");
  EXPECT_EQ(rec.generated_code, "int canned() { return 7; }");
  EXPECT_EQ(rec.model, "mock-x");
  EXPECT_EQ(rec.example_id, "ex-1");
  EXPECT_EQ(rec.response_id, "mock-ex-1");
  EXPECT_EQ(client.calls(), 1u);
}

TEST(ChatClient, RetriesAfter429AndRecordsIt) {
  setenv("CODERAG_TEST_LLM_TOKEN", "tok-123", 1);
  auto transport = std::make_shared<ts::ScriptedTransport>();
  transport->push(ts::status(429, "rate limited", 2.0));
  transport->push(ts::ok(chat_body("```cpp\nint z;\n```")));
  std::vector<std::chrono::milliseconds> slept;
  std::vector<std::string> log;
  auto cfg = chat_config();
  cfg.log = [&log](const std::string& line) { log.push_back(line); };
  HttpChatClient client(cfg, transport, recording_sleep(slept));
  const auto resp = client.chat(ChatRequest{"complete this", 0.0, "ex"});
  EXPECT_EQ(resp.content, "```cpp\nint z;\n```");
  EXPECT_EQ(resp.retries, 1);
  EXPECT_EQ(resp.response_id, "resp-1");
  ASSERT_EQ(slept.size(), 1u);
  EXPECT_GE(slept[0], std::chrono::milliseconds(2000));
  const auto calls = transport->calls();
  ASSERT_EQ(calls.size(), 2u);
  EXPECT_EQ(calls[0].bearer_token, "tok-123");
  const auto sent = nlohmann::json::parse(calls[0].body);
  EXPECT_EQ(sent.at("model"), "test-model");
  EXPECT_EQ(sent.at("temperature"), 0.0);
  EXPECT_EQ(sent.at("messages").size(), 1u);
  EXPECT_EQ(sent.at("messages")[0].at("role"), "user");
  EXPECT_FALSE(sent.contains("request_id"));
  ASSERT_EQ(log.size(), 2u);
  for (const auto& line : log) EXPECT_EQ(line.find("tok-123"), std::string::npos);
  unsetenv("CODERAG_TEST_LLM_TOKEN");
}

TEST(ChatClient, ServerErrorsExhaustRetries) {
  auto transport = std::make_shared<ts::ScriptedTransport>([](const std::string&) { return ts::status(502, "bad gateway"); });
  std::vector<std::chrono::milliseconds> slept;
  HttpChatClient client(chat_config(), transport, recording_sleep(slept));
  try {
    client.chat(ChatRequest{"x", 0.0, "ex"});
    FAIL();
  } catch (const HttpError& e) {
    EXPECT_EQ(e.code(), ErrorCode::LlmHttp);
    EXPECT_EQ(e.status(), 502);
    EXPECT_EQ(e.body_excerpt(), "bad gateway");
  }
  EXPECT_EQ(transport->calls().size(), 2u);
  EXPECT_EQ(slept.size(), 1u);
}

TEST(ChatClient, ClientErrorNotRetried) {
  auto transport = std::make_shared<ts::ScriptedTransport>([](const std::string&) { return ts::status(401, "no"); });
  std::vector<std::chrono::milliseconds> slept;
  HttpChatClient client(chat_config(), transport, recording_sleep(slept));
  EXPECT_THROW(client.chat(ChatRequest{"x", 0.0, "ex"}), HttpError);
  EXPECT_EQ(transport->calls().size(), 1u);
}

TEST(ChatClient, TimeoutAndUnreachable) {
  std::vector<std::chrono::milliseconds> slept;
  auto t1 = std::make_shared<ts::ScriptedTransport>([](const std::string&) { return ts::timed_out(); });
  HttpChatClient c1(chat_config(), t1, recording_sleep(slept));
  try {
    c1.chat(ChatRequest{"x", 0.0, "ex"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Timeout);
  }
  auto t2 = std::make_shared<ts::ScriptedTransport>(
      [](const std::string&) { return HttpResult{0, "", std::nullopt, false, "connection refused"}; });
  HttpChatClient c2(chat_config(), t2, recording_sleep(slept));
  try {
    c2.chat(ChatRequest{"x", 0.0, "ex"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LlmUnavailable);
  }
}

TEST(ChatClient, MalformedBody) {
  auto transport = std::make_shared<ts::ScriptedTransport>([](const std::string&) { return ts::ok("{\"choices\": []}"); });
  std::vector<std::chrono::milliseconds> slept;
  HttpChatClient client(chat_config(), transport, recording_sleep(slept));
  EXPECT_THROW(client.chat(ChatRequest{"x", 0.0, "ex"}), HttpError);
}

TEST(RetryDelay, ExponentialWithCap) {
  RetryPolicy p;
  EXPECT_EQ(retry_delay(p, 0, std::nullopt), std::chrono::milliseconds(500));
  EXPECT_EQ(retry_delay(p, 2, std::nullopt), std::chrono::milliseconds(2000));
  EXPECT_EQ(retry_delay(p, 10, std::nullopt), std::chrono::milliseconds(8000));
  EXPECT_EQ(retry_delay(p, 0, 3.0), std::chrono::milliseconds(3000));
  EXPECT_TRUE(is_retryable_status(429));
  EXPECT_TRUE(is_retryable_status(503));
  EXPECT_FALSE(is_retryable_status(404));
}

TEST(NeedToLookup, StaticFallbackFindsCallsAndTypes) {
  const std::string code = "void Handle() {\n  MqRequest req;\n  req.set_id(1);\n  SendToMq(req);\n";
  const auto r = need_to_lookup(code, nullptr);
  EXPECT_TRUE(r.fallback);
  EXPECT_TRUE(r.functions.count("SendToMq"));
  EXPECT_TRUE(r.classes.count("MqRequest") || r.messages.count("MqRequest"));
  EXPECT_FALSE(r.functions.count("Handle"));
}

TEST(NeedToLookup, SelfContainedCodeNeedsNothing) {
  const auto r = need_to_lookup("int square(int x) {\n  int y = x * x;\n  return y;\n}", nullptr);
  EXPECT_TRUE(r.empty());
}

TEST(NeedToLookup, ModelReplyUsedWhenValid) {
  MockChatClient client([](const ChatRequest&) {
    return "```json\n{\"messages\": [\"MqRequest\"], \"functions\": [\"SendToMq\", \"SendToMq\"], \"classes\": []}\n```";
  });
  const auto r = need_to_lookup("SendToMq(req);", &client);
  EXPECT_FALSE(r.fallback);
  EXPECT_EQ(r.messages, std::set<std::string>{"MqRequest"});
  EXPECT_EQ(r.functions, std::set<std::string>{"SendToMq"});
}

TEST(NeedToLookup, InvalidTwiceFallsBackFlagged) {
  MockChatClient client([](const ChatRequest&) { return "I think you need SendToMq."; });
  const auto r = need_to_lookup("MqRequest req;\nSendToMq(req);", &client);
  EXPECT_EQ(client.calls(), 2u);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.warnings.size(), 2u);
  EXPECT_TRUE(r.functions.count("SendToMq"));
}

TEST(NeedToLookup, ParseReplyRejectsBadShapes) {
  IdentifierRequest r;
  EXPECT_FALSE(parse_identifier_reply("[]", r));
  EXPECT_FALSE(parse_identifier_reply("{\"messages\": 3, \"functions\": [], \"classes\": []}", r));
  EXPECT_TRUE(parse_identifier_reply("{\"messages\": [], \"functions\": [\"f\"], \"classes\": [\"f\"]}", r));
  EXPECT_EQ(r.functions.size() + r.classes.size(), 1u);
}
