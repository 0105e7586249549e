#include "sumtag/pipeline.h"

#include <random>

#include <gtest/gtest.h>

#include "pipeline_sim.h"
#include "sumtag/mock_backends.h"
#include "test_util.h"

namespace sumtag {
namespace {

using L = EntityLabel;

Document doc(std::string id, std::string body) {
  return Document{std::move(id), std::move(body), LanguageHint::kAuto, {}};
}

GenerationParams quick() {
  GenerationParams p;
  p.retries = 0;
  p.initial_backoff = std::chrono::milliseconds(0);
  return p;
}

Gazetteer algo_gazetteer() {
  Gazetteer g;
  g.add("算法", L::kAlgorithm);
  g.add("黑客活动", L::kConceptTerm);
  g.add("澳大利亚", L::kLocation);
  return g;
}

TaggedSummary summary_with(LabelSet tags) {
  TaggedSummary s;
  s.document_id = "d";
  s.summary = "x";
  s.topic_tags = std::move(tags);
  return s;
}

class BrokenSink : public Sink {
 public:
  void write(const nlohmann::json&) override { throw std::runtime_error("disk full"); }
};

class BrokenSource : public DocumentSource {
 public:
  explicit BrokenSource(std::size_t good) : good_(good) {}
  std::optional<Document> next() override {
    if (served_ == good_) throw SourceError("stream reset");
    ++served_;
    return doc("d" + std::to_string(served_), "内容，算法。尾巴。");
  }

 private:
  std::size_t good_;
  std::size_t served_ = 0;
};

TEST(ProcessDocument, TagsTheSummary) {
  FirstSentenceBackend backend;
  auto out = process_document(doc("d1", "新的算法检测黑客活动。澳大利亚。"), backend,
                              PromptTemplate::default_summary(), quick(),
                              algo_gazetteer());
  const auto& s = std::get<TaggedSummary>(out);
  EXPECT_EQ(s.summary, "新的算法检测黑客活动。");
  EXPECT_EQ(s.topic_tags, (LabelSet{L::kAlgorithm, L::kConceptTerm}));
  EXPECT_EQ(s.topic_tags, s.tagged.tags);
}

TEST(ProcessDocument, NoMatchesStillValid) {
  FirstSentenceBackend backend;
  auto out = process_document(doc("d1", "Nothing to see."), backend,
                              PromptTemplate::default_summary(), quick(),
                              algo_gazetteer());
  EXPECT_TRUE(std::get<TaggedSummary>(out).topic_tags.empty());
}

TEST(ProcessDocument, BackendFailureBecomesRecord) {
  FirstSentenceBackend inner;
  auto backend = FaultInjectingBackend::failing_ids(inner, {"d1"});
  auto out = process_document(doc("d1", "算法。"), backend,
                              PromptTemplate::default_summary(), quick(),
                              algo_gazetteer());
  const auto& f = std::get<FailedDocument>(out);
  EXPECT_EQ(f.document_id, "d1");
  EXPECT_EQ(f.stage, "summarize");
  EXPECT_EQ(f.error_kind, "http_status");
  EXPECT_FALSE(f.cause.empty());
}

TEST(Route, Examples) {
  const std::vector<RoutingRule> rules = {
      {"algo", {L::kAlgorithm}, "security-desk"},
      {"geo", {L::kLocation}, "geo-desk"},
      {"algo-too", {L::kAlgorithm, L::kConceptTerm}, "security-desk"},
  };
  EXPECT_EQ(route(summary_with({L::kAlgorithm, L::kConceptTerm}), rules, "default"),
            (std::set<std::string>{"security-desk"}));
  EXPECT_EQ(route(summary_with({L::kPerson}), rules, "default"),
            (std::set<std::string>{"default"}));
  EXPECT_EQ(route(summary_with({L::kAlgorithm, L::kLocation}), rules, "default"),
            (std::set<std::string>{"security-desk", "geo-desk"}));
  EXPECT_EQ(route(summary_with({}), {}, "default"), (std::set<std::string>{"default"}));
}

TEST(Route, IdempotentAndMonotone) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<RoutingRule> rules;
    for (std::size_t i = testutil::uniform(rng, 0, 4); i > 0; --i) {
      RoutingRule r{"r" + std::to_string(i), {}, "s" + std::to_string(testutil::uniform(rng, 0, 3))};
      for (std::size_t k = testutil::uniform(rng, 1, 3); k > 0; --k) {
        r.required_labels.insert(kAllLabels[testutil::uniform(rng, 0, 5)]);
      }
      rules.push_back(r);
    }
    LabelSet tags;
    for (std::size_t k = testutil::uniform(rng, 0, 4); k > 0; --k) {
      tags.insert(kAllLabels[testutil::uniform(rng, 0, 5)]);
    }
    const auto before = route(summary_with(tags), rules, "default");
    ASSERT_EQ(before, route(summary_with(tags), rules, "default"));
    LabelSet more = tags;
    more.insert(kAllLabels[testutil::uniform(rng, 0, 5)]);
    const auto after = route(summary_with(more), rules, "default");
    for (const auto& d : before) {
      if (d != "default") {
        ASSERT_TRUE(after.count(d)) << d;
      }
    }
  }
}

struct Fixture {
  MemorySink desk, other, fallback, failed;
  SinkMap sinks{{"desk", &desk}, {"other", &other}, {"default", &fallback},
                {"failed", &failed}};
  PipelineConfig config;
  Fixture() {
    config.rules = {{"algo", {L::kAlgorithm}, "desk"}};
    config.generation = quick();
  }
};

TEST(RunPipeline, AllDelivered) {
  Fixture f;
  FirstSentenceBackend backend;
  VectorSource src({doc("a", "算法一。x"), doc("b", "算法二。x"), doc("c", "算法三。x")});
  auto st = run_pipeline(src, f.sinks, backend, algo_gazetteer(), f.config);
  EXPECT_EQ(st.ingested, 3u);
  EXPECT_EQ(st.delivered, 3u);
  EXPECT_EQ(st.defaulted, 0u);
  EXPECT_EQ(st.failed, 0u);
  EXPECT_EQ(f.desk.records().size(), 3u);
  EXPECT_TRUE(f.fallback.records().empty());
  const auto rec = f.desk.records()[0];
  EXPECT_TRUE(rec.contains("bracketed"));
  EXPECT_EQ(rec["topic_tags"], nlohmann::json::array({"ALGORITHM"}));
}

TEST(RunPipeline, OneFailure) {
  Fixture f;
  FirstSentenceBackend inner;
  auto backend = FaultInjectingBackend::failing_ids(inner, {"b"});
  VectorSource src({doc("a", "算法一。x"), doc("b", "算法二。x"), doc("c", "算法三。x")});
  auto st = run_pipeline(src, f.sinks, backend, algo_gazetteer(), f.config);
  EXPECT_EQ(st.ingested, 3u);
  EXPECT_EQ(st.delivered, 2u);
  EXPECT_EQ(st.defaulted, 0u);
  EXPECT_EQ(st.failed, 1u);
  ASSERT_EQ(f.failed.records().size(), 1u);
  EXPECT_EQ(f.failed.records()[0]["document_id"], "b");
}

TEST(RunPipeline, EmptySource) {
  Fixture f;
  FirstSentenceBackend backend;
  VectorSource src({});
  auto st = run_pipeline(src, f.sinks, backend, algo_gazetteer(), f.config);
  EXPECT_EQ(st.ingested + st.delivered + st.defaulted + st.failed, 0u);
  EXPECT_TRUE(f.desk.records().empty());
  EXPECT_TRUE(f.failed.records().empty());
}

TEST(RunPipeline, DefaultedAndIngestFailures) {
  Fixture f;
  FirstSentenceBackend backend;
  VectorSource src({doc("a", "nothing."), doc("a", "算法。"), doc("", "算法。"),
                    doc("e", "   ")});
  auto st = run_pipeline(src, f.sinks, backend, algo_gazetteer(), f.config);
  EXPECT_EQ(st.ingested, 4u);
  EXPECT_EQ(st.defaulted, 1u);
  EXPECT_EQ(st.failed, 3u);
  EXPECT_TRUE(st.conserved());
  EXPECT_EQ(f.fallback.records().size(), 1u);
}

TEST(RunPipeline, SinkFailureCountsAsFailed) {
  Fixture f;
  BrokenSink broken;
  f.sinks["desk"] = &broken;
  FirstSentenceBackend backend;
  VectorSource src({doc("a", "算法。"), doc("b", "plain.")});
  auto st = run_pipeline(src, f.sinks, backend, algo_gazetteer(), f.config);
  EXPECT_EQ(st.failed, 1u);
  EXPECT_EQ(st.defaulted, 1u);
  ASSERT_EQ(st.failures.size(), 1u);
  EXPECT_EQ(st.failures[0].stage, "sink");
  EXPECT_NE(st.failures[0].cause.find("disk full"), std::string::npos);
}

TEST(RunPipeline, SourceErrorAbortsWithPartialStats) {
  Fixture f;
  FirstSentenceBackend backend;
  BrokenSource src(2);
  auto st = run_pipeline(src, f.sinks, backend, algo_gazetteer(), f.config);
  ASSERT_TRUE(st.source_error.has_value());
  EXPECT_NE(st.source_error->find("stream reset"), std::string::npos);
  EXPECT_EQ(st.ingested, 2u);
  EXPECT_EQ(st.delivered, 2u);
  EXPECT_TRUE(st.conserved());
}

TEST(RunPipeline, ConfigValidation) {
  Fixture f;
  FirstSentenceBackend backend;
  VectorSource src({});
  auto bad = f.config;
  bad.rules.push_back({"nowhere", {L::kPerson}, "missing"});
  EXPECT_THROW(run_pipeline(src, f.sinks, backend, algo_gazetteer(), bad), ConfigError);
  bad = f.config;
  bad.rules.push_back({"empty", {}, "desk"});
  EXPECT_THROW(run_pipeline(src, f.sinks, backend, algo_gazetteer(), bad), ConfigError);
  SinkMap no_failed = f.sinks;
  no_failed.erase("failed");
  EXPECT_THROW(run_pipeline(src, no_failed, backend, algo_gazetteer(), f.config),
               ConfigError);
}

TEST(RunPipeline, RandomizedConservation) {
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    auto r = testutil::simulate_pipeline_run(rng, 120);
    ASSERT_TRUE(r.problem.empty()) << "trial " << trial << ": " << r.problem;
  }
}

TEST(Sources, JsonlAndDirectory) {
  testutil::TempDir dir;
  testutil::write_file(dir / "docs.jsonl",
                       "{\"id\":\"a\",\"body\":\"算法。\",\"language_hint\":\"zh\"}\n\n"
                       "{\"id\":\"b\",\"body\":\"text\",\"source\":\"feed\"}\n");
  auto docs = read_all(*open_document_source(dir / "docs.jsonl"));
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].language_hint, LanguageHint::kChinese);
  EXPECT_EQ(docs[1].source, "feed");

  std::filesystem::create_directory(dir / "d");
  testutil::write_file(dir / "d" / "b.txt", "second");
  testutil::write_file(dir / "d" / "a.txt", "first");
  auto files = read_all(*open_document_source(dir / "d"));
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].id, "a.txt");
  EXPECT_EQ(files[0].body, "first");

  testutil::write_file(dir / "bad.jsonl", "{\"id\":\"a\",\"body\":\"x\"}\nnot json\n");
  JsonlDocumentSource bad(dir / "bad.jsonl");
  EXPECT_TRUE(bad.next().has_value());
  try {
    bad.next();
    FAIL();
  } catch (const SourceError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST(Sinks, JsonlFileAppends) {
  testutil::TempDir dir;
  {
    JsonlFileSink sink(dir / "out.jsonl");
    sink.write({{"document_id", "a"}});
  }
  {
    JsonlFileSink sink(dir / "out.jsonl");
    sink.write({{"document_id", "b"}});
  }
  EXPECT_EQ(testutil::read_file(dir / "out.jsonl"),
            "{\"document_id\":\"a\"}\n{\"document_id\":\"b\"}\n");
}

}  // namespace
}  // namespace sumtag
