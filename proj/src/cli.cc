#include "sumtag/cli.h"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumtag/bench.h"
#include "sumtag/dataset.h"
#include "sumtag/metrics.h"
#include "sumtag/ner.h"
#include "sumtag/pipeline.h"
#include "sumtag/unicode.h"

namespace sumtag {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Thrown for bad user input; maps to exit status 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { kTable, kJsonLines };

const std::map<std::string, Format> kFormats = {
    {"table", Format::kTable}, {"text", Format::kTable},
    {"json-lines", Format::kJsonLines}};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// Writes to the named file, or to `fallback` when no path is given.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::runtime_error("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::string fixed2(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << round_for_display(v, 2);
  return s.str();
}

json rouge_json(const RougeTriple& t) {
  return {{"precision", round_for_display(t.precision)},
          {"recall", round_for_display(t.recall)},
          {"f1", round_for_display(t.f1)}};
}

json report_json(const EvaluationReport& r) {
  std::vector<double> precisions;
  for (double p : r.bleu4.precisions) precisions.push_back(round_for_display(p, 6));
  return {{"type", "evaluation"},
          {"num_pairs", r.num_pairs},
          {"bleu4",
           {{"bleu", round_for_display(r.bleu4.bleu)},
            {"precisions", precisions},
            {"brevity_penalty", round_for_display(r.bleu4.brevity_penalty, 6)},
            {"candidate_length", r.bleu4.candidate_length},
            {"effective_reference_length", r.bleu4.effective_reference_length},
            {"max_order", r.bleu4.max_order}}},
          {"rouge1", rouge_json(r.rouge1)},
          {"rouge2", rouge_json(r.rouge2)},
          {"rougeL", rouge_json(r.rougeL)}};
}

void print_report_table(std::ostream& out, const EvaluationReport& r,
                        const std::string& title) {
  out << title << " (" << r.num_pairs << " pairs)\n";
  out << std::left << std::setw(10) << "metric" << std::right << std::setw(11)
      << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1" << '\n';
  out << std::left << std::setw(10) << "BLEU-4" << std::right << std::setw(11)
      << "-" << std::setw(9) << "-" << std::setw(9) << fixed2(r.bleu4.bleu) << '\n';
  const std::pair<const char*, const RougeTriple*> rows[] = {
      {"ROUGE-1", &r.rouge1}, {"ROUGE-2", &r.rouge2}, {"ROUGE-L", &r.rougeL}};
  for (const auto& [name, t] : rows) {
    out << std::left << std::setw(10) << name << std::right << std::setw(11)
        << fixed2(t->precision) << std::setw(9) << fixed2(t->recall)
        << std::setw(9) << fixed2(t->f1) << '\n';
  }
  out << "BLEU precisions:";
  for (double p : r.bleu4.precisions) out << ' ' << std::setprecision(6) << p;
  out << "  BP: " << std::setprecision(6) << r.bleu4.brevity_penalty
      << "  lengths: " << r.bleu4.candidate_length << '/'
      << r.bleu4.effective_reference_length << '\n';
}

json labels_json(const LabelSet& labels) {
  json out = json::array();
  for (EntityLabel l : labels) out.push_back(to_string(l));
  return out;
}

json spans_json(const std::vector<EntitySpan>& spans) {
  json out = json::array();
  for (const auto& s : spans) out.push_back(to_json(s));
  return out;
}

RunConfig resolve_config(const std::string& config_flag, const EnvLookup& env) {
  std::optional<fs::path> path;
  if (!config_flag.empty()) {
    path = config_flag;
  } else if (auto v = env(kConfigEnv)) {
    path = *v;
  }
  RunConfig config = path ? load_run_config(*path) : default_run_config();
  apply_env(config, env);
  return config;
}

// Flags shared by commands that talk to a backend; empty means "not given".
struct BackendFlags {
  std::string kind;
  std::string base_url;
  std::string model;
  std::string lexicon;
  std::string tmpl;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--backend", kind,
                    "http | mock-first-sentence | mock-echo-keywords | "
                    "mock-latency-model");
    cmd->add_option("--base-url", base_url, "Chat-completion server base URL");
    cmd->add_option("--model", model, "Model name sent to the server");
    cmd->add_option("--lexicon", lexicon, "Lexicon file for mock-echo-keywords");
    cmd->add_option("--prompt-template", tmpl,
                    "Prompt template with one {text} placeholder");
  }
  void apply(RunConfig& c) const {
    if (!kind.empty()) c.backend.kind = kind;
    if (!base_url.empty()) c.backend.base_url = base_url;
    if (!model.empty()) c.backend.model = model;
    if (!lexicon.empty()) c.backend.lexicon = fs::path(lexicon);
    if (!tmpl.empty()) c.prompt_template = tmpl;
  }
};

struct Cli {
  Cli(std::ostream& o, std::ostream& e, EnvLookup lookup)
      : out(o), err(e), env(std::move(lookup)) {}

  std::ostream& out;
  std::ostream& err;
  EnvLookup env;

  // evaluate
  std::string predictions, references, baseline, scheme = "auto";
  bool no_lowercase = false, no_nfc = false;
  std::size_t max_order = 4;
  std::string smoothing = "none";
  double epsilon = 1e-9;

  // split
  std::string dataset, output_dir, ratios = "8:1:1";
  std::uint64_t seed = 0;
  std::optional<double> holdout;

  // shared
  std::string config_path, input, output, gazetteer, input_format = "text",
      field = "summary";
  bool case_sensitive = false;
  std::optional<std::size_t> batch_size, parallelism, warmup;
  std::vector<std::size_t> batch_sizes;
  std::string plot_data, workload;
  Format format = Format::kTable;
  BackendFlags backend_flags;

  int evaluate();
  int split();
  int summarize_cmd();
  int tag();
  int run();
  int bench();
};

TokenizationScheme pick_scheme(const std::string& name, bool lowercase, bool nfc,
                               const std::vector<TextPair>& pairs) {
  TokenizationScheme s;
  s.lowercase = lowercase;
  s.normalization = nfc ? Normalization::kNFC : Normalization::kNone;
  if (name == "word") {
    s.kind = TokenKind::kWordLevel;
  } else if (name == "char") {
    s.kind = TokenKind::kCharLevel;
  } else {
    s.kind = TokenKind::kWordLevel;
    for (const auto& p : pairs) {
      if (unicode::contains_cjk(p.candidate) || unicode::contains_cjk(p.reference)) {
        s.kind = TokenKind::kCharLevel;
        break;
      }
    }
  }
  return s;
}

std::vector<TextPair> read_pairs(const std::string& cand_path,
                                 const std::string& ref_path) {
  auto cands = read_lines(cand_path);
  auto refs = read_lines(ref_path);
  if (cands.size() != refs.size()) {
    throw ValidationError(cand_path + " has " + std::to_string(cands.size()) +
                          " lines but " + ref_path + " has " +
                          std::to_string(refs.size()));
  }
  if (cands.empty()) throw ValidationError("no prediction/reference pairs");
  std::vector<TextPair> pairs;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    pairs.push_back({std::move(cands[i]), std::move(refs[i])});
  }
  return pairs;
}

int Cli::evaluate() {
  const auto pairs = read_pairs(predictions, references);
  const TokenizationScheme s = pick_scheme(scheme, !no_lowercase, !no_nfc, pairs);
  MetricOptions options;
  options.bleu.max_order = max_order;
  options.bleu.smoothing =
      smoothing == "epsilon" ? Smoothing::kAddEpsilon : Smoothing::kNone;
  options.bleu.epsilon = epsilon;
  const EvaluationReport report = evaluate_corpus(pairs, s, options);

  std::optional<EvaluationReport> before;
  if (!baseline.empty()) {
    before = evaluate_corpus(read_pairs(baseline, references), s, options);
  }

  Output o(output, out);
  if (format == Format::kJsonLines) {
    json j = report_json(report);
    j["scheme"] = to_string(s.kind);
    o.stream() << j.dump() << '\n';
    if (before) {
      json b = report_json(*before);
      b["type"] = "baseline";
      b["scheme"] = to_string(s.kind);
      o.stream() << b.dump() << '\n';
      const EvaluationDelta d = compare_reports(*before, report);
      o.stream() << json{{"type", "delta"},
                         {"bleu4", round_for_display(d.bleu4)},
                         {"rouge1", rouge_json(d.rouge1)},
                         {"rouge2", rouge_json(d.rouge2)},
                         {"rougeL", rouge_json(d.rougeL)}}
                        .dump()
                 << '\n';
    }
  } else {
    print_report_table(o.stream(), report,
                       "evaluation [" + to_string(s.kind) + "-level]");
    if (before) {
      print_report_table(o.stream(), *before, "baseline");
      const EvaluationDelta d = compare_reports(*before, report);
      o.stream() << "change: BLEU-4 " << fixed2(d.bleu4) << ", ROUGE-1 F1 "
                 << fixed2(d.rouge1.f1) << ", ROUGE-2 F1 " << fixed2(d.rouge2.f1)
                 << ", ROUGE-L F1 " << fixed2(d.rougeL.f1) << '\n';
    }
  }
  return kExitOk;
}

int Cli::split() {
  const auto examples = load_instruction_dataset(dataset);
  json meta;
  if (holdout) {
    const HoldoutSplit h = holdout_split(examples, *holdout, seed);
    write_holdout_manifests(h, *holdout, seed, output_dir);
    meta = {{"type", "holdout"}, {"rest", h.rest.size()},
            {"heldout", h.heldout.size()}, {"seed", seed}};
  } else {
    const DatasetSplit s = split_dataset(examples, parse_ratios(ratios), seed);
    write_split_manifests(s, output_dir);
    meta = {{"type", "split"}, {"train", s.train.size()},
            {"validation", s.validation.size()}, {"test", s.test.size()},
            {"seed", seed}};
  }
  meta["output_dir"] = output_dir;
  if (format == Format::kJsonLines) {
    out << meta.dump() << '\n';
  } else if (holdout) {
    out << "rest " << meta["rest"] << ", heldout " << meta["heldout"]
        << " (seed " << seed << ") -> " << output_dir << '\n';
  } else {
    out << "train " << meta["train"] << ", validation " << meta["validation"]
        << ", test " << meta["test"] << " (seed " << seed << ") -> "
        << output_dir << '\n';
  }
  return kExitOk;
}

int Cli::summarize_cmd() {
  RunConfig config = resolve_config(config_path, env);
  backend_flags.apply(config);
  if (batch_size) config.batch_size = *batch_size;
  validate_run_config(config, ConfigUse::kSummarize);
  auto backend = make_backend(config.backend);

  std::vector<Document> docs;
  try {
    auto source = open_document_source(input);
    docs = read_all(*source);
  } catch (const SourceError& e) {
    throw ValidationError(e.what());
  }
  const BatchRun run = summarize_batch(docs, config.batch_size, config.prompt(),
                                       config.generation, *backend);
  Output o(output, out);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& slot = run.slots[i];
    if (const auto* r = std::get_if<SummaryResult>(&slot)) {
      if (format == Format::kJsonLines) {
        o.stream() << json{{"document_id", r->document_id},
                           {"summary", r->summary_text},
                           {"latency_ms", to_seconds(r->latency) * 1000.0},
                           {"backend", r->backend_name}}
                          .dump()
                   << '\n';
      } else {
        o.stream() << r->document_id << '\t' << r->summary_text << '\n';
      }
    } else {
      const auto& e = std::get<BackendError>(slot);
      if (format == Format::kJsonLines) {
        o.stream() << json{{"document_id", docs[i].id},
                           {"error_kind", to_string(e.kind())},
                           {"error", e.what()}}
                          .dump()
                   << '\n';
      } else {
        o.stream() << docs[i].id << "\tERROR(" << to_string(e.kind())
                   << "): " << e.what() << '\n';
      }
    }
  }
  const std::size_t failures = run.failures();
  if (failures > 0) {
    err << failures << " of " << docs.size() << " documents failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int Cli::tag() {
  const Gazetteer g = Gazetteer::load(gazetteer, case_sensitive);
  const auto lines = read_lines(input);
  Output o(output, out);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (input_format == "jsonl") {
      if (trim(lines[i]).empty()) continue;
      json record;
      try {
        record = json::parse(lines[i]);
      } catch (const json::exception& e) {
        throw ValidationError(input + ":" + std::to_string(i + 1) + ": " + e.what());
      }
      if (!record.is_object() || !record.contains(field) ||
          !record[field].is_string()) {
        throw ValidationError(input + ":" + std::to_string(i + 1) +
                              ": missing string field '" + field + "'");
      }
      const TaggedText t = tag_entities(record[field].get<std::string>(), g);
      record["bracketed"] = render_bracketed(t);
      record["spans"] = spans_json(t.spans);
      record["topic_tags"] = labels_json(t.tags);
      if (format == Format::kJsonLines) {
        o.stream() << record.dump() << '\n';
      } else {
        o.stream() << record["bracketed"].get<std::string>() << '\n';
      }
    } else {
      const TaggedText t = tag_entities(lines[i], g);
      if (format == Format::kJsonLines) {
        o.stream() << json{{"line", i + 1},
                           {"text", t.text},
                           {"bracketed", render_bracketed(t)},
                           {"spans", spans_json(t.spans)},
                           {"topic_tags", labels_json(t.tags)}}
                          .dump()
                   << '\n';
      } else {
        o.stream() << render_bracketed(t) << '\n';
      }
    }
  }
  return kExitOk;
}

int Cli::run() {
  RunConfig config = resolve_config(config_path, env);
  backend_flags.apply(config);
  if (!input.empty()) config.input = fs::path(input);
  if (!gazetteer.empty()) config.gazetteer = fs::path(gazetteer);
  if (parallelism) config.parallelism = *parallelism;
  validate_run_config(config, ConfigUse::kRun);

  auto backend = make_backend(config.backend);
  const Gazetteer g = Gazetteer::load(*config.gazetteer, config.case_sensitive);
  std::map<std::string, std::unique_ptr<JsonlFileSink>> owned;
  SinkMap sinks;
  for (const auto& [name, path] : config.sinks) {
    owned[name] = std::make_unique<JsonlFileSink>(path);
    sinks[name] = owned[name].get();
  }
  std::unique_ptr<DocumentSource> source;
  try {
    source = open_document_source(*config.input);
  } catch (const SourceError& e) {
    throw ValidationError(e.what());
  }
  const RunStats stats =
      run_pipeline(*source, sinks, *backend, g, config.pipeline_config());

  if (format == Format::kJsonLines) {
    json j = to_json(stats);
    j["type"] = "run";
    out << j.dump() << '\n';
  } else {
    out << "ingested " << stats.ingested << ", delivered " << stats.delivered
        << ", defaulted " << stats.defaulted << ", failed " << stats.failed
        << '\n';
    for (const auto& f : stats.failures) {
      out << "  failed " << f.document_id << " [" << f.stage << "]: " << f.cause
          << '\n';
    }
  }
  if (stats.source_error) {
    err << "source read failed: " << *stats.source_error << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int Cli::bench() {
  RunConfig config = resolve_config(config_path, env);
  backend_flags.apply(config);
  if (!workload.empty()) config.workload = fs::path(workload);
  if (!batch_sizes.empty()) config.bench_batch_sizes = batch_sizes;
  if (warmup) config.warmup_steps = *warmup;
  validate_run_config(config, ConfigUse::kBench);

  auto backend = make_backend(config.backend);
  std::vector<Document> docs;
  try {
    auto source = open_document_source(*config.workload);
    docs = read_all(*source);
  } catch (const SourceError& e) {
    throw ValidationError(e.what());
  }

  BenchmarkOptions options;
  options.batch_sizes = config.bench_batch_sizes;
  options.warmup_steps = config.warmup_steps;
  options.prompt = config.prompt();
  options.generation = config.generation;
  BenchmarkSweep sweep;
  try {
    sweep = run_benchmark(*backend, docs, options);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }

  {
    Output o(output, out);
    if (format == Format::kJsonLines) {
      o.stream() << sweep_to_jsonl(sweep);
    } else {
      o.stream() << "backend " << sweep.backend_name << ", workload "
                 << docs.size() << " documents\n";
      o.stream() << std::right << std::setw(10) << "batch" << std::setw(8)
                 << "steps" << std::setw(14) << "elapsed_s" << std::setw(16)
                 << "samples/s" << std::setw(14) << "steps/s" << '\n';
      for (const auto& p : sweep.points) {
        o.stream() << std::setw(10) << p.batch_size << std::setw(8)
                   << p.total_steps << std::setw(14) << std::setprecision(6)
                   << to_seconds(p.elapsed) << std::setw(16) << p.samples_per_sec
                   << std::setw(14) << p.steps_per_sec
                   << (p.batch_size == kOperatingBatchSize ? "  <- operating point" : "")
                   << '\n';
      }
    }
  }
  if (!plot_data.empty()) {
    std::ofstream plot(plot_data, std::ios::binary | std::ios::trunc);
    if (!plot) throw std::runtime_error("cannot write " + plot_data);
    plot << sweep_plot_data(sweep);
  }
  if (!sweep.complete) {
    err << "sweep incomplete: " << sweep.error.value_or("unknown error") << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err, const EnvLookup& env) {
  Cli cli(out, err, env);
  CLI::App app{"Summarize documents, tag entities, route, and evaluate.", "sumtag"};
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", cli.format, "Output format: table | json-lines")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case).description(""))
        ->option_text("{table,json-lines}");
  };

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against references");
  evaluate->add_option("--predictions", cli.predictions, "One prediction per line")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("--references", cli.references, "One reference per line")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("--baseline", cli.baseline,
                       "Baseline predictions to compare against")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--scheme", cli.scheme, "Tokenization: word | char | auto")
      ->check(CLI::IsMember({"word", "char", "auto"}));
  evaluate->add_flag("--no-lowercase", cli.no_lowercase, "Keep case");
  evaluate->add_flag("--no-nfc", cli.no_nfc, "Skip NFC normalization");
  evaluate->add_option("--max-order", cli.max_order, "BLEU max n-gram order")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--smoothing", cli.smoothing, "BLEU smoothing: none | epsilon")
      ->check(CLI::IsMember({"none", "epsilon"}));
  evaluate->add_option("--epsilon", cli.epsilon, "Constant for epsilon smoothing")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--output", cli.output, "Write the report here");
  add_format(evaluate);

  auto* split = app.add_subcommand("split", "Partition an instruction dataset");
  split->add_option("--dataset", cli.dataset, "Alpaca-style JSON array")
      ->required()->check(CLI::ExistingFile);
  split->add_option("--output-dir", cli.output_dir, "Manifest directory")->required();
  split->add_option("--ratios", cli.ratios, "train:validation:test");
  split->add_option("--seed", cli.seed, "Shuffle seed");
  split->add_option("--holdout", cli.holdout,
                    "Hold out this fraction instead of a three-way split")
      ->check(CLI::Range(0.0, 1.0));
  add_format(split);

  auto* summarize = app.add_subcommand("summarize", "Summarize documents");
  summarize->add_option("--input", cli.input, "JSONL documents or a directory")
      ->required()->check(CLI::ExistingPath);
  summarize->add_option("--config", cli.config_path, "Config file")
      ->check(CLI::ExistingFile);
  summarize->add_option("--batch-size", cli.batch_size, "Documents per step")
      ->check(CLI::PositiveNumber);
  summarize->add_option("--output", cli.output, "Write results here");
  cli.backend_flags.add_to(summarize);
  add_format(summarize);

  auto* tag = app.add_subcommand("tag", "Tag entities and print bracketed text");
  tag->add_option("--input", cli.input, "Text (one item per line) or JSONL")
      ->required()->check(CLI::ExistingFile);
  tag->add_option("--gazetteer", cli.gazetteer, "surface<TAB>LABEL file")
      ->required()->check(CLI::ExistingFile);
  tag->add_option("--input-format", cli.input_format, "text | jsonl")
      ->check(CLI::IsMember({"text", "jsonl"}));
  tag->add_option("--field", cli.field, "JSONL field to tag");
  tag->add_flag("--case-sensitive", cli.case_sensitive, "Match case exactly");
  tag->add_option("--output", cli.output, "Write results here");
  add_format(tag);

  auto* run = app.add_subcommand("run", "Run the full pipeline");
  run->add_option("--config", cli.config_path, "Config file")->check(CLI::ExistingFile);
  run->add_option("--input", cli.input, "Override the configured input")
      ->check(CLI::ExistingPath);
  run->add_option("--gazetteer", cli.gazetteer, "Override the configured gazetteer")
      ->check(CLI::ExistingFile);
  run->add_option("--parallelism", cli.parallelism, "Concurrent documents")
      ->check(CLI::PositiveNumber);
  cli.backend_flags.add_to(run);
  add_format(run);

  auto* bench = app.add_subcommand("bench", "Throughput sweep over batch sizes");
  bench->add_option("--config", cli.config_path, "Config file")->check(CLI::ExistingFile);
  bench->add_option("--workload", cli.workload, "Workload documents (JSONL or dir)")
      ->check(CLI::ExistingPath);
  bench->add_option("--batch-sizes", cli.batch_sizes, "Comma-separated batch sizes")
      ->delimiter(',');
  bench->add_option("--warmup", cli.warmup, "Untimed warmup steps per batch size");
  bench->add_option("--output", cli.output, "Write the sweep report here");
  bench->add_option("--plot-data", cli.plot_data, "Write plot columns here");
  cli.backend_flags.add_to(bench);
  add_format(bench);

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
      app.get_subcommand_no_throw(args[0]) == nullptr) {
    err << "error: unknown subcommand '" << args[0] << "'\n\n" << app.help();
    return kExitValidation;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    out << (sub ? sub->help() : app.help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kExitValidation;
  }

  try {
    if (evaluate->parsed()) return cli.evaluate();
    if (split->parsed()) return cli.split();
    if (summarize->parsed()) return cli.summarize_cmd();
    if (tag->parsed()) return cli.tag();
    if (run->parsed()) return cli.run();
    if (bench->parsed()) return cli.bench();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DatasetError& e) {
    err << "dataset error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NerError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace sumtag
