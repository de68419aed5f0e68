// framefill command-line tool.
//
//   framefill ingest corpus.txt other.txt --out stats.tsv
//   framefill train-lm corpus.txt --order 3 --mode sentence --out model.lm
//   framefill complete "pour me some water" --inventory inv.json --scorer lm:model.lm
//   framefill make-scenarios judgments.jsonl --lambda 1 -k 6 --count 500 --out scen.jsonl
//   framefill evaluate judgments.jsonl --scorer random --scorer lm:model.lm --out report.csv
//   framefill sweep judgments.jsonl --scorer lm:model.lm --out sweep.csv --jobs 4

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "framefill/framefill.hpp"

namespace ff = framefill;

namespace {

void log(const std::string& msg) { std::cerr << "framefill: " << msg << '\n'; }

void require_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw ff::Error(ff::ErrorCode::kIo, "no such file '" + path + "'");
}

// The parent directory of an output path must already exist.
void require_writable(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw ff::Error(ff::ErrorCode::kIo, "output directory does not exist for '" + path + "'");
  }
}

// Writes via a temporary file so a failed run never leaves a partial output.
void write_output(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ff::Error(ff::ErrorCode::kIo, "cannot write '" + path + "'");
    out << content;
    if (!out) throw ff::Error(ff::ErrorCode::kIo, "write failed for '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string join(const std::vector<std::string>& xs, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

template <class T>
std::string join_num(const std::vector<T>& xs) {
  std::vector<std::string> s;
  for (const T& x : xs) {
    std::ostringstream o;
    o << x;
    s.push_back(o.str());
  }
  return join(s);
}

struct Common {
  std::string lexicon;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;

  ff::RoleLexicon load_lexicon() const {
    if (lexicon.empty()) return ff::RoleLexicon::default_lexicon();
    return ff::RoleLexicon::load(lexicon);
  }

  std::string lexicon_label() const { return lexicon.empty() ? "<built-in>" : lexicon; }

  std::uint64_t resolved_seed() {
    if (!seed) {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      log("no --seed given, using " + std::to_string(*seed));
    }
    return *seed;
  }
};

void add_lexicon_option(CLI::App* cmd, Common& c) {
  cmd->add_option("--lexicon", c.lexicon, "Role lexicon TSV (default: $FRAMEFILL_LEXICON, then built-in)")
      ->envname("FRAMEFILL_LEXICON");
}

void add_run_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed; picked and logged when absent");
  cmd->add_option("--jobs", c.jobs, "Worker threads for evaluation")->check(CLI::Range(1u, 256u));
}

// Forwards to another scorer under a different name.
class Renamed : public ff::Scorer {
 public:
  Renamed(std::shared_ptr<const ff::Scorer> inner, std::string name) : inner_(std::move(inner)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  bool deterministic() const override { return inner_->deterministic(); }
  double score(const ff::VerbFrame& f) const override { return inner_->score(f); }
  std::vector<double> score_all(std::span<const ff::VerbFrame> frames, std::uint64_t seed) const override {
    return inner_->score_all(frames, seed);
  }

 private:
  std::shared_ptr<const ff::Scorer> inner_;
  std::string name_;
};

struct ScorerSpec {
  std::string kind;
  std::string path;
};

ScorerSpec parse_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  ScorerSpec s{spec.substr(0, colon), colon == std::string::npos ? "" : spec.substr(colon + 1)};
  static const std::set<std::string> kinds = {"lm", "cooccur", "embedding", "relatedness", "random"};
  if (!kinds.count(s.kind)) throw ff::Error(ff::ErrorCode::kInvalidArgument, "unknown scorer '" + s.kind + "'");
  if (s.kind == "random" && !s.path.empty()) {
    throw ff::Error(ff::ErrorCode::kInvalidArgument, "the random scorer takes no artifact");
  }
  if (s.kind != "random" && s.path.empty()) {
    throw ff::Error(ff::ErrorCode::kInvalidArgument, "scorer '" + s.kind + "' needs an artifact: " + s.kind + ":PATH");
  }
  return s;
}

std::shared_ptr<const ff::Scorer> load_scorer(const ScorerSpec& s, const ff::RoleLexicon& lex, std::uint64_t seed) {
  if (s.kind == "random") return std::make_shared<ff::RandomScorer>(seed);
  if (s.kind == "lm") return std::make_shared<ff::LmScorer>(std::make_shared<ff::NGramModel>(ff::NGramModel::load(s.path)), lex);
  if (s.kind == "cooccur") {
    return std::make_shared<ff::CooccurScorer>(std::make_shared<ff::CooccurStats>(ff::CooccurStats::load(s.path)));
  }
  if (s.kind == "embedding") {
    return std::make_shared<ff::EmbeddingScorer>(std::make_shared<ff::EmbeddingTable>(ff::EmbeddingTable::load(s.path)));
  }
  return std::make_shared<ff::RelatednessScorer>(
      std::make_shared<ff::RelatednessTable>(ff::RelatednessTable::load(s.path)));
}

// Loads every scorer; repeated names get a #2, #3 ... suffix. Each scorer's
// own seed is derived from its position, so two random baselines differ.
std::vector<std::shared_ptr<const ff::Scorer>> load_scorers(const std::vector<ScorerSpec>& specs,
                                                            const ff::RoleLexicon& lex, std::uint64_t seed) {
  std::vector<std::shared_ptr<const ff::Scorer>> out;
  std::map<std::string, int> seen;
  for (const auto& s : specs) {
    auto scorer = load_scorer(s, lex, ff::derive_seed(seed, 100 + out.size()));
    const int n = ++seen[scorer->name()];
    if (n > 1) scorer = std::make_shared<Renamed>(scorer, scorer->name() + "#" + std::to_string(n));
    out.push_back(std::move(scorer));
  }
  return out;
}

std::vector<ScorerSpec> checked_specs(const std::vector<std::string>& raw) {
  std::vector<ScorerSpec> specs;
  for (const auto& r : raw) {
    specs.push_back(parse_spec(r));
    if (!specs.back().path.empty()) require_file(specs.back().path);
  }
  return specs;
}

std::vector<const ff::Scorer*> raw_pointers(const std::vector<std::shared_ptr<const ff::Scorer>>& v) {
  std::vector<const ff::Scorer*> out;
  for (const auto& s : v) out.push_back(s.get());
  return out;
}

// --- subcommands -------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> corpora;
  std::string format = "lines";
  std::string out;
  std::string corpus_out;
};

int cmd_ingest(const IngestArgs& a) {
  for (const auto& p : a.corpora) require_file(p);
  require_writable(a.out);
  if (!a.corpus_out.empty()) require_writable(a.corpus_out);
  const auto format = *ff::parse_corpus_format(a.format);
  log("ingest corpora=" + join(a.corpora) + " format=" + a.format + " out=" + a.out +
      (a.corpus_out.empty() ? "" : " corpus-out=" + a.corpus_out));

  std::vector<std::string> warnings;
  std::vector<ff::Document> docs;
  for (const auto& p : a.corpora) docs.push_back(ff::ingest(p, format, &warnings));
  for (const auto& w : warnings) log("warning: " + w);

  std::ostringstream stats;
  ff::CooccurStats::build(docs).write_tsv(stats);
  write_output(a.out, stats.str());
  if (!a.corpus_out.empty()) {
    std::ostringstream text;
    for (const auto& d : docs) {
      for (const auto& s : d.sentences) text << join(s, " ") << '\n';
    }
    write_output(a.corpus_out, text.str());
  }
  std::size_t sentences = 0;
  for (const auto& d : docs) sentences += d.sentences.size();
  log("read " + std::to_string(sentences) + " sentences");
  return 0;
}

struct TrainArgs {
  std::vector<std::string> corpora;
  std::string format = "lines";
  int order = 3;
  std::string mode = "sentence";
  double discount = 0.75;
  std::string out;
};

int cmd_train_lm(const TrainArgs& a, const Common& c) {
  for (const auto& p : a.corpora) require_file(p);
  if (!c.lexicon.empty()) require_file(c.lexicon);
  require_writable(a.out);
  ff::TrainingConfig cfg;
  cfg.order = a.order;
  cfg.mode = *ff::parse_linearization_mode(a.mode);
  cfg.discount = a.discount;
  cfg.validate();
  if (cfg.mode == ff::LinearizationMode::kFrame && c.lexicon.empty()) {
    throw ff::Error(ff::ErrorCode::kInvalidArgument, "frame mode needs --lexicon or FRAMEFILL_LEXICON");
  }
  log("train-lm corpora=" + join(a.corpora) + " format=" + a.format + " order=" + std::to_string(a.order) +
      " mode=" + a.mode + " discount=" + std::to_string(a.discount) + " lexicon=" + c.lexicon_label() +
      " out=" + a.out);

  const auto format = *ff::parse_corpus_format(a.format);
  std::vector<std::string> warnings;
  std::vector<ff::Document> docs;
  for (const auto& p : a.corpora) docs.push_back(ff::ingest(p, format, &warnings));
  for (const auto& w : warnings) log("warning: " + w);
  const auto lex = c.load_lexicon();
  const auto model = ff::NGramModel::train(docs, cfg, &lex);
  std::ostringstream out;
  model.write(out);
  write_output(a.out, out.str());
  log("vocabulary " + std::to_string(model.vocabulary().size()) + " tokens");
  return 0;
}

struct CompleteArgs {
  std::string instruction;
  std::string inventory;
  std::string scorer = "random";
  bool plan = false;
  std::string templates;
};

int cmd_complete(const CompleteArgs& a, Common& c) {
  require_file(a.inventory);
  if (!c.lexicon.empty()) require_file(c.lexicon);
  const auto specs = checked_specs({a.scorer});
  if (a.plan) {
    if (a.templates.empty()) throw ff::Error(ff::ErrorCode::kInvalidArgument, "--plan needs --templates");
    require_file(a.templates);
  }
  const auto seed = c.resolved_seed();
  log("complete instruction=\"" + a.instruction + "\" inventory=" + a.inventory + " scorer=" + a.scorer +
      " lexicon=" + c.lexicon_label() + " seed=" + std::to_string(seed) +
      (a.plan ? " templates=" + a.templates : ""));

  const auto lex = c.load_lexicon();
  const auto inv = ff::ObjectInventory::load(a.inventory);
  const auto scorer = load_scorers(specs, lex, seed).front();
  const auto frame = ff::complete(ff::tokenize(a.instruction), inv, *scorer, lex);
  nlohmann::json j;
  if (a.plan) {
    auto templates = ff::TemplateSet::load(a.templates);
    templates.validate(lex);
    j = ff::to_json(ff::plan(frame, inv, templates));
  } else {
    j["frame"] = ff::to_json(frame);
  }
  j["scorer"] = scorer->name();
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct ScenarioArgs {
  std::string judgments;
  double lambda = 1.0;
  int k = 6;
  std::size_t count = 500;
  std::string out;
};

std::vector<ff::PlausibilityRecord> load_records(const std::string& path) {
  std::vector<std::string> warnings;
  auto recs = ff::load_judgments(path, &warnings);
  if (!warnings.empty()) {
    log("warning: " + warnings.front() +
        (warnings.size() > 1 ? " (and " + std::to_string(warnings.size() - 1) + " more)" : ""));
  }
  return recs;
}

int cmd_make_scenarios(const ScenarioArgs& a, Common& c) {
  require_file(a.judgments);
  require_writable(a.out);
  ff::validate_lambda(a.lambda);
  const auto seed = c.resolved_seed();
  log("make-scenarios judgments=" + a.judgments + " lambda=" + join_num(std::vector{a.lambda}) +
      " k=" + std::to_string(a.k) + " count=" + std::to_string(a.count) + " seed=" + std::to_string(seed) +
      " out=" + a.out);
  const auto scenarios = ff::make_scenarios(ff::split(load_records(a.judgments), a.lambda),
                                            static_cast<std::size_t>(a.k), a.count, seed);
  std::ostringstream out;
  ff::write_scenarios(out, scenarios);
  write_output(a.out, out.str());
  return 0;
}

struct EvaluateArgs {
  std::string judgments;
  std::string scenarios;
  std::vector<std::string> scorers;
  double lambda = 1.0;
  int k = 6;
  std::size_t count = 500;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a, Common& c) {
  if (a.judgments.empty() == a.scenarios.empty()) {
    throw ff::Error(ff::ErrorCode::kInvalidArgument, "give exactly one of JUDGMENTS or --scenarios");
  }
  require_file(a.judgments.empty() ? a.scenarios : a.judgments);
  if (!c.lexicon.empty()) require_file(c.lexicon);
  const auto specs = checked_specs(a.scorers);
  require_writable(a.out);
  ff::validate_lambda(a.lambda);
  const auto seed = c.resolved_seed();
  log("evaluate " +
      (a.judgments.empty() ? "scenarios=" + a.scenarios
                           : "judgments=" + a.judgments + " lambda=" + join_num(std::vector{a.lambda}) +
                                 " k=" + std::to_string(a.k) + " count=" + std::to_string(a.count)) +
      " scorers=" + join(a.scorers) + " seed=" + std::to_string(seed) + " jobs=" + std::to_string(c.jobs) +
      " lexicon=" + c.lexicon_label() + " out=" + a.out);

  std::vector<ff::Scenario> scenarios;
  if (a.judgments.empty()) {
    std::ifstream in(a.scenarios, std::ios::binary);
    scenarios = ff::read_scenarios(in, a.scenarios);
  } else {
    scenarios = ff::make_scenarios(ff::split(load_records(a.judgments), a.lambda), static_cast<std::size_t>(a.k),
                                   a.count, ff::derive_seed(seed, 0));
  }
  const auto scorers = load_scorers(specs, c.load_lexicon(), seed);
  std::ostringstream out;
  out << ff::kReportHeader << '\n';
  for (const auto& s : scorers) {
    ff::EvalOptions opts{ff::derive_seed(seed, 1), c.jobs, a.lambda};
    const auto report = ff::evaluate(*s, scenarios, opts);
    ff::write_report_rows(out, report);
    log(s->name() + " overall accuracy " + std::to_string(report.overall.accuracy()));
  }
  write_output(a.out, out.str());
  return 0;
}

struct SweepArgs {
  std::string judgments;
  std::vector<std::string> scorers;
  std::vector<double> lambdas;
  std::vector<int> ks;
  int fixed_k = 6;
  double fixed_lambda = 1.0;
  std::size_t count = 500;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, Common& c) {
  require_file(a.judgments);
  if (!c.lexicon.empty()) require_file(c.lexicon);
  const auto specs = checked_specs(a.scorers);
  require_writable(a.out);
  ff::SweepConfig cfg;
  if (!a.lambdas.empty()) cfg.lambdas = a.lambdas;
  if (!a.ks.empty()) cfg.ks = a.ks;
  cfg.fixed_k = a.fixed_k;
  cfg.fixed_lambda = a.fixed_lambda;
  cfg.scenarios = a.count;
  cfg.jobs = c.jobs;
  cfg.seed = c.resolved_seed();
  cfg.validate();
  log("sweep judgments=" + a.judgments + " scorers=" + join(a.scorers) + " lambdas=" + join_num(cfg.lambdas) +
      " ks=" + join_num(cfg.ks) + " fixed-k=" + std::to_string(cfg.fixed_k) +
      " fixed-lambda=" + join_num(std::vector{cfg.fixed_lambda}) + " count=" + std::to_string(cfg.scenarios) +
      " seed=" + std::to_string(cfg.seed) + " jobs=" + std::to_string(cfg.jobs) + " lexicon=" + c.lexicon_label() +
      " out=" + a.out);

  const auto scorers = load_scorers(specs, c.load_lexicon(), cfg.seed);
  const auto ptrs = raw_pointers(scorers);
  const auto cells = ff::sweep(ptrs, load_records(a.judgments), cfg);
  for (const auto& cell : cells) {
    if (cell.skipped) log("skipped lambda=" + join_num(std::vector{cell.lambda}) + " k=" + std::to_string(cell.k) +
                          ": " + cell.skip_reason);
  }
  std::ostringstream out;
  ff::write_sweep_csv(out, cells, ptrs);
  write_output(a.out, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verb-frame completion and plausibility evaluation"};
  app.require_subcommand(1);
  Common common;

  IngestArgs ingest;
  auto* ing = app.add_subcommand("ingest", "Tokenize corpora and write co-occurrence statistics");
  ing->add_option("corpora", ingest.corpora, "Corpus files")->required();
  ing->add_option("--format", ingest.format, "lines or recipe")->check(CLI::IsMember({"lines", "recipe"}));
  ing->add_option("--out,-o", ingest.out, "Statistics TSV")->required();
  ing->add_option("--corpus-out", ingest.corpus_out, "Also write the tokenized corpus, one sentence per line");

  TrainArgs train;
  auto* tr = app.add_subcommand("train-lm", "Train an n-gram model on one or more corpora");
  tr->add_option("corpora", train.corpora, "Corpus files, concatenated")->required();
  tr->add_option("--format", train.format, "lines or recipe")->check(CLI::IsMember({"lines", "recipe"}));
  tr->add_option("--order", train.order, "n-gram order");
  tr->add_option("--mode", train.mode, "sentence or frame")->check(CLI::IsMember({"sentence", "frame"}));
  tr->add_option("--discount", train.discount, "Absolute discount in (0,1)");
  tr->add_option("--out,-o", train.out, "Model file")->required();
  add_lexicon_option(tr, common);

  CompleteArgs complete;
  auto* co = app.add_subcommand("complete", "Fill the missing role of an instruction; JSON on stdout");
  co->add_option("instruction", complete.instruction)->required();
  co->add_option("--inventory", complete.inventory, "Object inventory JSON")->required();
  co->add_option("--scorer", complete.scorer, "Scorer spec, name[:artifact]");
  co->add_flag("--plan", complete.plan, "Also emit waypoints");
  co->add_option("--templates", complete.templates, "Motion templates TSV");
  add_lexicon_option(co, common);
  add_run_options(co, common);

  ScenarioArgs scen;
  auto* ms = app.add_subcommand("make-scenarios", "Build evaluation scenarios as JSON lines");
  ms->add_option("judgments", scen.judgments, "Judgments JSONL")->required();
  ms->add_option("--lambda", scen.lambda);
  ms->add_option("-k", scen.k, "Candidates per scenario");
  ms->add_option("--count", scen.count, "Number of scenarios");
  ms->add_option("--out,-o", scen.out)->required();
  add_run_options(ms, common);

  EvaluateArgs eval;
  auto* ev = app.add_subcommand("evaluate", "Score scenarios and write a per-predicate CSV");
  ev->add_option("judgments", eval.judgments, "Judgments JSONL");
  ev->add_option("--scenarios", eval.scenarios, "Pre-built scenarios instead of judgments");
  ev->add_option("--scorer", eval.scorers, "Scorer spec, name[:artifact]; repeatable")->required();
  ev->add_option("--lambda", eval.lambda);
  ev->add_option("-k", eval.k);
  ev->add_option("--count", eval.count);
  ev->add_option("--out,-o", eval.out)->required();
  add_lexicon_option(ev, common);
  add_run_options(ev, common);

  SweepArgs sw;
  auto* swc = app.add_subcommand("sweep", "Evaluate over the lambda and k axes");
  swc->add_option("judgments", sw.judgments, "Judgments JSONL")->required();
  swc->add_option("--scorer", sw.scorers, "Scorer spec, name[:artifact]; repeatable")->required();
  swc->add_option("--lambdas", sw.lambdas, "Lambda axis (at --fixed-k)")->delimiter(',');
  swc->add_option("--ks", sw.ks, "k axis (at --fixed-lambda)")->delimiter(',');
  swc->add_option("--fixed-k", sw.fixed_k);
  swc->add_option("--fixed-lambda", sw.fixed_lambda);
  swc->add_option("--count", sw.count, "Scenarios per cell");
  swc->add_option("--out,-o", sw.out)->required();
  add_lexicon_option(swc, common);
  add_run_options(swc, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ing->parsed()) return cmd_ingest(ingest);
    if (tr->parsed()) return cmd_train_lm(train, common);
    if (co->parsed()) return cmd_complete(complete, common);
    if (ms->parsed()) return cmd_make_scenarios(scen, common);
    if (ev->parsed()) return cmd_evaluate(eval, common);
    if (swc->parsed()) return cmd_sweep(sw, common);
  } catch (const ff::Error& e) {
    log(std::string("error: ") + e.what());
    return 2;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return 2;
  }
  return 1;
}
