#include "stm/cli.hpp"

#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "stm/analytics.hpp"
#include "stm/config.hpp"
#include "stm/detail/strings.hpp"
#include "stm/error.hpp"
#include "stm/eval.hpp"
#include "stm/io.hpp"
#include "stm/snapshot.hpp"
#include "stm/synth.hpp"
#include "stm/train.hpp"

namespace stm::cli {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

// Every key a config file may set. Generation keys feed `generate`, model and schedule
// keys feed `train`.
const std::set<std::string> kConfigKeys = {
    // shared shape
    "doc_types", "source_types", "topics",
    // generate
    "docs", "vocab_size", "h_t", "h_s", "h_z", "h_w", "separation", "mean_extra_sources", "mean_words",
    "source_word_fraction", "blocked_gamma", "sentence_length", "start_year", "span_months",
    "doc_type_proportions", "clamp_fraction",
    // train
    "doc_type_prior", "source_type_prior", "topic_prior", "word_prior", "sweeps", "burn_in", "lag", "chains",
    "exact_block", "min_count"};

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  std::string labels_file;
};

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint32_t crc_of_file(const std::string& path) {
  const auto bytes = detail::read_file(path);
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

std::string hex32(std::uint32_t x) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", x);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

LabelSpace load_labels(const std::string& path) {
  return path.empty() ? LabelSpace::make_default() : LabelSpace::load(path);
}

/// Config file values, then explicitly given flags on top.
Config load_config(const CLI::App& cmd, const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& flag_keys) {
  Config cfg = path.empty() ? Config{} : Config::load(path);
  cfg.require_known(kConfigKeys);
  for (const auto& [flag, key] : flag_keys) {
    const auto* opt = cmd.get_option(flag);
    if (opt->count() == 0) continue;
    if (opt->get_expected_max() == 0) {
      cfg.set(key, "true", flag);
    } else {
      cfg.set(key, opt->results().back(), flag);
    }
  }
  return cfg;
}

Eigen::VectorXd prior_vector(const Config& cfg, const std::string& key, int size, double fallback) {
  auto values = cfg.get_doubles(key);
  if (!values) return Eigen::VectorXd::Constant(size, fallback);
  if (values->size() == 1) return Eigen::VectorXd::Constant(size, values->front());
  if (static_cast<int>(values->size()) != size)
    throw ValidationError(cfg.where(key) + ": expected 1 or " + std::to_string(size) + " values, got " +
                          std::to_string(values->size()));
  return Eigen::Map<Eigen::VectorXd>(values->data(), size);
}

// ---------------------------------------------------------------- generate

int cmd_generate(const CLI::App& cmd, const Common& common, std::ostream& out) {
  Config cfg = load_config(cmd, common.config_path,
                           {{"--docs", "docs"}, {"--doc-types", "doc_types"}, {"--topics", "topics"}});
  synth::SynthConfig sc;
  sc.doc_types = cfg.get_int("doc_types", sc.doc_types);
  sc.source_types = cfg.get_int("source_types", sc.source_types);
  sc.topics = cfg.get_int("topics", sc.topics);
  sc.vocab_size = cfg.get_int("vocab_size", sc.vocab_size);
  sc.h_t = cfg.get_double("h_t", sc.h_t);
  sc.h_s = cfg.get_double("h_s", sc.h_s);
  sc.h_z = cfg.get_double("h_z", sc.h_z);
  sc.h_w = cfg.get_double("h_w", sc.h_w);
  sc.separation = cfg.get_double("separation", sc.separation);
  sc.mean_extra_sources = cfg.get_double("mean_extra_sources", sc.mean_extra_sources);
  sc.mean_words = cfg.get_double("mean_words", sc.mean_words);
  sc.source_word_fraction = cfg.get_double("source_word_fraction", sc.source_word_fraction);
  sc.blocked_gamma = cfg.get_bool("blocked_gamma", sc.blocked_gamma);
  sc.sentence_length = cfg.get_int("sentence_length", sc.sentence_length);
  sc.start_year = cfg.get_int("start_year", sc.start_year);
  sc.span_months = cfg.get_int("span_months", sc.span_months);
  if (auto p = cfg.get_doubles("doc_type_proportions")) {
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(p->data(), static_cast<Eigen::Index>(p->size()));
    if (v.size() != sc.doc_types || (v.array() < 0).any() || std::abs(v.sum() - 1.0) > 1e-9)
      throw ValidationError(cfg.where("doc_type_proportions") + ": not a probability simplex over " +
                            std::to_string(sc.doc_types) + " document-types");
    sc.doc_type_proportions = v;
  }
  const int docs = cfg.get_int("docs", 100);
  const double clamp = cfg.get_double("clamp_fraction", 0.0);
  if (docs < 1) throw ValidationError(cfg.where("docs") + ": must be >= 1");
  if (!(clamp >= 0 && clamp <= 1)) throw ValidationError(cfg.where("clamp_fraction") + ": must lie in [0, 1]");
  try {
    sc.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }

  const LabelSpace labels = load_labels(common.labels_file);
  const auto params = synth::sample_parameters(sc, derive_seed(common.seed, streams::kSynthParameters));
  auto synthetic = synth::generate_corpus(params, docs, derive_seed(common.seed, streams::kSynthCorpus), labels);
  synthetic.corpus = synth::clamp_fraction(synthetic.corpus, synthetic.truth, clamp, derive_seed(common.seed, streams::kClamp));

  ensure_dir(common.out);
  const auto corpus_path = (fs::path(common.out) / "corpus.jsonl").string();
  const auto truth_path = (fs::path(common.out) / "truth.jsonl").string();
  io::write_corpus_jsonl(corpus_path, synthetic.corpus.documents);
  io::write_truth_jsonl(truth_path, synth::truth_records(synthetic));

  std::size_t clamped = 0;
  for (const auto& d : synthetic.corpus.documents)
    for (const auto& s : d.sources) clamped += s.clamped;
  out << "generated " << docs << " documents, " << synthetic.corpus.num_sources() << " sources (" << clamped
      << " clamped), " << synthetic.corpus.num_tokens() << " tokens\n";
  return 0;
}

// ---------------------------------------------------------------- extract

struct ExtractArgs {
  std::string in;
  std::string speaking_verbs;
  std::string stopwords;
  std::string role_aliases;
};

int cmd_extract(const Common& common, const ExtractArgs& args, std::ostream& out) {
  const RoleAliases aliases = args.role_aliases.empty() ? RoleAliases::builtin() : RoleAliases::load(args.role_aliases);
  const LabelSpace labels = common.labels_file.empty()
                                ? LabelSpace::from_labels(LabelSpace::make_default().labels(), aliases)
                                : LabelSpace::load(common.labels_file, aliases);
  io::ExtractionOptions options;
  if (!args.speaking_verbs.empty()) options.speaking_verbs = load_speaking_verbs(args.speaking_verbs);
  if (!args.stopwords.empty()) {
    options.stopwords.clear();
    const std::string text = detail::read_file(args.stopwords);
    for (auto raw : detail::split(text, '\n'))
      if (auto w = detail::trim(detail::strip_comment(raw)); !w.empty()) options.stopwords.insert(detail::to_lower(w));
  }

  std::vector<Document> kept;
  std::size_t total = 0, dropped = 0;
  io::for_each_jsonl(args.in, [&](const Json& j, int) {
    ++total;
    const auto parsed = io::parsed_document_from_json(j);
    Document doc = io::extract_document(parsed, labels, options);
    if (doc.sources.empty())
      ++dropped;
    else
      kept.push_back(std::move(doc));
  });
  io::write_corpus_jsonl(common.out, kept);
  out << "read " << total << " documents, kept " << kept.size() << ", dropped " << dropped
      << " without a named source\n";
  return 0;
}

// ---------------------------------------------------------------- shared corpus loading

struct LoadedCorpus {
  Corpus corpus;
  TrainingData data;
};

LoadedCorpus load_training_corpus(const std::string& path, const LabelSpace& labels, int min_count,
                                  const Vocabulary* vocabulary) {
  Corpus raw;
  raw.label_space = labels;
  raw.documents = io::read_corpus_jsonl(path, labels);
  Corpus corpus = filter_corpus(raw);
  if (corpus.documents.empty()) throw ValidationError(path + ": no documents with at least one source");
  corpus.vocabulary = vocabulary ? *vocabulary : build_vocabulary(corpus.documents, min_count);
  corpus.validate();
  auto data = TrainingData::from_corpus(corpus);
  return {std::move(corpus), std::move(data)};
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string corpus;
  std::string resume;
  std::string trace;
};

int cmd_train(const CLI::App& cmd, const Common& common, const TrainArgs& args, std::ostream& out) {
  Config cfg = load_config(cmd, common.config_path,
                           {{"--sweeps", "sweeps"},
                            {"--burn-in", "burn_in"},
                            {"--lag", "lag"},
                            {"--doc-types", "doc_types"},
                            {"--topics", "topics"},
                            {"--chains", "chains"},
                            {"--exact-block", "exact_block"}});
  TrainSchedule schedule;
  schedule.num_sweeps = cfg.get_int("sweeps", schedule.num_sweeps);
  schedule.burn_in = cfg.get_int("burn_in", schedule.burn_in);
  schedule.sample_lag = cfg.get_int("lag", schedule.sample_lag);
  schedule.validate();
  const int chains = cfg.get_int("chains", 1);

  Snapshot snap;
  if (!args.resume.empty()) {
    if (chains != 1) throw ValidationError("--resume continues a single chain; drop --chains");
    Snapshot prior = load_snapshot(args.resume);
    auto loaded = load_training_corpus(args.corpus, prior.labels, 1, &prior.vocabulary);
    if (loaded.data.fingerprint() != prior.data_fingerprint)
      throw ValidationError("--resume: snapshot was trained on a different corpus");
    if (!(rebuild_counts(prior.state.latent, loaded.data, prior.state.hyper) == prior.state.counts))
      throw ConsistencyError(args.resume + ": stored count tables disagree with the stored assignments");
    snap = std::move(prior);
    continue_training(snap.state, loaded.data, schedule);
  } else {
    const LabelSpace labels = load_labels(common.labels_file);
    auto loaded = load_training_corpus(args.corpus, labels, cfg.get_int("min_count", 1), nullptr);
    const int T = cfg.get_int("doc_types", 20);
    const int S = cfg.get_int("source_types", labels.size());
    const int K = cfg.get_int("topics", 25);
    if (T < 1) throw ValidationError(cfg.where("doc_types") + ": must be >= 1");
    if (K < 1) throw ValidationError(cfg.where("topics") + ": must be >= 1");
    if (S < 1 || S > labels.size())
      throw ValidationError(cfg.where("source_types") + ": must lie in [1, " + std::to_string(labels.size()) + "]");
    Hyperparameters hyper;
    hyper.doc_type_prior = prior_vector(cfg, "doc_type_prior", T, 1.0);
    hyper.source_type_prior = prior_vector(cfg, "source_type_prior", S, 0.1);
    hyper.topic_prior = prior_vector(cfg, "topic_prior", K, 0.1);
    hyper.word_prior = cfg.get_double("word_prior", 0.01);
    hyper.validate();
    const BlockRule rule = cfg.get_bool("exact_block", false) ? BlockRule::Exact : BlockRule::AsPrinted;

    auto result = train_chains(loaded.data, hyper, common.seed, schedule, chains, rule);
    snap.state = std::move(result.state);
    snap.labels = loaded.corpus.label_space.prefix(S);
    snap.vocabulary = loaded.corpus.vocabulary;
    snap.data_fingerprint = loaded.data.fingerprint();
    for (const auto& d : loaded.corpus.documents) {
      snap.doc_ids.push_back(d.doc_id);
      snap.sources_per_doc.push_back(static_cast<int>(d.sources.size()));
    }
    if (chains > 1) out << "selected chain " << result.chain << " of " << chains << "\n";
  }

  save_snapshot(snap, common.out);
  std::string trace = "sweep,log_joint\n";
  for (std::size_t i = 0; i < snap.state.trace.size(); ++i)
    trace += std::to_string(i + 1) + "," + format_double(snap.state.trace[i]) + "\n";
  io::write_text(args.trace.empty() ? common.out + ".trace.csv" : args.trace, trace);
  out << "trained " << snap.state.sweep << " sweeps, " << snap.state.tally.samples
      << " posterior samples, final log joint " << format_double(snap.state.trace.back()) << "\n";
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string state;
  std::string truth;
  std::string confusion;
  bool pmi_align = false;
  double align_fraction = 0.1;
};

int cmd_evaluate(const Common& common, const EvaluateArgs& args, std::ostream& out) {
  const Snapshot snap = load_snapshot(args.state);
  const auto& labels = snap.labels;
  // Truth labels may come from a wider label space than the one trained on.
  const LabelSpace truth_labels = load_labels(common.labels_file);
  const auto truth = io::read_truth_jsonl(args.truth, truth_labels);

  std::map<std::string, std::size_t> doc_index;
  std::vector<int> offset(snap.doc_ids.size() + 1, 0);
  for (std::size_t d = 0; d < snap.doc_ids.size(); ++d) {
    doc_index[snap.doc_ids[d]] = d;
    offset[d + 1] = offset[d] + snap.sources_per_doc[d];
  }
  const Eigen::VectorXi predicted_types = source_type_modes(snap.state);
  const Eigen::VectorXi predicted_docs = doc_type_modes(snap.state);

  std::vector<int> pred, gold;
  std::vector<bool> clamped;
  std::vector<int> doc_pred, doc_gold;
  for (const auto& r : truth) {
    auto it = doc_index.find(r.doc_id);
    if (it == doc_index.end()) throw ValidationError(args.truth + ": unknown doc_id '" + r.doc_id + "'");
    const auto d = it->second;
    if (r.doc_type) {
      doc_pred.push_back(predicted_docs(static_cast<Eigen::Index>(d)));
      doc_gold.push_back(*r.doc_type);
    }
    if (r.source_types.empty()) continue;
    if (static_cast<int>(r.source_types.size()) != snap.sources_per_doc[d])
      throw ValidationError(args.truth + ": doc_id '" + r.doc_id + "' lists " + std::to_string(r.source_types.size()) +
                            " sources, the model has " + std::to_string(snap.sources_per_doc[d]));
    for (std::size_t n = 0; n < r.source_types.size(); ++n) {
      if (!r.source_types[n]) continue;
      auto cell = labels.find(r.source_types[n]->affiliation, r.source_types[n]->role);
      const int g = offset[d] + static_cast<int>(n);
      pred.push_back(predicted_types(g));
      gold.push_back(cell ? cell->index : -1);
      clamped.push_back(snap.state.latent.clamped[static_cast<std::size_t>(g)]);
    }
  }

  Json metrics;
  metrics["aligned"] = args.pmi_align;
  if (!pred.empty()) {
    std::vector<std::size_t> subset;
    if (args.pmi_align) {
      std::vector<std::size_t> labeled;
      std::vector<int> labeled_gold;
      for (std::size_t i = 0; i < gold.size(); ++i)
        if (gold[i] >= 0) {
          labeled.push_back(i);
          labeled_gold.push_back(gold[i]);
        }
      const auto split = eval::train_validation_split(labeled_gold, args.align_fraction,
                                                      derive_seed(common.seed, streams::kSplit));
      std::vector<std::optional<int>> align_gold(pred.size());
      for (auto i : split.train) align_gold[labeled[i]] = gold[labeled[i]];
      const auto mapping = eval::pmi_align(pred, align_gold, labels.size());
      for (auto& p : pred) p = mapping.at(p);
      for (auto i : split.validation) subset.push_back(labeled[i]);
    } else {
      for (std::size_t i = 0; i < pred.size(); ++i)
        if (!clamped[i] && gold[i] >= 0) subset.push_back(i);
      if (subset.empty())
        for (std::size_t i = 0; i < pred.size(); ++i)
          if (gold[i] >= 0) subset.push_back(i);
    }
    if (subset.empty()) throw ValidationError(args.truth + ": no truth labels fall inside the model's label space");
    std::vector<SourceType> p_types, g_types;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      p_types.push_back(labels[pred[i]]);
      g_types.push_back(gold[i] >= 0 ? labels[gold[i]] : labels[0]);
    }
    const auto report = eval::accuracy(p_types, g_types, subset);
    metrics["overall"] = report.overall;
    metrics["affiliation"] = report.affiliation;
    metrics["role"] = report.role;
    metrics["evaluated_sources"] = report.total;
    metrics["per_affiliation"] = report.per_affiliation;
    metrics["per_role"] = report.per_role;
    const auto confusion = eval::confusion_matrix(pred, gold, subset, labels.size());
    io::write_text(args.confusion.empty() ? common.out + ".confusion.csv" : args.confusion,
                   eval::confusion_csv(confusion, labels.labels()));
    out << "source-type accuracy " << report.overall << " on " << report.total << " sources\n";
  }
  if (!doc_pred.empty()) {
    const int num_gold = *std::max_element(doc_gold.begin(), doc_gold.end()) + 1;
    const double acc = eval::aligned_accuracy(doc_pred, doc_gold, num_gold);
    metrics["doc_type_accuracy"] = acc;
    out << "document-type (PMI-aligned) accuracy " << acc << "\n";
  }
  io::write_text(common.out, metrics.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string state;
  std::string corpus;
  int bucket_months = 18;
  int top = 3;
  std::string selected;
};

int cmd_analyze(const AnalyzeArgs& args, const Common& common, std::ostream& out, std::ostream& err) {
  const Snapshot snap = load_snapshot(args.state);
  auto loaded = load_training_corpus(args.corpus, snap.labels, 1, &snap.vocabulary);
  if (loaded.data.fingerprint() != snap.data_fingerprint)
    throw ValidationError(args.corpus + ": corpus does not match the one the snapshot was trained on");
  if (args.bucket_months < 1) throw ValidationError("--bucket-months must be >= 1");
  if (args.top < 1) throw ValidationError("--top must be >= 1");

  std::vector<int> selected;
  if (!args.selected.empty())
    for (auto l : detail::split(args.selected, ',')) selected.push_back(snap.labels.parse_label(detail::trim(l)).index);
  std::vector<std::optional<Date>> timestamps;
  for (const auto& d : loaded.corpus.documents) timestamps.push_back(d.timestamp);

  const auto& st = snap.state;
  const auto counts = analytics::source_type_counts(st, snap.labels);
  const auto over_time =
      analytics::counts_over_time(st, loaded.data, timestamps, snap.labels, args.bucket_months, selected);
  const auto topics = analytics::top_topics_per_source_type(st, snap.vocabulary, snap.labels, args.top);
  const auto doc_to_source = analytics::doc_type_source_type_table(st, snap.labels, args.top);

  ensure_dir(common.out);
  const fs::path dir(common.out);
  io::write_text((dir / "source_type_counts.csv").string(), analytics::to_csv(counts));
  io::write_text((dir / "counts_over_time.csv").string(), analytics::to_csv(over_time));
  io::write_text((dir / "topics_by_source_type.csv").string(), analytics::to_csv(topics));
  io::write_text((dir / "doc_to_source.csv").string(), analytics::to_csv(doc_to_source));

  Json empty = Json::array();
  for (const auto& b : over_time.empty_buckets) empty.push_back(b.iso());
  Json manifest = {{"state", fs::path(args.state).filename().string()},
                   {"state_checksum", hex32(crc_of_file(args.state))},
                   {"corpus", fs::path(args.corpus).filename().string()},
                   {"parameters",
                    {{"bucket_months", args.bucket_months},
                     {"top", args.top},
                     {"selected_labels", args.selected},
                     {"doc_types", st.hyper.num_doc_types()},
                     {"source_types", st.hyper.num_source_types()},
                     {"topics", st.hyper.num_topics()},
                     {"sweeps", st.sweep},
                     {"posterior_samples", st.tally.samples}}},
                   {"counts_over_time", {{"excluded_docs", over_time.excluded_docs}, {"empty_buckets", empty}}},
                   {"files",
                    {"source_type_counts.csv", "counts_over_time.csv", "topics_by_source_type.csv",
                     "doc_to_source.csv"}}};
  io::write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
  if (over_time.excluded_docs > 0)
    err << "note: " << over_time.excluded_docs << " documents without a timestamp excluded from counts_over_time\n";
  out << "wrote analytics for " << loaded.corpus.documents.size() << " documents to " << common.out << "\n";
  return 0;
}

int exit_code(ErrorKind kind) { return static_cast<int>(kind); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Source topic model: extraction, Gibbs training, evaluation and analytics for news sources", "stm"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* cmd, bool needs_out_dir) {
    cmd->add_option("--config", common.config_path, "Key-value config file; flags override its values")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", common.seed, "Seed for every random choice (default 0)");
    cmd->add_option("--out", common.out, needs_out_dir ? "Output directory" : "Output file")->required();
    cmd->add_option("--labels-file", common.labels_file, "Label space, one affiliation-role label per line");
  };

  auto* gen = app.add_subcommand("generate", "Sample a synthetic corpus and its ground truth");
  add_common(gen, true);
  int docs = 0, doc_types = 0, topics = 0;
  gen->add_option("--docs", docs, "Number of documents (config: docs, default 100)");
  gen->add_option("--doc-types", doc_types, "Document-types T (config: doc_types, default 5)");
  gen->add_option("--topics", topics, "Topics K (config: topics, default 10)");

  auto* ext = app.add_subcommand("extract", "Identify named sources and switch values in pre-parsed documents");
  add_common(ext, false);
  ExtractArgs extract_args;
  ext->add_option("--in", extract_args.in, "Pre-parsed JSONL input")->required();
  ext->add_option("--speaking-verbs", extract_args.speaking_verbs, "Speaking-verb lemma list (one per line)");
  ext->add_option("--stopwords", extract_args.stopwords, "Stopword list replacing the built-in one");
  ext->add_option("--role-aliases", extract_args.role_aliases, "Role alias table replacing the built-in one");

  auto* trn = app.add_subcommand("train", "Fit the model with collapsed Gibbs sampling");
  add_common(trn, false);
  TrainArgs train_args;
  int sweeps = 0, burn_in = 0, lag = 0, chains = 0;
  trn->add_option("--corpus", train_args.corpus, "Extracted corpus JSONL")->required();
  trn->add_option("--resume", train_args.resume, "Continue from this snapshot");
  trn->add_option("--trace", train_args.trace, "Log-joint trace CSV (default <out>.trace.csv)");
  trn->add_option("--sweeps", sweeps, "Total sweeps (config: sweeps, default 2000)");
  trn->add_option("--burn-in", burn_in, "Sweeps before tallying (config: burn_in, default 500)");
  trn->add_option("--lag", lag, "Sweeps between tallies (config: lag, default 10)");
  trn->add_option("--doc-types", doc_types, "Document-types T (config: doc_types, default 20)");
  trn->add_option("--topics", topics, "Topics K (config: topics, default 25)");
  trn->add_option("--chains", chains, "Independent chains; the best final log joint wins (config: chains)");
  trn->add_flag("--exact-block", "Use exact blocked conditionals (config: exact_block)");

  auto* evl = app.add_subcommand("evaluate", "Score inferred source-types and document-types against truth");
  add_common(evl, false);
  EvaluateArgs eval_args;
  evl->add_option("--state", eval_args.state, "Model snapshot")->required();
  evl->add_option("--truth", eval_args.truth, "Truth JSONL (doc_id, doc_type, source_types)")->required();
  evl->add_option("--confusion", eval_args.confusion, "Confusion matrix CSV (default <out>.confusion.csv)");
  evl->add_flag("--pmi-align", eval_args.pmi_align, "Map clusters onto labels by PMI before scoring");
  evl->add_option("--align-fraction", eval_args.align_fraction, "Share of labeled sources used for alignment");

  auto* ana = app.add_subcommand("analyze", "Write source-type analytics tables");
  add_common(ana, true);
  AnalyzeArgs analyze_args;
  ana->add_option("--state", analyze_args.state, "Model snapshot")->required();
  ana->add_option("--corpus", analyze_args.corpus, "The extracted corpus the snapshot was trained on")->required();
  ana->add_option("--bucket-months", analyze_args.bucket_months, "Months per time bucket (default 18)");
  ana->add_option("--top", analyze_args.top, "Ranked entries per row (default 3)");
  ana->add_option("--labels", analyze_args.selected, "Comma-separated labels for counts_over_time (default all)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(ErrorKind::Usage);
  }

  try {
    if (gen->parsed()) return cmd_generate(*gen, common, out);
    if (ext->parsed()) return cmd_extract(common, extract_args, out);
    if (trn->parsed()) return cmd_train(*trn, common, train_args, out);
    if (evl->parsed()) return cmd_evaluate(common, eval_args, out);
    if (ana->parsed()) return cmd_analyze(analyze_args, common, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_code(ErrorKind::Consistency);
  }
  return exit_code(ErrorKind::Usage);
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace stm::cli
