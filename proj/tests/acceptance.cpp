// Acceptance suite: one PASS/FAIL line per criterion. Arguments select criteria by
// number (default: all). Exit status is non-zero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "model_fixtures.hpp"
#include "oracle.hpp"
#include "stm/analytics.hpp"
#include "stm/detail/strings.hpp"
#include "stm/eval.hpp"
#include "stm/extraction.hpp"
#include "stm/io.hpp"
#include "stm/synth.hpp"
#include "stm/train.hpp"

using namespace stm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

// ---------------------------------------------------------------- 1

/// Empirical per-site marginals from `samples` sweeps after `burn_in`.
std::vector<std::vector<double>> gibbs_marginals(const oracle::Instance& in, BlockRule rule, std::uint64_t seed,
                                                 int burn_in, int samples) {
  const auto data = testing::data_of(in);
  auto st = init_state(data, testing::hyper_of(in), seed, rule);
  for (int i = 0; i < burn_in; ++i) sweep(st, data);
  std::vector<std::vector<double>> hits(static_cast<std::size_t>(in.num_sites()));
  for (int s = 0; s < in.num_sites(); ++s) hits[static_cast<std::size_t>(s)].assign(static_cast<std::size_t>(in.arity(s)), 0.0);
  for (int i = 0; i < samples; ++i) {
    sweep(st, data);
    const auto x = testing::get_assignment(st);
    for (std::size_t s = 0; s < x.size(); ++s) hits[s][static_cast<std::size_t>(x[s])] += 1.0;
  }
  for (auto& h : hits)
    for (auto& v : h) v /= samples;
  return hits;
}

double max_tv(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  double worst = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) worst = std::max(worst, oracle::total_variation(a[s], b[s]));
  return worst;
}

Outcome criterion_oracle() {
  const auto in = oracle::enumerable_instance();
  constexpr int kSamples = 200000;
  constexpr double kTolerance = 0.02;

  const auto posterior = oracle::marginals(in, oracle::enumerate_posterior(in));
  // The sweep kernel's own stationary law; for the exact rule it must be the posterior.
  const auto exact_kernel = oracle::marginals(in, oracle::sweep_stationary(in, true));
  const auto printed_kernel = oracle::marginals(in, oracle::sweep_stationary(in, false));

  const auto exact = gibbs_marginals(in, BlockRule::Exact, 11, 1000, kSamples);
  const auto printed = gibbs_marginals(in, BlockRule::AsPrinted, 12, 1000, kSamples);

  const double tv_exact = max_tv(exact, posterior);
  const double tv_printed = max_tv(printed, printed_kernel);
  const double kernel_gap = max_tv(exact_kernel, posterior);
  const double printed_bias = max_tv(printed_kernel, posterior);
  const double printed_vs_posterior = max_tv(printed, posterior);

  Outcome o;
  o.pass = tv_exact <= kTolerance && tv_printed <= kTolerance && kernel_gap < 1e-9;
  o.detail = std::to_string(in.num_sites()) + " variables, " + std::to_string(kSamples) +
             " samples; max TV exact-block chain vs enumerated posterior " + fmt(tv_exact) +
             ", default chain vs its enumerated stationary law " + fmt(tv_printed) +
             " (tolerance 0.02); default chain vs enumerated posterior " + fmt(printed_vs_posterior) +
             ", default stationary law vs posterior " + fmt(printed_bias);
  return o;
}

// ---------------------------------------------------------------- 2

Outcome criterion_conservation() {
  synth::SynthConfig cfg;
  const auto params = synth::sample_parameters(cfg, derive_seed(7, streams::kSynthParameters));
  auto sc = synth::generate_corpus(params, 200, derive_seed(7, streams::kSynthCorpus));
  sc.corpus = synth::clamp_fraction(sc.corpus, sc.truth, 0.1, derive_seed(7, streams::kClamp));
  const auto data = TrainingData::from_corpus(sc.corpus);
  int checks = 0, mismatches = 0;
  auto st = train(data, Hyperparameters::symmetric(5, 8, 10), 7, {1000, 500, 10}, BlockRule::AsPrinted,
                  [&](const ModelState& s) {
                    if (s.sweep % 100 == 0) {
                      ++checks;
                      if (!(rebuild_counts(s.latent, data, s.hyper) == s.counts)) ++mismatches;
                    }
                    return true;
                  });
  const bool final_equal = rebuild_counts(st.latent, data, st.hyper) == st.counts;
  long tokens = 0;
  for (const auto& d : data.docs) tokens += d.words.size();
  Outcome o;
  o.pass = final_equal && mismatches == 0 && st.sweep == 1000 && st.counts.all_non_negative();
  o.detail = "200 documents, " + std::to_string(tokens) + " tokens, 1000 sweeps; rebuilt tables equal the incremental "
             "ones at " + std::to_string(checks - mismatches) + "/" + std::to_string(checks) + " checkpoints";
  return o;
}

// ---------------------------------------------------------------- 3, 4, 6

constexpr int kRecoverySeeds = 5;
constexpr TrainSchedule kRecoverySchedule{2000, 500, 10};

struct RecoveryRun {
  double clamped_accuracy = 0.0;  // unclamped sources, 10% clamped
  double doc_accuracy = 0.0;      // PMI-aligned, 10% clamped
  double unclamped_aligned = 0.0;  // same sources, 0% clamped + PMI alignment on the 10%
  std::vector<double> trace;       // 10% clamped run
};

const std::vector<RecoveryRun>& recovery_runs() {
  static const std::vector<RecoveryRun> runs = [] {
    std::vector<RecoveryRun> out;
    for (int seed = 1; seed <= kRecoverySeeds; ++seed) {
      const auto s = static_cast<std::uint64_t>(seed);
      synth::SynthConfig cfg;
      cfg.doc_types = 5;
      cfg.source_types = 8;
      cfg.topics = 10;
      cfg.vocab_size = 500;
      cfg.separation = 3.0;
      const auto params = synth::sample_parameters(cfg, derive_seed(s, streams::kSynthParameters));
      const auto sc = synth::generate_corpus(params, 500, derive_seed(s, streams::kSynthCorpus));
      const auto clamped = synth::clamp_fraction(sc.corpus, sc.truth, 0.1, derive_seed(s, streams::kClamp));
      const auto hyper = Hyperparameters::symmetric(5, 8, 10);

      const auto data = TrainingData::from_corpus(clamped);
      const auto with = train(data, hyper, s, kRecoverySchedule);
      const auto without = train(TrainingData::from_corpus(sc.corpus), hyper, s, kRecoverySchedule);

      const Eigen::VectorXi modes_with = source_type_modes(with);
      const Eigen::VectorXi modes_without = source_type_modes(without);
      std::vector<int> clusters(static_cast<std::size_t>(data.num_sources));
      std::vector<std::optional<int>> labeled(clusters.size());
      for (int g = 0; g < data.num_sources; ++g) {
        clusters[static_cast<std::size_t>(g)] = modes_without(g);
        if (data.clamp_label[static_cast<std::size_t>(g)] >= 0) labeled[static_cast<std::size_t>(g)] = sc.truth.source_type(g);
      }
      const auto mapping = eval::pmi_align(clusters, labeled, 8);

      RecoveryRun run;
      int scored = 0, hit_with = 0, hit_without = 0;
      for (int g = 0; g < data.num_sources; ++g) {
        if (data.clamp_label[static_cast<std::size_t>(g)] >= 0) continue;
        ++scored;
        hit_with += modes_with(g) == sc.truth.source_type(g);
        hit_without += mapping.at(modes_without(g)) == sc.truth.source_type(g);
      }
      run.clamped_accuracy = static_cast<double>(hit_with) / scored;
      run.unclamped_aligned = static_cast<double>(hit_without) / scored;
      const Eigen::VectorXi docs = doc_type_modes(with);
      run.doc_accuracy = eval::aligned_accuracy(std::vector<int>(docs.data(), docs.data() + docs.size()),
                                                std::vector<int>(sc.truth.doc_type.data(),
                                                                 sc.truth.doc_type.data() + sc.truth.doc_type.size()),
                                                5);
      run.trace = with.trace;
      out.push_back(std::move(run));
    }
    return out;
  }();
  return runs;
}

double mean_of(const std::vector<RecoveryRun>& runs, double RecoveryRun::*field) {
  double s = 0.0;
  for (const auto& r : runs) s += r.*field;
  return s / static_cast<double>(runs.size());
}

std::string list_of(const std::vector<RecoveryRun>& runs, double RecoveryRun::*field) {
  std::string out;
  for (const auto& r : runs) out += (out.empty() ? "" : " ") + fmt(r.*field, 3);
  return out;
}

Outcome criterion_recovery() {
  const auto& runs = recovery_runs();
  const double source = mean_of(runs, &RecoveryRun::clamped_accuracy);
  const double docs = mean_of(runs, &RecoveryRun::doc_accuracy);
  Outcome o;
  o.pass = source >= 0.80 && docs >= 0.70;
  o.detail = "D=500 T=5 S=8 K=10 V=500 separation 3, 10% clamped, 2000 sweeps; mean source-type accuracy on "
             "unclamped sources " + fmt(source) + " [" + list_of(runs, &RecoveryRun::clamped_accuracy) +
             "] (>= 0.80), mean aligned doc-type accuracy " + fmt(docs) + " [" +
             list_of(runs, &RecoveryRun::doc_accuracy) + "] (>= 0.70)";
  return o;
}

Outcome criterion_lift() {
  const auto& runs = recovery_runs();
  const double with = mean_of(runs, &RecoveryRun::clamped_accuracy);
  const double without = mean_of(runs, &RecoveryRun::unclamped_aligned);
  Outcome o;
  o.pass = with > without;
  o.detail = "mean accuracy on the same unclamped sources: 10% clamped " + fmt(with) + " vs 0% clamped + PMI alignment " +
             fmt(without) + " [" + list_of(runs, &RecoveryRun::unclamped_aligned) + "]";
  return o;
}

Outcome criterion_ascent() {
  constexpr int kWindow = 100;
  const auto& runs = recovery_runs();
  int monotone = 0;
  std::string per_seed;
  for (const auto& r : runs) {
    const auto& tr = r.trace;
    // Moving average over sweeps (t - 100, t], for every t whose window lies after burn-in.
    std::vector<double> ma;
    double sum = 0.0;
    for (std::size_t t = kRecoverySchedule.burn_in; t < tr.size(); ++t) {
      sum += tr[t];
      if (t >= kRecoverySchedule.burn_in + kWindow) sum -= tr[t - kWindow];
      if (t + 1 >= kRecoverySchedule.burn_in + kWindow) ma.push_back(sum / kWindow);
    }
    int drops = 0;
    double largest = 0.0;
    for (std::size_t i = 1; i < ma.size(); ++i)
      if (ma[i] < ma[i - 1]) {
        ++drops;
        largest = std::max(largest, ma[i - 1] - ma[i]);
      }
    // Non-overlapping window means, for context.
    int window_drops = 0;
    for (std::size_t i = kWindow; i < ma.size(); i += kWindow) window_drops += ma[i] < ma[i - kWindow];
    if (drops == 0) ++monotone;
    per_seed += (per_seed.empty() ? "" : "; ") + std::to_string(drops) + "/" + std::to_string(ma.size() - 1) +
                " steps down (largest " + fmt(largest, 1) + ", " + std::to_string(window_drops) +
                " of " + std::to_string(ma.size() / kWindow) + " window-to-window), net rise " +
                fmt(ma.back() - ma.front(), 1);
  }
  Outcome o;
  o.pass = monotone == kRecoverySeeds;
  o.detail = std::to_string(monotone) + "/" + std::to_string(kRecoverySeeds) +
             " seeds with a non-decreasing 100-sweep moving average after burn-in; " + per_seed;
  return o;
}

// ---------------------------------------------------------------- 5

Outcome criterion_extraction() {
  const std::string dir = STM_TEST_DATA_DIR;
  const auto parsed = io::read_parsed_jsonl(dir + "/extraction_fixture.jsonl");
  const auto expected = io::Json::parse(detail::read_file(dir + "/extraction_expected.json"));
  const auto labels = LabelSpace::make_default();
  int matched = 0;
  std::string failures;
  for (const auto& p : parsed) {
    const auto doc = extract_document(p, labels, {});
    const auto& e = expected.at(doc.doc_id);
    bool ok = e.at("sources").size() == doc.sources.size();
    for (std::size_t s = 0; ok && s < doc.sources.size(); ++s) {
      ok = e.at("sources")[s].at("name").get<std::string>() == doc.sources[s].canonical_name &&
           e.at("sources")[s].at("sentences").get<std::set<int>>() == doc.sources[s].sentence_indices;
    }
    std::vector<int> gamma;
    for (const auto& run : e.at("gamma")) gamma.insert(gamma.end(), run[1].get<std::size_t>(), run[0].get<int>());
    ok = ok && gamma == doc.gamma;
    if (ok)
      ++matched;
    else
      failures += " " + doc.doc_id;
  }
  Outcome o;
  o.pass = matched == static_cast<int>(parsed.size()) && parsed.size() == 20 && expected.size() == 20;
  o.detail = std::to_string(matched) + "/" + std::to_string(parsed.size()) +
             " hand-annotated documents match exactly (sources, sentences, gamma)" +
             (failures.empty() ? "" : "; mismatched:" + failures);
  return o;
}

// ---------------------------------------------------------------- 7

Outcome criterion_not_reproducible() {
  // Analytics computed from a state that holds the generating assignment must report
  // exactly the generating totals.
  synth::SynthConfig cfg;
  const auto params = synth::sample_parameters(cfg, derive_seed(21, streams::kSynthParameters));
  const auto sc = synth::generate_corpus(params, 300, derive_seed(21, streams::kSynthCorpus));
  const auto data = TrainingData::from_corpus(sc.corpus);
  auto st = init_state(data, Hyperparameters::symmetric(5, 8, 10), 21);
  st.latent.doc_type = sc.truth.doc_type;
  st.latent.source_type = sc.truth.source_type;
  st.latent.word_topic = sc.truth.word_topic;
  st.counts = rebuild_counts(st.latent, data, st.hyper);

  std::map<int, long> truth_counts;
  for (Eigen::Index g = 0; g < sc.truth.source_type.size(); ++g) ++truth_counts[sc.truth.source_type(g)];
  bool counts_ok = true;
  long listed = 0;
  for (const auto& row : analytics::source_type_counts(st, sc.corpus.label_space)) {
    counts_ok = counts_ok && truth_counts[row.source_type] == row.count;
    listed += row.count;
  }
  counts_ok = counts_ok && listed == sc.truth.source_type.size();

  std::vector<std::optional<Date>> stamps;
  for (const auto& d : sc.corpus.documents) stamps.push_back(d.timestamp);
  const auto over_time = analytics::counts_over_time(st, data, stamps, sc.corpus.label_space, 18);
  std::map<std::string, double> bucket_total;
  for (const auto& r : over_time.rows) bucket_total[r.bucket_start.iso()] += r.share;
  bool shares_ok = !bucket_total.empty();
  for (const auto& [bucket, total] : bucket_total) shares_ok = shares_ok && std::abs(total - 1.0) < 1e-12;

  Outcome o;
  o.pass = counts_ok && shares_ok;
  o.detail =
      "not desk-reproducible: the reported accuracy on annotated news sources, the source-type counts, the "
      "trends over time and the topic tables need the licensed news archive and expert annotations, which are "
      "not available here. This artifact reproduces their computation paths instead (criteria 3 to 6, plus "
      "this check: analytics on a synthetic state holding the generating assignment report the generating "
      "source-type totals " + std::string(counts_ok ? "exactly" : "INCORRECTLY") + " and per-bucket shares that " +
      (shares_ok ? "sum to 1" : "do NOT sum to 1") + ")";
  return o;
}

// ---------------------------------------------------------------- 8

int run_cli(const std::string& args) {
  const std::string cmd = std::string(STM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = detail::read_file(e.path().string());
  return files;
}

Outcome criterion_determinism() {
  const fs::path root = fs::temp_directory_path() / ("stm_acceptance_" + std::to_string(::getpid()));
  const fs::path work = root / "work";
  const std::string w = work.string();
  const std::string fixture = std::string(STM_TEST_DATA_DIR) + "/extraction_fixture.jsonl";
  const std::vector<std::string> commands = {
      "generate --docs 80 --doc-types 4 --topics 6 --seed 9 --config " + w + "/gen.cfg --out " + w + "/gen",
      "extract --in " + fixture + " --out " + w + "/extracted.jsonl",
      "train --corpus " + w + "/gen/corpus.jsonl --doc-types 4 --topics 6 --sweeps 60 --burn-in 20 --lag 5 "
      "--chains 3 --seed 4 --out " + w + "/model.snap",
      "train --corpus " + w + "/gen/corpus.jsonl --resume " + w + "/model.snap --sweeps 80 --burn-in 20 --lag 5 "
      "--out " + w + "/resumed.snap",
      "evaluate --state " + w + "/model.snap --truth " + w + "/gen/truth.jsonl --pmi-align --seed 3 --out " + w +
          "/metrics.json",
      "analyze --state " + w + "/model.snap --corpus " + w + "/gen/corpus.jsonl --bucket-months 12 --out " + w +
          "/analysis",
  };
  std::vector<std::map<std::string, std::string>> outputs;
  int failures = 0;
  for (int rep = 0; rep < 2; ++rep) {
    fs::remove_all(work);
    fs::create_directories(work);
    io::write_text(w + "/gen.cfg", "mean_words = 60\nvocab_size = 120\nseparation = 2\nclamp_fraction = 0.2\n");
    for (const auto& c : commands) failures += run_cli(c) != 0;
    outputs.push_back(snapshot_dir(work));
  }
  fs::remove_all(root);
  std::size_t identical = 0;
  for (const auto& [name, bytes] : outputs[0]) {
    auto it = outputs[1].find(name);
    identical += it != outputs[1].end() && it->second == bytes;
  }
  Outcome o;
  o.pass = failures == 0 && outputs[0].size() == outputs[1].size() && identical == outputs[0].size() &&
           outputs[0].size() >= 12;
  o.detail = std::to_string(commands.size()) + " commands run twice; " + std::to_string(identical) + "/" +
             std::to_string(outputs[0].size()) + " output files byte-identical" +
             (failures ? "; " + std::to_string(failures) + " command(s) failed" : "");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact-posterior oracle", criterion_oracle},
      {"count conservation", criterion_conservation},
      {"synthetic recovery", criterion_recovery},
      {"semi-supervision lift", criterion_lift},
      {"extraction fidelity", criterion_extraction},
      {"stochastic ascent", criterion_ascent},
      {"published results", criterion_not_reproducible},
      {"determinism", criterion_determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << number << " (" << criteria[i].first << "): " << o.detail
              << " [" << fmt(secs, 1) << "s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
