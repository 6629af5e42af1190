//  Copyright 2026 The musicvec Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "musicvec.hpp"

namespace musicvec::cli {
namespace {

namespace fs = std::filesystem;

struct Shared {
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool verbose = false;
};

void add_shared(CLI::App* app, Shared& s) {
  // Handled by the root app; declared here so --help lists it.
  app->add_option("--config", "Read option values from a TOML-style file (a run manifest works); flags win");
  app->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  app->add_option("--workers", s.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_flag("--verbose", s.verbose, "Report progress on standard error");
}

/// The resolved option set of a subcommand as a [section] that --config
/// accepts, so a manifest can replay its run.
void write_manifest(const CLI::App* app, const std::string& path) {
  auto out = musicvec::detail::open_output(path);
  out << "# musicvec " << app->get_name() << " run manifest\n";
  out << "[" << app->get_name() << "]\n";
  out << app->config_to_str(true, false);
}

std::string manifest_path_for(const std::string& output) { return output + ".manifest.toml"; }

// Stores a default resolved at run time so the manifest records it.
void record_resolved(CLI::App* app, const std::string& name, const std::string& value) {
  auto* opt = app->get_option(name);
  if (opt->count() == 0) opt->add_result(value);
}

// One word per line: the first whitespace-separated field, so TSV files with
// extra columns can be passed directly. Blank lines are skipped.
std::vector<std::string> read_word_list(const std::string& path) {
  auto in = musicvec::detail::open_input(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto fields = split_whitespace(line);
    if (!fields.empty()) words.push_back(std::move(fields.front()));
  }
  return words;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string ids_sidecar(const std::string& cache_path) { return cache_path + ".ids.json"; }

// ---------------------------------------------------------------------------
// Corpus assembly shared by build-corpus and train.

struct AssembledCorpus {
  Corpus documents;
  std::set<std::string> track_ids;
  std::set<std::string> artist_ids;
  std::size_t general_documents = 0;
  std::size_t music_documents = 0;
};

enum class InputKind { GeneralText, MusicRecords, TokenCache };

InputKind classify_input(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".jsonl") return InputKind::MusicRecords;
  if (ext == ".tok") return InputKind::TokenCache;
  return InputKind::GeneralText;
}

AssembledCorpus assemble(const std::vector<std::string>& general_paths, const std::vector<std::string>& music_paths,
                         const std::vector<std::string>& cache_paths, MergeMode mode, std::uint32_t copies,
                         std::uint64_t seed, std::size_t workers) {
  AssembledCorpus a;
  Corpus general;
  for (const auto& p : cache_paths) {
    auto in = musicvec::detail::open_input(p);
    auto docs = read_token_cache(in);
    general.insert(general.end(), docs.begin(), docs.end());
    std::ifstream ids(ids_sidecar(p));
    if (ids) {
      const auto j = nlohmann::json::parse(ids);
      for (const auto& t : j.at("tracks")) a.track_ids.insert(t.get<std::string>());
      for (const auto& t : j.at("artists")) a.artist_ids.insert(t.get<std::string>());
    }
  }
  for (const auto& p : general_paths) {
    auto docs = read_general_corpus(p);
    general.insert(general.end(), docs.begin(), docs.end());
  }
  Corpus clusters;
  for (const auto& p : music_paths) {
    for (const auto& rec : read_track_records(p)) {
      a.track_ids.insert(rec.track_id);
      a.artist_ids.insert(rec.artist_id);
      clusters.push_back(build_cluster_document(rec));
    }
  }
  const Corpus music = augment_corpus(clusters, copies, seed, workers);
  a.documents = merge_corpora(general, music, mode);
  a.general_documents = mode == MergeMode::MusicOnly ? 0 : general.size();
  a.music_documents = mode == MergeMode::GeneralOnly ? 0 : music.size();
  if (mode == MergeMode::GeneralOnly) {
    a.track_ids.clear();
    a.artist_ids.clear();
  }
  return a;
}

MergeMode parse_mode(const std::string& s) {
  if (s == "general") return MergeMode::GeneralOnly;
  if (s == "music") return MergeMode::MusicOnly;
  return MergeMode::Both;
}

// ---------------------------------------------------------------------------

struct BuildCorpusArgs {
  Shared shared;
  std::vector<std::string> general;
  std::vector<std::string> music;
  std::string mode = "both";
  std::uint32_t augment_copies = 5;
  std::string out;
};

int cmd_build_corpus(CLI::App* app, const BuildCorpusArgs& a, std::ostream& out, std::ostream& err) {
  if (a.general.empty() && a.music.empty()) {
    err << "build-corpus: give at least one --general or --music input\n";
    return kExitUsage;
  }
  auto corpus = assemble(a.general, a.music, {}, parse_mode(a.mode), a.augment_copies, a.shared.seed,
                         a.shared.workers);
  {
    auto f = musicvec::detail::open_output(a.out);
    write_token_cache(f, corpus.documents);
  }
  {
    nlohmann::json ids{{"tracks", corpus.track_ids}, {"artists", corpus.artist_ids}};
    auto f = musicvec::detail::open_output(ids_sidecar(a.out));
    f << ids.dump() << '\n';
  }
  write_manifest(app, manifest_path_for(a.out));
  std::uint64_t tokens = 0;
  for (const auto& d : corpus.documents) tokens += d.tokens.size();
  out << "documents\t" << corpus.documents.size() << "\ngeneral_documents\t" << corpus.general_documents
      << "\nmusic_documents\t" << corpus.music_documents << "\ntokens\t" << tokens << "\ntracks\t"
      << corpus.track_ids.size() << "\nartists\t" << corpus.artist_ids.size() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  Shared shared;
  std::vector<std::string> corpus;
  std::size_t dim = 100;
  std::size_t window = 15;
  std::size_t epochs = 5;
  std::size_t negatives = 5;
  double lr = 0.025;
  std::optional<double> min_lr;
  std::uint64_t min_count = 1;
  std::optional<double> subsample;
  std::uint32_t augment_copies = 5;
  std::size_t table_size = 10'000'000;
  double unigram_power = 0.75;
  bool fixed_window = false;
  std::string label;
  std::string out;
};

int cmd_train(CLI::App* app, const TrainArgs& a, std::ostream& out, std::ostream& err) {
  format_for_path(a.out);
  std::vector<std::string> general, music, caches;
  for (const auto& p : a.corpus) {
    switch (classify_input(p)) {
      case InputKind::GeneralText: general.push_back(p); break;
      case InputKind::MusicRecords: music.push_back(p); break;
      case InputKind::TokenCache: caches.push_back(p); break;
    }
  }
  auto corpus = assemble(general, music, caches, MergeMode::Both, a.augment_copies, a.shared.seed, a.shared.workers);
  if (corpus.documents.empty()) throw Error(ErrorCode::EmptyCorpus, "the training corpus has no documents");

  TrainConfig cfg;
  cfg.dim = a.dim;
  cfg.window = a.window;
  cfg.epochs = a.epochs;
  cfg.negatives = a.negatives;
  cfg.initial_lr = a.lr;
  cfg.min_lr = a.min_lr;
  cfg.negative_table_size = a.table_size;
  cfg.unigram_power = a.unigram_power;
  cfg.workers = a.shared.workers;
  cfg.rng_seed = a.shared.seed;
  cfg.fixed_window = a.fixed_window;
  cfg.subsample_threshold = a.subsample;
  cfg.validate();

  const Vocabulary vocab = build_vocabulary(corpus.documents, a.min_count);
  TrainHooks hooks;
  if (a.shared.verbose) {
    hooks.progress = &err;
    err << "corpus: " << corpus.documents.size() << " documents, " << vocab.total_tokens() << " tokens, "
        << vocab.size() << " words\n";
  }
  const auto model = train(vocab, corpus.documents, cfg, hooks);

  CheckpointMetadata meta;
  meta.label = a.label.empty() ? fs::path(a.out).stem().string() : a.label;
  record_resolved(app, "--label", meta.label);
  meta.config = cfg;
  meta.stats = compute_corpus_stats(vocab, corpus.track_ids, corpus.artist_ids);
  save_checkpoint(a.out, model, meta);
  write_manifest(app, manifest_path_for(a.out));
  out << "model\t" << a.out << "\nwords\t" << vocab.size() << "\ntokens\t" << vocab.total_tokens() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  Shared shared;
  std::string model;
  std::vector<std::string> annotations;
  std::string tags;
  std::size_t top_tags = 0;
  std::size_t k = 30;
  std::string ground_truth = "raw";
  bool pooled = false;
  std::string label;
  std::string report;
};

int cmd_eval(CLI::App* app, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto store = load_vectors(a.model);
  EvaluationReport report;
  const auto meta = load_metadata(metadata_path(a.model));
  if (meta) report.stats = meta->stats;
  report.label = !a.label.empty() ? a.label : (meta && !meta->label.empty() ? meta->label : fs::path(a.model).stem().string());
  record_resolved(app, "--label", report.label);

  EvalOptions opts;
  opts.k = a.k;
  opts.pooled = a.pooled;
  opts.workers = a.shared.workers;
  opts.ground_truth = a.ground_truth == "ppmi"     ? GroundTruth::PositivePmi
                      : a.ground_truth == "cosine" ? GroundTruth::IncidenceCosine
                                                   : GroundTruth::RawCount;
  std::optional<std::vector<std::string>> universe;
  if (!a.tags.empty()) universe = read_word_list(a.tags);

  for (const auto& entry : a.annotations) {
    std::string name, path = entry;
    if (auto eq = entry.find('='); eq != std::string::npos && entry.substr(0, eq).find('/') == std::string::npos) {
      name = entry.substr(0, eq);
      path = entry.substr(eq + 1);
    }
    if (name.empty()) name = fs::path(path).stem().string();
    auto set = read_annotations(path);
    if (universe)
      set.use_tags(*universe);
    else if (a.top_tags > 0)
      set.use_top_tags(a.top_tags);
    const auto cooc = build_cooccurrence(set);
    auto result = evaluate_embedding(store, cooc, opts, name);
    if (a.shared.verbose)
      err << name << ": " << result.evaluated << " tags evaluated, " << result.skipped << " missing, "
          << result.rho_undefined << " with undefined rho\n";
    report.sets.push_back(std::move(result));
  }

  write_report_table(out, report);
  if (a.pooled)
    for (const auto& s : report.sets)
      out << s.name << ":pooled_spearman\t" << musicvec::detail::optional_value(s.pooled_spearman) << '\n';
  if (!a.report.empty()) {
    auto f = musicvec::detail::open_output(a.report);
    write_report_tsv(f, report);
    write_manifest(app, manifest_path_for(a.report));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct QueryArgs {
  Shared shared;
  std::string model;
  std::string word;
  std::size_t k = 10;
  std::string restrict_file;
};

int cmd_query(const QueryArgs& a, std::ostream& out) {
  const auto store = load_vectors(a.model);
  std::optional<std::vector<std::string>> restrict;
  if (!a.restrict_file.empty()) restrict = read_word_list(a.restrict_file);
  const auto result = restrict ? store.most_similar(a.word, a.k, std::span<const std::string>(*restrict))
                               : store.most_similar(a.word, a.k);
  char buf[64];
  for (const auto& n : result) {
    std::snprintf(buf, sizeof buf, "%.6f", n.cosine);
    out << n.word << '\t' << buf << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ProjectArgs {
  Shared shared;
  std::string model;
  std::string words_file;
  std::string words;
  double perplexity = 30;
  std::size_t iterations = 1000;
  std::string out;
};

int cmd_project(CLI::App* app, const ProjectArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::string> requested;
  if (!a.words_file.empty()) requested = read_word_list(a.words_file);
  for (auto& w : split_commas(a.words)) requested.push_back(std::move(w));
  if (requested.empty()) {
    err << "project: give --words-file or --words\n";
    return kExitUsage;
  }
  const auto store = load_vectors(a.model);
  std::vector<std::string> words;
  std::set<std::string> seen;
  for (const auto& w : requested) {
    if (!seen.insert(w).second) continue;
    if (store.contains(w))
      words.push_back(w);
    else
      err << "project: skipping '" << w << "' (not in the model)\n";
  }

  TsneConfig cfg;
  cfg.perplexity = a.perplexity;
  cfg.iterations = a.iterations;
  cfg.rng_seed = a.shared.seed;
  cfg.workers = a.shared.workers;
  const double n = static_cast<double>(words.size());
  if (3.0 * cfg.perplexity >= n) {
    const double reduced = std::nextafter((n - 1.0) / 3.0, 0.0);
    if (reduced < 2.0) {
      err << "project: " << words.size() << " words is too few for t-SNE (at least 7 are needed)\n";
      return kExitUsage;
    }
    err << "project: perplexity lowered from " << cfg.perplexity << " to " << reduced << " for " << words.size()
        << " words\n";
    cfg.perplexity = reduced;
  }

  std::vector<double> data;
  data.reserve(words.size() * store.dim());
  for (const auto& w : words)
    for (float x : store.vector(store.index(w))) data.push_back(x);
  const auto res = tsne_project(data, store.dim(), cfg);
  if (a.shared.verbose) err << "t-SNE KL divergence " << res.initial_kl << " -> " << res.final_kl << '\n';

  const auto emit = [&](std::ostream& o) {
    char buf[96];
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::snprintf(buf, sizeof buf, "\t%.9g\t%.9g\n", res.coords[i][0], res.coords[i][1]);
      o << words[i] << buf;
    }
  };
  if (a.out.empty()) {
    emit(out);
  } else {
    auto f = musicvec::detail::open_output(a.out);
    emit(f);
    write_manifest(app, manifest_path_for(a.out));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SyntheticArgs {
  Shared shared;
  std::string kind = "topics";
  std::string out_dir;
  std::size_t topics = 2;
  std::size_t words_per_topic = 20;
  std::size_t documents = 1000;
  std::size_t doc_length = 20;
  std::size_t tracks = 400;
  std::size_t general_documents = 600;
};

int cmd_gen_synthetic(CLI::App* app, const SyntheticArgs& a, std::ostream& out) {
  fs::create_directories(a.out_dir);
  const auto at = [&](const char* name) { return (fs::path(a.out_dir) / name).string(); };
  if (a.kind == "topics") {
    synthetic::TopicCorpusConfig cfg;
    cfg.topics = a.topics;
    cfg.words_per_topic = a.words_per_topic;
    cfg.documents = a.documents;
    cfg.document_length = a.doc_length;
    cfg.seed = a.shared.seed;
    const auto tc = synthetic::make_topic_corpus(cfg);
    {
      auto f = musicvec::detail::open_output(at("corpus.txt"));
      write_token_cache(f, tc.documents);
    }
    auto f = musicvec::detail::open_output(at("topics.tsv"));
    for (const auto& [w, t] : tc.topic_of) f << w << '\t' << t << '\n';
    out << "corpus\t" << at("corpus.txt") << "\ntopics\t" << at("topics.tsv") << '\n';
  } else {
    synthetic::MusicSetupConfig cfg;
    cfg.topics = a.topics;
    cfg.tracks = a.tracks;
    cfg.general_documents = a.general_documents;
    cfg.seed = a.shared.seed;
    const auto ms = synthetic::make_music_setup(cfg);
    {
      auto f = musicvec::detail::open_output(at("general.txt"));
      write_token_cache(f, ms.general);
    }
    {
      auto f = musicvec::detail::open_output(at("music.jsonl"));
      write_track_records(f, ms.records);
    }
    {
      auto f = musicvec::detail::open_output(at("annotations.tsv"));
      write_annotations(f, ms.annotations);
    }
    auto f = musicvec::detail::open_output(at("tag_topics.tsv"));
    for (const auto& [tag, t] : ms.tag_topic) f << tag << '\t' << t << '\n';
    out << "general\t" << at("general.txt") << "\nmusic\t" << at("music.jsonl") << "\nannotations\t"
        << at("annotations.tsv") << '\n';
  }
  write_manifest(app, at("gen-synthetic.manifest.toml"));
  return kExitOk;
}

/// CLI11 reads config files on the root app only; move "--config X" given
/// after the subcommand name in front of it.
std::vector<std::string> hoist_config(int argc, const char* const* argv) {
  std::vector<std::string> front, rest;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      front.push_back(arg);
      front.push_back(argv[++i]);
    } else if (arg.rfind("--config=", 0) == 0) {
      front.push_back(arg);
    } else {
      rest.push_back(arg);
    }
  }
  front.insert(front.end(), rest.begin(), rest.end());
  return front;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"musicvec: word embeddings over general and music corpora, with tag-based ranking evaluation",
               "musicvec"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option values from a TOML-style file (a run manifest works); flags win");

  BuildCorpusArgs build;
  auto* build_cmd = app.add_subcommand("build-corpus", "Ingest, cluster and augment corpora into a token cache");
  add_shared(build_cmd, build.shared);
  build_cmd->add_option("--general", build.general, "General text file, one document per line (repeatable)");
  build_cmd->add_option("--music", build.music, "Music track records, JSON lines (repeatable)");
  build_cmd->add_option("--mode", build.mode, "Which corpora to keep")
      ->check(CLI::IsMember({"general", "music", "both"}))
      ->capture_default_str();
  build_cmd->add_option("--augment-copies", build.augment_copies, "Shuffled copies per track cluster")
      ->capture_default_str();
  build_cmd->add_option("--out", build.out, "Output token cache (.tok)")->required();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train CBOW embeddings with negative sampling");
  add_shared(train_cmd, tr.shared);
  train_cmd->add_option("--corpus", tr.corpus,
                        "Training input (repeatable): .jsonl track records, .tok token cache, else plain text")
      ->required();
  train_cmd->add_option("--dim", tr.dim, "Vector size")->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--window", tr.window, "Maximum context window")->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--epochs", tr.epochs, "Passes over the corpus")->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--negatives", tr.negatives, "Negative samples per step")->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--lr", tr.lr, "Initial learning rate")->capture_default_str();
  train_cmd->add_option("--min-lr", tr.min_lr, "Learning-rate floor (default 1e-4 * lr)");
  train_cmd->add_option("--min-count", tr.min_count, "Drop words rarer than this")->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--subsample", tr.subsample, "Frequent-word subsampling threshold (off by default)");
  train_cmd->add_option("--augment-copies", tr.augment_copies, "Shuffled copies per track cluster")->capture_default_str();
  train_cmd->add_option("--table-size", tr.table_size, "Negative sampling table size")->capture_default_str();
  train_cmd->add_option("--unigram-power", tr.unigram_power, "Exponent of the negative sampling distribution")->capture_default_str();
  train_cmd->add_flag("--fixed-window", tr.fixed_window, "Always use the full window instead of sampling its width");
  train_cmd->add_option("--label", tr.label, "Corpus label for reports (default: output file stem)");
  train_cmd->add_option("--out", tr.out, "Output vectors (.bin or .txt); writes .output and .json sidecars")->required();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score an embedding against tag co-occurrence");
  add_shared(eval_cmd, ev.shared);
  eval_cmd->add_option("--model", ev.model, "Vector file (.bin or .txt)")->required();
  eval_cmd->add_option("--annotations", ev.annotations, "track<TAB>tag file, optionally name=path (repeatable)")
      ->required();
  eval_cmd->add_option("--tags", ev.tags, "Evaluation tag list, one per line (default: all annotated tags)");
  eval_cmd->add_option("--top-tags", ev.top_tags, "Use only the N most frequent annotated tags");
  eval_cmd->add_option("--k", ev.k, "nDCG cutoff")->check(CLI::PositiveNumber)->capture_default_str();
  eval_cmd->add_option("--ground-truth", ev.ground_truth, "Co-occurrence weighting")
      ->check(CLI::IsMember({"raw", "ppmi", "cosine"}))
      ->capture_default_str();
  eval_cmd->add_flag("--pooled", ev.pooled, "Also report rho over all tag pairs pooled");
  eval_cmd->add_option("--label", ev.label, "Row label (default: from the model metadata)");
  eval_cmd->add_option("--report", ev.report, "Write the report as TSV");

  QueryArgs q;
  auto* query_cmd = app.add_subcommand("query", "Nearest neighbours of a word");
  add_shared(query_cmd, q.shared);
  query_cmd->add_option("--model", q.model, "Vector file (.bin or .txt)")->required();
  query_cmd->add_option("--word", q.word, "Query word")->required();
  query_cmd->add_option("--k", q.k, "Number of neighbours")->check(CLI::PositiveNumber)->capture_default_str();
  query_cmd->add_option("--restrict-file", q.restrict_file, "Only rank words listed in this file, one per line");

  ProjectArgs pr;
  auto* project_cmd = app.add_subcommand("project", "2D t-SNE coordinates for a word list");
  add_shared(project_cmd, pr.shared);
  project_cmd->add_option("--model", pr.model, "Vector file (.bin or .txt)")->required();
  project_cmd->add_option("--words-file", pr.words_file, "Words to project, one per line (extra columns ignored)");
  project_cmd->add_option("--words", pr.words, "Comma-separated words to project");
  project_cmd->add_option("--perplexity", pr.perplexity, "t-SNE perplexity")->capture_default_str();
  project_cmd->add_option("--iterations", pr.iterations, "Gradient descent iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  project_cmd->add_option("--out", pr.out, "Output TSV (default: standard output)");

  SyntheticArgs syn;
  auto* syn_cmd = app.add_subcommand("gen-synthetic", "Write topic-structured toy corpora and annotations");
  add_shared(syn_cmd, syn.shared);
  syn_cmd->add_option("--kind", syn.kind, "topics: plain topic corpus; music: general text, tracks, annotations")
      ->check(CLI::IsMember({"topics", "music"}))
      ->capture_default_str();
  syn_cmd->add_option("--out-dir", syn.out_dir, "Output directory")->required();
  syn_cmd->add_option("--topics", syn.topics, "Number of topics")->check(CLI::PositiveNumber)->capture_default_str();
  syn_cmd->add_option("--words-per-topic", syn.words_per_topic, "Words per topic (topics)")->capture_default_str();
  syn_cmd->add_option("--documents", syn.documents, "Documents (topics)")->capture_default_str();
  syn_cmd->add_option("--doc-length", syn.doc_length, "Tokens per document (topics)")->capture_default_str();
  syn_cmd->add_option("--tracks", syn.tracks, "Tracks (music)")->capture_default_str();
  syn_cmd->add_option("--general-docs", syn.general_documents, "General documents (music)")->capture_default_str();

  try {
    auto args = hoist_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build_cmd) return cmd_build_corpus(build_cmd, build, out, err);
    if (*train_cmd) return cmd_train(train_cmd, tr, out, err);
    if (*eval_cmd) return cmd_eval(eval_cmd, ev, out, err);
    if (*query_cmd) return cmd_query(q, out);
    if (*project_cmd) return cmd_project(project_cmd, pr, out, err);
    if (*syn_cmd) return cmd_gen_synthetic(syn_cmd, syn, out);
  } catch (const Error& e) {
    err << "musicvec: " << e.what() << '\n';
    return e.is_data_error() ? kExitData : kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "musicvec: malformed JSON: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "musicvec: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace musicvec::cli
