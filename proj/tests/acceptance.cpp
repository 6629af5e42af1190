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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Usage: acceptance [path-to-musicvec-binary]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "musicvec.hpp"

namespace fs = std::filesystem;
using namespace musicvec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double normal(Rng& rng) {
  const double u1 = 1.0 - detail::uniform01(rng);
  const double u2 = detail::uniform01(rng);
  return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "musicvec_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// ---------------------------------------------------------------------------
// C1: analytic CBOW gradients vs central finite differences.

using DModel = BasicEmbeddingModel<double>;

double oracle_loss(const DModel& m, const std::vector<WordIndex>& ctx, WordIndex target,
                   const std::vector<WordIndex>& negs) {
  std::vector<double> h(m.dim, 0.0);
  for (auto c : ctx)
    for (std::size_t d = 0; d < m.dim; ++d) h[d] += m.input[c * m.dim + d] / ctx.size();
  const auto dot = [&](WordIndex w) {
    double s = 0;
    for (std::size_t d = 0; d < m.dim; ++d) s += m.output[w * m.dim + d] * h[d];
    return s;
  };
  double loss = std::log1p(std::exp(-dot(target)));
  for (auto n : negs) loss += std::log1p(std::exp(dot(n)));
  return loss;
}

Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  double worst = 0;
  const int steps = 1000;
  bool untouched_ok = true;
  for (int s = 0; s < steps; ++s) {
    const std::size_t v = 2 + detail::uniform_below(rng, 49);
    const std::size_t dim = 1 + detail::uniform_below(rng, 8);
    std::vector<std::pair<std::string, std::uint64_t>> counts;
    for (std::size_t i = 0; i < v; ++i) counts.emplace_back("w" + std::to_string(i), 1);
    TrainConfig cfg;
    cfg.dim = dim;
    DModel m = init_model<double>(Vocabulary::from_counts(counts), cfg);
    for (auto& x : m.input) x = detail::uniform01(rng) - 0.5;
    for (auto& x : m.output) x = detail::uniform01(rng) - 0.5;
    std::vector<WordIndex> ctx(1 + detail::uniform_below(rng, 10));
    for (auto& c : ctx) c = static_cast<WordIndex>(detail::uniform_below(rng, v));
    const auto target = static_cast<WordIndex>(detail::uniform_below(rng, v));
    std::vector<WordIndex> negs(detail::uniform_below(rng, 6));
    for (auto& n : negs) {
      do n = static_cast<WordIndex>(detail::uniform_below(rng, v));
      while (n == target);
    }
    const double lr = 0.05;
    DModel before = m;
    cbow_update<double>(m, ctx, target, negs, lr);

    std::set<WordIndex> in_rows(ctx.begin(), ctx.end());
    std::set<WordIndex> out_rows(negs.begin(), negs.end());
    out_rows.insert(target);
    for (int which = 0; which < 2; ++which) {
      auto& base = which == 0 ? before.input : before.output;
      const auto& after = which == 0 ? m.input : m.output;
      const auto& rows = which == 0 ? in_rows : out_rows;
      for (WordIndex w = 0; w < v; ++w) {
        if (!rows.count(w)) {
          for (std::size_t d = 0; d < dim; ++d) untouched_ok &= base[w * dim + d] == after[w * dim + d];
          continue;
        }
        double diff = 0, na = 0, nn = 0;
        for (std::size_t d = 0; d < dim; ++d) {
          const std::size_t i = w * dim + d;
          const double analytic = (base[i] - after[i]) / lr;
          const double keep = base[i];
          base[i] = keep + 1e-6;
          const double up = oracle_loss(before, ctx, target, negs);
          base[i] = keep - 1e-6;
          const double down = oracle_loss(before, ctx, target, negs);
          base[i] = keep;
          const double numeric = (up - down) / 2e-6;
          diff += (analytic - numeric) * (analytic - numeric);
          na += analytic * analytic;
          nn += numeric * numeric;
        }
        const double scale = std::sqrt(std::max(na, nn));
        if (scale > 0) worst = std::max(worst, std::sqrt(diff) / scale);
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && untouched_ok && secs < 10,
          "steps=" + std::to_string(steps) + " max_rel_err=" + fmt("%.3g", worst) + " (< 1e-4)" +
              (untouched_ok ? "" : " UNTOUCHED ROWS CHANGED") + " time=" + fmt("%.2f", secs) + "s (< 10s)"};
}

// ---------------------------------------------------------------------------
// C2 / C9: two-topic separation.

Outcome topic_separation(std::size_t workers) {
  const auto t0 = Clock::now();
  const auto tc = synthetic::make_topic_corpus({});
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.window = 5;
  cfg.epochs = 5;
  cfg.workers = workers;
  const auto model = train(std::span<const Document>(tc.documents), cfg);
  const auto store = EmbeddingStore::from_model(model);
  double intra = 0, inter = 0;
  std::size_t n_intra = 0, n_inter = 0;
  for (WordIndex i = 0; i < store.size(); ++i)
    for (WordIndex j = i + 1; j < store.size(); ++j) {
      const double c = store.cosine(i, j);
      if (tc.topic_of.at(store.word(i)) == tc.topic_of.at(store.word(j)))
        intra += c, ++n_intra;
      else
        inter += c, ++n_inter;
    }
  const double gap = intra / n_intra - inter / n_inter;
  std::size_t min_same = 10;
  for (WordIndex i = 0; i < store.size(); ++i) {
    std::size_t same = 0;
    for (const auto& nb : store.most_similar(store.word(i), 10))
      same += tc.topic_of.at(nb.word) == tc.topic_of.at(store.word(i));
    min_same = std::min(min_same, same);
  }
  const double secs = seconds_since(t0);
  return {gap >= 0.2 && min_same >= 8 && secs < 60 && model.all_finite(),
          "workers=" + std::to_string(workers) + " intra-inter=" + fmt("%.4f", gap) +
              " (>= 0.2) min_same_topic_top10=" + std::to_string(min_same) + " (>= 8) time=" + fmt("%.2f", secs) +
              "s (< 60s)"};
}

// ---------------------------------------------------------------------------
// C3: music-corpus models beat the general-only model.

Outcome trend_reproduction() {
  const auto t0 = Clock::now();
  int wins_music = 0, wins_both = 0;
  double sum_general = 0, sum_music = 0, sum_both = 0;
  const int seeds = 10;
  for (int seed = 1; seed <= seeds; ++seed) {
    synthetic::MusicSetupConfig mc;
    mc.seed = static_cast<std::uint64_t>(seed);
    const auto setup = synthetic::make_music_setup(mc);
    Corpus clusters;
    for (const auto& r : setup.records) clusters.push_back(build_cluster_document(r));
    const Corpus music = augment_corpus(clusters, 5, mc.seed);
    const auto cooc = build_cooccurrence(setup.annotations);
    TrainConfig cfg;
    cfg.dim = 32;
    cfg.rng_seed = mc.seed;
    cfg.negative_table_size = 1'000'000;
    const auto score = [&](MergeMode mode) {
      const Corpus docs = merge_corpora(setup.general, music, mode);
      const auto store = EmbeddingStore::from_model(train(std::span<const Document>(docs), cfg));
      const auto r = evaluate_embedding(store, cooc);
      return r.mean_spearman.value_or(-2.0);
    };
    const double g = score(MergeMode::GeneralOnly);
    const double m = score(MergeMode::MusicOnly);
    const double b = score(MergeMode::Both);
    sum_general += g, sum_music += m, sum_both += b;
    wins_music += m > g;
    wins_both += b > g;
  }
  const double secs = seconds_since(t0);
  return {wins_music >= 9 && wins_both >= 9 && secs < 300,
          "music>general in " + std::to_string(wins_music) + "/10, general+music>general in " +
              std::to_string(wins_both) + "/10 (>= 9); mean rho general=" + fmt("%.3f", sum_general / seeds) +
              " music=" + fmt("%.3f", sum_music / seeds) + " general+music=" + fmt("%.3f", sum_both / seeds) +
              " time=" + fmt("%.1f", secs) + "s (< 300s)"};
}

// ---------------------------------------------------------------------------
// C4: augmentation properties.

Outcome augmentation() {
  Rng rng(77);
  Corpus docs;
  std::size_t volume = 0;
  for (int i = 0; i < 1000; ++i) {
    Document d;
    d.kind = DocumentKind::TrackCluster;
    const auto n = detail::uniform_below(rng, 30);
    for (std::size_t j = 0; j < n; ++j) d.tokens.push_back("w" + std::to_string(detail::uniform_below(rng, 12)));
    volume += d.tokens.size();
    docs.push_back(std::move(d));
  }
  bool multiset_ok = true, growth_ok = true;
  for (std::uint32_t copies : {0u, 1u, 5u}) {
    const auto out = augment_corpus(docs, copies, 99, 4);
    std::size_t out_volume = 0;
    growth_ok &= out.size() == docs.size() * (copies + 1);
    for (std::size_t i = 0; i < out.size() && growth_ok; ++i) {
      auto want = docs[i / (copies + 1)].tokens;
      auto got = out[i].tokens;
      out_volume += got.size();
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      multiset_ok &= want == got;
    }
    growth_ok &= out_volume == volume * (copies + 1);
  }
  const Document abc{{"a", "b", "c"}, DocumentKind::TrackCluster};
  const auto shuffles = shuffle_augment(abc, 10000, 5);
  std::map<std::vector<std::string>, int> patterns;
  for (std::size_t i = 1; i < shuffles.size(); ++i) ++patterns[shuffles[i].tokens];
  double chi2 = 0;
  for (const auto& [p, n] : patterns) chi2 += (n - 10000.0 / 6) * (n - 10000.0 / 6) / (10000.0 / 6);
  chi2 += (6.0 - patterns.size()) * 10000.0 / 6;
  const double coverage = patterns.size() / 6.0;
  return {multiset_ok && growth_ok && coverage >= 0.95,
          std::string("multiset=") + (multiset_ok ? "ok" : "BROKEN") + " growth=" + (growth_ok ? "ok" : "BROKEN") +
              " patterns=" + std::to_string(patterns.size()) + "/6 (>= 95%) chi2(5df)=" + fmt("%.2f", chi2)};
}

// ---------------------------------------------------------------------------
// C5: metric oracles.

Outcome metric_oracles() {
  Rng rng(5);
  double worst_rho = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + detail::uniform_below(rng, 30);
    std::vector<double> x(n), y(n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[detail::uniform_below(rng, i)]);
    double d2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(i) * 1.5 - 3;
      y[i] = static_cast<double>(perm[i]);
      d2 += (double(i) - double(perm[i])) * (double(i) - double(perm[i]));
    }
    const double closed = 1.0 - 6.0 * d2 / (double(n) * (double(n) * n - 1));
    worst_rho = std::max(worst_rho, std::abs(spearman(x, y) - closed));
  }
  // Hand-built tie cases: ranks [1.5,1.5,3] vs [1,2,3] -> rho = sqrt(3)/2;
  // [1,1,2,2] vs [1,2,3,4] -> rho = 2/sqrt(5).
  const double tie1 = spearman(std::vector<double>{7, 7, 9}, std::vector<double>{1, 2, 3});
  const double tie2 = spearman(std::vector<double>{1, 1, 2, 2}, std::vector<double>{1, 2, 3, 4});
  const double tie_err = std::max(std::abs(tie1 - std::sqrt(3.0) / 2), std::abs(tie2 - 2 / std::sqrt(5.0)));

  double worst_ndcg = 0, max_ndcg = 0;
  std::size_t perms = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 6;
    std::vector<double> rel(n);
    for (auto& r : rel) r = double(detail::uniform_below(rng, 5)) * (t % 2 ? 0.37 : 1.0);
    const std::size_t k = 1 + detail::uniform_below(rng, n + 2);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // The normalizer is the best DCG over every permutation.
    double best = 0;
    std::vector<std::vector<double>> all;
    do {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = rel[order[i]];
      double dcg = 0;
      for (std::size_t i = 0; i < std::min(k, n); ++i) dcg += p[i] / std::log2(i + 2.0);
      best = std::max(best, dcg);
      all.push_back(std::move(p));
    } while (std::next_permutation(order.begin(), order.end()));
    for (const auto& p : all) {
      double dcg = 0;
      for (std::size_t i = 0; i < std::min(k, n); ++i) dcg += p[i] / std::log2(i + 2.0);
      const double want = best == 0 ? 0 : dcg / best;
      const double got = ndcg_at_k(p, k);
      worst_ndcg = std::max(worst_ndcg, std::abs(got - want));
      max_ndcg = std::max(max_ndcg, got);
      ++perms;
    }
  }
  return {worst_rho < 1e-12 && tie_err < 1e-12 && worst_ndcg < 1e-12 && max_ndcg <= 1.0,
          "spearman max|delta|=" + fmt("%.2g", worst_rho) + " ties max|delta|=" + fmt("%.2g", tie_err) +
              " ndcg max|delta|=" + fmt("%.2g", worst_ndcg) + " over " + std::to_string(perms) +
              " orderings, max=" + fmt("%.17g", max_ndcg) + " (<= 1)"};
}

// ---------------------------------------------------------------------------
// C6: co-occurrence oracle.

Outcome cooccurrence_oracle() {
  Rng rng(6);
  std::size_t mismatches = 0, cells = 0;
  for (int t = 0; t < 100; ++t) {
    TagAnnotationSet s;
    const std::size_t tracks = 1 + detail::uniform_below(rng, 20);
    const std::size_t tags = 1 + detail::uniform_below(rng, 8);
    std::vector<std::vector<bool>> has(tracks, std::vector<bool>(tags, false));
    for (std::size_t tr = 0; tr < tracks; ++tr)
      for (std::size_t g = 0; g < tags; ++g)
        if (detail::uniform01(rng) < 0.4) {
          has[tr][g] = true;
          s.annotations["tr" + std::to_string(tr)].insert("tag" + std::to_string(g));
        }
    for (std::size_t g = 0; g < tags; ++g) s.tag_universe.push_back("tag" + std::to_string(g));
    const auto m = build_cooccurrence(s);
    for (std::size_t i = 0; i < tags; ++i)
      for (std::size_t j = 0; j < tags; ++j) {
        std::uint64_t brute = 0;
        for (std::size_t tr = 0; tr < tracks; ++tr) brute += has[tr][i] && has[tr][j];
        const auto mi = *m.find("tag" + std::to_string(i));
        const auto mj = *m.find("tag" + std::to_string(j));
        mismatches += m(mi, mj) != brute;
        ++cells;
      }
  }
  return {mismatches == 0,
          "100 instances, " + std::to_string(cells) + " cells, mismatches=" + std::to_string(mismatches)};
}

// ---------------------------------------------------------------------------
// C7: serialization.

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return std::string(to_string(e.code()));
  }
  return "none";
}

Outcome serialization() {
  const fs::path dir = work_dir() / "c7";
  fs::create_directories(dir);
  Rng rng(7);
  bool binary_ok = true, text_ok = true;
  double worst_text = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t v = 1 + detail::uniform_below(rng, 50), dim = 1 + detail::uniform_below(rng, 20);
    std::vector<std::string> words;
    std::vector<float> vec(v * dim);
    for (std::size_t i = 0; i < v; ++i) words.push_back("w" + std::to_string(i) + (i % 3 ? "" : "_tag"));
    for (auto& x : vec) x = static_cast<float>(normal(rng) * std::pow(10.0, double(detail::uniform_below(rng, 9)) - 4));
    const EmbeddingStore store(words, dim, vec);
    save_vectors((dir / "v.bin").string(), store);
    save_vectors((dir / "v.txt").string(), store);
    const auto b = load_vectors((dir / "v.bin").string());
    const auto x = load_vectors((dir / "v.txt").string());
    binary_ok &= b.words() == words && std::memcmp(b.data().data(), vec.data(), vec.size() * sizeof(float)) == 0;
    text_ok &= x.words() == words;
    for (std::size_t i = 0; i < vec.size(); ++i) worst_text = std::max(worst_text, double(std::abs(x.data()[i] - vec[i])));
  }
  text_ok &= worst_text <= 1e-6;

  const auto write = [&](const std::string& name, const std::string& bytes) {
    std::ofstream(dir / name, std::ios::binary) << bytes;
    return (dir / name).string();
  };
  const EmbeddingStore small({"a", "b"}, 2, {1, 2, 3, 4});
  save_vectors((dir / "s.bin").string(), small);
  const std::string full = slurp(dir / "s.bin");
  const std::vector<std::pair<std::string, std::string>> cases{
      {error_of([&] { load_vectors(write("h.txt", "two 2\na 1 2\n")); }), "MalformedHeader"},
      {error_of([&] { load_vectors(write("h.bin", "")); }), "MalformedHeader"},
      {error_of([&] { load_vectors(write("t.bin", full.substr(0, full.size() - 3))); }), "TruncatedFile"},
      {error_of([&] { load_vectors(write("t.txt", "2 2\na 1 2\nb 3\n")); }), "TruncatedFile"},
      {error_of([&] { load_vectors(write("d.txt", "2 2\na 1 2\na 3 4\n")); }), "DuplicateWord"},
      {error_of([&] { load_vectors(write("d.bin", full.substr(0, 4) + "a " + full.substr(6, 8) + "a " +
                                                      full.substr(16))); }),
       "DuplicateWord"},
  };
  std::size_t errors_ok = 0;
  std::string seen;
  for (const auto& [got, want] : cases) {
    errors_ok += got == want;
    seen += (seen.empty() ? "" : ",") + got;
  }
  return {binary_ok && text_ok && errors_ok == cases.size(),
          std::string("binary bit-exact=") + (binary_ok ? "yes" : "NO") + " text max|delta|=" +
              fmt("%.2g", worst_text) + " (<= 1e-6) malformed=" + std::to_string(errors_ok) + "/" +
              std::to_string(cases.size()) + " [" + seen + "]"};
}

// ---------------------------------------------------------------------------
// C8: determinism with one worker, in-process and through the CLI.

int run_cli(const std::string& exe, const std::string& args) {
  const std::string cmd = "\"" + exe + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism(const std::string& exe) {
  const fs::path dir = work_dir() / "c8";
  fs::create_directories(dir);
  synthetic::MusicSetupConfig mc;
  mc.tracks = 200;
  const auto setup = synthetic::make_music_setup(mc);
  Corpus clusters;
  for (const auto& r : setup.records) clusters.push_back(build_cluster_document(r));
  const Corpus docs = merge_corpora(setup.general, augment_corpus(clusters, 5, 1), MergeMode::Both);
  TrainConfig cfg;
  cfg.dim = 24;
  cfg.negative_table_size = 1'000'000;
  cfg.subsample_threshold = 1e-3;
  const auto cooc = build_cooccurrence(setup.annotations);

  std::vector<std::string> runs[2];
  for (int r = 0; r < 2; ++r) {
    const auto model = train(std::span<const Document>(docs), cfg);
    const auto store = EmbeddingStore::from_model(model);
    std::ostringstream vec, rep, proj;
    save_vectors(vec, store, VectorFormat::Binary);
    EvaluationReport report;
    EvalOptions eo;
    eo.pooled = true;
    report.sets.push_back(evaluate_embedding(store, cooc, eo));
    write_report_tsv(rep, report);
    std::vector<double> data;
    for (const auto& tag : cooc.tags())
      for (float x : store.vector(store.index(tag))) data.push_back(x);
    TsneConfig tc;
    tc.perplexity = 5;
    tc.iterations = 300;
    for (const auto& p : tsne_project(data, store.dim(), tc).coords) proj << fmt("%.17g", p[0]) << fmt(" %.17g\n", p[1]);
    runs[r] = {vec.str(), rep.str(), proj.str()};
  }
  const bool lib_ok = runs[0] == runs[1];

  std::string cli_note = "cli=not run (no binary path given)";
  bool cli_ok = exe.empty();
  if (!exe.empty()) {
    const std::string d = "\"" + dir.string() + "/";
    bool ok = run_cli(exe, "gen-synthetic --kind music --tracks 150 --general-docs 100 --seed 4 --out-dir " + d + "syn\"") == 0;
    for (int r = 0; r < 2 && ok; ++r) {
      const std::string sfx = std::to_string(r);
      if (r == 0) {
        ok &= run_cli(exe, "train --corpus " + d + "syn/general.txt\" --corpus " + d +
                               "syn/music.jsonl\" --dim 16 --epochs 2 --table-size 200000 --workers 1 --out " + d +
                               "m0.bin\"") == 0;
        ok &= run_cli(exe, "eval --model " + d + "m0.bin\" --annotations syn=" + d +
                               "syn/annotations.tsv\" --workers 1 --report " + d + "r0.tsv\"") == 0;
        ok &= run_cli(exe, "project --model " + d + "m0.bin\" --words-file " + d +
                               "syn/tag_topics.tsv\" --iterations 300 --workers 1 --out " + d + "p0.tsv\"") == 0;
      } else {
        // Replay each command from the manifest written by the first run.
        ok &= run_cli(exe, "--config " + d + "m0.bin.manifest.toml\" train --out " + d + "m" + sfx + ".bin\"") == 0;
        ok &= run_cli(exe, "--config " + d + "r0.tsv.manifest.toml\" eval --model " + d + "m" + sfx +
                               ".bin\" --report " + d + "r" + sfx + ".tsv\"") == 0;
        ok &= run_cli(exe, "--config " + d + "p0.tsv.manifest.toml\" project --model " + d + "m" + sfx +
                               ".bin\" --out " + d + "p" + sfx + ".tsv\"") == 0;
      }
    }
    const auto same = [&](const std::string& a, const std::string& b) {
      const auto x = slurp(dir / a);
      return !x.empty() && x == slurp(dir / b);
    };
    cli_ok = ok && same("m0.bin", "m1.bin") && same("m0.bin.output", "m1.bin.output") &&
             same("r0.tsv", "r1.tsv") && same("p0.tsv", "p1.tsv");
    cli_note = std::string("cli train/eval/project replayed from manifests: ") + (cli_ok ? "byte-identical" : "DIFFERENT or failed");
  }
  return {lib_ok && cli_ok, std::string("library train/eval/project: ") + (lib_ok ? "byte-identical" : "DIFFERENT") +
                                "; " + cli_note};
}

// ---------------------------------------------------------------------------
// C10: t-SNE.

struct Blobs {
  std::vector<double> data;
  std::vector<int> label;
};

Blobs gaussian_blobs(std::size_t per_cluster, std::uint64_t seed) {
  Rng rng(seed);
  Blobs b;
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < per_cluster; ++i) {
      for (int d = 0; d < 10; ++d) b.data.push_back((d == k ? 10 / std::sqrt(2.0) : 0.0) + normal(rng));
      b.label.push_back(k);
    }
  return b;
}

double knn_purity(const std::vector<std::array<double, 2>>& y, const std::vector<int>& label) {
  std::size_t good = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (j != i) d.push_back({std::hypot(y[i][0] - y[j][0], y[i][1] - y[j][1]), j});
    std::partial_sort(d.begin(), d.begin() + 5, d.end());
    int votes[3] = {0, 0, 0};
    for (int t = 0; t < 5; ++t) ++votes[label[d[t].second]];
    good += std::max_element(votes, votes + 3) - votes == label[i];
  }
  return double(good) / y.size();
}

Outcome tsne_criterion() {
  std::string detail;
  bool pass = true;
  for (std::size_t per : {30u, 100u}) {
    const auto blobs = gaussian_blobs(per, 10 + per);
    const auto t0 = Clock::now();
    TsneConfig cfg;
    cfg.perplexity = per == 30 ? 20 : 30;
    const auto r = tsne_project(blobs.data, 10, cfg);
    const double secs = seconds_since(t0);
    double worst = 0;
    for (double p : r.perplexities) worst = std::max(worst, std::abs(p - cfg.perplexity) / cfg.perplexity);
    const double purity = knn_purity(r.coords, blobs.label);
    pass &= worst < 1e-5 && r.final_kl < r.initial_kl && purity >= 0.9 && secs < 60;
    detail += (detail.empty() ? "" : "; ") + std::string("N=") + std::to_string(3 * per) + " perp_rel_err=" +
              fmt("%.2g", worst) + " KL " + fmt("%.3f", r.initial_kl) + "->" + fmt("%.3f", r.final_kl) +
              " 5NN_purity=" + fmt("%.3f", purity) + " time=" + fmt("%.2f", secs) + "s";
  }
  return {pass, detail + " (limits: 1e-5, final<initial, >= 0.9, < 60s)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string exe = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 gradient oracle", gradient_oracle},
      {"C2 topic separation", [] { return topic_separation(1); }},
      {"C3 trend reproduction", trend_reproduction},
      {"C4 augmentation", augmentation},
      {"C5 metric oracles", metric_oracles},
      {"C6 co-occurrence oracle", cooccurrence_oracle},
      {"C7 serialization", serialization},
      {"C8 determinism", [&] { return determinism(exe); }},
      {"C9 parallel soundness", [] { return topic_separation(4); }},
      {"C10 t-SNE", tsne_criterion},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS  " : "FAIL  ") << name << ": " << o.detail << std::endl;
  }
  fs::remove_all(work_dir());
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
