#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "art/adaptive.hpp"
#include "art/instruction.hpp"
#include "art/rng.hpp"
#include "art/types.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("art_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string dir() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline art::PredicateVocabulary fixture_vocab() {
  art::PredicateVocabulary vocab;
  vocab.add("above", art::RelationCategory::spatial);
  vocab.add("on", art::RelationCategory::spatial);
  vocab.add("under", art::RelationCategory::spatial);
  vocab.add("wearing", art::RelationCategory::possessive);
  vocab.add("has", art::RelationCategory::possessive);
  vocab.add("with", art::RelationCategory::possessive);
  vocab.add("eating", art::RelationCategory::semantic);
  vocab.add("watching", art::RelationCategory::semantic);
  vocab.add("floating on", art::RelationCategory::semantic);
  return vocab;
}

inline art::RelationTriplet make_triplet(const std::string& id,
                                         const std::string& image_id,
                                         const std::string& subject,
                                         const std::string& predicate,
                                         const std::string& object) {
  art::RelationTriplet t;
  t.id = id;
  t.image_id = image_id;
  t.subject = subject;
  t.predicate = predicate;
  t.object = object;
  t.subject_box = {0, 0, 10, 10};
  t.object_box = {5, 5, 20, 20};
  return t;
}

inline art::PredictionRecord make_record(const std::string& id, double entropy,
                                         art::Outcome outcome,
                                         double similarity = 0.0) {
  art::PredictionRecord r;
  r.instance_id = id;
  r.entropy = entropy;
  r.outcome = outcome;
  if (outcome == art::Outcome::fp) r.similarity = similarity;
  r.confidence = -entropy;
  return r;
}

// Random pools for oracle comparisons.
inline art::PredicatePools random_pools(std::uint64_t seed, int max_per_pool) {
  art::Rng rng(seed);
  art::PredicatePools pools;
  int serial = 0;
  const auto fill = [&](std::vector<art::PredictionRecord>& pool,
                        art::Outcome outcome) {
    const int n = static_cast<int>(rng.below(max_per_pool + 1));
    for (int i = 0; i < n; ++i) {
      char id[16];
      std::snprintf(id, sizeof(id), "r%04d", serial++);
      const double entropy = rng.unit() * 3.0;
      const double similarity = rng.unit() * 2.0 - 1.0;
      pool.push_back(make_record(id, entropy, outcome, similarity));
    }
  };
  fill(pools.tp, art::Outcome::tp);
  fill(pools.fn, art::Outcome::fn);
  fill(pools.fp, art::Outcome::fp);
  return pools;
}

}  // namespace testutil
