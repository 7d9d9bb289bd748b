#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "art/adaptive.hpp"
#include "art/config.hpp"
#include "art/instruction.hpp"
#include "art/metrics.hpp"
#include "art/mock.hpp"
#include "art/scoring.hpp"
#include "art/types.hpp"

namespace art {

enum class Strategy { art, random, balanced };

const char* to_string(Strategy strategy);

struct PipelineConfig {
  double budget_fraction_per_loop = 0.02;
  double total_fraction = 0.12;
  long long loops = -1;  // -1: derived from total / per-loop fraction
  double val_fraction = 0.1;
  double z_init = 1.96;
  double z_step = 0.1;
  double similarity_threshold = 0.95;
  std::uint64_t seed = 0;
  long long budget_override = -1;  // absolute per-loop budget when >= 0

  GenerationConfig generation;
  AdaptiveConfig adaptive;
  EvalConfig eval;

  std::string embedding_provider = "builtin";  // builtin | external
  int embedding_dimension = 256;
  std::string embedding_table;

  Strategy strategy = Strategy::art;
  MockModelSpec mock;
  std::map<std::string, int> mock_frequencies;
  std::map<std::string, RelationCategory> mock_categories;
  int mock_heldout_count = 25;

  static PipelineConfig from_config(const Config& config);
  void validate() const;

  long long planned_loops() const;
  long long loop_budget(std::size_t pool_size) const;
  std::unique_ptr<EmbeddingProvider> make_embedding_provider() const;
  PredicateVocabulary mock_vocabulary() const;
};

// Seed precedence: command-line flag, then ART_SEED, then the config key.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed,
                           const Config& config);

void cmd_gen_instructions(const std::string& annotations_path,
                          const std::string& vocab_path,
                          const PipelineConfig& cfg, const std::string& out_path);

void cmd_partition(const std::string& annotations_path,
                   const std::string& vocab_path, const PipelineConfig& cfg,
                   const std::string& out_path);

void cmd_sample_balanced(const std::string& partition_path,
                         const PipelineConfig& cfg, const std::string& out_dir);

void cmd_sample_adaptive(const std::string& partition_path,
                         const std::string& records_path,
                         const std::string& recalls_path,
                         const std::string& instances_path,
                         const PipelineConfig& cfg, const std::string& out_dir);

void cmd_eval(const std::string& ground_truth_path,
              const std::string& records_path,
              const std::optional<std::string>& instances_path,
              const std::optional<std::string>& vocab_path,
              const PipelineConfig& cfg, const std::string& out_path);

void cmd_mock_predict(const std::string& instances_path,
                      const PipelineConfig& cfg,
                      const std::optional<std::string>& train_counts_path,
                      const std::string& out_path);

struct SimulationSummary {
  Strategy strategy = Strategy::art;
  std::uint64_t seed = 0;
  long long loops_run = 0;
  std::size_t total_non_val = 0;
  std::size_t train_size = 0;
  double train_share = 0;
  std::map<std::string, int> train_counts;
  MetricsReport heldout_metrics;
};

// Full closed loop against the mock model: synthesize, generate, partition,
// then one balanced loop followed by adaptive loops (strategy art), or the
// same schedule with random / balanced draws for the baselines. Writes all
// per-loop artifacts under out_dir and returns the summary.
SimulationSummary cmd_simulate(const PipelineConfig& cfg,
                               const std::string& out_dir);

// Per-predicate exact-match recall on a labeled set, unbounded k; the
// recall source for budget allocation, recomputed per loop.
std::map<std::string, double> validation_recalls(
    const std::vector<PredictionRecord>& records,
    const std::map<std::string, InstructionInstance>& instances);

}  // namespace art
