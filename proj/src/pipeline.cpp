#include "art/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "art/balanced.hpp"
#include "art/dataset.hpp"
#include "art/io.hpp"
#include "art/rng.hpp"
#include "art/text.hpp"

namespace fs = std::filesystem;

namespace art {

using nlohmann::json;

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::art:
      return "art";
    case Strategy::random:
      return "random";
    case Strategy::balanced:
      return "balanced";
  }
  throw std::logic_error("unreachable strategy");
}

namespace {

NegativeMode parse_negative_mode(const std::string& value) {
  if (value == "counter") return NegativeMode::counter;
  if (value == "random") return NegativeMode::random;
  if (value == "none") return NegativeMode::none;
  throw std::runtime_error(
      "config: key 'generation.negative_mode' must be counter, random or none");
}

Strategy parse_strategy(const std::string& value) {
  if (value == "art") return Strategy::art;
  if (value == "random") return Strategy::random;
  if (value == "balanced") return Strategy::balanced;
  throw std::runtime_error("config: key 'strategy' must be art, random or balanced");
}

std::map<std::string, int> train_predicate_counts(const DatasetPartition& p) {
  std::map<std::string, int> counts;
  for (const auto& id : p.train_ids) ++counts[p.predicate_of.at(id)];
  return counts;
}

std::vector<PredictionRecord> flatten_pools(const OutcomePools& pools) {
  std::vector<PredictionRecord> out;
  for (const auto& [predicate, pool] : pools) {
    out.insert(out.end(), pool.tp.begin(), pool.tp.end());
    out.insert(out.end(), pool.fn.begin(), pool.fn.end());
    out.insert(out.end(), pool.fp.begin(), pool.fp.end());
  }
  return out;
}

json metrics_to_json(const MetricsReport& report) {
  json k_map = json::object();
  for (const auto& [k, values] : report.at_k) {
    json entry;
    entry["R"] = values.recall;
    entry["mR"] = values.mean_recall;
    entry["gR"] = values.g_recall;
    entry["gmR"] = values.g_mean_recall;
    k_map[std::to_string(k)] = entry;
  }
  json per_predicate = json::object();
  for (const auto& [predicate, recalls] : report.per_predicate) {
    json entry = json::object();
    for (const auto& [k, r] : recalls) entry[std::to_string(k)] = r;
    per_predicate[predicate] = entry;
  }
  json out;
  out["k"] = k_map;
  out["per_predicate"] = per_predicate;
  out["unique"] = report.unique_predictions;
  out["unseen"] = report.unseen_predictions;
  return out;
}

std::map<std::string, int> load_counts(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("counts '" + path + "': malformed JSON (" + e.what() +
                             ")");
  }
  std::map<std::string, int> out;
  for (const auto& [predicate, count] : j.items()) {
    out[normalize_phrase(predicate)] = count.get<int>();
  }
  return out;
}

// Vocabulary inferred from instances, for commands that receive no explicit
// vocabulary file.
PredicateVocabulary vocabulary_from_instances(
    const std::vector<InstructionInstance>& instances) {
  PredicateVocabulary vocab;
  for (const auto& inst : instances) {
    if (!vocab.contains(inst.predicate)) {
      vocab.add(inst.predicate, inst.positive_category);
    }
  }
  return vocab;
}

std::vector<InstructionInstance> instances_for_ids(
    const std::map<std::string, InstructionInstance>& by_id,
    const std::set<std::string>& ids) {
  std::vector<InstructionInstance> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw std::runtime_error("no instance for id '" + id + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::from_config(const Config& config) {
  PipelineConfig cfg;
  cfg.budget_fraction_per_loop =
      config.get_double("budget_fraction_per_loop", cfg.budget_fraction_per_loop);
  cfg.total_fraction = config.get_double("total_fraction", cfg.total_fraction);
  const std::string loops = config.get_string("loops", "auto");
  cfg.loops = loops == "auto" ? -1 : config.get_int("loops", -1);
  cfg.val_fraction = config.get_double("val_fraction", cfg.val_fraction);
  cfg.z_init = config.get_double("z_init", cfg.z_init);
  cfg.z_step = config.get_double("z_step", cfg.z_step);
  cfg.similarity_threshold =
      config.get_double("similarity_threshold", cfg.similarity_threshold);
  cfg.seed = config.get_seed("seed", 0);
  cfg.budget_override = config.get_int("budget", -1);

  cfg.generation.negatives_per_sample = static_cast<int>(
      config.get_int("generation.negatives_per_sample", 1));
  cfg.generation.mode =
      parse_negative_mode(config.get_string("generation.negative_mode", "counter"));

  const std::string mode = config.get_string("adaptive.mode", "adaptive");
  if (mode == "adaptive") {
    cfg.adaptive.mode = ThresholdMode::adaptive;
  } else if (mode == "fixed") {
    cfg.adaptive.mode = ThresholdMode::fixed;
  } else {
    throw std::runtime_error("config: key 'adaptive.mode' must be adaptive or fixed");
  }
  cfg.adaptive.z_init = cfg.z_init;
  cfg.adaptive.z_step = cfg.z_step;
  cfg.adaptive.fixed.t_fp = config.get_double("adaptive.fixed.t_fp", 0.95);
  cfg.adaptive.fixed.t_fn = config.get_double("adaptive.fixed.t_fn", 0.5);
  cfg.adaptive.fixed.h_fn = config.get_double("adaptive.fixed.h_fn", 0.5);
  cfg.adaptive.fixed.h_tp = config.get_double("adaptive.fixed.h_tp", 0.5);

  cfg.eval.k_values = config.get_int_list("eval.k_values", {20, 50});
  cfg.eval.similarity_threshold = cfg.similarity_threshold;
  const std::string key = config.get_string("eval.ranking_key", "confidence");
  if (key == "confidence") {
    cfg.eval.ranking_key = RankingKey::confidence;
  } else if (key == "neg_entropy") {
    cfg.eval.ranking_key = RankingKey::neg_entropy;
  } else {
    throw std::runtime_error(
        "config: key 'eval.ranking_key' must be confidence or neg_entropy");
  }

  cfg.embedding_provider = config.get_string("embedding.provider", "builtin");
  if (cfg.embedding_provider != "builtin" && cfg.embedding_provider != "external") {
    throw std::runtime_error(
        "config: key 'embedding.provider' must be builtin or external");
  }
  cfg.embedding_dimension =
      static_cast<int>(config.get_int("embedding.dimension", 256));
  cfg.embedding_table = config.get_string("embedding.table", "");

  cfg.strategy = parse_strategy(config.get_string("strategy", "art"));

  cfg.mock.sharpness = config.get_double("mock.sharpness", 4.0);
  cfg.mock.beam_count = static_cast<int>(config.get_int("mock.beams", 2));
  cfg.mock.length = static_cast<int>(config.get_int("mock.length", 4));
  cfg.mock.vocab_size = static_cast<int>(config.get_int("mock.vocab_size", 16));
  cfg.mock.learning_tau = config.get_double("mock.learning_tau", 0.0);
  cfg.mock_heldout_count =
      static_cast<int>(config.get_int("mock.heldout_count", 25));

  for (const auto& [predicate, value] : config.group("mock.frequencies")) {
    try {
      cfg.mock_frequencies[normalize_phrase(predicate)] = std::stoi(value);
    } catch (const std::logic_error&) {
      throw std::runtime_error("config: key 'mock.frequencies." + predicate +
                               "' is not an integer");
    }
  }
  for (const auto& [predicate, value] : config.group("mock.category")) {
    const auto category = category_from_string(value);
    if (!category) {
      throw std::runtime_error("config: key 'mock.category." + predicate +
                               "' must be spatial, possessive or semantic");
    }
    cfg.mock_categories[normalize_phrase(predicate)] = *category;
  }

  const double default_accuracy = config.get_double("mock.accuracy.default", 0.5);
  const double default_negative =
      config.get_double("mock.negative_rate.default", 0.1);
  for (const auto& [predicate, category] : cfg.mock_categories) {
    cfg.mock.accuracy[predicate] = default_accuracy;
    cfg.mock.negative_rate[predicate] = default_negative;
  }
  for (const auto& [predicate, value] : config.group("mock.accuracy")) {
    if (predicate == "default") continue;
    cfg.mock.accuracy[normalize_phrase(predicate)] =
        config.get_double("mock.accuracy." + predicate, 0.0);
  }
  for (const auto& [predicate, value] : config.group("mock.negative_rate")) {
    if (predicate == "default") continue;
    cfg.mock.negative_rate[normalize_phrase(predicate)] =
        config.get_double("mock.negative_rate." + predicate, 0.0);
  }
  for (const auto& [predicate, value] : config.group("mock.confusion")) {
    cfg.mock.confusion[normalize_phrase(predicate)] = normalize_phrase(value);
  }

  cfg.validate();
  return cfg;
}

void PipelineConfig::validate() const {
  if (!(budget_fraction_per_loop > 0.0) ||
      !(budget_fraction_per_loop <= total_fraction) || !(total_fraction <= 1.0)) {
    throw std::runtime_error(
        "config: need 0 < budget_fraction_per_loop <= total_fraction <= 1");
  }
  if (generation.negatives_per_sample < 0) {
    throw std::runtime_error(
        "config: key 'generation.negatives_per_sample' must be >= 0");
  }
  if (!(val_fraction > 0.0) || !(val_fraction < 1.0)) {
    throw std::runtime_error("config: key 'val_fraction' must be in (0, 1)");
  }
  if (embedding_provider == "external" && embedding_table.empty()) {
    throw std::runtime_error(
        "config: key 'embedding.table' is required for the external provider");
  }
  eval.validate();
}

long long PipelineConfig::planned_loops() const {
  if (loops >= 0) return loops;
  return static_cast<long long>(
      std::ceil(total_fraction / budget_fraction_per_loop - 1e-9));
}

long long PipelineConfig::loop_budget(std::size_t pool_size) const {
  if (budget_override >= 0) return budget_override;
  return static_cast<long long>(std::ceil(
      budget_fraction_per_loop * static_cast<double>(pool_size) - 1e-9));
}

std::unique_ptr<EmbeddingProvider> PipelineConfig::make_embedding_provider() const {
  if (embedding_provider == "external") {
    return external_provider(embedding_table);
  }
  return builtin_provider(embedding_dimension, derive_seed(seed, "embedding"));
}

PredicateVocabulary PipelineConfig::mock_vocabulary() const {
  if (mock_categories.empty()) {
    throw std::runtime_error("config: no 'mock.category.<predicate>' entries");
  }
  PredicateVocabulary vocab;
  for (const auto& [predicate, category] : mock_categories) {
    vocab.add(predicate, category);
  }
  for (const auto& [predicate, count] : mock_frequencies) {
    if (!vocab.contains(predicate)) {
      throw std::runtime_error("config: 'mock.frequencies." + predicate +
                               "' has no matching mock.category entry");
    }
  }
  return vocab;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed,
                           const Config& config) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("ART_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw std::runtime_error("ART_SEED is not a valid seed");
    }
  }
  return config.get_seed("seed", 0);
}

void cmd_gen_instructions(const std::string& annotations_path,
                          const std::string& vocab_path,
                          const PipelineConfig& cfg, const std::string& out_path) {
  const auto vocab = load_vocabulary(vocab_path);
  const auto triplets = load_annotations(annotations_path, vocab);
  GenerationConfig gen = cfg.generation;
  gen.seed = derive_seed(cfg.seed, "generation");
  const auto instances =
      generate(triplets, vocab, CounterNegativeMap::defaults(), gen);
  save_instances(out_path, instances);
}

void cmd_partition(const std::string& annotations_path,
                   const std::string& vocab_path, const PipelineConfig& cfg,
                   const std::string& out_path) {
  const auto vocab = load_vocabulary(vocab_path);
  const auto triplets = load_annotations(annotations_path, vocab);
  const auto partition = make_partition(
      triplets, derive_seed(cfg.seed, "partition"), cfg.val_fraction);
  save_partition(out_path, partition);
}

void cmd_sample_balanced(const std::string& partition_path,
                         const PipelineConfig& cfg, const std::string& out_dir) {
  const auto partition = load_partition(partition_path);
  const long long budget = cfg.loop_budget(partition.pool_ids.size());
  const auto allocation = allocate_round_robin(partition.availability, budget);
  const auto result =
      draw(partition, allocation, derive_seed(cfg.seed, "balanced"));

  fs::create_directories(out_dir);
  save_partition((fs::path(out_dir) / "partition.json").string(), result.partition);
  save_selected_ids((fs::path(out_dir) / "selected_ids.txt").string(),
                    result.selected);

  json report;
  report["budget"] = budget;
  report["allocated"] = allocation.allocated();
  report["selected"] = result.selected.size();
  report["shortfall"] = budget - static_cast<long long>(result.selected.size());
  json per_predicate = json::object();
  for (const auto& [predicate, count] : allocation.per_predicate) {
    per_predicate[predicate] = count;
  }
  report["per_predicate"] = per_predicate;
  write_file((fs::path(out_dir) / "report.json").string(), report.dump(2) + "\n");
}

void cmd_sample_adaptive(const std::string& partition_path,
                         const std::string& records_path,
                         const std::string& recalls_path,
                         const std::string& instances_path,
                         const PipelineConfig& cfg, const std::string& out_dir) {
  const auto partition = load_partition(partition_path);
  const auto records = load_records(records_path);
  const auto recalls = load_recalls(recalls_path);
  const auto instances = index_instances(load_instances(instances_path));
  const auto provider = cfg.make_embedding_provider();

  const auto pools = classify_outcomes(records, instances, *provider);
  AdaptiveConfig adaptive = cfg.adaptive;
  adaptive.budget = cfg.loop_budget(partition.pool_ids.size());
  const auto result =
      run_iteration(partition, flatten_pools(pools), recalls, adaptive,
                    derive_seed(cfg.seed, "adaptive"));

  fs::create_directories(out_dir);
  save_partition((fs::path(out_dir) / "partition.json").string(), result.partition);
  std::vector<std::string> selected;
  for (const auto& [predicate, ids] : result.selections) {
    selected.insert(selected.end(), ids.begin(), ids.end());
  }
  std::sort(selected.begin(), selected.end());
  save_selected_ids((fs::path(out_dir) / "selected_ids.txt").string(), selected);
  save_report((fs::path(out_dir) / "report.jsonl").string(), result.report,
              adaptive.mode == ThresholdMode::adaptive ? "adaptive" : "fixed");
}

void cmd_eval(const std::string& ground_truth_path,
              const std::string& records_path,
              const std::optional<std::string>& instances_path,
              const std::optional<std::string>& vocab_path,
              const PipelineConfig& cfg, const std::string& out_path) {
  const auto triplets = load_annotations(ground_truth_path);
  const auto records = load_records(records_path);

  std::map<std::string, InstructionInstance> instances;
  const std::map<std::string, InstructionInstance>* instances_ptr = nullptr;
  if (instances_path) {
    instances = index_instances(load_instances(*instances_path));
    instances_ptr = &instances;
  }

  std::set<std::string> train_predicates;
  if (vocab_path) {
    const auto vocab = load_vocabulary(*vocab_path);
    train_predicates.insert(vocab.predicates().begin(), vocab.predicates().end());
  } else {
    for (const auto& t : triplets) {
      train_predicates.insert(normalize_phrase(t.predicate));
    }
  }

  const auto provider = cfg.make_embedding_provider();
  const auto eval_records = resolve_eval_records(records, triplets, instances_ptr);
  const auto report =
      evaluate(eval_records, triplets, cfg.eval, *provider, train_predicates);
  write_file(out_path, metrics_to_json(report).dump(2) + "\n");
}

void cmd_mock_predict(const std::string& instances_path,
                      const PipelineConfig& cfg,
                      const std::optional<std::string>& train_counts_path,
                      const std::string& out_path) {
  const auto instances = load_instances(instances_path);
  const auto vocab = vocabulary_from_instances(instances);

  MockModelSpec spec = cfg.mock;
  spec.seed = derive_seed(cfg.seed, "mock");
  if (spec.accuracy.empty()) {
    for (const auto& predicate : vocab.predicates()) spec.accuracy[predicate] = 0.5;
  }
  if (spec.confusion.empty()) {
    // Default confusion: the lexicographically first other predicate.
    for (const auto& predicate : vocab.predicates()) {
      for (const auto& other : vocab.predicates()) {
        if (other != predicate) {
          spec.confusion[predicate] = other;
          break;
        }
      }
    }
  }
  spec.validate(vocab);

  std::map<std::string, int> counts;
  if (train_counts_path) counts = load_counts(*train_counts_path);
  save_records(out_path, predict(instances, spec, counts), /*with_logits=*/true);
}

std::map<std::string, double> validation_recalls(
    const std::vector<PredictionRecord>& records,
    const std::map<std::string, InstructionInstance>& instances) {
  std::map<std::string, int> total;
  std::map<std::string, int> correct;
  for (const auto& record : records) {
    const auto it = instances.find(record.instance_id);
    if (it == instances.end()) {
      throw std::invalid_argument("recall: unknown instance id '" +
                                  record.instance_id + "'");
    }
    const auto& instance = it->second;
    const std::string predicate = normalize_phrase(instance.predicate);
    ++total[predicate];
    if (record.is_negative_prediction) continue;
    const auto predicted = extract_predicate_phrase(
        strip_response_core(record.predicted_text),
        normalize_phrase(instance.subject), normalize_phrase(instance.object));
    if (predicted && *predicted == predicate) ++correct[predicate];
  }
  std::map<std::string, double> recalls;
  for (const auto& [predicate, n] : total) {
    recalls[predicate] = n == 0 ? 0.0
                                : static_cast<double>(correct[predicate]) /
                                      static_cast<double>(n);
  }
  return recalls;
}

SimulationSummary cmd_simulate(const PipelineConfig& cfg,
                               const std::string& out_dir) {
  const auto vocab = cfg.mock_vocabulary();
  if (cfg.mock_frequencies.empty()) {
    throw std::runtime_error("config: no 'mock.frequencies.<predicate>' entries");
  }

  MockModelSpec spec = cfg.mock;
  spec.seed = derive_seed(cfg.seed, "mock");
  if (spec.confusion.empty()) {
    // Default confusion: the most frequent other predicate.
    std::vector<std::pair<std::string, int>> by_count(
        cfg.mock_frequencies.begin(), cfg.mock_frequencies.end());
    std::sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (const auto& predicate : vocab.predicates()) {
      for (const auto& [other, count] : by_count) {
        if (other != predicate) {
          spec.confusion[predicate] = other;
          break;
        }
      }
    }
  }
  spec.validate(vocab);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);

  const auto triplets =
      synthesize_pool(vocab, cfg.mock_frequencies, derive_seed(cfg.seed, "synth"));
  save_vocabulary((out / "vocab.tsv").string(), vocab);
  save_annotations((out / "annotations.jsonl").string(), triplets);

  GenerationConfig gen = cfg.generation;
  gen.seed = derive_seed(cfg.seed, "generation");
  const auto instances =
      generate(triplets, vocab, CounterNegativeMap::defaults(), gen);
  save_instances((out / "instances.jsonl").string(), instances);
  const auto by_id = index_instances(instances);

  std::map<std::string, int> heldout_frequencies;
  for (const auto& predicate : vocab.predicates()) {
    heldout_frequencies[predicate] = cfg.mock_heldout_count;
  }
  const auto heldout_triplets = synthesize_pool(
      vocab, heldout_frequencies, derive_seed(cfg.seed, "heldout"), "held");
  const auto heldout_instances =
      generate(heldout_triplets, vocab, CounterNegativeMap::defaults(), gen);
  save_annotations((out / "heldout_annotations.jsonl").string(), heldout_triplets);
  save_instances((out / "heldout_instances.jsonl").string(), heldout_instances);

  auto partition =
      make_partition(triplets, derive_seed(cfg.seed, "partition"), cfg.val_fraction);
  save_partition((out / "partition_initial.json").string(), partition);

  const auto provider = cfg.make_embedding_provider();
  const std::size_t total_non_val = partition.pool_ids.size();
  const long long planned = cfg.planned_loops();

  SimulationSummary summary;
  summary.strategy = cfg.strategy;
  summary.seed = cfg.seed;
  summary.total_non_val = total_non_val;

  for (long long loop = 1; loop <= planned; ++loop) {
    if (partition.pool_ids.empty()) break;
    const double share = static_cast<double>(partition.train_ids.size()) /
                         static_cast<double>(total_non_val);
    if (share >= cfg.total_fraction) break;

    const long long budget = std::min<long long>(
        cfg.loop_budget(partition.pool_ids.size()),
        static_cast<long long>(partition.pool_ids.size()));

    char name[32];
    std::snprintf(name, sizeof(name), "loop_%02lld", loop);
    const fs::path loop_dir = out / name;
    fs::create_directories(loop_dir);

    const bool balanced_turn =
        cfg.strategy == Strategy::balanced ||
        (cfg.strategy == Strategy::art && loop == 1);

    if (balanced_turn) {
      const auto allocation = allocate_round_robin(partition.availability, budget);
      const auto result = draw(
          partition, allocation,
          derive_seed(cfg.seed, "balanced/loop" + std::to_string(loop)));
      partition = result.partition;
      save_selected_ids((loop_dir / "selected_ids.txt").string(), result.selected);
    } else if (cfg.strategy == Strategy::random) {
      std::vector<std::string> pool(partition.pool_ids.begin(),
                                    partition.pool_ids.end());
      Rng rng(derive_seed(cfg.seed, "random/loop" + std::to_string(loop)));
      rng.shuffle(pool);
      std::vector<std::string> selected(
          pool.begin(), pool.begin() + static_cast<std::size_t>(budget));
      std::sort(selected.begin(), selected.end());
      partition.move_to_train(selected);
      save_selected_ids((loop_dir / "selected_ids.txt").string(), selected);
    } else {
      const auto train_counts = train_predicate_counts(partition);
      const auto pool_records =
          predict(instances_for_ids(by_id, partition.pool_ids), spec, train_counts);
      const auto val_records =
          predict(instances_for_ids(by_id, partition.val_ids), spec, train_counts);

      auto recalls = validation_recalls(val_records, by_id);
      for (const auto& predicate : vocab.predicates()) {
        if (!recalls.count(predicate)) recalls[predicate] = 0.0;
      }
      save_recalls((loop_dir / "recalls.json").string(), recalls);
      save_records((loop_dir / "records.jsonl").string(), pool_records,
                   /*with_logits=*/false);

      const auto pools = classify_outcomes(pool_records, by_id, *provider);
      AdaptiveConfig adaptive = cfg.adaptive;
      adaptive.budget = budget;
      const auto result = run_iteration(
          partition, flatten_pools(pools), recalls, adaptive,
          derive_seed(cfg.seed, "adaptive/loop" + std::to_string(loop)));
      partition = result.partition;

      std::vector<std::string> selected;
      for (const auto& [predicate, ids] : result.selections) {
        selected.insert(selected.end(), ids.begin(), ids.end());
      }
      std::sort(selected.begin(), selected.end());
      save_selected_ids((loop_dir / "selected_ids.txt").string(), selected);
      save_report((loop_dir / "report.jsonl").string(), result.report,
                  adaptive.mode == ThresholdMode::adaptive ? "adaptive" : "fixed");
    }

    save_partition((loop_dir / "partition.json").string(), partition);
    summary.loops_run = loop;
  }

  // Held-out evaluation with the final training state.
  const auto final_counts = train_predicate_counts(partition);
  const auto heldout_records = predict(heldout_instances, spec, final_counts);
  save_records((out / "heldout_records.jsonl").string(), heldout_records,
               /*with_logits=*/false);

  std::set<std::string> train_predicates;
  for (const auto& [predicate, count] : final_counts) {
    if (count > 0) train_predicates.insert(predicate);
  }
  const auto eval_records = resolve_eval_records(heldout_records, heldout_triplets);
  summary.heldout_metrics = evaluate(eval_records, heldout_triplets, cfg.eval,
                                     *provider, train_predicates);
  summary.train_size = partition.train_ids.size();
  summary.train_share = static_cast<double>(summary.train_size) /
                        static_cast<double>(std::max<std::size_t>(total_non_val, 1));
  summary.train_counts = final_counts;

  json j;
  j["strategy"] = to_string(summary.strategy);
  j["seed"] = summary.seed;
  j["loops_run"] = summary.loops_run;
  j["total_non_val"] = summary.total_non_val;
  j["train_size"] = summary.train_size;
  j["train_share"] = summary.train_share;
  json counts = json::object();
  for (const auto& [predicate, count] : summary.train_counts) {
    counts[predicate] = count;
  }
  j["train_counts"] = counts;
  j["heldout_metrics"] = metrics_to_json(summary.heldout_metrics);
  write_file((out / "summary.json").string(), j.dump(2) + "\n");

  save_partition((out / "partition_final.json").string(), partition);
  return summary;
}

}  // namespace art
