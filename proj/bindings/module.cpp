#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "art/adaptive.hpp"
#include "art/balanced.hpp"
#include "art/config.hpp"
#include "art/instruction.hpp"
#include "art/metrics.hpp"
#include "art/pipeline.hpp"
#include "art/scoring.hpp"
#include "art/text.hpp"
#include "art/types.hpp"

namespace py = pybind11;

namespace {

art::RelationCategory category_arg(const std::string& name) {
  const auto c = art::category_from_string(name);
  if (!c) throw std::invalid_argument("unknown relation category '" + name + "'");
  return *c;
}

art::PredicateVocabulary vocab_arg(const std::map<std::string, std::string>& raw) {
  art::PredicateVocabulary vocab;
  for (const auto& [predicate, category] : raw) {
    vocab.add(predicate, category_arg(category));
  }
  return vocab;
}

art::RelationTriplet shell_triplet(const std::string& subject,
                                   const std::string& predicate,
                                   const std::string& object) {
  art::RelationTriplet t;
  t.subject = subject;
  t.predicate = predicate;
  t.object = object;
  t.subject_box = {0, 0, 1, 1};
  t.object_box = {0, 0, 1, 1};
  return t;
}

double py_entropy(const std::vector<std::vector<std::vector<double>>>& logits) {
  art::BeamLogits beams;
  if (logits.empty() || logits[0].empty() || logits[0][0].empty()) {
    throw std::invalid_argument("logits must be a non-empty M x L x V array");
  }
  beams.beam_count = static_cast<int>(logits.size());
  beams.length = static_cast<int>(logits[0].size());
  beams.vocab_size = static_cast<int>(logits[0][0].size());
  for (const auto& beam : logits) {
    if (static_cast<int>(beam.size()) != beams.length) {
      throw std::invalid_argument("ragged logits array");
    }
    for (const auto& position : beam) {
      if (static_cast<int>(position.size()) != beams.vocab_size) {
        throw std::invalid_argument("ragged logits array");
      }
      beams.values.insert(beams.values.end(), position.begin(), position.end());
    }
  }
  return art::entropy(beams);
}

double py_similarity(const std::string& a, const std::string& b, int dimension,
                     std::uint64_t seed) {
  const auto provider = art::builtin_provider(dimension, seed);
  return art::similarity(a, b, *provider);
}

std::vector<py::dict> py_generate(
    const std::vector<std::map<std::string, std::string>>& triplets,
    const std::map<std::string, std::string>& vocabulary,
    int negatives_per_sample, const std::string& negative_mode,
    std::uint64_t seed) {
  const auto vocab = vocab_arg(vocabulary);
  std::vector<art::RelationTriplet> parsed;
  parsed.reserve(triplets.size());
  for (const auto& t : triplets) {
    auto shell = shell_triplet(t.at("subject"), t.at("predicate"), t.at("object"));
    shell.id = t.count("id") ? t.at("id") : std::to_string(parsed.size());
    shell.image_id = t.count("image_id") ? t.at("image_id") : "img";
    parsed.push_back(std::move(shell));
  }

  art::GenerationConfig cfg;
  cfg.negatives_per_sample = negatives_per_sample;
  cfg.seed = seed;
  if (negative_mode == "counter") {
    cfg.mode = art::NegativeMode::counter;
  } else if (negative_mode == "random") {
    cfg.mode = art::NegativeMode::random;
  } else if (negative_mode == "none") {
    cfg.mode = art::NegativeMode::none;
  } else {
    throw std::invalid_argument("negative_mode must be counter, random or none");
  }

  const auto instances =
      art::generate(parsed, vocab, art::CounterNegativeMap::defaults(), cfg);
  std::vector<py::dict> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    py::dict d;
    d["instance_id"] = inst.instance_id;
    d["triplet_id"] = inst.triplet_id;
    d["question"] = inst.question;
    d["positive_response"] = inst.positive_response;
    d["negative_responses"] = inst.negative_responses;
    d["positive_category"] = std::string(art::to_string(inst.positive_category));
    std::vector<std::string> negatives;
    for (const auto c : inst.negative_categories) {
      negatives.emplace_back(art::to_string(c));
    }
    d["negative_categories"] = negatives;
    out.push_back(std::move(d));
  }
  return out;
}

std::map<std::string, int> py_allocate_round_robin(
    const std::map<std::string, int>& availability, long long budget) {
  return art::allocate_round_robin(availability, budget).per_predicate;
}

std::map<std::string, int> py_allocate_budget(
    const std::map<std::string, double>& recalls,
    const std::map<std::string, int>& availability, long long budget) {
  return art::allocate_budget(recalls, availability, budget).per_predicate;
}

py::dict py_compute_thresholds(const std::vector<double>& tp_entropies,
                               const std::vector<double>& fn_entropies,
                               const std::vector<double>& fp_similarities,
                               double z) {
  art::PredicatePools pools;
  int serial = 0;
  const auto fill = [&serial](std::vector<art::PredictionRecord>& pool,
                              const std::vector<double>& values, bool as_similarity) {
    for (const double v : values) {
      art::PredictionRecord r;
      r.instance_id = "r" + std::to_string(serial++);
      if (as_similarity) {
        r.similarity = v;
      } else {
        r.entropy = v;
      }
      pool.push_back(std::move(r));
    }
  };
  fill(pools.tp, tp_entropies, false);
  fill(pools.fn, fn_entropies, false);
  fill(pools.fp, fp_similarities, true);
  const auto t = art::compute_thresholds(pools, z);

  py::dict d;
  d["mu_tp"] = t.mu_tp;
  d["sigma_tp"] = t.sigma_tp;
  d["mu_fn"] = t.mu_fn;
  d["sigma_fn"] = t.sigma_fn;
  d["mu_fp"] = t.mu_fp;
  d["sigma_fp"] = t.sigma_fp;
  d["z"] = t.z;
  d["h_tp"] = t.h_tp;
  d["h_fn"] = t.h_fn;
  d["t_fn"] = t.t_fn;
  d["t_fp"] = t.t_fp;
  return d;
}

std::vector<std::string> py_select_for_predicate(
    const std::vector<std::pair<std::string, double>>& tp_entropy,
    const std::vector<std::pair<std::string, double>>& fn_entropy,
    const std::vector<std::pair<std::string, double>>& fp_similarity,
    long long budget, double z_init, double z_step) {
  art::PredicatePools pools;
  for (const auto& [id, h] : tp_entropy) {
    art::PredictionRecord r;
    r.instance_id = id;
    r.entropy = h;
    r.outcome = art::Outcome::tp;
    pools.tp.push_back(std::move(r));
  }
  for (const auto& [id, h] : fn_entropy) {
    art::PredictionRecord r;
    r.instance_id = id;
    r.entropy = h;
    r.outcome = art::Outcome::fn;
    pools.fn.push_back(std::move(r));
  }
  for (const auto& [id, s] : fp_similarity) {
    art::PredictionRecord r;
    r.instance_id = id;
    r.similarity = s;
    r.outcome = art::Outcome::fp;
    pools.fp.push_back(std::move(r));
  }
  art::AdaptiveConfig cfg;
  cfg.z_init = z_init;
  cfg.z_step = z_step;
  return art::select_for_predicate(pools, budget, cfg).ids;
}

py::dict summary_to_dict(const art::SimulationSummary& summary) {
  py::dict d;
  d["strategy"] = std::string(art::to_string(summary.strategy));
  d["seed"] = summary.seed;
  d["loops_run"] = summary.loops_run;
  d["total_non_val"] = summary.total_non_val;
  d["train_size"] = summary.train_size;
  d["train_share"] = summary.train_share;
  d["train_counts"] = summary.train_counts;
  py::dict metrics;
  for (const auto& [k, v] : summary.heldout_metrics.at_k) {
    py::dict at_k;
    at_k["R"] = v.recall;
    at_k["mR"] = v.mean_recall;
    at_k["gR"] = v.g_recall;
    at_k["gmR"] = v.g_mean_recall;
    metrics[py::int_(k)] = at_k;
  }
  d["heldout_metrics"] = metrics;
  d["unique"] = summary.heldout_metrics.unique_predictions;
  d["unseen"] = summary.heldout_metrics.unseen_predictions;
  return d;
}

py::dict py_simulate(const std::string& config_text, const std::string& out_dir) {
  const auto raw = art::Config::parse(config_text);
  const auto cfg = art::PipelineConfig::from_config(raw);
  return summary_to_dict(art::cmd_simulate(cfg, out_dir));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "adaptive relation-tuning data curation engine";

  m.def("normalize_phrase", &art::normalize_phrase, py::arg("phrase"));
  m.def("entropy", &py_entropy, py::arg("logits"),
        "Mean beam-token entropy in nats over an M x L x V logit array.");
  m.def("similarity", &py_similarity, py::arg("predicted"), py::arg("ground_truth"),
        py::arg("dimension") = 256, py::arg("seed") = 0,
        "Cosine similarity under the hashed bag-of-tokens provider.");
  m.def(
      "categorize",
      [](const std::string& predicate, const std::map<std::string, std::string>& v) {
        return std::string(art::to_string(art::categorize(predicate, vocab_arg(v))));
      },
      py::arg("predicate"), py::arg("vocabulary"));
  m.def(
      "render_question",
      [](const std::string& subject, const std::string& object,
         const std::string& category) {
        return art::render_question(shell_triplet(subject, "", object),
                                    category_arg(category));
      },
      py::arg("subject"), py::arg("object"), py::arg("category"));
  m.def(
      "render_positive",
      [](const std::string& subject, const std::string& predicate,
         const std::string& object) {
        return art::render_positive(shell_triplet(subject, predicate, object));
      },
      py::arg("subject"), py::arg("predicate"), py::arg("object"));
  m.def(
      "render_negative",
      [](const std::string& subject, const std::string& object,
         const std::string& category) {
        return art::render_negative(shell_triplet(subject, "", object),
                                    category_arg(category));
      },
      py::arg("subject"), py::arg("object"), py::arg("category"));
  m.def("generate_instances", &py_generate, py::arg("triplets"),
        py::arg("vocabulary"), py::arg("negatives_per_sample") = 1,
        py::arg("negative_mode") = "counter", py::arg("seed") = 0);
  m.def("allocate_round_robin", &py_allocate_round_robin, py::arg("availability"),
        py::arg("budget"));
  m.def("allocate_budget", &py_allocate_budget, py::arg("recalls"),
        py::arg("availability"), py::arg("budget"));
  m.def("compute_thresholds", &py_compute_thresholds, py::arg("tp_entropies"),
        py::arg("fn_entropies"), py::arg("fp_similarities"), py::arg("z"));
  m.def("select_for_predicate", &py_select_for_predicate, py::arg("tp_entropy"),
        py::arg("fn_entropy"), py::arg("fp_similarity"), py::arg("budget"),
        py::arg("z_init") = 1.96, py::arg("z_step") = 0.1);
  m.def("simulate", &py_simulate, py::arg("config_text"), py::arg("out_dir"),
        "Run the closed loop against the mock model; returns the summary.");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
