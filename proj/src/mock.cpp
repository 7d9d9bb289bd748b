#include "art/mock.hpp"

#include <cmath>
#include <stdexcept>

#include "art/instruction.hpp"
#include "art/rng.hpp"
#include "art/scoring.hpp"
#include "art/text.hpp"

namespace art {

namespace {

// Mixed one- and two-token nouns so FP triplet phrases vary in length and
// the per-predicate similarity pools have nonzero spread.
const std::vector<std::string>& noun_list() {
  static const std::vector<std::string> nouns = {
      "man",        "woman",       "dog",   "boat",       "coffee table",
      "street sign", "tree",       "car",   "park bench", "window",
      "girl",       "umbrella",    "horse", "traffic light"};
  return nouns;
}

BeamLogits sharp_logits(const MockModelSpec& spec, double magnitude,
                        Rng& rng) {
  BeamLogits logits;
  logits.beam_count = spec.beam_count;
  logits.length = spec.length;
  logits.vocab_size = spec.vocab_size;
  logits.values.assign(
      static_cast<std::size_t>(spec.beam_count) * spec.length * spec.vocab_size,
      0.0);
  for (int m = 0; m < spec.beam_count; ++m) {
    for (int l = 0; l < spec.length; ++l) {
      const int slot = static_cast<int>(rng.below(spec.vocab_size));
      logits.at(m, l, slot) = magnitude;
    }
  }
  return logits;
}

double mean_log_probability(const BeamLogits& logits) {
  // Log-probability of the emitted (max-logit) token, averaged over slices.
  double total = 0.0;
  for (int m = 0; m < logits.beam_count; ++m) {
    for (int l = 0; l < logits.length; ++l) {
      double max_logit = logits.at(m, l, 0);
      for (int v = 1; v < logits.vocab_size; ++v) {
        max_logit = std::max(max_logit, logits.at(m, l, v));
      }
      double norm = 0.0;
      for (int v = 0; v < logits.vocab_size; ++v) {
        norm += std::exp(logits.at(m, l, v) - max_logit);
      }
      total += -std::log(norm);
    }
  }
  return total / (static_cast<double>(logits.beam_count) * logits.length);
}

double effective_accuracy(double base, double tau, int trained) {
  if (tau <= 0.0 || trained <= 0) return base;
  return 1.0 - (1.0 - base) * std::exp(-static_cast<double>(trained) / tau);
}

double effective_negative_rate(double base, double tau, int trained) {
  if (tau <= 0.0 || trained <= 0) return base;
  return base * std::exp(-static_cast<double>(trained) / tau);
}

}  // namespace

void MockModelSpec::validate(const PredicateVocabulary& vocab) const {
  if (!(sharpness > 0.0)) {
    throw std::invalid_argument("mock spec: sharpness must be > 0");
  }
  if (beam_count < 1 || length < 1 || vocab_size < 2) {
    throw std::invalid_argument("mock spec: bad logit dimensions");
  }
  for (const auto& predicate : vocab.predicates()) {
    const double acc = accuracy.count(predicate) ? accuracy.at(predicate) : 0.0;
    const double neg =
        negative_rate.count(predicate) ? negative_rate.at(predicate) : 0.0;
    if (acc < 0.0 || neg < 0.0 || acc + neg > 1.0) {
      throw std::invalid_argument("mock spec: accuracy + negative_rate for '" +
                                  predicate + "' outside [0, 1]");
    }
    const auto it = confusion.find(predicate);
    if (it != confusion.end() && normalize_phrase(it->second) == predicate) {
      throw std::invalid_argument("mock spec: '" + predicate +
                                  "' confused with itself");
    }
  }
}

std::vector<RelationTriplet> synthesize_pool(
    const PredicateVocabulary& vocab,
    const std::map<std::string, int>& predicate_frequencies, std::uint64_t seed,
    const std::string& id_prefix) {
  const auto& nouns = noun_list();
  std::vector<RelationTriplet> out;
  std::size_t serial = 0;
  for (const auto& [raw_predicate, count] : predicate_frequencies) {
    const std::string predicate = normalize_phrase(raw_predicate);
    if (!vocab.contains(predicate)) {
      throw std::invalid_argument("synthesize: predicate '" + predicate +
                                  "' not in vocabulary");
    }
    if (count < 0) {
      throw std::invalid_argument("synthesize: negative count for '" + predicate +
                                  "'");
    }
    Rng rng(derive_seed(seed, "synth/" + predicate));
    for (int i = 0; i < count; ++i) {
      RelationTriplet t;
      char id[32];
      std::snprintf(id, sizeof(id), "-%06zu", serial++);
      t.id = id_prefix + id;
      t.image_id = id_prefix + "-img-" + std::to_string(rng.below(
                       std::max<std::uint64_t>(1, count / 3 + 1)) )
                   + "-" + predicate;
      t.subject = nouns[rng.below(nouns.size())];
      std::string object = nouns[rng.below(nouns.size())];
      while (object == t.subject) object = nouns[rng.below(nouns.size())];
      t.object = object;
      t.predicate = predicate;
      const double x = static_cast<double>(rng.below(500));
      const double y = static_cast<double>(rng.below(400));
      t.subject_box = {x, y, x + 40 + static_cast<double>(rng.below(200)),
                       y + 30 + static_cast<double>(rng.below(150))};
      t.object_box = {x + 10, y + 10, x + 60 + static_cast<double>(rng.below(200)),
                      y + 50 + static_cast<double>(rng.below(150))};
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<PredictionRecord> predict(
    const std::vector<InstructionInstance>& instances, const MockModelSpec& spec,
    const std::map<std::string, int>& train_counts) {
  const auto map = CounterNegativeMap::defaults();
  std::vector<PredictionRecord> out;
  out.reserve(instances.size());

  for (const auto& instance : instances) {
    const std::string predicate = normalize_phrase(instance.predicate);
    Rng rng(derive_seed(spec.seed, "mock/" + instance.instance_id));

    const int trained =
        train_counts.count(predicate) ? train_counts.at(predicate) : 0;
    const double base_acc =
        spec.accuracy.count(predicate) ? spec.accuracy.at(predicate) : 0.0;
    const double base_neg =
        spec.negative_rate.count(predicate) ? spec.negative_rate.at(predicate)
                                            : 0.0;
    const double acc = effective_accuracy(base_acc, spec.learning_tau, trained);
    const double neg =
        std::min(effective_negative_rate(base_neg, spec.learning_tau, trained),
                 1.0 - acc);

    RelationTriplet shell;
    shell.subject = instance.subject;
    shell.object = instance.object;
    shell.predicate = instance.predicate;

    PredictionRecord record;
    record.instance_id = instance.instance_id;

    const double draw = rng.unit();
    if (draw < acc) {
      record.predicted_text = render_positive(shell);
      record.is_negative_prediction = false;
    } else if (draw < acc + neg) {
      const auto counter = map.allowed.at(instance.positive_category).front();
      record.predicted_text = render_negative(shell, counter);
      record.is_negative_prediction = true;
    } else {
      auto confused = shell;
      const auto it = spec.confusion.find(predicate);
      if (it == spec.confusion.end()) {
        throw std::invalid_argument("mock spec: no confusion target for '" +
                                    predicate + "'");
      }
      confused.predicate = it->second;
      record.predicted_text = render_positive(confused);
      record.is_negative_prediction = false;
    }

    // Per-instance jitter keeps entropy spread inside each outcome pool
    // while staying monotone in the sharpness dial.
    const double magnitude = spec.sharpness * (0.5 + rng.unit());
    record.logits = sharp_logits(spec, magnitude, rng);
    record.entropy = entropy(*record.logits);
    record.confidence = mean_log_probability(*record.logits);
    out.push_back(std::move(record));
  }
  return out;
}

}  // namespace art
