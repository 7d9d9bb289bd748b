#include "art/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "art/instruction.hpp"
#include "art/scoring.hpp"
#include "art/text.hpp"

namespace art {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

json parse_line(const std::string& line, const std::string& path,
                std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw std::runtime_error(path + " line " + std::to_string(line_no) +
                             ": malformed JSON (" + e.what() + ")");
  }
}

std::array<double, 4> parse_box(const json& j, const std::string& key,
                                const std::string& context) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 4) {
    throw std::runtime_error(context + ": '" + key + "' must be an array of 4 reals");
  }
  std::array<double, 4> box{};
  for (int i = 0; i < 4; ++i) box[i] = j[key][i].get<double>();
  return box;
}

RelationCategory require_category(const json& j, const std::string& key,
                                  const std::string& context) {
  const auto parsed = category_from_string(j.at(key).get<std::string>());
  if (!parsed) {
    throw std::runtime_error(context + ": unknown relation category '" +
                             j.at(key).get<std::string>() + "'");
  }
  return *parsed;
}

}  // namespace

namespace {

std::vector<RelationTriplet> load_annotations_impl(
    const std::string& path, const PredicateVocabulary* vocab) {
  auto in = open_in(path);
  std::vector<RelationTriplet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = parse_line(line, path, line_no);
    RelationTriplet t;
    try {
      t.id = j.at("id").get<std::string>();
      t.image_id = j.at("image_id").get<std::string>();
      t.subject = j.at("subject").get<std::string>();
      t.object = j.at("object").get<std::string>();
      t.predicate = normalize_phrase(j.at("predicate").get<std::string>());
    } catch (const json::exception& e) {
      throw std::runtime_error(path + " line " + std::to_string(line_no) +
                               ": missing field (" + e.what() + ")");
    }
    t.subject_box = parse_box(j, "subject_box", path + " line " + std::to_string(line_no));
    t.object_box = parse_box(j, "object_box", path + " line " + std::to_string(line_no));

    if (vocab && !vocab->contains(t.predicate)) {
      throw std::runtime_error("annotation '" + t.id + "': predicate '" +
                               t.predicate + "' not in vocabulary");
    }
    if (box_is_degenerate(t.subject_box) || box_is_degenerate(t.object_box)) {
      throw std::runtime_error("annotation '" + t.id + "': degenerate box");
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

std::vector<RelationTriplet> load_annotations(const std::string& path,
                                              const PredicateVocabulary& vocab) {
  return load_annotations_impl(path, &vocab);
}

std::vector<RelationTriplet> load_annotations(const std::string& path) {
  return load_annotations_impl(path, nullptr);
}

void save_annotations(const std::string& path,
                      const std::vector<RelationTriplet>& triplets) {
  auto out = open_out(path);
  for (const auto& t : triplets) {
    json j;
    j["id"] = t.id;
    j["image_id"] = t.image_id;
    j["subject"] = t.subject;
    j["object"] = t.object;
    j["predicate"] = t.predicate;
    j["subject_box"] = t.subject_box;
    j["object_box"] = t.object_box;
    out << j.dump() << '\n';
  }
}

PredicateVocabulary load_vocabulary(const std::string& path) {
  auto in = open_in(path);
  PredicateVocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + " line " + std::to_string(line_no) +
                               ": expected 'predicate<TAB>category'");
    }
    const auto category = category_from_string(line.substr(tab + 1));
    if (!category) {
      throw std::runtime_error(path + " line " + std::to_string(line_no) +
                               ": unknown category '" + line.substr(tab + 1) + "'");
    }
    vocab.add(line.substr(0, tab), *category);
  }
  if (vocab.size() == 0) {
    throw std::runtime_error("vocabulary '" + path + "' is empty");
  }
  return vocab;
}

void save_vocabulary(const std::string& path, const PredicateVocabulary& vocab) {
  auto out = open_out(path);
  for (const auto& predicate : vocab.predicates()) {
    out << predicate << '\t' << to_string(vocab.category(predicate)) << '\n';
  }
}

std::vector<InstructionInstance> load_instances(const std::string& path) {
  auto in = open_in(path);
  std::vector<InstructionInstance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = parse_line(line, path, line_no);
    InstructionInstance inst;
    try {
      inst.instance_id = j.at("instance_id").get<std::string>();
      inst.triplet_id = j.at("triplet_id").get<std::string>();
      inst.question = j.at("question").get<std::string>();
      inst.positive_response = j.at("positive_response").get<std::string>();
      for (const auto& r : j.at("negative_responses")) {
        inst.negative_responses.push_back(r.get<std::string>());
      }
      inst.positive_category = require_category(j, "positive_category",
                                                "instance '" + inst.instance_id + "'");
      for (const auto& c : j.at("negative_categories")) {
        const auto parsed = category_from_string(c.get<std::string>());
        if (!parsed) {
          throw std::runtime_error("instance '" + inst.instance_id +
                                   "': unknown negative category");
        }
        inst.negative_categories.push_back(*parsed);
      }
    } catch (const json::exception& e) {
      throw std::runtime_error(path + " line " + std::to_string(line_no) +
                               ": missing field (" + e.what() + ")");
    }

    const auto entities = parse_question_entities(inst.question);
    if (!entities) {
      throw std::runtime_error("instance '" + inst.instance_id +
                               "': question does not follow the template");
    }
    inst.subject = entities->first;
    inst.object = entities->second;
    const auto predicate = extract_predicate_phrase(
        strip_response_core(inst.positive_response), inst.subject, inst.object);
    if (!predicate) {
      throw std::runtime_error("instance '" + inst.instance_id +
                               "': positive response does not follow the template");
    }
    inst.predicate = *predicate;
    out.push_back(std::move(inst));
  }
  return out;
}

void save_instances(const std::string& path,
                    const std::vector<InstructionInstance>& instances) {
  auto out = open_out(path);
  for (const auto& inst : instances) {
    json j;
    j["instance_id"] = inst.instance_id;
    j["triplet_id"] = inst.triplet_id;
    j["question"] = inst.question;
    j["positive_response"] = inst.positive_response;
    j["negative_responses"] = inst.negative_responses;
    j["positive_category"] = to_string(inst.positive_category);
    json negatives = json::array();
    for (const auto c : inst.negative_categories) negatives.push_back(to_string(c));
    j["negative_categories"] = negatives;
    out << j.dump() << '\n';
  }
}

std::map<std::string, InstructionInstance> index_instances(
    const std::vector<InstructionInstance>& instances) {
  std::map<std::string, InstructionInstance> out;
  for (const auto& inst : instances) {
    if (!out.emplace(inst.instance_id, inst).second) {
      throw std::runtime_error("duplicate instance id '" + inst.instance_id + "'");
    }
  }
  return out;
}

std::vector<PredictionRecord> load_records(const std::string& path) {
  auto in = open_in(path);
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = parse_line(line, path, line_no);
    PredictionRecord r;
    try {
      r.instance_id = j.at("instance_id").get<std::string>();
      r.predicted_text = j.at("predicted_text").get<std::string>();
      r.is_negative_prediction = j.at("is_negative_prediction").get<bool>();
    } catch (const json::exception& e) {
      throw std::runtime_error(path + " line " + std::to_string(line_no) +
                               ": missing field (" + e.what() + ")");
    }
    if (j.contains("confidence")) r.confidence = j["confidence"].get<double>();

    if (j.contains("logits")) {
      const auto& l = j["logits"];
      if (!l.is_array() || l.empty() || !l[0].is_array() || l[0].empty() ||
          !l[0][0].is_array() || l[0][0].empty()) {
        throw std::runtime_error("record '" + r.instance_id +
                                 "': logits must be an M x L x V nested array");
      }
      BeamLogits logits;
      logits.beam_count = static_cast<int>(l.size());
      logits.length = static_cast<int>(l[0].size());
      logits.vocab_size = static_cast<int>(l[0][0].size());
      logits.values.reserve(static_cast<std::size_t>(logits.beam_count) *
                            logits.length * logits.vocab_size);
      for (const auto& beam : l) {
        if (static_cast<int>(beam.size()) != logits.length) {
          throw std::runtime_error("record '" + r.instance_id +
                                   "': ragged logits array");
        }
        for (const auto& position : beam) {
          if (static_cast<int>(position.size()) != logits.vocab_size) {
            throw std::runtime_error("record '" + r.instance_id +
                                     "': ragged logits array");
          }
          for (const auto& v : position) {
            logits.values.push_back(v.get<double>());
          }
        }
      }
      logits.validate();
      r.logits = std::move(logits);
    }

    if (j.contains("entropy")) {
      r.entropy = j["entropy"].get<double>();
      if (!(r.entropy >= 0.0)) {
        throw std::runtime_error("record '" + r.instance_id +
                                 "': entropy must be >= 0");
      }
    } else if (r.logits) {
      r.entropy = entropy(*r.logits);
    } else {
      throw std::runtime_error("record '" + r.instance_id +
                               "': needs one of 'logits' or 'entropy'");
    }

    if (j.contains("similarity")) {
      const double s = j["similarity"].get<double>();
      if (s < -1.0 || s > 1.0) {
        throw std::runtime_error("record '" + r.instance_id +
                                 "': similarity outside [-1, 1]");
      }
      r.similarity = s;
    } else if (j.contains("embedding")) {
      r.embedding = j["embedding"].get<std::vector<double>>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

void save_records(const std::string& path,
                  const std::vector<PredictionRecord>& records,
                  bool with_logits) {
  auto out = open_out(path);
  for (const auto& r : records) {
    json j;
    j["instance_id"] = r.instance_id;
    j["predicted_text"] = r.predicted_text;
    j["is_negative_prediction"] = r.is_negative_prediction;
    if (r.confidence) j["confidence"] = *r.confidence;
    if (with_logits && r.logits) {
      json beams = json::array();
      for (int m = 0; m < r.logits->beam_count; ++m) {
        json beam = json::array();
        for (int l = 0; l < r.logits->length; ++l) {
          json position = json::array();
          for (int v = 0; v < r.logits->vocab_size; ++v) {
            position.push_back(r.logits->at(m, l, v));
          }
          beam.push_back(std::move(position));
        }
        beams.push_back(std::move(beam));
      }
      j["logits"] = std::move(beams);
    } else {
      j["entropy"] = r.entropy;
    }
    if (r.similarity) j["similarity"] = *r.similarity;
    if (r.embedding) j["embedding"] = *r.embedding;
    out << j.dump() << '\n';
  }
}

DatasetPartition load_partition(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("partition '" + path + "': malformed JSON (" +
                             e.what() + ")");
  }
  DatasetPartition p;
  try {
    for (const auto& id : j.at("train")) p.train_ids.insert(id.get<std::string>());
    for (const auto& id : j.at("pool")) p.pool_ids.insert(id.get<std::string>());
    for (const auto& id : j.at("val")) p.val_ids.insert(id.get<std::string>());
    if (j.contains("predicates")) {
      for (const auto& [id, predicate] : j["predicates"].items()) {
        p.predicate_of[id] = predicate.get<std::string>();
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error("partition '" + path + "': missing field (" +
                             e.what() + ")");
  }
  p.refresh_availability();
  p.check_invariants();
  return p;
}

void save_partition(const std::string& path, const DatasetPartition& partition) {
  json j;
  j["train"] = partition.train_ids;
  j["pool"] = partition.pool_ids;
  j["val"] = partition.val_ids;
  j["predicates"] = partition.predicate_of;
  write_file(path, j.dump(2) + "\n");
}

std::map<std::string, double> load_recalls(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("recalls '" + path + "': malformed JSON (" +
                             e.what() + ")");
  }
  std::map<std::string, double> out;
  for (const auto& [predicate, recall] : j.items()) {
    out[normalize_phrase(predicate)] = recall.get<double>();
  }
  return out;
}

void save_recalls(const std::string& path,
                  const std::map<std::string, double>& recalls) {
  json j = json::object();
  for (const auto& [predicate, recall] : recalls) j[predicate] = recall;
  write_file(path, j.dump(2) + "\n");
}

void save_report(const std::string& path,
                 const std::vector<PredicateReport>& report,
                 const std::string& mode) {
  auto out = open_out(path);
  for (const auto& r : report) {
    json j;
    j["predicate"] = r.predicate;
    j["recall"] = r.recall;
    j["probability"] = r.probability;
    j["budget"] = r.budget;
    j["final_z"] = r.final_z;
    j["selected_tp_high"] = r.selected_tp_high;
    j["selected_fn_high"] = r.selected_fn_high;
    j["selected_fn_low"] = r.selected_fn_low;
    j["selected_fp_low"] = r.selected_fp_low;
    j["selected_total"] = r.selected_total;
    j["pool_tp"] = r.pool_tp;
    j["pool_fn"] = r.pool_fn;
    j["pool_fp"] = r.pool_fp;
    j["budget_met"] = r.budget_met;
    j["mode"] = mode;
    out << j.dump() << '\n';
  }
}

void save_selected_ids(const std::string& path,
                       const std::vector<std::string>& ids) {
  auto out = open_out(path);
  for (const auto& id : ids) out << id << '\n';
}

std::string read_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

}  // namespace art
