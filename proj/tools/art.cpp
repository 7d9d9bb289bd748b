#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "art/config.hpp"
#include "art/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;

  art::PipelineConfig load() const {
    const art::Config raw = config_path.empty()
                                ? art::Config::parse("", "config")
                                : art::Config::parse_file(config_path);
    auto cfg = art::PipelineConfig::from_config(raw);
    cfg.seed = art::resolve_seed(seed, raw);
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* config =
      cmd->add_option("--config", args.config_path, "pipeline config file");
  if (config_required) config->required();
  cmd->add_option("--seed", args.seed,
                  "seed override (flag > ART_SEED > config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive relation-tuning data curation engine"};
  app.require_subcommand(1);

  CommonArgs gen_args;
  std::string gen_annotations, gen_vocab, gen_out;
  auto* gen = app.add_subcommand("gen-instructions",
                                 "convert annotations into instruction instances");
  gen->add_option("--annotations", gen_annotations, "annotation JSONL")->required();
  gen->add_option("--vocab", gen_vocab, "predicate vocabulary file")->required();
  gen->add_option("--out", gen_out, "output instance JSONL")->required();
  add_common(gen, gen_args, false);

  CommonArgs part_args;
  std::string part_annotations, part_vocab, part_out;
  auto* part = app.add_subcommand("partition",
                                  "create the initial train/pool/val partition");
  part->add_option("--annotations", part_annotations, "annotation JSONL")->required();
  part->add_option("--vocab", part_vocab, "predicate vocabulary file")->required();
  part->add_option("--out", part_out, "output partition JSON")->required();
  add_common(part, part_args, false);

  CommonArgs bal_args;
  std::string bal_partition, bal_out;
  auto* bal = app.add_subcommand("sample-balanced",
                                 "round-robin balanced sampling from the pool");
  bal->add_option("--partition", bal_partition, "partition JSON")->required();
  bal->add_option("--out", bal_out, "output directory")->required();
  add_common(bal, bal_args, false);

  CommonArgs ada_args;
  std::string ada_partition, ada_records, ada_recalls, ada_instances, ada_out;
  auto* ada = app.add_subcommand("sample-adaptive",
                                 "recall-weighted adaptive sampling iteration");
  ada->add_option("--partition", ada_partition, "partition JSON")->required();
  ada->add_option("--records", ada_records, "prediction-record JSONL")->required();
  ada->add_option("--recalls", ada_recalls, "validation recall JSON")->required();
  ada->add_option("--instances", ada_instances, "instance JSONL")->required();
  ada->add_option("--out", ada_out, "output directory")->required();
  add_common(ada, ada_args, false);

  CommonArgs eval_args;
  std::string eval_annotations, eval_records, eval_out;
  std::optional<std::string> eval_instances, eval_vocab;
  auto* eval = app.add_subcommand("eval", "recall metrics over prediction records");
  eval->add_option("--annotations", eval_annotations, "ground-truth JSONL")->required();
  eval->add_option("--records", eval_records, "prediction-record JSONL")->required();
  eval->add_option("--instances", eval_instances,
                   "instance JSONL (when instance ids differ from triplet ids)");
  eval->add_option("--vocab", eval_vocab,
                   "training vocabulary for the unseen-prediction count");
  eval->add_option("--out", eval_out, "output metrics JSON")->required();
  add_common(eval, eval_args, false);

  CommonArgs mock_args;
  std::string mock_instances, mock_out;
  std::optional<std::string> mock_counts;
  auto* mock = app.add_subcommand("mock-predict",
                                  "deterministic synthetic predictor over instances");
  mock->add_option("--instances", mock_instances, "instance JSONL")->required();
  mock->add_option("--train-counts", mock_counts,
                   "per-predicate train counts JSON for the learning curve");
  mock->add_option("--out", mock_out, "output record JSONL")->required();
  add_common(mock, mock_args, false);

  CommonArgs sim_args;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate",
                                 "closed-loop run against the mock model");
  sim->add_option("--out", sim_out, "output directory")->required();
  add_common(sim, sim_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      art::cmd_gen_instructions(gen_annotations, gen_vocab, gen_args.load(), gen_out);
    } else if (part->parsed()) {
      art::cmd_partition(part_annotations, part_vocab, part_args.load(), part_out);
    } else if (bal->parsed()) {
      art::cmd_sample_balanced(bal_partition, bal_args.load(), bal_out);
    } else if (ada->parsed()) {
      art::cmd_sample_adaptive(ada_partition, ada_records, ada_recalls,
                               ada_instances, ada_args.load(), ada_out);
    } else if (eval->parsed()) {
      art::cmd_eval(eval_annotations, eval_records, eval_instances, eval_vocab,
                    eval_args.load(), eval_out);
    } else if (mock->parsed()) {
      art::cmd_mock_predict(mock_instances, mock_args.load(), mock_counts, mock_out);
    } else if (sim->parsed()) {
      art::cmd_simulate(sim_args.load(), sim_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
