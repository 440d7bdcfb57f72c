#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bi/commands.hpp"
#include "bi/error.hpp"

namespace {

std::vector<bi::BaselineKind> parse_baselines(const std::string& name) {
  if (name == "all") {
    return {bi::BaselineKind::HeadOnly, bi::BaselineKind::HandOrientationOnly, bi::BaselineKind::HandVelocityOnly,
            bi::BaselineKind::FullBI};
  }
  return {bi::baseline_from_string(name)};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-modal Bayesian intent prediction for human-robot collaboration"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "Configuration file (JSON with comments)");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic reach corpus");
  bi::cli::GenOptions gen_opts;
  std::string gen_out;
  std::size_t per_target = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("-o,--out", gen_out, "Output corpus directory")->required();
  auto* per_target_opt = gen->add_option("-n,--per-target", per_target, "Reaches per object");
  auto* gen_seed_opt = gen->add_option("-s,--seed", gen_seed, "Corpus seed");

  auto* train = app.add_subcommand("train", "Learn a CPT from a corpus's train split");
  std::string train_corpus, train_out;
  train->add_option("--corpus", train_corpus, "Corpus directory")->required();
  train->add_option("-o,--out", train_out, "Output CPT file")->required();

  auto* predict = app.add_subcommand("predict", "Per-frame target prediction");
  std::string predict_cpt, predict_input;
  bool predict_stream = false;
  bool predict_no_latency = false;
  predict->add_option("--cpt", predict_cpt, "CPT file")->required();
  auto* input_opt = predict->add_option("-i,--input", predict_input, "Trajectory file");
  auto* stream_opt = predict->add_flag("--stream", predict_stream, "Read records from standard input");
  input_opt->excludes(stream_opt);
  predict->add_flag("--omit-latency", predict_no_latency, "Leave latency out of the records");

  auto* eval = app.add_subcommand("eval", "Evaluate a CPT on a corpus's eval split");
  bi::cli::EvalOptionsCli eval_opts;
  std::string eval_cpt, eval_corpus, eval_baseline = "full", eval_confusion;
  bool eval_no_latency = false;
  eval->add_option("--cpt", eval_cpt, "CPT file")->required();
  eval->add_option("--corpus", eval_corpus, "Corpus directory")->required();
  eval->add_option("-b,--baseline", eval_baseline, "full, head, hand, velocity or all");
  eval->add_option("--confusion", eval_confusion, "Confusion matrix CSV output");
  eval->add_flag("--json", eval_opts.json, "Machine-readable records instead of the table");
  eval->add_flag("--final-frame", eval_opts.final_frame_only, "Score only the last frame of each trajectory");
  eval->add_flag("--omit-latency", eval_no_latency, "Leave latency out of JSON records");

  auto* sim = app.add_subcommand("simulate", "Replay a human reach through prediction and replanning");
  bi::cli::SimulateOptions sim_opts;
  std::string sim_cpt, sim_target = "banana", sim_sequence = "milk,banana,cereal", sim_out, sim_variant = "straight";
  bool sim_no_latency = false;
  sim->add_option("--cpt", sim_cpt, "CPT file")->required();
  sim->add_option("--target", sim_target, "Object the human reaches for, or 'none'");
  sim->add_option("--sequence", sim_sequence, "Robot subtask objects, comma separated");
  sim->add_option("-s,--seed", sim_opts.scenario.seed, "Seed of the simulated reach");
  sim->add_option("--variant", sim_variant, "straight, curved_cw, curved_ccw or inattentive_head");
  sim->add_option("-o,--out", sim_out, "Log file (default: standard output)");
  sim->add_flag("--omit-latency", sim_no_latency, "Leave latency out of the log");

  auto* config_cmd = app.add_subcommand("config", "Print the default configuration");
  std::string config_out;
  config_cmd->add_option("-o,--out", config_out, "Write to a file instead of standard output");

  CLI11_PARSE(app, argc, argv);

  try {
    const bi::Config config = config_path.empty() ? bi::Config{} : bi::load_config(config_path);

    if (*gen) {
      gen_opts.out_dir = gen_out;
      if (*per_target_opt) gen_opts.per_target_count = per_target;
      if (*gen_seed_opt) gen_opts.seed = gen_seed;
      bi::cli::cmd_gen(config, gen_opts, std::cerr);
    } else if (*train) {
      bi::cli::cmd_train(config, {train_corpus, train_out}, std::cerr);
    } else if (*predict) {
      bi::cli::PredictOptions options{predict_cpt, predict_stream, !predict_no_latency};
      if (predict_stream) {
        std::ios::sync_with_stdio(false);
        bi::cli::cmd_predict(config, options, std::cin, std::cout);
      } else {
        if (predict_input.empty()) throw bi::Error(bi::ErrorCode::InvalidConfig, "predict needs --input or --stream");
        std::ifstream in(predict_input, std::ios::binary);
        if (!in) throw bi::Error(bi::ErrorCode::Io, "cannot open " + predict_input);
        bi::cli::cmd_predict(config, options, in, std::cout);
      }
    } else if (*eval) {
      eval_opts.cpt_path = eval_cpt;
      eval_opts.corpus_dir = eval_corpus;
      eval_opts.baselines = parse_baselines(eval_baseline);
      if (!eval_confusion.empty()) eval_opts.confusion_csv = eval_confusion;
      eval_opts.include_latency = !eval_no_latency;
      bi::cli::cmd_eval(config, eval_opts, std::cout);
    } else if (*sim) {
      sim_opts.cpt_path = sim_cpt;
      if (sim_target != "none") sim_opts.scenario.target = sim_target;
      sim_opts.scenario.sequence = split_list(sim_sequence);
      sim_opts.scenario.variant = bi::variant_from_string(sim_variant);
      if (!sim_out.empty()) sim_opts.out_log = sim_out;
      sim_opts.include_latency = !sim_no_latency;
      bi::cli::cmd_simulate(config, sim_opts, std::cout);
    } else if (*config_cmd) {
      if (config_out.empty()) {
        bi::write_config(std::cout, config);
      } else {
        std::ofstream out(config_out, std::ios::binary);
        if (!out) throw bi::Error(bi::ErrorCode::Io, "cannot write " + config_out);
        bi::write_config(out, config);
      }
    }
  } catch (const std::exception& e) {
    std::cout.flush();
    std::cerr << "bi: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
