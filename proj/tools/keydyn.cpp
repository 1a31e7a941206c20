#include <iostream>

#include "CLI11.hpp"

#include "keydyn/cli/commands.hpp"

using namespace keydyn::cli;

int main(int argc, char** argv) {
  CLI::App app{"keydyn: keystroke dynamics age-group toolkit"};
  app.require_subcommand(1);

  FeaturizeArgs featurize;
  auto* fz = app.add_subcommand("featurize", "Validate raw sessions and write feature CSVs");
  fz->add_option("input", featurize.input, "Directory of *.json sessions, or a .jsonl log")->required();
  fz->add_option("--out-dir", featurize.out_dir, "Output directory")->required();

  EvalArgs eval;
  std::optional<std::uint64_t> eval_seed;
  std::string init = "paper";
  auto* ev = app.add_subcommand("eval", "Cross-validated equal error rates");
  ev->add_option("--data", eval.data, "Dataset CSV (repeatable; layout read from the header)")->required();
  ev->add_option("--impostor", eval.impostors, "Impostor CSV (repeatable); switches to the impostor protocol");
  ev->add_option("--algo", eval.algo, "Algorithm name, comma list, or all")->capture_default_str();
  ev->add_option("--dataset", eval.dataset, "turkish, password, concat, or all")->capture_default_str();
  ev->add_option("--seed", eval_seed, "Fold and initialization seed (default: KEYDYN_SEED, then 0)");
  ev->add_option("--folds", eval.folds, "Number of subject folds")->capture_default_str()->check(CLI::Range(2, 1000));
  ev->add_option("--jobs", eval.jobs, "Folds trained in parallel")->capture_default_str()->check(CLI::PositiveNumber);
  ev->add_flag("--fold-average", eval.fold_average, "Average per-fold EERs instead of pooling scores");
  ev->add_option("--format", eval.format, "text or csv")->capture_default_str()->check(CLI::IsMember({"text", "csv"}));
  ev->add_option("-o,--output", eval.output, "Write the report here instead of stdout");
  ev->add_flag("--standardize-distances", eval.config.standardize_distances,
               "Standardize features for prototype and kNN classifiers");
  ev->add_option("--knn-k", eval.config.knn_k, "Neighbours for kNN")->capture_default_str();
  ev->add_option("--svm-c", eval.config.svm_c, "SVM box constraint")->capture_default_str();
  ev->add_option("--svm-gamma", eval.config.svm_gamma, "RBF width (default 1/d)");
  ev->add_option("--lda-shrinkage", eval.config.lda.shrinkage, "LDA ridge as a fraction of the mean covariance eigenvalue")
      ->capture_default_str();
  ev->add_option("--max-epochs", eval.config.mlp.max_epochs, "Neural training epoch budget")->capture_default_str();
  ev->add_option("--init", init, "Neural weight init: paper (uniform 0..1) or symmetric")
      ->capture_default_str()
      ->check(CLI::IsMember({"paper", "symmetric"}));

  StatsArgs stats;
  auto* st = app.add_subcommand("stats", "Five-number summaries of total typing time per age group");
  st->add_option("--data", stats.data, "Dataset CSV")->required();
  st->add_option("-o,--output", stats.output, "Write CSV here instead of stdout");

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Run the ingest HTTP service");
  sv->add_option("--store", serve.store, "Store directory")->required();
  sv->add_option("--host", serve.host, "Bind address")->capture_default_str();
  sv->add_option("--port", serve.port, "Port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
  sv->add_option("--static", serve.static_dir, "Directory served under / (capture page)");

  ExportArgs exp;
  auto* ex = app.add_subcommand("export", "Export a store as a dataset CSV");
  ex->add_option("--store", exp.store, "Store directory")->required();
  ex->add_option("--phrase", exp.phrase, "turkish, password, or concat")->capture_default_str();
  ex->add_flag("--deidentify", exp.deidentify, "Pseudonymous ids and no birth years");
  ex->add_option("-o,--output", exp.output, "Write CSV here instead of stdout");

  SynthArgs synth;
  std::optional<std::uint64_t> synth_seed;
  auto* sy = app.add_subcommand("synth", "Generate a synthetic population");
  sy->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  sy->add_option("--subjects", synth.subjects, "Subjects, alternating adult and child")->capture_default_str();
  sy->add_option("--sessions", synth.sessions, "Sessions per phrase")->capture_default_str();
  sy->add_option("--first-id", synth.first_id, "First subject id")->capture_default_str();
  sy->add_flag("--impostors", synth.impostors, "Every subject is an adult imitating a child");
  sy->add_flag("--raw", synth.raw, "Also write raw.jsonl");
  sy->add_option("--seed", synth_seed, "Generator seed (default: KEYDYN_SEED, then 0)");

  CLI11_PARSE(app, argc, argv);

  if (*fz) return cmd_featurize(featurize, std::cout, std::cerr);
  if (*ev) {
    eval.seed = eval_seed;
    eval.config.mlp.init = init == "symmetric" ? keydyn::InitScheme::symmetric : keydyn::InitScheme::paper_uniform;
    return cmd_eval(eval, std::cout, std::cerr);
  }
  if (*st) return cmd_stats(stats, std::cout, std::cerr);
  if (*sv) return cmd_serve(serve, std::cout, std::cerr);
  if (*ex) return cmd_export(exp, std::cout, std::cerr);
  if (*sy) {
    synth.seed = synth_seed;
    return cmd_synth(synth, std::cout, std::cerr);
  }
  return kExitUsage;
}
