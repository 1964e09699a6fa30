// Prequential experiment runner for the online KISSME k-NN stream classifier.
//
//   okiss --stream sea --instances 100000 --seed 7 --out runs/sea --plot
//   okiss --stream csv:kdd.csv --schema kdd.schema --out runs/kdd
//   okiss --config experiment.ini --seed 3
//
// Exit code is 0 only if the whole budget was processed and every output
// file was written.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "okiss/csv_loader.hpp"
#include "okiss/experiment.hpp"

namespace {

using namespace okiss;

int dump_stream(const ExperimentConfig& config, const std::string& data_path,
                const std::string& schema_path) {
  auto stream = open_stream(config.stream);
  std::vector<Instance> instances;
  const std::size_t budget = config.instances.value_or(0);
  while (budget == 0 || instances.size() < budget) {
    auto inst = stream->next();
    if (!inst) break;
    instances.push_back(std::move(*inst));
  }
  if (config.instances && instances.size() < budget) throw Error("stream ended early");

  std::ofstream data(data_path, std::ios::binary);
  if (!data) throw Error("cannot write " + data_path);
  write_instances_csv(data, stream->schema(), instances);
  if (!schema_path.empty()) {
    std::ofstream schema(schema_path, std::ios::binary);
    if (!schema) throw Error("cannot write " + schema_path);
    schema << schema_text(stream->schema());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online KISSME stream classifier: prequential experiment runner"};
  app.set_config("--config", "", "key=value configuration file; command-line flags override it");

  std::string stream_arg;
  std::string schema_path;
  std::string class_column;
  std::size_t instances = 0;
  std::uint64_t seed = 1;
  double alpha = 0.999;
  std::size_t k = 10;
  std::size_t max_base = 500;
  double ridge = kDefaultRidge;
  std::string baseline = "identity";
  std::string out_dir = ".";
  bool plot = false;
  std::size_t stride = 100;
  bool full_resolution = false;
  std::string voting = "inverse-distance";
  double ddm_warning = 2.0;
  double ddm_drift = 3.0;
  std::size_t ddm_min = 30;
  bool warning_edges_only = false;
  bool parallel = false;
  double noise = -1.0;
  double drift = -1.0;
  std::size_t block_length = 0;
  std::string dump_path;
  std::string dump_schema_path;

  app.add_option("--stream", stream_arg,
                 "Generator (sea|hyperplane|rbf|tree|waveform|gaussian) or csv:<path>")
      ->required();
  app.add_option("--schema", schema_path, "Schema file for csv streams");
  app.add_option("--class-column", class_column, "Class column name for csv streams (default: last)");
  app.add_option("--instances", instances, "Instance budget (default 100000; csv: all rows)");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--alpha", alpha, "Fading factor for all estimators")->check(CLI::Range(0.0, 1.0));
  app.add_option("--k", k, "Neighbors per query")->check(CLI::PositiveNumber);
  app.add_option("--max-base", max_base, "Instance base capacity")->check(CLI::PositiveNumber);
  app.add_option("--ridge", ridge, "Relative ridge added before covariance inversion");
  app.add_option("--baseline", baseline, "Classifier B")->check(CLI::IsMember({"identity", "none"}));
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--plot", plot, "Write accuracy.svg and qstat.svg");
  app.add_option("--stride", stride, "Report every R-th instance")->check(CLI::PositiveNumber);
  app.add_flag("--full-resolution", full_resolution, "Report every instance (stride 1)");
  app.add_option("--voting", voting, "Neighbor vote")
      ->check(CLI::IsMember({"inverse-distance", "majority"}));
  app.add_option("--ddm-warning", ddm_warning, "DDM warning level in standard errors");
  app.add_option("--ddm-drift", ddm_drift, "DDM out-of-control level in standard errors");
  app.add_option("--ddm-min", ddm_min, "DDM warm-up observations")->check(CLI::PositiveNumber);
  app.add_flag("--warning-edges-only", warning_edges_only,
               "Recompute the metric only when a warning episode starts");
  app.add_flag("--parallel", parallel, "Run the baseline on a second thread in lockstep");
  app.add_option("--noise", noise, "Generator label noise fraction");
  app.add_option("--drift", drift, "Generator drift magnitude");
  app.add_option("--block-length", block_length, "SEA concept block length");
  app.add_option("--dump-stream", dump_path, "Write the stream's instances as CSV instead of running");
  app.add_option("--dump-schema", dump_schema_path, "With --dump-stream, also write the schema");

  CLI11_PARSE(app, argc, argv);

  ExperimentConfig config;
  try {
    if (stream_arg.rfind("csv:", 0) == 0) {
      config.stream.csv_path = stream_arg.substr(4);
      config.stream.schema_path = schema_path;
      if (!class_column.empty()) config.stream.class_column = class_column;
      if (instances > 0) config.instances = instances;
    } else {
      const auto kind = parse_generator_kind(stream_arg);
      if (!kind) throw DomainError("unknown stream kind: " + stream_arg);
      GeneratorConfig gen;
      gen.kind = *kind;
      gen.seed = seed;
      if (noise >= 0.0) gen.noise = noise;
      if (drift >= 0.0) gen.drift = drift;
      if (block_length > 0) gen.block_length = block_length;
      config.stream.generator = gen;
      config.instances = instances > 0 ? instances : 100000;
    }

    config.alpha = alpha;
    config.classifier.k = k;
    config.classifier.max_base = max_base;
    config.classifier.ridge = ridge;
    config.classifier.voting = voting == "majority" ? Voting::Majority : Voting::InverseDistance;
    config.classifier.drift = DriftConfig{ddm_warning, ddm_drift, ddm_min};
    config.classifier.warning_edges_only = warning_edges_only;
    config.baseline = baseline == "none" ? Baseline::None : Baseline::Identity;
    config.out_dir = out_dir;
    config.plot = plot;
    config.stride = full_resolution ? 1 : stride;
    config.parallel = parallel;

    if (!dump_path.empty()) return dump_stream(config, dump_path, dump_schema_path);

    const ExperimentReport report = run_experiment(config);
    const auto files = write_outputs(report, config);
    const auto& last = report.series.back();
    std::printf("processed %zu instances in %.2f s\n", report.series.size(), report.wall_seconds);
    std::printf("final accuracy A = %s", format_fixed6(last.acc_a).c_str());
    if (report.paired) std::printf(", B = %s", format_fixed6(last.acc_b).c_str());
    std::printf("\n");
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
