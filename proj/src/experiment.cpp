#include "okiss/experiment.hpp"

#include <barrier>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "okiss/csv_loader.hpp"
#include "okiss/evaluation.hpp"

namespace okiss {

namespace {

// Runs B on a worker thread; run_step() returns once both sides finished
// the same instance.
class LockstepRunner {
 public:
  explicit LockstepRunner(OnlineKissmeStream& model)
      : model_(model), sync_(2), worker_([this] { loop(); }) {}

  ~LockstepRunner() {
    done_ = true;
    sync_.arrive_and_wait();
    worker_.join();
  }

  LockstepRunner(const LockstepRunner&) = delete;
  LockstepRunner& operator=(const LockstepRunner&) = delete;

  template <typename Fn>
  StepOutcome run_step(const Instance& inst, Fn&& other_side) {
    current_ = &inst;
    sync_.arrive_and_wait();  // start
    std::exception_ptr local;
    try {
      other_side();
    } catch (...) {
      local = std::current_exception();
    }
    sync_.arrive_and_wait();  // finish
    if (local) std::rethrow_exception(local);
    if (error_) std::rethrow_exception(error_);
    return outcome_;
  }

 private:
  void loop() {
    while (true) {
      sync_.arrive_and_wait();
      if (done_) return;
      try {
        outcome_ = model_.process(*current_);
      } catch (...) {
        error_ = std::current_exception();
      }
      sync_.arrive_and_wait();
    }
  }

  OnlineKissmeStream& model_;
  std::barrier<> sync_;
  const Instance* current_ = nullptr;
  StepOutcome outcome_;
  std::exception_ptr error_;
  bool done_ = false;
  std::thread worker_;
};

std::string_view to_string(Baseline b) { return b == Baseline::Identity ? "identity" : "none"; }
std::string_view to_string(Voting v) {
  return v == Voting::Majority ? "majority" : "inverse-distance";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!stream.generator && stream.csv_path.empty())
    throw DomainError("stream must be a generator or a CSV file");
  if (!stream.generator && stream.schema_path.empty())
    throw DomainError("CSV streams need a schema file");
  if (stream.generator && !instances) throw DomainError("generator streams need an instance budget");
  if (instances && *instances < 1) throw DomainError("instance budget must be at least 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (stride < 1) throw DomainError("stride must be at least 1");
  if (classifier.k < 1 || classifier.max_base < 1) throw DomainError("k and max_base must be positive");
}

std::unique_ptr<InstanceSource> open_stream(const StreamSpec& spec) {
  if (spec.generator) return make_generator(*spec.generator);
  return std::make_unique<CsvInstanceReader>(spec.csv_path, StreamSchema::load(spec.schema_path),
                                             spec.class_column);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  auto stream = open_stream(config.stream);
  const StreamSchema& schema = stream->schema();

  ExperimentReport report;
  report.paired = config.baseline != Baseline::None;
  report.encoded_dim = schema.encoded_dim();

  OnlineKissmeStream model_a(schema, config.classifier);
  std::optional<OnlineKissmeStream> model_b;
  if (report.paired) {
    ClassifierConfig baseline = config.classifier;
    baseline.learn_metric = false;
    model_b.emplace(schema, baseline);
  }
  std::optional<LockstepRunner> lockstep;
  if (report.paired && config.parallel) lockstep.emplace(*model_b);

  FadingEstimator fading_a(config.alpha);
  FadingEstimator fading_b(config.alpha);
  QTracker q_tracker(config.alpha);
  McNemarCounter mcnemar;

  if (config.instances) report.series.reserve(*config.instances);
  std::uint64_t index = 0;
  while (!config.instances || index < *config.instances) {
    auto inst = stream->next();
    if (!inst) {
      if (config.instances)
        throw Error("stream ended after " + std::to_string(index) + " of " +
                    std::to_string(*config.instances) + " instances");
      break;
    }
    ++index;

    StepOutcome out_a;
    StepOutcome out_b;
    if (lockstep) {
      out_b = lockstep->run_step(*inst, [&] { out_a = model_a.process(*inst); });
    } else {
      out_a = model_a.process(*inst);
      if (model_b) out_b = model_b->process(*inst);
    }

    SeriesRow row;
    row.index = index;
    row.loss_a = out_a.prediction.correct ? 0.0 : 1.0;
    row.err_a = fading_a.update(row.loss_a);
    row.acc_a = 1.0 - row.err_a;
    row.drift_a = out_a.level;
    if (out_a.reset) report.drift_events_a.push_back(index);
    if (out_a.metric_updated) ++report.metric_updates_a;

    if (report.paired) {
      row.loss_b = out_b.prediction.correct ? 0.0 : 1.0;
      row.err_b = fading_b.update(row.loss_b);
      row.acc_b = 1.0 - row.err_b;
      row.drift_b = out_b.level;
      if (out_b.reset) report.drift_events_b.push_back(index);
      row.q = q_tracker.update(row.loss_a, row.loss_b);
      const auto test = mcnemar.update(out_a.prediction.correct, out_b.prediction.correct);
      row.mcnemar = test.statistic;
      row.reject = test.reject;
    }
    report.series.push_back(row);
  }
  if (report.series.empty()) throw Error("stream produced no instances");

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<SeriesRow> sampled_rows(const ExperimentReport& report, std::size_t stride) {
  if (stride < 1) throw DomainError("stride must be at least 1");
  std::vector<SeriesRow> rows;
  const auto& s = report.series;
  for (std::size_t i = 0; i < s.size(); ++i)
    if ((i + 1) % stride == 0 || i + 1 == s.size()) rows.push_back(s[i]);
  return rows;
}

std::string format_fixed6(double value) {
  char buf[64];
  // glibc prints the exact binary value correctly rounded; exact ties go to even.
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

void write_series_csv(std::ostream& out, const ExperimentReport& report, std::size_t stride) {
  if (report.paired)
    out << "index,loss_a,loss_b,acc_a,acc_b,err_a,err_b,q,mcnemar,reject,drift_a,drift_b\n";
  else
    out << "index,loss_a,acc_a,err_a,drift_a\n";

  for (const auto& r : sampled_rows(report, stride)) {
    out << r.index << ',' << format_fixed6(r.loss_a) << ',';
    if (report.paired) {
      out << format_fixed6(r.loss_b) << ',' << format_fixed6(r.acc_a) << ','
          << format_fixed6(r.acc_b) << ',' << format_fixed6(r.err_a) << ','
          << format_fixed6(r.err_b) << ',' << (r.q ? format_fixed6(*r.q) : std::string()) << ','
          << format_fixed6(r.mcnemar) << ',' << (r.reject ? 1 : 0) << ','
          << static_cast<int>(r.drift_a) << ',' << static_cast<int>(r.drift_b) << '\n';
    } else {
      out << format_fixed6(r.acc_a) << ',' << format_fixed6(r.err_a) << ','
          << static_cast<int>(r.drift_a) << '\n';
    }
  }
}

void write_summary(std::ostream& out, const ExperimentReport& report,
                   const ExperimentConfig& config) {
  auto join = [](const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  const SeriesRow& last = report.series.back();
  out << "instances=" << report.series.size() << '\n'
      << "encoded_dim=" << report.encoded_dim << '\n'
      << "final_acc_a=" << format_fixed6(last.acc_a) << '\n'
      << "final_err_a=" << format_fixed6(last.err_a) << '\n'
      << "drift_events_a=" << join(report.drift_events_a) << '\n'
      << "metric_updates_a=" << report.metric_updates_a << '\n';
  if (report.paired) {
    out << "final_acc_b=" << format_fixed6(last.acc_b) << '\n'
        << "final_err_b=" << format_fixed6(last.err_b) << '\n'
        << "drift_events_b=" << join(report.drift_events_b) << '\n'
        << "final_q=" << (last.q ? format_fixed6(*last.q) : std::string()) << '\n'
        << "final_mcnemar=" << format_fixed6(last.mcnemar) << '\n'
        << "final_reject=" << (last.reject ? 1 : 0) << '\n';
  }
  out << "wall_seconds=" << format_fixed6(report.wall_seconds) << '\n';

  const auto& c = config.classifier;
  if (config.stream.generator) {
    out << "config.stream=" << to_string(config.stream.generator->kind) << '\n'
        << "config.seed=" << config.stream.generator->seed << '\n';
  } else {
    out << "config.stream=csv:" << config.stream.csv_path << '\n'
        << "config.schema=" << config.stream.schema_path << '\n';
  }
  out << "config.alpha=" << format_fixed6(config.alpha) << '\n'
      << "config.k=" << c.k << '\n'
      << "config.max_base=" << c.max_base << '\n'
      << "config.ridge=" << c.ridge << '\n'
      << "config.voting=" << to_string(c.voting) << '\n'
      << "config.ddm_warning=" << format_fixed6(c.drift.warning_sigmas) << '\n'
      << "config.ddm_drift=" << format_fixed6(c.drift.drift_sigmas) << '\n'
      << "config.ddm_min=" << c.drift.min_observations << '\n'
      << "config.baseline=" << to_string(config.baseline) << '\n'
      << "config.stride=" << config.stride << '\n';
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  written.push_back(path.string());
  out << content;
  out.close();
  if (!out) throw Error("write failed: " + path.string());
}

void remove_all(const std::vector<std::string>& paths) {
  for (const auto& p : paths) {
    std::error_code ec;
    std::filesystem::remove(p, ec);
  }
}

}  // namespace

std::vector<std::string> emit_plots(const ExperimentReport& report, const std::string& dir,
                                    std::size_t stride) {
  const auto rows = sampled_rows(report, stride);
  std::vector<std::string> written;
  try {
    write_file(std::filesystem::path(dir) / "accuracy.svg", accuracy_svg(rows, report.paired),
               written);
    if (report.paired) write_file(std::filesystem::path(dir) / "qstat.svg", qstat_svg(rows), written);
  } catch (...) {
    remove_all(written);
    throw;
  }
  return written;
}

std::vector<std::string> write_outputs(const ExperimentReport& report,
                                       const ExperimentConfig& config) {
  const std::filesystem::path dir(config.out_dir);
  std::vector<std::string> written;
  try {
    std::filesystem::create_directories(dir);
    std::ostringstream series;
    write_series_csv(series, report, config.stride);
    write_file(dir / "series.csv", series.str(), written);
    std::ostringstream summary;
    write_summary(summary, report, config);
    write_file(dir / "summary.txt", summary.str(), written);
    if (config.plot) {
      const auto plots = emit_plots(report, dir.string(), config.stride);
      written.insert(written.end(), plots.begin(), plots.end());
    }
  } catch (...) {
    remove_all(written);
    throw;
  }
  return written;
}

}  // namespace okiss
