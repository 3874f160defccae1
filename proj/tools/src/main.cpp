// ltcn: train, evaluate and inspect recurrence-aware LTCN classifiers from
// the command line. Every command writes its primary output plus a manifest
// that records the resolved flags, so runs can be replayed exactly.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_support.hpp"
#include "ltcn/eval.hpp"
#include "ltcn/log.hpp"
#include "ltcn/model.hpp"
#include "ltcn/version.hpp"

namespace {

using namespace ltcn;
using ltcn::cli::CsvWriter;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Options {
  std::string data;
  std::string model;
  std::string out;
  double phi = 0.8;
  int iters = 20;
  double tol = 1e-5;
  int cycle_window = 10;
  std::string transfer = "sigmoid";
  std::string head = "recurrence";
  std::string phi_grid = "0:1:0.1";
  std::string iters_grid;
  std::string transfer_grid = "sigmoid,tanh";
  int folds = 5;
  std::uint64_t seed = 42;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string delimiter = ",";
  bool no_header = false;
  bool nested = false;
};

CsvOptions csv_options(const Options& opts) {
  CsvOptions csv;
  csv.delimiter = opts.delimiter[0];
  csv.has_header = !opts.no_header;
  return csv;
}

ReasoningConfig reasoning_config(const Options& opts, double phi, int iters) {
  ReasoningConfig config;
  config.phi = phi;
  config.max_iterations = iters;
  config.tolerance = opts.tol;
  config.cycle_window = opts.cycle_window;
  config.tf = TransferFunction(transfer_kind_from_string(opts.transfer));
  return config;
}

std::string dataset_id(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

json common_flags(const Options& opts) {
  json flags;
  flags["delimiter"] = opts.delimiter;
  flags["header"] = !opts.no_header;
  flags["seed"] = opts.seed;
  flags["jobs"] = opts.jobs;
  return flags;
}

json config_flags(const Options& opts) {
  json flags = common_flags(opts);
  flags["phi"] = opts.phi;
  flags["iters"] = opts.iters;
  flags["tol"] = opts.tol;
  flags["cycle_window"] = opts.cycle_window;
  flags["transfer"] = opts.transfer;
  flags["head"] = opts.head;
  return flags;
}

std::vector<TransferKind> parse_transfer_grid(const std::string& spec) {
  std::vector<TransferKind> kinds;
  std::string::size_type start = 0;
  while (start <= spec.size()) {
    const auto pos = spec.find(',', start);
    const std::string token =
        pos == std::string::npos ? spec.substr(start) : spec.substr(start, pos - start);
    if (!token.empty()) kinds.push_back(transfer_kind_from_string(token));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (kinds.empty()) throw std::invalid_argument("--transfer-grid: empty grid");
  return kinds;
}

std::string sibling_output(const std::string& out, const std::string& suffix) {
  std::filesystem::path path(out);
  const std::string stem = path.stem().string();
  const std::string ext = path.extension().string();
  return (path.parent_path() / (stem + suffix + ext)).string();
}

// ---- subcommands ----

int run_train(const Options& opts) {
  const RawTable raw = load_csv(opts.data, csv_options(opts));
  const ReasoningConfig config = reasoning_config(opts, opts.phi, opts.iters);
  const Dataset dataset = build_dataset(raw, config.tf);

  const auto t0 = Clock::now();
  const LtcnModel model = fit(dataset, config, decision_head_from_string(opts.head));
  const auto t1 = Clock::now();
  const double fit_seconds = std::chrono::duration<double>(t1 - t0).count();

  save(model, opts.out);
  json flags = config_flags(opts);
  flags["data"] = opts.data;
  flags["out"] = opts.out;
  ltcn::cli::write_manifest(opts.out, "train", flags, {opts.data}, {opts.out});

  std::cout << "model: " << opts.out << '\n'
            << "instances: " << dataset.rows() << "  features: " << dataset.feature_count()
            << "  classes: " << dataset.class_count() << '\n'
            << "fit_seconds: " << format_double(fit_seconds) << '\n'
            << "attractor: " << to_string(model.attractor) << '\n'
            << "iterations_used: " << model.outer.iterations << '\n';
  return 0;
}

int run_predict(const Options& opts) {
  const LtcnModel model = load(opts.model);
  const Matrix raw_features = ltcn::cli::read_feature_csv(
      opts.data, model.feature_count(), opts.delimiter[0], !opts.no_header);
  const Matrix scores = predict_scores(model, scale_features(model, raw_features));
  const auto labels = argmax_classes(scores, model.classes);

  std::vector<std::string> header{"row", "predicted"};
  for (const auto& cls : model.classes) header.push_back("score_" + cls);
  CsvWriter csv(opts.out, header);
  for (Index r = 0; r < scores.rows(); ++r) {
    std::vector<std::string> cells{std::to_string(r), labels[static_cast<std::size_t>(r)]};
    for (Index c = 0; c < scores.cols(); ++c) cells.push_back(CsvWriter::number(scores(r, c)));
    csv.row(cells);
  }

  json flags = common_flags(opts);
  flags["model"] = opts.model;
  flags["data"] = opts.data;
  flags["out"] = opts.out;
  ltcn::cli::write_manifest(opts.out, "predict", flags, {opts.model, opts.data}, {opts.out});
  std::cout << "predictions: " << opts.out << " (" << scores.rows() << " rows)\n";
  return 0;
}

void write_fold_rows(CsvWriter& csv, const std::string& dataset, const EvalReport& report) {
  for (const auto& fold : report.folds) {
    csv.row({dataset, to_string(report.head), CsvWriter::number(report.phi),
             to_string(report.transfer), std::to_string(report.max_iterations),
             std::to_string(fold.fold), CsvWriter::number(fold.kappa),
             CsvWriter::number(fold.accuracy), CsvWriter::number(fold.fit_seconds),
             std::to_string(fold.iterations), to_string(fold.attractor.kind),
             std::to_string(fold.attractor.t_alpha), std::to_string(fold.attractor.period)});
  }
}

void print_report_summary(const std::string& name, const EvalReport& report) {
  std::cout << name << ": kappa " << format_double(report.mean_kappa) << " +/- "
            << format_double(report.std_kappa) << ", accuracy "
            << format_double(report.mean_accuracy) << ", fixed-point folds "
            << format_double(report.fixed_point_fraction);
  if (report.fixed_point_fraction > 0.0)
    std::cout << " (mean t_alpha " << format_double(report.mean_t_alpha) << ")";
  std::cout << '\n';
}

int run_evaluate(const Options& opts) {
  const RawTable raw = load_csv(opts.data, csv_options(opts));
  const ReasoningConfig config = reasoning_config(opts, opts.phi, opts.iters);
  const EvalReport report = cross_validate(raw, config, decision_head_from_string(opts.head),
                                           opts.folds, opts.seed, opts.jobs);

  CsvWriter csv(opts.out,
                {"dataset", "head", "phi", "transfer", "iters", "fold", "kappa", "accuracy",
                 "fit_seconds", "t_effective", "attractor", "t_alpha", "period"});
  write_fold_rows(csv, dataset_id(opts.data), report);

  json flags = config_flags(opts);
  flags["data"] = opts.data;
  flags["out"] = opts.out;
  flags["folds"] = opts.folds;
  ltcn::cli::write_manifest(opts.out, "evaluate", flags, {opts.data}, {opts.out});
  print_report_summary("cv", report);
  return 0;
}

int run_sweep(const Options& opts) {
  const RawTable raw = load_csv(opts.data, csv_options(opts));
  const auto phis = ltcn::cli::parse_double_grid(opts.phi_grid, "--phi-grid");
  const std::string id = dataset_id(opts.data);

  json flags = config_flags(opts);
  flags["data"] = opts.data;
  flags["out"] = opts.out;
  flags["folds"] = opts.folds;
  flags["phi_grid"] = opts.phi_grid;
  flags["nested"] = opts.nested;

  if (opts.nested) {
    const auto kinds = parse_transfer_grid(opts.transfer_grid);
    flags["transfer_grid"] = opts.transfer_grid;
    const GridSearchResult result =
        grid_search(raw, phis, kinds, opts.iters, opts.folds, opts.seed, opts.jobs);

    // Wall-clock columns are deliberately absent: sweep outputs are bitwise
    // reproducible for identical invocations.
    CsvWriter cells(opts.out, {"dataset", "transfer", "phi", "mean_kappa", "std_kappa",
                               "mean_accuracy", "selected"});
    for (const auto& cell : result.cells) {
      const bool selected =
          cell.phi == result.best_phi && cell.transfer == result.best_transfer;
      cells.row({id, to_string(cell.transfer), CsvWriter::number(cell.phi),
                 CsvWriter::number(cell.mean_kappa), CsvWriter::number(cell.std_kappa),
                 CsvWriter::number(cell.mean_accuracy), selected ? "1" : "0"});
    }

    const std::string outer_path = sibling_output(opts.out, "_outer");
    CsvWriter outer(outer_path,
                    {"dataset", "fold", "phi_selected", "transfer_selected", "kappa",
                     "accuracy", "t_effective", "attractor", "t_alpha"});
    for (std::size_t f = 0; f < result.outer.folds.size(); ++f) {
      const auto& fold = result.outer.folds[f];
      outer.row({id, std::to_string(fold.fold),
                 CsvWriter::number(result.per_fold_choice[f].first),
                 to_string(result.per_fold_choice[f].second), CsvWriter::number(fold.kappa),
                 CsvWriter::number(fold.accuracy), std::to_string(fold.iterations),
                 to_string(fold.attractor.kind), std::to_string(fold.attractor.t_alpha)});
    }

    ltcn::cli::write_manifest(opts.out, "sweep", flags, {opts.data}, {opts.out, outer_path});
    std::cout << "selected: phi=" << format_double(result.best_phi) << " transfer="
              << to_string(result.best_transfer) << '\n';
    print_report_summary("outer", result.outer);
    return 0;
  }

  const auto iters_values = opts.iters_grid.empty()
                                ? std::vector<int>{opts.iters}
                                : ltcn::cli::parse_int_grid(opts.iters_grid, "--iters-grid");
  flags["iters_grid"] = opts.iters_grid.empty() ? std::to_string(opts.iters) : opts.iters_grid;

  const auto cells =
      sweep(raw, phis, iters_values, transfer_kind_from_string(opts.transfer),
            decision_head_from_string(opts.head), opts.tol, opts.folds, opts.seed, opts.jobs);

  CsvWriter csv(opts.out,
                {"dataset", "head", "transfer", "phi", "iters", "mean_kappa", "std_kappa",
                 "mean_accuracy", "fixed_point_fraction", "mean_t_alpha"});
  const SweepCell* best = nullptr;
  for (const auto& cell : cells) {
    csv.row({id, opts.head, opts.transfer, CsvWriter::number(cell.phi),
             std::to_string(cell.max_iterations), CsvWriter::number(cell.report.mean_kappa),
             CsvWriter::number(cell.report.std_kappa),
             CsvWriter::number(cell.report.mean_accuracy),
             CsvWriter::number(cell.report.fixed_point_fraction),
             CsvWriter::number(cell.report.mean_t_alpha)});
    if (best == nullptr || cell.report.mean_kappa > best->report.mean_kappa) best = &cell;
  }
  ltcn::cli::write_manifest(opts.out, "sweep", flags, {opts.data}, {opts.out});
  if (best != nullptr)
    std::cout << "best cell: phi=" << format_double(best->phi) << " iters="
              << best->max_iterations << " mean_kappa="
              << format_double(best->report.mean_kappa) << '\n';
  return 0;
}

int run_compare(const Options& opts) {
  const RawTable raw = load_csv(opts.data, csv_options(opts));
  const auto phis = ltcn::cli::parse_double_grid(opts.phi_grid, "--phi-grid");
  const std::string id = dataset_id(opts.data);

  CsvWriter csv(opts.out, {"dataset", "phi", "transfer", "iters", "head", "mean_kappa",
                           "std_kappa", "mean_accuracy", "mean_fit_seconds",
                           "fixed_point_fraction", "mean_t_alpha"});
  for (double phi : phis) {
    const HeadComparison cmp = compare_decision_heads(
        raw, reasoning_config(opts, phi, opts.iters), opts.folds, opts.seed, opts.jobs);
    for (const EvalReport* report : {&cmp.recurrence, &cmp.last_state}) {
      csv.row({id, CsvWriter::number(phi), opts.transfer, std::to_string(opts.iters),
               to_string(report->head), CsvWriter::number(report->mean_kappa),
               CsvWriter::number(report->std_kappa), CsvWriter::number(report->mean_accuracy),
               CsvWriter::number(report->mean_fit_seconds),
               CsvWriter::number(report->fixed_point_fraction),
               CsvWriter::number(report->mean_t_alpha)});
    }
    std::cout << "phi=" << format_double(phi) << ": recurrence kappa "
              << format_double(cmp.recurrence.mean_kappa) << ", laststate kappa "
              << format_double(cmp.last_state.mean_kappa) << '\n';
  }

  json flags = config_flags(opts);
  flags["data"] = opts.data;
  flags["out"] = opts.out;
  flags["folds"] = opts.folds;
  flags["phi_grid"] = opts.phi_grid;
  ltcn::cli::write_manifest(opts.out, "compare", flags, {opts.data}, {opts.out});
  return 0;
}

int run_explain(const Options& opts) {
  const LtcnModel model = load(opts.model);
  const RelevanceReport report = relevance(model);

  CsvWriter csv(opts.out, {"rank", "feature", "score", "inner_component", "outer_component"});
  for (std::size_t i = 0; i < report.scores.size(); ++i) {
    const auto& entry = report.scores[i];
    csv.row({std::to_string(i + 1), entry.feature, CsvWriter::number(entry.score),
             CsvWriter::number(entry.inner_component),
             CsvWriter::number(entry.outer_component)});
  }

  json flags = common_flags(opts);
  flags["model"] = opts.model;
  flags["out"] = opts.out;
  ltcn::cli::write_manifest(opts.out, "explain", flags, {opts.model}, {opts.out});

  const std::size_t shown = std::min<std::size_t>(report.scores.size(), 10);
  for (std::size_t i = 0; i < shown; ++i)
    std::cout << (i + 1) << ". " << report.scores[i].feature << "  "
              << format_double(report.scores[i].score) << '\n';
  return 0;
}

int run_dynamics(const Options& opts) {
  const RawTable raw = load_csv(opts.data, csv_options(opts));
  const ReasoningConfig config = reasoning_config(opts, opts.phi, opts.iters);
  const Dataset dataset = build_dataset(raw, config.tf);

  const InnerWeights inner = fit_inner(dataset.X, config.tf);
  const StateHistory history = run(dataset.X, inner.W, inner.B, config);
  OuterWeights outer = fit_outer(concat_history(history), dataset.Y, config.tf);
  outer.iterations = history.iterations();

  const Index features = dataset.feature_count();
  CsvWriter csv(opts.out,
                {"iteration", "delta", "state_mean", "state_std", "outer_weight_mean",
                 "outer_weight_std", "attractor", "t_alpha", "period"});
  for (std::size_t t = 0; t < history.states.size(); ++t) {
    const Matrix& state = history.states[t];
    const double state_mean = state.mean();
    const double state_std =
        std::sqrt((state.array() - state_mean).square().sum() / state.size());
    const Matrix block = outer.R.middleRows(static_cast<Index>(t) * features, features);
    const double block_mean = block.mean();
    const double block_std =
        std::sqrt((block.array() - block_mean).square().sum() / block.size());
    const double delta =
        t == 0 ? 0.0
               : (history.states[t] - history.states[t - 1]).cwiseAbs().maxCoeff();
    csv.row({std::to_string(t), t == 0 ? std::string() : CsvWriter::number(delta),
             CsvWriter::number(state_mean), CsvWriter::number(state_std),
             CsvWriter::number(block_mean), CsvWriter::number(block_std),
             to_string(history.attractor.kind), std::to_string(history.attractor.t_alpha),
             std::to_string(history.attractor.period)});
  }

  json flags = config_flags(opts);
  flags["data"] = opts.data;
  flags["out"] = opts.out;
  ltcn::cli::write_manifest(opts.out, "dynamics", flags, {opts.data}, {opts.out});
  std::cout << "attractor: " << to_string(history.attractor) << '\n'
            << "iterations_used: " << history.iterations() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence-aware long-term cognitive network classifier"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options opts;

  const auto add_data_flags = [&opts](CLI::App* cmd, bool required = true) {
    cmd->add_option("--data", opts.data, "Input CSV (label in the last column)")
        ->required(required);
    cmd->add_option("--delimiter", opts.delimiter, "CSV delimiter")
        ->check(CLI::Validator(
            [](std::string& val) {
              return val.size() == 1 ? std::string() : std::string("must be one character");
            },
            "CHAR"));
    cmd->add_flag("--no-header", opts.no_header, "Input CSV has no header row");
  };
  const auto add_config_flags = [&opts](CLI::App* cmd) {
    cmd->add_option("--phi", opts.phi, "Nonlinearity coefficient")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--iters", opts.iters, "Maximum reasoning iterations T")
        ->check(CLI::Range(1, 1000000));
    cmd->add_option("--tol", opts.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--cycle-window", opts.cycle_window, "Limit-cycle search window")
        ->check(CLI::Range(1, 1000));
    cmd->add_option("--transfer", opts.transfer, "Transfer function")
        ->check(CLI::IsMember({"sigmoid", "tanh"}));
  };
  const auto add_head_flag = [&opts](CLI::App* cmd) {
    cmd->add_option("--head", opts.head, "Decision head")
        ->check(CLI::IsMember({"recurrence", "laststate"}));
  };
  const auto add_eval_flags = [&opts](CLI::App* cmd) {
    cmd->add_option("--folds", opts.folds, "Cross-validation folds")
        ->check(CLI::Range(2, 1000000));
    cmd->add_option("--seed", opts.seed, "Seed for all randomness");
    cmd->add_option("--jobs", opts.jobs, "Worker threads for folds/cells")
        ->check(CLI::Range(1, 4096));
  };
  const auto add_out_flag = [&opts](CLI::App* cmd) {
    cmd->add_option("--out", opts.out, "Output file")->required();
  };

  CLI::App* train = app.add_subcommand("train", "Fit a model and write it to disk");
  add_data_flags(train);
  add_config_flags(train);
  add_head_flag(train);
  add_out_flag(train);
  train->add_option("--seed", opts.seed, "Recorded in the manifest; training is deterministic");

  CLI::App* predict = app.add_subcommand("predict", "Classify a feature CSV with a saved model");
  predict->add_option("--model", opts.model, "Model file")->required();
  add_data_flags(predict);
  add_out_flag(predict);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Cross-validate one configuration");
  add_data_flags(evaluate);
  add_config_flags(evaluate);
  add_head_flag(evaluate);
  add_eval_flags(evaluate);
  add_out_flag(evaluate);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Cross-validate a phi x iterations grid, or tune with --nested");
  add_data_flags(sweep_cmd);
  add_config_flags(sweep_cmd);
  add_head_flag(sweep_cmd);
  add_eval_flags(sweep_cmd);
  add_out_flag(sweep_cmd);
  sweep_cmd->add_option("--phi-grid", opts.phi_grid, "phi grid start:end:step");
  sweep_cmd->add_option("--iters-grid", opts.iters_grid, "Iteration grid start:end:step");
  sweep_cmd->add_flag("--nested", opts.nested,
                      "Nested CV selection over phi x transfer instead of the plain sweep");
  sweep_cmd->add_option("--transfer-grid", opts.transfer_grid,
                        "Comma-separated transfer grid for --nested");

  CLI::App* compare = app.add_subcommand(
      "compare", "Recurrence-aware vs last-state decision heads across phi");
  add_data_flags(compare);
  add_config_flags(compare);
  add_eval_flags(compare);
  add_out_flag(compare);
  compare->add_option("--phi-grid", opts.phi_grid, "phi grid start:end:step");

  CLI::App* explain = app.add_subcommand("explain", "Feature relevance scores of a saved model");
  explain->add_option("--model", opts.model, "Model file")->required();
  add_out_flag(explain);

  CLI::App* dynamics_cmd = app.add_subcommand(
      "dynamics", "Per-iteration deltas, state stats and outer-weight traces");
  add_data_flags(dynamics_cmd);
  add_config_flags(dynamics_cmd);
  add_out_flag(dynamics_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (train->parsed()) return run_train(opts);
    if (predict->parsed()) return run_predict(opts);
    if (evaluate->parsed()) return run_evaluate(opts);
    if (sweep_cmd->parsed()) return run_sweep(opts);
    if (compare->parsed()) return run_compare(opts);
    if (explain->parsed()) return run_explain(opts);
    if (dynamics_cmd->parsed()) return run_dynamics(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
