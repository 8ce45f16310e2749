#include "gsavg/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "gsavg/block_estimation.hpp"
#include "gsavg/classifiers.hpp"
#include "gsavg/energy.hpp"
#include "gsavg/experiment.hpp"
#include "gsavg/serialize.hpp"
#include "gsavg/simgen.hpp"

namespace gsavg {

namespace {

struct DataOptions {
  std::string path;
  std::string label_col;
  std::size_t label_index = 0;  // 1-based; 0 = unset
  bool standardize = false;

  void add_to(CLI::App* app, bool with_standardize = true) {
    app->add_option("--data", path, "Input CSV (header row, comma separated)")->required();
    app->add_option("--label-col", label_col, "Label column name (default: last column)");
    app->add_option("--label-index", label_index, "Label column position, 1-based");
    if (with_standardize) app->add_flag("--standardize", standardize, "Z-score every feature column first");
  }

  LabelColumn label() const {
    if (!label_col.empty()) return label_col;
    if (label_index > 0) return label_index - 1;
    return {};
  }
};

struct BlockOptions {
  std::string blocks = "auto";
  std::string method = "pearson";
  std::string grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";

  void add_to(CLI::App* app, const std::string& default_blocks) {
    blocks = default_blocks;
    app->add_option("--blocks", blocks, "auto | singleton | file:<path>")->capture_default_str();
    app->add_option("--method", method, "Correlation for auto blocks: pearson | spearman")->capture_default_str();
    app->add_option("--grid", grid, "Percentile grid for auto blocks")->capture_default_str();
  }
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

Dataset load_training(const DataOptions& opt, std::optional<ColumnScaling>* scaling) {
  Dataset data = load_csv(opt.path, opt.label());
  data.validate(true);
  if (opt.standardize) {
    const auto s = ColumnScaling::fit(data.features);
    s.apply(data.features);
    if (scaling) *scaling = s;
  }
  return data;
}

/// Resolves --blocks into a concrete blocking; `auto` runs the LOOCV search.
Blocking resolve_blocks(const BlockOptions& opt, const Dataset& train, GammaKind gamma,
                        std::ostream& err, std::optional<PercentileSelection>* selection = nullptr) {
  if (opt.blocks == "singleton") return Blocking::singletons(train.dim());
  if (opt.blocks.starts_with("file:")) return load_blocking_file(opt.blocks.substr(5), train.dim());
  if (opt.blocks == "auto") {
    const auto grid = parse_grid(opt.grid);
    auto sel = select_percentile_loocv(train, gamma, grid, parse_correlation(opt.method));
    print_warnings(sel.warnings, err);
    Blocking b = sel.chosen_blocking;
    if (selection) *selection = std::move(sel);
    return b;
  }
  throw std::invalid_argument("--blocks must be auto, singleton or file:<path>");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized scale-adjusted average distance classifier for HDLSS data", "gsavg"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a simulated two-class dataset");
  SimConfig sim_cfg;
  std::string sim_out, sim_oracle;
  sim->add_option("--example", sim_cfg.example, "1, 2 or 3")->required();
  sim->add_option("--n", sim_cfg.n_per_class, "Observations per class")->required();
  sim->add_option("--dim", sim_cfg.dim, "Dimension D")->required();
  sim->add_option("--seed", sim_cfg.seed, "Random seed");
  sim->add_option("--out", sim_out, "Output CSV (default: stdout)");
  sim->add_option("--oracle-blocks", sim_oracle, "Write the generating partition as JSON");

  // train
  auto* train = app.add_subcommand("train", "Fit a classifier and write a model artifact");
  DataOptions train_data;
  BlockOptions train_blocks;
  std::string variant = "gsavg", gamma = "exp", model_out;
  train_data.add_to(train);
  train->add_option("--variant", variant, "avg | savg | gsavg")->capture_default_str();
  train->add_option("--gamma", gamma, "exp | sqrt | log | identity")->capture_default_str();
  train_blocks.add_to(train, "auto");
  train->add_option("--out", model_out, "Model JSON (default: stdout)");

  // classify
  auto* cls = app.add_subcommand("classify", "Score rows of a CSV with a trained model");
  std::string model_path, cls_data, cls_out, cls_label_col;
  cls->add_option("--model", model_path, "Model JSON from `train`")->required();
  cls->add_option("--data", cls_data, "CSV with D feature columns, optionally plus a label column")->required();
  cls->add_option("--label-col", cls_label_col, "Label column name, if present");
  cls->add_option("--out", cls_out, "Output CSV (default: stdout)");

  // blocks
  auto* blk = app.add_subcommand("blocks", "Estimate feature blocks by clustering and leave-one-out search");
  DataOptions blk_data;
  BlockOptions blk_opts;
  std::string blk_gamma = "exp", blk_out;
  blk_data.add_to(blk);
  blk->add_option("--method", blk_opts.method, "pearson | spearman")->capture_default_str();
  blk->add_option("--grid", blk_opts.grid, "Comma separated percentiles in [0,1]")->capture_default_str();
  blk->add_option("--gamma", blk_gamma, "exp | sqrt | log | identity")->capture_default_str();
  blk->add_option("--out", blk_out, "Output JSON (default: stdout)");

  // separation
  auto* sep = app.add_subcommand("separation", "Per-block energy distances between the classes");
  DataOptions sep_data;
  BlockOptions sep_blocks;
  std::string sep_gamma = "exp", sep_out;
  sep_data.add_to(sep);
  sep_blocks.add_to(sep, "singleton");
  sep->add_option("--gamma", sep_gamma, "exp | sqrt | log | identity")->capture_default_str();
  sep->add_option("--out", sep_out, "Output JSON (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Monte-Carlo / repeated-split experiment");
  std::string bench_config;
  std::optional<int> b_example;
  std::string b_dims, b_classifiers, b_gamma, b_blocking, b_method, b_grid, b_out, b_format, b_data, b_label_col;
  std::optional<std::size_t> b_ntrain, b_ntest, b_reps;
  std::optional<std::uint64_t> b_seed;
  std::optional<double> b_fraction;
  bool b_standardize = false, b_no_timing = false;
  bench->add_option("--config", bench_config, "Plain-text key = value config file");
  bench->add_option("--example", b_example, "1, 2 or 3");
  bench->add_option("--dims", b_dims, "Comma separated list of D");
  bench->add_option("--n-train", b_ntrain, "Training rows per class");
  bench->add_option("--n-test", b_ntest, "Test rows per class");
  bench->add_option("--reps", b_reps, "Repetitions");
  bench->add_option("--classifiers", b_classifiers, "e.g. avg,savg,gsavg");
  bench->add_option("--gamma", b_gamma, "gamma list used for gsavg, e.g. exp,sqrt,log");
  bench->add_option("--blocking", b_blocking, "auto | oracle | singleton | file:<path>");
  bench->add_option("--method", b_method, "pearson | spearman");
  bench->add_option("--grid", b_grid, "Percentile grid");
  bench->add_option("--seed", b_seed, "Base seed");
  bench->add_option("--data", b_data, "CSV source instead of a simulated example");
  bench->add_option("--label-col", b_label_col, "Label column of the CSV source");
  bench->add_option("--train-fraction", b_fraction, "Per-class training fraction for CSV sources");
  bench->add_flag("--standardize", b_standardize, "Z-score features using training statistics");
  bench->add_option("--out", b_out, "Report path (default: stdout)");
  bench->add_option("--format", b_format, "json | csv | table");
  bench->add_flag("--no-timing", b_no_timing, "Omit wall-time fields from JSON");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*sim) {
      const auto s = generate(sim_cfg);
      emit(to_csv(s.data), sim_out, out);
      if (!sim_oracle.empty()) write_file_atomic(sim_oracle, blocking_to_json(s.oracle).dump() + "\n");
    } else if (*train) {
      std::optional<ColumnScaling> scaling;
      const Dataset data = load_training(train_data, &scaling);
      const Variant v = parse_variant(variant);
      TrainedModel model;
      if (v == Variant::gsavg) {
        const GammaKind g = parse_gamma(gamma);
        model = fit(data, v, resolve_blocks(train_blocks, data, g, err), g);
      } else {
        model = fit(data, v);
      }
      emit(model_to_json(model, scaling).dump(1) + "\n", model_out, out);
    } else if (*cls) {
      std::ifstream in(model_path);
      if (!in) throw DataError("cannot open model '" + model_path + "'");
      json j;
      try {
        in >> j;
      } catch (const json::parse_error& e) {
        throw DataError("model '" + model_path + "' is not valid JSON: " + e.what());
      }
      const auto loaded = model_from_json(j);
      const auto& model = loaded.model;
      LabelColumn lc;
      if (!cls_label_col.empty()) lc = cls_label_col;
      auto table = load_feature_table(cls_data, model.dim(), lc);
      if (loaded.scaling) loaded.scaling->apply(table.features);
      const auto scores = model.discriminants(table.features);
      const auto& names = model.train().label_names;
      std::string text = table.tags.empty() ? "row,score,label,class,tie\n" : "row,score,label,class,tie,true_class\n";
      for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto d = Decision::from_score(scores[i]);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%d,", i + 1, d.score, d.label);
        text += buf;
        text += static_cast<std::size_t>(d.label) <= names.size() ? names[static_cast<std::size_t>(d.label - 1)]
                                                                   : std::to_string(d.label);
        text += d.tie ? ",true" : ",false";
        if (!table.tags.empty()) text += "," + table.tags[i];
        text += "\n";
      }
      emit(text, cls_out, out);
    } else if (*blk) {
      const Dataset data = load_training(blk_data, nullptr);
      const auto fd = correlation_dissimilarity(data, parse_correlation(blk_opts.method));
      print_warnings(fd.warnings, err);
      const auto dendro = average_linkage(fd.values);
      const auto grid = parse_grid(blk_opts.grid);
      const auto sel = select_cut_loocv(data, dendro, parse_gamma(blk_gamma), grid);
      print_warnings(sel.warnings, err);
      json j = dendrogram_to_json(dendro);
      const json s = selection_to_json(sel);
      j["method"] = correlation_name(parse_correlation(blk_opts.method));
      j["gamma"] = gamma_name(parse_gamma(blk_gamma));
      j["e_p"] = s["table"];
      j["p_hat"] = s["p_hat"];
      j["blocking"] = s["blocking"];
      j["warnings"] = s["warnings"];
      emit(j.dump(1) + "\n", blk_out, out);
    } else if (*sep) {
      const Dataset data = load_training(sep_data, nullptr);
      const GammaKind g = parse_gamma(sep_gamma);
      const Blocking b = resolve_blocks(sep_blocks, data, g, err);
      json j = separation_to_json(separation(data, b, g), b);
      j["gamma"] = gamma_name(g);
      emit(j.dump(1) + "\n", sep_out, out);
    } else if (*bench) {
      // Flags override the config file; list flags are rendered back into
      // config syntax so both paths share one parser.
      std::string text;
      if (!bench_config.empty()) {
        std::ifstream in(bench_config);
        if (!in) throw std::invalid_argument("cannot open config '" + bench_config + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str() + "\n";
      }
      auto set = [&text](const std::string& key, const std::string& value) { text += key + " = " + value + "\n"; };
      if (b_example) set("example", std::to_string(*b_example));
      if (!b_dims.empty()) set("dims", b_dims);
      if (b_ntrain) set("n_train_per_class", std::to_string(*b_ntrain));
      if (b_ntest) set("n_test_per_class", std::to_string(*b_ntest));
      if (b_reps) set("reps", std::to_string(*b_reps));
      if (!b_classifiers.empty()) set("classifiers", b_classifiers);
      if (!b_gamma.empty()) set("gamma", b_gamma);
      if (!b_blocking.empty()) set("blocking", b_blocking);
      if (!b_method.empty()) set("method", b_method);
      if (!b_grid.empty()) set("grid", b_grid);
      if (b_seed) set("seed", std::to_string(*b_seed));
      if (!b_data.empty()) set("data", b_data);
      if (!b_label_col.empty()) set("label_col", b_label_col);
      if (b_fraction) set("train_fraction", std::to_string(*b_fraction));
      if (b_standardize) set("standardize", "true");
      if (!b_out.empty()) set("out", b_out);
      if (!b_format.empty()) set("format", b_format);
      const auto cfg = parse_experiment_config(text);
      const auto report = run_experiment(cfg);
      const auto fmt = parse_report_format(cfg.format);
      if (cfg.out.empty()) {
        out << emit_report(report, fmt, !b_no_timing);
      } else {
        write_report(report, fmt, cfg.out, !b_no_timing);
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gsavg
