#include "gsavg/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gsavg/rng.hpp"
#include "gsavg/serialize.hpp"
#include "gsavg/simgen.hpp"

namespace gsavg {

std::string_view blocking_mode_name(BlockingMode m) {
  switch (m) {
    case BlockingMode::automatic: return "auto";
    case BlockingMode::oracle: return "oracle";
    case BlockingMode::singleton: return "singleton";
    case BlockingMode::file: return "file";
  }
  return "?";
}

BlockingMode parse_blocking_mode(std::string_view text) {
  if (text == "auto") return BlockingMode::automatic;
  if (text == "oracle") return BlockingMode::oracle;
  if (text == "singleton") return BlockingMode::singleton;
  if (text == "file" || text.starts_with("file:")) return BlockingMode::file;
  throw std::invalid_argument("unknown blocking mode '" + std::string(text) +
                              "' (expected auto|oracle|singleton|file:<path>)");
}

std::string ClassifierSpec::label() const {
  std::string s(variant_name(variant));
  if (variant == Variant::gsavg) s += "-" + std::string(gamma_name(gamma));
  return s;
}

ClassifierSpec parse_classifier_label(std::string_view label) {
  const auto dash = label.find('-');
  ClassifierSpec spec;
  spec.variant = parse_variant(label.substr(0, dash));
  if (spec.variant == Variant::gsavg) {
    spec.gamma = dash == std::string_view::npos ? GammaKind::exp_saturate : parse_gamma(label.substr(dash + 1));
  } else if (dash != std::string_view::npos) {
    throw std::invalid_argument("classifier '" + std::string(label) + "' takes no gamma");
  } else {
    spec.gamma = GammaKind::identity;
  }
  return spec;
}

void ExperimentConfig::validate() const {
  if (reps < 1) throw std::invalid_argument("config: reps must be at least 1");
  if (classifiers.empty()) throw std::invalid_argument("config: at least one classifier is required");
  if (example < 0 || example > 3) throw std::invalid_argument("config: example must be 1, 2, 3 or csv");
  if (simulated()) {
    if (dims.empty()) throw std::invalid_argument("config: dims must not be empty");
    for (auto d : dims)
      if (d < 4) throw std::invalid_argument("config: every dimension must be at least 4");
    if (n_train_per_class < 2) throw std::invalid_argument("config: n_train_per_class must be at least 2");
    if (n_test_per_class < 1) throw std::invalid_argument("config: n_test_per_class must be at least 1");
  } else {
    if (csv_path.empty()) throw std::invalid_argument("config: csv source requires a data path");
    if (blocking == BlockingMode::oracle) throw std::invalid_argument("config: oracle blocking needs a simulated source");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw std::invalid_argument("config: train_fraction must lie in (0, 1)");
    }
  }
  if (blocking == BlockingMode::file && blocks_file.empty()) {
    throw std::invalid_argument("config: file blocking requires a path (blocking = file:<path>)");
  }
  if (grid.empty()) throw std::invalid_argument("config: grid must not be empty");
  parse_report_format(format);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_list(std::string_view s) {
  std::string body = trim(s);
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || v.front() == '-') {
    throw std::invalid_argument("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig cfg;
  std::vector<std::string> classifier_items{"avg", "savg", "gsavg"};
  std::vector<std::string> gamma_items{"exp"};
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    if (trim(line).front() == '[') continue;  // section headers are accepted and ignored
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "example") {
      if (value == "csv") {
        cfg.example = 0;
      } else {
        cfg.example = static_cast<int>(parse_u64(key, value));
      }
    } else if (key == "dims" || key == "dim") {
      cfg.dims.clear();
      for (const auto& d : split_list(value)) cfg.dims.push_back(parse_u64(key, d));
    } else if (key == "n_train_per_class") {
      cfg.n_train_per_class = parse_u64(key, value);
    } else if (key == "n_test_per_class") {
      cfg.n_test_per_class = parse_u64(key, value);
    } else if (key == "reps") {
      cfg.reps = parse_u64(key, value);
    } else if (key == "classifiers") {
      classifier_items = split_list(value);
    } else if (key == "gamma") {
      gamma_items = split_list(value);
    } else if (key == "blocking") {
      cfg.blocking = parse_blocking_mode(value);
      if (value.starts_with("file:")) cfg.blocks_file = value.substr(5);
    } else if (key == "blocks_file") {
      cfg.blocks_file = value;
    } else if (key == "method") {
      cfg.method = parse_correlation(value);
    } else if (key == "grid") {
      cfg.grid = parse_grid(trim(value));
    } else if (key == "seed") {
      cfg.seed = parse_u64(key, value);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "data" || key == "csv") {
      cfg.csv_path = value;
      cfg.example = 0;
    } else if (key == "label_col") {
      cfg.label_column = value;
    } else if (key == "train_fraction") {
      cfg.train_fraction = std::stod(value);
    } else if (key == "standardize") {
      cfg.standardize = parse_bool(key, value);
    } else if (key == "parallel_reps") {
      cfg.parallel_reps = parse_bool(key, value);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "' on line " + std::to_string(line_no));
    }
  }
  cfg.classifiers.clear();
  for (const auto& item : classifier_items) {
    if (item == "gsavg") {
      for (const auto& g : gamma_items) cfg.classifiers.push_back({Variant::gsavg, parse_gamma(g)});
    } else {
      cfg.classifiers.push_back(parse_classifier_label(item));
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::map<std::string, std::size_t> CellResult::p_hat_counts() const {
  std::map<std::string, std::size_t> counts;
  for (double p : p_hat) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", p);
    ++counts[buf];
  }
  return counts;
}

const CellResult* ExperimentReport::find(std::string_view classifier, std::size_t dim) const {
  for (const auto& c : cells)
    if (c.classifier == classifier && c.dim == dim) return &c;
  return nullptr;
}

std::uint64_t rep_seed(std::uint64_t base_seed, std::size_t rep, int role) {
  return derive_seed(derive_seed(base_seed, rep), static_cast<std::uint64_t>(role));
}

std::pair<double, double> mean_and_se(const std::vector<double>& rates) {
  if (rates.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double r : rates) sum += r;
  const double k = static_cast<double>(rates.size());
  const double mean = sum / k;
  if (rates.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double r : rates) ss += (r - mean) * (r - mean);
  return {mean, std::sqrt(ss / (k - 1.0)) / std::sqrt(k)};
}

namespace {

struct RepOutcome {
  std::vector<double> rate;
  std::vector<double> p_hat;  // NaN when not applicable
  std::vector<double> seconds;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RepOutcome run_rep(const ExperimentConfig& cfg, const Dataset& train, const Dataset& test,
                   const std::optional<Blocking>& oracle, const std::optional<Blocking>& file_blocks,
                   std::span<ExternalClassifier* const> external, Exec exec) {
  RepOutcome out;
  const std::size_t dim = train.dim();
  const std::size_t total = cfg.classifiers.size() + external.size();
  out.rate.assign(total, 0.0);
  out.p_hat.assign(total, std::nan(""));
  out.seconds.assign(total, 0.0);

  std::optional<Dendrogram> dendro;
  double dendro_seconds = 0.0;
  for (std::size_t c = 0; c < cfg.classifiers.size(); ++c) {
    const auto& spec = cfg.classifiers[c];
    const auto t0 = Clock::now();
    if (spec.variant != Variant::gsavg) {
      out.rate[c] = misclassification_rate(fit(train, spec.variant), test, exec);
      out.seconds[c] = seconds_since(t0);
      continue;
    }
    Blocking blocking;
    switch (cfg.blocking) {
      case BlockingMode::oracle: blocking = *oracle; break;
      case BlockingMode::singleton: blocking = Blocking::singletons(dim); break;
      case BlockingMode::file: blocking = *file_blocks; break;
      case BlockingMode::automatic: {
        if (!dendro) {
          const auto td = Clock::now();
          dendro = average_linkage(correlation_dissimilarity(train, cfg.method, exec).values);
          dendro_seconds = seconds_since(td);
        }
        const auto sel = select_cut_loocv(train, *dendro, spec.gamma, cfg.grid, exec);
        blocking = sel.chosen_blocking;
        out.p_hat[c] = sel.chosen;
        break;
      }
    }
    out.rate[c] = misclassification_rate(fit(train, Variant::gsavg, blocking, spec.gamma), test, exec);
    out.seconds[c] = seconds_since(t0) + (cfg.blocking == BlockingMode::automatic ? dendro_seconds : 0.0);
  }
  for (std::size_t e = 0; e < external.size(); ++e) {
    const auto t0 = Clock::now();
    const auto pred = external[e]->fit_predict(train, test.features);
    if (pred.size() != test.size()) throw std::runtime_error("external classifier returned wrong number of labels");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) wrong += pred[i] != test.labels[i];
    const std::size_t slot = cfg.classifiers.size() + e;
    out.rate[slot] = static_cast<double>(wrong) / static_cast<double>(test.size());
    out.seconds[slot] = seconds_since(t0);
  }
  return out;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::span<ExternalClassifier* const> external) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;

  std::optional<Dataset> source;
  std::vector<std::size_t> dims = cfg.dims;
  if (!cfg.simulated()) {
    source = load_csv(cfg.csv_path, cfg.label_column);
    source->validate(true);
    dims = {source->dim()};
  }

  std::vector<std::string> labels;
  for (const auto& s : cfg.classifiers) labels.push_back(s.label());
  for (auto* e : external) labels.push_back(e->name());

  for (std::size_t dim : dims) {
    std::optional<Blocking> file_blocks;
    if (cfg.blocking == BlockingMode::file) file_blocks = load_blocking_file(cfg.blocks_file, dim);

    std::vector<RepOutcome> outcomes(cfg.reps);
    std::vector<std::string> failures(cfg.reps);
    std::vector<SeedRecord> seeds(cfg.reps);
    const bool par = cfg.parallel_reps && external.empty();
    const auto nreps = static_cast<std::ptrdiff_t>(cfg.reps);

#pragma omp parallel for schedule(dynamic, 1) if (par)
    for (std::ptrdiff_t rr = 0; rr < nreps; ++rr) {
      const auto rep = static_cast<std::size_t>(rr);
      SeedRecord seed{dim, rep, rep_seed(cfg.seed, rep, 1), rep_seed(cfg.seed, rep, 2)};
      if (!cfg.simulated()) seed.test_seed = seed.train_seed;
      seeds[rep] = seed;
      try {
        Dataset train, test;
        std::optional<Blocking> oracle;
        if (cfg.simulated()) {
          auto tr = generate({cfg.example, cfg.n_train_per_class, dim, seed.train_seed});
          auto te = generate({cfg.example, cfg.n_test_per_class, dim, seed.test_seed});
          train = std::move(tr.data);
          test = std::move(te.data);
          oracle = std::move(tr.oracle);
        } else {
          std::tie(train, test) = split_train_test(*source, cfg.train_fraction, seed.train_seed);
          if (cfg.standardize) {
            const auto scaling = ColumnScaling::fit(train.features);
            scaling.apply(train.features);
            scaling.apply(test.features);
          }
        }
        const Exec exec = par ? Exec::sequential : Exec::parallel;
        outcomes[rep] = run_rep(cfg, train, test, oracle, file_blocks, external, exec);
      } catch (const std::exception& e) {
        failures[rep] = e.what();
      }
    }

    for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
      if (!failures[rep].empty()) {
        throw std::runtime_error("experiment failed at D = " + std::to_string(dim) + ", rep " +
                                 std::to_string(rep) + " (seed " + std::to_string(seeds[rep].train_seed) +
                                 "): " + failures[rep]);
      }
    }
    report.seeds.insert(report.seeds.end(), seeds.begin(), seeds.end());
    for (std::size_t c = 0; c < labels.size(); ++c) {
      CellResult cell;
      cell.classifier = labels[c];
      cell.dim = dim;
      for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
        cell.rates.push_back(outcomes[rep].rate[c]);
        if (!std::isnan(outcomes[rep].p_hat[c])) cell.p_hat.push_back(outcomes[rep].p_hat[c]);
        cell.wall_time_s += outcomes[rep].seconds[c];
      }
      std::tie(cell.mean, cell.se) = mean_and_se(cell.rates);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "table") return ReportFormat::table;
  throw std::invalid_argument("unknown report format '" + std::string(text) + "' (expected json|csv|table)");
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
  json classifiers = json::array();
  for (const auto& c : cfg.classifiers) classifiers.push_back(c.label());
  json label_col = nullptr;
  if (const auto* s = std::get_if<std::string>(&cfg.label_column)) label_col = *s;
  if (const auto* i = std::get_if<std::size_t>(&cfg.label_column)) label_col = *i;
  return {
      {"source", cfg.simulated() ? "example" + std::to_string(cfg.example) : std::string("csv")},
      {"example", cfg.example},
      {"dims", cfg.dims},
      {"n_train_per_class", cfg.n_train_per_class},
      {"n_test_per_class", cfg.n_test_per_class},
      {"data", cfg.csv_path.string()},
      {"label_col", label_col},
      {"train_fraction", cfg.train_fraction},
      {"standardize", cfg.standardize},
      {"reps", cfg.reps},
      {"classifiers", classifiers},
      {"blocking", blocking_mode_name(cfg.blocking)},
      {"blocks_file", cfg.blocks_file.string()},
      {"method", correlation_name(cfg.method)},
      {"grid", cfg.grid},
      {"seed", cfg.seed},
      {"format", cfg.format},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.example = j.at("example").get<int>();
  cfg.dims = j.at("dims").get<std::vector<std::size_t>>();
  cfg.n_train_per_class = j.at("n_train_per_class").get<std::size_t>();
  cfg.n_test_per_class = j.at("n_test_per_class").get<std::size_t>();
  cfg.csv_path = j.at("data").get<std::string>();
  const auto& lc = j.at("label_col");
  if (lc.is_string()) cfg.label_column = lc.get<std::string>();
  if (lc.is_number_unsigned()) cfg.label_column = lc.get<std::size_t>();
  cfg.train_fraction = j.at("train_fraction").get<double>();
  cfg.standardize = j.at("standardize").get<bool>();
  cfg.reps = j.at("reps").get<std::size_t>();
  cfg.classifiers.clear();
  for (const auto& c : j.at("classifiers")) cfg.classifiers.push_back(parse_classifier_label(c.get<std::string>()));
  cfg.blocking = parse_blocking_mode(j.at("blocking").get<std::string>());
  cfg.blocks_file = j.at("blocks_file").get<std::string>();
  cfg.method = parse_correlation(j.at("method").get<std::string>());
  cfg.grid = j.at("grid").get<std::vector<double>>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.format = j.at("format").get<std::string>();
  return cfg;
}

std::string format_cell(double mean, double se) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f (%.4f)", mean, se);
  return buf;
}

}  // namespace

std::string emit_report(const ExperimentReport& report, ReportFormat format, bool include_timing) {
  switch (format) {
    case ReportFormat::json: {
      json results = json::array();
      for (const auto& c : report.cells) {
        json cell = {{"classifier", c.classifier}, {"dim", c.dim},         {"mean", c.mean},
                     {"se", c.se},                 {"rates", c.rates},     {"p_hat", c.p_hat},
                     {"p_hat_counts", c.p_hat_counts()}};
        if (include_timing) cell["wall_time_s"] = c.wall_time_s;
        results.push_back(std::move(cell));
      }
      json seeds = json::array();
      for (const auto& s : report.seeds) {
        seeds.push_back({{"dim", s.dim}, {"rep", s.rep}, {"train_seed", s.train_seed}, {"test_seed", s.test_seed}});
      }
      json j = {{"config", config_to_json(report.config)}, {"results", results}, {"seeds", seeds}};
      return j.dump(2) + "\n";
    }
    case ReportFormat::csv: {
      std::string out = "classifier,dim,rep,rate,p_hat\n";
      for (const auto& c : report.cells) {
        for (std::size_t r = 0; r < c.rates.size(); ++r) {
          char buf[128];
          std::snprintf(buf, sizeof buf, ",%zu,%zu,%.17g,", c.dim, r, c.rates[r]);
          out += c.classifier + buf;
          if (r < c.p_hat.size() && c.p_hat.size() == c.rates.size()) {
            std::snprintf(buf, sizeof buf, "%.17g", c.p_hat[r]);
            out += buf;
          }
          out += '\n';
        }
      }
      return out;
    }
    case ReportFormat::table: {
      std::vector<std::string> classifiers;
      std::vector<std::size_t> dims;
      for (const auto& c : report.cells) {
        if (std::find(classifiers.begin(), classifiers.end(), c.classifier) == classifiers.end())
          classifiers.push_back(c.classifier);
        if (std::find(dims.begin(), dims.end(), c.dim) == dims.end()) dims.push_back(c.dim);
      }
      constexpr int kWidth = 17;
      char buf[128];
      std::string out;
      std::snprintf(buf, sizeof buf, "%-8s", "D");
      out += buf;
      for (const auto& name : classifiers) {
        std::snprintf(buf, sizeof buf, " | %-*s", kWidth, name.c_str());
        out += buf;
      }
      out += "\n";
      for (std::size_t d : dims) {
        std::snprintf(buf, sizeof buf, "%-8zu", d);
        out += buf;
        for (const auto& name : classifiers) {
          const auto* cell = report.find(name, d);
          const std::string text = cell ? format_cell(cell->mean, cell->se) : "-";
          std::snprintf(buf, sizeof buf, " | %-*s", kWidth, text.c_str());
          out += buf;
        }
        out += "\n";
      }
      return out;
    }
  }
  return {};
}

ExperimentReport report_from_json(std::string_view json_text) {
  const json j = json::parse(json_text);
  ExperimentReport rep;
  rep.config = config_from_json(j.at("config"));
  for (const auto& c : j.at("results")) {
    CellResult cell;
    cell.classifier = c.at("classifier").get<std::string>();
    cell.dim = c.at("dim").get<std::size_t>();
    cell.mean = c.at("mean").get<double>();
    cell.se = c.at("se").get<double>();
    cell.rates = c.at("rates").get<std::vector<double>>();
    cell.p_hat = c.at("p_hat").get<std::vector<double>>();
    cell.wall_time_s = c.value("wall_time_s", 0.0);
    rep.cells.push_back(std::move(cell));
  }
  for (const auto& s : j.at("seeds")) {
    rep.seeds.push_back({s.at("dim").get<std::size_t>(), s.at("rep").get<std::size_t>(),
                         s.at("train_seed").get<std::uint64_t>(), s.at("test_seed").get<std::uint64_t>()});
  }
  return rep;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move report into '" + path.string() + "': " + ec.message());
  }
}

void write_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path,
                  bool include_timing) {
  write_file_atomic(path, emit_report(report, format, include_timing));
}

}  // namespace gsavg
