#include "gsavg/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gsavg {

json blocking_to_json(const Blocking& blocking) {
  json out = json::array();
  for (const auto& block : blocking.blocks()) {
    json b = json::array();
    for (auto idx : block) b.push_back(idx + 1);
    out.push_back(std::move(b));
  }
  return out;
}

Blocking blocking_from_json(const json& j, std::size_t dim) {
  // A bare list, or an object holding it under "blocks" or "blocking" (the
  // latter is what the `blocks` command writes).
  const json* list = &j;
  if (j.is_object()) {
    if (j.contains("blocks")) list = &j.at("blocks");
    else if (j.contains("blocking")) list = &j.at("blocking");
  }
  if (!list->is_array()) throw DataError("blocks: expected a JSON list of index lists");
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& b : *list) {
    if (!b.is_array()) throw DataError("blocks: every block must be a list of 1-based indices");
    std::vector<std::size_t> members;
    for (const auto& v : b) {
      if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw DataError("blocks: indices must be positive integers (1-based)");
      }
      members.push_back(v.get<std::size_t>() - 1);
    }
    blocks.push_back(std::move(members));
  }
  try {
    return Blocking(std::move(blocks), dim);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

Blocking load_blocking_file(const std::filesystem::path& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw DataError("blocks: cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DataError("blocks: '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return blocking_from_json(j, dim);
}

json dendrogram_to_json(const Dendrogram& dendro) {
  json merges = json::array();
  json heights = json::array();
  for (const auto& m : dendro.merges) {
    // Leaves are 1..D; merge s (0-based) creates cluster D+s+1.
    merges.push_back({{"a", m.a + 1}, {"b", m.b + 1}, {"height", m.height}, {"size", m.size}});
    heights.push_back(m.height);
  }
  return {{"leaves", dendro.leaves}, {"merges", merges}, {"heights", heights}};
}

json selection_to_json(const PercentileSelection& sel) {
  json table = json::array();
  for (std::size_t i = 0; i < sel.grid.size(); ++i) {
    table.push_back({{"p", sel.grid[i]},
                     {"error", sel.errors[i]},
                     {"blocks", sel.blockings[i].size()},
                     {"blocking", blocking_to_json(sel.blockings[i])}});
  }
  return {{"table", table},
          {"p_hat", sel.chosen},
          {"blocking", blocking_to_json(sel.chosen_blocking)},
          {"warnings", sel.warnings}};
}

json separation_to_json(const SeparationReport& rep, const Blocking& blocking) {
  json per_block = json::array();
  for (std::size_t b = 0; b < rep.per_block.size(); ++b) {
    json members = json::array();
    for (auto idx : blocking.block(b)) members.push_back(idx + 1);
    per_block.push_back({{"block", b + 1}, {"features", members}, {"e_hat", rep.per_block[b]}});
  }
  return {{"per_block", per_block}, {"psi_hat", rep.psi_hat}, {"n1", rep.n1}, {"n2", rep.n2}};
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

json model_to_json(const TrainedModel& model, const std::optional<ColumnScaling>& scaling) {
  const Dataset& train = model.train();
  json rows = json::array();
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto r = train.features.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  json j = {
      {"format", "gsavg-model/1"},
      {"variant", variant_name(model.variant())},
      {"gamma", gamma_name(model.gamma())},
      {"dim", model.dim()},
      {"blocks", blocking_to_json(model.blocking())},
      {"dev1", model.dev1()},
      {"dev2", model.dev2()},
      {"train_fingerprint", fingerprint_hex(model.train_fingerprint())},
      {"label_names", train.label_names},
      {"feature_names", train.feature_names},
      {"train", {{"features", rows}, {"labels", train.labels}}},
  };
  if (scaling) j["scaling"] = {{"mean", scaling->mean}, {"scale", scaling->scale}};
  return j;
}

LoadedModel model_from_json(const json& j) {
  try {
    if (j.value("format", "") != "gsavg-model/1") throw DataError("model: unknown or missing format tag");
    Dataset train;
    const auto& rows = j.at("train").at("features");
    const std::size_t dim = j.at("dim").get<std::size_t>();
    train.features = Matrix(0, dim);
    for (const auto& r : rows) train.features.append_row(r.get<std::vector<double>>());
    train.labels = j.at("train").at("labels").get<std::vector<int>>();
    train.label_names = j.value("label_names", std::vector<std::string>{});
    train.feature_names = j.value("feature_names", std::vector<std::string>{});
    if (fingerprint_hex(fingerprint(train)) != j.at("train_fingerprint").get<std::string>()) {
      throw DataError("model: training data does not match its fingerprint");
    }
    const Variant variant = parse_variant(j.at("variant").get<std::string>());
    const GammaKind gamma = parse_gamma(j.at("gamma").get<std::string>());
    const Blocking blocking = blocking_from_json(j.at("blocks"), dim);
    LoadedModel out{fit(train, variant, blocking, gamma), std::nullopt};
    const double d1 = j.at("dev1").get<double>();
    const double d2 = j.at("dev2").get<double>();
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    if (!close(out.model.dev1(), d1) || !close(out.model.dev2(), d2)) {
      throw DataError("model: stored within-class deviations do not match the training data");
    }
    if (j.contains("scaling")) {
      ColumnScaling s;
      s.mean = j.at("scaling").at("mean").get<std::vector<double>>();
      s.scale = j.at("scaling").at("scale").get<std::vector<double>>();
      out.scaling = s;
    }
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("model: malformed artifact: ") + e.what());
  }
}

}  // namespace gsavg
