#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "gsavg/block_estimation.hpp"
#include "gsavg/blocks.hpp"
#include "gsavg/classifiers.hpp"
#include "gsavg/dataset.hpp"
#include "gsavg/energy.hpp"

namespace gsavg {

using json = nlohmann::json;

/// Blocks as a list of 1-based index lists.
json blocking_to_json(const Blocking& blocking);
Blocking blocking_from_json(const json& j, std::size_t dim);
Blocking load_blocking_file(const std::filesystem::path& path, std::size_t dim);

json dendrogram_to_json(const Dendrogram& dendro);
json selection_to_json(const PercentileSelection& sel);
json separation_to_json(const SeparationReport& rep, const Blocking& blocking);

std::string fingerprint_hex(std::uint64_t fp);

/// Model artifact. The training rows travel with the model because the
/// discriminant needs them at prediction time; `scaling` is the optional
/// column standardization applied to inputs before training.
json model_to_json(const TrainedModel& model, const std::optional<ColumnScaling>& scaling = {});

struct LoadedModel {
  TrainedModel model;
  std::optional<ColumnScaling> scaling;
};

/// Refits from the embedded training rows and checks the stored fingerprint
/// and deviations. Throws DataError on mismatch.
LoadedModel model_from_json(const json& j);

}  // namespace gsavg
