#pragma once

#include <filesystem>
#include <variant>

#include "lcsvm/ensemble.hpp"

namespace lcsvm {

// JSON documents with a format/version tag. Numbers use shortest round-trip
// decimals, so save -> load -> save is byte-identical and reloaded models
// predict exactly.
void save_model(const MulticlassModel& model, const std::filesystem::path& path);
void save_model(const EnsembleModel& model, const std::filesystem::path& path);

using LoadedModel = std::variant<MulticlassModel, EnsembleModel>;

// Schema violations raise SchemaError naming the offending field path.
LoadedModel load_model(const std::filesystem::path& path);

MulticlassModel load_multiclass_model(const std::filesystem::path& path);
EnsembleModel load_ensemble_model(const std::filesystem::path& path);

}  // namespace lcsvm
