#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "koslinker/plltm.hpp"

namespace koslinker {

inline constexpr std::string_view kModelFormat = "koslinker-model";
inline constexpr int kModelVersion = 1;

/// Versioned JSON document; doubles written with round-trip precision so a
/// load/save cycle is byte-identical.
void save_model(const TrainedModel& model, std::ostream& out);
TrainedModel load_model(std::istream& in, std::string_view source = "<model>");
void save_model_file(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model_file(const std::filesystem::path& path);

}  // namespace koslinker
