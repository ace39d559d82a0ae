#pragma once

#include "lognnet/network.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lognnet::cli {

// Reproducibility record written next to a command's outputs.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;
    std::vector<std::filesystem::path> outputs;
};

nlohmann::json to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

// "<output>.manifest.json"
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

nlohmann::json config_to_json(const NetworkConfig& config);
nlohmann::json model_to_json(const Model& model);
std::string iso8601(std::chrono::system_clock::time_point t);

} // namespace lognnet::cli
