#include "lognnet/cli/manifest.hpp"

#include "lognnet/errors.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <fstream>

namespace lognnet::cli {

using nlohmann::json;

std::string iso8601(std::chrono::system_clock::time_point t) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count() % 1000;
    return fmt::format("{:%Y-%m-%dT%H:%M:%S}.{:03d}Z", fmt::gmtime(std::chrono::system_clock::to_time_t(t)),
                       static_cast<int>(ms));
}

json to_json(const RunManifest& m) {
    json outputs = json::array();
    for (const auto& p : m.outputs) outputs.push_back(p.string());
    return {
        {"command", m.command},
        {"argv", m.argv},
        {"config", m.config},
        {"seed", m.seed},
        {"started", iso8601(m.started)},
        {"finished", iso8601(m.finished)},
        {"outputs", outputs},
    };
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw IoError(fmt::format("cannot open {} for writing", path.string()));
    os << to_json(manifest).dump(2) << '\n';
    if (!os) throw IoError(fmt::format("write failed: {}", path.string()));
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
    auto p = output;
    p += ".manifest.json";
    return p;
}

json config_to_json(const NetworkConfig& c) {
    json pattern;
    if (c.pattern.custom) {
        const auto& perm = c.pattern.custom->perm();
        pattern = {{"custom", std::vector<int>(perm.begin(), perm.end())}};
    } else {
        pattern = c.pattern.builtin_id;
    }
    return {
        {"r", c.params.r},
        {"A", c.params.A},
        {"B", c.params.B},
        {"P", c.params.P},
        {"map", std::string(to_string(c.params.map))},
        {"shape", format_shape(c.params.P, c.classifier_shape)},
        {"pattern", pattern},
        {"learning_rate", c.learning_rate},
        {"epochs", c.epochs},
        {"seed", c.seed},
        {"algorithm", static_cast<int>(c.algorithm)},
        {"loss", std::string(to_string(c.loss))},
    };
}

json model_to_json(const Model& model) {
    json layers = json::array();
    for (const auto& layer : model.layers) {
        json rows = json::array();
        for (std::size_t r = 0; r < layer.w.rows(); ++r) {
            auto row = layer.w.row(r);
            rows.push_back(std::vector<double>(row.begin(), row.end()));
        }
        layers.push_back({{"fan_in", layer.fan_in()}, {"fan_out", layer.fan_out()}, {"weights", rows}});
    }
    return {
        {"config", config_to_json(model.config)},
        {"stats", {{"sh_min", model.stats.sh_min}, {"sh_max", model.stats.sh_max}, {"usre", model.stats.usre}}},
        {"layers", layers},
        {"history", model.history},
    };
}

} // namespace lognnet::cli
