#include "clusterlens/run_manifest.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "clusterlens/embedding.hpp"
#include "clusterlens/errors.hpp"

namespace clusterlens {

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_failure, "cannot open '" + path + "' for reading");
    nlohmann::json j;
    try {
        in >> j;
        RunManifest m;
        m.run_id = j.at("run_id").get<std::string>();
        m.labels = j.at("labels").get<std::string>();
        for (const auto& layer : j.at("layers"))
            m.layers.push_back({layer.at("name").get<std::string>(), layer.at("file").get<std::string>()});
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, "'" + path + "': " + e.what());
    }
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : manifest.layers)
        layers.push_back({{"name", layer.name}, {"file", layer.file}});
    const nlohmann::json j = {{"run_id", manifest.run_id}, {"layers", layers}, {"labels", manifest.labels}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

std::vector<std::pair<std::string, LabeledDataset>> load_run(const std::string& manifest_path) {
    const RunManifest manifest = load_manifest(manifest_path);
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    const LabelTable labels = load_labels((base / manifest.labels).string());
    std::vector<std::pair<std::string, LabeledDataset>> out;
    out.reserve(manifest.layers.size());
    for (const auto& layer : manifest.layers) {
        LabeledDataset ds;
        ds.embeddings = load_embeddings((base / layer.file).string());
        ds.embeddings.layer_name = layer.name;
        ds.embeddings.run_id = manifest.run_id;
        ds.labels = labels;
        validate_dataset(ds);
        out.emplace_back(layer.name, std::move(ds));
    }
    return out;
}

}  // namespace clusterlens
