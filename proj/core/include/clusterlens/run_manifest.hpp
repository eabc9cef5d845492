#pragma once

#include <string>
#include <vector>

#include "clusterlens/labels.hpp"

namespace clusterlens {

/// run.json schema: {"run_id": string, "layers": [{"name": string,
/// "file": string}], "labels": string}. File paths are relative to the
/// manifest's directory.
struct RunManifest {
    std::string run_id;
    struct Layer {
        std::string name;
        std::string file;
    };
    std::vector<Layer> layers;
    std::string labels;
};

RunManifest load_manifest(const std::string& path);
void save_manifest(const RunManifest& manifest, const std::string& path);

/// Loads every layer named in the manifest alongside the shared label file.
/// layer_name/run_id from the manifest are stamped onto each matrix.
std::vector<std::pair<std::string, LabeledDataset>> load_run(const std::string& manifest_path);

}  // namespace clusterlens
