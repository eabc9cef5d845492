#include "clusterlens/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "clusterlens/errors.hpp"
#include "clusterlens/rng.hpp"

namespace clusterlens {

std::size_t HierarchySpec::total_subclasses() const {
    std::size_t total = 0;
    for (const auto& [id, subs] : superclasses) total += subs.size();
    return total;
}

void validate_hierarchy(const HierarchySpec& spec) {
    std::set<ClassId> super_ids;
    std::set<ClassId> sub_ids;
    for (const auto& [id, subs] : spec.superclasses) {
        if (!super_ids.insert(id).second)
            throw error(errc::bad_config, "superclass " + std::to_string(id) + " appears twice");
        if (subs.empty())
            throw error(errc::bad_config, "superclass " + std::to_string(id) + " has no subclasses");
        for (ClassId s : subs)
            if (!sub_ids.insert(s).second)
                throw error(errc::bad_config, "subclass " + std::to_string(s) + " appears twice");
    }
}

HierarchySpec derive_hierarchy(const LabelTable& labels, std::string name) {
    std::map<ClassId, std::set<ClassId>> mapping;
    for (std::size_t i = 0; i < labels.size(); ++i)
        mapping[labels.superclass[i]].insert(labels.subclass[i]);
    HierarchySpec spec;
    spec.name = std::move(name);
    for (const auto& [super_id, subs] : mapping)
        spec.superclasses.emplace_back(super_id, std::vector<ClassId>(subs.begin(), subs.end()));
    return spec;
}

HierarchySpec shuffle_hierarchy(const HierarchySpec& spec, std::uint64_t seed) {
    validate_hierarchy(spec);
    if (spec.superclasses.empty()) return spec;
    const std::size_t width = spec.superclasses.front().second.size();
    for (const auto& [id, subs] : spec.superclasses) {
        if (subs.size() != width)
            throw error(errc::shape_mismatch,
                        "superclass " + std::to_string(id) + " has " + std::to_string(subs.size()) +
                            " subclasses, others have " + std::to_string(width));
    }

    std::vector<ClassId> flat;
    flat.reserve(spec.total_subclasses());
    for (const auto& [id, subs] : spec.superclasses) flat.insert(flat.end(), subs.begin(), subs.end());

    Rng rng(seed);
    for (std::size_t i = flat.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(flat[i - 1], flat[j]);
    }

    HierarchySpec shuffled;
    shuffled.name = spec.name;
    std::size_t pos = 0;
    for (const auto& [id, subs] : spec.superclasses) {
        std::vector<ClassId> slot(flat.begin() + pos, flat.begin() + pos + subs.size());
        pos += subs.size();
        // A superclass owns a set of subclasses; keep each slot sorted so
        // within-slot order never leaks into the output.
        std::sort(slot.begin(), slot.end());
        shuffled.superclasses.emplace_back(id, std::move(slot));
    }
    return shuffled;
}

LabelTable relabel_table(const LabelTable& labels, const HierarchySpec& spec) {
    std::map<ClassId, ClassId> owner;
    for (const auto& [super_id, subs] : spec.superclasses)
        for (ClassId s : subs) owner[s] = super_id;

    LabelTable out = labels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto it = owner.find(labels.subclass[i]);
        if (it == owner.end())
            throw error(errc::unknown_subclass,
                        "subclass " + std::to_string(labels.subclass[i]) + " is not in the hierarchy");
        out.superclass[i] = it->second;
    }
    return out;
}

LabeledDataset relabel_dataset(const LabeledDataset& ds, const HierarchySpec& spec) {
    return {ds.embeddings, relabel_table(ds.labels, spec)};
}

HierarchySpec load_hierarchy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_failure, "cannot open '" + path + "' for reading");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, "'" + path + "': " + e.what());
    }
    HierarchySpec spec;
    try {
        spec.name = j.value("name", std::string());
        for (const auto& entry : j.at("superclasses")) {
            std::vector<ClassId> subs = entry.at("subclasses").get<std::vector<ClassId>>();
            spec.superclasses.emplace_back(entry.at("id").get<ClassId>(), std::move(subs));
        }
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::parse_error, "'" + path + "': " + e.what());
    }
    validate_hierarchy(spec);
    return spec;
}

void save_hierarchy(const HierarchySpec& spec, const std::string& path) {
    nlohmann::json j;
    j["name"] = spec.name;
    j["superclasses"] = nlohmann::json::array();
    for (const auto& [id, subs] : spec.superclasses)
        j["superclasses"].push_back({{"id", id}, {"subclasses", subs}});
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

}  // namespace clusterlens
