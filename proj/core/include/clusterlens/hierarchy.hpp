#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "clusterlens/labels.hpp"

namespace clusterlens {

/// Superclass -> subclass mapping. Subclass ids are globally unique and
/// every superclass owns at least one.
struct HierarchySpec {
    std::string name;
    std::vector<std::pair<ClassId, std::vector<ClassId>>> superclasses;

    std::size_t total_subclasses() const;
    bool operator==(const HierarchySpec&) const = default;
};

/// Throws BadConfig when a superclass is empty or a subclass id repeats.
void validate_hierarchy(const HierarchySpec& spec);

/// Reads the mapping off a label table (superclasses and subclasses in
/// ascending id order).
HierarchySpec derive_hierarchy(const LabelTable& labels, std::string name = {});

/// Redistributes the subclasses uniformly at random across the superclass
/// slots, keeping every per-superclass count unchanged. Deterministic per
/// seed (Fisher-Yates over the flattened subclass list). Requires all
/// superclasses to have the same size; throws ShapeMismatch otherwise.
HierarchySpec shuffle_hierarchy(const HierarchySpec& spec, std::uint64_t seed);

/// Rewrites each sample's superclass id according to the spec; subclass ids
/// are untouched. Throws UnknownSubclass when the dataset holds a subclass
/// the spec does not.
LabeledDataset relabel_dataset(const LabeledDataset& ds, const HierarchySpec& spec);
LabelTable relabel_table(const LabelTable& labels, const HierarchySpec& spec);

/// JSON file format: {"name": ..., "superclasses": [{"id": ..., "subclasses": [...]}]}.
HierarchySpec load_hierarchy(const std::string& path);
void save_hierarchy(const HierarchySpec& spec, const std::string& path);

}  // namespace clusterlens
