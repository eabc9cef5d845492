#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clusterlens/embedding.hpp"

namespace clusterlens {

using ClassId = std::int64_t;

/// Per-sample superclass/subclass ids, stored in sample-index order (row i
/// belongs to sample i of the paired embedding matrix). Each subclass id
/// maps to exactly one superclass id.
struct LabelTable {
    std::vector<ClassId> superclass;
    std::vector<ClassId> subclass;
    std::map<ClassId, std::string> superclass_names;  // optional sidecar
    std::map<ClassId, std::string> subclass_names;    // optional sidecar

    std::size_t size() const { return superclass.size(); }
    bool has_names() const { return !superclass_names.empty() || !subclass_names.empty(); }
};

struct LabeledDataset {
    EmbeddingMatrix embeddings;
    LabelTable labels;
};

/// Parses a label CSV with header
/// "sample_index,superclass_id,subclass_id[,superclass_name,subclass_name]".
/// Rows may appear in any order; sample_index must be a permutation of
/// 0..n-1. Throws MissingColumn, DuplicateIndex, SubclassInTwoSuperclasses
/// or ParseError (with the offending line in the message).
LabelTable load_labels(const std::string& path);

/// Writes the table back in the same CSV layout (name columns only when
/// names are present). Throws IoFailure.
void save_labels(const LabelTable& table, const std::string& path);

/// Validates the table invariants on an in-memory instance; throws the same
/// errors as load_labels.
void validate_labels(const LabelTable& table);

/// Row-count agreement between embeddings and labels. Throws LengthMismatch.
void validate_dataset(const LabeledDataset& ds);

}  // namespace clusterlens
