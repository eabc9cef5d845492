#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clusterlens/assignment.hpp"
#include "clusterlens/hierarchy.hpp"
#include "clusterlens/labels.hpp"

namespace clusterlens {

enum class Engine { ward, average, complete, single, kmeans };

const char* engine_name(Engine engine);
Engine parse_engine(const std::string& name);  // throws BadConfig

struct ProtocolConfig {
    Engine engine = Engine::ward;
    int overclustering_factor = 1;  // 1..10
    bool normalize = true;
    std::uint64_t seed = 0;  // consumed by the kmeans engine only
    std::size_t kmeans_max_iters = 300;

    bool operator==(const ProtocolConfig&) const = default;
};

struct MetricPair {
    double ami = 0.0;
    double purity = 0.0;

    bool operator==(const MetricPair&) const = default;
};

struct SuperclassResult {
    ClassId superclass_id = 0;  // -1 on whole-dataset (external) evaluations
    std::size_t n_samples = 0;
    std::size_t k_used = 0;
    bool k_capped = false;  // k hit the n_samples ceiling
    double ami = 0.0;
    double purity = 0.0;

    bool operator==(const SuperclassResult&) const = default;
};

struct ClusterabilityReport {
    std::vector<SuperclassResult> per_superclass;
    MetricPair aggregate_weighted;    // sample-weighted means (headline)
    MetricPair aggregate_unweighted;  // plain means
    MetricPair pooled;                // disjoint-union assignment vs subclass labels
    ProtocolConfig config;

    bool operator==(const ClusterabilityReport&) const = default;
};

/// Clusters each superclass slice to k = n_subclasses * factor (capped at
/// the slice size) and scores the result against the withheld subclass
/// labels. Slices run independently and may execute in parallel; the report
/// does not depend on scheduling. Throws SuperclassTooSmall (naming the
/// superclass) when a slice has < 2 samples.
ClusterabilityReport eval_within_superclasses(const LabeledDataset& ds, const ProtocolConfig& cfg);

/// The disjoint union of the per-superclass clusterings as one assignment
/// over all samples (cluster ids offset per superclass).
ClusterAssignment cluster_within_superclasses(const LabeledDataset& ds, const ProtocolConfig& cfg);

/// One clustering over the whole dataset into n_classes * factor clusters,
/// scored against the class labels (the subclass column). Throws
/// EmptyDataset.
ClusterabilityReport eval_external(const LabeledDataset& ds, const ProtocolConfig& cfg);

/// eval_within_superclasses per layer, order preserved.
std::vector<std::pair<std::string, ClusterabilityReport>> sweep_layers(
    const std::vector<std::pair<std::string, LabeledDataset>>& layers, const ProtocolConfig& cfg);

using LayerAssignments = std::vector<std::pair<std::string, ClusterAssignment>>;

struct ConsistencyReport {
    std::vector<std::pair<std::string, double>> per_layer;  // shared layers, run-A order
    std::vector<std::string> layers_a;  // set when the pair matrix was requested
    std::vector<std::string> layers_b;
    std::vector<double> matrix;  // |A| x |B| row-major ARI, empty otherwise

    bool operator==(const ConsistencyReport&) const = default;
};

/// Per-layer ARI between two runs' assignments over the same samples, plus
/// (optionally) the full layer-pair ARI matrix. Throws NoSharedLayers and
/// LengthMismatch.
ConsistencyReport cross_run_consistency(const LayerAssignments& run_a, const LayerAssignments& run_b,
                                        bool layer_pairs = false);

struct ExemplarRow {
    std::int64_t cluster_id = 0;
    std::size_t sample_index = 0;
    ClassId subclass_id = 0;
    std::string subclass_name;  // empty when the label table has no names

    bool operator==(const ExemplarRow&) const = default;
};

/// Up to per_cluster sample indices per cluster, lowest indices first, with
/// ground-truth subclass ids/names attached. Throws BadConfig when
/// per_cluster < 1 and LengthMismatch when sizes disagree.
std::vector<ExemplarRow> export_exemplars(const ClusterAssignment& assignment, const LabeledDataset& ds,
                                          std::size_t per_cluster);

}  // namespace clusterlens
