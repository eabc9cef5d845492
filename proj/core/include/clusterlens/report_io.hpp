#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clusterlens/assignment.hpp"
#include "clusterlens/dendrogram.hpp"
#include "clusterlens/protocol.hpp"

namespace clusterlens {

struct LayerSweepEntry {
    std::string layer;
    ClusterabilityReport report;
    std::optional<double> probe_acc;

    bool operator==(const LayerSweepEntry&) const = default;
};

struct SweepReport {
    std::string run_id;
    std::vector<LayerSweepEntry> layers;

    bool operator==(const SweepReport&) const = default;
};

/// JSON emission is deterministic (sorted keys, shortest round-trip doubles)
/// and parse(emit(r)) == r holds exactly.
std::string report_to_json(const ClusterabilityReport& report);
ClusterabilityReport report_from_json(const std::string& text);
std::string sweep_to_json(const SweepReport& report);
SweepReport sweep_from_json(const std::string& text);

/// Flat CSV: layer,superclass_id,n,k,ami,purity[,probe_acc].
void write_report_csv(const std::string& layer, const ClusterabilityReport& report,
                      const std::string& path);
void write_sweep_csv(const SweepReport& report, const std::string& path);

/// Per-layer CSV "layer,ari", or the layer-pair matrix with name headers
/// when the report carries one.
void write_consistency_csv(const ConsistencyReport& report, const std::string& path);

/// "sample_index,cluster_id" rows.
void save_assignment(const ClusterAssignment& assignment, const std::string& path);
ClusterAssignment load_assignment(const std::string& path);

/// "merge_index,left,right,height,size" rows.
void save_dendrogram(const MergeTree& tree, const std::string& path);

/// "cluster_id,sample_index,subclass_id[,subclass_name]" rows.
void save_exemplars(const std::vector<ExemplarRow>& rows, const std::string& path);

}  // namespace clusterlens
