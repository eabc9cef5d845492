#include "clusterlens/protocol.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "clusterlens/dendrogram.hpp"
#include "clusterlens/embedding.hpp"
#include "clusterlens/errors.hpp"
#include "clusterlens/kmeans.hpp"
#include "clusterlens/metrics.hpp"
#include "clusterlens/parallel.hpp"
#include "clusterlens/rng.hpp"

namespace clusterlens {

namespace {

void validate_config(const ProtocolConfig& cfg) {
    if (cfg.overclustering_factor < 1 || cfg.overclustering_factor > 10)
        throw error(errc::bad_config,
                    "overclustering factor " + std::to_string(cfg.overclustering_factor) + " outside 1..10");
}

EmbeddingMatrix slice_rows(const EmbeddingMatrix& X, const std::vector<std::size_t>& rows) {
    EmbeddingMatrix out;
    out.n = rows.size();
    out.d = X.d;
    out.dtype = X.dtype;
    out.layer_name = X.layer_name;
    out.run_id = X.run_id;
    out.data.reserve(rows.size() * X.d);
    for (std::size_t r : rows)
        out.data.insert(out.data.end(), X.data.begin() + r * X.d, X.data.begin() + (r + 1) * X.d);
    return out;
}

ClusterAssignment run_engine(const EmbeddingMatrix& X, const ProtocolConfig& cfg, std::size_t k,
                             std::uint64_t slice_seed) {
    switch (cfg.engine) {
        case Engine::ward: return agglomerative(X, LinkageKind::ward, k);
        case Engine::average: return agglomerative(X, LinkageKind::average, k);
        case Engine::complete: return agglomerative(X, LinkageKind::complete, k);
        case Engine::single: return agglomerative(X, LinkageKind::single, k);
        case Engine::kmeans: return kmeans(X, k, slice_seed, cfg.kmeans_max_iters).assignment;
    }
    throw error(errc::bad_config, "unknown engine");
}

struct SliceOutcome {
    SuperclassResult result;
    ClusterAssignment assignment;
    std::vector<std::size_t> rows;
};

std::vector<SliceOutcome> evaluate_slices(const LabeledDataset& ds, const ProtocolConfig& cfg) {
    validate_config(cfg);
    validate_dataset(ds);

    std::map<ClassId, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < ds.labels.size(); ++i) groups[ds.labels.superclass[i]].push_back(i);

    std::vector<std::pair<ClassId, std::vector<std::size_t>>> ordered(groups.begin(), groups.end());
    for (const auto& [super_id, rows] : ordered)
        if (rows.size() < 2)
            throw error(errc::superclass_too_small,
                        "superclass " + std::to_string(super_id) + " has " + std::to_string(rows.size()) +
                            " sample(s), need >= 2");

    std::vector<SliceOutcome> outcomes(ordered.size());
    parallel_for(ordered.size(), [&](std::size_t g) {
        const auto& [super_id, rows] = ordered[g];
        EmbeddingMatrix slice = slice_rows(ds.embeddings, rows);

        std::set<ClassId> subs;
        std::vector<ClassId> truth(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            // A slice must never mix superclasses.
            if (ds.labels.superclass[rows[r]] != super_id)
                throw error(errc::shape_mismatch, "superclass slice is contaminated");
            truth[r] = ds.labels.subclass[rows[r]];
            subs.insert(truth[r]);
        }

        if (cfg.normalize) slice = l2_normalize(slice).matrix;

        const std::size_t k_target = subs.size() * static_cast<std::size_t>(cfg.overclustering_factor);
        const std::size_t k_used = std::min(k_target, rows.size());

        SliceOutcome& out = outcomes[g];
        out.rows = rows;
        out.assignment = run_engine(slice, cfg, k_used,
                                    mix_seed(cfg.seed, static_cast<std::uint64_t>(super_id)));

        const ContingencyTable table = contingency(out.assignment, truth);
        out.result.superclass_id = super_id;
        out.result.n_samples = rows.size();
        out.result.k_used = k_used;
        out.result.k_capped = k_used < k_target;
        out.result.ami = ami(table);
        out.result.purity = purity(table);
    });
    return outcomes;
}

ClusterAssignment pool_assignments(const std::vector<SliceOutcome>& outcomes, std::size_t n) {
    ClusterAssignment pooled;
    pooled.labels.assign(n, 0);
    std::int64_t offset = 0;
    for (const auto& out : outcomes) {
        for (std::size_t r = 0; r < out.rows.size(); ++r)
            pooled.labels[out.rows[r]] = out.assignment.labels[r] + offset;
        offset += static_cast<std::int64_t>(out.assignment.k);
    }
    pooled.k = static_cast<std::size_t>(offset);
    return pooled;
}

}  // namespace

const char* engine_name(Engine engine) {
    switch (engine) {
        case Engine::ward: return "ward";
        case Engine::average: return "average";
        case Engine::complete: return "complete";
        case Engine::single: return "single";
        case Engine::kmeans: return "kmeans";
    }
    return "unknown";
}

Engine parse_engine(const std::string& name) {
    if (name == "ward") return Engine::ward;
    if (name == "average") return Engine::average;
    if (name == "complete") return Engine::complete;
    if (name == "single") return Engine::single;
    if (name == "kmeans") return Engine::kmeans;
    throw error(errc::bad_config, "unknown engine '" + name + "'");
}

ClusterabilityReport eval_within_superclasses(const LabeledDataset& ds, const ProtocolConfig& cfg) {
    const auto outcomes = evaluate_slices(ds, cfg);

    ClusterabilityReport report;
    report.config = cfg;
    report.per_superclass.reserve(outcomes.size());

    double w_ami = 0.0, w_pur = 0.0, u_ami = 0.0, u_pur = 0.0;
    std::size_t total = 0;
    for (const auto& out : outcomes) {
        report.per_superclass.push_back(out.result);
        w_ami += out.result.ami * static_cast<double>(out.result.n_samples);
        w_pur += out.result.purity * static_cast<double>(out.result.n_samples);
        u_ami += out.result.ami;
        u_pur += out.result.purity;
        total += out.result.n_samples;
    }
    const double groups = static_cast<double>(outcomes.size());
    report.aggregate_weighted = {w_ami / static_cast<double>(total), w_pur / static_cast<double>(total)};
    report.aggregate_unweighted = {u_ami / groups, u_pur / groups};

    const ClusterAssignment pooled = pool_assignments(outcomes, ds.labels.size());
    const ContingencyTable table = contingency(pooled, ds.labels.subclass);
    report.pooled = {ami(table), purity(table)};
    return report;
}

ClusterAssignment cluster_within_superclasses(const LabeledDataset& ds, const ProtocolConfig& cfg) {
    const auto outcomes = evaluate_slices(ds, cfg);
    return pool_assignments(outcomes, ds.labels.size());
}

ClusterabilityReport eval_external(const LabeledDataset& ds, const ProtocolConfig& cfg) {
    validate_config(cfg);
    validate_dataset(ds);
    if (ds.labels.size() == 0) throw error(errc::empty_dataset, "no samples");

    std::set<ClassId> classes(ds.labels.subclass.begin(), ds.labels.subclass.end());
    const std::size_t k_target = classes.size() * static_cast<std::size_t>(cfg.overclustering_factor);
    const std::size_t k_used = std::min(k_target, ds.labels.size());

    EmbeddingMatrix X = cfg.normalize ? l2_normalize(ds.embeddings).matrix : ds.embeddings;
    const ClusterAssignment assignment = run_engine(X, cfg, k_used, cfg.seed);
    const ContingencyTable table = contingency(assignment, ds.labels.subclass);

    ClusterabilityReport report;
    report.config = cfg;
    SuperclassResult whole;
    whole.superclass_id = -1;  // whole dataset, no superclass slicing
    whole.n_samples = ds.labels.size();
    whole.k_used = k_used;
    whole.k_capped = k_used < k_target;
    whole.ami = ami(table);
    whole.purity = purity(table);
    report.per_superclass.push_back(whole);
    report.aggregate_weighted = {whole.ami, whole.purity};
    report.aggregate_unweighted = report.aggregate_weighted;
    report.pooled = report.aggregate_weighted;
    return report;
}

std::vector<std::pair<std::string, ClusterabilityReport>> sweep_layers(
    const std::vector<std::pair<std::string, LabeledDataset>>& layers, const ProtocolConfig& cfg) {
    if (layers.empty()) throw error(errc::empty_input, "no layers to sweep");
    std::vector<std::pair<std::string, ClusterabilityReport>> out;
    out.reserve(layers.size());
    for (const auto& [name, ds] : layers) out.emplace_back(name, eval_within_superclasses(ds, cfg));
    return out;
}

ConsistencyReport cross_run_consistency(const LayerAssignments& run_a, const LayerAssignments& run_b,
                                        bool layer_pairs) {
    std::map<std::string, const ClusterAssignment*> b_by_name;
    for (const auto& [name, assignment] : run_b) b_by_name.emplace(name, &assignment);

    ConsistencyReport report;
    for (const auto& [name, assignment] : run_a) {
        const auto it = b_by_name.find(name);
        if (it == b_by_name.end()) continue;
        if (assignment.size() != it->second->size())
            throw error(errc::length_mismatch,
                        "layer '" + name + "' has " + std::to_string(assignment.size()) + " vs " +
                            std::to_string(it->second->size()) + " samples");
        report.per_layer.emplace_back(name, ari(assignment, *it->second));
    }
    if (report.per_layer.empty()) throw error(errc::no_shared_layers, "runs share no layer names");

    if (layer_pairs) {
        report.layers_a.reserve(run_a.size());
        report.layers_b.reserve(run_b.size());
        for (const auto& [name, assignment] : run_a) report.layers_a.push_back(name);
        for (const auto& [name, assignment] : run_b) report.layers_b.push_back(name);
        report.matrix.resize(run_a.size() * run_b.size());
        for (std::size_t i = 0; i < run_a.size(); ++i)
            for (std::size_t j = 0; j < run_b.size(); ++j) {
                if (run_a[i].second.size() != run_b[j].second.size())
                    throw error(errc::length_mismatch,
                                "layers '" + run_a[i].first + "' and '" + run_b[j].first +
                                    "' cover different sample counts");
                report.matrix[i * run_b.size() + j] = ari(run_a[i].second, run_b[j].second);
            }
    }
    return report;
}

std::vector<ExemplarRow> export_exemplars(const ClusterAssignment& assignment, const LabeledDataset& ds,
                                          std::size_t per_cluster) {
    if (per_cluster < 1) throw error(errc::bad_config, "per_cluster must be >= 1");
    if (assignment.size() != ds.labels.size())
        throw error(errc::length_mismatch,
                    "assignment covers " + std::to_string(assignment.size()) + " samples, labels " +
                        std::to_string(ds.labels.size()));

    std::vector<ExemplarRow> rows;
    std::vector<std::size_t> taken(assignment.k, 0);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignment.labels[i]);
        if (taken[c] >= per_cluster) continue;
        ++taken[c];
        ExemplarRow row;
        row.cluster_id = assignment.labels[i];
        row.sample_index = i;
        row.subclass_id = ds.labels.subclass[i];
        const auto it = ds.labels.subclass_names.find(row.subclass_id);
        if (it != ds.labels.subclass_names.end()) row.subclass_name = it->second;
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ExemplarRow& a, const ExemplarRow& b) {
        return a.cluster_id < b.cluster_id;
    });
    return rows;
}

}  // namespace clusterlens
