#include "clusterlens/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "clusterlens/errors.hpp"

namespace clusterlens {

namespace {

using nlohmann::json;

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json config_to_json(const ProtocolConfig& cfg) {
    return {{"engine", engine_name(cfg.engine)},
            {"factor", cfg.overclustering_factor},
            {"normalize", cfg.normalize},
            {"seed", cfg.seed},
            {"kmeans_max_iters", cfg.kmeans_max_iters}};
}

ProtocolConfig config_from_json(const json& j) {
    ProtocolConfig cfg;
    cfg.engine = parse_engine(j.at("engine").get<std::string>());
    cfg.overclustering_factor = j.at("factor").get<int>();
    cfg.normalize = j.at("normalize").get<bool>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.kmeans_max_iters = j.at("kmeans_max_iters").get<std::size_t>();
    return cfg;
}

json pair_to_json(const MetricPair& p) { return {{"ami", p.ami}, {"purity", p.purity}}; }

MetricPair pair_from_json(const json& j) {
    return {j.at("ami").get<double>(), j.at("purity").get<double>()};
}

json report_to_json_value(const ClusterabilityReport& report) {
    json per = json::array();
    for (const auto& r : report.per_superclass)
        per.push_back({{"superclass_id", r.superclass_id},
                       {"n", r.n_samples},
                       {"k", r.k_used},
                       {"k_capped", r.k_capped},
                       {"ami", r.ami},
                       {"purity", r.purity}});
    return {{"config", config_to_json(report.config)},
            {"per_superclass", per},
            {"aggregate_weighted", pair_to_json(report.aggregate_weighted)},
            {"aggregate_unweighted", pair_to_json(report.aggregate_unweighted)},
            {"pooled", pair_to_json(report.pooled)}};
}

ClusterabilityReport report_from_json_value(const json& j) {
    ClusterabilityReport report;
    report.config = config_from_json(j.at("config"));
    for (const auto& e : j.at("per_superclass")) {
        SuperclassResult r;
        r.superclass_id = e.at("superclass_id").get<ClassId>();
        r.n_samples = e.at("n").get<std::size_t>();
        r.k_used = e.at("k").get<std::size_t>();
        r.k_capped = e.at("k_capped").get<bool>();
        r.ami = e.at("ami").get<double>();
        r.purity = e.at("purity").get<double>();
        report.per_superclass.push_back(r);
    }
    report.aggregate_weighted = pair_from_json(j.at("aggregate_weighted"));
    report.aggregate_unweighted = pair_from_json(j.at("aggregate_unweighted"));
    report.pooled = pair_from_json(j.at("pooled"));
    return report;
}

void csv_report_rows(std::ostream& out, const std::string& layer, const ClusterabilityReport& report,
                     std::optional<double> probe_acc, bool probe_column) {
    for (const auto& r : report.per_superclass) {
        out << layer << ',' << r.superclass_id << ',' << r.n_samples << ',' << r.k_used << ','
            << csv_double(r.ami) << ',' << csv_double(r.purity);
        if (probe_column) {
            out << ',';
            if (probe_acc) out << csv_double(*probe_acc);
        }
        out << "\n";
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::string report_to_json(const ClusterabilityReport& report) {
    return report_to_json_value(report).dump(2) + "\n";
}

ClusterabilityReport report_from_json(const std::string& text) {
    try {
        return report_from_json_value(json::parse(text));
    } catch (const json::exception& e) {
        throw error(errc::parse_error, std::string("report JSON: ") + e.what());
    }
}

std::string sweep_to_json(const SweepReport& report) {
    json layers = json::array();
    for (const auto& entry : report.layers) {
        json e = {{"layer", entry.layer}, {"report", report_to_json_value(entry.report)}};
        if (entry.probe_acc) e["probe_acc"] = *entry.probe_acc;
        layers.push_back(std::move(e));
    }
    json j = {{"run_id", report.run_id}, {"layers", layers}};
    return j.dump(2) + "\n";
}

SweepReport sweep_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        SweepReport report;
        report.run_id = j.at("run_id").get<std::string>();
        for (const auto& e : j.at("layers")) {
            LayerSweepEntry entry;
            entry.layer = e.at("layer").get<std::string>();
            entry.report = report_from_json_value(e.at("report"));
            if (e.contains("probe_acc")) entry.probe_acc = e.at("probe_acc").get<double>();
            report.layers.push_back(std::move(entry));
        }
        return report;
    } catch (const json::exception& e) {
        throw error(errc::parse_error, std::string("sweep JSON: ") + e.what());
    }
}

void write_report_csv(const std::string& layer, const ClusterabilityReport& report,
                      const std::string& path) {
    auto out = open_out(path);
    out << "layer,superclass_id,n,k,ami,purity\n";
    csv_report_rows(out, layer, report, std::nullopt, false);
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

void write_sweep_csv(const SweepReport& report, const std::string& path) {
    auto out = open_out(path);
    bool probe_column = false;
    for (const auto& entry : report.layers)
        if (entry.probe_acc) probe_column = true;
    out << "layer,superclass_id,n,k,ami,purity";
    if (probe_column) out << ",probe_acc";
    out << "\n";
    for (const auto& entry : report.layers)
        csv_report_rows(out, entry.layer, entry.report, entry.probe_acc, probe_column);
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

void write_consistency_csv(const ConsistencyReport& report, const std::string& path) {
    auto out = open_out(path);
    if (report.matrix.empty()) {
        out << "layer,ari\n";
        for (const auto& [layer, value] : report.per_layer)
            out << layer << ',' << csv_double(value) << "\n";
    } else {
        for (const auto& name : report.layers_b) out << ',' << name;
        out << "\n";
        const std::size_t cols = report.layers_b.size();
        for (std::size_t i = 0; i < report.layers_a.size(); ++i) {
            out << report.layers_a[i];
            for (std::size_t j = 0; j < cols; ++j) out << ',' << csv_double(report.matrix[i * cols + j]);
            out << "\n";
        }
    }
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

void save_assignment(const ClusterAssignment& assignment, const std::string& path) {
    auto out = open_out(path);
    out << "sample_index,cluster_id\n";
    for (std::size_t i = 0; i < assignment.size(); ++i) out << i << ',' << assignment.labels[i] << "\n";
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

ClusterAssignment load_assignment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_failure, "cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line) || (line != "sample_index,cluster_id" && line != "sample_index,cluster_id\r"))
        throw error(errc::missing_column, "'" + path + "' must start with header sample_index,cluster_id");

    std::vector<std::pair<std::int64_t, std::int64_t>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw error(errc::parse_error, "line " + std::to_string(line_no) + ": expected 2 fields");
        std::int64_t index = 0, cluster = 0;
        const auto r1 = std::from_chars(line.data(), line.data() + comma, index);
        const auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), cluster);
        if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != line.data() + comma ||
            r2.ptr != line.data() + line.size() || index < 0 || cluster < 0)
            throw error(errc::parse_error, "line " + std::to_string(line_no) + ": malformed row '" + line + "'");
        rows.emplace_back(index, cluster);
    }

    ClusterAssignment out;
    out.labels.assign(rows.size(), -1);
    std::int64_t max_cluster = -1;
    for (const auto& [index, cluster] : rows) {
        if (static_cast<std::size_t>(index) >= rows.size() || out.labels[static_cast<std::size_t>(index)] >= 0)
            throw error(errc::duplicate_index, "sample_index " + std::to_string(index) + " repeated or out of range");
        out.labels[static_cast<std::size_t>(index)] = cluster;
        max_cluster = std::max(max_cluster, cluster);
    }
    out.k = static_cast<std::size_t>(max_cluster + 1);
    return out;
}

void save_dendrogram(const MergeTree& tree, const std::string& path) {
    auto out = open_out(path);
    out << "merge_index,left,right,height,size\n";
    char buf[40];
    for (std::size_t m = 0; m < tree.merges.size(); ++m) {
        std::snprintf(buf, sizeof buf, "%.17g", tree.merges[m].height);
        out << m << ',' << tree.merges[m].left << ',' << tree.merges[m].right << ',' << buf << ','
            << tree.merges[m].size << "\n";
    }
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

void save_exemplars(const std::vector<ExemplarRow>& rows, const std::string& path) {
    auto out = open_out(path);
    bool with_names = false;
    for (const auto& r : rows)
        if (!r.subclass_name.empty()) with_names = true;
    out << "cluster_id,sample_index,subclass_id";
    if (with_names) out << ",subclass_name";
    out << "\n";
    for (const auto& r : rows) {
        out << r.cluster_id << ',' << r.sample_index << ',' << r.subclass_id;
        if (with_names) out << ',' << r.subclass_name;
        out << "\n";
    }
    if (!out) throw error(errc::io_failure, "write to '" + path + "' failed");
}

}  // namespace clusterlens
