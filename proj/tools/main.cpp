// clusterlens: subclass-clusterability analysis over exported embedding files.
//
// Exit codes: 0 success, 1 usage error, 2 data error (bad file, bad value,
// impossible request). Every output file is written via temp + rename.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clusterlens/dendrogram.hpp"
#include "clusterlens/embedding.hpp"
#include "clusterlens/errors.hpp"
#include "clusterlens/hierarchy.hpp"
#include "clusterlens/kmeans.hpp"
#include "clusterlens/labels.hpp"
#include "clusterlens/metrics.hpp"
#include "clusterlens/probe.hpp"
#include "clusterlens/protocol.hpp"
#include "clusterlens/report_io.hpp"
#include "clusterlens/rng.hpp"
#include "clusterlens/run_manifest.hpp"
#include "clusterlens/svg.hpp"
#include "clusterlens/synth.hpp"

namespace cl = clusterlens;
namespace fs = std::filesystem;

namespace {

// All writers go through temp + rename so partial output never lands under
// the final name.
template <typename WriteFn>
void write_atomic(const std::string& path, WriteFn&& fn) {
    const std::string tmp = path + ".tmp-" + std::to_string(static_cast<long>(::getpid()));
    try {
        fn(tmp);
        fs::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

void write_text_atomic(const std::string& path, const std::string& text) {
    write_atomic(path, [&](const std::string& tmp) {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw cl::error(cl::errc::io_failure, "cannot open '" + tmp + "' for writing");
        out << text;
        if (!out) throw cl::error(cl::errc::io_failure, "write to '" + tmp + "' failed");
    });
}

std::string default_layer_name(const std::string& embeddings_path) {
    return fs::path(embeddings_path).stem().string();
}

std::string resolve_manifest(const std::string& run) {
    if (fs::is_directory(run)) return (fs::path(run) / "run.json").string();
    return run;
}

struct EngineOptions {
    std::string engine = "ward";
    int factor = 1;
    bool raw = false;
    std::uint64_t seed = 0;
    std::size_t kmeans_max_iters = 300;

    cl::ProtocolConfig to_config() const {
        cl::ProtocolConfig cfg;
        cfg.engine = cl::parse_engine(engine);
        cfg.overclustering_factor = factor;
        cfg.normalize = !raw;
        cfg.seed = seed;
        cfg.kmeans_max_iters = kmeans_max_iters;
        return cfg;
    }
};

void add_engine_options(CLI::App* cmd, EngineOptions& opts, bool with_factor = true) {
    cmd->add_option("--engine", opts.engine, "Clustering engine")
        ->check(CLI::IsMember({"ward", "average", "complete", "single", "kmeans"}))
        ->capture_default_str();
    if (with_factor)
        cmd->add_option("--factor", opts.factor, "Overclustering factor")
            ->check(CLI::Range(1, 10))
            ->capture_default_str();
    cmd->add_flag("--raw", opts.raw, "Skip unit-norm embedding normalization");
    cmd->add_option("--seed", opts.seed, "Seed for the kmeans engine")->capture_default_str();
    cmd->add_option("--kmeans-max-iters", opts.kmeans_max_iters, "Lloyd iteration cap")
        ->capture_default_str();
}

struct ProbeFlags {
    bool enabled = false;
    double weight_decay = 1e-4;
    std::size_t max_iters = 1000;
    double tol = 1e-7;
    double holdout = 0.0;
    std::string target = "subclass";
};

// Fits a probe on the dataset (normalized per cfg) and returns its accuracy,
// on a seeded holdout slice when holdout > 0, otherwise on the training set.
double run_probe(const cl::LabeledDataset& ds, bool normalize, const ProbeFlags& flags,
                 std::uint64_t seed, cl::ProbeModel* model_out = nullptr) {
    const std::vector<cl::ClassId>& target =
        flags.target == "superclass" ? ds.labels.superclass : ds.labels.subclass;
    cl::EmbeddingMatrix X = normalize ? cl::l2_normalize(ds.embeddings).matrix : ds.embeddings;

    cl::ProbeOptions options;
    options.weight_decay = flags.weight_decay;
    options.max_iters = flags.max_iters;
    options.tol = flags.tol;

    if (flags.holdout <= 0.0) {
        const cl::ProbeModel model = cl::fit_probe(X, target, options);
        const double acc = cl::probe_accuracy(model, X, target);
        if (model_out) *model_out = model;
        return acc;
    }

    const std::size_t n = X.n;
    const auto held = static_cast<std::size_t>(flags.holdout * static_cast<double>(n));
    if (held == 0 || held >= n)
        throw cl::error(cl::errc::bad_config, "holdout fraction leaves an empty split");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    cl::Rng rng(cl::mix_seed(seed, 0x70726f6265ULL));  // probe split stream
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.next_below(i))]);

    auto take = [&](std::size_t begin, std::size_t end) {
        cl::EmbeddingMatrix part;
        part.n = end - begin;
        part.d = X.d;
        part.dtype = X.dtype;
        std::vector<cl::ClassId> part_y(end - begin);
        part.data.reserve(part.n * X.d);
        for (std::size_t i = begin; i < end; ++i) {
            const auto r = order[i];
            part.data.insert(part.data.end(), X.data.begin() + r * X.d, X.data.begin() + (r + 1) * X.d);
            part_y[i - begin] = target[r];
        }
        return std::make_pair(std::move(part), std::move(part_y));
    };

    auto [train_x, train_y] = take(0, n - held);
    auto [test_x, test_y] = take(n - held, n);
    const cl::ProbeModel model = cl::fit_probe(train_x, train_y, options);
    const double acc = cl::probe_accuracy(model, test_x, test_y);
    if (model_out) *model_out = model;
    return acc;
}

// ---------------------------------------------------------------- cluster --

struct ClusterArgs {
    std::string embeddings, out, dendrogram_out;
    std::size_t k = 0;
    EngineOptions engine;
};

void cmd_cluster(const ClusterArgs& args) {
    const cl::ProtocolConfig cfg = args.engine.to_config();
    cl::EmbeddingMatrix X = cl::load_embeddings(args.embeddings);
    if (cfg.normalize) X = cl::l2_normalize(X).matrix;

    cl::ClusterAssignment assignment;
    if (cfg.engine == cl::Engine::kmeans) {
        if (!args.dendrogram_out.empty())
            throw CLI::ValidationError("--dendrogram", "kmeans does not produce a dendrogram");
        assignment = cl::kmeans(X, args.k, cfg.seed, cfg.kmeans_max_iters).assignment;
    } else {
        const cl::LinkageKind linkage = [&] {
            switch (cfg.engine) {
                case cl::Engine::average: return cl::LinkageKind::average;
                case cl::Engine::complete: return cl::LinkageKind::complete;
                case cl::Engine::single: return cl::LinkageKind::single;
                default: return cl::LinkageKind::ward;
            }
        }();
        const cl::MergeTree tree = cl::build_dendrogram(X, linkage);
        assignment = cl::cut(tree, args.k);
        if (!args.dendrogram_out.empty())
            write_atomic(args.dendrogram_out, [&](const std::string& p) { cl::save_dendrogram(tree, p); });
    }
    write_atomic(args.out, [&](const std::string& p) { cl::save_assignment(assignment, p); });
}

// ----------------------------------------------------- eval-within/external

struct EvalArgs {
    std::string embeddings, labels, layer, out, csv;
    EngineOptions engine;
    bool external = false;
};

void cmd_eval(const EvalArgs& args) {
    cl::LabeledDataset ds;
    ds.embeddings = cl::load_embeddings(args.embeddings);
    ds.labels = cl::load_labels(args.labels);
    const cl::ProtocolConfig cfg = args.engine.to_config();
    const cl::ClusterabilityReport report =
        args.external ? cl::eval_external(ds, cfg) : cl::eval_within_superclasses(ds, cfg);

    const std::string layer = args.layer.empty() ? default_layer_name(args.embeddings) : args.layer;
    if (!args.out.empty()) write_text_atomic(args.out, cl::report_to_json(report));
    if (!args.csv.empty())
        write_atomic(args.csv, [&](const std::string& p) { cl::write_report_csv(layer, report, p); });
}

// ------------------------------------------------------------------ sweep --

struct SweepArgs {
    std::string run, out, csv, svg;
    EngineOptions engine;
    ProbeFlags probe;
};

void cmd_sweep(const SweepArgs& args) {
    const cl::ProtocolConfig cfg = args.engine.to_config();
    const auto layers = cl::load_run(resolve_manifest(args.run));
    const auto reports = cl::sweep_layers(layers, cfg);

    cl::SweepReport sweep;
    sweep.run_id = layers.empty() ? std::string() : layers.front().second.embeddings.run_id;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        cl::LayerSweepEntry entry;
        entry.layer = reports[i].first;
        entry.report = reports[i].second;
        if (args.probe.enabled)
            entry.probe_acc = run_probe(layers[i].second, cfg.normalize, args.probe,
                                        cl::mix_seed(cfg.seed, i));
        sweep.layers.push_back(std::move(entry));
    }

    if (!args.out.empty()) write_text_atomic(args.out, cl::sweep_to_json(sweep));
    if (!args.csv.empty())
        write_atomic(args.csv, [&](const std::string& p) { cl::write_sweep_csv(sweep, p); });
    if (!args.svg.empty()) {
        std::vector<cl::Series> series(2);
        series[0].name = "ami";
        series[1].name = "purity";
        for (std::size_t i = 0; i < sweep.layers.size(); ++i) {
            const auto x = static_cast<double>(i);
            series[0].points.emplace_back(x, sweep.layers[i].report.aggregate_weighted.ami);
            series[1].points.emplace_back(x, sweep.layers[i].report.aggregate_weighted.purity);
        }
        if (args.probe.enabled) {
            cl::Series probe_series;
            probe_series.name = "probe_acc";
            for (std::size_t i = 0; i < sweep.layers.size(); ++i)
                probe_series.points.emplace_back(static_cast<double>(i), *sweep.layers[i].probe_acc);
            series.push_back(std::move(probe_series));
        }
        write_atomic(args.svg, [&](const std::string& p) { cl::emit_linechart(series, p); });
    }
}

// ------------------------------------------------------------ consistency --

struct ConsistencyArgs {
    std::string run_a, run_b, out;
    bool pairs = false;
    EngineOptions engine;
};

void cmd_consistency(const ConsistencyArgs& args) {
    const cl::ProtocolConfig cfg = args.engine.to_config();
    auto assignments_of = [&](const std::string& run) {
        cl::LayerAssignments out;
        for (const auto& [name, ds] : cl::load_run(resolve_manifest(run)))
            out.emplace_back(name, cl::cluster_within_superclasses(ds, cfg));
        return out;
    };
    const cl::LayerAssignments a = assignments_of(args.run_a);
    const cl::LayerAssignments b = assignments_of(args.run_b);
    const cl::ConsistencyReport report = cl::cross_run_consistency(a, b, args.pairs);
    write_atomic(args.out, [&](const std::string& p) { cl::write_consistency_csv(report, p); });
}

// ------------------------------------------------------------------ probe --

struct ProbeArgs {
    std::string embeddings, labels, out;
    bool raw = false;
    std::uint64_t seed = 0;
    ProbeFlags flags;
};

void cmd_probe(const ProbeArgs& args) {
    cl::LabeledDataset ds;
    ds.embeddings = cl::load_embeddings(args.embeddings);
    ds.labels = cl::load_labels(args.labels);
    cl::validate_dataset(ds);

    cl::ProbeModel model;
    const double accuracy = run_probe(ds, !args.raw, args.flags, args.seed, &model);

    nlohmann::json j = {{"target", args.flags.target},
                        {"normalize", !args.raw},
                        {"weight_decay", args.flags.weight_decay},
                        {"holdout", args.flags.holdout},
                        {"n", ds.embeddings.n},
                        {"d", ds.embeddings.d},
                        {"classes", model.classes},
                        {"iterations", model.iterations},
                        {"final_loss", model.final_loss},
                        {"final_grad_norm", model.final_grad_norm},
                        {"accuracy", accuracy}};
    write_text_atomic(args.out, j.dump(2) + "\n");
}

// ---------------------------------------------------------------- shuffle --

struct ShuffleArgs {
    std::string labels, hierarchy, out, hierarchy_out;
    std::uint64_t seed = 0;
};

void cmd_shuffle(const ShuffleArgs& args) {
    if (!args.labels.empty()) {
        const cl::LabelTable table = cl::load_labels(args.labels);
        const cl::HierarchySpec spec = cl::derive_hierarchy(table);
        const cl::HierarchySpec shuffled = cl::shuffle_hierarchy(spec, args.seed);
        if (!args.out.empty()) {
            const cl::LabelTable relabeled = cl::relabel_table(table, shuffled);
            write_atomic(args.out, [&](const std::string& p) { cl::save_labels(relabeled, p); });
        }
        if (!args.hierarchy_out.empty())
            write_atomic(args.hierarchy_out,
                         [&](const std::string& p) { cl::save_hierarchy(shuffled, p); });
    } else {
        const cl::HierarchySpec spec = cl::load_hierarchy(args.hierarchy);
        const cl::HierarchySpec shuffled = cl::shuffle_hierarchy(spec, args.seed);
        const std::string target = args.hierarchy_out.empty() ? args.out : args.hierarchy_out;
        write_atomic(target, [&](const std::string& p) { cl::save_hierarchy(shuffled, p); });
    }
}

// ------------------------------------------------------------------ synth --

struct SynthArgs {
    std::size_t superclasses = 13;
    std::size_t subclasses = 4;
    std::string hierarchy;
    std::size_t dim = 16;
    double sigma_super = 1.0, sigma_sub = 0.3, sigma_noise = 0.5;
    std::size_t n_per_subclass = 10;
    std::string mode = "natural";
    std::uint64_t seed = 0;
    std::string out_embeddings, out_labels, manifest;
    std::string dtype = "f64";
    std::string layer_name = "synth";
    std::string run_id;
};

void cmd_synth(const SynthArgs& args) {
    cl::SynthConfig cfg;
    cfg.spec = args.hierarchy.empty()
                   ? cl::uniform_hierarchy(args.superclasses, args.subclasses)
                   : cl::load_hierarchy(args.hierarchy);
    cfg.d = args.dim;
    cfg.sigma_super = args.sigma_super;
    cfg.sigma_sub = args.sigma_sub;
    cfg.sigma_noise = args.sigma_noise;
    cfg.n_per_subclass = args.n_per_subclass;
    cfg.mode = args.mode == "natural" ? cl::SynthMode::natural : cl::SynthMode::shuffled;
    cfg.seed = args.seed;

    cl::LabeledDataset ds = cl::generate(cfg);
    ds.embeddings.dtype = args.dtype == "f32" ? cl::Dtype::f32 : cl::Dtype::f64;
    ds.embeddings.layer_name = args.layer_name;
    ds.embeddings.run_id = args.run_id;

    write_atomic(args.out_embeddings,
                 [&](const std::string& p) { cl::save_embeddings(ds.embeddings, p); });
    write_atomic(args.out_labels, [&](const std::string& p) { cl::save_labels(ds.labels, p); });
    if (!args.manifest.empty()) {
        cl::RunManifest manifest;
        manifest.run_id = args.run_id;
        manifest.labels = fs::path(args.out_labels).filename().string();
        manifest.layers.push_back({args.layer_name, fs::path(args.out_embeddings).filename().string()});
        write_atomic(args.manifest, [&](const std::string& p) { cl::save_manifest(manifest, p); });
    }
}

// -------------------------------------------------------------- exemplars --

struct ExemplarArgs {
    std::string assignment, labels, out;
    std::size_t per_cluster = 5;
};

void cmd_exemplars(const ExemplarArgs& args) {
    cl::LabeledDataset ds;
    ds.labels = cl::load_labels(args.labels);
    const cl::ClusterAssignment assignment = cl::load_assignment(args.assignment);
    const auto rows = cl::export_exemplars(assignment, ds, args.per_cluster);
    write_atomic(args.out, [&](const std::string& p) { cl::save_exemplars(rows, p); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clusterlens: measure how well layer embeddings cluster into unobserved subclasses"};
    app.require_subcommand(1);
    app.footer("Environment: CLUSTERLENS_THREADS caps worker threads (0 = sequential).");

    ClusterArgs cluster_args;
    auto* cluster = app.add_subcommand("cluster", "Cluster one embedding file at a fixed k");
    cluster->add_option("--embeddings", cluster_args.embeddings, "EMB1 input")->required();
    cluster->add_option("--k", cluster_args.k, "Number of clusters")->required();
    cluster->add_option("--out", cluster_args.out, "Assignment CSV output")->required();
    cluster->add_option("--dendrogram", cluster_args.dendrogram_out,
                        "Merge-list CSV output (agglomerative engines)");
    add_engine_options(cluster, cluster_args.engine, /*with_factor=*/false);
    cluster->callback([&] { cmd_cluster(cluster_args); });

    EvalArgs within_args;
    auto* within = app.add_subcommand("eval-within",
                                      "Cluster within each superclass and score subclass recovery");
    within->add_option("--embeddings", within_args.embeddings, "EMB1 input")->required();
    within->add_option("--labels", within_args.labels, "Label CSV input")->required();
    within->add_option("--layer", within_args.layer, "Layer name for the CSV (default: file stem)");
    within->add_option("--out", within_args.out, "Report JSON output");
    within->add_option("--csv", within_args.csv, "Flat CSV output");
    add_engine_options(within, within_args.engine);
    within->callback([&] { cmd_eval(within_args); });

    EvalArgs external_args;
    external_args.external = true;
    auto* external = app.add_subcommand("eval-external",
                                        "Cluster a whole dataset and score class recovery");
    external->add_option("--embeddings", external_args.embeddings, "EMB1 input")->required();
    external->add_option("--labels", external_args.labels, "Label CSV input (subclass column = class)")
        ->required();
    external->add_option("--layer", external_args.layer, "Layer name for the CSV (default: file stem)");
    external->add_option("--out", external_args.out, "Report JSON output");
    external->add_option("--csv", external_args.csv, "Flat CSV output");
    add_engine_options(external, external_args.engine);
    external->callback([&] { cmd_eval(external_args); });

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Evaluate every layer of a run directory");
    sweep->add_option("--run", sweep_args.run, "Run directory or run.json path")->required();
    sweep->add_option("--out", sweep_args.out, "Sweep JSON output");
    sweep->add_option("--csv", sweep_args.csv, "Flat CSV output");
    sweep->add_option("--svg", sweep_args.svg, "Line chart output");
    sweep->add_flag("--probe", sweep_args.probe.enabled, "Also fit a linear probe per layer");
    sweep->add_option("--probe-weight-decay", sweep_args.probe.weight_decay, "L2 penalty on probe weights")
        ->capture_default_str();
    sweep->add_option("--probe-max-iters", sweep_args.probe.max_iters, "Probe iteration cap")
        ->capture_default_str();
    sweep->add_option("--probe-tol", sweep_args.probe.tol, "Probe gradient-norm tolerance")
        ->capture_default_str();
    sweep->add_option("--probe-holdout", sweep_args.probe.holdout, "Holdout fraction for probe accuracy")
        ->capture_default_str();
    sweep->add_option("--probe-target", sweep_args.probe.target, "subclass or superclass")
        ->check(CLI::IsMember({"subclass", "superclass"}))
        ->capture_default_str();
    add_engine_options(sweep, sweep_args.engine);
    sweep->callback([&] { cmd_sweep(sweep_args); });

    ConsistencyArgs consistency_args;
    auto* consistency = app.add_subcommand("consistency", "Per-layer ARI between two runs");
    consistency->add_option("--run-a", consistency_args.run_a, "First run directory")->required();
    consistency->add_option("--run-b", consistency_args.run_b, "Second run directory")->required();
    consistency->add_option("--out", consistency_args.out, "CSV output")->required();
    consistency->add_flag("--pairs", consistency_args.pairs, "Emit the full layer-pair ARI matrix");
    add_engine_options(consistency, consistency_args.engine);
    consistency->callback([&] { cmd_consistency(consistency_args); });

    ProbeArgs probe_args;
    auto* probe = app.add_subcommand("probe", "Fit a linear probe from embeddings to labels");
    probe->add_option("--embeddings", probe_args.embeddings, "EMB1 input")->required();
    probe->add_option("--labels", probe_args.labels, "Label CSV input")->required();
    probe->add_option("--out", probe_args.out, "Probe report JSON output")->required();
    probe->add_option("--target", probe_args.flags.target, "subclass or superclass")
        ->check(CLI::IsMember({"subclass", "superclass"}))
        ->capture_default_str();
    probe->add_flag("--raw", probe_args.raw, "Skip unit-norm embedding normalization");
    probe->add_option("--weight-decay", probe_args.flags.weight_decay, "L2 penalty on probe weights")
        ->capture_default_str();
    probe->add_option("--max-iters", probe_args.flags.max_iters, "Iteration cap")->capture_default_str();
    probe->add_option("--tol", probe_args.flags.tol, "Gradient-norm stopping tolerance")
        ->capture_default_str();
    probe->add_option("--holdout", probe_args.flags.holdout, "Holdout fraction for accuracy")
        ->capture_default_str();
    probe->add_option("--seed", probe_args.seed, "Seed for the holdout split")->capture_default_str();
    probe->callback([&] { cmd_probe(probe_args); });

    ShuffleArgs shuffle_args;
    auto* shuffle = app.add_subcommand("shuffle",
                                       "Shuffle the subclass-to-superclass mapping (same shape)");
    auto* shuffle_labels = shuffle->add_option("--labels", shuffle_args.labels, "Label CSV input");
    auto* shuffle_hier = shuffle->add_option("--hierarchy", shuffle_args.hierarchy, "Hierarchy JSON input");
    shuffle->add_option("--out", shuffle_args.out, "Relabeled CSV (with --labels) or hierarchy JSON");
    shuffle->add_option("--hierarchy-out", shuffle_args.hierarchy_out, "Shuffled hierarchy JSON output");
    shuffle->add_option("--seed", shuffle_args.seed, "Shuffle seed")->capture_default_str();
    shuffle_labels->excludes(shuffle_hier);
    shuffle->callback([&] {
        if (shuffle_args.labels.empty() && shuffle_args.hierarchy.empty())
            throw CLI::RequiredError("--labels or --hierarchy");
        if (shuffle_args.out.empty() && shuffle_args.hierarchy_out.empty())
            throw CLI::RequiredError("--out or --hierarchy-out");
        cmd_shuffle(shuffle_args);
    });

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic hierarchical dataset");
    synth->add_option("--superclasses", synth_args.superclasses, "Superclass count")
        ->capture_default_str();
    synth->add_option("--subclasses", synth_args.subclasses, "Subclasses per superclass")
        ->capture_default_str();
    synth->add_option("--hierarchy", synth_args.hierarchy, "Hierarchy JSON (overrides the two counts)");
    synth->add_option("--dim", synth_args.dim, "Embedding dimension")->capture_default_str();
    synth->add_option("--sigma-super", synth_args.sigma_super, "Superclass center scale")
        ->capture_default_str();
    synth->add_option("--sigma-sub", synth_args.sigma_sub, "Subclass offset scale (natural mode)")
        ->capture_default_str();
    synth->add_option("--sigma-noise", synth_args.sigma_noise, "Per-sample noise scale")
        ->capture_default_str();
    synth->add_option("--n-per-subclass", synth_args.n_per_subclass, "Samples per subclass")
        ->capture_default_str();
    synth->add_option("--mode", synth_args.mode, "natural or shuffled")
        ->check(CLI::IsMember({"natural", "shuffled"}))
        ->capture_default_str();
    synth->add_option("--seed", synth_args.seed, "Generator seed")->capture_default_str();
    synth->add_option("--out-embeddings", synth_args.out_embeddings, "EMB1 output")->required();
    synth->add_option("--out-labels", synth_args.out_labels, "Label CSV output")->required();
    synth->add_option("--manifest", synth_args.manifest, "Optional single-layer run.json output");
    synth->add_option("--dtype", synth_args.dtype, "f32 or f64")
        ->check(CLI::IsMember({"f32", "f64"}))
        ->capture_default_str();
    synth->add_option("--layer-name", synth_args.layer_name, "Layer name stamp")->capture_default_str();
    synth->add_option("--run-id", synth_args.run_id, "Run id stamp");
    synth->callback([&] { cmd_synth(synth_args); });

    ExemplarArgs exemplar_args;
    auto* exemplars = app.add_subcommand("exemplars", "Export per-cluster exemplar sample indices");
    exemplars->add_option("--assignment", exemplar_args.assignment, "Assignment CSV input")->required();
    exemplars->add_option("--labels", exemplar_args.labels, "Label CSV input")->required();
    exemplars->add_option("--per-cluster", exemplar_args.per_cluster, "Exemplars per cluster")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    exemplars->add_option("--out", exemplar_args.out, "Exemplar CSV output")->required();
    exemplars->callback([&] { cmd_exemplars(exemplar_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const cl::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
