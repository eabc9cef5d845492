#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "clusterlens/dendrogram.hpp"
#include "clusterlens/errors.hpp"
#include "clusterlens/metrics.hpp"
#include "clusterlens/protocol.hpp"
#include "clusterlens/rng.hpp"
#include "clusterlens/synth.hpp"
#include "test_util.hpp"

using namespace clusterlens;

namespace {

LabeledDataset zero_noise_fixture(std::size_t supers, std::size_t subs, std::size_t per,
                                  std::uint64_t seed = 0) {
    SynthConfig cfg;
    cfg.spec = uniform_hierarchy(supers, subs);
    cfg.sigma_noise = 0.0;
    cfg.n_per_subclass = per;
    cfg.d = 8;
    cfg.seed = seed;
    return generate(cfg);
}

}  // namespace

TEST_CASE("within-superclass eval scores perfectly separated subclasses at 1") {
    const LabeledDataset ds = zero_noise_fixture(3, 4, 6);
    ProtocolConfig cfg;
    const ClusterabilityReport report = eval_within_superclasses(ds, cfg);
    REQUIRE(report.per_superclass.size() == 3);
    for (const auto& r : report.per_superclass) {
        CHECK(r.ami == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.purity == 1.0);
        CHECK(r.k_used == 4);
        CHECK_FALSE(r.k_capped);
    }
    CHECK(report.pooled.purity == 1.0);
}

TEST_CASE("k follows n_subclasses times factor, capped at the slice size") {
    const LabeledDataset ds = zero_noise_fixture(13, 4, 3);  // 12 samples per superclass
    ProtocolConfig cfg;
    cfg.overclustering_factor = 1;
    for (const auto& r : eval_within_superclasses(ds, cfg).per_superclass) CHECK(r.k_used == 4);

    cfg.overclustering_factor = 5;  // 20 > 12 samples: capped
    for (const auto& r : eval_within_superclasses(ds, cfg).per_superclass) {
        CHECK(r.k_used == 12);
        CHECK(r.k_capped);
    }
}

TEST_CASE("a superclass below two samples aborts with its id") {
    LabeledDataset ds = zero_noise_fixture(2, 2, 2);
    // Append one lone sample in a fresh superclass 9.
    ds.embeddings.n += 1;
    ds.embeddings.data.insert(ds.embeddings.data.end(), ds.embeddings.d, 0.0);
    ds.labels.superclass.push_back(9);
    ds.labels.subclass.push_back(99);
    try {
        eval_within_superclasses(ds, ProtocolConfig{});
        FAIL("expected SuperclassTooSmall");
    } catch (const error& e) {
        CHECK(e.code() == errc::superclass_too_small);
        CHECK(std::string(e.what()).find('9') != std::string::npos);
    }
}

TEST_CASE("aggregates stay between the per-superclass extremes") {
    SynthConfig scfg;
    scfg.spec = uniform_hierarchy(5, 3);
    scfg.sigma_noise = 0.4;
    scfg.n_per_subclass = 15;
    scfg.seed = 3;
    const LabeledDataset ds = generate(scfg);
    const ClusterabilityReport report = eval_within_superclasses(ds, ProtocolConfig{});
    double lo = 1e9, hi = -1e9;
    for (const auto& r : report.per_superclass) {
        lo = std::min(lo, r.ami);
        hi = std::max(hi, r.ami);
    }
    for (const MetricPair& agg : {report.aggregate_weighted, report.aggregate_unweighted}) {
        CHECK(agg.ami >= lo - 1e-12);
        CHECK(agg.ami <= hi + 1e-12);
    }
}

TEST_CASE("pooled metrics equal per-superclass metrics when there is one superclass") {
    SynthConfig scfg;
    scfg.spec = uniform_hierarchy(1, 4);
    scfg.sigma_noise = 0.5;
    scfg.n_per_subclass = 20;
    scfg.seed = 5;
    const LabeledDataset ds = generate(scfg);
    const ClusterabilityReport report = eval_within_superclasses(ds, ProtocolConfig{});
    REQUIRE(report.per_superclass.size() == 1);
    CHECK(report.pooled.ami == doctest::Approx(report.per_superclass[0].ami).epsilon(1e-12));
    CHECK(report.pooled.purity == doctest::Approx(report.per_superclass[0].purity).epsilon(1e-12));
}

TEST_CASE("shuffled-hierarchy data clusters better than natural data") {
    // Small-scale version of the full gap check in the acceptance suite.
    SynthConfig scfg;
    scfg.spec = uniform_hierarchy(6, 4);
    scfg.d = 32;
    scfg.sigma_super = 1.0;
    scfg.sigma_sub = 0.3;
    scfg.sigma_noise = 0.5;
    scfg.n_per_subclass = 30;
    scfg.seed = 9;
    scfg.mode = SynthMode::natural;
    const double natural = eval_within_superclasses(generate(scfg), ProtocolConfig{}).aggregate_weighted.ami;
    scfg.mode = SynthMode::shuffled;
    const double shuffled = eval_within_superclasses(generate(scfg), ProtocolConfig{}).aggregate_weighted.ami;
    CHECK(shuffled > natural);
}

TEST_CASE("external eval clusters the whole set to n_classes x factor") {
    const auto blobs = testutil::make_blobs(5, 12, 4, 19);
    LabeledDataset ds;
    ds.embeddings = blobs.X;
    ds.labels.superclass.assign(blobs.truth.size(), 0);
    ds.labels.subclass = blobs.truth;

    ProtocolConfig cfg;
    cfg.overclustering_factor = 2;
    const ClusterabilityReport doubled = eval_external(ds, cfg);
    REQUIRE(doubled.per_superclass.size() == 1);
    CHECK(doubled.per_superclass[0].superclass_id == -1);
    CHECK(doubled.per_superclass[0].k_used == 10);

    cfg.overclustering_factor = 1;
    const ClusterabilityReport exact = eval_external(ds, cfg);
    CHECK(exact.per_superclass[0].k_used == 5);
    CHECK(exact.pooled.purity == 1.0);
    CHECK(exact.pooled.ami == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("external purity is non-decreasing in the overclustering factor") {
    const EmbeddingMatrix X = testutil::random_matrix(80, 4, 41);
    LabeledDataset ds;
    ds.embeddings = X;
    ds.labels.superclass.assign(80, 0);
    Rng rng(42);
    ds.labels.subclass.resize(80);
    for (auto& v : ds.labels.subclass) v = static_cast<ClassId>(rng.next_below(4));

    double prev = -1.0;
    for (int factor = 1; factor <= 10; ++factor) {
        ProtocolConfig cfg;
        cfg.overclustering_factor = factor;
        const double p = eval_external(ds, cfg).pooled.purity;
        CHECK(p >= prev - 1e-12);
        prev = p;
    }
}

TEST_CASE("empty dataset is rejected by external eval") {
    LabeledDataset ds;
    ds.embeddings.d = 3;
    CHECK_THROWS_AS(eval_external(ds, ProtocolConfig{}), error);
}

TEST_CASE("sweep keeps layer order and is deterministic") {
    const LabeledDataset ds = zero_noise_fixture(3, 2, 5, 1);
    std::vector<std::pair<std::string, LabeledDataset>> layers{{"conv1", ds}, {"conv2", ds}};
    const auto reports = sweep_layers(layers, ProtocolConfig{});
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].first == "conv1");
    CHECK(reports[1].first == "conv2");
    CHECK(reports[0].second == reports[1].second);  // identical layers, identical reports
    CHECK_THROWS_AS(sweep_layers({}, ProtocolConfig{}), error);
}

TEST_CASE("sweep ami grows with synthetic separation") {
    std::vector<std::pair<std::string, LabeledDataset>> layers;
    for (int level = 0; level < 4; ++level) {
        SynthConfig scfg;
        scfg.spec = uniform_hierarchy(4, 3);
        scfg.d = 16;
        scfg.sigma_sub = 0.4 + 0.5 * level;  // separation rises layer by layer
        scfg.sigma_noise = 0.35;
        scfg.n_per_subclass = 25;
        scfg.seed = 7;  // same draws, scaled differently
        layers.emplace_back("layer" + std::to_string(level), generate(scfg));
    }
    const auto reports = sweep_layers(layers, ProtocolConfig{});
    for (std::size_t i = 1; i < reports.size(); ++i)
        CHECK(reports[i].second.aggregate_weighted.ami >=
              reports[i - 1].second.aggregate_weighted.ami - 1e-12);
}

TEST_CASE("cross-run consistency: identical runs score 1, random runs near 0") {
    Rng rng(55);
    auto random_assignment = [&](std::size_t n, std::size_t k) {
        ClusterAssignment a;
        a.labels.resize(n);
        for (auto& v : a.labels) v = static_cast<std::int64_t>(rng.next_below(k));
        return canonicalize(a);
    };

    LayerAssignments run_a, run_b;
    for (int l = 0; l < 3; ++l) {
        run_a.emplace_back("layer" + std::to_string(l), random_assignment(1000, 4));
        run_b.emplace_back("layer" + std::to_string(l), random_assignment(1000, 4));
    }

    const ConsistencyReport self = cross_run_consistency(run_a, run_a, true);
    for (const auto& [name, value] : self.per_layer) CHECK(value == 1.0);
    for (std::size_t i = 0; i < run_a.size(); ++i)
        CHECK(self.matrix[i * run_a.size() + i] == 1.0);

    const ConsistencyReport indep = cross_run_consistency(run_a, run_b, false);
    for (const auto& [name, value] : indep.per_layer) CHECK(std::abs(value) <= 0.05);
}

TEST_CASE("consistency matrix transposes when runs swap") {
    Rng rng(77);
    auto random_assignment = [&](std::size_t n, std::size_t k) {
        ClusterAssignment a;
        a.labels.resize(n);
        for (auto& v : a.labels) v = static_cast<std::int64_t>(rng.next_below(k));
        return canonicalize(a);
    };
    LayerAssignments run_a, run_b;
    for (int l = 0; l < 3; ++l) run_a.emplace_back("a" + std::to_string(l), random_assignment(60, 3));
    for (int l = 0; l < 2; ++l) run_b.emplace_back("a" + std::to_string(l), random_assignment(60, 3));

    const ConsistencyReport ab = cross_run_consistency(run_a, run_b, true);
    const ConsistencyReport ba = cross_run_consistency(run_b, run_a, true);
    for (std::size_t i = 0; i < run_a.size(); ++i)
        for (std::size_t j = 0; j < run_b.size(); ++j)
            CHECK(ab.matrix[i * run_b.size() + j] == doctest::Approx(ba.matrix[j * run_a.size() + i]));
}

TEST_CASE("consistency error paths") {
    LayerAssignments run_a{{"x", canonicalize({{0, 0, 1, 1}, 2})}};
    LayerAssignments run_b{{"y", canonicalize({{0, 1, 0, 1}, 2})}};
    CHECK_THROWS_AS(cross_run_consistency(run_a, run_b, false), error);

    LayerAssignments run_c{{"x", canonicalize({{0, 1}, 2})}};
    CHECK_THROWS_AS(cross_run_consistency(run_a, run_c, false), error);
}

TEST_CASE("exemplars take the lowest indices per cluster") {
    LabeledDataset ds;
    ds.labels.superclass = {0, 0, 0, 0, 0, 0};
    ds.labels.subclass = {5, 6, 5, 6, 5, 6};
    ds.labels.subclass_names = {{5, "tabby"}, {6, "siamese"}};
    ClusterAssignment assignment;
    assignment.labels = {1, 0, 1, 0, 1, 0};
    assignment.k = 2;

    const auto rows = export_exemplars(assignment, ds, 2);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].cluster_id == 0);
    CHECK(rows[0].sample_index == 1);
    CHECK(rows[0].subclass_name == "siamese");
    CHECK(rows[1].sample_index == 3);
    CHECK(rows[2].cluster_id == 1);
    CHECK(rows[2].sample_index == 0);
    CHECK(rows[3].sample_index == 2);

    // per_cluster beyond the cluster size lists whole clusters.
    const auto all = export_exemplars(assignment, ds, 100);
    CHECK(all.size() == 6);
    CHECK_THROWS_AS(export_exemplars(assignment, ds, 0), error);
}

TEST_CASE("thread cap does not change results") {
    SynthConfig scfg;
    scfg.spec = uniform_hierarchy(6, 3);
    scfg.sigma_noise = 0.4;
    scfg.n_per_subclass = 12;
    scfg.seed = 13;
    const LabeledDataset ds = generate(scfg);

    setenv("CLUSTERLENS_THREADS", "1", 1);
    const ClusterabilityReport sequential = eval_within_superclasses(ds, ProtocolConfig{});
    setenv("CLUSTERLENS_THREADS", "4", 1);
    const ClusterabilityReport parallel = eval_within_superclasses(ds, ProtocolConfig{});
    unsetenv("CLUSTERLENS_THREADS");
    CHECK(sequential == parallel);
}

TEST_CASE("factor outside 1..10 is rejected") {
    const LabeledDataset ds = zero_noise_fixture(2, 2, 3);
    ProtocolConfig cfg;
    cfg.overclustering_factor = 0;
    CHECK_THROWS_AS(eval_within_superclasses(ds, cfg), error);
    cfg.overclustering_factor = 11;
    CHECK_THROWS_AS(eval_within_superclasses(ds, cfg), error);
}
