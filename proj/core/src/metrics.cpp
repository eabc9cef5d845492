#include "clusterlens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "clusterlens/errors.hpp"

namespace clusterlens {

namespace {

std::vector<ClassId> sorted_unique(std::span<const ClassId> values) {
    std::vector<ClassId> ids(values.begin(), values.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::size_t id_position(const std::vector<ClassId>& ids, ClassId value) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), value) - ids.begin());
}

double margin_entropy(const std::vector<std::int64_t>& sums, std::int64_t total) {
    double h = 0.0;
    for (std::int64_t s : sums) {
        if (s <= 0) continue;
        const double p = static_cast<double>(s) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h;
}

std::int64_t pairs2(std::int64_t n) { return n * (n - 1) / 2; }

}  // namespace

ClusterAssignment canonicalize(const ClusterAssignment& assignment) {
    ClusterAssignment out;
    out.labels.resize(assignment.labels.size());
    std::map<std::int64_t, std::int64_t> remap;
    std::int64_t next = 0;
    for (std::size_t i = 0; i < assignment.labels.size(); ++i) {
        auto [it, inserted] = remap.emplace(assignment.labels[i], next);
        if (inserted) ++next;
        out.labels[i] = it->second;
    }
    out.k = static_cast<std::size_t>(next);
    return out;
}

ContingencyTable contingency(std::span<const ClassId> pred, std::span<const ClassId> truth) {
    if (pred.size() != truth.size())
        throw error(errc::length_mismatch,
                    "prediction has " + std::to_string(pred.size()) + " samples, truth has " +
                        std::to_string(truth.size()));
    const auto pred_ids = sorted_unique(pred);
    const auto truth_ids = sorted_unique(truth);

    ContingencyTable t;
    t.rows = pred_ids.size();
    t.cols = truth_ids.size();
    t.counts.assign(t.rows * t.cols, 0);
    t.row_sums.assign(t.rows, 0);
    t.col_sums.assign(t.cols, 0);
    t.total = static_cast<std::int64_t>(pred.size());
    for (std::size_t s = 0; s < pred.size(); ++s) {
        const std::size_t i = id_position(pred_ids, pred[s]);
        const std::size_t j = id_position(truth_ids, truth[s]);
        ++t.counts[i * t.cols + j];
        ++t.row_sums[i];
        ++t.col_sums[j];
    }
    return t;
}

ContingencyTable contingency(const ClusterAssignment& pred, std::span<const ClassId> truth) {
    return contingency(std::span<const ClassId>(pred.labels), truth);
}

double purity(const ContingencyTable& table) {
    if (table.total < 1) throw error(errc::empty_table, "purity needs at least one sample");
    std::int64_t hits = 0;
    for (std::size_t i = 0; i < table.rows; ++i) {
        std::int64_t best = 0;
        for (std::size_t j = 0; j < table.cols; ++j) best = std::max(best, table.at(i, j));
        hits += best;
    }
    return static_cast<double>(hits) / static_cast<double>(table.total);
}

double mutual_information(const ContingencyTable& table) {
    if (table.total < 1) throw error(errc::empty_table, "mutual information needs at least one sample");
    const double n = static_cast<double>(table.total);
    double mi = 0.0;
    for (std::size_t i = 0; i < table.rows; ++i) {
        for (std::size_t j = 0; j < table.cols; ++j) {
            const std::int64_t c = table.at(i, j);
            if (c <= 0) continue;
            const double joint = static_cast<double>(c) / n;
            mi += joint * std::log(n * static_cast<double>(c) /
                                   (static_cast<double>(table.row_sums[i]) * static_cast<double>(table.col_sums[j])));
        }
    }
    return std::max(mi, 0.0);
}

double row_entropy(const ContingencyTable& table) {
    if (table.total < 1) throw error(errc::empty_table, "entropy needs at least one sample");
    return margin_entropy(table.row_sums, table.total);
}

double col_entropy(const ContingencyTable& table) {
    if (table.total < 1) throw error(errc::empty_table, "entropy needs at least one sample");
    return margin_entropy(table.col_sums, table.total);
}

double expected_mutual_information(const ContingencyTable& table) {
    if (table.total < 1) throw error(errc::empty_table, "expected mutual information needs at least one sample");
    const std::int64_t N = table.total;
    const double n = static_cast<double>(N);
    const double log_n = std::log(n);

    std::vector<double> log_fact(static_cast<std::size_t>(N) + 1, 0.0);
    for (std::size_t v = 2; v < log_fact.size(); ++v)
        log_fact[v] = log_fact[v - 1] + std::log(static_cast<double>(v));

    double emi = 0.0;
    for (std::size_t i = 0; i < table.rows; ++i) {
        const std::int64_t a = table.row_sums[i];
        if (a == 0) continue;
        for (std::size_t j = 0; j < table.cols; ++j) {
            const std::int64_t b = table.col_sums[j];
            if (b == 0) continue;
            const std::int64_t lo = std::max<std::int64_t>(1, a + b - N);
            const std::int64_t hi = std::min(a, b);
            const double log_ab = std::log(static_cast<double>(a)) + std::log(static_cast<double>(b));
            // Constant part of the hypergeometric log-probability for (a, b).
            const double base = log_fact[a] + log_fact[b] + log_fact[N - a] + log_fact[N - b] - log_fact[N];
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const double log_p = base - log_fact[nij] - log_fact[a - nij] - log_fact[b - nij] -
                                     log_fact[N - a - b + nij];
                const double info = log_n + std::log(static_cast<double>(nij)) - log_ab;
                emi += (static_cast<double>(nij) / n) * info * std::exp(log_p);
            }
        }
    }
    return emi;
}

double ami(const ContingencyTable& table) {
    if (table.total < 1) throw error(errc::empty_table, "ami needs at least one sample");
    const double mi = mutual_information(table);
    const double emi = expected_mutual_information(table);
    const double mean_h = 0.5 * (row_entropy(table) + col_entropy(table));
    const double denom = mean_h - emi;
    const double num = mi - emi;
    if (std::abs(denom) < 1e-14) {
        // mean_h == emi forces both margins trivial, i.e. the partitions are
        // identical; scored 1.0 by convention.
        return std::abs(num) < 1e-14 ? 1.0 : 0.0;
    }
    return num / denom;
}

double ami(const ClusterAssignment& pred, std::span<const ClassId> truth) {
    return ami(contingency(pred, truth));
}

double ari(std::span<const ClassId> a, std::span<const ClassId> b) {
    if (a.size() != b.size())
        throw error(errc::length_mismatch,
                    "partitions of " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " samples");
    if (a.size() < 2) throw error(errc::too_few_samples, "ari needs at least 2 samples");

    const ContingencyTable t = contingency(a, b);
    std::int64_t index = 0, sum_a = 0, sum_b = 0;
    for (std::int64_t c : t.counts) index += pairs2(c);
    for (std::int64_t s : t.row_sums) sum_a += pairs2(s);
    for (std::int64_t s : t.col_sums) sum_b += pairs2(s);
    const std::int64_t all_pairs = pairs2(t.total);

    // Exact integer arithmetic: terms reach ~(N^2/2)^2, safe in 128 bits for
    // the supported envelope (n <= 20,000).
    __extension__ using wide = __int128;
    const wide num = 2 * (wide(index) * all_pairs - wide(sum_a) * sum_b);
    const wide den = wide(sum_a + sum_b) * all_pairs - 2 * wide(sum_a) * sum_b;
    if (den == 0) {
        // Both partitions all-singletons or both single-cluster: identical.
        return 1.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

double ari(const ClusterAssignment& a, const ClusterAssignment& b) {
    return ari(std::span<const ClassId>(a.labels), std::span<const ClassId>(b.labels));
}

}  // namespace clusterlens
