#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clusterlens/assignment.hpp"
#include "clusterlens/labels.hpp"

namespace clusterlens {

/// R x C count matrix of clusters (rows) against classes (columns), with
/// margins. Row/column order follows ascending original ids.
struct ContingencyTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::int64_t> counts;  // row-major, rows*cols
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t total = 0;

    std::int64_t at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
};

ContingencyTable contingency(std::span<const ClassId> pred, std::span<const ClassId> truth);
ContingencyTable contingency(const ClusterAssignment& pred, std::span<const ClassId> truth);

/// Fraction of samples covered by each cluster's majority class.
double purity(const ContingencyTable& table);

/// Mutual information of the two partitions, in nats (0 ln 0 = 0).
double mutual_information(const ContingencyTable& table);

/// Shannon entropies (nats) of the row/column marginal distributions.
double row_entropy(const ContingencyTable& table);
double col_entropy(const ContingencyTable& table);

/// Expectation of mutual_information under the fixed-margins permutation
/// null: each cell count follows a hypergeometric law, summed exactly in
/// log space via a log-factorial table (binomials overflow doubles near
/// N ~ 1e4 otherwise).
double expected_mutual_information(const ContingencyTable& table);

/// (MI - EMI) / (mean(H_row, H_col) - EMI). A zero denominator only occurs
/// when both partitions are trivial and therefore identical; that scores
/// 1.0 by convention.
double ami(const ContingencyTable& table);
double ami(const ClusterAssignment& pred, std::span<const ClassId> truth);

/// Chance-corrected pairwise agreement between two partitions of the same
/// samples. Identical degenerate partitions score 1.0 by convention.
double ari(const ClusterAssignment& a, const ClusterAssignment& b);
double ari(std::span<const ClassId> a, std::span<const ClassId> b);

}  // namespace clusterlens
