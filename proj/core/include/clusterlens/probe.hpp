#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clusterlens/embedding.hpp"
#include "clusterlens/labels.hpp"

namespace clusterlens {

/// Multinomial logistic-regression probe: softmax(W^T x + b) over the
/// distinct label values seen at fit time.
struct ProbeModel {
    std::size_t d = 0;
    std::vector<ClassId> classes;  // sorted unique label values
    std::vector<double> weights;   // d x C row-major
    std::vector<double> bias;      // C
    std::size_t iterations = 0;
    double final_loss = 0.0;
    double final_grad_norm = 0.0;
};

/// Encoded training objective: mean cross-entropy plus
/// 0.5 * weight_decay * ||W||_F^2 (bias excluded from the penalty).
/// Exposed separately so the gradient can be checked against finite
/// differences at arbitrary parameter values.
struct ProbeProblem {
    std::size_t n = 0, d = 0, n_classes = 0;
    const EmbeddingMatrix* X = nullptr;
    std::vector<std::size_t> y_enc;  // 0..C-1 per sample
    std::vector<ClassId> classes;
    double weight_decay = 0.0;

    double loss(std::span<const double> weights, std::span<const double> bias) const;
    void gradient(std::span<const double> weights, std::span<const double> bias,
                  std::span<double> grad_weights, std::span<double> grad_bias) const;
};

/// Throws SingleClass when labels cover < 2 classes and DimensionMismatch
/// when n < C or shapes disagree.
ProbeProblem make_probe_problem(const EmbeddingMatrix& X, std::span<const ClassId> y,
                                double weight_decay);

struct ProbeOptions {
    double weight_decay = 1e-4;
    std::size_t max_iters = 1000;
    double tol = 1e-7;                        // stop when gradient norm drops below
    std::span<const double> init_weights = {};  // optional d*C start (default zeros)
    std::span<const double> init_bias = {};     // optional C start
};

/// Full-batch gradient descent with Armijo backtracking from zero init.
/// The loss is non-increasing across accepted steps, and with
/// weight_decay > 0 the problem is strictly convex, so the fit is unique.
ProbeModel fit_probe(const EmbeddingMatrix& X, std::span<const ClassId> y,
                     const ProbeOptions& options = {});

/// Fraction of argmax predictions (ties: lowest class id) equal to labels.
/// Labels outside the model's class set count as misses.
double probe_accuracy(const ProbeModel& model, const EmbeddingMatrix& X,
                      std::span<const ClassId> y);

}  // namespace clusterlens
