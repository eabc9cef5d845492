#include "clusterlens/probe.hpp"

#include <algorithm>
#include <cmath>

#include "clusterlens/errors.hpp"

namespace clusterlens {

namespace {

// Writes softmax(W^T x + b) for one sample into probs; returns log of the
// probability of class `target` (computed via log-sum-exp, no underflow).
double sample_softmax(const double* row, std::size_t d, std::span<const double> weights,
                      std::span<const double> bias, std::size_t n_classes, std::size_t target,
                      std::vector<double>& probs) {
    for (std::size_t c = 0; c < n_classes; ++c) probs[c] = bias[c];
    for (std::size_t t = 0; t < d; ++t) {
        const double x = row[t];
        if (x == 0.0) continue;
        const double* w = weights.data() + t * n_classes;
        for (std::size_t c = 0; c < n_classes; ++c) probs[c] += x * w[c];
    }
    const double top = *std::max_element(probs.begin(), probs.begin() + n_classes);
    double sum = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        probs[c] = std::exp(probs[c] - top);
        sum += probs[c];
    }
    const double log_target = std::log(probs[target] / sum);
    for (std::size_t c = 0; c < n_classes; ++c) probs[c] /= sum;
    return log_target;
}

}  // namespace

ProbeProblem make_probe_problem(const EmbeddingMatrix& X, std::span<const ClassId> y,
                                double weight_decay) {
    if (X.n != y.size())
        throw error(errc::dimension_mismatch,
                    "matrix has " + std::to_string(X.n) + " rows, labels have " + std::to_string(y.size()));
    std::vector<ClassId> classes(y.begin(), y.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() < 2)
        throw error(errc::single_class, "labels cover " + std::to_string(classes.size()) + " class(es), need >= 2");
    if (X.n < classes.size())
        throw error(errc::dimension_mismatch,
                    std::to_string(X.n) + " samples for " + std::to_string(classes.size()) + " classes");

    ProbeProblem p;
    p.n = X.n;
    p.d = X.d;
    p.n_classes = classes.size();
    p.X = &X;
    p.classes = std::move(classes);
    p.weight_decay = weight_decay;
    p.y_enc.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        p.y_enc[i] = static_cast<std::size_t>(
            std::lower_bound(p.classes.begin(), p.classes.end(), y[i]) - p.classes.begin());
    return p;
}

double ProbeProblem::loss(std::span<const double> weights, std::span<const double> bias) const {
    std::vector<double> probs(n_classes);
    double ce = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        ce -= sample_softmax(X->data.data() + i * d, d, weights, bias, n_classes, y_enc[i], probs);
    ce /= static_cast<double>(n);
    double penalty = 0.0;
    for (double w : weights) penalty += w * w;
    return ce + 0.5 * weight_decay * penalty;
}

void ProbeProblem::gradient(std::span<const double> weights, std::span<const double> bias,
                            std::span<double> grad_weights, std::span<double> grad_bias) const {
    std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
    std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
    std::vector<double> probs(n_classes);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = X->data.data() + i * d;
        sample_softmax(row, d, weights, bias, n_classes, y_enc[i], probs);
        probs[y_enc[i]] -= 1.0;  // residual p - onehot(y)
        for (std::size_t t = 0; t < d; ++t) {
            const double x = row[t];
            if (x == 0.0) continue;
            double* g = grad_weights.data() + t * n_classes;
            for (std::size_t c = 0; c < n_classes; ++c) g[c] += x * probs[c];
        }
        for (std::size_t c = 0; c < n_classes; ++c) grad_bias[c] += probs[c];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < grad_weights.size(); ++t)
        grad_weights[t] = grad_weights[t] * inv_n + weight_decay * weights[t];
    for (std::size_t c = 0; c < n_classes; ++c) grad_bias[c] *= inv_n;
}

ProbeModel fit_probe(const EmbeddingMatrix& X, std::span<const ClassId> y, const ProbeOptions& options) {
    const ProbeProblem problem = make_probe_problem(X, y, options.weight_decay);
    const std::size_t wsize = problem.d * problem.n_classes;

    std::vector<double> weights(wsize, 0.0);
    std::vector<double> bias(problem.n_classes, 0.0);
    if (!options.init_weights.empty()) {
        if (options.init_weights.size() != wsize)
            throw error(errc::dimension_mismatch, "initial weights have the wrong size");
        std::copy(options.init_weights.begin(), options.init_weights.end(), weights.begin());
    }
    if (!options.init_bias.empty()) {
        if (options.init_bias.size() != problem.n_classes)
            throw error(errc::dimension_mismatch, "initial bias has the wrong size");
        std::copy(options.init_bias.begin(), options.init_bias.end(), bias.begin());
    }

    std::vector<double> grad_w(wsize), grad_b(problem.n_classes);
    std::vector<double> trial_w(wsize), trial_b(problem.n_classes);

    double loss = problem.loss(weights, bias);
    double grad_norm = 0.0;
    std::size_t iters = 0;
    double step = 1.0;

    for (; iters < options.max_iters; ++iters) {
        problem.gradient(weights, bias, grad_w, grad_b);
        double sq = 0.0;
        for (double g : grad_w) sq += g * g;
        for (double g : grad_b) sq += g * g;
        grad_norm = std::sqrt(sq);
        if (grad_norm < options.tol) break;

        // Armijo backtracking along -grad; grow the step back between
        // iterations so well-conditioned problems keep long steps.
        step = std::min(step * 2.0, 1e6);
        constexpr double c1 = 1e-4;
        bool accepted = false;
        while (step > 1e-20) {
            for (std::size_t t = 0; t < wsize; ++t) trial_w[t] = weights[t] - step * grad_w[t];
            for (std::size_t c = 0; c < problem.n_classes; ++c) trial_b[c] = bias[c] - step * grad_b[c];
            const double trial_loss = problem.loss(trial_w, trial_b);
            if (trial_loss <= loss - c1 * step * sq) {
                weights.swap(trial_w);
                bias.swap(trial_b);
                loss = trial_loss;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent step at machine precision
    }

    ProbeModel model;
    model.d = problem.d;
    model.classes = problem.classes;
    model.weights = std::move(weights);
    model.bias = std::move(bias);
    model.iterations = iters;
    model.final_loss = loss;
    model.final_grad_norm = grad_norm;
    return model;
}

double probe_accuracy(const ProbeModel& model, const EmbeddingMatrix& X, std::span<const ClassId> y) {
    if (X.n != y.size())
        throw error(errc::dimension_mismatch,
                    "matrix has " + std::to_string(X.n) + " rows, labels have " + std::to_string(y.size()));
    if (X.d != model.d)
        throw error(errc::dimension_mismatch,
                    "matrix has d = " + std::to_string(X.d) + ", model expects " + std::to_string(model.d));
    if (X.n == 0) throw error(errc::empty_dataset, "no samples to score");

    const std::size_t n_classes = model.classes.size();
    std::vector<double> logits(n_classes);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < X.n; ++i) {
        const double* row = X.data.data() + i * X.d;
        for (std::size_t c = 0; c < n_classes; ++c) logits[c] = model.bias[c];
        for (std::size_t t = 0; t < X.d; ++t) {
            const double x = row[t];
            if (x == 0.0) continue;
            const double* w = model.weights.data() + t * n_classes;
            for (std::size_t c = 0; c < n_classes; ++c) logits[c] += x * w[c];
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < n_classes; ++c)
            if (logits[c] > logits[best]) best = c;  // ties keep the lowest id
        if (model.classes[best] == y[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(X.n);
}

}  // namespace clusterlens
