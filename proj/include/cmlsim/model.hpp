#pragma once

#include "cmlsim/types.hpp"

#include <span>
#include <vector>

#include "json.hpp"

namespace cmlsim {

// Single-layer perceptron over binary bag-of-words features. Mistake-driven
// unit-step updates from a zero start keep every weight an exact integer,
// so two runs of the same sequence compare bit-identically.
class SparsePerceptron {
public:
    SparsePerceptron() = default;
    explicit SparsePerceptron(std::size_t num_words);
    SparsePerceptron(std::vector<double> weights, double bias);

    std::size_t num_words() const { return weights_.size(); }
    double bias() const { return bias_; }
    const std::vector<double>& weights() const { return weights_; }

    // 1 if bias + sum of active weights > 0, else 0 (ties predict 0).
    Label predict(std::span<const FeatureIndex> features) const;

    // One Rosenblatt update in place; returns true if the sample was
    // misclassified (i.e. the weights changed).
    bool train_one(const LabeledSample& sample);

    // {"num_words": n, "bias": b, "weights": [[index, value], ...]} with
    // only the non-zero weights listed.
    nlohmann::json to_json() const;

    bool operator==(const SparsePerceptron&) const = default;

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
};

// Value-semantics form of train_one: returns the successor model.
SparsePerceptron update(const SparsePerceptron& model, const LabeledSample& sample);

// Batch training from the zero model: seed-deterministic shuffle per epoch,
// stops at the first mistake-free epoch or after max_epochs.
SparsePerceptron fit_initial(std::span<const LabeledSample> dataset,
                             std::size_t num_words,
                             int max_epochs,
                             std::uint64_t seed);

// Accuracy in percent over a non-empty dataset.
double evaluate(const SparsePerceptron& model, std::span<const LabeledSample> dataset);

} // namespace cmlsim
