#include "cmlsim/model.hpp"

#include "cmlsim/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace cmlsim {

SparsePerceptron::SparsePerceptron(std::size_t num_words)
    : weights_(num_words, 0.0) {}

SparsePerceptron::SparsePerceptron(std::vector<double> weights, double bias)
    : weights_(std::move(weights)), bias_(bias) {}

Label SparsePerceptron::predict(std::span<const FeatureIndex> features) const {
    double score = bias_;
    for (FeatureIndex i : features) {
        if (i >= weights_.size()) {
            throw std::out_of_range("feature out of range");
        }
        score += weights_[i];
    }
    return score > 0.0 ? 1 : 0;
}

bool SparsePerceptron::train_one(const LabeledSample& sample) {
    const int delta = sample.label - predict(sample.features);
    if (delta == 0) {
        return false;
    }
    for (FeatureIndex i : sample.features) {
        weights_[i] += delta;
    }
    bias_ += delta;
    return true;
}

nlohmann::json SparsePerceptron::to_json() const {
    nlohmann::json nonzero = nlohmann::json::array();
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] != 0.0) {
            nonzero.push_back({i, weights_[i]});
        }
    }
    return {{"num_words", weights_.size()}, {"bias", bias_}, {"weights", nonzero}};
}

SparsePerceptron update(const SparsePerceptron& model, const LabeledSample& sample) {
    SparsePerceptron next = model;
    next.train_one(sample);
    return next;
}

SparsePerceptron fit_initial(std::span<const LabeledSample> dataset,
                             std::size_t num_words,
                             int max_epochs,
                             std::uint64_t seed) {
    if (dataset.empty()) {
        throw std::runtime_error("empty training set");
    }
    if (max_epochs < 1) {
        throw std::invalid_argument("max_epochs must be >= 1");
    }
    SparsePerceptron model(num_words);
    RngStream order(seed, "fit_initial");
    std::vector<std::size_t> visit(dataset.size());
    std::iota(visit.begin(), visit.end(), std::size_t{0});
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        order.shuffle(visit);
        std::size_t mistakes = 0;
        for (std::size_t idx : visit) {
            mistakes += model.train_one(dataset[idx]) ? 1 : 0;
        }
        if (mistakes == 0) {
            break;
        }
    }
    return model;
}

double evaluate(const SparsePerceptron& model, std::span<const LabeledSample> dataset) {
    if (dataset.empty()) {
        throw std::runtime_error("empty evaluation set");
    }
    std::size_t correct = 0;
    for (const LabeledSample& sample : dataset) {
        correct += model.predict(sample.features) == sample.label ? 1 : 0;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(dataset.size());
}

} // namespace cmlsim
