#pragma once

#include "cmlsim/types.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cmlsim::data {

// Frequency-ranked token dictionary: rank 0 is the most frequent token,
// ties broken by earliest first occurrence in the corpus.
struct Vocabulary {
    std::unordered_map<std::string, FeatureIndex> rank_of;
    std::size_t num_words = 0;
};

struct DatasetSplit {
    std::vector<LabeledSample> initial_train;
    std::vector<LabeledSample> submission_pool;
    std::vector<LabeledSample> test;
};

// Lowercases and splits on runs of non-alphanumeric characters.
std::vector<std::string> tokenize(std::string_view text);

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& corpus,
                            std::size_t num_words);

// Ranks of in-vocabulary tokens, sorted and de-duplicated.
std::vector<FeatureIndex> featurize(std::span<const std::string> tokens,
                                    const Vocabulary& vocab);

// Indexed corpus file: one `<label>\t<comma-separated indices>` sample per
// line; blank lines ignored, `#` starts a comment line. Index i means the
// i-th most frequent word, so truncation to num_words simply drops indices
// >= num_words from each sample.
std::vector<LabeledSample> load_indexed(const std::filesystem::path& path,
                                        std::size_t num_words);
void save_indexed(const std::filesystem::path& path,
                  std::span<const LabeledSample> samples);

// Raw-text corpus: one `<label>\t<document>` per line. Builds the vocabulary
// from the corpus itself and featurizes every document with it. The built
// vocabulary is returned through out_vocab when non-null.
std::vector<LabeledSample> load_raw_text(const std::filesystem::path& path,
                                         std::size_t num_words,
                                         Vocabulary* out_vocab = nullptr);

// Featurizes a raw-text file against an existing vocabulary (held-out files
// must share the training corpus ranks).
std::vector<LabeledSample> load_raw_text_with(const std::filesystem::path& path,
                                              const Vocabulary& vocab);

// Seed-deterministic shuffle, then carve off test_fraction as the test set
// and train_size of the remainder as the initial training set (round half
// up). The three parts are disjoint and exhaustive.
DatasetSplit split(std::vector<LabeledSample> dataset,
                   double train_size,
                   double test_fraction,
                   std::uint64_t seed);

// Deterministic linearly separable corpus: each sample is a random subset
// of [0, num_words), labeled 1 iff it holds more indices from the first
// half than the second (ties are redrawn). The weight vector +1 on the
// first half / -1 on the second separates it exactly; classes are kept
// balanced to within one sample.
std::vector<LabeledSample> synthesize(std::size_t n,
                                      std::size_t num_words,
                                      std::uint64_t seed);

} // namespace cmlsim::data
