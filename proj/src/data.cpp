#include "cmlsim/data.hpp"

#include "cmlsim/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cmlsim::data {

namespace {

std::runtime_error line_error(const char* what, std::size_t line_no) {
    return std::runtime_error(std::string(what) + " at line " + std::to_string(line_no));
}

void sort_unique(std::vector<FeatureIndex>& indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
}

std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& corpus,
                            std::size_t num_words) {
    struct TokenStat {
        std::size_t count = 0;
        std::size_t first_seen = 0;
    };
    std::unordered_map<std::string, TokenStat> stats;
    std::size_t position = 0;
    for (const auto& doc : corpus) {
        for (const auto& token : doc) {
            auto [it, inserted] = stats.try_emplace(token);
            if (inserted) {
                it->second.first_seen = position;
            }
            ++it->second.count;
            ++position;
        }
    }
    if (stats.size() < num_words) {
        throw std::runtime_error("vocabulary underflow");
    }
    std::vector<std::pair<std::string, TokenStat>> ranked(stats.begin(), stats.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second.count != b.second.count) {
            return a.second.count > b.second.count;
        }
        return a.second.first_seen < b.second.first_seen;
    });
    Vocabulary vocab;
    vocab.num_words = num_words;
    vocab.rank_of.reserve(num_words);
    for (std::size_t rank = 0; rank < num_words; ++rank) {
        vocab.rank_of.emplace(ranked[rank].first, static_cast<FeatureIndex>(rank));
    }
    return vocab;
}

std::vector<FeatureIndex> featurize(std::span<const std::string> tokens,
                                    const Vocabulary& vocab) {
    std::vector<FeatureIndex> indices;
    for (const auto& token : tokens) {
        auto it = vocab.rank_of.find(token);
        if (it != vocab.rank_of.end()) {
            indices.push_back(it->second);
        }
    }
    sort_unique(indices);
    return indices;
}

std::vector<LabeledSample> load_indexed(const std::filesystem::path& path,
                                        std::size_t num_words) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset file: " + path.string());
    }
    std::vector<LabeledSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::size_t tab = line.find('\t');
        const std::string label_part = line.substr(0, tab);
        std::size_t consumed = 0;
        long label = 0;
        try {
            label = std::stol(label_part, &consumed);
        } catch (const std::exception&) {
            throw line_error("parse error", line_no);
        }
        if (consumed != label_part.size() || label_part.empty()) {
            throw line_error("parse error", line_no);
        }
        if (label != 0 && label != 1) {
            throw line_error("invalid label", line_no);
        }
        LabeledSample sample;
        sample.label = static_cast<Label>(label);
        if (tab != std::string::npos) {
            std::size_t begin = tab + 1;
            while (begin <= line.size()) {
                std::size_t end = line.find(',', begin);
                if (end == std::string::npos) {
                    end = line.size();
                }
                const std::string field = line.substr(begin, end - begin);
                if (!field.empty()) {
                    unsigned long idx = 0;
                    try {
                        idx = std::stoul(field, &consumed);
                    } catch (const std::exception&) {
                        throw line_error("parse error", line_no);
                    }
                    if (consumed != field.size()) {
                        throw line_error("parse error", line_no);
                    }
                    if (idx < num_words) {
                        sample.features.push_back(static_cast<FeatureIndex>(idx));
                    }
                } else if (end != line.size()) {
                    throw line_error("parse error", line_no);
                }
                if (end == line.size()) {
                    break;
                }
                begin = end + 1;
            }
        }
        sort_unique(sample.features);
        samples.push_back(std::move(sample));
    }
    return samples;
}

void save_indexed(const std::filesystem::path& path,
                  std::span<const LabeledSample> samples) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write dataset file: " + path.string());
    }
    for (const LabeledSample& sample : samples) {
        out << sample.label << '\t';
        for (std::size_t i = 0; i < sample.features.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            out << sample.features[i];
        }
        out << '\n';
    }
}

namespace {

struct RawCorpus {
    std::vector<Label> labels;
    std::vector<std::vector<std::string>> docs;
};

RawCorpus parse_raw_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset file: " + path.string());
    }
    RawCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw line_error("parse error", line_no);
        }
        const std::string label_part = line.substr(0, tab);
        if (label_part != "0" && label_part != "1") {
            throw line_error("invalid label", line_no);
        }
        corpus.labels.push_back(label_part == "1" ? 1 : 0);
        corpus.docs.push_back(tokenize(std::string_view(line).substr(tab + 1)));
    }
    return corpus;
}

std::vector<LabeledSample> featurize_corpus(const RawCorpus& corpus, const Vocabulary& vocab) {
    std::vector<LabeledSample> samples;
    samples.reserve(corpus.docs.size());
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
        samples.push_back({featurize(corpus.docs[i], vocab), corpus.labels[i]});
    }
    return samples;
}

} // namespace

std::vector<LabeledSample> load_raw_text(const std::filesystem::path& path,
                                         std::size_t num_words,
                                         Vocabulary* out_vocab) {
    const RawCorpus corpus = parse_raw_lines(path);
    Vocabulary vocab = build_vocabulary(corpus.docs, num_words);
    std::vector<LabeledSample> samples = featurize_corpus(corpus, vocab);
    if (out_vocab != nullptr) {
        *out_vocab = std::move(vocab);
    }
    return samples;
}

std::vector<LabeledSample> load_raw_text_with(const std::filesystem::path& path,
                                              const Vocabulary& vocab) {
    return featurize_corpus(parse_raw_lines(path), vocab);
}

DatasetSplit split(std::vector<LabeledSample> dataset,
                   double train_size,
                   double test_fraction,
                   std::uint64_t seed) {
    RngStream order(seed, "split");
    order.shuffle(dataset);

    const std::size_t n = dataset.size();
    const std::size_t test_count = round_half_up(test_fraction * static_cast<double>(n));
    if (test_count > n || (test_fraction > 0.0 && test_count == 0)) {
        throw std::runtime_error("degenerate split");
    }
    const std::size_t remainder = n - test_count;
    const std::size_t train_count =
        round_half_up(train_size * static_cast<double>(remainder));
    if (train_count == 0 || train_count >= remainder) {
        throw std::runtime_error("degenerate split");
    }

    DatasetSplit parts;
    parts.test.assign(dataset.begin(), dataset.begin() + static_cast<std::ptrdiff_t>(test_count));
    parts.initial_train.assign(dataset.begin() + static_cast<std::ptrdiff_t>(test_count),
                               dataset.begin() + static_cast<std::ptrdiff_t>(test_count + train_count));
    parts.submission_pool.assign(dataset.begin() + static_cast<std::ptrdiff_t>(test_count + train_count),
                                 dataset.end());
    return parts;
}

std::vector<LabeledSample> synthesize(std::size_t n,
                                      std::size_t num_words,
                                      std::uint64_t seed) {
    RngStream rng(seed, "synthesize");
    const std::size_t first_size = num_words / 2;
    const std::size_t second_size = num_words - first_size;
    const std::size_t side_cap = std::min(first_size, second_size);
    const std::uint64_t k_max = std::clamp<std::uint64_t>(num_words / 4, 4, 12);
    const std::uint64_t k_min = std::max<std::uint64_t>(4, k_max / 2);

    // Word frequencies follow a power law, so rank draws within each half
    // are skewed the same way.
    auto make_cumulative = [](std::size_t size) {
        std::vector<double> cumulative(size);
        double total = 0.0;
        for (std::size_t rank = 0; rank < size; ++rank) {
            total += std::pow(static_cast<double>(rank + 1), -1.3);
            cumulative[rank] = total;
        }
        return cumulative;
    };
    const std::vector<double> first_cum = make_cumulative(first_size);
    const std::vector<double> second_cum = make_cumulative(second_size);

    auto draw_rank = [&rng](const std::vector<double>& cumulative) {
        const double u = rng.next_double() * cumulative.back();
        return static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    };

    // The half-count difference (the vote the labeling rule counts) is drawn
    // directly and kept away from zero, so no sample sits on the separator's
    // edge.
    auto draw_sample = [&]() {
        LabeledSample sample;
        for (;;) {
            sample.features.clear();
            std::ptrdiff_t majority =
                static_cast<std::ptrdiff_t>(3 + rng.uniform_below(3));
            majority = std::min<std::ptrdiff_t>(majority,
                                                static_cast<std::ptrdiff_t>(side_cap));
            std::uint64_t k = k_min + rng.uniform_below(k_max - k_min + 1);
            k = std::max(k, static_cast<std::uint64_t>(majority));
            k += (k + static_cast<std::uint64_t>(majority)) % 2; // match parity
            std::size_t k_hi = static_cast<std::size_t>(
                (k + static_cast<std::uint64_t>(majority)) / 2);
            if (k_hi > side_cap) {
                k_hi = side_cap;
            }
            const std::size_t k_lo = k_hi - static_cast<std::size_t>(majority);

            const bool positive = rng.uniform_below(2) == 1;
            const auto& hi_cum = positive ? first_cum : second_cum;
            const auto& lo_cum = positive ? second_cum : first_cum;
            const FeatureIndex hi_base = positive ? 0 : static_cast<FeatureIndex>(first_size);
            const FeatureIndex lo_base = positive ? static_cast<FeatureIndex>(first_size) : 0;

            auto draw_distinct = [&](const std::vector<double>& cumulative,
                                     FeatureIndex base, std::size_t count) {
                std::size_t placed = 0;
                while (placed < count) {
                    const auto idx = static_cast<FeatureIndex>(base + draw_rank(cumulative));
                    if (std::find(sample.features.begin(), sample.features.end(), idx) ==
                        sample.features.end()) {
                        sample.features.push_back(idx);
                        ++placed;
                    }
                }
            };
            draw_distinct(hi_cum, hi_base, k_hi);
            draw_distinct(lo_cum, lo_base, k_lo);

            std::ptrdiff_t vote = 0;
            for (FeatureIndex idx : sample.features) {
                vote += idx < first_size ? 1 : -1;
            }
            if (vote != 0) {
                sample.label = vote > 0 ? 1 : 0;
                std::sort(sample.features.begin(), sample.features.end());
                return sample;
            }
            // equal counts: not separable by the half-split vector, redraw
        }
    };

    std::vector<LabeledSample> samples;
    samples.reserve(n);
    std::size_t quota[2] = {n - n / 2, n / 2}; // zeros, ones
    while (samples.size() < n) {
        LabeledSample sample = draw_sample();
        if (quota[sample.label] == 0) {
            continue;
        }
        --quota[sample.label];
        samples.push_back(std::move(sample));
    }
    return samples;
}

} // namespace cmlsim::data
