#include "txnembed/tokens.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace txnembed::tokens {

namespace {

std::string format_boundary(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string bin_label(const std::string& category, const std::string& lo, const std::string& hi) {
    return category + "_" + lo + ":" + hi;
}

// Linear-interpolation empirical quantile over sorted values.
double quantile(const std::vector<double>& sorted, double q) {
    const auto m = sorted.size();
    if (m == 1) return sorted[0];
    const double h = q * static_cast<double>(m - 1);
    const auto lo = static_cast<size_t>(std::floor(h));
    if (lo + 1 >= m) return sorted[m - 1];
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

int BinDictionary::assign_bin(int category, double value) const {
    const auto& bins = per_category[static_cast<size_t>(category)];
    // (lo, hi] intervals: the first boundary >= value identifies the bin.
    auto it = std::lower_bound(bins.boundaries.begin(), bins.boundaries.end(), value);
    return static_cast<int>(it - bins.boundaries.begin());
}

int BinDictionary::token_of(int category, int bin) const {
    return first_token[static_cast<size_t>(category)] + bin;
}

BinDictionary fit_bins(const TransactionTable& table, int n_bins) {
    if (n_bins < 2) throw std::invalid_argument("fit_bins requires n_bins >= 2");
    BinDictionary dict;
    dict.per_category.resize(static_cast<size_t>(table.cols()));
    dict.first_token.resize(static_cast<size_t>(table.cols()));

    for (Eigen::Index k = 0; k < table.cols(); ++k) {
        auto& bins = dict.per_category[static_cast<size_t>(k)];
        bins.category = table.categories[static_cast<size_t>(k)];
        dict.first_token[static_cast<size_t>(k)] = dict.n_tokens();

        std::vector<double> values;
        for (Eigen::Index i = 0; i < table.rows(); ++i)
            if (table.is_present(i, k)) values.push_back(table.values(i, k));
        if (values.empty()) {
            bins.skipped = true;
            continue;
        }
        std::sort(values.begin(), values.end());

        // Interior percentiles, deduplicated at label precision so that
        // label <-> (category, bin) stays bijective. A boundary at the data
        // maximum would leave an empty top bin, so ties there also collapse
        // (all-identical values end up with a single bin).
        std::vector<double> boundaries;
        std::vector<std::string> formatted;
        for (int b = 1; b < n_bins; ++b) {
            const double q = static_cast<double>(b) / static_cast<double>(n_bins);
            const double boundary = quantile(values, q);
            if (boundary >= values.back()) continue;
            const std::string f = format_boundary(boundary);
            if (!formatted.empty() && formatted.back() == f) continue;
            boundaries.push_back(boundary);
            formatted.push_back(f);
        }
        bins.boundaries = boundaries;

        std::string lo = "-inf";
        for (size_t b = 0; b < boundaries.size(); ++b) {
            bins.labels.push_back(bin_label(bins.category, lo, formatted[b]));
            lo = formatted[b];
        }
        bins.labels.push_back(bin_label(bins.category, lo, "+inf"));
        for (const auto& l : bins.labels) dict.token_labels.push_back(l);
    }
    return dict;
}

long TokenCorpus::total_tokens() const {
    long total = 0;
    for (const auto& bag : bags) total += static_cast<long>(bag.size());
    return total;
}

size_t TokenCorpus::max_bag_size() const {
    size_t m = 0;
    for (const auto& bag : bags) m = std::max(m, bag.size());
    return m;
}

TokenCorpus tokenize(const TransactionTable& table, const BinDictionary& dict) {
    if (static_cast<Eigen::Index>(dict.per_category.size()) != table.cols())
        throw std::invalid_argument("bin dictionary fitted on a different category count");
    TokenCorpus corpus;
    corpus.vocab = dict.token_labels;
    corpus.bags.resize(static_cast<size_t>(table.rows()));
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        auto& bag = corpus.bags[static_cast<size_t>(i)];
        for (Eigen::Index k = 0; k < table.cols(); ++k) {
            if (!table.is_present(i, k)) continue;
            if (dict.per_category[static_cast<size_t>(k)].skipped) {
                ++corpus.skipped_cells;
                continue;
            }
            const int bin = dict.assign_bin(static_cast<int>(k), table.values(i, k));
            bag.push_back(dict.token_of(static_cast<int>(k), bin));
        }
    }
    return corpus;
}

void save_corpus(const std::string& path, const TokenCorpus& corpus) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    for (const auto& bag : corpus.bags) {
        for (size_t i = 0; i < bag.size(); ++i) {
            if (i) out << ' ';
            out << corpus.vocab[static_cast<size_t>(bag[i])];
        }
        out << '\n';
    }
}

TokenCorpus load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    TokenCorpus corpus;
    std::map<std::string, int> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        corpus.bags.emplace_back();
        std::istringstream ss(line);
        std::string token;
        while (ss >> token) {
            auto [it, inserted] = ids.emplace(token, static_cast<int>(corpus.vocab.size()));
            if (inserted) corpus.vocab.push_back(token);
            corpus.bags.back().push_back(it->second);
        }
    }
    return corpus;
}

}  // namespace txnembed::tokens
