#pragma once

#include "txnembed/types.hpp"

#include <string>
#include <vector>

namespace txnembed::tokens {

/// Per-category percentile bins. Bin i covers (boundaries[i-1], boundaries[i]]
/// with open-ended first and last bins; a value exactly on a boundary goes to
/// the lower bin. Labels are `<CAT>_<lo>:<hi>` with fixed two-decimal
/// formatting and -inf/+inf for the open ends.
struct CategoryBins {
    std::string category;
    std::vector<double> boundaries;  // strictly increasing
    std::vector<std::string> labels;  // boundaries.size() + 1 entries
    bool skipped = false;             // no present values at fit time
};

struct BinDictionary {
    std::vector<CategoryBins> per_category;
    std::vector<std::string> token_labels;  // global token id -> label
    std::vector<int> first_token;           // category -> id of its first bin

    int n_tokens() const { return static_cast<int>(token_labels.size()); }
    /// Bin index for a value within a category (monotone in the value).
    int assign_bin(int category, double value) const;
    int token_of(int category, int bin) const;
};

/// Boundaries at the n_bins-1 interior empirical percentiles
/// (linear-interpolation quantiles) of the present values per category.
/// Boundaries that collapse to the same label are merged, so ties reduce the
/// bin count; categories with no present values are skipped and recorded.
BinDictionary fit_bins(const TransactionTable& table, int n_bins);

struct TokenCorpus {
    std::vector<std::vector<int>> bags;  // per client, bag of token ids
    std::vector<std::string> vocab;      // token id -> label
    long skipped_cells = 0;              // present cells in skipped categories

    long total_tokens() const;
    size_t max_bag_size() const;
};

/// One token per present cell, none for absent cells. Client order matches the
/// table.
TokenCorpus tokenize(const TransactionTable& table, const BinDictionary& dict);

/// One line per client, space-separated token labels.
void save_corpus(const std::string& path, const TokenCorpus& corpus);
TokenCorpus load_corpus(const std::string& path);

}  // namespace txnembed::tokens
