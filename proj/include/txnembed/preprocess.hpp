#pragma once

#include "txnembed/types.hpp"

namespace txnembed::preprocess {

/// Row-wise normalization options, treated as hyperparameters. Exactly one
/// mode applies per run; chained modes are a configuration error.
enum class PreprocMode {
    binarize,        // token "bin":     x -> |sgn(x)| after absent -> 0
    l2_normalize,    // token "l2":      row scaled to unit L2 norm, zero rows kept
    log_normalize,   // token "log":     sign(x) * log(1 + |x|)
    max_normalize,   // token "max":     row / max |entry|, zero rows kept
    rescale_neg1_1,  // token "rescale": per-row affine [min,max] -> [-1,1]
    none             // token "none":    absent -> 0 only
};

struct PreprocSpec {
    PreprocMode mode = PreprocMode::none;
};

/// Parses a serialized token ("bin", "l2", "log", "max", "rescale", "none").
/// Chains like "bin+l2" are rejected explicitly: a spec holds a single mode.
PreprocSpec parse_preproc(const std::string& token);
std::string to_token(const PreprocSpec& spec);

/// Absent cells map to 0.0 first, then the mode applies row by row.
/// Degenerate rows (all-zero, constant) never produce NaN or Inf.
Matrix apply(const TransactionTable& table, const PreprocSpec& spec);

/// Same transformation on a plain value matrix (absent handling already done).
Matrix apply_values(Matrix rows, const PreprocSpec& spec);

/// Raw-transaction baseline: embedding = preprocessed row, dim = K.
EmbeddingSet raw_embedding(const TransactionTable& table, const PreprocSpec& spec);

/// Sociodemographic baseline: one-hot encode the six attributes against the
/// table's declared vocabularies, then project onto the top target_dim
/// centered principal components. The projection is fully determined by the
/// data (component signs fixed by making the largest-magnitude loading
/// positive); the seed is accepted for interface uniformity.
EmbeddingSet sociodemo_embedding(const SociodemoTable& table, int target_dim, uint64_t seed);

/// One-hot encoding against declared vocabularies; errors name the attribute
/// when a value is missing from its vocabulary.
Matrix one_hot_encode(const SociodemoTable& table);

}  // namespace txnembed::preprocess
