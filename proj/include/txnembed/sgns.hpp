#pragma once

#include "txnembed/tokens.hpp"
#include "txnembed/types.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace txnembed::sgns {

struct W2vConfig {
    int embed_dim = 32;
    int window = 5;       // context tokens sampled per center occurrence
    int negatives = 5;    // negative samples per (center, context) pair
    int epochs = 5;
    double learning_rate = 0.025;
    uint64_t seed = 1;
    int workers = 1;  // 1 = bit-deterministic; >1 = lock-free, loss-level
                      // reproducibility only

    void validate() const;
};

/// Trained token vectors (the input-side matrix), one row per vocabulary
/// entry.
struct TokenVectors {
    std::vector<std::string> labels;
    Matrix vectors;  // vocab x dim

    Eigen::Index dim() const { return vectors.cols(); }
};

/// Skip-gram with negative sampling over client bags. Bags carry no order, so
/// the context of a center occurrence is up to `window` other tokens sampled
/// uniformly without replacement from the same bag. Deterministic for a fixed
/// seed when workers == 1. Throws if window exceeds every bag's size.
TokenVectors train_skipgram(const tokens::TokenCorpus& corpus, const W2vConfig& cfg);

/// One (center, context, negatives) SGNS term:
///   loss = -log sigmoid(u_ctx . v) - sum_k log sigmoid(-u_k . v).
/// Gradients are written to the out parameters when non-null. Kept separate
/// from the training loop so the analytic gradients can be checked against
/// finite differences.
double pair_loss(const Vector& center, const Vector& context, const Matrix& negatives,
                 Vector* grad_center, Vector* grad_context, Matrix* grad_negatives);

/// `label v1 ... vd` per line, shortest round-trip formatting (lossless).
void save_token_vectors(const std::string& path, const TokenVectors& vectors);
TokenVectors load_token_vectors(const std::string& path);

}  // namespace txnembed::sgns
