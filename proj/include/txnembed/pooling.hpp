#pragma once

#include "txnembed/sgns.hpp"
#include "txnembed/tokens.hpp"
#include "txnembed/types.hpp"

namespace txnembed::pooling {

/// Client embedding = arithmetic mean of its bag's token vectors; an empty
/// bag yields the zero vector.
EmbeddingSet pool_mean(const tokens::TokenCorpus& corpus, const sgns::TokenVectors& vectors,
                       const std::vector<std::string>& client_ids);

/// K-means centroids over the token vectors.
struct VladCodebook {
    Matrix centroids;  // C x dim
};

VladCodebook fit_vlad(const sgns::TokenVectors& vectors, int n_centroids, uint64_t seed);

/// VLAD pooling: concatenation over centroids c of sum_{w assigned to c}
/// (w - c) for the tokens of the bag; dim = C * embed_dim. Centroids with no
/// assigned token contribute a zero block. The final vector is L2-normalized
/// (zero stays zero).
EmbeddingSet pool_vlad(const tokens::TokenCorpus& corpus, const sgns::TokenVectors& vectors,
                       const VladCodebook& codebook, const std::vector<std::string>& client_ids);

void save_codebook(const std::string& path, const VladCodebook& codebook);
VladCodebook load_codebook(const std::string& path);

}  // namespace txnembed::pooling
