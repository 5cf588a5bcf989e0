#include "txnembed/pooling.hpp"

#include "txnembed/csv.hpp"
#include "txnembed/kmeans.hpp"

#include <fstream>
#include <sstream>

namespace txnembed::pooling {

namespace {

void check_sizes(const tokens::TokenCorpus& corpus, const sgns::TokenVectors& vectors,
                 const std::vector<std::string>& client_ids) {
    if (corpus.vocab.size() != static_cast<size_t>(vectors.vectors.rows()))
        throw std::invalid_argument("token vectors do not cover the corpus vocabulary");
    if (client_ids.size() != corpus.bags.size())
        throw std::invalid_argument("client id list does not match corpus size");
}

}  // namespace

EmbeddingSet pool_mean(const tokens::TokenCorpus& corpus, const sgns::TokenVectors& vectors,
                       const std::vector<std::string>& client_ids) {
    check_sizes(corpus, vectors, client_ids);
    EmbeddingSet set;
    set.client_ids = client_ids;
    set.vectors = Matrix::Zero(static_cast<Eigen::Index>(corpus.bags.size()), vectors.dim());
    for (size_t i = 0; i < corpus.bags.size(); ++i) {
        const auto& bag = corpus.bags[i];
        if (bag.empty()) continue;
        for (int t : bag) set.vectors.row(static_cast<Eigen::Index>(i)) += vectors.vectors.row(t);
        set.vectors.row(static_cast<Eigen::Index>(i)) /= static_cast<double>(bag.size());
    }
    set.source = "w2v_mean(dim=" + std::to_string(vectors.dim()) + ")";
    return set;
}

VladCodebook fit_vlad(const sgns::TokenVectors& vectors, int n_centroids, uint64_t seed) {
    if (n_centroids < 1) throw std::invalid_argument("VLAD needs at least one centroid");
    if (n_centroids > vectors.vectors.rows())
        throw std::invalid_argument("VLAD centroid count exceeds vocabulary size");
    cluster::KmeansParams params;
    params.k = n_centroids;
    params.seed = seed;
    return VladCodebook{cluster::kmeans(vectors.vectors, params).centroids};
}

EmbeddingSet pool_vlad(const tokens::TokenCorpus& corpus, const sgns::TokenVectors& vectors,
                       const VladCodebook& codebook, const std::vector<std::string>& client_ids) {
    check_sizes(corpus, vectors, client_ids);
    const Eigen::Index dim = vectors.dim();
    const Eigen::Index C = codebook.centroids.rows();
    if (codebook.centroids.cols() != dim)
        throw std::invalid_argument("codebook dimension does not match token vectors");

    // Nearest centroid per vocabulary token, ties toward the lower index.
    std::vector<int> assignment(static_cast<size_t>(vectors.vectors.rows()), 0);
    for (Eigen::Index t = 0; t < vectors.vectors.rows(); ++t) {
        double best = (vectors.vectors.row(t) - codebook.centroids.row(0)).squaredNorm();
        for (Eigen::Index c = 1; c < C; ++c) {
            const double d = (vectors.vectors.row(t) - codebook.centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                assignment[static_cast<size_t>(t)] = static_cast<int>(c);
            }
        }
    }

    EmbeddingSet set;
    set.client_ids = client_ids;
    set.vectors = Matrix::Zero(static_cast<Eigen::Index>(corpus.bags.size()), C * dim);
    for (size_t i = 0; i < corpus.bags.size(); ++i) {
        auto row = set.vectors.row(static_cast<Eigen::Index>(i));
        for (int t : corpus.bags[i]) {
            const int c = assignment[static_cast<size_t>(t)];
            row.segment(static_cast<Eigen::Index>(c) * dim, dim) +=
                vectors.vectors.row(t) - codebook.centroids.row(c);
        }
        const double norm = row.norm();
        if (norm > 0.0) row /= norm;
    }
    set.source = "w2v_vlad(C=" + std::to_string(C) + ",dim=" + std::to_string(dim) + ")";
    return set;
}

void save_codebook(const std::string& path, const VladCodebook& codebook) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    for (Eigen::Index c = 0; c < codebook.centroids.rows(); ++c) {
        for (Eigen::Index j = 0; j < codebook.centroids.cols(); ++j) {
            if (j) out << ' ';
            out << csv::format_double(codebook.centroids(c, j));
        }
        out << '\n';
    }
}

VladCodebook load_codebook(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        rows.emplace_back();
        std::istringstream ss(line);
        std::string field;
        while (ss >> field) rows.back().push_back(csv::parse_double(field, lineno, 0));
    }
    if (rows.empty()) throw std::runtime_error("empty codebook file: " + path);
    VladCodebook out;
    out.centroids.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index c = 0; c < out.centroids.rows(); ++c) {
        if (rows[static_cast<size_t>(c)].size() != static_cast<size_t>(out.centroids.cols()))
            throw std::runtime_error("inconsistent codebook row length");
        for (Eigen::Index j = 0; j < out.centroids.cols(); ++j)
            out.centroids(c, j) = rows[static_cast<size_t>(c)][static_cast<size_t>(j)];
    }
    return out;
}

}  // namespace txnembed::pooling
