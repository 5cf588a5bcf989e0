#include "txnembed/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace txnembed::preprocess {

PreprocSpec parse_preproc(const std::string& token) {
    if (token.find('+') != std::string::npos || token.find(',') != std::string::npos)
        throw std::invalid_argument("preprocessing accepts a single mode, got chain '" + token +
                                    "'");
    if (token == "bin" || token == "binarize") return {PreprocMode::binarize};
    if (token == "l2") return {PreprocMode::l2_normalize};
    if (token == "log") return {PreprocMode::log_normalize};
    if (token == "max") return {PreprocMode::max_normalize};
    if (token == "rescale") return {PreprocMode::rescale_neg1_1};
    if (token == "none") return {PreprocMode::none};
    throw std::invalid_argument("unknown preprocessing mode '" + token + "'");
}

std::string to_token(const PreprocSpec& spec) {
    switch (spec.mode) {
        case PreprocMode::binarize: return "bin";
        case PreprocMode::l2_normalize: return "l2";
        case PreprocMode::log_normalize: return "log";
        case PreprocMode::max_normalize: return "max";
        case PreprocMode::rescale_neg1_1: return "rescale";
        case PreprocMode::none: return "none";
    }
    throw std::logic_error("unreachable preproc mode");
}

Matrix apply_values(Matrix rows, const PreprocSpec& spec) {
    const Eigen::Index n = rows.rows();
    switch (spec.mode) {
        case PreprocMode::none:
            break;
        case PreprocMode::binarize:
            rows = (rows.array() != 0.0).cast<double>();
            break;
        case PreprocMode::l2_normalize:
            for (Eigen::Index i = 0; i < n; ++i) {
                const double norm = rows.row(i).norm();
                if (norm > 0.0) rows.row(i) /= norm;
            }
            break;
        case PreprocMode::log_normalize:
            rows = rows.unaryExpr(
                [](double x) { return x >= 0.0 ? std::log1p(x) : -std::log1p(-x); });
            break;
        case PreprocMode::max_normalize:
            for (Eigen::Index i = 0; i < n; ++i) {
                const double m = rows.row(i).cwiseAbs().maxCoeff();
                if (m > 0.0) rows.row(i) /= m;
            }
            break;
        case PreprocMode::rescale_neg1_1:
            for (Eigen::Index i = 0; i < n; ++i) {
                const double lo = rows.row(i).minCoeff();
                const double hi = rows.row(i).maxCoeff();
                if (hi > lo)
                    rows.row(i) =
                        ((rows.row(i).array() - lo) / (hi - lo) * 2.0 - 1.0).matrix();
                else
                    rows.row(i).setZero();  // constant row maps to the midpoint
            }
            break;
    }
    return rows;
}

Matrix apply(const TransactionTable& table, const PreprocSpec& spec) {
    if (table.rows() == 0) throw std::invalid_argument("cannot preprocess an empty table");
    return apply_values(table.values, spec);
}

EmbeddingSet raw_embedding(const TransactionTable& table, const PreprocSpec& spec) {
    EmbeddingSet set;
    set.client_ids = table.client_ids;
    set.vectors = apply(table, spec);
    set.source = "raw(preproc=" + to_token(spec) + ")";
    return set;
}

Matrix one_hot_encode(const SociodemoTable& table) {
    const auto n = table.rows();
    Eigen::Index width = 0;
    std::array<Eigen::Index, 6> offsets{};
    for (size_t a = 0; a < table.vocab.size(); ++a) {
        offsets[a] = width;
        width += static_cast<Eigen::Index>(table.vocab[a].size());
    }
    Matrix out = Matrix::Zero(n, width);
    for (size_t a = 0; a < table.vocab.size(); ++a) {
        const auto& vocab = table.vocab[a];
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& v = table.values[a][static_cast<size_t>(i)];
            auto it = std::lower_bound(vocab.begin(), vocab.end(), v);
            if (it == vocab.end() || *it != v)
                throw std::runtime_error("value '" + v + "' not in vocabulary of attribute " +
                                         kSociodemoAttributes[a]);
            out(i, offsets[a] + (it - vocab.begin())) = 1.0;
        }
    }
    return out;
}

EmbeddingSet sociodemo_embedding(const SociodemoTable& table, int target_dim,
                                 uint64_t /*seed*/) {
    Matrix onehot = one_hot_encode(table);
    const Eigen::Index width = onehot.cols();
    if (target_dim <= 0 || target_dim > width)
        throw std::invalid_argument("target_dim must be in [1, one-hot width " +
                                    std::to_string(width) + "]");

    const Vector mean = onehot.colwise().mean();
    onehot.rowwise() -= mean.transpose();

    const Matrix cov = onehot.transpose() * onehot;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("sociodemo PCA eigendecomposition failed");

    // Eigenvalues come out ascending; take the trailing target_dim columns in
    // descending order and fix each component's sign so that its
    // largest-magnitude loading is positive.
    Matrix components(width, target_dim);
    for (int c = 0; c < target_dim; ++c) {
        Vector v = eig.eigenvectors().col(width - 1 - c);
        Eigen::Index argmax = 0;
        v.cwiseAbs().maxCoeff(&argmax);
        if (v(argmax) < 0.0) v = -v;
        components.col(c) = v;
    }

    EmbeddingSet set;
    set.client_ids = table.client_ids;
    set.vectors = onehot * components;
    set.source = "sociodemo(dim=" + std::to_string(target_dim) + ")";
    return set;
}

}  // namespace txnembed::preprocess
