#pragma once

#include "txnembed/preprocess.hpp"
#include "txnembed/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace txnembed::msda {

/// One marginalized denoising layer: reconstruction weights of shape
/// d x (d+1), the bias living in the final column. lambda_used records the
/// ridge value resolved at training time.
struct Layer {
    Matrix weights;  // d x (d+1)
    double lambda_used = 0.0;
};

enum class OutputMode { last_layer, concat_all };

struct Model {
    std::vector<Layer> layers;
    double noise_p = 0.5;
    /// Ridge as configured; unset means the scaled default
    /// 1e-5 * trace(EQ) / (d + 1) resolved per layer.
    std::optional<double> ridge_lambda;
    preprocess::PreprocSpec preproc;
    OutputMode output_mode = OutputMode::last_layer;
    int input_dim = 0;

    std::string source_tag() const;
};

struct TrainParams {
    double noise_p = 0.5;
    int n_layers = 1;
    std::optional<double> ridge_lambda;  // unset = scaled default
    preprocess::PreprocSpec preproc;
    OutputMode output_mode = OutputMode::last_layer;
    int threads = 1;
};

/// Expected scatter statistics under Bernoulli masking with keep probability
/// 1-p per input feature (the bias row is never corrupted). X holds one
/// sample per column. Returns EP (d x (d+1)) and EQ ((d+1) x (d+1)):
/// with S = [X;1][X;1]^T and q_i the keep probability of row i,
///   EQ_ij = S_ij q_i q_j (i != j),  EQ_ii = S_ii q_i,  EP_ij = S_ij q_j.
struct Scatter {
    Matrix ep;
    Matrix eq;
};
Scatter expected_scatter(const Matrix& samples_by_column, double p, int threads = 1);

/// Closed-form layer training: solves M (EQ + lambda I) = EP directly (SPD
/// factorization, pivoted LU fallback; the inverse is never formed). With
/// lambda = 0 a singular EQ raises an error advising a positive ridge.
Layer train_layer(const Matrix& samples_by_column, double p, double lambda, int threads = 1);
Layer train_layer_auto(const Matrix& samples_by_column, double p,
                       std::optional<double> lambda, int threads = 1);

/// Stacked training: layer l is fit on the tanh outputs of layer l-1, with
/// the preprocessed input as layer 0. No sampling happens anywhere; cost is a
/// function of (d, n, n_layers) only.
Model train(const Matrix& client_rows, const TrainParams& params);
Model train(const TransactionTable& table, const TrainParams& params);

/// Forward pass: h^0 = preprocessed input, h^l = tanh(M^l [h^{l-1}; 1]).
/// Output is h^L (last_layer) or [h^1; ...; h^L] (concat_all); every entry
/// lies strictly inside (-1, 1).
Matrix embed_values(const Model& model, const Matrix& client_rows);
EmbeddingSet embed(const Model& model, const TransactionTable& table);

/// Binary model bundle; byte layout in docs/msda_model_format.md. Round-trips
/// are lossless.
void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

}  // namespace txnembed::msda
