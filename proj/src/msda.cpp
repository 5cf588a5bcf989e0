#include "txnembed/msda.hpp"

#include "txnembed/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; big-endian hosts are unsupported");

namespace txnembed::msda {

namespace {

constexpr char kMagic[8] = {'T', 'X', 'E', 'M', 'S', 'D', 'A', '1'};
constexpr long kScatterBlock = 4096;  // columns per partial scatter; fixed so
                                      // the block-ordered reduce is bit-stable

// S = [X;1][X;1]^T accumulated as a block-ordered reduction over columns.
Matrix bias_scatter(const Matrix& x, int threads) {
    const Eigen::Index d = x.rows();
    const Eigen::Index n = x.cols();
    Matrix xb(d + 1, n);
    xb.topRows(d) = x;
    xb.row(d).setOnes();

    const long blocks = (n + kScatterBlock - 1) / kScatterBlock;
    if (blocks <= 1) return xb * xb.transpose();

    std::vector<Matrix> partial(static_cast<size_t>(blocks));
    parallel_for(blocks, threads, [&](long b0, long b1) {
        for (long b = b0; b < b1; ++b) {
            const Eigen::Index begin = b * kScatterBlock;
            const Eigen::Index len = std::min<Eigen::Index>(kScatterBlock, n - begin);
            const auto cols = xb.middleCols(begin, len);
            partial[static_cast<size_t>(b)] = cols * cols.transpose();
        }
    });
    Matrix s = Matrix::Zero(d + 1, d + 1);
    for (const auto& part : partial) s += part;  // fixed block order
    return s;
}

double resolve_lambda(const Matrix& eq, std::optional<double> lambda) {
    if (lambda) {
        if (*lambda < 0.0) throw std::invalid_argument("ridge lambda must be nonnegative");
        return *lambda;
    }
    return 1e-5 * eq.trace() / static_cast<double>(eq.rows());
}

Matrix solve_reconstruction(const Matrix& ep, const Matrix& eq, double lambda) {
    Matrix lhs = eq;
    lhs.diagonal().array() += lambda;

    if (lambda > 0.0) {
        Eigen::LLT<Matrix> llt(lhs);
        if (llt.info() == Eigen::Success)
            return llt.solve(ep.transpose()).transpose();
        Eigen::PartialPivLU<Matrix> lu(lhs);
        return lu.solve(ep.transpose()).transpose();
    }
    Eigen::FullPivLU<Matrix> lu(lhs);
    if (!lu.isInvertible())
        throw std::runtime_error(
            "expected scatter EQ is singular (some feature is constant or always absent); "
            "train with ridge_lambda > 0");
    return lu.solve(ep.transpose()).transpose();
}

Matrix forward_layer(const Layer& layer, const Matrix& h) {
    const Eigen::Index d = h.rows();
    Matrix hb(d + 1, h.cols());
    hb.topRows(d) = h;
    hb.row(d).setOnes();
    return (layer.weights * hb).array().tanh().matrix();
}

void write_bytes(std::ostream& out, const void* p, size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_pod(std::ostream& out, T v) {
    write_bytes(out, &v, sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated model file");
    return v;
}

}  // namespace

std::string Model::source_tag() const {
    std::ostringstream tag;
    tag << "msda(preproc=" << preprocess::to_token(preproc) << ",p=" << noise_p
        << ",layers=" << layers.size()
        << ",lambda=" << (ridge_lambda ? std::to_string(*ridge_lambda) : std::string("auto"))
        << ",output=" << (output_mode == OutputMode::last_layer ? "last" : "concat") << ")";
    return tag.str();
}

Scatter expected_scatter(const Matrix& samples_by_column, double p, int threads) {
    if (p < 0.0 || p >= 1.0)
        throw std::invalid_argument("masking probability must satisfy 0 <= p < 1");
    if (!samples_by_column.allFinite())
        throw std::invalid_argument("expected_scatter: input must be finite");
    const Eigen::Index d = samples_by_column.rows();
    const Matrix s = bias_scatter(samples_by_column, threads);

    Vector keep = Vector::Constant(d + 1, 1.0 - p);
    keep(d) = 1.0;  // bias feature is never corrupted

    Scatter out;
    out.eq = s.cwiseProduct(keep * keep.transpose());
    out.eq.diagonal() = s.diagonal().cwiseProduct(keep);
    out.ep = s.topRows(d).cwiseProduct(Vector::Ones(d) * keep.transpose());
    return out;
}

Layer train_layer_auto(const Matrix& samples_by_column, double p,
                       std::optional<double> lambda, int threads) {
    if (samples_by_column.cols() < 1)
        throw std::invalid_argument("train_layer needs at least one sample");
    Scatter sc = expected_scatter(samples_by_column, p, threads);
    Layer layer;
    layer.lambda_used = resolve_lambda(sc.eq, lambda);
    layer.weights = solve_reconstruction(sc.ep, sc.eq, layer.lambda_used);
    if (!layer.weights.allFinite())
        throw std::runtime_error("layer solve produced non-finite weights");
    return layer;
}

Layer train_layer(const Matrix& samples_by_column, double p, double lambda, int threads) {
    return train_layer_auto(samples_by_column, p, lambda, threads);
}

Model train(const Matrix& client_rows, const TrainParams& params) {
    if (params.n_layers < 1) throw std::invalid_argument("n_layers must be >= 1");
    Model model;
    model.noise_p = params.noise_p;
    model.ridge_lambda = params.ridge_lambda;
    model.preproc = params.preproc;
    model.output_mode = params.output_mode;
    model.input_dim = static_cast<int>(client_rows.cols());

    Matrix h = preprocess::apply_values(client_rows, params.preproc).transpose();
    for (int l = 0; l < params.n_layers; ++l) {
        model.layers.push_back(
            train_layer_auto(h, params.noise_p, params.ridge_lambda, params.threads));
        h = forward_layer(model.layers.back(), h);
    }
    return model;
}

Model train(const TransactionTable& table, const TrainParams& params) {
    return train(table.values, params);
}

Matrix embed_values(const Model& model, const Matrix& client_rows) {
    if (model.layers.empty()) throw std::invalid_argument("model has no layers");
    if (client_rows.cols() != model.input_dim)
        throw std::invalid_argument("input has " + std::to_string(client_rows.cols()) +
                                    " features, model expects " +
                                    std::to_string(model.input_dim));
    Matrix h = preprocess::apply_values(client_rows, model.preproc).transpose();
    const Eigen::Index d = h.rows();
    const Eigen::Index n = h.cols();

    Matrix concat;
    if (model.output_mode == OutputMode::concat_all)
        concat.resize(d * static_cast<Eigen::Index>(model.layers.size()), n);
    for (size_t l = 0; l < model.layers.size(); ++l) {
        h = forward_layer(model.layers[l], h);
        if (model.output_mode == OutputMode::concat_all)
            concat.middleRows(static_cast<Eigen::Index>(l) * d, d) = h;
    }
    return model.output_mode == OutputMode::concat_all ? concat.transpose() : h.transpose();
}

EmbeddingSet embed(const Model& model, const TransactionTable& table) {
    EmbeddingSet set;
    set.client_ids = table.client_ids;
    set.vectors = embed_values(model, table.values);
    set.source = model.source_tag();
    return set;
}

void save_model(const std::string& path, const Model& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    write_bytes(out, kMagic, sizeof(kMagic));
    write_pod<uint32_t>(out, 1);  // version
    write_pod<uint32_t>(out, static_cast<uint32_t>(model.input_dim));
    write_pod<uint32_t>(out, static_cast<uint32_t>(model.layers.size()));
    write_pod<uint8_t>(out, model.output_mode == OutputMode::concat_all ? 1 : 0);
    const std::string preproc = preprocess::to_token(model.preproc);
    write_pod<uint8_t>(out, static_cast<uint8_t>(preproc.size()));
    write_bytes(out, preproc.data(), preproc.size());
    write_pod<double>(out, model.noise_p);
    write_pod<uint8_t>(out, model.ridge_lambda ? 1 : 0);
    write_pod<double>(out, model.ridge_lambda.value_or(0.0));
    for (const auto& layer : model.layers) {
        write_pod<double>(out, layer.lambda_used);
        const Eigen::Index d = layer.weights.rows();
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d + 1; ++j) write_pod<double>(out, layer.weights(i, j));
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a txnembed msda model file: " + path);
    const auto version = read_pod<uint32_t>(in);
    if (version != 1)
        throw std::runtime_error("unsupported model version " + std::to_string(version));

    Model model;
    model.input_dim = static_cast<int>(read_pod<uint32_t>(in));
    const auto n_layers = read_pod<uint32_t>(in);
    model.output_mode =
        read_pod<uint8_t>(in) == 1 ? OutputMode::concat_all : OutputMode::last_layer;
    const auto token_len = read_pod<uint8_t>(in);
    std::string token(token_len, '\0');
    in.read(token.data(), token_len);
    if (!in) throw std::runtime_error("truncated model file");
    model.preproc = preprocess::parse_preproc(token);
    model.noise_p = read_pod<double>(in);
    const bool has_lambda = read_pod<uint8_t>(in) == 1;
    const double lambda = read_pod<double>(in);
    if (has_lambda) model.ridge_lambda = lambda;

    const auto d = static_cast<Eigen::Index>(model.input_dim);
    for (uint32_t l = 0; l < n_layers; ++l) {
        Layer layer;
        layer.lambda_used = read_pod<double>(in);
        layer.weights.resize(d, d + 1);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d + 1; ++j) layer.weights(i, j) = read_pod<double>(in);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

}  // namespace txnembed::msda
