#include "txnembed/sgns.hpp"

#include "txnembed/csv.hpp"
#include "txnembed/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace txnembed::sgns {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow on either tail.
double log_sigmoid(double x) {
    return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Cumulative unigram^0.75 mass for negative sampling.
std::vector<double> negative_table(const tokens::TokenCorpus& corpus) {
    std::vector<double> mass(corpus.vocab.size(), 0.0);
    for (const auto& bag : corpus.bags)
        for (int t : bag) mass[static_cast<size_t>(t)] += 1.0;
    double total = 0.0;
    for (auto& m : mass) {
        m = std::pow(m, 0.75);
        total += m;
    }
    if (total <= 0.0) throw std::invalid_argument("skip-gram corpus has no tokens");
    double cum = 0.0;
    for (auto& m : mass) {
        cum += m / total;
        m = cum;
    }
    mass.back() = 1.0;
    return mass;
}

int sample_negative(const std::vector<double>& cumulative, rng::Engine& eng) {
    const double r = eng.uniform01();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    if (it == cumulative.end()) --it;
    return static_cast<int>(it - cumulative.begin());
}

struct TrainState {
    Matrix syn0;  // input vectors, updated rows are the result
    Matrix syn1;  // output vectors
};

}  // namespace

void W2vConfig::validate() const {
    if (embed_dim <= 0 || window <= 0 || negatives <= 0 || epochs <= 0 ||
        learning_rate <= 0.0 || workers <= 0)
        throw std::invalid_argument("w2v config values must all be positive");
}

double pair_loss(const Vector& center, const Vector& context, const Matrix& negatives,
                 Vector* grad_center, Vector* grad_context, Matrix* grad_negatives) {
    const double pos_score = context.dot(center);
    double loss = -log_sigmoid(pos_score);
    if (grad_center) *grad_center = -(1.0 - sigmoid(pos_score)) * context;
    if (grad_context) *grad_context = -(1.0 - sigmoid(pos_score)) * center;
    if (grad_negatives) grad_negatives->resize(negatives.rows(), negatives.cols());
    for (Eigen::Index k = 0; k < negatives.rows(); ++k) {
        const double neg_score = negatives.row(k).dot(center);
        loss -= log_sigmoid(-neg_score);
        const double s = sigmoid(neg_score);
        if (grad_center) *grad_center += s * negatives.row(k).transpose();
        if (grad_negatives) grad_negatives->row(k) = s * center.transpose();
    }
    return loss;
}

TokenVectors train_skipgram(const tokens::TokenCorpus& corpus, const W2vConfig& cfg) {
    cfg.validate();
    if (corpus.vocab.empty()) throw std::invalid_argument("skip-gram vocabulary is empty");
    const size_t max_bag = corpus.max_bag_size();
    if (static_cast<size_t>(cfg.window) > max_bag)
        throw std::invalid_argument("window (" + std::to_string(cfg.window) +
                                    ") larger than every client bag (max " +
                                    std::to_string(max_bag) + ")");

    const auto vocab_size = static_cast<Eigen::Index>(corpus.vocab.size());
    const Eigen::Index dim = cfg.embed_dim;
    TrainState state;
    state.syn0.resize(vocab_size, dim);
    state.syn1 = Matrix::Zero(vocab_size, dim);
    {
        rng::Engine init_eng(rng::derive(cfg.seed, "sgns-init"));
        for (Eigen::Index i = 0; i < vocab_size; ++i)
            for (Eigen::Index j = 0; j < dim; ++j)
                state.syn0(i, j) = (init_eng.uniform01() - 0.5) / static_cast<double>(dim);
    }

    const auto cumulative = negative_table(corpus);
    const long total_centers = corpus.total_tokens();
    const double total_steps =
        static_cast<double>(cfg.epochs) * static_cast<double>(std::max(1L, total_centers));
    std::atomic<long> processed{0};

    const long n_clients = static_cast<long>(corpus.bags.size());
    const int workers = static_cast<int>(std::min<long>(cfg.workers, std::max(1L, n_clients)));
    const long chunk = (n_clients + workers - 1) / workers;

    auto run_worker = [&](int w) {
        rng::Engine eng(rng::derive_stream(rng::derive(cfg.seed, "sgns-train"),
                                           static_cast<uint64_t>(w)));
        std::vector<int> positions;
        Vector grad_center(dim);
        const long begin = static_cast<long>(w) * chunk;
        const long end = std::min(n_clients, begin + chunk);
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            for (long c = begin; c < end; ++c) {
                const auto& bag = corpus.bags[static_cast<size_t>(c)];
                if (bag.size() < 2) {
                    processed.fetch_add(static_cast<long>(bag.size()),
                                        std::memory_order_relaxed);
                    continue;
                }
                for (size_t i = 0; i < bag.size(); ++i) {
                    const long done = processed.fetch_add(1, std::memory_order_relaxed);
                    const double alpha =
                        cfg.learning_rate *
                        std::max(1e-4, 1.0 - static_cast<double>(done) / total_steps);
                    const int center = bag[i];

                    // Context: up to `window` other tokens of the same bag,
                    // uniform without replacement (partial Fisher-Yates).
                    positions.clear();
                    for (size_t j = 0; j < bag.size(); ++j)
                        if (j != i) positions.push_back(static_cast<int>(j));
                    const size_t ctx_count =
                        std::min(positions.size(), static_cast<size_t>(cfg.window));
                    for (size_t j = 0; j < ctx_count; ++j) {
                        const size_t pick =
                            j + static_cast<size_t>(eng.uniform_below(positions.size() - j));
                        std::swap(positions[j], positions[pick]);
                    }

                    auto v = state.syn0.row(center);
                    for (size_t j = 0; j < ctx_count; ++j) {
                        const int ctx = bag[static_cast<size_t>(positions[j])];
                        grad_center.setZero();

                        auto u = state.syn1.row(ctx);
                        const double g_pos = 1.0 - sigmoid(u.dot(v));
                        grad_center += g_pos * u.transpose();
                        state.syn1.row(ctx) += alpha * g_pos * v;

                        for (int k = 0; k < cfg.negatives; ++k) {
                            int neg = sample_negative(cumulative, eng);
                            if (neg == ctx) continue;  // classic skip rule
                            auto un = state.syn1.row(neg);
                            const double g_neg = -sigmoid(un.dot(v));
                            grad_center += g_neg * un.transpose();
                            state.syn1.row(neg) += alpha * g_neg * v;
                        }
                        state.syn0.row(center) += alpha * grad_center.transpose();
                    }
                }
            }
        }
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
        for (auto& t : pool) t.join();
    }

    TokenVectors out;
    out.labels = corpus.vocab;
    out.vectors = std::move(state.syn0);
    if (!out.vectors.allFinite())
        throw std::runtime_error("skip-gram training diverged (non-finite vectors); "
                                 "lower the learning rate");
    return out;
}

void save_token_vectors(const std::string& path, const TokenVectors& vectors) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    for (Eigen::Index i = 0; i < vectors.vectors.rows(); ++i) {
        out << vectors.labels[static_cast<size_t>(i)];
        for (Eigen::Index j = 0; j < vectors.dim(); ++j)
            out << ' ' << csv::format_double(vectors.vectors(i, j));
        out << '\n';
    }
}

TokenVectors load_token_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string label;
        ss >> label;
        labels.push_back(label);
        rows.emplace_back();
        std::string field;
        while (ss >> field)
            rows.back().push_back(csv::parse_double(field, lineno, 0));
        if (rows.back().empty())
            throw std::runtime_error("token vector line " + std::to_string(lineno) +
                                     " has no values");
        if (rows.back().size() != rows.front().size())
            throw std::runtime_error("inconsistent token vector dimension at line " +
                                     std::to_string(lineno));
    }
    TokenVectors out;
    out.labels = std::move(labels);
    out.vectors.resize(static_cast<Eigen::Index>(rows.size()),
                       rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < out.vectors.rows(); ++i)
        for (Eigen::Index j = 0; j < out.vectors.cols(); ++j)
            out.vectors(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return out;
}

}  // namespace txnembed::sgns
