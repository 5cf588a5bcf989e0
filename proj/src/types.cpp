#include "txnembed/types.hpp"

#include "txnembed/rng.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace txnembed {

TransactionTable::TransactionTable(std::vector<std::string> ids, std::vector<std::string> cats)
    : client_ids(std::move(ids)), categories(std::move(cats)) {
    values = Matrix::Zero(static_cast<Eigen::Index>(client_ids.size()),
                          static_cast<Eigen::Index>(categories.size()));
    present.assign(client_ids.size() * categories.size(), 0);
}

void TransactionTable::set(Eigen::Index i, Eigen::Index k, double v) {
    values(i, k) = v;
    present[static_cast<size_t>(i) * categories.size() + static_cast<size_t>(k)] = 1;
}

void TransactionTable::set_absent(Eigen::Index i, Eigen::Index k) {
    values(i, k) = 0.0;
    present[static_cast<size_t>(i) * categories.size() + static_cast<size_t>(k)] = 0;
}

int TransactionTable::category_index(const std::string& label) const {
    auto it = std::find(categories.begin(), categories.end(), label);
    if (it == categories.end())
        throw std::invalid_argument("unknown category label: " + label);
    return static_cast<int>(it - categories.begin());
}

TransactionTable TransactionTable::drop_column(Eigen::Index k) const {
    if (k < 0 || k >= cols())
        throw std::out_of_range("drop_column: index out of range");
    std::vector<std::string> cats;
    cats.reserve(categories.size() - 1);
    for (Eigen::Index j = 0; j < cols(); ++j)
        if (j != k) cats.push_back(categories[static_cast<size_t>(j)]);
    TransactionTable out(client_ids, std::move(cats));
    for (Eigen::Index i = 0; i < rows(); ++i) {
        Eigen::Index jj = 0;
        for (Eigen::Index j = 0; j < cols(); ++j) {
            if (j == k) continue;
            out.values(i, jj) = values(i, j);
            out.present[static_cast<size_t>(i) * out.categories.size() +
                        static_cast<size_t>(jj)] =
                present[static_cast<size_t>(i) * categories.size() + static_cast<size_t>(j)];
            ++jj;
        }
    }
    return out;
}

TransactionTable TransactionTable::select_rows(std::span<const int> idx) const {
    std::vector<std::string> ids;
    ids.reserve(idx.size());
    for (int i : idx) ids.push_back(client_ids[static_cast<size_t>(i)]);
    TransactionTable out(std::move(ids), categories);
    for (size_t r = 0; r < idx.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(idx[r]);
        out.values.row(static_cast<Eigen::Index>(r)) = values.row(i);
        std::copy_n(present.begin() + static_cast<long>(i) * static_cast<long>(categories.size()),
                    categories.size(),
                    out.present.begin() + static_cast<long>(r) * static_cast<long>(categories.size()));
    }
    return out;
}

void TransactionTable::validate() const {
    if (values.rows() != static_cast<Eigen::Index>(client_ids.size()) ||
        values.cols() != static_cast<Eigen::Index>(categories.size()))
        throw std::runtime_error("transaction table shape mismatch");
    if (present.size() != client_ids.size() * categories.size())
        throw std::runtime_error("transaction table presence bitmap size mismatch");
    std::unordered_set<std::string> seen;
    for (const auto& id : client_ids)
        if (!seen.insert(id).second)
            throw std::runtime_error("duplicate client id: " + id);
    if (!values.allFinite())
        throw std::runtime_error("transaction table contains non-finite values");
}

void SociodemoTable::rebuild_vocab() {
    for (size_t a = 0; a < values.size(); ++a) {
        vocab[a] = values[a];
        std::sort(vocab[a].begin(), vocab[a].end());
        vocab[a].erase(std::unique(vocab[a].begin(), vocab[a].end()), vocab[a].end());
    }
}

SociodemoTable SociodemoTable::select_rows(std::span<const int> idx) const {
    SociodemoTable out;
    out.vocab = vocab;
    out.client_ids.reserve(idx.size());
    for (int i : idx) out.client_ids.push_back(client_ids[static_cast<size_t>(i)]);
    for (size_t a = 0; a < values.size(); ++a) {
        out.values[a].reserve(idx.size());
        for (int i : idx) out.values[a].push_back(values[a][static_cast<size_t>(i)]);
    }
    return out;
}

void SociodemoTable::validate() const {
    for (size_t a = 0; a < values.size(); ++a) {
        if (values[a].size() != client_ids.size())
            throw std::runtime_error(std::string("sociodemo attribute ") + kSociodemoAttributes[a] +
                                     " has wrong row count");
        for (const auto& v : values[a])
            if (!std::binary_search(vocab[a].begin(), vocab[a].end(), v))
                throw std::runtime_error(std::string("value '") + v +
                                         "' not in declared vocabulary of attribute " +
                                         kSociodemoAttributes[a]);
    }
}

Split split_indices(Eigen::Index n, const SplitSpec& spec, uint64_t seed) {
    if (spec.train < 0 || spec.val < 0 || spec.test < 0)
        throw std::invalid_argument("split sizes must be nonnegative");
    if (spec.train + spec.val + spec.test > n)
        throw std::invalid_argument("split sizes exceed client count");
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng::Engine eng(rng::derive(seed, "split"));
    for (size_t i = order.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(eng.uniform_below(i));
        std::swap(order[i - 1], order[j]);
    }
    Split out;
    auto it = order.begin();
    out.train.assign(it, it + spec.train);
    it += spec.train;
    out.val.assign(it, it + spec.val);
    it += spec.val;
    out.test.assign(it, it + spec.test);
    return out;
}

TableSplit split(const TransactionTable& table, const SplitSpec& spec, uint64_t seed) {
    Split idx = split_indices(table.rows(), spec, seed);
    return TableSplit{table.select_rows(idx.train), table.select_rows(idx.val),
                      table.select_rows(idx.test)};
}

}  // namespace txnembed
