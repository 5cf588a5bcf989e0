#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace txnembed {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense category identifier: a column index paired with a short label.
struct CategoryId {
    int index = 0;
    std::string label;
};

/// Client x category table of signed aggregated amounts (negative = expense,
/// positive = income). A cell can be *absent* ("-" in source data), which is
/// distinct from a present 0.0: absent cells store 0.0 in `values` and a 0 in
/// the presence bitmap. Immutable after load; safe to share across threads.
class TransactionTable {
public:
    std::vector<std::string> client_ids;
    std::vector<std::string> categories;  // label of column k
    Matrix values;                        // n x K, absent cells hold 0.0
    std::vector<uint8_t> present;         // n*K row-major presence flags

    TransactionTable() = default;
    TransactionTable(std::vector<std::string> ids, std::vector<std::string> cats);

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    bool is_present(Eigen::Index i, Eigen::Index k) const {
        return present[static_cast<size_t>(i) * categories.size() + static_cast<size_t>(k)] != 0;
    }
    void set(Eigen::Index i, Eigen::Index k, double v);
    void set_absent(Eigen::Index i, Eigen::Index k);

    /// Column index of a category label; throws if unknown.
    int category_index(const std::string& label) const;

    /// Copy without column k (used by the leave-one-category-out protocols).
    TransactionTable drop_column(Eigen::Index k) const;

    /// Copy restricted to the given row indices, in the given order.
    TransactionTable select_rows(std::span<const int> idx) const;

    /// Checks duplicate client ids and shape consistency; throws on violation.
    void validate() const;
};

inline constexpr std::array<const char*, 6> kSociodemoAttributes = {
    "age_range", "gender", "income_range", "postcode", "city", "province"};

/// Categorical sociodemographic attributes, one row per client, paired with a
/// TransactionTable by client order. Every value must come from the declared
/// per-attribute vocabulary.
class SociodemoTable {
public:
    std::vector<std::string> client_ids;
    std::array<std::vector<std::string>, 6> values;  // [attribute][client]
    std::array<std::vector<std::string>, 6> vocab;   // sorted unique values

    Eigen::Index rows() const { return static_cast<Eigen::Index>(client_ids.size()); }

    /// Rebuilds each attribute vocabulary from the stored values.
    void rebuild_vocab();

    SociodemoTable select_rows(std::span<const int> idx) const;

    /// Checks vocabulary membership and shape; throws naming the attribute.
    void validate() const;
};

/// A set of client embeddings: one dense row per client plus a tag naming the
/// producing method and its configuration.
struct EmbeddingSet {
    std::vector<std::string> client_ids;
    Matrix vectors;      // n x dim
    std::string source;  // e.g. "msda(preproc=log,p=0.5,layers=1)"

    Eigen::Index dim() const { return vectors.cols(); }
    Eigen::Index size() const { return vectors.rows(); }
};

/// Requested train/validation/test sizes for a deterministic split.
struct SplitSpec {
    Eigen::Index train = 0;
    Eigen::Index val = 0;
    Eigen::Index test = 0;
};

/// Disjoint row-index partitions produced by split().
struct Split {
    std::vector<int> train;
    std::vector<int> val;
    std::vector<int> test;
};

/// Deterministic disjoint partition of [0, n) into train/val/test index sets.
/// Throws if the spec sizes exceed n.
Split split_indices(Eigen::Index n, const SplitSpec& spec, uint64_t seed);

struct TableSplit {
    TransactionTable train;
    TransactionTable val;
    TransactionTable test;
};

TableSplit split(const TransactionTable& table, const SplitSpec& spec, uint64_t seed);

}  // namespace txnembed
