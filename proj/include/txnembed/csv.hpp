#pragma once

#include "txnembed/types.hpp"

#include <string>
#include <vector>

namespace txnembed::csv {

/// Parse failure with row/column context.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Loads `client_id,CAT1,...,CATK` with empty cells meaning absent. Parsing is
/// locale-independent (dot decimal separator only).
TransactionTable load_table(const std::string& path);

/// Inverse of load_table; absent cells are written as empty fields and numeric
/// values with shortest round-trip formatting, so load(save(t)) == t.
void save_table(const std::string& path, const TransactionTable& table);

SociodemoTable load_sociodemo(const std::string& path);
void save_sociodemo(const std::string& path, const SociodemoTable& table);

EmbeddingSet load_embeddings(const std::string& path);
void save_embeddings(const std::string& path, const EmbeddingSet& set);

/// `client_id,label` integer label files (archetype assignments, relevance).
void save_labels(const std::string& path, const std::vector<std::string>& ids,
                 const std::vector<int>& labels, const std::string& column_name);
std::vector<int> load_labels(const std::string& path);

// Building blocks shared by the other readers/writers.
std::vector<std::string> split_line(const std::string& line);
double parse_double(const std::string& field, long row, long col);
std::string format_double(double v);

}  // namespace txnembed::csv
