#include "txnembed/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace txnembed::csv {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    return out;
}

// Reads a line and strips a trailing '\r' so CRLF inputs parse too.
bool get_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double(const std::string& field, long row, long col) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        std::ostringstream msg;
        msg << "non-numeric cell '" << field << "' at row " << row << ", column " << col;
        throw ParseError(msg.str());
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

TransactionTable load_table(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!get_line(in, line)) throw ParseError("empty file, expected header: " + path);
    auto header = split_line(line);
    if (header.size() < 1 || header[0] != "client_id")
        throw ParseError("header must start with client_id: " + path);
    std::vector<std::string> categories(header.begin() + 1, header.end());

    std::vector<std::string> ids;
    std::vector<double> vals;
    std::vector<uint8_t> pres;
    long row = 0;
    while (get_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != header.size()) {
            std::ostringstream msg;
            msg << "row " << row << " has " << fields.size() << " fields, expected "
                << header.size();
            throw ParseError(msg.str());
        }
        ids.push_back(fields[0]);
        for (size_t k = 1; k < fields.size(); ++k) {
            if (fields[k].empty()) {
                vals.push_back(0.0);
                pres.push_back(0);
            } else {
                vals.push_back(parse_double(fields[k], row, static_cast<long>(k)));
                pres.push_back(1);
            }
        }
    }

    TransactionTable table(std::move(ids), std::move(categories));
    const auto K = table.cols();
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index k = 0; k < K; ++k)
            table.values(i, k) = vals[static_cast<size_t>(i * K + k)];
    table.present = std::move(pres);
    table.validate();
    return table;
}

void save_table(const std::string& path, const TransactionTable& table) {
    auto out = open_out(path);
    out << "client_id";
    for (const auto& c : table.categories) out << ',' << c;
    out << '\n';
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        out << table.client_ids[static_cast<size_t>(i)];
        for (Eigen::Index k = 0; k < table.cols(); ++k) {
            out << ',';
            if (table.is_present(i, k)) out << format_double(table.values(i, k));
        }
        out << '\n';
    }
}

SociodemoTable load_sociodemo(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!get_line(in, line)) throw ParseError("empty file, expected header: " + path);
    auto header = split_line(line);
    if (header.size() != 1 + kSociodemoAttributes.size() || header[0] != "client_id")
        throw ParseError("sociodemo header must be client_id plus the six attributes");
    for (size_t a = 0; a < kSociodemoAttributes.size(); ++a)
        if (header[a + 1] != kSociodemoAttributes[a])
            throw ParseError(std::string("unexpected sociodemo column '") + header[a + 1] +
                             "', expected " + kSociodemoAttributes[a]);

    SociodemoTable table;
    long row = 0;
    while (get_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != header.size()) {
            std::ostringstream msg;
            msg << "row " << row << " has " << fields.size() << " fields, expected "
                << header.size();
            throw ParseError(msg.str());
        }
        table.client_ids.push_back(fields[0]);
        for (size_t a = 0; a < kSociodemoAttributes.size(); ++a) {
            if (fields[a + 1].empty())
                throw ParseError(std::string("empty sociodemo value at row ") +
                                 std::to_string(row) + ", attribute " + kSociodemoAttributes[a]);
            table.values[a].push_back(fields[a + 1]);
        }
    }
    table.rebuild_vocab();
    table.validate();
    return table;
}

void save_sociodemo(const std::string& path, const SociodemoTable& table) {
    auto out = open_out(path);
    out << "client_id";
    for (const auto* a : kSociodemoAttributes) out << ',' << a;
    out << '\n';
    for (size_t i = 0; i < table.client_ids.size(); ++i) {
        out << table.client_ids[i];
        for (size_t a = 0; a < kSociodemoAttributes.size(); ++a) out << ',' << table.values[a][i];
        out << '\n';
    }
}

EmbeddingSet load_embeddings(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!get_line(in, line)) throw ParseError("empty file, expected header: " + path);
    std::string source;
    // Optional "# source: ..." provenance line precedes the header.
    while (!line.empty() && line[0] == '#') {
        const std::string prefix = "# source: ";
        if (line.rfind(prefix, 0) == 0) source = line.substr(prefix.size());
        if (!get_line(in, line)) throw ParseError("missing header: " + path);
    }
    auto header = split_line(line);
    if (header.empty() || header[0] != "client_id")
        throw ParseError("embeddings header must start with client_id");
    const long dim = static_cast<long>(header.size()) - 1;

    std::vector<std::string> ids;
    std::vector<double> vals;
    long row = 0;
    while (get_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (static_cast<long>(fields.size()) != dim + 1)
            throw ParseError("embedding row " + std::to_string(row) + " has wrong field count");
        ids.push_back(fields[0]);
        for (long k = 0; k < dim; ++k)
            vals.push_back(parse_double(fields[static_cast<size_t>(k + 1)], row, k + 1));
    }
    EmbeddingSet set;
    set.client_ids = std::move(ids);
    set.source = std::move(source);
    set.vectors.resize(static_cast<Eigen::Index>(set.client_ids.size()), dim);
    for (Eigen::Index i = 0; i < set.vectors.rows(); ++i)
        for (Eigen::Index k = 0; k < dim; ++k)
            set.vectors(i, k) = vals[static_cast<size_t>(i * dim + k)];
    return set;
}

void save_embeddings(const std::string& path, const EmbeddingSet& set) {
    auto out = open_out(path);
    if (!set.source.empty()) out << "# source: " << set.source << '\n';
    out << "client_id";
    for (Eigen::Index k = 0; k < set.dim(); ++k) out << ",e" << k;
    out << '\n';
    for (Eigen::Index i = 0; i < set.size(); ++i) {
        out << set.client_ids[static_cast<size_t>(i)];
        for (Eigen::Index k = 0; k < set.dim(); ++k)
            out << ',' << format_double(set.vectors(i, k));
        out << '\n';
    }
}

void save_labels(const std::string& path, const std::vector<std::string>& ids,
                 const std::vector<int>& labels, const std::string& column_name) {
    if (ids.size() != labels.size())
        throw std::invalid_argument("save_labels: ids/labels size mismatch");
    auto out = open_out(path);
    out << "client_id," << column_name << '\n';
    for (size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << labels[i] << '\n';
}

std::vector<int> load_labels(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!get_line(in, line)) throw ParseError("empty file, expected header: " + path);
    std::vector<int> labels;
    long row = 0;
    while (get_line(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != 2)
            throw ParseError("label row " + std::to_string(row) + " has wrong field count");
        labels.push_back(static_cast<int>(parse_double(fields[1], row, 1)));
    }
    return labels;
}

}  // namespace txnembed::csv
