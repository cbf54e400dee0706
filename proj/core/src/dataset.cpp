#include "dtnet/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dtnet/errors.hpp"
#include "dtnet/rng.hpp"

namespace dtnet {

std::size_t Dataset::feature_count() const {
    std::size_t d = 0;
    for (const auto& c : columns)
        if (c.role == ColumnRole::feature) ++d;
    return d;
}

std::optional<std::size_t> Dataset::label_column() const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].role == ColumnRole::label) return i;
    return std::nullopt;
}

std::vector<std::size_t> Dataset::feature_columns() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].role == ColumnRole::feature) idx.push_back(i);
    return idx;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    out.push_back(field);
    return out;
}

bool is_missing_marker(const std::string& s) { return s.empty() || s == "NA"; }

void check_schema(const std::vector<ColumnSpec>& schema) {
    if (schema.empty()) throw InputError("schema has no columns");
    int labels = 0;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].role == ColumnRole::label) ++labels;
        for (std::size_t j = i + 1; j < schema.size(); ++j)
            if (schema[i].name == schema[j].name)
                throw InputError("duplicate column name: " + schema[i].name);
    }
    if (labels > 1) throw InputError("schema declares more than one label column");
}

Cell parse_cell(const std::string& raw, const ColumnSpec& col) {
    if (is_missing_marker(raw)) return Cell::missing();
    if (col.kind == ColumnKind::continuous) {
        char* end = nullptr;
        errno = 0;
        double v = std::strtod(raw.c_str(), &end);
        if (end == raw.c_str() || *end != '\0' || errno == ERANGE)
            throw InputError("column '" + col.name + "': cannot parse number '" + raw + "'");
        return Cell::number(v);
    }
    return Cell::token(raw);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::vector<ColumnSpec>& schema) {
    check_schema(schema);
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty file, expected a header row");
    auto header = split_csv_line(line);
    if (header.size() != schema.size())
        throw InputError(path + ": header has " + std::to_string(header.size()) +
                         " columns, schema expects " + std::to_string(schema.size()));
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] != schema[i].name)
            throw InputError(path + ": unknown column '" + header[i] + "', schema expects '" +
                             schema[i].name + "'");

    Dataset ds;
    ds.columns = schema;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != schema.size())
            throw InputError(path + ":" + std::to_string(lineno) + ": row has " +
                             std::to_string(fields.size()) + " cells, expected " +
                             std::to_string(schema.size()));
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) row.push_back(parse_cell(fields[i], schema[i]));
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

namespace {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

}  // namespace

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    for (std::size_t i = 0; i < ds.columns.size(); ++i)
        out << (i ? "," : "") << ds.columns[i].name;
    out << "\n";
    for (const auto& row : ds.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            const Cell& c = row[i];
            if (c.is_missing()) continue;  // empty field
            if (c.is_number())
                out << format_number(c.value);
            else
                out << c.text;
        }
        out << "\n";
    }
}

Preprocessor fit_preprocessor(const Dataset& train) {
    if (train.n() == 0) throw InputError("fit_preprocessor: empty dataset");
    Preprocessor p;
    for (std::size_t ci = 0; ci < train.columns.size(); ++ci) {
        const ColumnSpec& col = train.columns[ci];
        if (col.kind == ColumnKind::categorical) {
            std::map<std::string, int>& codes = p.categorical_maps[col.name];
            int next = 0;
            for (const auto& row : train.rows) {
                const Cell& c = row[ci];
                std::string tok = c.is_missing() ? kMissingToken : c.text;
                if (!codes.contains(tok)) codes.emplace(tok, next++);
            }
        } else {
            double lo = 0, hi = 0, sum = 0;
            std::size_t count = 0;
            for (const auto& row : train.rows) {
                const Cell& c = row[ci];
                if (c.is_missing()) continue;
                if (count == 0) {
                    lo = hi = c.value;
                } else {
                    lo = std::min(lo, c.value);
                    hi = std::max(hi, c.value);
                }
                sum += c.value;
                ++count;
            }
            if (count == 0) throw InputError("column '" + col.name + "': all values missing");
            if (lo == hi)
                throw InputError("column '" + col.name + "': constant value " + format_number(lo) +
                                 ", range scaling undefined");
            p.minmax[col.name] = {lo, hi};
            p.means[col.name] = sum / static_cast<double>(count);
        }
    }
    return p;
}

Dataset transform(const Preprocessor& p, const Dataset& ds) {
    Dataset out;
    out.columns = ds.columns;
    out.rows.reserve(ds.n());
    for (const auto& row : ds.rows) {
        std::vector<Cell> r;
        r.reserve(row.size());
        for (std::size_t ci = 0; ci < row.size(); ++ci) {
            const ColumnSpec& col = ds.columns[ci];
            const Cell& c = row[ci];
            if (col.kind == ColumnKind::categorical) {
                auto mit = p.categorical_maps.find(col.name);
                if (mit == p.categorical_maps.end())
                    throw InputError("column '" + col.name + "' was not fitted");
                const auto& codes = mit->second;
                std::string tok = c.is_missing() ? kMissingToken : c.text;
                auto it = codes.find(tok);
                // unseen token: reserved code one past the fitted range
                int code = it != codes.end() ? it->second : static_cast<int>(codes.size());
                r.push_back(Cell::number(code));
            } else {
                auto mit = p.minmax.find(col.name);
                if (mit == p.minmax.end())
                    throw InputError("column '" + col.name + "' was not fitted");
                auto [lo, hi] = mit->second;
                double v = c.is_missing() ? p.means.at(col.name) : c.value;
                double scaled = (v - lo) / (hi - lo);
                r.push_back(Cell::number(std::clamp(scaled, 0.0, 1.0)));
            }
        }
        out.rows.push_back(std::move(r));
    }
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, double test_fraction,
                                  std::uint64_t seed) {
    if (train_fraction <= 0.0 || test_fraction <= 0.0)
        throw InputError("split: fractions must be positive");
    if (std::abs(train_fraction + test_fraction - 1.0) > 1e-9)
        throw InputError("split: fractions must sum to 1");
    std::vector<std::size_t> idx(ds.n());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(idx);
    auto train_n = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(ds.n())));
    if (train_n == 0 || train_n == ds.n()) throw InputError("split: a partition would be empty");
    std::vector<std::size_t> head(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(train_n));
    std::vector<std::size_t> tail(idx.begin() + static_cast<std::ptrdiff_t>(train_n), idx.end());
    return {take_rows(ds, head), take_rows(ds, tail)};
}

Matrix feature_matrix(const Dataset& ds) {
    auto fcols = ds.feature_columns();
    Matrix X(ds.n(), fcols.size());
    for (std::size_t i = 0; i < ds.n(); ++i) {
        for (std::size_t j = 0; j < fcols.size(); ++j) {
            const Cell& c = ds.rows[i][fcols[j]];
            if (!c.is_number())
                throw InputError("feature_matrix: non-numeric cell at row " + std::to_string(i) +
                                 "; transform the dataset first");
            X(i, j) = c.value;
        }
    }
    return X;
}

std::vector<int> label_vector(const Dataset& ds) {
    auto lc = ds.label_column();
    if (!lc) throw InputError("label_vector: dataset has no label column");
    std::vector<int> y(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const Cell& c = ds.rows[i][*lc];
        if (!c.is_number())
            throw InputError("label_vector: unencoded label at row " + std::to_string(i));
        y[i] = static_cast<int>(std::lround(c.value));
    }
    return y;
}

Dataset drop_label(const Dataset& ds) {
    auto lc = ds.label_column();
    if (!lc) return ds;
    Dataset out;
    for (std::size_t i = 0; i < ds.columns.size(); ++i)
        if (i != *lc) out.columns.push_back(ds.columns[i]);
    out.rows.reserve(ds.n());
    for (const auto& row : ds.rows) {
        std::vector<Cell> r;
        r.reserve(row.size() - 1);
        for (std::size_t i = 0; i < row.size(); ++i)
            if (i != *lc) r.push_back(row[i]);
        out.rows.push_back(std::move(r));
    }
    return out;
}

Dataset dataset_from_matrix(const Matrix& X) {
    Dataset ds;
    ds.columns.reserve(X.cols());
    for (std::size_t j = 0; j < X.cols(); ++j)
        ds.columns.push_back({"f" + std::to_string(j), ColumnKind::continuous, ColumnRole::feature});
    ds.rows.reserve(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        std::vector<Cell> row;
        row.reserve(X.cols());
        for (std::size_t j = 0; j < X.cols(); ++j) row.push_back(Cell::number(X(i, j)));
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.columns = ds.columns;
    out.rows.reserve(idx.size());
    for (std::size_t i : idx) out.rows.push_back(ds.rows.at(i));
    return out;
}

}  // namespace dtnet
