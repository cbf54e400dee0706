#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtnet/matrix.hpp"

namespace dtnet {

enum class ColumnKind { categorical, continuous };
enum class ColumnRole { feature, label };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::continuous;
    ColumnRole role = ColumnRole::feature;
};

// One table cell. Raw categorical cells hold a token; continuous and encoded
// cells hold a number; missing cells hold neither.
struct Cell {
    enum class State { missing, number, token };
    State state = State::missing;
    double value = 0.0;
    std::string text;

    static Cell missing() { return {}; }
    static Cell number(double v) { return {State::number, v, {}}; }
    static Cell token(std::string t) { return {State::token, 0.0, std::move(t)}; }

    bool is_missing() const { return state == State::missing; }
    bool is_number() const { return state == State::number; }
};

struct Dataset {
    std::vector<ColumnSpec> columns;
    std::vector<std::vector<Cell>> rows;  // one Cell per column

    std::size_t n() const { return rows.size(); }
    std::size_t feature_count() const;
    // Index of the label column, or nullopt for unlabeled data.
    std::optional<std::size_t> label_column() const;
    std::vector<std::size_t> feature_columns() const;
};

// Fitted per-column statistics. Categorical tokens map to integer codes in
// first-appearance order; continuous columns carry (min, max) and the mean of
// the present values for imputation.
struct Preprocessor {
    std::map<std::string, std::map<std::string, int>> categorical_maps;
    std::map<std::string, std::pair<double, double>> minmax;
    std::map<std::string, double> means;
};

// Token that stands in for a missing categorical cell.
inline constexpr const char* kMissingToken = "‹missing›";

// Reads a comma-separated file with a header row that must match the schema
// names in order. Empty cells and "NA" are recorded as missing.
Dataset load_csv(const std::string& path, const std::vector<ColumnSpec>& schema);

// Writes the dataset back out (numbers with round-trip precision).
void write_csv(const Dataset& ds, const std::string& path);

Preprocessor fit_preprocessor(const Dataset& train);

// Continuous: impute mean, scale to [0,1] by the fitted range, clip.
// Categorical: replace tokens by codes; unseen tokens get code k (one past
// the fitted range).
Dataset transform(const Preprocessor& p, const Dataset& ds);

// Disjoint row partition, deterministic for a fixed seed. Fractions must be
// positive and sum to 1; empty partitions are an error.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, double test_fraction,
                                  std::uint64_t seed);

// Feature cells as a numeric matrix; requires a transformed dataset.
Matrix feature_matrix(const Dataset& ds);
// Encoded label column as class indices; requires a transformed dataset.
std::vector<int> label_vector(const Dataset& ds);
// Copy of ds without its label column.
Dataset drop_label(const Dataset& ds);
// Wraps a numeric matrix as an unlabeled all-continuous dataset.
Dataset dataset_from_matrix(const Matrix& X);
// Keeps the given rows only.
Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx);

}  // namespace dtnet
