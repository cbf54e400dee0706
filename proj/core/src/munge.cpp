#include "dtnet/munge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtnet/errors.hpp"
#include "dtnet/rng.hpp"

namespace dtnet {

namespace {

void require_numeric_features(const Dataset& ds) {
    for (const auto& row : ds.rows)
        for (std::size_t c : ds.feature_columns())
            if (!row[c].is_number())
                throw InputError("munge: seed set must be preprocessed (numeric, no missing cells)");
}

}  // namespace

std::size_t nearest_neighbor(const Dataset& seed_rows, std::size_t i) {
    if (seed_rows.n() < 2) throw InputError("nearest_neighbor: need at least two rows");
    if (i >= seed_rows.n()) throw InputError("nearest_neighbor: row index out of range");
    auto fcols = seed_rows.feature_columns();
    double best_dist = std::numeric_limits<double>::infinity();
    std::size_t best = i;
    for (std::size_t j = 0; j < seed_rows.n(); ++j) {
        if (j == i) continue;
        double sq = 0.0, hamming = 0.0;
        for (std::size_t c : fcols) {
            double a = seed_rows.rows[i][c].value;
            double b = seed_rows.rows[j][c].value;
            if (seed_rows.columns[c].kind == ColumnKind::continuous) {
                sq += (a - b) * (a - b);
            } else {
                hamming += a != b ? 1.0 : 0.0;
            }
        }
        double dist = std::sqrt(sq) + hamming;
        if (dist < best_dist) {
            best_dist = dist;
            best = j;
        }
    }
    return best;
}

Dataset munge_generate(const Dataset& seed_set, const MungeParams& params) {
    if (seed_set.n() == 0) throw InputError("munge_generate: empty seed set");
    if (seed_set.n() < 2) throw InputError("munge_generate: need at least two seed rows");
    if (params.swap_prob < 0.0 || params.swap_prob > 1.0)
        throw InputError("munge_generate: swap_prob must be in [0,1]");
    if (params.local_scale <= 0.0) throw InputError("munge_generate: local_scale must be positive");
    if (params.target_size < 1) throw InputError("munge_generate: target_size must be >= 1");
    require_numeric_features(seed_set);

    auto fcols = seed_set.feature_columns();
    const std::size_t n = seed_set.n();

    // the seed set is never mutated, so neighbor assignments are fixed
    std::vector<std::size_t> neighbor(n);
    for (std::size_t i = 0; i < n; ++i) neighbor[i] = nearest_neighbor(seed_set, i);

    Dataset out;
    out.columns.reserve(fcols.size());
    for (std::size_t c : fcols) out.columns.push_back(seed_set.columns[c]);

    out.rows.reserve(params.target_size);
    for (std::size_t t = 0; t < params.target_size; ++t) {
        std::size_t i = t % n;
        std::size_t j = neighbor[i];
        Rng rng(split_seed(params.seed, t));  // per-row stream
        std::vector<Cell> row;
        row.reserve(fcols.size());
        for (std::size_t c : fcols) {
            double e = seed_set.rows[i][c].value;
            double ep = seed_set.rows[j][c].value;
            bool swap = params.swap_prob > 0.0 && rng.bernoulli(params.swap_prob);
            if (!swap) {
                row.push_back(Cell::number(e));
            } else if (seed_set.columns[c].kind == ColumnKind::categorical) {
                row.push_back(Cell::number(ep));
            } else {
                double sd = std::abs(e - ep) / params.local_scale;
                double v = rng.normal(ep, sd);
                row.push_back(Cell::number(std::clamp(v, 0.0, 1.0)));
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace dtnet
