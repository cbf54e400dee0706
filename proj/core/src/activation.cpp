#include "dtnet/activation.hpp"

#include <algorithm>
#include <cmath>

#include "dtnet/errors.hpp"

namespace dtnet {

int power_tree_depth(int factor_count) {
    if (factor_count < 1) throw InputError("power_tree_depth: need at least one factor");
    if (factor_count == 1) return 0;
    int half = factor_count / 2;
    return 1 + std::max(power_tree_depth(half), power_tree_depth(factor_count - half));
}

int poly_mult_depth(const std::vector<double>& coeffs) {
    int depth = 0;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        if (coeffs[k] != 0.0) depth = std::max(depth, power_tree_depth(static_cast<int>(k) + 1));
    return depth;
}

PolyActivation PolyActivation::from_coefficients(std::string name, std::vector<double> coeffs) {
    for (double c : coeffs)
        if (!std::isfinite(c)) throw InputError("activation '" + name + "': non-finite coefficient");
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    PolyActivation a;
    a.name = std::move(name);
    a.depth = poly_mult_depth(coeffs);
    a.coeffs = std::move(coeffs);
    return a;
}

int PolyActivation::degree() const {
    return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1;
}

double PolyActivation::eval(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

namespace {

// Balanced product of {c, x, x, ..., x} with k copies of x, associated the
// same way the slot evaluator associates it.
double balanced_term(double c, double x, int k) {
    std::vector<double> factors(static_cast<std::size_t>(k) + 1, x);
    factors[0] = c;
    // repeatedly halve the factor list
    auto product = [&](auto&& self, std::size_t lo, std::size_t hi) -> double {
        if (hi - lo == 1) return factors[lo];
        std::size_t mid = lo + (hi - lo) / 2;
        return self(self, lo, mid) * self(self, mid, hi);
    };
    return product(product, 0, factors.size());
}

}  // namespace

double PolyActivation::eval_power_tree(double x) const {
    double acc = coeffs.empty() ? 0.0 : coeffs[0];
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        if (coeffs[k] != 0.0) acc += balanced_term(coeffs[k], x, static_cast<int>(k));
    return acc;
}

double PolyActivation::grad(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + coeffs[i] * static_cast<double>(i);
    return acc;
}

const std::vector<PolyActivation>& builtin_activations() {
    static const std::vector<PolyActivation> table = {
        PolyActivation::from_coefficients("approxSigmoid", {0.5, 3.0 / 20.0, 0.0, -3.0 / 2000.0}),
        PolyActivation::from_coefficients("approxRelu", {0.47, 0.50, 0.09}),
        PolyActivation::from_coefficients("approxRelu3", {0.47, 0.50, 0.09, -1.7e-10}),
        PolyActivation::from_coefficients("swish3", {0.24, 0.50, 0.10, -1.2e-10}),
        PolyActivation::from_coefficients(
            "approxRelu6", {0.21, 0.50, 0.23, 7.6e-8, -1.1e-2, -3.5e-9, 2.3e-4}),
    };
    return table;
}

const PolyActivation& builtin_activation(std::string_view name) {
    for (const auto& a : builtin_activations())
        if (a.name == name) return a;
    throw InputError("unknown activation: " + std::string(name));
}

}  // namespace dtnet
