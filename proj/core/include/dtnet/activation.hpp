#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dtnet {

// Multiplicative depth of a balanced product over `factor_count` encrypted
// factors: split into halves, multiply recursively. Equals ceil(log2 n) but is
// computed by the same recursion the evaluator uses.
int power_tree_depth(int factor_count);

// Depth of evaluating the polynomial when every term c_k * x^k is a balanced
// product over its k+1 factors (the coefficient is part of the encrypted
// model, so it counts as a factor). Zero coefficients contribute nothing.
int poly_mult_depth(const std::vector<double>& coeffs);

// Polynomial activation function. Coefficients are degree-ascending:
// coeffs[k] multiplies x^k.
struct PolyActivation {
    std::string name;
    std::vector<double> coeffs;
    int depth = 0;  // multiplicative depth of the balanced evaluation tree

    static PolyActivation from_coefficients(std::string name, std::vector<double> coeffs);

    int degree() const;

    // Horner evaluation.
    double eval(double x) const;

    // Reference route: sums balanced term products, mirroring the encrypted
    // evaluation order. Agrees with eval() to ~1e-12 relative.
    double eval_power_tree(double x) const;

    // Derivative polynomial at x.
    double grad(double x) const;
};

// Registry of the five stock activations (approxSigmoid, approxRelu,
// approxRelu3, swish3, approxRelu6). Throws InputError for unknown names.
const PolyActivation& builtin_activation(std::string_view name);
const std::vector<PolyActivation>& builtin_activations();

}  // namespace dtnet
