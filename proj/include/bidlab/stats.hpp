#pragma once

// Pearson correlation of flattened matrices and term vectors, with Student-t
// p-values.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bidlab/matrix.hpp"
#include "bidlab/tfidf.hpp"

namespace bidlab {

enum class FlattenMode { full, off_diagonal, upper_triangle };

std::string_view to_string(FlattenMode mode);
FlattenMode parse_flatten_mode(std::string_view name);

// Row-major; off_diagonal and upper_triangle require a square matrix.
std::vector<double> flatten(const DenseMatrix& m, FlattenMode mode);

// Throws undefined_correlation when either input has zero variance and
// length_mismatch on unequal sizes.
double pearson(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided P(|T| >= |t|) for Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

struct CorrelationResult {
    double r = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
    std::size_t n = 0;
    FlattenMode mode = FlattenMode::full;
};

// df = n - 2; p from t = r sqrt(df / (1 - r^2)). Throws shape_mismatch.
CorrelationResult correlate(std::span<const double> a, std::span<const double> b,
                            FlattenMode mode = FlattenMode::full);
CorrelationResult correlate_matrices(const DenseMatrix& a, const DenseMatrix& b,
                                     FlattenMode mode = FlattenMode::full);

std::string correlation_json(const CorrelationResult& result);

struct TermCorrelationTable {
    Labels labels;
    DenseMatrix values;         // NaN where undefined
    std::vector<bool> constant;  // vectors with zero variance
};

// Pairwise Pearson r over full-dictionary weight vectors, diagonal 1.
TermCorrelationTable correlate_term_vectors(const std::vector<WeightVector>& weights);

}  // namespace bidlab
