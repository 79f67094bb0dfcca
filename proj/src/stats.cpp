#include "bidlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "bidlab/error.hpp"

namespace bidlab {

std::string_view to_string(FlattenMode mode) {
    switch (mode) {
        case FlattenMode::full: return "full";
        case FlattenMode::off_diagonal: return "off-diagonal";
        case FlattenMode::upper_triangle: return "upper-triangle";
    }
    return "full";
}

FlattenMode parse_flatten_mode(std::string_view name) {
    if (name == "full") return FlattenMode::full;
    if (name == "off-diagonal") return FlattenMode::off_diagonal;
    if (name == "upper-triangle") return FlattenMode::upper_triangle;
    throw input_error("invalid_argument", "unknown flatten mode '" + std::string(name) + "'");
}

std::vector<double> flatten(const DenseMatrix& m, FlattenMode mode) {
    if (mode == FlattenMode::full) return {m.flat().begin(), m.flat().end()};
    if (m.rows() != m.cols())
        throw input_error("shape_mismatch", "off-diagonal flattening needs a square matrix");
    std::vector<double> out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = mode == FlattenMode::upper_triangle ? i + 1 : 0; j < m.cols(); ++j)
            if (i != j) out.push_back(m(i, j));
    return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw input_error("length_mismatch", "correlated vectors differ in length");
    const std::size_t n = a.size();
    if (n < 2) throw input_error("undefined_correlation", "correlation needs at least 2 values");
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0)
        throw numerical_error("undefined_correlation", "an input has zero variance");
    const double r = sab / std::sqrt(saa * sbb);
    return std::clamp(r, -1.0, 1.0);
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz, valid for x < (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    constexpr int max_iter = 100000;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw numerical_error("no_convergence", "incomplete beta continued fraction did not converge");
}

// I_x(a, b) with 1 - x supplied separately to keep precision near x = 1.
double incomplete_beta(double a, double b, double x, double one_minus_x) {
    if (x <= 0.0) return 0.0;
    if (one_minus_x <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(one_minus_x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, one_minus_x) / b;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw input_error("invalid_argument", "beta parameters must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw input_error("invalid_argument", "x must lie in [0, 1]");
    return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_sf(double t, double df) {
    if (!(df > 0.0)) throw input_error("invalid_argument", "degrees of freedom must be > 0");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    const double t2 = t * t;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2));
}

CorrelationResult correlate(std::span<const double> a, std::span<const double> b, FlattenMode mode) {
    if (a.size() != b.size()) throw input_error("shape_mismatch", "correlated inputs differ in size");
    if (a.size() < 3) throw input_error("undefined_correlation", "correlation needs at least 3 values");
    CorrelationResult out;
    out.mode = mode;
    out.n = a.size();
    out.df = out.n - 2;
    out.r = pearson(a, b);
    const double df = static_cast<double>(out.df);
    const double one_minus = 1.0 - out.r * out.r;
    out.p_value = one_minus <= 0.0 ? 0.0 : student_t_sf(out.r * std::sqrt(df / one_minus), df);
    return out;
}

CorrelationResult correlate_matrices(const DenseMatrix& a, const DenseMatrix& b, FlattenMode mode) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw input_error("shape_mismatch", "matrices differ in shape");
    const auto fa = flatten(a, mode);
    const auto fb = flatten(b, mode);
    return correlate(fa, fb, mode);
}

std::string correlation_json(const CorrelationResult& result) {
    nlohmann::ordered_json j;
    j["r"] = result.r;
    j["df"] = result.df;
    j["p_value"] = result.p_value;
    j["n"] = result.n;
    j["flatten_mode"] = std::string(to_string(result.mode));
    return j.dump(1) + "\n";
}

namespace {

bool has_variance(const std::vector<double>& v) {
    for (double x : v)
        if (x != v.front()) return true;
    return false;
}

}  // namespace

TermCorrelationTable correlate_term_vectors(const std::vector<WeightVector>& weights) {
    const std::size_t k = weights.size();
    TermCorrelationTable table;
    table.values = DenseMatrix(k, k, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < k; ++i) {
        if (weights[i].weights.size() != weights.front().weights.size())
            throw input_error("shape_mismatch", "weight vectors use different dictionaries");
        table.labels.push_back(weights[i].owner);
        table.constant.push_back(weights[i].weights.size() < 2 || !has_variance(weights[i].weights));
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (table.constant[i]) continue;
        table.values(i, i) = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            if (table.constant[j]) continue;
            const double r = pearson(weights[i].weights, weights[j].weights);
            table.values(i, j) = r;
            table.values(j, i) = r;
        }
    }
    return table;
}

}  // namespace bidlab
