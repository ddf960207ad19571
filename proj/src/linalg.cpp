// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include "ziprerank/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ziprerank/error.hpp"

namespace ziprerank {
namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double x : values) {
        if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, std::string(what) + " contains NaN or infinity");
    }
}

void require_same_dim(std::size_t a, std::size_t b) {
    if (a != b) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "dimension " + std::to_string(a) + " does not match " + std::to_string(b));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::kDimensionMismatch, "matrix data length " + std::to_string(data_.size()) +
                                                       " != rows * cols = " + std::to_string(rows_ * cols_));
    }
    require_finite(data_, "matrix");
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols, std::vector<double>(rows * cols, 0.0));
}

Matrix Matrix::from_rows(const std::vector<RealVector>& rows) {
    if (rows.empty()) return Matrix();
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        require_same_dim(r.size(), cols);
        data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(data));
}

std::span<const double> Matrix::row(std::size_t r) const {
    if (r >= rows_) throw Error(ErrorCode::kIndexOutOfRange, "row " + std::to_string(r));
    return {data_.data() + r * cols_, cols_};
}

std::span<double> Matrix::row(std::size_t r) {
    if (r >= rows_) throw Error(ErrorCode::kIndexOutOfRange, "row " + std::to_string(r));
    return {data_.data() + r * cols_, cols_};
}

SimilarityMatrix::SimilarityMatrix(std::size_t n_query, std::size_t n_visual, std::vector<double> values)
    : n_query_(n_query), n_visual_(n_visual), s_(std::move(values)) {
    if (s_.size() != n_query_ * n_visual_) {
        throw Error(ErrorCode::kDimensionMismatch, "similarity data length does not match shape");
    }
    constexpr double kSlack = 1e-12;
    for (double x : s_) {
        if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "similarity matrix");
        if (x < -1.0 - kSlack || x > 1.0 + kSlack) {
            throw Error(ErrorCode::kInvalidArgument, "similarity " + std::to_string(x) + " outside [-1, 1]");
        }
    }
}

std::span<const double> SimilarityMatrix::query_row(std::size_t t) const {
    if (t >= n_query_) throw Error(ErrorCode::kIndexOutOfRange, "query row " + std::to_string(t));
    return {s_.data() + t * n_visual_, n_visual_};
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_dim(a.size(), b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double l2_norm(std::span<const double> v) {
    // Scaled accumulation so huge or tiny entries neither overflow nor underflow.
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (double x : v) {
        const double y = x / scale;
        acc += y * y;
    }
    return scale * std::sqrt(acc);
}

RealVector l2_normalize(std::span<const double> v) {
    require_finite(v, "vector");
    const double n = l2_norm(v);
    if (n < kZeroNormThreshold) throw Error(ErrorCode::kZeroNorm, "cannot normalize a zero vector");
    RealVector out(v.begin(), v.end());
    for (double& x : out) x /= n;
    return out;
}

double cosine_similarity(std::span<const double> h, std::span<const double> v) {
    require_same_dim(h.size(), v.size());
    const double nh = l2_norm(h);
    const double nv = l2_norm(v);
    if (nh < kZeroNormThreshold || nv < kZeroNormThreshold) {
        throw Error(ErrorCode::kZeroNorm, "cosine of a zero vector");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) acc += (h[i] / nh) * (v[i] / nv);
    return std::clamp(acc, -1.0, 1.0);
}

SimilarityMatrix similarity_matrix(const EmbeddingMatrix& queries, const EmbeddingMatrix& visual) {
    require_same_dim(queries.dim(), visual.dim());

    auto normalize_rows = [](const EmbeddingMatrix& m, const char* which) {
        std::vector<RealVector> rows(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) {
            const double n = l2_norm(m.row(r));
            if (n < kZeroNormThreshold) {
                throw Error(ErrorCode::kZeroNorm, std::string(which) + " row " + std::to_string(r) + " has zero norm");
            }
            rows[r].assign(m.row(r).begin(), m.row(r).end());
            for (double& x : rows[r]) x /= n;
        }
        return rows;
    };
    const auto hq = normalize_rows(queries, "query");
    const auto vv = normalize_rows(visual, "visual");

    std::vector<double> s(queries.rows() * visual.rows());
    for (std::size_t t = 0; t < hq.size(); ++t) {
        for (std::size_t j = 0; j < vv.size(); ++j) {
            double acc = 0.0;
            for (std::size_t d = 0; d < hq[t].size(); ++d) acc += hq[t][d] * vv[j][d];
            s[t * vv.size() + j] = std::clamp(acc, -1.0, 1.0);
        }
    }
    return SimilarityMatrix(queries.rows(), visual.rows(), std::move(s));
}

}  // namespace ziprerank
