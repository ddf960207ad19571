// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gtest/gtest.h>

#include <vector>

#include "ziprerank/error.hpp"
#include "ziprerank/linalg.hpp"
#include "ziprerank/rng.hpp"

#define EXPECT_ERROR_CODE(stmt, expected_code)                                      \
    do {                                                                             \
        try {                                                                        \
            stmt;                                                                    \
            ADD_FAILURE() << "expected " << ::ziprerank::error_code_name(expected_code); \
        } catch (const ::ziprerank::Error& e) {                                      \
            EXPECT_EQ(e.code(), expected_code) << e.what();                          \
        }                                                                            \
    } while (0)

namespace testutil {

inline ziprerank::Matrix random_matrix(ziprerank::Rng& rng, std::size_t rows, std::size_t cols) {
    std::vector<double> data(rows * cols);
    for (double& x : data) x = rng.normal();
    return ziprerank::Matrix(rows, cols, std::move(data));
}

inline std::vector<double> random_vector(ziprerank::Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

}  // namespace testutil
