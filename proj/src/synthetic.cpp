// Copyright 2026 The ziprerank Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>
#include <string>

#include "ziprerank/error.hpp"
#include "ziprerank/harness.hpp"
#include "ziprerank/rng.hpp"

namespace ziprerank::harness {
namespace {

Matrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    std::vector<double> data(rows * cols);
    for (double& x : data) x = rng.normal();
    return Matrix(rows, cols, std::move(data));
}

std::vector<std::size_t> sample_positions(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

void SyntheticConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfigInvalid, msg); };
    if (n_images < 1 || tokens_min < 1 || embed_dim < 1 || n_query_tokens < 1 || planted_per_image < 1) {
        fail("synthetic counts must be >= 1");
    }
    if (tokens_max < tokens_min) fail("tokens_max < tokens_min");
    if (planted_per_image > tokens_min) fail("planted_per_image exceeds tokens_min");
    if (!(noise_scale >= 0.0)) fail("noise_scale must be >= 0");
}

SyntheticInstance generate_instance(const SyntheticConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    SyntheticInstance inst;
    inst.query = gaussian_matrix(rng, cfg.n_query_tokens, cfg.embed_dim);
    inst.relevant_image = static_cast<std::size_t>(rng.uniform_below(cfg.n_images));
    inst.images.reserve(cfg.n_images);
    inst.planted.resize(cfg.n_images);

    for (std::size_t i = 0; i < cfg.n_images; ++i) {
        const auto n_tokens = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(cfg.tokens_min), static_cast<std::int64_t>(cfg.tokens_max)));
        Matrix image = gaussian_matrix(rng, n_tokens, cfg.embed_dim);
        if (cfg.plant_all_images || i == inst.relevant_image) {
            inst.planted[i] = sample_positions(rng, n_tokens, cfg.planted_per_image);
            for (std::size_t pos : inst.planted[i]) {
                const auto source = inst.query.row(static_cast<std::size_t>(rng.uniform_below(cfg.n_query_tokens)));
                auto token = image.row(pos);
                for (std::size_t d = 0; d < token.size(); ++d) {
                    token[d] = source[d];
                    if (cfg.noise_scale > 0.0) token[d] += cfg.noise_scale * rng.normal();
                }
            }
        }
        inst.images.push_back(std::move(image));
    }
    return inst;
}

}  // namespace ziprerank::harness
