// The latent representation shared by the encoder and the generators: a
// rows x cols matrix whose rows are probability distributions.

#pragma once

#include <string>
#include <vector>

#include "qlg/errors.hpp"

namespace qlg {

struct LatentMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;  // row-major

    LatentMatrix() = default;
    LatentMatrix(int r, int c) : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }

    double row_sum(int r) const {
        double s = 0.0;
        for (int c = 0; c < cols; ++c) s += at(r, c);
        return s;
    }
};

// Row normalization with a uniform fallback for rows whose mass is below eps
// (a dead row early in training must not kill the run).
inline LatentMatrix normalize_rows(const LatentMatrix& h, double eps = 1e-9) {
    LatentMatrix out(h.rows, h.cols);
    for (int r = 0; r < h.rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < h.cols; ++c) {
            const double v = h.at(r, c);
            if (v < 0.0)
                throw DomainError("normalize_rows: negative entry at row " + std::to_string(r));
            sum += v;
        }
        if (sum < eps) {
            const double u = 1.0 / h.cols;
            for (int c = 0; c < h.cols; ++c) out.at(r, c) = u;
        } else {
            for (int c = 0; c < h.cols; ++c) out.at(r, c) = h.at(r, c) / sum;
        }
    }
    return out;
}

}  // namespace qlg
