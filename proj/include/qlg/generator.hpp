// The quantum patch generator: T independent parameterized circuits, each
// producing one row of the latent matrix via ancilla post-selection, plus
// exact gradients (parameter-shift rule chained through the post-selection
// quotient in closed form).

#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qlg/errors.hpp"
#include "qlg/latent.hpp"
#include "qlg/parallel.hpp"
#include "qlg/qsim.hpp"
#include "qlg/rng.hpp"

namespace qlg {

using NoiseVector = std::vector<double>;

enum class ForwardMode { analytic, sampled };

struct GeneratorConfig {
    int sub_generators = 5;  // one circuit per latent row
    int data_qubits = 3;
    int ancilla_qubits = 1;
    int layers = 7;
    double noise_lo = 0.0;
    double noise_hi = std::numbers::pi;

    int total_qubits() const { return data_qubits + ancilla_qubits; }
    int row_width() const { return 1 << data_qubits; }
    int params_per_circuit() const { return layers * total_qubits(); }
    int param_count() const { return sub_generators * params_per_circuit(); }

    void validate() const {
        if (sub_generators < 1 || data_qubits < 1 || ancilla_qubits < 0 || layers < 1)
            throw SizeError("generator config counts out of range");
        if (total_qubits() > 20) throw SizeError("too many qubits for dense simulation");
        if (!(noise_lo < noise_hi)) throw DomainError("empty noise range");
    }
};

struct GeneratorParams {
    int sub_generators = 0;
    int layers = 0;
    int qubits = 0;
    std::vector<double> theta;  // [sub][layer][qubit]

    static GeneratorParams zeros(const GeneratorConfig& cfg) {
        cfg.validate();
        GeneratorParams p;
        p.sub_generators = cfg.sub_generators;
        p.layers = cfg.layers;
        p.qubits = cfg.total_qubits();
        p.theta.assign(static_cast<std::size_t>(cfg.param_count()), 0.0);
        return p;
    }

    // Angles initialized uniformly over [0, pi).
    static GeneratorParams random(const GeneratorConfig& cfg, Rng& rng) {
        GeneratorParams p = zeros(cfg);
        for (double& t : p.theta) t = rng.uniform(0.0, std::numbers::pi);
        return p;
    }

    std::size_t count() const { return theta.size(); }

    double& at(int t, int l, int q) {
        return theta[(static_cast<std::size_t>(t) * layers + l) * qubits + q];
    }
    double at(int t, int l, int q) const {
        return theta[(static_cast<std::size_t>(t) * layers + l) * qubits + q];
    }

    std::span<const double> circuit(int t) const {
        const std::size_t n = static_cast<std::size_t>(layers) * qubits;
        return std::span<const double>(theta).subspan(static_cast<std::size_t>(t) * n, n);
    }

    void check_shape(const GeneratorConfig& cfg) const {
        if (sub_generators != cfg.sub_generators || layers != cfg.layers ||
            qubits != cfg.total_qubits() ||
            theta.size() != static_cast<std::size_t>(cfg.param_count()))
            throw ShapeError("generator parameter shape does not match config");
    }
};

inline NoiseVector sample_noise(const GeneratorConfig& cfg, Rng& rng) {
    cfg.validate();
    NoiseVector z(static_cast<std::size_t>(cfg.total_qubits()));
    for (double& a : z) a = rng.uniform(cfg.noise_lo, cfg.noise_hi);
    return z;
}

inline NoiseVector sample_noise(const GeneratorConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    return sample_noise(cfg, rng);
}

namespace detail {

// |z> = (x)RY(alpha_i)|0>, then L layers of RY on every qubit followed by the
// CZ chain (qubit i controls i+1, non-wrapping).
inline StateVector run_circuit(std::span<const double> theta_t, const NoiseVector& z,
                               const GeneratorConfig& cfg) {
    const int n = cfg.total_qubits();
    StateVector s = init_zero_state(n);
    for (int q = 0; q < n; ++q) s = apply_ry(s, q, z[q]);
    for (int l = 0; l < cfg.layers; ++l) {
        for (int q = 0; q < n; ++q) s = apply_ry(s, q, theta_t[static_cast<std::size_t>(l) * n + q]);
        for (int q = 0; q + 1 < n; ++q) s = apply_cz(s, q, q + 1);
    }
    return s;
}

// Raw (un-normalized) probabilities of the kept indices {j * 2^n_ancilla}.
inline std::vector<double> kept_raw_probs(std::span<const double> theta_t, const NoiseVector& z,
                                          const GeneratorConfig& cfg) {
    const std::vector<double> full = probabilities(run_circuit(theta_t, z, cfg));
    std::vector<double> kept(static_cast<std::size_t>(cfg.row_width()));
    const std::size_t step = std::size_t{1} << cfg.ancilla_qubits;
    for (std::size_t j = 0; j < kept.size(); ++j) kept[j] = full[j * step];
    return kept;
}

}  // namespace detail

// One sub-generator: post-selected outcome distribution over 2^data_qubits
// basis states. Entries are non-negative and sum to 1.
inline std::vector<double> run_subgenerator(std::span<const double> theta_t, const NoiseVector& z,
                                            const GeneratorConfig& cfg) {
    cfg.validate();
    if (theta_t.size() != static_cast<std::size_t>(cfg.params_per_circuit()))
        throw ShapeError("sub-generator parameter block has wrong length");
    if (z.size() != static_cast<std::size_t>(cfg.total_qubits()))
        throw ShapeError("noise vector has wrong length");
    return post_select(probabilities(detail::run_circuit(theta_t, z, cfg)), cfg.ancilla_qubits);
}

// Stacks the T sub-generator rows. The same noise vector feeds every circuit,
// so the rows of one sample are correlated through z.
inline LatentMatrix run_generator(const GeneratorParams& params, const NoiseVector& z,
                                  const GeneratorConfig& cfg) {
    cfg.validate();
    params.check_shape(cfg);
    LatentMatrix out(cfg.sub_generators, cfg.row_width());
    for (int t = 0; t < cfg.sub_generators; ++t) {
        std::vector<double> row;
        try {
            row = run_subgenerator(params.circuit(t), z, cfg);
        } catch (const PostSelectError& e) {
            throw PostSelectError("sub-generator " + std::to_string(t) + ": " + e.what());
        }
        for (int j = 0; j < cfg.row_width(); ++j) out.at(t, j) = row[j];
    }
    return out;
}

// Shot-mode forward pass: full-register sampling, then the sampled bitstrings
// are filtered on ancilla = 0 and renormalized. Evaluation only, no gradients.
inline LatentMatrix run_generator_sampled(const GeneratorParams& params, const NoiseVector& z,
                                          const GeneratorConfig& cfg, std::int64_t shots,
                                          std::uint64_t seed) {
    cfg.validate();
    params.check_shape(cfg);
    LatentMatrix out(cfg.sub_generators, cfg.row_width());
    for (int t = 0; t < cfg.sub_generators; ++t) {
        const std::vector<double> full =
            probabilities(detail::run_circuit(params.circuit(t), z, cfg));
        const std::vector<double> freq =
            sample_counts(full, shots, derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<double> row;
        try {
            row = post_select(freq, cfg.ancilla_qubits);
        } catch (const PostSelectError& e) {
            throw PostSelectError("sub-generator " + std::to_string(t) + ": " + e.what());
        }
        for (int j = 0; j < cfg.row_width(); ++j) out.at(t, j) = row[j];
    }
    return out;
}

// d(loss)/d(theta) for upstream = d(loss)/d(output rows). Each raw kept
// probability is an expectation of a projector, so the parameter-shift rule
// d p / d theta = [p(theta + pi/2) - p(theta - pi/2)] / 2 is exact; the
// normalization of the post-selected output y_j = q_j / S is then
// differentiated with the quotient rule:
//   d y_j = (d q_j - y_j * d S) / S.
// Analytic mode only; sampled probabilities break shift-rule exactness.
inline std::vector<double> generator_gradient(const GeneratorParams& params, const NoiseVector& z,
                                              const GeneratorConfig& cfg,
                                              const LatentMatrix& upstream,
                                              ForwardMode mode = ForwardMode::analytic,
                                              int n_threads = 1) {
    cfg.validate();
    params.check_shape(cfg);
    if (mode != ForwardMode::analytic)
        throw UnsupportedModeError("generator gradients are analytic-only");
    if (upstream.rows != cfg.sub_generators || upstream.cols != cfg.row_width())
        throw ShapeError("upstream gradient shape does not match generator output");

    const int per = cfg.params_per_circuit();
    const int width = cfg.row_width();

    // Per-circuit baselines: S = sum of raw kept probs, y = normalized row,
    // uy = <upstream row, y>.
    std::vector<double> inv_s(cfg.sub_generators);
    std::vector<double> uy(cfg.sub_generators);
    for (int t = 0; t < cfg.sub_generators; ++t) {
        const std::vector<double> q = detail::kept_raw_probs(params.circuit(t), z, cfg);
        double s = 0.0;
        for (double v : q) s += v;
        if (s < 1e-12)
            throw PostSelectError("sub-generator " + std::to_string(t) +
                                  ": ancilla never measures all-zero");
        double dot = 0.0;
        for (int j = 0; j < width; ++j) dot += upstream.at(t, j) * (q[j] / s);
        inv_s[t] = 1.0 / s;
        uy[t] = dot;
    }

    std::vector<double> grad(params.count(), 0.0);
    parallel_for(params.count(), n_threads, [&](std::size_t idx) {
        const int t = static_cast<int>(idx) / per;
        const int k = static_cast<int>(idx) % per;

        std::vector<double> shifted(params.circuit(t).begin(), params.circuit(t).end());
        shifted[k] += std::numbers::pi / 2.0;
        const std::vector<double> q_plus = detail::kept_raw_probs(shifted, z, cfg);
        shifted[k] -= std::numbers::pi;
        const std::vector<double> q_minus = detail::kept_raw_probs(shifted, z, cfg);

        double u_dq = 0.0;  // <upstream row, d q>
        double ds = 0.0;    // d S
        for (int j = 0; j < width; ++j) {
            const double dq = 0.5 * (q_plus[j] - q_minus[j]);
            u_dq += upstream.at(t, j) * dq;
            ds += dq;
        }
        grad[idx] = (u_dq - uy[t] * ds) * inv_s[t];
    });
    return grad;
}

}  // namespace qlg
