// Exact statevector simulation of small qubit registers: RY and CZ gates,
// Born probabilities, ancilla post-selection and multinomial shot sampling.
//
// Basis-index convention: qubit 0 is the most-significant bit of the basis
// index, so for an N-qubit register qubit q toggles bit (N-1-q). Ancilla
// wires occupy the trailing (least-significant) positions, which makes the
// indices surviving an all-zero ancilla measurement exactly {i * 2^n_ancilla}.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qlg/errors.hpp"
#include "qlg/rng.hpp"

namespace qlg {

struct StateVector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amps;

    std::size_t dim() const { return amps.size(); }
};

inline StateVector init_zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 20)
        throw SizeError("n_qubits must be in [1, 20], got " + std::to_string(n_qubits));
    StateVector s;
    s.n_qubits = n_qubits;
    s.amps.assign(std::size_t{1} << n_qubits, {0.0, 0.0});
    s.amps[0] = {1.0, 0.0};
    return s;
}

namespace detail {
inline void check_qubit(const StateVector& s, int qubit) {
    if (qubit < 0 || qubit >= s.n_qubits)
        throw IndexError("qubit index " + std::to_string(qubit) + " out of range for " +
                         std::to_string(s.n_qubits) + " qubits");
}
}  // namespace detail

// RY(theta) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]] on the target wire.
inline StateVector apply_ry(const StateVector& state, int qubit, double angle) {
    detail::check_qubit(state, qubit);
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const std::size_t mask = std::size_t{1} << (state.n_qubits - 1 - qubit);

    StateVector out = state;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        if (i & mask) continue;
        const auto a0 = state.amps[i];
        const auto a1 = state.amps[i | mask];
        out.amps[i] = c * a0 - s * a1;
        out.amps[i | mask] = s * a0 + c * a1;
    }
    return out;
}

// Diagonal phase flip on basis states where both wires read 1.
inline StateVector apply_cz(const StateVector& state, int control, int target) {
    detail::check_qubit(state, control);
    detail::check_qubit(state, target);
    if (control == target) throw IndexError("cz control and target must differ");
    const std::size_t cm = std::size_t{1} << (state.n_qubits - 1 - control);
    const std::size_t tm = std::size_t{1} << (state.n_qubits - 1 - target);

    StateVector out = state;
    for (std::size_t i = 0; i < out.dim(); ++i) {
        if ((i & cm) && (i & tm)) out.amps[i] = -out.amps[i];
    }
    return out;
}

inline std::vector<double> probabilities(const StateVector& state) {
    std::vector<double> p(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) p[i] = std::norm(state.amps[i]);
    return p;
}

// Keeps the outcomes whose ancilla bits (the n_ancilla least-significant
// index bits) are all zero and renormalizes the survivors.
inline std::vector<double> post_select(const std::vector<double>& full_probs, int n_ancilla) {
    const std::size_t dim = full_probs.size();
    if (dim == 0 || (dim & (dim - 1)) != 0)
        throw SizeError("probability vector length must be a power of two");
    if (n_ancilla < 0) throw SizeError("n_ancilla must be non-negative");
    const std::size_t step = std::size_t{1} << n_ancilla;
    if (step >= dim && n_ancilla > 0)
        throw SizeError("n_ancilla must leave at least one data qubit");

    std::vector<double> kept(dim >> n_ancilla);
    double total = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        kept[i] = full_probs[i * step];
        total += kept[i];
    }
    if (total < 1e-12)
        throw PostSelectError("ancilla never measures all-zero (surviving mass " +
                              std::to_string(total) + ")");
    for (double& v : kept) v /= total;
    return kept;
}

// Empirical distribution of `shots` multinomial draws. Deterministic per seed.
inline std::vector<double> sample_counts(const std::vector<double>& probs, std::int64_t shots,
                                         std::uint64_t seed) {
    if (shots < 1) throw SizeError("shots must be >= 1");
    std::vector<double> cum(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0.0) throw DomainError("probabilities must be non-negative");
        acc += probs[i];
        cum[i] = acc;
    }

    Rng rng(seed);
    std::vector<std::int64_t> counts(probs.size(), 0);
    for (std::int64_t n = 0; n < shots; ++n) {
        const double u = rng.uniform() * acc;
        std::size_t lo = 0, hi = cum.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cum[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        ++counts[lo];
    }

    std::vector<double> freq(probs.size());
    for (std::size_t i = 0; i < freq.size(); ++i)
        freq[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    return freq;
}

}  // namespace qlg
