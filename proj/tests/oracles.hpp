// Independent brute-force oracles for the quantum pieces. Everything here is
// built from explicit dense matrices (Kronecker products and full
// matrix-vector multiplies) and index enumeration, sharing no code with the
// library's gate-local statevector updates.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = std::vector<std::vector<cd>>;

inline Mat identity(std::size_t n) {
    Mat m(n, std::vector<cd>(n, cd(0.0, 0.0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = cd(1.0, 0.0);
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
    Mat m(ar * br, std::vector<cd>(ac * bc, cd(0.0, 0.0)));
    for (std::size_t i = 0; i < ar; ++i)
        for (std::size_t j = 0; j < ac; ++j)
            for (std::size_t k = 0; k < br; ++k)
                for (std::size_t l = 0; l < bc; ++l) m[i * br + k][j * bc + l] = a[i][j] * b[k][l];
    return m;
}

inline std::vector<cd> matvec(const Mat& m, const std::vector<cd>& v) {
    std::vector<cd> out(m.size(), cd(0.0, 0.0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline Mat ry2(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return Mat{{cd(c, 0.0), cd(-s, 0.0)}, {cd(s, 0.0), cd(c, 0.0)}};
}

// Qubit 0 is the most-significant bit of the basis index, so an operator on
// qubit q embeds as I_{2^q} (x) U (x) I_{2^{n-1-q}}.
inline Mat single_qubit_op(int n_qubits, int q, const Mat& u) {
    return kron(kron(identity(std::size_t{1} << q), u),
                identity(std::size_t{1} << (n_qubits - 1 - q)));
}

inline Mat cz_full(int n_qubits, int control, int target) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    Mat m = identity(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const int bc = static_cast<int>((i >> (n_qubits - 1 - control)) & 1u);
        const int bt = static_cast<int>((i >> (n_qubits - 1 - target)) & 1u);
        if (bc == 1 && bt == 1) m[i][i] = cd(-1.0, 0.0);
    }
    return m;
}

// Full sub-generator evaluation: encoding RY(z) on every qubit, then L layers
// of RY(theta) on every qubit followed by the non-wrapping CZ chain; Born
// probabilities; keep basis indices whose low n_ancilla bits are all zero;
// renormalize.
inline std::vector<double> subgenerator_probs(std::span<const double> theta, std::span<const double> z,
                                              int data_qubits, int ancilla_qubits, int layers) {
    const int n = data_qubits + ancilla_qubits;
    const std::size_t dim = std::size_t{1} << n;

    std::vector<cd> state(dim, cd(0.0, 0.0));
    state[0] = cd(1.0, 0.0);

    for (int q = 0; q < n; ++q) state = matvec(single_qubit_op(n, q, ry2(z[q])), state);
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < n; ++q)
            state = matvec(single_qubit_op(n, q, ry2(theta[static_cast<std::size_t>(l) * n + q])),
                          state);
        for (int q = 0; q + 1 < n; ++q) state = matvec(cz_full(n, q, q + 1), state);
    }

    const std::size_t mask = (std::size_t{1} << ancilla_qubits) - 1;
    std::vector<double> kept;
    for (std::size_t i = 0; i < dim; ++i)
        if ((i & mask) == 0) kept.push_back(std::norm(state[i]));
    double total = 0.0;
    for (double p : kept) total += p;
    for (double& p : kept) p /= total;
    return kept;
}

}  // namespace oracle
