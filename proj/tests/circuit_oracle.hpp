#pragma once

// Dense reference pipeline for the circuit: every unit is rebuilt from
// elementary matrix products and a numeric matrix exponential, layer
// unitaries are composed as full 2^n x 2^n products, and the readout runs
// through the density-matrix form Tr[Z_0 U rho U^dag].

#include <span>

#include "hqtcn/circuit.hpp"
#include "oracles.hpp"

namespace oracle {

inline CMat o_rz(double x) {
    CMat m(2);
    m.at(0, 0) = std::exp(cdouble{0.0, -x / 2.0});
    m.at(1, 1) = std::exp(cdouble{0.0, x / 2.0});
    return m;
}

inline CMat o_ry(double x) {
    CMat m(2);
    m.at(0, 0) = std::cos(x / 2.0);
    m.at(0, 1) = -std::sin(x / 2.0);
    m.at(1, 0) = std::sin(x / 2.0);
    m.at(1, 1) = std::cos(x / 2.0);
    return m;
}

inline CMat o_rot(double phi, double theta, double omega) {
    return mul(o_rz(omega), mul(o_ry(theta), o_rz(phi)));
}

inline CMat o_interaction(double ax, double ay, double az) {
    const CMat xx = kron(pauli('X'), pauli('X'));
    const CMat yy = kron(pauli('Y'), pauli('Y'));
    const CMat zz = kron(pauli('Z'), pauli('Z'));
    CMat h(4);
    for (std::size_t i = 0; i < 16; ++i) {
        h.m[i] = cdouble{0.0, -0.5} * (ax * xx.m[i] + ay * yy.m[i] + az * zz.m[i]);
    }
    return expm(h);
}

inline CMat o_conv_unit(std::span<const double> p) {
    const CMat pre = kron(o_rot(p[0], p[1], p[2]), o_rot(p[3], p[4], p[5]));
    const CMat mid = o_interaction(p[6], p[7], p[8]);
    const CMat post = kron(o_rot(p[9], p[10], p[11]), o_rot(p[12], p[13], p[14]));
    return mul(post, mul(mid, pre));
}

inline CMat o_pool_unit(std::span<const double> p) {
    const CMat rot = o_rot(p[0], p[1], p[2]);
    CMat g(4);
    g.at(0, 0) = 1.0;
    g.at(1, 1) = 1.0;
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) g.at(2 + r, 2 + c) = rot.at(r, c);
    }
    return g;
}

// embed_full counterpart for oracle-built small matrices.
inline CMat embed_cmat(int n_qubits, std::span<const int> targets, const CMat& g) {
    hqtcn::Gate tmp;
    tmp.arity = g.dim == 2 ? 1 : 2;
    for (std::size_t i = 0; i < g.m.size(); ++i) tmp.m[i] = g.m[i];
    return embed_full(n_qubits, targets, tmp);
}

inline double qcnn_dense_reference(std::span<const double> features,
                                   const hqtcn::CircuitParams& params) {
    const int n = params.n_qubits;
    const std::size_t dim = std::size_t{1} << n;

    CMat embed = CMat::identity(dim);
    for (int q = 0; q < n; ++q) {
        const int t[1] = {q};
        embed = mul(embed_cmat(n, t, o_ry(features[static_cast<std::size_t>(q)])), embed);
    }

    CMat rho(dim);
    rho.at(0, 0) = 1.0;
    rho = mul(embed, mul(rho, adjoint(embed)));

    for (int l = 0; l < params.n_layers; ++l) {
        CMat layer = CMat::identity(dim);
        for (int b = 0; b < n; ++b) {
            const int t[2] = {b, (b + 1) % n};
            layer = mul(embed_cmat(n, t, o_conv_unit(params.conv_block(l, b))), layer);
        }
        for (int k = 0; k < n / 2; ++k) {
            const int t[2] = {2 * k + 1, 2 * k};
            layer = mul(embed_cmat(n, t, o_pool_unit(params.pool_block(l, k))), layer);
        }
        rho = mul(layer, mul(rho, adjoint(layer)));
    }

    const int q0[1] = {0};
    const CMat z0 = embed_cmat(n, q0, pauli('Z'));
    const CMat prod = mul(z0, rho);
    cdouble tr{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) tr += prod.at(i, i);
    return tr.real();
}

inline hqtcn::CircuitParams random_circuit(int n_qubits, int n_layers, hqtcn::Rng& rng,
                                           double scale = 1.5) {
    hqtcn::CircuitParams p(n_qubits, n_layers);
    for (double& t : p.theta) t = rng.uniform(-scale, scale);
    return p;
}

} // namespace oracle
