#pragma once

// Test-only reference machinery. Everything here recomputes expected values
// through dense matrix algebra, independent of the library's stride-based
// simulator kernels.

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "hqtcn/rng.hpp"
#include "hqtcn/state.hpp"

namespace oracle {

using hqtcn::cdouble;

struct CMat {
    std::size_t dim = 0;
    std::vector<cdouble> m;

    CMat() = default;
    explicit CMat(std::size_t d) : dim(d), m(d * d, cdouble{0.0, 0.0}) {}

    cdouble& at(std::size_t r, std::size_t c) { return m[r * dim + c]; }
    cdouble at(std::size_t r, std::size_t c) const { return m[r * dim + c]; }

    static CMat identity(std::size_t d) {
        CMat out(d);
        for (std::size_t i = 0; i < d; ++i) out.at(i, i) = 1.0;
        return out;
    }
};

inline CMat mul(const CMat& a, const CMat& b) {
    CMat out(a.dim);
    for (std::size_t r = 0; r < a.dim; ++r) {
        for (std::size_t k = 0; k < a.dim; ++k) {
            const cdouble av = a.at(r, k);
            if (av == cdouble{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < a.dim; ++c) out.at(r, c) += av * b.at(k, c);
        }
    }
    return out;
}

inline CMat adjoint(const CMat& a) {
    CMat out(a.dim);
    for (std::size_t r = 0; r < a.dim; ++r) {
        for (std::size_t c = 0; c < a.dim; ++c) out.at(r, c) = std::conj(a.at(c, r));
    }
    return out;
}

inline CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.dim * b.dim);
    for (std::size_t ar = 0; ar < a.dim; ++ar) {
        for (std::size_t ac = 0; ac < a.dim; ++ac) {
            for (std::size_t br = 0; br < b.dim; ++br) {
                for (std::size_t bc = 0; bc < b.dim; ++bc) {
                    out.at(ar * b.dim + br, ac * b.dim + bc) = a.at(ar, ac) * b.at(br, bc);
                }
            }
        }
    }
    return out;
}

inline std::vector<cdouble> matvec(const CMat& a, std::span<const cdouble> v) {
    std::vector<cdouble> out(a.dim, cdouble{0.0, 0.0});
    for (std::size_t r = 0; r < a.dim; ++r) {
        cdouble s{0.0, 0.0};
        for (std::size_t c = 0; c < a.dim; ++c) s += a.at(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

inline double max_abs_diff(const CMat& a, const CMat& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.m.size(); ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
    return d;
}

inline CMat pauli(char which) {
    CMat p(2);
    switch (which) {
        case 'I': p.at(0, 0) = 1.0; p.at(1, 1) = 1.0; break;
        case 'X': p.at(0, 1) = 1.0; p.at(1, 0) = 1.0; break;
        case 'Y': p.at(0, 1) = cdouble{0.0, -1.0}; p.at(1, 0) = cdouble{0.0, 1.0}; break;
        case 'Z': p.at(0, 0) = 1.0; p.at(1, 1) = -1.0; break;
    }
    return p;
}

// Scaling-and-squaring Taylor exponential; plenty accurate for the small
// matrices used in tests.
inline CMat expm(const CMat& a) {
    double norm = 0.0;
    for (std::size_t r = 0; r < a.dim; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < a.dim; ++c) row += std::abs(a.at(r, c));
        norm = std::max(norm, row);
    }
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.25) {
        scale *= 0.5;
        ++squarings;
    }
    CMat scaled(a.dim);
    for (std::size_t i = 0; i < a.m.size(); ++i) scaled.m[i] = a.m[i] * scale;

    CMat result = CMat::identity(a.dim);
    CMat term = CMat::identity(a.dim);
    for (int k = 1; k <= 20; ++k) {
        term = mul(term, scaled);
        for (std::size_t i = 0; i < term.m.size(); ++i) term.m[i] /= static_cast<double>(k);
        for (std::size_t i = 0; i < result.m.size(); ++i) result.m[i] += term.m[i];
    }
    for (int s = 0; s < squarings; ++s) result = mul(result, result);
    return result;
}

// Expands a 1- or 2-qubit gate to the full register. Qubit 0 is the most
// significant index bit, matching the library convention.
inline CMat embed_full(int n_qubits, std::span<const int> targets, const hqtcn::Gate& g) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    CMat out(dim);
    if (g.arity == 1) {
        const std::size_t mask = std::size_t{1} << (n_qubits - 1 - targets[0]);
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t gi = (i & mask) ? 1 : 0;
            const std::size_t base = i & ~mask;
            for (std::size_t gj = 0; gj < 2; ++gj) {
                const std::size_t j = gj ? (base | mask) : base;
                out.at(i, j) = g.m[gi * 2 + gj];
            }
        }
        return out;
    }
    const std::size_t ma = std::size_t{1} << (n_qubits - 1 - targets[0]);
    const std::size_t mb = std::size_t{1} << (n_qubits - 1 - targets[1]);
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t gi = ((i & ma) ? 2 : 0) | ((i & mb) ? 1 : 0);
        const std::size_t base = i & ~(ma | mb);
        for (std::size_t gj = 0; gj < 4; ++gj) {
            const std::size_t j = base | ((gj & 2) ? ma : 0) | ((gj & 1) ? mb : 0);
            out.at(i, j) = g.m[gi * 4 + gj];
        }
    }
    return out;
}

// Eigenvalues of a complex Hermitian matrix through the real-symmetric
// embedding [[Re, -Im], [Im, Re]] and cyclic Jacobi sweeps. Each eigenvalue
// of the input appears twice in the result.
inline std::vector<double> hermitian_eigenvalues(const CMat& h) {
    const std::size_t m = h.dim;
    const std::size_t n = 2 * m;
    std::vector<double> a(n * n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            a[r * n + c] = h.at(r, c).real();
            a[(r + m) * n + (c + m)] = h.at(r, c).real();
            a[r * n + (c + m)] = -h.at(r, c).imag();
            a[(r + m) * n + c] = h.at(r, c).imag();
        }
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        }
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    return eig;
}

inline hqtcn::StateVector random_state(int n_qubits, hqtcn::Rng& rng) {
    hqtcn::StateVector s = hqtcn::basis_state(n_qubits);
    for (auto& a : s.amp) a = cdouble{rng.normal(), rng.normal()};
    double norm = 0.0;
    for (const auto& a : s.amp) norm += std::norm(a);
    norm = std::sqrt(norm);
    for (auto& a : s.amp) a /= norm;
    return s;
}

// Random mixed state: convex combination of a few random pure states.
inline hqtcn::DensityMatrix random_density(int n_qubits, int rank, hqtcn::Rng& rng) {
    const std::size_t d = std::size_t{1} << n_qubits;
    hqtcn::DensityMatrix rho;
    rho.n_qubits = n_qubits;
    rho.m.assign(d * d, cdouble{0.0, 0.0});
    std::vector<double> w(static_cast<std::size_t>(rank));
    double wsum = 0.0;
    for (double& x : w) {
        x = rng.uniform(0.1, 1.0);
        wsum += x;
    }
    for (int k = 0; k < rank; ++k) {
        const hqtcn::StateVector psi = random_state(n_qubits, rng);
        const double p = w[static_cast<std::size_t>(k)] / wsum;
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                rho.m[r * d + c] += p * psi.amp[r] * std::conj(psi.amp[c]);
            }
        }
    }
    return rho;
}

inline CMat dm_to_cmat(const hqtcn::DensityMatrix& rho) {
    CMat out(rho.dim());
    out.m = rho.m;
    return out;
}

// Random Hermitian with entries of order 1.
inline CMat random_hermitian(std::size_t dim, hqtcn::Rng& rng) {
    CMat h(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        h.at(r, r) = rng.normal();
        for (std::size_t c = r + 1; c < dim; ++c) {
            const cdouble v{rng.normal(), rng.normal()};
            h.at(r, c) = v;
            h.at(c, r) = std::conj(v);
        }
    }
    return h;
}

// Central finite differences d f / d x_i at h = 1e-4.
inline std::vector<double> finite_diff(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> x, double h = 1e-4) {
    std::vector<double> grad(x.size(), 0.0);
    std::vector<double> p(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = p[i];
        p[i] = orig + h;
        const double fp = f(p);
        p[i] = orig - h;
        const double fm = f(p);
        p[i] = orig;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

} // namespace oracle
