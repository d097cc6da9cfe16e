#include "hqtcn/state.hpp"

#include <cmath>
#include <stdexcept>

#include "hqtcn/errors.hpp"

namespace hqtcn {

namespace {

constexpr cdouble kI{0.0, 1.0};

std::size_t qubit_mask(int n_qubits, int q) {
    return std::size_t{1} << (n_qubits - 1 - q);
}

void check_qubit(int n_qubits, int q, const char* what) {
    if (q < 0 || q >= n_qubits) {
        throw std::invalid_argument(std::string(what) + ": qubit index " +
                                    std::to_string(q) + " out of range for " +
                                    std::to_string(n_qubits) + " qubits");
    }
}

} // namespace

double StateVector::norm() const {
    double s = 0.0;
    for (const cdouble& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

std::size_t DensityMatrix::dim() const {
    return std::size_t{1} << n_qubits;
}

bool is_unitary(const Gate& g, double tol) {
    const int d = g.dim();
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            cdouble s{0.0, 0.0};
            for (int k = 0; k < d; ++k) {
                s += std::conj(g.m[k * d + r]) * g.m[k * d + c];
            }
            const cdouble want = (r == c) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
            if (std::abs(s - want) > tol) return false;
        }
    }
    return true;
}

StateVector basis_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > StateVector::kMaxQubits) {
        throw ConfigError("basis_state: qubit count must be in [1, " +
                          std::to_string(StateVector::kMaxQubits) + "], got " +
                          std::to_string(n_qubits));
    }
    StateVector s;
    s.n_qubits = n_qubits;
    s.amp.assign(std::size_t{1} << n_qubits, cdouble{0.0, 0.0});
    s.amp[0] = 1.0;
    return s;
}

Gate make_rotation(Axis axis, double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("make_rotation: non-finite angle");
    }
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    Gate g;
    g.arity = 1;
    switch (axis) {
        case Axis::X:
            g.m = {cdouble{c, 0}, -kI * s, -kI * s, cdouble{c, 0}};
            break;
        case Axis::Y:
            g.m = {cdouble{c, 0}, cdouble{-s, 0}, cdouble{s, 0}, cdouble{c, 0}};
            break;
        case Axis::Z:
            g.m = {cdouble{c, -s}, cdouble{0, 0}, cdouble{0, 0}, cdouble{c, s}};
            break;
    }
    return g;
}

Gate make_rot_zyz(double phi, double theta, double omega) {
    if (!std::isfinite(phi) || !std::isfinite(theta) || !std::isfinite(omega)) {
        throw std::invalid_argument("make_rot_zyz: non-finite angle");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Gate g;
    g.arity = 1;
    g.m[0] = std::exp(-kI * ((phi + omega) / 2.0)) * c;
    g.m[1] = -std::exp(kI * ((phi - omega) / 2.0)) * s;
    g.m[2] = std::exp(-kI * ((phi - omega) / 2.0)) * s;
    g.m[3] = std::exp(kI * ((phi + omega) / 2.0)) * c;
    return g;
}

Gate make_ising_xyz(double ax, double ay, double az) {
    if (!std::isfinite(ax) || !std::isfinite(ay) || !std::isfinite(az)) {
        throw std::invalid_argument("make_ising_xyz: non-finite angle");
    }
    // XX, YY, ZZ commute; the exponential splits into the two 2x2 blocks
    // spanned by {|00>,|11>} and {|01>,|10>}.
    const cdouble d_out = std::exp(-kI * (az / 2.0));
    const cdouble d_in = std::exp(kI * (az / 2.0));
    const double cm = std::cos((ax - ay) / 2.0);
    const double sm = std::sin((ax - ay) / 2.0);
    const double cp = std::cos((ax + ay) / 2.0);
    const double sp = std::sin((ax + ay) / 2.0);
    Gate g;
    g.arity = 2;
    g.m.fill(cdouble{0.0, 0.0});
    g.m[0 * 4 + 0] = d_out * cm;
    g.m[0 * 4 + 3] = -kI * d_out * sm;
    g.m[1 * 4 + 1] = d_in * cp;
    g.m[1 * 4 + 2] = -kI * d_in * sp;
    g.m[2 * 4 + 1] = -kI * d_in * sp;
    g.m[2 * 4 + 2] = d_in * cp;
    g.m[3 * 4 + 0] = -kI * d_out * sm;
    g.m[3 * 4 + 3] = d_out * cm;
    return g;
}

Gate make_controlled(const Gate& single) {
    if (single.arity != 1) {
        throw std::invalid_argument("make_controlled: expected a single-qubit gate");
    }
    Gate g;
    g.arity = 2;
    g.m.fill(cdouble{0.0, 0.0});
    g.m[0 * 4 + 0] = 1.0;
    g.m[1 * 4 + 1] = 1.0;
    g.m[2 * 4 + 2] = single.m[0];
    g.m[2 * 4 + 3] = single.m[1];
    g.m[3 * 4 + 2] = single.m[2];
    g.m[3 * 4 + 3] = single.m[3];
    return g;
}

Gate make_cnot() {
    Gate x;
    x.arity = 1;
    x.m = {cdouble{0, 0}, cdouble{1, 0}, cdouble{1, 0}, cdouble{0, 0}};
    return make_controlled(x);
}

Gate gate_product(const Gate& a, const Gate& b) {
    if (a.arity != b.arity) {
        throw std::invalid_argument("gate_product: arity mismatch");
    }
    Gate g;
    g.arity = a.arity;
    const int d = a.dim();
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            cdouble s{0.0, 0.0};
            for (int k = 0; k < d; ++k) s += a.m[r * d + k] * b.m[k * d + c];
            g.m[r * d + c] = s;
        }
    }
    return g;
}

Gate kron2(const Gate& hi, const Gate& lo) {
    if (hi.arity != 1 || lo.arity != 1) {
        throw std::invalid_argument("kron2: expected single-qubit gates");
    }
    Gate g;
    g.arity = 2;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            g.m[r * 4 + c] = hi.m[(r >> 1) * 2 + (c >> 1)] * lo.m[(r & 1) * 2 + (c & 1)];
        }
    }
    return g;
}

namespace {

// Two-lane update over a contiguous run. Lanes are exposed as bare doubles
// so the compiler vectorizes across the run; each element sees the exact
// same arithmetic as the scalar form, keeping results thread- and
// schedule-independent.
inline void run_pair(double* __restrict p0, double* __restrict p1, std::size_t len,
                     const cdouble* u) {
    const double u00r = u[0].real(), u00i = u[0].imag();
    const double u01r = u[1].real(), u01i = u[1].imag();
    const double u10r = u[2].real(), u10i = u[2].imag();
    const double u11r = u[3].real(), u11i = u[3].imag();
    for (std::size_t k = 0; k < 2 * len; k += 2) {
        const double a0r = p0[k], a0i = p0[k + 1];
        const double a1r = p1[k], a1i = p1[k + 1];
        p0[k] = u00r * a0r - u00i * a0i + u01r * a1r - u01i * a1i;
        p0[k + 1] = u00r * a0i + u00i * a0r + u01r * a1i + u01i * a1r;
        p1[k] = u10r * a0r - u10i * a0i + u11r * a1r - u11i * a1i;
        p1[k + 1] = u10r * a0i + u10i * a0r + u11r * a1i + u11i * a1r;
    }
}

inline void run_quad(double* __restrict p0, double* __restrict p1, double* __restrict p2,
                     double* __restrict p3, std::size_t len, const double* mr,
                     const double* mi) {
    for (std::size_t k = 0; k < 2 * len; k += 2) {
        const double v0r = p0[k], v0i = p0[k + 1];
        const double v1r = p1[k], v1i = p1[k + 1];
        const double v2r = p2[k], v2i = p2[k + 1];
        const double v3r = p3[k], v3i = p3[k + 1];
        p0[k] = mr[0] * v0r - mi[0] * v0i + mr[1] * v1r - mi[1] * v1i + mr[2] * v2r -
                mi[2] * v2i + mr[3] * v3r - mi[3] * v3i;
        p0[k + 1] = mr[0] * v0i + mi[0] * v0r + mr[1] * v1i + mi[1] * v1r + mr[2] * v2i +
                    mi[2] * v2r + mr[3] * v3i + mi[3] * v3r;
        p1[k] = mr[4] * v0r - mi[4] * v0i + mr[5] * v1r - mi[5] * v1i + mr[6] * v2r -
                mi[6] * v2i + mr[7] * v3r - mi[7] * v3i;
        p1[k + 1] = mr[4] * v0i + mi[4] * v0r + mr[5] * v1i + mi[5] * v1r + mr[6] * v2i +
                    mi[6] * v2r + mr[7] * v3i + mi[7] * v3r;
        p2[k] = mr[8] * v0r - mi[8] * v0i + mr[9] * v1r - mi[9] * v1i + mr[10] * v2r -
                mi[10] * v2i + mr[11] * v3r - mi[11] * v3i;
        p2[k + 1] = mr[8] * v0i + mi[8] * v0r + mr[9] * v1i + mi[9] * v1r + mr[10] * v2i +
                    mi[10] * v2r + mr[11] * v3i + mi[11] * v3r;
        p3[k] = mr[12] * v0r - mi[12] * v0i + mr[13] * v1r - mi[13] * v1i + mr[14] * v2r -
                mi[14] * v2i + mr[15] * v3r - mi[15] * v3i;
        p3[k + 1] = mr[12] * v0i + mi[12] * v0r + mr[13] * v1i + mi[13] * v1r + mr[14] * v2i +
                    mi[14] * v2r + mr[15] * v3i + mi[15] * v3r;
    }
}

} // namespace

void apply_gate_inplace(StateVector& state, const Gate& g, std::span<const int> targets) {
    const int n = state.n_qubits;
    if (static_cast<int>(targets.size()) != g.arity) {
        throw std::invalid_argument("apply_gate: gate arity does not match target count");
    }
    for (int q : targets) check_qubit(n, q, "apply_gate");

    double* d = reinterpret_cast<double*>(state.amp.data());
    const std::size_t dim = state.dim();

    if (g.arity == 1) {
        const std::size_t m0 = qubit_mask(n, targets[0]);
        for (std::size_t block = 0; block < dim; block += 2 * m0) {
            run_pair(d + 2 * block, d + 2 * (block + m0), m0, g.m.data());
        }
        return;
    }

    if (targets[0] == targets[1]) {
        throw std::invalid_argument("apply_gate: repeated target qubit " +
                                    std::to_string(targets[0]));
    }
    const std::size_t ma = qubit_mask(n, targets[0]);
    const std::size_t mb = qubit_mask(n, targets[1]);
    const std::size_t mlo = ma < mb ? ma : mb;
    const std::size_t mhi = ma < mb ? mb : ma;
    double mr[16], mi[16];
    for (int i = 0; i < 16; ++i) {
        mr[i] = g.m[static_cast<std::size_t>(i)].real();
        mi[i] = g.m[static_cast<std::size_t>(i)].imag();
    }
    for (std::size_t hi = 0; hi < dim; hi += 2 * mhi) {
        for (std::size_t mid = hi; mid < hi + mhi; mid += 2 * mlo) {
            run_quad(d + 2 * mid, d + 2 * (mid | mb), d + 2 * (mid | ma),
                     d + 2 * (mid | ma | mb), mlo, mr, mi);
        }
    }
}

void apply_controlled_inplace(StateVector& state, const Gate& single, int control, int target) {
    if (single.arity != 1) {
        throw std::invalid_argument("apply_controlled: expected a single-qubit gate");
    }
    const int n = state.n_qubits;
    check_qubit(n, control, "apply_controlled");
    check_qubit(n, target, "apply_controlled");
    if (control == target) {
        throw std::invalid_argument("apply_controlled: repeated qubit " + std::to_string(control));
    }
    const std::size_t mc = qubit_mask(n, control);
    const std::size_t mt = qubit_mask(n, target);
    const std::size_t mlo = mc < mt ? mc : mt;
    const std::size_t mhi = mc < mt ? mt : mc;
    double* d = reinterpret_cast<double*>(state.amp.data());
    const std::size_t dim = state.dim();
    for (std::size_t hi = 0; hi < dim; hi += 2 * mhi) {
        for (std::size_t mid = hi; mid < hi + mhi; mid += 2 * mlo) {
            const std::size_t i0 = mid | mc;
            run_pair(d + 2 * i0, d + 2 * (i0 | mt), mlo, single.m.data());
        }
    }
}

StateVector apply_gate(const StateVector& state, const Gate& g, std::span<const int> targets) {
    StateVector out = state;
    apply_gate_inplace(out, g, targets);
    return out;
}

double expectation_pauli_z(const StateVector& state, int qubit) {
    check_qubit(state.n_qubits, qubit, "expectation_pauli_z");
    const std::size_t m0 = qubit_mask(state.n_qubits, qubit);
    double e = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const double p = std::norm(state.amp[i]);
        e += (i & m0) ? -p : p;
    }
    return e;
}

DensityMatrix density_from_state(const StateVector& state) {
    DensityMatrix rho;
    rho.n_qubits = state.n_qubits;
    const std::size_t d = state.dim();
    rho.m.resize(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            rho.m[r * d + c] = state.amp[r] * std::conj(state.amp[c]);
        }
    }
    return rho;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> traced) {
    const int n = rho.n_qubits;
    if (traced.empty()) {
        throw std::invalid_argument("partial_trace: traced set is empty");
    }
    std::vector<bool> is_traced(n, false);
    for (int q : traced) {
        check_qubit(n, q, "partial_trace");
        if (is_traced[q]) {
            throw std::invalid_argument("partial_trace: duplicate qubit " + std::to_string(q));
        }
        is_traced[q] = true;
    }
    if (static_cast<int>(traced.size()) == n) {
        throw std::invalid_argument("partial_trace: cannot trace out every qubit");
    }

    std::vector<int> kept;
    std::vector<int> gone;
    for (int q = 0; q < n; ++q) (is_traced[q] ? gone : kept).push_back(q);

    const int nk = static_cast<int>(kept.size());
    const int nb = static_cast<int>(gone.size());
    const std::size_t dk = std::size_t{1} << nk;
    const std::size_t db = std::size_t{1} << nb;

    // Scatter a compact index over the given qubit positions, preserving
    // qubit order (first listed qubit = most significant compact bit).
    auto scatter = [n](std::size_t v, const std::vector<int>& qs) {
        std::size_t full = 0;
        const int w = static_cast<int>(qs.size());
        for (int t = 0; t < w; ++t) {
            const std::size_t bit = (v >> (w - 1 - t)) & 1;
            full |= bit << (n - 1 - qs[t]);
        }
        return full;
    };

    std::vector<std::size_t> kept_base(dk), gone_base(db);
    for (std::size_t r = 0; r < dk; ++r) kept_base[r] = scatter(r, kept);
    for (std::size_t j = 0; j < db; ++j) gone_base[j] = scatter(j, gone);

    DensityMatrix out;
    out.n_qubits = nk;
    out.m.assign(dk * dk, cdouble{0.0, 0.0});
    const std::size_t dim = rho.dim();
    for (std::size_t r = 0; r < dk; ++r) {
        for (std::size_t c = 0; c < dk; ++c) {
            cdouble s{0.0, 0.0};
            for (std::size_t j = 0; j < db; ++j) {
                s += rho.m[(kept_base[r] | gone_base[j]) * dim + (kept_base[c] | gone_base[j])];
            }
            out.m[r * dk + c] = s;
        }
    }
    return out;
}

cdouble dm_trace(const DensityMatrix& rho) {
    cdouble t{0.0, 0.0};
    const std::size_t d = rho.dim();
    for (std::size_t i = 0; i < d; ++i) t += rho.m[i * d + i];
    return t;
}

double expectation_pauli_z(const DensityMatrix& rho, int qubit) {
    check_qubit(rho.n_qubits, qubit, "expectation_pauli_z");
    const std::size_t m0 = qubit_mask(rho.n_qubits, qubit);
    const std::size_t d = rho.dim();
    double e = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double diag = rho.m[i * d + i].real();
        e += (i & m0) ? -diag : diag;
    }
    return e;
}

} // namespace hqtcn
