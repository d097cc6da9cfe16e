#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace hqtcn {

using cdouble = std::complex<double>;

// Dense n-qubit pure state. Index convention, fixed project-wide:
// qubit 0 is the MOST significant bit of the amplitude index, so the bit of
// qubit q in basis index i is (i >> (n_qubits - 1 - q)) & 1.
struct StateVector {
    int n_qubits = 0;
    std::vector<cdouble> amp;

    static constexpr int kMaxQubits = 12;

    std::size_t dim() const { return amp.size(); }
    double norm() const;
};

enum class Axis { X, Y, Z };

// One- or two-qubit unitary, row-major. For two-qubit gates the FIRST target
// qubit indexes the more significant bit of the 2-bit gate basis.
struct Gate {
    int arity = 1;
    std::array<cdouble, 16> m{};

    int dim() const { return arity == 1 ? 2 : 4; }
};

bool is_unitary(const Gate& g, double tol = 1e-10);

// |0...0> on n qubits; 1 <= n <= 12.
StateVector basis_state(int n_qubits);

// exp(-i * angle * P / 2) for Pauli P in {X, Y, Z}.
Gate make_rotation(Axis axis, double angle);

// Rot(phi, theta, omega) = RZ(omega) RY(theta) RZ(phi).
Gate make_rot_zyz(double phi, double theta, double omega);

// exp(-i (ax XX + ay YY + az ZZ) / 2); the three terms commute.
Gate make_ising_xyz(double ax, double ay, double az);

// 2x2 -> 4x4 block gate; control is the first target qubit.
Gate make_controlled(const Gate& single);

Gate make_cnot();

// a * b as matrices (b acts first on the state).
Gate gate_product(const Gate& a, const Gate& b);

// Tensor product of two 2x2 gates; `hi` acts on the first (more significant)
// qubit of the pair.
Gate kron2(const Gate& hi, const Gate& lo);

void apply_gate_inplace(StateVector& state, const Gate& g, std::span<const int> targets);
StateVector apply_gate(const StateVector& state, const Gate& g, std::span<const int> targets);

// Applies `single` to `target` on the control-bit-one subspace; same result
// as the embedded 4x4 block gate at half the work.
void apply_controlled_inplace(StateVector& state, const Gate& single, int control, int target);

// <Z_q> = sum_i |a_i|^2 * (+1 if bit q of i is 0 else -1).
double expectation_pauli_z(const StateVector& state, int qubit);

struct DensityMatrix {
    int n_qubits = 0;
    std::vector<cdouble> m; // dim x dim, row-major

    std::size_t dim() const;
    cdouble at(std::size_t r, std::size_t c) const { return m[r * dim() + c]; }
    cdouble& at(std::size_t r, std::size_t c) { return m[r * dim() + c]; }
};

DensityMatrix density_from_state(const StateVector& state);

// Traces out the qubits in `traced`; the kept qubits retain their relative
// order. `traced` must be a proper nonempty subset of {0, ..., n-1}.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> traced);

cdouble dm_trace(const DensityMatrix& rho);

// Tr[Z_q rho]; cross-representation check against the pure-state path.
double expectation_pauli_z(const DensityMatrix& rho, int qubit);

} // namespace hqtcn
