#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <vector>

#include "hqtcn/baselines.hpp"
#include "hqtcn/circuit.hpp"
#include "hqtcn/data.hpp"
#include "hqtcn/metrics.hpp"
#include "hqtcn/model.hpp"
#include "hqtcn/state.hpp"

namespace py = pybind11;
using namespace hqtcn;

namespace {

StateVector state_from_array(const py::array_t<std::complex<double>>& arr) {
    if (arr.ndim() != 1) throw std::invalid_argument("state must be a 1-d complex array");
    const py::ssize_t len = arr.shape(0);
    int n = 0;
    while ((py::ssize_t{1} << n) < len) ++n;
    if ((py::ssize_t{1} << n) != len) {
        throw std::invalid_argument("state length must be a power of two");
    }
    StateVector s;
    s.n_qubits = n;
    s.amp.assign(arr.data(), arr.data() + len);
    return s;
}

py::array_t<std::complex<double>> state_to_array(const StateVector& s) {
    py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(s.dim()));
    std::copy(s.amp.begin(), s.amp.end(), out.mutable_data());
    return out;
}

Gate gate_from_array(const py::array_t<std::complex<double>>& arr) {
    if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1) ||
        (arr.shape(0) != 2 && arr.shape(0) != 4)) {
        throw std::invalid_argument("gate must be a 2x2 or 4x4 complex matrix");
    }
    Gate g;
    g.arity = arr.shape(0) == 2 ? 1 : 2;
    const auto view = arr.unchecked<2>();
    for (py::ssize_t r = 0; r < arr.shape(0); ++r) {
        for (py::ssize_t c = 0; c < arr.shape(0); ++c) {
            g.m[static_cast<std::size_t>(r * arr.shape(0) + c)] = view(r, c);
        }
    }
    return g;
}

py::array_t<std::complex<double>> gate_to_array(const Gate& g) {
    const py::ssize_t d = g.dim();
    py::array_t<std::complex<double>> out({d, d});
    auto view = out.mutable_unchecked<2>();
    for (py::ssize_t r = 0; r < d; ++r) {
        for (py::ssize_t c = 0; c < d; ++c) view(r, c) = g.m[static_cast<std::size_t>(r * d + c)];
    }
    return out;
}

CircuitParams circuit_from_theta(int n_qubits, int n_layers,
                                 const std::vector<double>& theta) {
    CircuitParams p(n_qubits, n_layers);
    if (theta.size() != p.theta.size()) {
        throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                    " entries, expected " + std::to_string(p.theta.size()));
    }
    p.theta = theta;
    return p;
}

Axis axis_from_string(const std::string& name) {
    if (name == "x" || name == "X") return Axis::X;
    if (name == "y" || name == "Y") return Axis::Y;
    if (name == "z" || name == "Z") return Axis::Z;
    throw std::invalid_argument("axis must be one of x, y, z");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "simulator core: statevector gates, the shared-circuit model, data generators";

    m.def("basis_state", [](int n) { return state_to_array(basis_state(n)); }, py::arg("n_qubits"));

    m.def(
        "make_rotation",
        [](const std::string& axis, double angle) {
            return gate_to_array(make_rotation(axis_from_string(axis), angle));
        },
        py::arg("axis"), py::arg("angle"));

    m.def(
        "apply_gate",
        [](const py::array_t<std::complex<double>>& state,
           const py::array_t<std::complex<double>>& gate, const std::vector<int>& targets) {
            StateVector s = state_from_array(state);
            apply_gate_inplace(s, gate_from_array(gate), targets);
            return state_to_array(s);
        },
        py::arg("state"), py::arg("gate"), py::arg("targets"));

    m.def(
        "expectation_pauli_z",
        [](const py::array_t<std::complex<double>>& state, int qubit) {
            return expectation_pauli_z(state_from_array(state), qubit);
        },
        py::arg("state"), py::arg("qubit"));

    m.def(
        "partial_trace",
        [](const py::array_t<std::complex<double>>& rho, const std::vector<int>& traced) {
            if (rho.ndim() != 2 || rho.shape(0) != rho.shape(1)) {
                throw std::invalid_argument("rho must be a square matrix");
            }
            const py::ssize_t dim = rho.shape(0);
            int n = 0;
            while ((py::ssize_t{1} << n) < dim) ++n;
            if ((py::ssize_t{1} << n) != dim) {
                throw std::invalid_argument("rho dimension must be a power of two");
            }
            DensityMatrix d;
            d.n_qubits = n;
            d.m.assign(rho.data(), rho.data() + dim * dim);
            const DensityMatrix red = partial_trace(d, traced);
            const py::ssize_t rd = static_cast<py::ssize_t>(red.dim());
            py::array_t<std::complex<double>> out({rd, rd});
            std::copy(red.m.begin(), red.m.end(), out.mutable_data());
            return out;
        },
        py::arg("rho"), py::arg("traced"));

    m.def(
        "angle_embed",
        [](const std::vector<double>& features) { return state_to_array(angle_embed(features)); },
        py::arg("features"));

    m.def("quantum_param_count", &quantum_param_count, py::arg("n_qubits"), py::arg("n_layers"));

    m.def(
        "qcnn_forward",
        [](const std::vector<double>& features, const std::vector<double>& theta, int n_qubits,
           int n_layers) {
            return qcnn_forward(features, circuit_from_theta(n_qubits, n_layers, theta));
        },
        py::arg("features"), py::arg("theta"), py::arg("n_qubits") = 8, py::arg("n_layers") = 2);

    m.def(
        "qcnn_gradient",
        [](const std::vector<double>& features, const std::vector<double>& theta, int n_qubits,
           int n_layers) {
            const QcnnGradient g =
                qcnn_gradient(features, circuit_from_theta(n_qubits, n_layers, theta));
            return py::make_tuple(g.value, g.theta, g.features);
        },
        py::arg("features"), py::arg("theta"), py::arg("n_qubits") = 8, py::arg("n_layers") = 2);

    m.def("window_indices", &window_indices, py::arg("t"), py::arg("kernel"), py::arg("dilation"));
    m.def("receptive_field", &receptive_field, py::arg("kernel"), py::arg("dilation"));

    m.def(
        "model_param_count",
        [](int channels, int kernel, int embed_dim, int n_layers) {
            const ParamCount pc = model_param_count(channels, kernel, embed_dim, n_layers);
            return py::make_tuple(pc.classical, pc.quantum, pc.total());
        },
        py::arg("channels"), py::arg("kernel"), py::arg("embed_dim"), py::arg("n_layers"));

    m.def(
        "qcnn_baseline_param_count",
        [](int channels, int steps, int qubits, int n_layers) {
            const ParamCount pc = qcnn_baseline_param_count(channels, steps, qubits, n_layers);
            return py::make_tuple(pc.classical, pc.quantum, pc.total());
        },
        py::arg("channels"), py::arg("steps"), py::arg("qubits") = 8, py::arg("n_layers") = 2);

    m.def(
        "narma10",
        [](const std::vector<double>& u) { return narma10(u); }, py::arg("u"));

    m.def(
        "generate_narma",
        [](int steps, std::uint64_t seed) {
            const NarmaData d = generate_narma_dataset(steps, seed);
            py::dict out;
            out["u"] = d.u;
            out["y"] = d.y;
            out["train_steps"] = d.train_steps;
            out["val_steps"] = d.val_steps;
            out["test_steps"] = d.test_steps;
            return out;
        },
        py::arg("steps") = 240, py::arg("seed") = 1);

    m.def("mse", [](const std::vector<double>& pred,
                    const std::vector<double>& target) { return mse(pred, target); });
    m.def("auroc", [](const std::vector<double>& scores, const std::vector<int>& labels) {
        return auroc(scores, labels);
    });
}
