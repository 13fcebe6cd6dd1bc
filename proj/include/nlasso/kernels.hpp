#pragma once

// Per-iteration kernels of the primal-dual solver.
//
// `kernels::` holds the OpenMP versions used by the solver. Every output block
// is computed by exactly one thread from inputs in a fixed order, so results do
// not depend on the thread count. `reference::` holds plain serial loops that
// follow the textbook formulation (edge-wise scatter for D^T); they are kept
// for testing and benchmarking and agree with the parallel kernels up to
// floating-point summation order.

#include <span>

#include "nlasso/graph.hpp"
#include "nlasso/model.hpp"

namespace nlasso {

enum class Backend { kParallel, kSerial };

namespace kernels {

void incidence(const EmpiricalGraph& g, const NodeSignal& w, EdgeSignal& out);
void incidence_adjoint(const EmpiricalGraph& g, const EdgeSignal& u, NodeSignal& out);

/// w_inter = w - T D^T u, then the absolute-loss prox on labeled nodes.
void primal_update(const NetworkDataset& ds, std::span<const double> tau, const NodeSignal& w,
                   const EdgeSignal& u, NodeSignal& out);

/// u_bar = u + Sigma D (2 w_next - w_prev), then clip every block to the lambda ball.
void dual_update(const EmpiricalGraph& g, std::span<const double> sigma, double lambda,
                 const EdgeSignal& u, const NodeSignal& w_next, const NodeSignal& w_prev,
                 EdgeSignal& out);

}  // namespace kernels

namespace reference {

void incidence(const EmpiricalGraph& g, const NodeSignal& w, EdgeSignal& out);
void incidence_adjoint(const EmpiricalGraph& g, const EdgeSignal& u, NodeSignal& out);
void primal_update(const NetworkDataset& ds, std::span<const double> tau, const NodeSignal& w,
                   const EdgeSignal& u, NodeSignal& out);
void dual_update(const EmpiricalGraph& g, std::span<const double> sigma, double lambda,
                 const EdgeSignal& u, const NodeSignal& w_next, const NodeSignal& w_prev,
                 EdgeSignal& out);

}  // namespace reference

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();
/// No-op without OpenMP.
void set_threads(int n);

}  // namespace nlasso
