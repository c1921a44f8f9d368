// Timing comparison of the OpenMP cell kernels against the serial reference
// implementation, plus a bitwise agreement check on every output buffer.
// Usage: bench_kernels [h] [repetitions]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "uhlab/experiment.hpp"
#include "uhlab/kernels.hpp"
#include "uhlab/mesh.hpp"
#include "uhlab/nonlinearity.hpp"
#include "uhlab/parallel.hpp"

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

} // namespace

int main(int argc, char** argv) {
  const double h = argc > 1 ? std::atof(argv[1]) : 0.02;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
  if (!(h > 0) || reps < 1) {
    std::fprintf(stderr, "usage: bench_kernels [h > 0] [repetitions >= 1]\n");
    return 2;
  }

  const uhlab::Mesh mesh = uhlab::DomainSpec::disk(1.0).build(h);
  std::printf("disk mesh: h=%g, %d vertices, %d cells, %d threads\n", h,
              mesh.vertex_count(), mesh.cell_count(), uhlab::max_jobs());

  const uhlab::NonlinearitySpec spec = uhlab::NonlinearitySpec::power(3.0);
  const auto a = [&spec](double t) { return spec.a(t); };
  const auto ap = [&spec](double t) { return spec.a_prime(t); };

  uhlab::NodalField u;
  u.components = 1;
  u.values.resize(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const double* x = mesh.vertex(v);
    u.values[v] = x[0] * x[0] - 0.3 * x[1] + 0.1 * x[0] * x[1];
  }

  std::vector<double> grads, grads_ref, res, res_ref, jac, jac_ref;
  double t_grad = 0, t_grad_ref = 0, t_res = 0, t_res_ref = 0, t_jac = 0,
         t_jac_ref = 0;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    uhlab::cell_gradients(mesh, u, grads);
    t_grad += seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    uhlab::ref::cell_gradients(mesh, u, grads_ref);
    t_grad_ref += seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    uhlab::residual_cells(mesh, grads, u.components, a, res);
    t_res += seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    uhlab::ref::residual_cells(mesh, grads_ref, u.components, a, res_ref);
    t_res_ref += seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    uhlab::jacobian_cells(mesh, grads, u.components, a, ap, jac);
    t_jac += seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    uhlab::ref::jacobian_cells(mesh, grads_ref, u.components, a, ap, jac_ref);
    t_jac_ref += seconds_since(t0);
  }

  const bool same = bitwise_equal(grads, grads_ref) &&
                    bitwise_equal(res, res_ref) && bitwise_equal(jac, jac_ref);
  std::printf("bitwise agreement: %s\n", same ? "yes" : "NO");
  std::printf("%-16s %12s %12s %8s\n", "kernel", "parallel[s]", "serial[s]",
              "speedup");
  const auto line = [reps](const char* name, double par, double ser) {
    std::printf("%-16s %12.6f %12.6f %8.2f\n", name, par / reps, ser / reps,
                par > 0 ? ser / par : 0.0);
  };
  line("cell_gradients", t_grad, t_grad_ref);
  line("residual_cells", t_res, t_res_ref);
  line("jacobian_cells", t_jac, t_jac_ref);
  return same ? 0 : 1;
}
