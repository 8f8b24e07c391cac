#include "lose/optimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <memory>
#include <stdexcept>

namespace lose {

namespace {

using Objective = std::function<double(const std::vector<double>&)>;

double trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  std::vector<double> x(v->size);
  for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
  return f(x);
}

struct VectorFree {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerFree {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, double step, int max_iter, double size_tol) {
  if (x0.empty()) throw std::invalid_argument("nelder_mead: empty starting point");
  const std::size_t n = x0.size();
  std::unique_ptr<gsl_vector, VectorFree> x(gsl_vector_alloc(n)), steps(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[i]);
  gsl_vector_set_all(steps.get(), step);

  gsl_multimin_function fn;
  fn.n = n;
  fn.f = &trampoline;
  fn.params = const_cast<Objective*>(&f);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerFree> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), steps.get());

  MinimizeResult res;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && res.iterations < max_iter) {
    ++res.iterations;
    if (gsl_multimin_fminimizer_iterate(s.get())) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), size_tol);
  }
  res.converged = status == GSL_SUCCESS;
  res.value = s->fval;
  res.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.x[i] = gsl_vector_get(s->x, i);
  return res;
}

}  // namespace lose
