#include "tfbd/quadrature.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "tfbd/errors.hpp"

namespace tfbd {

namespace {

constexpr std::size_t kWorkspaceSize = 2000;

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

double trampoline(double x, void* params) {
  return (*static_cast<const Integrand*>(params))(x);
}

// The library never lets GSL abort the process; status codes are turned into exceptions.
const bool kHandlerOff = [] {
  gsl_set_error_handler_off();
  return true;
}();

enum class Rule { gauss_kronrod, singular };

QuadratureResult run(Rule rule, const Integrand& f, double a, double b, double abs_tol,
                     double rel_tol) {
  (void)kHandlerOff;
  QuadratureResult r;
  if (a == b) return r;
  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
      gsl_integration_workspace_alloc(kWorkspaceSize));
  gsl_function fn;
  fn.function = &trampoline;
  fn.params = const_cast<Integrand*>(&f);
  int status = 0;
  if (rule == Rule::gauss_kronrod) {
    status = gsl_integration_qag(&fn, a, b, abs_tol, rel_tol, kWorkspaceSize, GSL_INTEG_GAUSS31,
                                 ws.get(), &r.value, &r.error);
  } else {
    status = gsl_integration_qags(&fn, a, b, abs_tol, rel_tol, kWorkspaceSize, ws.get(), &r.value,
                                  &r.error);
  }
  const double allowed = std::max(abs_tol, rel_tol * std::abs(r.value));
  // GSL may flag roundoff while still meeting the goal; accept if the estimate does.
  if (!std::isfinite(r.value) || (status != GSL_SUCCESS && r.error > allowed)) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] did not converge ("
       << gsl_strerror(status) << "): estimate " << r.value << ", achieved error " << r.error
       << ", requested " << allowed;
    throw QuadratureError(os.str(), r.value, r.error);
  }
  return r;
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, double abs_tol,
                           double rel_tol) {
  return run(Rule::gauss_kronrod, f, a, b, abs_tol, rel_tol);
}

QuadratureResult integrate_endpoint_singular(const Integrand& f, double a, double b,
                                             double abs_tol, double rel_tol) {
  return run(Rule::singular, f, a, b, abs_tol, rel_tol);
}

QuadratureResult integrate_piecewise(const Integrand& f, std::span<const double> breakpoints,
                                     double abs_tol, double rel_tol) {
  QuadratureResult total;
  if (breakpoints.size() < 2) return total;
  const double pieces = static_cast<double>(breakpoints.size() - 1);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const auto r = integrate(f, breakpoints[i], breakpoints[i + 1], abs_tol / pieces, rel_tol);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

}  // namespace tfbd
