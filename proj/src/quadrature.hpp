/*
 * Copyright 2026 The uwauth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <mutex>
#include <type_traits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace uwauth::detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

inline gsl_integration_workspace* workspace(int max_panels) {
  // GSL aborts on errors by default; status codes are checked instead.
  static std::once_flag quiet;
  std::call_once(quiet, [] { gsl_set_error_handler_off(); });
  struct Holder {
    gsl_integration_workspace* w = nullptr;
    int size = 0;
    ~Holder() {
      if (w) gsl_integration_workspace_free(w);
    }
  };
  thread_local Holder holder;
  if (holder.size < max_panels) {
    if (holder.w) gsl_integration_workspace_free(holder.w);
    holder.w = gsl_integration_workspace_alloc(static_cast<std::size_t>(max_panels));
    holder.size = max_panels;
  }
  return holder.w;
}

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [a, b] to
/// an absolute error target (GSL QAG). The integrand is never evaluated at
/// the end points.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_panels = 4000) {
  using Fn = std::remove_reference_t<F>;
  gsl_function fn;
  fn.function = [](double x, void* p) { return (*static_cast<Fn*>(p))(x); };
  fn.params = const_cast<void*>(static_cast<const void*>(&f));
  QuadResult r;
  const int status = gsl_integration_qag(&fn, a, b, abs_tol, 0.0, static_cast<std::size_t>(max_panels),
                                         GSL_INTEG_GAUSS15, workspace(max_panels), &r.value,
                                         &r.error);
  r.converged = status == GSL_SUCCESS && r.error <= abs_tol;
  return r;
}

}  // namespace uwauth::detail
