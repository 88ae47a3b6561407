#pragma once

#include <string>
#include <vector>

#include "levygen/symbol.hpp"
#include "levygen/test_function.hpp"

namespace levygen {

/// Representation of Lf(x): ZeroOrder integrates f(x+y) - f(x); FirstOrder adds
/// b.grad f and compensates with grad f . y on |y| < 1; SecondOrder also adds tr(Q hess f)/2.
enum class GeneratorForm { ZeroOrder, FirstOrder, SecondOrder };

/// (0,1] -> ZeroOrder, (1,2) -> FirstOrder, 2 -> SecondOrder.
GeneratorForm select_form(double alpha);
std::string to_string(GeneratorForm form);

struct GeneratorOptions {
  double tol = 1e-9;
  double order = 0.0;            // declared alpha(x); ZeroOrder then requires a finite moment of this order on |y| <= 1
  bool pair_symmetric = true;    // integrate y and -y together for symmetric measures (compensated forms)
  double drift_tol = 1e-9;       // |b - compensator| allowed by the ZeroOrder form
  double panel = 0.25;           // outer panel width near the support of f
  double detail_radius = 32.0;   // panels are refined up to |x| + detail_radius
};

struct GeneratorResult {
  double value = 0.0;
  double abs_error = 0.0;
  GeneratorForm form = GeneratorForm::ZeroOrder;
  double inner = 0.0;            // rays, |y| < 1
  double outer = 0.0;            // rays, |y| >= 1
  double atoms = 0.0;
  double drift_term = 0.0;
  double diffusion_term = 0.0;
  long evaluations = 0;
};

/// Lf(x) for a fixed triplet. Throws InsufficientRegularity when the inner
/// shells diverge, ContractError when the form's oracles or drift conditions are missing.
GeneratorResult apply_pointwise(const LevyTriplet& t, const TestFunction& f, const Vector& x, GeneratorForm form,
                                const GeneratorOptions& opt = {});

/// -(-Delta)^{alpha/2} f(x) through the isotropic power measure with intensity c_alpha(alpha, d).
/// alpha < 1 uses ZeroOrder; alpha in [1,2) the compensated form with y/-y pairing, so no gradient is needed.
GeneratorResult fractional_laplacian(const TestFunction& f, const Vector& x, double alpha, const GeneratorOptions& opt = {});

struct GridRow {
  Vector x;
  double value = 0.0;
  double abs_error = 0.0;
  GeneratorForm form = GeneratorForm::ZeroOrder;
  bool ok = false;
  std::string status;
};

struct GridReport {
  std::vector<GridRow> rows;
  double outer_shell_ratio = 0.0;   // max |Lf| over the outermost states / max |Lf|
  double max_oscillation = 0.0;     // max |Lf(x_i) - Lf(x_{i+1})| along the grid order
  bool all_ok = true;
};

/// Lf on a grid of states with form select_form(alpha(x)) per state. Failures are recorded per row.
GridReport apply_on_grid(const StateTriplet& model, const ScalarField& alpha, const TestFunction& f,
                         const std::vector<Vector>& grid, const GeneratorOptions& opt = {}, int workers = 1);

}  // namespace levygen
