#ifndef FWI_STENCIL_HPP
#define FWI_STENCIL_HPP

#include <functional>

namespace fwi {

/// Laplacian weights on the 7-node hexagon (center + 6 neighbors at
/// distance h). By symmetry all neighbors share one weight. Weights always
/// annihilate constants: center = -6*neighbor.
struct StencilWeights {
  double center = 0.0;
  double neighbor = 0.0;
  double shape = 0.0;  // epsilon, 1/meters
};

/// Gaussian RBF-FD weights for the Laplacian at the hexagon center, kernel
/// exp(-eps^2 r^2) augmented with a constant so the row sum vanishes.
/// eps = 0 returns the classical hexagonal Laplacian (neighbor 2/(3h^2),
/// center -4/h^2). Throws ValidationError when eps*h is too large for the
/// local system to be meaningful.
StencilWeights rbf_fd_weights(double eps, double h);

/// Discrete symbol of the stencil applied to exp(i k.x) with |k| = kmag and
/// propagation angle theta; the exact Laplacian gives -kmag^2.
double stencil_symbol(const StencilWeights& w, double h, double kmag,
                      double theta);

/// Shape parameter minimizing the worst-case dispersion error of the
/// stencil symbol over propagation angles, for local wavenumber k.
/// Numerical 1-D scan; returns 0 when k*h is tiny.
double suggest_shape_parameter(double k, double h);

/// eps as a function of the local wavenumber and spacing.
using ShapeRule = std::function<double(double k, double h)>;

ShapeRule classical_shape();            // always 0
ShapeRule fixed_shape(double eps);      // constant epsilon
ShapeRule tuned_shape();                // suggest_shape_parameter per node

}  // namespace fwi

#endif
