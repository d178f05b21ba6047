/// @file operators.hpp
/// @brief Staggered gradient/divergence pair and the flux-form weighted Laplacian.
///
/// Radial grids: Dirichlet value 0 just outside r_max (ghost at distance h/2),
/// zero face area at r = 0.  Cartesian boxes: impermeable walls, so gradients and
/// fluxes vanish on every boundary face.
#pragma once

#include "lowmach/field.hpp"

namespace lowmach {

/// Harmonic mean of the coefficient across each face; boundary faces take the
/// value of the interior cell.
VectorField face_coefficients(const ScalarField& coef);

/// Face-staggered gradient of a cell field.
VectorField face_gradient(const ScalarField& phi);

/// Cell divergence of a face field (wall faces contribute nothing).
ScalarField face_divergence(const VectorField& v);

/// div(coef_f grad phi) with precomputed face coefficients.
ScalarField weighted_laplacian(const ScalarField& phi, const VectorField& face_coef);

/// Inner product of two face fields with the face control volumes
/// (4 pi r_f^2 times the centre distance, or h^3).  Wall faces are skipped.
double face_inner(const VectorField& a, const VectorField& b);

/// Averages between cell and face staggering.  to_faces uses the mirror image at
/// r = 0 and the interior value on boundary faces; to_cells reads the lower face
/// as zero at r = 0 and at walls.
VectorField to_faces(const VectorField& cell);
VectorField to_cells(const VectorField& face);

/// Zeroes face values sitting on the outer boundary of a cartesian box.
void clear_wall_faces(VectorField& face);

}  // namespace lowmach
