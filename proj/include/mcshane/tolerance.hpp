#pragma once

namespace mcshane::tol {

// Transversality threshold for segment crossings; tangential contacts are absent.
inline constexpr double kIntersection = 1e-10;
// arcsin/arccos arguments within this of [-1, 1] are clamped onto it.
inline constexpr double kClamp = 1e-9;
// |ad - bc - 1| allowed on an isometry handed to apply().
inline constexpr double kDeterminant = 1e-12;
// |trace| within this of 2 counts as parabolic.
inline constexpr double kClassify = 1e-9;
// Wall-crossing candidates closer than this are treated as a vertex hit.
inline constexpr double kVertex = 1e-9;
// Direction jitter used when a ray grazes a vertex.
inline constexpr double kVertexJitter = 1e-7;

}  // namespace mcshane::tol
