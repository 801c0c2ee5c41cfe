r"""Polynomial interpolation machinery shared by single block repair.

A repair group gathers the \( r \) parity equations that touch the \( s \)
lost symbols of one group. Written in matrix form they read

\[ E_{L_1} F_{L_1} + L_2 + E_V F_V = 0, \]

where \( E_{L_1} \) is a Vandermonde matrix in the points of the lost
symbols, \( L_2 \) collects the fully downloaded symbols and \( F_V \) the
group sums \( \mu \) of the remaining blocks. Left multiplying by the
matrix \( P \) of coefficients of \( x^i p_0(x) \), where \( p_0 \)
vanishes on the lost points, eliminates \( F_{L_1} \) and leaves an
\( (r - s) \times (r - s) \) system in the \( \mu \) values that were not
downloaded. Once those are known, \( F_{L_1} \) follows from an
\( s \times s \) Vandermonde system.
"""

import numpy as np

from ..gf import mat_mul, mat_solve, poly_from_roots
from ..errors import SingularSystem, ScalarValidationBug, InvalidParameters


def interpolation_coefficients(roots, r, field):
  r"""The \( (r - s) \times r \) matrix \( P \).

  Row \( i \) holds the ascending coefficients of
  \( x^i \prod_u (x - \rho_u) \) for the \( s \) given roots.
  """

  roots = field.array(roots).ravel()
  s = len(roots)
  if s >= r:
    raise InvalidParameters('Need fewer than r=%d roots, got %d.' % (r, s))
  p0 = poly_from_roots(roots, field)
  P = field.zeros((r - s, r))
  for i in range(r - s):
    P[i, i:i + s + 1] = p0
  return P


def _weighted_sum(points, values, r, field):
  """Rows m of sum_v points_v^m * values_v, for (c, G) inputs."""
  if len(points) == 0:
    return field.zeros((r, values.shape[-1]))
  pw = field.powers(points, r)
  return ((pw * values[None]) % field.p).sum(axis=1) % field.p


def recover_group_symbols(field, r, lost_points, known, contacted_points,
                          contacted_mu, missing_points):
  r"""Solve the repair equations of many groups at once.

  Groups whose non-contacted points coincide share one coefficient matrix,
  so each distinct matrix is factorised only once.

  Parameters
  ----------
  field: emsr_codes.gf.Field
      The base field.
  r: int
      Number of parity equations per group.
  lost_points: np.ndarray
      The \( s \) distinct points attached to the lost symbols.
  known: np.ndarray
      Shape \( (r, G) \). The contribution \( L_2 \) of fully downloaded
      symbols in every group.
  contacted_points: np.ndarray
      Shape \( (c, G) \). Points of the downloaded group sums.
  contacted_mu: np.ndarray
      Shape \( (c, G) \). The downloaded group sums.
  missing_points: np.ndarray
      Shape \( (r - s, G) \). Points of the group sums that were not
      downloaded.

  Returns
  -------
  tuple: `(lost, recovered_mu, y)` with shapes \( (s, G) \),
  \( (r - s, G) \) and \( (r - s, G) \), where `y` is \( P L_2 \).

  """

  p = field.p
  lost_points = field.array(lost_points)
  s = len(lost_points)
  known = field.array(known)
  G = known.shape[1]
  contacted_points = field.array(contacted_points).reshape(-1, G)
  contacted_mu = field.array(contacted_mu).reshape(-1, G)
  missing_points = field.array(missing_points).reshape(-1, G)
  assert missing_points.shape[0] == r - s, \
    "Expected %d missing group sums, got %d." \
    % (r - s, missing_points.shape[0])

  P = interpolation_coefficients(lost_points, r, field)
  y = mat_mul(P, known, field)

  contacted = _weighted_sum(contacted_points, contacted_mu, r, field)
  partial = (known + contacted) % p
  rhs = (-mat_mul(P, partial, field)) % p

  # A[i, v, g] = p_i(missing point v of group g)
  missing_pw = field.powers(missing_points, r)
  A = mat_mul(P, missing_pw.reshape(r, -1), field).reshape(r - s, r - s, G)

  recovered = field.zeros((r - s, G))
  patterns, inverse = np.unique(missing_points.T, axis=0, return_inverse=True)
  inverse = np.asarray(inverse).ravel()
  for u in range(len(patterns)):
    cols = np.flatnonzero(inverse == u)
    try:
      recovered[:, cols] = mat_solve(A[:, :, cols[0]], rhs[:, cols], field)
    except SingularSystem as err:
      raise ScalarValidationBug('Group sum recovery system is singular '
                                'for points %s.' % (patterns[u],)) from err

  total = (partial + _weighted_sum(missing_points, recovered, r, field)) % p
  vandermonde = field.powers(lost_points, s)
  try:
    lost = mat_solve(vandermonde, (-total[:s]) % p, field)
  except SingularSystem as err:
    raise ScalarValidationBug('Lost symbol points are not distinct: %s.'
                              % (lost_points,)) from err

  return lost, recovered, y
