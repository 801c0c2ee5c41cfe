r"""Selection and validation of the block scalars \( \sigma_i \).

Block \( i \) of the composed code uses the points
\( \sigma_i \lambda_{a, x} \) at coordinate \( j \), where
\( a = a_{i,j} \) is its inner node there. The scalars are valid when they
are distinct and nonzero and, at every coordinate, blocks sitting on
different inner nodes never share a point:

\[ \sigma_i \Lambda(a_{i,j}) \cap \sigma_{i'} \Lambda(a_{i',j}) = \emptyset
   \quad \text{whenever } a_{i,j} \ne a_{i',j}. \]

This keeps the roots of every interpolation polynomial away from the
points of the blocks it is evaluated at, makes every
\( (r - s) \times (r - s) \) recovery system a scaled Vandermonde matrix,
and makes every per-coordinate parity submatrix invertible.
"""

import logging

import numpy as np

from emsr_codes.errors import FieldTooSmall

logger = logging.getLogger(__name__)


def validate_scalars(field, inner, outer, sigma):
  """List every violation of the scalar predicate.

  Returns
  -------
  list: Tuples `(reason, detail)`. An empty list means `sigma` is valid.

  """

  p = field.p
  sigma = np.asarray(sigma, dtype=np.int64)
  violations = []

  if len(sigma) != outer.M:
    return [('count', (len(sigma), outer.M))]
  if (sigma % p == 0).any():
    violations.append(('zero', tuple(np.flatnonzero(sigma % p == 0).tolist())))
  values, counts = np.unique(sigma % p, return_counts=True)
  if (counts > 1).any():
    violations.append(('duplicate', tuple(values[counts > 1].tolist())))

  upper = np.triu(np.ones((outer.M, outer.M), dtype=bool), k=1)
  for j in range(outer.N):
    nodes = outer.codewords[:, j]
    points = (sigma[:, None] * inner.lam[nodes]) % p
    shared = (points[:, None, :, None] == points[None, :, None, :]).any(
        axis=(2, 3))
    clash = shared & (nodes[:, None] != nodes[None, :]) & upper
    for i, i2 in zip(*np.nonzero(clash)):
      violations.append(('shared_point', (j, int(i), int(i2))))

  return violations


def select_scalars(field, inner, outer):
  r"""Deterministic ascending search for valid scalars.

  Block \( i \) takes the smallest nonzero field element not yet used and
  not forbidden by the scalars of blocks \( 0, \dots, i-1 \).

  Raises
  ------
  FieldTooSmall
      If some block has no admissible scalar left.

  """

  p = field.p
  M = outer.M
  if M > p - 1:
    raise FieldTooSmall('GF(%d) has fewer than M=%d nonzero elements.'
                        % (p, M))

  inv_lam = np.vectorize(field.inv, otypes=[np.int64])(inner.lam)
  sigma = np.zeros(M, dtype=np.int64)

  for i in range(M):
    forbidden = set(sigma[:i].tolist())
    for j in range(outer.N):
      nodes = outer.codewords[:i + 1, j]
      a = nodes[i]
      others = np.flatnonzero(nodes[:i] != a)
      if others.size == 0:
        continue
      points = (sigma[others, None] * inner.lam[nodes[others]]) % p
      ratios = (points[:, :, None] * inv_lam[a][None, None, :]) % p
      forbidden.update(ratios.ravel().tolist())

    candidate = next((c for c in range(1, p) if c not in forbidden), None)
    if candidate is None:
      raise FieldTooSmall('No admissible scalar for block %d in GF(%d).'
                          % (i, p))
    sigma[i] = candidate

  logger.debug('Selected scalars over GF(%d): %s', p, sigma.tolist())
  return sigma.tolist()
