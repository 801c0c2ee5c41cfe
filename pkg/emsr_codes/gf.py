# coding=utf-8
# MIT License

# Copyright (c) 2026 The emsr_codes authors

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

r"""Prime field arithmetic and dense linear algebra over \( GF(p) \).

Matrices are plain `numpy.ndarray` objects of dtype `int64` holding
canonical residues in \( [0, p) \). The modulus is restricted to
\( p < 2^{31} \) so that the product of two residues always fits in a
signed 64 bit integer; sums of products are reduced before they can wrap.

Elimination always picks the first nonzero entry of a column as the pivot,
which keeps every result reproducible across runs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (InversionOfZero, SingularSystem, DimensionMismatch,
                     InvalidParameters)

_INT64_MAX = np.iinfo(np.int64).max
MAX_MODULUS = 2**31


def is_prime(n):
  """Deterministic trial division primality test."""
  n = int(n)
  if n < 2:
    return False
  if n < 4:
    return True
  if n % 2 == 0:
    return False
  f = 3
  while f * f <= n:
    if n % f == 0:
      return False
    f += 2
  return True


def next_prime(n):
  """Return the smallest prime greater than or equal to `n`."""
  n = max(int(n), 2)
  while not is_prime(n):
    n += 1
  return n


@dataclass(frozen=True)
class Field:
  r"""The prime field \( GF(p) \).

  Parameters
  ----------
  p: int
      A prime modulus with \( 2 \le p < 2^{31} \).

  """

  p: int

  def __post_init__(self):
    if not isinstance(self.p, (int, np.integer)):
      raise InvalidParameters('Field modulus must be an integer.')
    if not is_prime(self.p) or self.p >= MAX_MODULUS:
      raise InvalidParameters('Field modulus %s is not a prime below 2^31.'
                              % self.p)
    object.__setattr__(self, 'p', int(self.p))

  @property
  def order(self):
    return self.p

  def array(self, values):
    """Coerce `values` to an int64 array of canonical residues."""
    return np.asarray(values, dtype=np.int64) % self.p

  def zeros(self, shape):
    return np.zeros(shape, dtype=np.int64)

  def eye(self, n):
    return np.eye(n, dtype=np.int64)

  def random(self, shape, rng=None):
    """Draw uniformly random field elements."""
    rng = np.random.default_rng(rng)
    return rng.integers(0, self.p, size=shape, dtype=np.int64)

  def inv(self, a):
    return ff_inv(a, self)

  def mul(self, a, b):
    """Elementwise product of two residue arrays."""
    return (self.array(a) * self.array(b)) % self.p

  def power(self, a, e):
    r"""Elementwise power \( a^e \) for a non-negative integer exponent."""
    a = self.array(a)
    out = np.ones_like(a)
    base = a.copy()
    e = int(e)
    while e:
      if e & 1:
        out = (out * base) % self.p
      base = (base * base) % self.p
      e >>= 1
    return out

  def powers(self, a, count):
    r"""Stack \( a^0, a^1, \dots, a^{count-1} \) along a new first axis."""
    a = self.array(a)
    out = np.empty((count,) + a.shape, dtype=np.int64)
    cur = np.ones_like(a)
    for m in range(count):
      out[m] = cur
      cur = (cur * a) % self.p
    return out


def ff_inv(a, f):
  r"""Multiplicative inverse of `a` in the field `f`.

  Raises
  ------
  InversionOfZero
      If \( a \equiv 0 \pmod p \).

  """
  a = int(a) % f.p
  if a == 0:
    raise InversionOfZero('Zero has no inverse in GF(%d).' % f.p)
  return pow(a, f.p - 2, f.p)


def mat_mul(a, b, f):
  """Matrix product modulo p that never overflows int64 accumulators."""

  a = f.array(a)
  b = f.array(b)
  if a.shape[-1] != b.shape[0]:
    raise DimensionMismatch('Cannot multiply %s by %s.' % (a.shape, b.shape))

  step = max(1, (_INT64_MAX - f.p) // max((f.p - 1)**2, 1))
  inner = a.shape[-1]
  if inner <= step:
    return (a @ b) % f.p

  out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
  for start in range(0, inner, step):
    stop = min(start + step, inner)
    out = (out + a[..., start:stop] @ b[start:stop]) % f.p
  return out


def row_reduce(m, f):
  """Reduced row echelon form of `m` and the tuple of pivot columns."""

  m = f.array(m).copy()
  if m.ndim != 2:
    raise DimensionMismatch('Expected a matrix, got shape %s.' % (m.shape,))
  rows, cols = m.shape
  pivots = []
  row = 0
  for col in range(cols):
    if row >= rows:
      break
    nonzero = np.flatnonzero(m[row:, col])
    if nonzero.size == 0:
      continue
    pivot = row + nonzero[0]
    if pivot != row:
      m[[row, pivot]] = m[[pivot, row]]
    m[row] = (m[row] * ff_inv(m[row, col], f)) % f.p
    factors = m[:, col].copy()
    factors[row] = 0
    idx = np.flatnonzero(factors)
    if idx.size:
      m[idx] = (m[idx] - np.outer(factors[idx], m[row])) % f.p
    pivots.append(col)
    row += 1
  return m, tuple(pivots)


def mat_rank(m, f):
  """Rank of `m` over the field, by forward elimination."""

  m = f.array(m).copy()
  if m.ndim != 2:
    raise DimensionMismatch('Expected a matrix, got shape %s.' % (m.shape,))
  rows, cols = m.shape
  rank = 0
  for col in range(cols):
    if rank == rows:
      break
    nonzero = np.flatnonzero(m[rank:, col])
    if nonzero.size == 0:
      continue
    pivot = rank + nonzero[0]
    if pivot != rank:
      m[[rank, pivot]] = m[[pivot, rank]]
    m[rank, col:] = (m[rank, col:] * ff_inv(m[rank, col], f)) % f.p
    below = rank + 1 + np.flatnonzero(m[rank + 1:, col])
    if below.size:
      m[below, col:] = (m[below, col:] -
                        np.outer(m[below, col], m[rank, col:])) % f.p
    rank += 1
  return rank


def mat_solve(a, b, f):
  r"""Solve \( a x = b \) exactly for a square, full rank `a`.

  Parameters
  ----------
  a: np.ndarray
      An \( n \times n \) matrix over the field.
  b: np.ndarray
      An \( n \times m \) matrix or a length \( n \) vector.
  f: Field
      The field.

  Returns
  -------
  np.ndarray: `x` with the same shape as `b`.

  Raises
  ------
  SingularSystem
      If `a` is not invertible.

  """

  a = f.array(a)
  b = f.array(b)
  if a.ndim != 2 or a.shape[0] != a.shape[1]:
    raise DimensionMismatch('Coefficient matrix must be square, got %s.'
                            % (a.shape,))
  vector = b.ndim == 1
  if vector:
    b = b[:, None]
  if b.shape[0] != a.shape[0]:
    raise DimensionMismatch('Right hand side has %d rows, expected %d.'
                            % (b.shape[0], a.shape[0]))

  n = a.shape[0]
  aug = np.concatenate([a, b], axis=1)
  for col in range(n):
    nonzero = np.flatnonzero(aug[col:, col])
    if nonzero.size == 0:
      raise SingularSystem('Matrix is singular (no pivot in column %d).' % col)
    pivot = col + nonzero[0]
    if pivot != col:
      aug[[col, pivot]] = aug[[pivot, col]]
    aug[col, col:] = (aug[col, col:] * ff_inv(aug[col, col], f)) % f.p
    factors = aug[:, col].copy()
    factors[col] = 0
    idx = np.flatnonzero(factors)
    if idx.size:
      aug[idx, col:] = (aug[idx, col:] -
                        np.outer(factors[idx], aug[col, col:])) % f.p

  x = aug[:, n:]
  return x[:, 0] if vector else x


def mat_inv(a, f):
  """Inverse of a square full rank matrix."""
  a = f.array(a)
  return mat_solve(a, f.eye(a.shape[0]), f)


def poly_from_roots(roots, f):
  r"""Ascending coefficients of \( \prod_u (x - \rho_u) \) over the field."""
  coeffs = np.array([1], dtype=np.int64)
  for root in f.array(roots).ravel():
    shifted = np.concatenate([[0], coeffs])
    scaled = np.concatenate([(coeffs * int(root)) % f.p, [0]])
    coeffs = (shifted - scaled) % f.p
  return coeffs


def poly_eval(coeffs, x, f):
  """Evaluate ascending `coeffs` at every entry of `x` (Horner)."""
  x = f.array(x)
  out = np.zeros_like(x)
  for c in np.asarray(coeffs, dtype=np.int64)[::-1]:
    out = (out * x + int(c)) % f.p
  return out
