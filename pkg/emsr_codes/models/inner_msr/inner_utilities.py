"""Utility functions for s-ary indexing of inner code symbol positions."""

from dataclasses import dataclass

import numpy as np

from emsr_codes.errors import IndexOutOfRange


@dataclass(frozen=True)
class SAryIndex:
  r"""A position \( b \in [0, s^n) \) together with its base-\( s \) digits.

  Digit positions are numbered \( 1 \dots n \) from the right, so digit
  \( i \) is \( b_i = \lfloor b / s^{i-1} \rfloor \bmod s \) and selects the
  \( \lambda \) entry of inner node \( i \).

  """

  value: int
  s: int
  n: int

  def __post_init__(self):
    if self.s < 2 or self.n < 1:
      raise IndexOutOfRange('Radix must be >= 2 and length >= 1.')
    if not 0 <= self.value < self.s**self.n:
      raise IndexOutOfRange('Index %d outside [0, %d).'
                            % (self.value, self.s**self.n))

  @classmethod
  def from_digits(cls, digits, s):
    """Build from digits ordered most significant first, (b_n, ..., b_1)."""
    value = 0
    for d in digits:
      if not 0 <= d < s:
        raise IndexOutOfRange('Digit %d outside [0, %d).' % (d, s))
      value = value * s + int(d)
    return cls(value, s, len(digits))

  @property
  def digits(self):
    """Digits (b_n, ..., b_1), most significant first."""
    return tuple(self.digit(i) for i in range(self.n, 0, -1))

  def digit(self, i):
    if not 1 <= i <= self.n:
      raise IndexOutOfRange('Digit position %d outside [1, %d].' % (i, self.n))
    return (self.value // self.s**(i - 1)) % self.s

  def replace(self, i, u):
    return digit_replace(self, i, u)

  def __int__(self):
    return self.value


def digit_replace(b, i, u, s=None, n=None):
  r"""The index \( b(i, u) \): digit \( i \) of \( b \) replaced by \( u \).

  `b` is either an `SAryIndex` or a plain integer, in which case `s` and
  `n` must be given. The result has the same type as `b`.
  """

  if isinstance(b, SAryIndex):
    s, n, value = b.s, b.n, b.value
  else:
    if s is None or n is None:
      raise IndexOutOfRange('Radix and length are required for integer '
                            'indices.')
    value = int(b)
    SAryIndex(value, s, n)
  if not 1 <= i <= n:
    raise IndexOutOfRange('Digit position %d outside [1, %d].' % (i, n))
  if not 0 <= u < s:
    raise IndexOutOfRange('Digit %d outside [0, %d).' % (u, s))

  weight = s**(i - 1)
  out = value - ((value // weight) % s) * weight + u * weight
  if isinstance(b, SAryIndex):
    return SAryIndex(out, s, n)
  return out


def digit_table(s, n):
  """Array of shape (s**n, n); column i-1 holds digit i of every index."""
  values = np.arange(s**n, dtype=np.int64)
  weights = s ** np.arange(n, dtype=np.int64)
  return (values[:, None] // weights[None, :]) % s


def group_bases(s, n, node):
  """Canonical group representatives for repairing 0-based `node`.

  Returns every index whose digit for `node` is zero, in ascending order.
  """
  table = digit_table(s, n)
  return np.flatnonzero(table[:, node] == 0)


def group_positions(bases, s, node):
  """Positions b(node, k) for k in [0, s); shape (s, len(bases))."""
  return bases[None, :] + np.arange(s, dtype=np.int64)[:, None] * s**node
