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

r"""Inner MSR code with \( t \)-optimal repair.

An \( (n, k, t) \) array code over \( GF(p) \) with \( r = n - k \) parity
blocks, \( s = t - k + 1 \) and sub-packetization \( \ell = s^n \). Node
\( i \) owns the \( s \) distinct field elements
\( \lambda_{i,0}, \dots, \lambda_{i,s-1} \) and the code is the kernel of

\[ \sum_{i} \lambda_{i, b_i}^{m} c_{i, b} = 0, \qquad
   m \in [0, r),\ b \in [0, \ell), \]

where \( b_i \) is the \( i \)-th base-\( s \) digit of \( b \). Any single
node is rebuilt from any \( t \) helpers, each sending \( \ell / s \)
symbols.

Nodes are numbered from 0; the first \( k \) nodes are systematic.

Example
-------
>>> from emsr_codes.gf import Field
>>> from emsr_codes.models.inner_msr import build_inner
>>> code = build_inner(5, 2, 3, Field(11))
>>> word = code.encode(message)
>>> block, trace = code.repair(word, failed=0, helpers=[1, 2, 3])

"""

import logging
from itertools import combinations

import numpy as np

from emsr_codes.gf import mat_mul, mat_inv, mat_rank
from emsr_codes.errors import (InvalidParameters, DimensionMismatch,
                               IndexOutOfRange, TooManyErasures,
                               NotACodeword, BadHelperSet)
from emsr_codes.models.interpolation import recover_group_symbols

from .inner_utilities import (SAryIndex, digit_replace, digit_table,
                              group_bases, group_positions)

logger = logging.getLogger(__name__)

__all__ = ['InnerMsrCode', 'build_inner', 'SAryIndex', 'digit_replace',
           'digit_table', 'inner_parity_matrix', 'inner_encode',
           'inner_verify', 'inner_decode_erasures', 'inner_repair',
           'inner_mds_check']


class InnerMsrCode:
  r"""An inner MSR code.

  Parameters
  ----------
  n: int
      Number of nodes.
  k: int
      Number of systematic nodes.
  t: int
      Number of helpers contacted during repair, \( k \le t < n - 1 \).
  field: emsr_codes.gf.Field
      The base field. Must hold at least \( sn + 1 \) elements.

  """

  def __init__(self, n, k, t, field):

    if not (1 <= k <= t < n - 1):
      raise InvalidParameters('Need 1 <= k <= t < n-1, got n=%d, k=%d, t=%d.'
                              % (n, k, t))
    s = t - k + 1
    if s < 2:
      raise InvalidParameters('Degenerate radix s=%d (t must exceed k).' % s)
    if field.p < s * n + 1:
      raise InvalidParameters('GF(%d) has fewer than s*n + 1 = %d elements.'
                              % (field.p, s * n + 1))

    self.n, self.k, self.t = n, k, t
    self.r = n - k
    self.s = s
    self.ell = s**n
    self.field = field

    # lam[i, j] is the element numbered i*s + j + 1 for 0-based node i.
    self.lam = field.array(np.arange(1, s * n + 1).reshape(n, s))
    self.digits = digit_table(s, n)
    self._parity_inverse = None

  def __call__(self):
    print('An (n=%d, k=%d, t=%d) inner MSR code over GF(%d)'
          % (self.n, self.k, self.t, self.field.p))
    print('Sub-packetization:', self.ell)

  def node_points(self, i):
    r"""Diagonal of \( H_i \): \( \lambda_{i, b_i} \) for every position."""
    self._check_node(i)
    return self.lam[i, self.digits[:, i]]

  def parity_block(self, m, i):
    r"""The \( \ell \times \ell \) diagonal block \( H_i^m \)."""
    return np.diag(self.field.power(self.node_points(i), m))

  def thick_columns(self, nodes):
    """Columns of the parity check matrix owned by `nodes`, side by side."""
    nodes = list(nodes)
    ell, r = self.ell, self.r
    out = self.field.zeros((r * ell, len(nodes) * ell))
    idx = np.arange(ell)
    for c, i in enumerate(nodes):
      pw = self.field.powers(self.node_points(i), r)
      for m in range(r):
        out[m * ell + idx, c * ell + idx] = pw[m]
    return out

  def parity_matrix(self):
    r"""The full \( r\ell \times n\ell \) parity check matrix."""
    return self.thick_columns(range(self.n))

  def _syndrome(self, nodes, data):
    """Rows m of sum_i H_i^m c_i over `nodes`; shape (r, ell)."""
    p = self.field.p
    out = self.field.zeros((self.r, self.ell))
    for i, block in zip(nodes, data):
      pw = self.field.powers(self.node_points(i), self.r)
      out = (out + pw * block[None, :]) % p
    return out

  def _check_node(self, i):
    if not 0 <= int(i) < self.n:
      raise IndexOutOfRange('Node %s outside [0, %d).' % (i, self.n))

  def _as_word(self, word):
    word = self.field.array(word)
    if word.shape != (self.n, self.ell):
      raise DimensionMismatch('Expected a word of shape %s, got %s.'
                              % ((self.n, self.ell), word.shape))
    return word

  def encode(self, message):
    r"""Systematic encoding of \( k \ell \) message symbols.

    Returns
    -------
    np.ndarray: The codeword as an `(n, ell)` array.

    """

    message = self.field.array(message)
    if message.size != self.k * self.ell:
      raise DimensionMismatch('Message must hold k*ell = %d symbols, got %d.'
                              % (self.k * self.ell, message.size))
    message = message.reshape(self.k, self.ell)

    if self._parity_inverse is None:
      self._parity_inverse = mat_inv(
          self.thick_columns(range(self.k, self.n)), self.field)

    rhs = (-self._syndrome(range(self.k), message)).ravel() % self.field.p
    parity = mat_mul(self._parity_inverse, rhs, self.field)
    return np.concatenate([message, parity.reshape(self.r, self.ell)])

  def verify(self, word):
    """True when `word` satisfies every parity equation."""
    word = self._as_word(word)
    return not self._syndrome(range(self.n), word).any()

  def decode_erasures(self, word, erased):
    r"""Rebuild up to \( r \) erased nodes from the intact ones.

    Intact nodes beyond the \( n - r \) needed are decoded as well and
    compared with the stored data, which detects inconsistent input.
    """

    word = self._as_word(word)
    erased = sorted(set(int(i) for i in erased))
    for i in erased:
      self._check_node(i)
    if not erased:
      return word.copy()
    if len(erased) > self.r:
      raise TooManyErasures('%d erasures exceed r=%d.'
                            % (len(erased), self.r))

    intact = [i for i in range(self.n) if i not in erased]
    extra = intact[len(intact) - (self.r - len(erased)):] \
      if len(erased) < self.r else []
    unknown = erased + extra
    known = [i for i in intact if i not in extra]

    rhs = (-self._syndrome(known, word[known])).ravel() % self.field.p
    inv = mat_inv(self.thick_columns(unknown), self.field)
    solved = mat_mul(inv, rhs, self.field).reshape(self.r, self.ell)

    out = word.copy()
    for c, i in enumerate(unknown):
      if i in extra and not np.array_equal(solved[c], word[i]):
        raise NotACodeword('Intact node %d disagrees with the decoded word.'
                           % i)
      out[i] = solved[c]
    return out

  def repair(self, word, failed, helpers):
    r"""Rebuild node `failed` from \( \ell / s \) symbols of each helper.

    Parameters
    ----------
    word: np.ndarray
        The codeword; row `failed` is never read.
    failed: int
        The failed node.
    helpers: list
        Exactly \( t \) distinct nodes other than `failed`.

    Returns
    -------
    tuple: The rebuilt block and a dict mapping each helper to the number
    of symbols it sent.

    """

    self._check_node(failed)
    helpers = sorted(set(int(h) for h in helpers))
    if len(helpers) != self.t or failed in helpers or \
       any(not 0 <= h < self.n for h in helpers):
      raise BadHelperSet('Need %d distinct helpers other than node %d, got '
                         '%s.' % (self.t, failed, helpers))

    p, s = self.field.p, self.s
    bases = group_bases(s, self.n, failed)
    positions = group_positions(bases, s, failed)
    missing = [i for i in range(self.n) if i != failed and i not in helpers]

    mu = np.stack([self.field.array(word[h])[positions].sum(axis=0) % p
                   for h in helpers])
    points = np.stack([self.lam[h, self.digits[bases, h]] for h in helpers])
    missing_points = np.stack([self.lam[v, self.digits[bases, v]]
                               for v in missing])

    lost, _, _ = recover_group_symbols(
        self.field, self.r, self.lam[failed],
        known=self.field.zeros((self.r, len(bases))),
        contacted_points=points, contacted_mu=mu,
        missing_points=missing_points)

    block = self.field.zeros(self.ell)
    block[positions] = lost
    trace = {h: len(bases) for h in helpers}
    logger.debug('Repaired node %d from helpers %s.', failed, helpers)
    return block, trace

  def mds_check(self):
    """Return the r-subsets of nodes whose thick columns are rank deficient."""
    bad = []
    for subset in combinations(range(self.n), self.r):
      if mat_rank(self.thick_columns(subset), self.field) != self.r * self.ell:
        bad.append(subset)
    return bad

  def naive_repair_bandwidth(self):
    """Symbols downloaded when a node is rebuilt by full decoding."""
    return self.k * self.ell

  def repair_bandwidth(self):
    return self.t * self.ell // self.s


def build_inner(n, k, t, field):
  r"""Build the inner code with the canonical \( \lambda \) assignment."""
  return InnerMsrCode(n, k, t, field)


def inner_parity_matrix(code):
  return code.parity_matrix()


def inner_encode(code, message):
  return code.encode(message)


def inner_verify(code, word):
  return code.verify(word)


def inner_decode_erasures(code, word, erased):
  return code.decode_erasures(word, erased)


def inner_repair(code, word, failed, helpers):
  return code.repair(word, failed, helpers)


def inner_mds_check(code):
  return code.mds_check()
