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

r"""Outer codes with large relative distance.

The outer code \( \mathcal{C}^{II} \) is a linear \( [N, K] \) code over
\( GF(q) \). Each of its \( M = q^K \) codewords indexes one block of the
composed code, and the symbol \( a_{i,j} \) picks the inner node used by
block \( i \) at coordinate \( j \).

At the sizes handled here every codeword is enumerated once, so the minimum
distance \( D \), the weight distribution and the number \( W \) of
full-weight codewords are exact.

The Reed-Solomon code evaluated on \( \{0, \dots, N-1\} \) is the
genus zero member of the algebraic geometry family; `ag_plan` in
`emsr_codes.models.outer.bounds` sizes the general family.

"""

import logging
from itertools import product

import numpy as np

from emsr_codes.gf import Field, is_prime
from emsr_codes.errors import InvalidParameters, NotEnoughEvaluationPoints

from .bounds import fw_lower_bound, ag_plan, PlanParams

logger = logging.getLogger(__name__)

__all__ = ['OuterCode', 'build_rs_outer', 'full_weight_count',
           'weight_distribution', 'fw_lower_bound', 'ag_plan', 'PlanParams']

MAX_CODEWORDS = 2**20


class OuterCode:
  r"""A linear outer code given by its generator matrix.

  Codewords are enumerated in message order, with the first message
  coordinate most significant, so block 0 is always the zero codeword.

  Parameters
  ----------
  q: int
      Prime alphabet size.
  generator: np.ndarray
      A \( K \times N \) generator matrix over \( GF(q) \). \( K = 0 \)
      gives the zero code.
  max_codewords: int
      Refuse to enumerate more codewords than this.

  """

  def __init__(self, q, generator, max_codewords=MAX_CODEWORDS):

    if not is_prime(q):
      raise InvalidParameters('Outer alphabet size %s is not prime.' % q)
    self.q = int(q)
    self.field = Field(self.q)

    generator = np.asarray(generator, dtype=np.int64)
    if generator.ndim != 2:
      raise InvalidParameters('Generator must be a K x N matrix.')
    self.generator = generator % self.q
    self.K, self.N = self.generator.shape
    if self.N < 1:
      raise InvalidParameters('Outer code length must be positive.')

    self.M = self.q**self.K
    if self.M > max_codewords:
      raise InvalidParameters('Refusing to enumerate %d codewords.' % self.M)

    messages = np.array(list(product(range(self.q), repeat=self.K)),
                        dtype=np.int64).reshape(self.M, self.K)
    self.messages = messages
    self.codewords = (messages @ self.generator) % self.q

    weights = np.count_nonzero(self.codewords, axis=1)
    self._weights = weights
    self._distribution = np.bincount(weights, minlength=self.N + 1)
    self.D = int(weights[1:].min()) if self.M > 1 else None
    self.W = int(self._distribution[self.N])

  def __call__(self):
    print('A [%d, %d] outer code over GF(%d)' % (self.N, self.K, self.q))
    print('Minimum distance:', self.D)

  @property
  def delta(self):
    return None if self.D is None else self.D / self.N

  def codeword(self, i):
    return self.codewords[i].copy()

  def eval_map(self, v):
    """Column index in \\{1, ..., q\\} for the outer symbol `v`."""
    return int(v) % self.q + 1

  def index_of(self, word):
    """Block index of an outer codeword given as a length N sequence."""
    word = np.asarray(word, dtype=np.int64) % self.q
    hits = np.flatnonzero((self.codewords == word[None, :]).all(axis=1))
    if hits.size == 0:
      raise InvalidParameters('%s is not an outer codeword.' % (word,))
    return int(hits[0])

  def weight_distribution(self):
    r"""Counts \( A_0, \dots, A_N \) of codewords per Hamming weight."""
    return self._distribution.copy()

  def agreements(self, i):
    """Per codeword, the number of coordinates equal to codeword `i`."""
    return np.count_nonzero(self.codewords == self.codewords[i][None, :],
                            axis=1)

  def validate(self):
    """Check coordinate balance and that no coordinate is identically zero."""

    for j in range(self.N):
      column = self.codewords[:, j]
      if not column.any():
        raise InvalidParameters('Coordinate %d is zero on every codeword.' % j)
      counts = np.bincount(column, minlength=self.q)
      if not (counts == self.M // self.q).all():
        raise InvalidParameters('Coordinate %d is not balanced: %s.'
                                % (j, counts.tolist()))
    return True


def build_rs_outer(q, N, K):
  r"""Reed-Solomon code evaluated at the points \( 0, 1, \dots, N-1 \).

  Row \( i \) of the generator holds the evaluations of \( x^i \).

  Parameters
  ----------
  q: int
      Prime alphabet size.
  N: int
      Code length, at most \( q \).
  K: int
      Dimension, \( 1 \le K < N \).

  """

  if not is_prime(q):
    raise InvalidParameters('Reed-Solomon alphabet size %s is not prime.' % q)
  if N > q:
    raise NotEnoughEvaluationPoints('GF(%d) has only %d evaluation points, '
                                    'need N=%d.' % (q, q, N))
  if not 1 <= K < N:
    raise InvalidParameters('Need 1 <= K < N, got K=%d, N=%d.' % (K, N))

  field = Field(q)
  generator = field.powers(np.arange(N), K)
  code = OuterCode(q, generator)
  code.validate()
  assert code.D == N - K + 1, \
    "Reed-Solomon distance %d differs from N-K+1." % code.D
  logger.info('Built RS outer code q=%d N=%d K=%d with W=%d.', q, N, K, code.W)
  return code


def full_weight_count(code):
  r"""Number \( W \) of codewords with no zero coordinate."""
  return code.W


def weight_distribution(code):
  return code.weight_distribution()
