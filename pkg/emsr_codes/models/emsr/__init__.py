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

r"""
\( \epsilon \)-MSR Codes
------------------------

The composed code \( \mathcal{C} = \mathcal{C}^{II} \circ \mathcal{C}^{I} \)
has one block per outer codeword \( a_i \), \( i \in [0, M) \). Block
\( i \) is split into \( N \) sub-blocks of \( \ell \) symbols and its
thick column in the parity check matrix is

\[ \begin{bmatrix}
   \mathrm{Diag}(H_{a_{i,1}}^0, \dots, H_{a_{i,N}}^0) \\
   \sigma_i \mathrm{Diag}(H_{a_{i,1}}, \dots, H_{a_{i,N}}) \\
   \vdots \\
   \sigma_i^{r-1} \mathrm{Diag}(H_{a_{i,1}}^{r-1}, \dots,
   H_{a_{i,N}}^{r-1})
   \end{bmatrix}, \]

where \( H_a \) is the diagonal matrix of inner node \( a \). The result
is an MDS array code with \( \mathcal{N} = M \) blocks, \( \mathcal{K} =
M - r \) data blocks and sub-packetization \( \mathcal{L} = N \ell \).

A failed block is rebuilt from \( \mathcal{T} = M - n + t \) helpers. A
helper that agrees with the failed block on \( w \) outer coordinates
sends \( w \ell + (N - w) \ell / s \) symbols; blocks agreeing somewhere
are compulsory helpers. With outer relative distance
\( \delta \ge 1 - \epsilon / (r - 1) \) no helper sends more than
\( (1 + \epsilon) \mathcal{L} / s \) symbols.

Example
-------
>>> from emsr_codes.models.emsr import build_emsr
>>> from emsr_codes.models.emsr.repair import plan_repair, execute_repair
>>> code = build_emsr(n=5, k=2, t=3, q=5, N=4, K=2, epsilon=0.5)
>>> word = code.encode(message)
>>> plan = plan_repair(code, failed=0)
>>> block, report = execute_repair(code, word, plan)

"""

import logging
import warnings
from dataclasses import dataclass, field as dataclass_field
from itertools import combinations

import numpy as np
from sklearn.utils import check_random_state
from tqdm import tqdm

from emsr_codes.gf import Field, next_prime, mat_mul, mat_inv, mat_rank, \
  MAX_MODULUS
from emsr_codes.errors import (InvalidParameters, DimensionMismatch,
                               IndexOutOfRange, TooManyErasures,
                               NotACodeword, FieldTooSmall)
from emsr_codes.models.inner_msr import build_inner
from emsr_codes.models.outer import build_rs_outer

from .scalars import select_scalars, validate_scalars

logger = logging.getLogger(__name__)

__all__ = ['EmsrCode', 'MdsReport', 'build_emsr', 'select_scalars',
           'validate_scalars', 'emsr_parity_column', 'emsr_encode',
           'emsr_verify', 'emsr_decode_erasures', 'mds_check']


@dataclass
class MdsReport:
  """Outcome of an MDS rank sweep."""

  mode: str
  subsets_checked: int
  ranks_checked: int
  violations: list = dataclass_field(default_factory=list)

  @property
  def passed(self):
    return not self.violations

  def to_dict(self):
    return {'mode': self.mode, 'subsets_checked': self.subsets_checked,
            'ranks_checked': self.ranks_checked, 'passed': self.passed,
            'violations': [{'blocks': list(e), 'coordinate': j}
                           for e, j in self.violations]}


class EmsrCode:
  r"""An \( \epsilon \)-MSR code with the \( (\mathcal{T}, \mathcal{T}')
  \)-repair property.

  Parameters
  ----------
  inner: emsr_codes.models.inner_msr.InnerMsrCode
      The inner MSR code. Its field is the field of the composed code.
  outer: emsr_codes.models.outer.OuterCode
      The outer code, with \( r < q \le n \).
  sigma: list
      The \( M \) block scalars.
  epsilon: float
      Target bandwidth overhead used for the per-helper budget.
  check_scalars: bool
      Validate `sigma` on construction.

  """

  def __init__(self, inner, outer, sigma, epsilon=0.5, check_scalars=True):

    if not inner.r < outer.q <= inner.n:
      raise InvalidParameters('Need r < q <= n, got r=%d, q=%d, n=%d.'
                              % (inner.r, outer.q, inner.n))
    if outer.M <= inner.r:
      raise InvalidParameters('Outer code has M=%d <= r=%d codewords.'
                              % (outer.M, inner.r))
    if epsilon < 0:
      raise InvalidParameters('epsilon must be non-negative.')

    self.inner = inner
    self.outer = outer
    self.field = inner.field
    self.epsilon = float(epsilon)

    sigma = self.field.array(sigma).ravel()
    if len(sigma) != outer.M:
      raise DimensionMismatch('Expected %d scalars, got %d.'
                              % (outer.M, len(sigma)))
    if check_scalars:
      violations = validate_scalars(self.field, inner, outer, sigma)
      if violations:
        raise InvalidParameters('Block scalars are invalid: %s.'
                                % (violations[:5],))
    self.sigma = sigma

    self.r, self.s, self.ell = inner.r, inner.s, inner.ell
    self.N = outer.N
    self.n_blocks = outer.M
    self.message_blocks = outer.M - inner.r
    self.helpers = outer.M - inner.n + inner.t
    self.subpacketization = outer.N * inner.ell

    if self.t_prime_helpers > self.helpers:
      raise InvalidParameters('%d compulsory helpers exceed T=%d.'
                              % (self.t_prime_helpers, self.helpers))

    if self.delta < self.delta_min:
      warnings.warn('Outer relative distance %.3f is below 1 - eps/(r-1) = '
                    '%.3f; the per-helper budget is not guaranteed.'
                    % (self.delta, self.delta_min))

    self._points = {}
    self._encoders = {}

  def __call__(self):
    print('An eps-MSR code with %d blocks over GF(%d)'
          % (self.n_blocks, self.field.p))
    print('Helpers:', self.helpers, 'Sub-packetization:',
          self.subpacketization)

  @property
  def M(self):
    return self.n_blocks

  @property
  def delta(self):
    return self.outer.delta

  @property
  def delta_min(self):
    return 1 - self.epsilon / (self.r - 1)

  @property
  def budget(self):
    r"""Per-helper download budget \( (1 + \epsilon) \mathcal{L} / s \)."""
    return (1 + self.epsilon) * self.subpacketization / self.s

  @property
  def t_prime(self):
    """Compulsory count M - W, which includes the failed block."""
    return self.n_blocks - self.outer.W

  @property
  def t_prime_helpers(self):
    """Compulsory helpers, M - 1 - W."""
    return self.n_blocks - 1 - self.outer.W

  @property
  def systematic(self):
    return list(range(self.message_blocks))

  @property
  def parity(self):
    return list(range(self.message_blocks, self.n_blocks))

  def check_block(self, i):
    if not 0 <= int(i) < self.n_blocks:
      raise IndexOutOfRange('Block %s outside [0, %d).' % (i, self.n_blocks))

  def coordinate_points(self, j):
    r"""Points \( \sigma_i \lambda_{a_{i,j}, b_{a_{i,j}}} \); shape
    \( (M, \ell) \)."""
    if not 0 <= j < self.N:
      raise IndexOutOfRange('Coordinate %d outside [0, %d).' % (j, self.N))
    if j not in self._points:
      inner = self.inner
      nodes = self.outer.codewords[:, j]
      lam = inner.lam[nodes[:, None], inner.digits[:, nodes].T]
      self._points[j] = (self.sigma[:, None] * lam) % self.field.p
    return self._points[j]

  def coordinate_thick_columns(self, blocks, j):
    r"""The \( r\ell \times |E|\ell \) matrix \( U_{E,j} \)."""
    blocks = list(blocks)
    ell, r = self.ell, self.r
    pw = self.field.powers(self.coordinate_points(j)[blocks], r)
    out = self.field.zeros((r * ell, len(blocks) * ell))
    idx = np.arange(ell)
    for c in range(len(blocks)):
      for m in range(r):
        out[m * ell + idx, c * ell + idx] = pw[m, c]
    return out

  def parity_column(self, i):
    r"""Thick column of block `i`, shape \( (rN\ell, N\ell) \)."""
    self.check_block(i)
    ell, r, N = self.ell, self.r, self.N
    L = self.subpacketization
    out = self.field.zeros((r * L, L))
    idx = np.arange(ell)
    for j in range(N):
      pw = self.field.powers(self.coordinate_points(j)[i], r)
      for m in range(r):
        out[m * L + j * ell + idx, j * ell + idx] = pw[m]
    return out

  def parity_matrix(self):
    return np.concatenate([self.parity_column(i)
                           for i in range(self.n_blocks)], axis=1)

  def _syndrome(self, blocks, j, data):
    """Rows m of the coordinate-j parity sums over `blocks`; (r, ell)."""
    p = self.field.p
    pw = self.field.powers(self.coordinate_points(j)[list(blocks)], self.r)
    return ((pw * data[None]) % p).sum(axis=1) % p

  def _solver(self, blocks, j):
    return mat_inv(self.coordinate_thick_columns(blocks, j), self.field)

  def _encoder(self, j):
    """Inverse of the parity columns at coordinate j; one per coordinate."""
    if j not in self._encoders:
      self._encoders[j] = self._solver(self.parity, j)
    return self._encoders[j]

  def _as_word(self, word):
    word = self.field.array(word)
    shape = (self.n_blocks, self.N, self.ell)
    if word.size != np.prod(shape):
      raise DimensionMismatch('Expected a word of %d symbols, got %d.'
                              % (np.prod(shape), word.size))
    return word.reshape(shape)

  def encode(self, message):
    r"""Systematic encoding of \( (M - r) N \ell \) symbols.

    Returns
    -------
    np.ndarray: The codeword as an `(M, N, ell)` array.

    """

    message = self.field.array(message)
    expected = self.message_blocks * self.subpacketization
    if message.size != expected:
      raise DimensionMismatch('Message must hold %d symbols, got %d.'
                              % (expected, message.size))
    message = message.reshape(self.message_blocks, self.N, self.ell)

    parity = self.field.zeros((self.r, self.N, self.ell))
    for j in range(self.N):
      rhs = (-self._syndrome(self.systematic, j, message[:, j])).ravel()
      solved = mat_mul(self._encoder(j), rhs % self.field.p,
                       self.field)
      parity[:, j] = solved.reshape(self.r, self.ell)
    return np.concatenate([message, parity])

  def verify(self, word):
    """True when every parity equation holds."""
    word = self._as_word(word)
    blocks = range(self.n_blocks)
    return all(not self._syndrome(blocks, j, word[:, j]).any()
               for j in range(self.N))

  def decode_erasures(self, word, erased):
    r"""Rebuild up to \( r \) erased blocks, coordinate by coordinate.

    When fewer than \( r \) blocks are erased the last intact blocks are
    decoded too and must match the stored data.

    Raises
    ------
    TooManyErasures
        More than \( r \) blocks are erased.
    NotACodeword
        The intact blocks are inconsistent.

    """

    word = self._as_word(word)
    erased = sorted(set(int(i) for i in erased))
    for i in erased:
      self.check_block(i)
    if not erased:
      return word.copy()
    if len(erased) > self.r:
      raise TooManyErasures('%d erasures exceed r=%d.'
                            % (len(erased), self.r))

    intact = [i for i in range(self.n_blocks) if i not in erased]
    extra = intact[len(intact) - (self.r - len(erased)):] \
      if len(erased) < self.r else []
    unknown = erased + extra
    known = [i for i in intact if i not in extra]

    out = word.copy()
    for j in range(self.N):
      rhs = (-self._syndrome(known, j, word[known, j])).ravel()
      solved = mat_mul(self._solver(unknown, j), rhs % self.field.p,
                       self.field).reshape(self.r, self.ell)
      for c, i in enumerate(unknown):
        if i in extra and not np.array_equal(solved[c], word[i, j]):
          raise NotACodeword('Intact block %d disagrees with the decoded '
                             'word at coordinate %d.' % (i, j))
        out[i, j] = solved[c]
    return out

  def mds_check(self, mode='exhaustive', count=100, random_seed=0,
                subsets=None, subset_size=None, progress=False):
    r"""Rank sweep over block subsets and coordinates.

    Checks that \( U_{E,j} \) has full column rank for the chosen subsets
    \( E \) and every coordinate \( j \).

    Parameters
    ----------
    mode: str
        'exhaustive' for all subsets of size `subset_size`, or 'sample'
        for `count` random subsets.
    count: int
        Number of subsets drawn in 'sample' mode.
    random_seed: int
        Seed for 'sample' mode.
    subsets: list
        Explicit subsets to check; overrides `mode`.
    subset_size: int
        Defaults to \( r \).
    progress: bool
        Show a progress bar.

    Returns
    -------
    MdsReport

    """

    size = self.r if subset_size is None else int(subset_size)
    if not 1 <= size <= self.r:
      raise InvalidParameters('Subset size must lie in [1, r].')

    if subsets is not None:
      mode = 'explicit'
      chosen = [tuple(sorted(e)) for e in subsets]
    elif mode == 'exhaustive':
      chosen = list(combinations(range(self.n_blocks), size))
    elif mode == 'sample':
      rng = check_random_state(random_seed)
      chosen = [tuple(sorted(rng.choice(self.n_blocks, size, replace=False)
                             .tolist())) for _ in range(int(count))]
    else:
      raise InvalidParameters('Unknown mds_check mode %r.' % (mode,))

    report = MdsReport(mode=mode, subsets_checked=len(chosen),
                       ranks_checked=0)
    for subset in tqdm(chosen, disable=not progress):
      for j in range(self.N):
        rank = mat_rank(self.coordinate_thick_columns(subset, j), self.field)
        report.ranks_checked += 1
        if rank != len(subset) * self.ell:
          report.violations.append((subset, j))

    if report.violations:
      logger.warning('MDS check found %d rank deficient submatrices.',
                     len(report.violations))
    return report

  def summary(self):
    """Derived parameters of the code as a plain dict."""
    return {'p': self.field.p,
            'n': self.inner.n, 'k': self.inner.k, 't': self.inner.t,
            'r': self.r, 's': self.s, 'ell': self.ell,
            'q': self.outer.q, 'N': self.N, 'K': self.outer.K,
            'M': self.n_blocks, 'D': self.outer.D, 'delta': self.delta,
            'W': self.outer.W,
            'n_blocks': self.n_blocks, 'message_blocks': self.message_blocks,
            'helpers': self.helpers,
            'subpacketization': self.subpacketization,
            't_prime': self.t_prime, 't_prime_helpers': self.t_prime_helpers,
            'epsilon': self.epsilon, 'delta_min': self.delta_min,
            'budget': self.budget,
            'msr_optimum': self.subpacketization // self.s}

  def to_descriptor(self):
    """Everything needed to rebuild this exact code."""
    return {'version': 1,
            'inner': {'n': self.inner.n, 'k': self.inner.k,
                      't': self.inner.t},
            'outer': {'q': self.outer.q, 'N': self.N, 'K': self.outer.K},
            'epsilon': self.epsilon, 'p': self.field.p,
            'lambda': self.inner.lam.tolist(),
            'sigma': self.sigma.tolist()}


def _assemble(n, k, t, outer, epsilon, p):
  field = Field(p)
  inner = build_inner(n, k, t, field)
  sigma = select_scalars(field, inner, outer)
  with warnings.catch_warnings():
    warnings.simplefilter('ignore')
    code = EmsrCode(inner, outer, sigma, epsilon, check_scalars=False)
  return code


def build_emsr(n, k, t, q, N, K, epsilon=0.5, p=None, progress=False):
  """Build an eps-MSR code from an inner code and an RS outer code.

  Parameters
  ----------
  n, k, t: int
      Inner code parameters.
  q, N, K: int
      Reed-Solomon outer code parameters.
  epsilon: float
      Target bandwidth overhead.
  p: int
      Field modulus. If omitted, primes are tried upward from
      max(s*n + 1, M + 1) and the first one on which the greedy
      `select_scalars` succeeds is used. The greedy never backtracks, so
      a skipped prime may still admit some other valid assignment; the
      result is the first greedy success, not the smallest usable prime.
      For the (5, 2, 3) inner code over RS(5, 4, 2) this is 107.
  progress: bool
      Show a progress bar over candidate primes.

  Returns
  -------
  EmsrCode

  """

  outer = build_rs_outer(q, N, K)
  s = t - k + 1

  if p is not None:
    code = _assemble(n, k, t, outer, epsilon, p)
  else:
    candidate = next_prime(max(s * n + 1, outer.M + 1))
    bar = tqdm(desc='prime search', disable=not progress)
    code = None
    while candidate < MAX_MODULUS:
      try:
        code = _assemble(n, k, t, outer, epsilon, candidate)
        break
      except FieldTooSmall as err:
        logger.debug('GF(%d) rejected: %s', candidate, err)
        candidate = next_prime(candidate + 1)
        bar.update(1)
    bar.close()
    if code is None:
      raise FieldTooSmall('No prime below 2^31 admits valid scalars.')

  if code.delta < code.delta_min:
    warnings.warn('Outer relative distance %.3f is below 1 - eps/(r-1) = '
                  '%.3f; the per-helper budget is not guaranteed.'
                  % (code.delta, code.delta_min))
  logger.info('Built eps-MSR code over GF(%d) with %d blocks.',
              code.field.p, code.n_blocks)
  return code


def emsr_parity_column(code, i):
  return code.parity_column(i)


def emsr_encode(code, message):
  return code.encode(message)


def emsr_verify(code, word):
  return code.verify(word)


def emsr_decode_erasures(code, word, erased):
  return code.decode_erasures(word, erased)


def mds_check(code, mode='exhaustive', count=100, random_seed=0, **kwargs):
  return code.mds_check(mode, count, random_seed, **kwargs)
