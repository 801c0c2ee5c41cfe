r"""Counting bounds and parameter planning for outer codes.

`fw_lower_bound` is an inclusion-exclusion lower bound on the number of
full-weight codewords of an \( [N, K] \) algebraic geometry code of genus
\( g \). `ag_plan` turns a target \( (r, \epsilon, u) \) into the alphabet
size and relative distance the composed code needs.
"""

import math
import numbers
from dataclasses import dataclass, asdict

from emsr_codes.gf import is_prime
from emsr_codes.errors import BoundInapplicable, InvalidU, InvalidParameters


def fw_lower_bound(N, K, g, q):
  r"""Lower bound on the number of full-weight codewords.

  Shortening the code on any \( p \le K - g \) coordinates leaves
  \( q^{K-p} \) codewords, which gives

  \[ W \ge \sum_{p=0}^{K-g} (-1)^p \binom{N}{p} q^{K-p}
         - \binom{N}{K-g+1} q^{g}. \]

  Parameters
  ----------
  N: int
      Code length.
  K: int
      Code dimension.
  g: int
      Genus of the underlying curve, \( 0 \le g \le K \).
  q: int
      Alphabet size.

  Returns
  -------
  int: The bound. It may be negative when it carries no information.

  Raises
  ------
  BoundInapplicable
      If \( q (K - g + 2) \le N - (K - g + 1) \).

  """

  N, K, g, q = int(N), int(K), int(g), int(q)
  if not 0 <= g <= K:
    raise InvalidParameters('Need 0 <= g <= K, got g=%d, K=%d.' % (g, K))
  if N < 1 or q < 2:
    raise InvalidParameters('Need N >= 1 and q >= 2.')

  top = K - g
  if q * (top + 2) <= N - (top + 1):
    raise BoundInapplicable('q=%d does not exceed (N - (K-g+1))/(K-g+2) = '
                            '%d/%d.' % (q, N - (top + 1), top + 2))

  total = sum((-1)**p * math.comb(N, p) * q**(K - p) for p in range(top + 1))
  return total - math.comb(N, top + 1) * q**g


def is_prime_power(m):
  """True when `m` is a power of a single prime."""
  m = int(m)
  if m < 2:
    return False
  f = 2
  while f * f <= m and m % f:
    f += 1
  if m % f:
    return is_prime(m)
  while m % f == 0:
    m //= f
  return m == 1


def smallest_square_prime_power(threshold):
  r"""Smallest \( m^2 > \) `threshold` with \( m \) a prime power."""
  m = max(2, math.isqrt(int(math.floor(threshold))))
  while not (m * m > threshold and is_prime_power(m)):
    m += 1
  return m * m


@dataclass(frozen=True)
class PlanParams:
  r"""Parameters of an algebraic geometry outer code for given
  \( (r, \epsilon, u) \).

  `q_min` is a square prime power above `threshold`, `delta_min` the
  relative distance needed for the per-helper budget and `genus_ratio`
  the asymptotic \( g / N \).
  """

  r: int
  epsilon: float
  u: int
  threshold: float
  q_min: int
  delta_min: float
  genus_ratio: float
  k_rule: str = 'K = u*g'
  full_weight_exponent: float = 0.0
  subpacketization_scaling: str = 'L = O(log N_blocks)'
  field_size_scaling: str = 'O(N_blocks)'

  def helper_bound(self, n_blocks):
    r"""Predicted bound \( \mathcal{N} - \mathcal{N}^{(u-1)/u} \) on
    compulsory helpers."""
    return n_blocks - n_blocks**self.full_weight_exponent

  def instantiate(self, g, s):
    """Concrete sizes for a curve of genus `g` and inner radix `s`.

    Exponentially large quantities are returned as exact integers or as
    base 10 logarithms.
    """

    g, s = int(g), int(s)
    if g < 1 or s < 2:
      raise InvalidParameters('Need g >= 1 and s >= 2.')

    q = self.q_min
    root = math.isqrt(q)
    length = g * (root - 1)
    K = self.u * g
    degree = K + g - 1
    distance = length - degree
    n_blocks = q**K
    full_weight = q**((self.u - 1) * g)

    return {'g': g, 'q': q, 'N': length, 'K': K, 'deg_G': degree,
            'D_min': distance, 'delta': distance / length,
            'delta_ok': distance / length >= self.delta_min,
            'n_blocks': n_blocks, 'full_weight_min': full_weight,
            't_prime_max': n_blocks - full_weight,
            'log10_subpacketization': math.log10(length) + q * math.log10(s),
            'field_size_min': n_blocks * q * self.r + 1}

  def to_dict(self):
    return asdict(self)


def ag_plan(r, epsilon, u):
  r"""Plan an algebraic geometry outer code.

  Parameters
  ----------
  r: int
      Number of parity blocks of the inner code, at least 2.
  epsilon: float
      Target bandwidth overhead, positive.
  u: int
      Rate parameter; the dimension is \( K = u g \). Must exceed 3.

  Returns
  -------
  PlanParams

  """

  if isinstance(u, bool) or not isinstance(u, numbers.Integral) or u <= 3:
    raise InvalidU('u must be an integer greater than 3, got %r.' % (u,))
  if epsilon <= 0:
    raise InvalidParameters('epsilon must be positive, got %r.' % (epsilon,))
  if int(r) < 2:
    raise InvalidParameters('r must be at least 2, got %r.' % (r,))

  r, u = int(r), int(u)
  threshold = 2 * (u + 1)**2 * r**2 / epsilon**2
  q_min = smallest_square_prime_power(threshold)

  return PlanParams(r=r, epsilon=float(epsilon), u=u, threshold=threshold,
                    q_min=q_min, delta_min=1 - epsilon / (r - 1),
                    genus_ratio=1 / (math.isqrt(q_min) - 1),
                    full_weight_exponent=(u - 1) / u)
