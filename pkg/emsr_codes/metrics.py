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

"""Tools to meter and assess the repair bandwidth of eps-MSR codes."""

import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd


@dataclass
class BandwidthReport:
  r"""Symbols downloaded from each helper during one repair.

  Parameters
  ----------
  failed: int
      The repaired block.
  per_helper: dict
      Helper block index to number of symbols sent.
  agreements: dict
      Helper block index to the number \( w_i \) of outer coordinates on
      which it agrees with the failed block.
  budget: float
      Per-helper limit \( (1 + \epsilon) N \ell / s \).
  epsilon: float
  coordinates: int
      Outer code length \( N \).
  ell: int
      Inner sub-packetization \( \ell \).
  s: int
      Inner radix \( s \).

  """

  failed: int
  per_helper: dict
  agreements: dict
  budget: float
  epsilon: float
  coordinates: int
  ell: int
  s: int

  @property
  def helpers(self):
    return len(self.per_helper)

  @property
  def total(self):
    return int(sum(self.per_helper.values()))

  @property
  def max_helper(self):
    return max(self.per_helper.values()) if self.per_helper else 0

  @property
  def compulsory(self):
    """Number of helpers agreeing with the failed block somewhere."""
    return sum(1 for w in self.agreements.values() if w > 0)

  def expected(self, helper):
    r"""Download \( w \ell + (N - w) \ell / s \) predicted for a helper."""
    w = self.agreements[helper]
    return w * self.ell + (self.coordinates - w) * self.ell // self.s

  def within_budget(self):
    return {i: count <= self.budget for i, count in self.per_helper.items()}

  def to_frame(self):
    """One row per helper, ordered by block index."""
    helpers = sorted(self.per_helper)
    return pd.DataFrame({'helper': helpers,
                         'agreements': [self.agreements[i] for i in helpers],
                         'symbols': [self.per_helper[i] for i in helpers],
                         'budget': self.budget,
                         'within_budget': [self.per_helper[i] <= self.budget
                                           for i in helpers]})

  def to_dict(self):
    helpers = sorted(self.per_helper)
    return {'failed': self.failed, 'helpers': self.helpers,
            'compulsory': self.compulsory, 'total_symbols': self.total,
            'max_helper_symbols': self.max_helper,
            'budget_symbols': self.budget, 'epsilon': self.epsilon,
            'per_helper': {str(i): int(self.per_helper[i]) for i in helpers},
            'agreements': {str(i): int(self.agreements[i]) for i in helpers}}


@dataclass(frozen=True)
class BandwidthCheck:
  """Verdict of `bandwidth_check`."""

  passed: bool
  per_helper: dict
  budget: float
  max_helper: int
  hypothesis_holds: bool
  vacuous: bool
  delta: float
  delta_min: float

  def to_dict(self):
    return {'pass': self.passed, 'budget_symbols': self.budget,
            'max_helper_symbols': self.max_helper,
            'hypothesis_holds': self.hypothesis_holds,
            'vacuous_epsilon': self.vacuous, 'delta': self.delta,
            'delta_min': self.delta_min,
            'per_helper': {str(i): ok
                           for i, ok in sorted(self.per_helper.items())}}


def bandwidth_check(report, code):
  r"""Check a repair against the per-helper budget.

  A repair passes when every helper sent at most
  \( (1 + \epsilon) \mathcal{L} / s \) symbols. The relative distance
  hypothesis \( \delta \ge 1 - \epsilon / (r - 1) \) is reported separately
  and does not change the verdict.

  Parameters
  ----------
  report: BandwidthReport
      As returned by `execute_repair`.
  code: EmsrCode
      The code that was repaired.

  Returns
  -------
  BandwidthCheck

  """

  per_helper = report.within_budget()
  delta, delta_min = code.delta, code.delta_min
  hypothesis = bool(delta >= delta_min)
  vacuous = bool(code.epsilon >= code.r - 1)

  if not hypothesis:
    warnings.warn('Relative distance %.3f is below %.3f; the per-helper '
                  'budget is not guaranteed.' % (delta, delta_min))
  if vacuous:
    warnings.warn('eps=%.3f >= r-1 makes the distance hypothesis vacuous.'
                  % code.epsilon)

  return BandwidthCheck(passed=all(per_helper.values()),
                        per_helper=per_helper, budget=report.budget,
                        max_helper=report.max_helper,
                        hypothesis_holds=hypothesis, vacuous=vacuous,
                        delta=delta, delta_min=delta_min)


def bandwidth_metric(metric, reports):
  """Aggregate a list of `BandwidthReport` objects.

  Parameters
  ----------
  metric: str
      One of 'max_helper', 'mean_helper', 'total' or 'mean_total'.
  reports: list
      Reports to aggregate.

  """

  if not reports:
    return 0
  if metric == 'max_helper':
    return max(r.max_helper for r in reports)
  elif metric == 'mean_helper':
    counts = [c for r in reports for c in r.per_helper.values()]
    return float(np.mean(counts)) if counts else 0.0
  elif metric == 'total':
    return sum(r.total for r in reports)
  elif metric == 'mean_total':
    return float(np.mean([r.total for r in reports]))
  else:
    raise NotImplementedError()
