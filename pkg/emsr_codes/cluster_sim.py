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

"""Simulated storage cluster for single failure repair experiments.

A `Cluster` keeps one shard per block of an eps-MSR codeword. `run_trials`
repeatedly fails one node, repairs it through the metered repair engine and
collects the bandwidth of every repair.

Example
-------
>>> from emsr_codes.cluster_sim import run_trials
>>> report = run_trials({'inner': {'n': 5, 'k': 2, 't': 3},
...                      'outer': {'q': 5, 'N': 4, 'K': 2},
...                      'epsilon': 0.5, 'trials': 25, 'seed': 0})
>>> report.summary['max_helper_symbols']
80

"""

import logging
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from .config import RunConfig, load_config
from .errors import AccessViolation, ClusterStateError, SimulationFailure
from .metrics import bandwidth_check, bandwidth_metric
from .models.emsr import build_emsr
from .models.emsr.repair import plan_repair, execute_repair
from .reporting import trials_frame, to_json
from .utils import get_method_kwargs, trial_seed

logger = logging.getLogger(__name__)


class _GuardedShards:
  """Read-only view of the shards that refuses to serve failed slots."""

  def __init__(self, cluster):
    self._cluster = cluster

  def __len__(self):
    return len(self._cluster.alive)

  def __getitem__(self, i):
    if not self._cluster.alive[i]:
      raise AccessViolation('Block %d is failed and cannot be read.' % i)
    return self._cluster.shards[i]


class Cluster:
  """M virtual storage nodes holding the blocks of one codeword.

  Parameters
  ----------
  code: EmsrCode
      The code the nodes store.

  """

  def __init__(self, code):
    self.code = code
    self.shards = code.field.zeros((code.n_blocks, code.N, code.ell))
    self.alive = np.ones(code.n_blocks, dtype=bool)
    self.log = []

  @property
  def failed(self):
    dead = np.flatnonzero(~self.alive)
    return int(dead[0]) if dead.size else None

  def load(self, message):
    """Encode `message` and store one block per node."""
    self.shards = self.code.encode(message)
    self.alive[:] = True
    self.log.append(('load', None))

  def snapshot(self):
    return self.shards.copy()

  def fail(self, i):
    self.code.check_block(i)
    if self.failed is not None:
      raise ClusterStateError('Node %d is already failed.' % self.failed)
    self.shards[i] = 0
    self.alive[i] = False
    self.log.append(('fail', int(i)))

  def repair(self, helpers=None, policy='ascending', random_seed=None):
    """Rebuild the failed node in place and return its `BandwidthReport`."""

    failed = self.failed
    if failed is None:
      raise ClusterStateError('No node is failed.')
    plan = plan_repair(self.code, failed, helpers=helpers, policy=policy,
                       random_seed=random_seed)
    block, report = execute_repair(self.code, _GuardedShards(self), plan)
    self.shards[failed] = block
    self.alive[failed] = True
    self.log.append(('repair', failed))
    return report


@dataclass
class TrialReport:
  """Outcome of one fail and repair cycle."""

  trial: int
  failed: int
  helpers: int
  compulsory: int
  per_helper: dict
  max_helper: int
  budget: float
  passed: bool
  correct: bool
  wall_time: float

  def to_row(self, include_wall_time=False):
    row = {'trial': self.trial, 'failed': self.failed,
           'helpers': self.helpers, 'compulsory': self.compulsory,
           'max_helper_symbols': self.max_helper,
           'budget_symbols': self.budget, 'pass': self.passed}
    if include_wall_time:
      row['wall_time'] = self.wall_time
    return row


@dataclass
class SimulationReport:
  """All trials of a run and their aggregate."""

  trials: list
  code_summary: dict
  reports: list

  def to_frame(self, include_wall_time=False):
    return trials_frame(self.trials, include_wall_time)

  @property
  def summary(self):
    histogram = Counter(t.compulsory for t in self.trials)
    return {'trials': len(self.trials),
            'passed': sum(t.passed for t in self.trials),
            'all_pass': all(t.passed for t in self.trials),
            'all_correct': all(t.correct for t in self.trials),
            'max_helper_symbols': bandwidth_metric('max_helper', self.reports),
            'mean_helper_symbols': bandwidth_metric('mean_helper',
                                                    self.reports),
            'compulsory_histogram': {str(k): histogram[k]
                                     for k in sorted(histogram)},
            'code': self.code_summary}

  def to_csv(self, path):
    self.to_frame().to_csv(path, index=False)

  def to_json(self, path=None):
    return to_json(self.summary, path)


def _run_trial(code, config, trial):

  rng = np.random.default_rng(trial_seed(config.seed, trial))
  if config.failure_policy == 'round_robin':
    failed = trial % code.n_blocks
  else:
    failed = int(rng.integers(code.n_blocks))

  cluster = Cluster(code)
  cluster.load(code.field.random(code.message_blocks * code.subpacketization,
                                 rng))
  original = cluster.shards[failed].copy()
  cluster.fail(failed)

  start = time.perf_counter()
  report = cluster.repair(policy=config.helper_policy,
                          random_seed=int(rng.integers(2**31)))
  wall_time = time.perf_counter() - start

  correct = bool(np.array_equal(cluster.shards[failed], original))
  if not correct:
    raise SimulationFailure('Repaired block %d differs from the original.'
                            % failed, trial=trial)

  check = bandwidth_check(report, code)
  return TrialReport(trial=trial, failed=failed, helpers=report.helpers,
                     compulsory=report.compulsory,
                     per_helper=dict(report.per_helper),
                     max_helper=report.max_helper, budget=report.budget,
                     passed=check.passed, correct=correct,
                     wall_time=wall_time), report


def run_trials(config, n_jobs=None, progress=False):
  """Run the fail, repair and verify cycle described by `config`.

  Parameters
  ----------
  config: RunConfig, dict or str
      A `RunConfig`, a config document or the path to a JSON config.
  n_jobs: int
      Worker threads. Defaults to `config.n_jobs`.
  progress: bool
      Show a progress bar.

  Returns
  -------
  SimulationReport

  """

  if not isinstance(config, RunConfig):
    config = load_config(config)
  n_jobs = config.n_jobs if n_jobs is None else int(n_jobs)

  code = build_emsr(**get_method_kwargs(build_emsr, config.code_params))
  for j in range(code.N):
    code.coordinate_points(j)

  def task(trial):
    return _run_trial(code, config, trial)

  trial_ids = range(config.trials)
  if n_jobs > 1:
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
      outcomes = list(tqdm(pool.map(task, trial_ids), total=config.trials,
                           disable=not progress))
  else:
    outcomes = [task(trial) for trial in tqdm(trial_ids,
                                               disable=not progress)]

  outcomes.sort(key=lambda o: o[0].trial)
  report = SimulationReport(trials=[o[0] for o in outcomes],
                            code_summary=code.summary(),
                            reports=[o[1] for o in outcomes])
  logger.info('Ran %d trials: %d within budget.', len(report.trials),
              report.summary['passed'])

  if config.output.get('csv'):
    report.to_csv(config.output['csv'])
  if config.output.get('json'):
    report.to_json(config.output['json'])
  return report
