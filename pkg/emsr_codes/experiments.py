"""Parameter sweeps over eps-MSR codes and their outer codes."""

import logging

import numpy as np
import pandas as pd
from sklearn.model_selection import ParameterGrid
from tqdm import tqdm

from .errors import EmsrError, BoundInapplicable
from .metrics import bandwidth_check, bandwidth_metric
from .models.emsr import build_emsr
from .models.emsr.repair import plan_repair, execute_repair
from .models.outer import build_rs_outer, fw_lower_bound
from .utils import get_method_kwargs

logger = logging.getLogger(__name__)


class RepairBandwidthSweep:
  """Repair every block of every code in a parameter grid.

  Bandwidth does not depend on the stored data, so each code repairs its
  zero codeword once per block.

  Parameters
  ----------
  param_grid : dict
      Lists of values for the keyword arguments of `build_emsr`, e.g.
      `{'n': [5], 'k': [2], 't': [3], 'q': [5], 'N': [4], 'K': [2],
      'epsilon': [0.25, 0.5]}`.
  policy : str
      Free helper policy passed to `plan_repair`.
  random_seed : int
      Seed for the 'random' policy.

  """

  def __init__(self, param_grid, policy='ascending', random_seed=0):

    self.param_grid = list(ParameterGrid(param_grid))
    self.policy = policy
    self.random_seed = random_seed

  def run(self, progress=False):
    """Run the sweep and return one row per grid point."""

    rows = []
    for params in tqdm(self.param_grid, disable=not progress):
      try:
        code = build_emsr(**get_method_kwargs(build_emsr, params))
      except EmsrError as err:
        logger.warning('Skipping %s: %s', params, err)
        continue

      word = code.field.zeros((code.n_blocks, code.N, code.ell))
      reports, passed = [], True
      for failed in range(code.n_blocks):
        plan = plan_repair(code, failed, policy=self.policy,
                           random_seed=self.random_seed + failed)
        _, report = execute_repair(code, word, plan, verify=False)
        reports.append(report)
        passed &= bandwidth_check(report, code).passed

      summary = code.summary()
      rows.append(dict(params, p=summary['p'],
                       n_blocks=summary['n_blocks'],
                       helpers=summary['helpers'],
                       t_prime_helpers=summary['t_prime_helpers'],
                       max_helper_symbols=bandwidth_metric('max_helper',
                                                           reports),
                       mean_helper_symbols=bandwidth_metric('mean_helper',
                                                            reports),
                       msr_optimum=summary['msr_optimum'],
                       budget_symbols=summary['budget'],
                       all_pass=passed))

    self.results = pd.DataFrame(rows)
    return self.results


def full_weight_sweep(param_grid, progress=False):
  """Compare the full-weight lower bound with exact counts.

  Parameters
  ----------
  param_grid : dict
      Lists of values for `q`, `N`, `K` and `g`. Grid points that do not
      describe a Reed-Solomon code are skipped.

  Returns
  -------
  pandas.DataFrame: Columns q, N, K, g, W, bound and holds. `bound` is NaN
  where the bound does not apply.

  """

  rows = []
  for params in tqdm(list(ParameterGrid(param_grid)), disable=not progress):
    q, N, K, g = params['q'], params['N'], params['K'], params['g']
    if N > q or not 1 <= K < N or not 0 <= g <= K:
      continue
    W = build_rs_outer(q, N, K).W
    try:
      bound = fw_lower_bound(N, K, g, q)
    except BoundInapplicable:
      bound = np.nan
    rows.append({'q': q, 'N': N, 'K': K, 'g': g, 'W': W, 'bound': bound,
                 'holds': bool(np.isnan(bound) or bound <= W)})

  return pd.DataFrame(rows, columns=['q', 'N', 'K', 'g', 'W', 'bound',
                                     'holds'])
