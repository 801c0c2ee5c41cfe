import json

import numpy as np
import pandas as pd

TRIAL_COLUMNS = ['trial', 'failed', 'helpers', 'compulsory',
                 'max_helper_symbols', 'budget_symbols', 'pass']


def _plain(value):
  """Convert numpy scalars and containers into JSON-ready Python objects."""
  if isinstance(value, dict):
    return {str(k): _plain(v) for k, v in value.items()}
  if isinstance(value, (list, tuple)):
    return [_plain(v) for v in value]
  if isinstance(value, np.generic):
    return value.item()
  if isinstance(value, np.ndarray):
    return value.tolist()
  return value


def to_json(payload, path=None):
  """Serialise `payload` with sorted keys; write it when `path` is given."""

  text = json.dumps(_plain(payload), indent=2, sort_keys=True)
  if path is not None:
    with open(path, 'w') as f:
      f.write(text + '\n')
  return text


def trials_frame(trials, include_wall_time=False):
  """One row per trial, ordered by trial id.

  Parameters
  ----------
  trials: list
      `TrialReport` objects.
  include_wall_time: bool
      Add the `wall_time` column, which differs between identical runs.

  """

  rows = [t.to_row(include_wall_time) for t in sorted(trials,
                                                      key=lambda t: t.trial)]
  columns = TRIAL_COLUMNS + (['wall_time'] if include_wall_time else [])
  return pd.DataFrame(rows, columns=columns)
