import inspect

import numpy as np


def get_method_kwargs(method, kwargs):
  """Keep only the entries of `kwargs` that `method` accepts."""

  assert isinstance(kwargs, dict)

  params = inspect.signature(method).parameters.items()
  params = set([param[0] for param in params]) - set(['self'])

  method_params = params&set(kwargs.keys())
  method_kwargs = {k: kwargs[k] for k in method_params}

  return method_kwargs


def trial_seed(seed, trial):
  """Independent, reproducible seed for one trial of a seeded run."""
  return int(np.random.SeedSequence([int(seed), int(trial)])
             .generate_state(1)[0])
