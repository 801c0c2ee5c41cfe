"""JSON run configuration for cluster simulations."""

import json
from dataclasses import dataclass, field

from jsonschema import Draft202012Validator

from .errors import BadConfig

RUN_CONFIG_SCHEMA = {
    '$schema': 'https://json-schema.org/draft/2020-12/schema',
    'type': 'object',
    'required': ['inner', 'outer'],
    'additionalProperties': False,
    'properties': {
        'inner': {
            'type': 'object',
            'required': ['n', 'k', 't'],
            'additionalProperties': False,
            'properties': {'n': {'type': 'integer', 'minimum': 3},
                           'k': {'type': 'integer', 'minimum': 1},
                           't': {'type': 'integer', 'minimum': 1}},
        },
        'outer': {
            'type': 'object',
            'required': ['q', 'N', 'K'],
            'additionalProperties': False,
            'properties': {'q': {'type': 'integer', 'minimum': 2},
                           'N': {'type': 'integer', 'minimum': 1},
                           'K': {'type': 'integer', 'minimum': 1}},
        },
        'epsilon': {'type': 'number', 'minimum': 0},
        'p': {'type': 'integer', 'minimum': 2},
        'trials': {'type': 'integer', 'minimum': 0},
        'seed': {'type': 'integer', 'minimum': 0},
        'n_jobs': {'type': 'integer', 'minimum': 1},
        'policies': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {
                'failure': {'enum': ['round_robin', 'random']},
                'helpers': {'enum': ['ascending', 'random']},
            },
        },
        'output': {
            'type': 'object',
            'additionalProperties': False,
            'properties': {'csv': {'type': 'string'},
                           'json': {'type': 'string'}},
        },
    },
}


@dataclass(frozen=True)
class RunConfig:
  """A validated simulation configuration."""

  n: int
  k: int
  t: int
  q: int
  N: int
  K: int
  epsilon: float = 0.5
  p: int = None
  trials: int = 0
  seed: int = 0
  n_jobs: int = 1
  failure_policy: str = 'round_robin'
  helper_policy: str = 'ascending'
  output: dict = field(default_factory=dict)

  @property
  def code_params(self):
    return {'n': self.n, 'k': self.k, 't': self.t, 'q': self.q,
            'N': self.N, 'K': self.K, 'epsilon': self.epsilon, 'p': self.p}


def validate_config(document):
  """Raise `BadConfig` naming the first schema violation."""
  errors = sorted(Draft202012Validator(RUN_CONFIG_SCHEMA).iter_errors(document),
                  key=lambda e: list(e.absolute_path))
  if errors:
    error = errors[0]
    path = '/'.join(str(p) for p in error.absolute_path) or '<root>'
    raise BadConfig('Invalid config at %s: %s' % (path, error.message))


def load_config(source):
  """Build a `RunConfig` from a dict or a path to a JSON file."""

  if isinstance(source, dict):
    document = source
  else:
    try:
      with open(source) as f:
        document = json.load(f)
    except (OSError, json.JSONDecodeError) as err:
      raise BadConfig('Cannot read config %s: %s' % (source, err)) from err

  validate_config(document)
  policies = document.get('policies', {})
  return RunConfig(n=document['inner']['n'], k=document['inner']['k'],
                   t=document['inner']['t'], q=document['outer']['q'],
                   N=document['outer']['N'], K=document['outer']['K'],
                   epsilon=document.get('epsilon', 0.5),
                   p=document.get('p'),
                   trials=document.get('trials', 0),
                   seed=document.get('seed', 0),
                   n_jobs=document.get('n_jobs', 1),
                   failure_policy=policies.get('failure', 'round_robin'),
                   helper_policy=policies.get('helpers', 'ascending'),
                   output=dict(document.get('output', {})))
