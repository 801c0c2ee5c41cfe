r"""Single block repair for \( \epsilon \)-MSR codes.

Repair runs independently on every outer coordinate \( j \). With
\( a = a_{f,j} \) the inner node of the failed block \( f \) there, the
other blocks split into

* \( Q_j \): blocks on the same inner node \( a \). Their whole sub-block
  is downloaded and they must always be contacted.
* \( V_j \): blocks on another inner node \( \gamma \). For every group of
  \( s \) positions that differ only in digit \( a \) they send the single
  sum \( \mu \) of their symbols there.

The group sums of the \( r - s \) blocks that are not contacted are
recovered through the interpolation matrix \( P \), after which the
\( s \) lost symbols of each group follow from a Vandermonde system.
"""

import logging
from dataclasses import dataclass, field as dataclass_field

import numpy as np
from sklearn.utils import check_random_state

from emsr_codes.errors import (MissingCompulsory, BadPlanSize, BadHelperSet,
                               NotACodeword)
from emsr_codes.metrics import BandwidthReport
from emsr_codes.models.interpolation import (interpolation_coefficients,
                                             recover_group_symbols)
from emsr_codes.models.inner_msr.inner_utilities import (group_bases,
                                                         group_positions)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompulsorySets:
  """Blocks that every repair of `failed` must contact."""

  failed: int
  per_coordinate: tuple
  union: frozenset
  full_weight: int
  n_blocks: int

  @property
  def counts(self):
    return tuple(len(q) for q in self.per_coordinate)

  @property
  def t_prime_helpers(self):
    return self.n_blocks - 1 - self.full_weight

  @property
  def t_prime(self):
    return self.n_blocks - self.full_weight


def compulsory_sets(code, failed):
  r"""Per-coordinate sets \( Q_j \) and their union for a failed block.

  Parameters
  ----------
  code: EmsrCode
  failed: int
      Index of the failed block.

  Returns
  -------
  CompulsorySets

  """

  code.check_block(failed)
  words = code.outer.codewords
  per_coordinate = []
  for j in range(code.N):
    same = np.flatnonzero(words[:, j] == words[failed, j])
    per_coordinate.append(frozenset(int(i) for i in same if i != failed))

  union = frozenset().union(*per_coordinate)
  sets = CompulsorySets(failed=int(failed),
                        per_coordinate=tuple(per_coordinate),
                        union=union, full_weight=code.outer.W,
                        n_blocks=code.n_blocks)
  assert len(union) == sets.t_prime_helpers, \
    "Compulsory union %d differs from M-1-W." % len(union)
  return sets


@dataclass(frozen=True)
class RepairPlan:
  """Which blocks a repair contacts, per coordinate and overall."""

  failed: int
  compulsory: tuple
  free: tuple
  contacted: tuple
  not_contacted: tuple

  def to_dict(self):
    return {'failed': self.failed,
            'compulsory': [sorted(q) for q in self.compulsory],
            'contacted': list(self.contacted),
            'not_contacted': list(self.not_contacted)}


def plan_repair(code, failed, helpers=None, policy='ascending',
                random_seed=None):
  r"""Choose the \( \mathcal{T} \) helpers of a repair.

  Parameters
  ----------
  code: EmsrCode
  failed: int
      Index of the failed block.
  helpers: list
      An explicit helper set. Must contain every compulsory block and have
      exactly \( \mathcal{T} \) members.
  policy: str
      How free slots are filled when `helpers` is None: 'ascending' takes
      the lowest block indices, 'random' draws them with `random_seed`.
  random_seed: int
      Seed for the 'random' policy.

  Returns
  -------
  RepairPlan

  """

  sets = compulsory_sets(code, failed)
  others = [i for i in range(code.n_blocks) if i != failed]

  if helpers is not None:
    contacted = sorted(set(int(h) for h in helpers))
    if failed in contacted or any(not 0 <= h < code.n_blocks
                                  for h in contacted):
      raise BadHelperSet('Helpers %s must be blocks other than %d.'
                         % (contacted, failed))
    missing = sorted(sets.union - set(contacted))
    if missing:
      raise MissingCompulsory('Compulsory blocks %s are not contacted.'
                              % missing)
    if len(contacted) != code.helpers:
      raise BadPlanSize('Plan contacts %d blocks, expected %d.'
                        % (len(contacted), code.helpers))
  else:
    free = [i for i in others if i not in sets.union]
    slots = code.helpers - len(sets.union)
    if policy == 'ascending':
      chosen = free[:slots]
    elif policy == 'random':
      rng = check_random_state(random_seed)
      chosen = rng.choice(free, slots, replace=False).tolist()
    else:
      raise BadHelperSet('Unknown helper policy %r.' % (policy,))
    contacted = sorted(sets.union | set(int(i) for i in chosen))

  not_contacted = tuple(i for i in others if i not in contacted)
  assert len(not_contacted) == code.r - code.s, \
    "Expected r-s non-contacted blocks, got %d." % len(not_contacted)

  free_sets = tuple(frozenset(others) - q for q in sets.per_coordinate)
  return RepairPlan(failed=int(failed), compulsory=sets.per_coordinate,
                    free=free_sets, contacted=tuple(contacted),
                    not_contacted=not_contacted)


def interpolation_matrix(code, failed, coordinate):
  r"""Matrix \( P \) for the failed block at one coordinate.

  Row \( i \) holds the coefficients of
  \( x^i \prod_{u} (x - \sigma_f \lambda_{a,u}) \), \( a = a_{f,j} \).
  """

  code.check_block(failed)
  a = code.outer.codewords[failed, coordinate]
  roots = (code.sigma[failed] * code.inner.lam[a]) % code.field.p
  return interpolation_coefficients(roots, code.r, code.field)


@dataclass
class RepairWorkspace:
  """Intermediate values of a repair, keyed by coordinate then block."""

  failed: int
  downloads: dict = dataclass_field(default_factory=dict)
  mu: dict = dataclass_field(default_factory=dict)
  recovered_mu: dict = dataclass_field(default_factory=dict)
  y: dict = dataclass_field(default_factory=dict)


def _repair_coordinate(code, read, plan, j, workspace):
  """Rebuild sub-block j of the failed block; returns it and per-helper use."""

  field, p, s = code.field, code.field.p, code.s
  inner = code.inner
  failed = plan.failed
  nodes = code.outer.codewords[:, j]
  a = nodes[failed]

  bases = group_bases(s, inner.n, a)
  positions = group_positions(bases, s, a)
  points = code.coordinate_points(j)
  lost_points = (code.sigma[failed] * inner.lam[a]) % p

  compulsory = plan.compulsory[j]
  downloads, mu, used = {}, {}, {}
  known = field.zeros((code.r, len(bases)))
  for i in plan.contacted:
    sub = field.array(read(i)[j])
    if i in compulsory:
      downloads[i] = sub
      pw = field.powers((code.sigma[i] * inner.lam[a]) % p, code.r)
      known = (known + (pw[:, :, None] * sub[positions][None]
                        % p).sum(axis=1)) % p
      used[i] = code.ell
    else:
      mu[i] = sub[positions].sum(axis=0) % p
      used[i] = len(bases)

  helpers = [i for i in plan.contacted if i not in compulsory]
  missing = list(plan.not_contacted)
  assert not set(missing) & compulsory, "A compulsory block is not contacted."

  lost, recovered, y = recover_group_symbols(
      field, code.r, lost_points, known,
      contacted_points=points[helpers][:, bases],
      contacted_mu=np.stack([mu[i] for i in helpers]) if helpers
      else field.zeros((0, len(bases))),
      missing_points=points[missing][:, bases])

  sub_block = field.zeros(code.ell)
  sub_block[positions] = lost

  if workspace is not None:
    workspace.downloads[j] = downloads
    workspace.mu[j] = mu
    workspace.recovered_mu[j] = dict(zip(missing, recovered))
    workspace.y[j] = y
  return sub_block, used


def execute_repair(code, word, plan, verify=True, return_workspace=False):
  r"""Rebuild the failed block of `word` following `plan`.

  Parameters
  ----------
  code: EmsrCode
  word: sequence
      Indexable by block; `word[i]` is an \( (N, \ell) \) array. The failed
      block is never read.
  plan: RepairPlan
  verify: bool
      Check the rebuilt word against every parity equation. This reads all
      surviving blocks.
  return_workspace: bool
      Also return the `RepairWorkspace`.

  Returns
  -------
  tuple: The rebuilt \( (N, \ell) \) block and a `BandwidthReport`, plus the
  workspace when requested.

  """

  read = word.__getitem__
  workspace = RepairWorkspace(plan.failed) if return_workspace else None

  block = code.field.zeros((code.N, code.ell))
  per_helper = {i: 0 for i in plan.contacted}
  for j in range(code.N):
    block[j], used = _repair_coordinate(code, read, plan, j, workspace)
    for i, count in used.items():
      per_helper[i] += count

  if verify:
    full = np.stack([block if i == plan.failed else code.field.array(read(i))
                     for i in range(code.n_blocks)])
    if not code.verify(full):
      raise NotACodeword('Surviving blocks are inconsistent; block %d cannot '
                         'be rebuilt.' % plan.failed)

  agreements = code.outer.agreements(plan.failed)
  report = BandwidthReport(
      failed=plan.failed, per_helper=per_helper,
      agreements={i: int(agreements[i]) for i in plan.contacted},
      budget=code.budget, epsilon=code.epsilon,
      coordinates=code.N, ell=code.ell, s=code.s)
  logger.debug('Repaired block %d: max helper download %d.', plan.failed,
               report.max_helper)

  if return_workspace:
    return block, report, workspace
  return block, report
