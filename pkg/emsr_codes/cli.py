"""Command line interface.

Every subcommand prints a JSON document on stdout. Failures print the error
as JSON on stderr and exit with status 1.

Example
-------
  python -m emsr_codes --workdir store build --n 5 --k 2 --t 3 --q 5 --N 4 --K 2
  python -m emsr_codes --workdir store encode photo.jpg
  python -m emsr_codes --workdir store fail 1
  python -m emsr_codes --workdir store repair 1
  python -m emsr_codes --workdir store decode --output photo.jpg

"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from .errors import (EmsrError, ClusterStateError, CorruptShard,
                     CorruptDescriptor, InputUnavailable,
                     InvalidParameters, TooManyErasures)
from .gf import Field
from .metrics import bandwidth_check
from .models.emsr import EmsrCode, build_emsr
from .models.emsr.repair import plan_repair, execute_repair
from .models.inner_msr import build_inner
from .models.outer import build_rs_outer, fw_lower_bound, ag_plan
from .cluster_sim import run_trials
from .reporting import to_json
from .shards import (ShardHeader, shard_path, write_shard, read_shard,
                     pack_bytes, unpack_symbols)

logger = logging.getLogger(__name__)

DESCRIPTOR = 'code.json'


def save_code(code, workdir):
  os.makedirs(workdir, exist_ok=True)
  to_json(code.to_descriptor(), os.path.join(workdir, DESCRIPTOR))


def load_code(workdir):
  """Rebuild the code stored in `workdir` without searching for scalars."""

  path = os.path.join(workdir, DESCRIPTOR)
  if not os.path.exists(path):
    raise ClusterStateError('No code descriptor in %s; run `build` first.'
                            % workdir)
  try:
    with open(path) as f:
      desc = json.load(f)
    n, k, t = desc['inner']['n'], desc['inner']['k'], desc['inner']['t']
    q, N, K = desc['outer']['q'], desc['outer']['N'], desc['outer']['K']
    p, lam = desc['p'], desc['lambda']
    sigma, epsilon = desc['sigma'], desc['epsilon']
  except (OSError, ValueError) as err:
    raise CorruptDescriptor('Cannot read %s: %s' % (path, err)) from err
  except (KeyError, TypeError) as err:
    raise CorruptDescriptor('%s is missing field %s.' % (path, err)) from err

  inner = build_inner(n, k, t, Field(p))
  if inner.lam.tolist() != lam:
    raise InvalidParameters('Stored lambda table differs from the canonical '
                            'assignment.')
  return EmsrCode(inner, build_rs_outer(q, N, K), sigma, epsilon)


def _load_shards(code, workdir):
  """Payloads of the shards present in `workdir`, keyed by block."""

  payloads = {}
  for i in range(code.n_blocks):
    path = shard_path(workdir, i)
    if not os.path.exists(path):
      continue
    header, payload = read_shard(path)
    if header.block != i or not header.matches(code):
      raise CorruptShard('%s does not belong to this code.' % path)
    if header.length % code.subpacketization:
      raise CorruptShard('%s holds a partial stripe.' % path)
    payloads[i] = payload.reshape(-1, code.N, code.ell)

  stripes = {len(p) for p in payloads.values()}
  if len(stripes) > 1:
    raise CorruptShard('Shards hold different numbers of stripes.')
  return payloads


def _write_block(code, workdir, block, payload):
  payload = np.asarray(payload).ravel()
  write_shard(shard_path(workdir, block),
              ShardHeader.for_code(code, block, payload.size), payload)


def cmd_build(args):
  code = build_emsr(args.n, args.k, args.t, args.q, args.N, args.K,
                    epsilon=args.eps, p=args.p)
  save_code(code, args.workdir)
  return code.summary()


def cmd_encode(args):
  code = load_code(args.workdir)
  try:
    with open(args.file, 'rb') as f:
      data = f.read()
  except OSError as err:
    raise InputUnavailable('Cannot read %s: %s'
                           % (args.file, err.strerror)) from err

  stripe = code.message_blocks * code.subpacketization
  symbols = pack_bytes(data, code.field.p, stripe).reshape(-1, stripe)
  words = np.stack([code.encode(message) for message in symbols])

  for i in range(code.n_blocks):
    _write_block(code, args.workdir, i, words[:, i])
  logger.info('Wrote %d shards of %d stripes.', code.n_blocks, len(words))
  return {'bytes': len(data), 'stripes': len(words),
          'shards': code.n_blocks,
          'symbols_per_shard': len(words) * code.subpacketization}


def cmd_fail(args):
  code = load_code(args.workdir)
  code.check_block(args.block)
  path = shard_path(args.workdir, args.block)
  if not os.path.exists(path):
    raise ClusterStateError('Shard %d is already missing.' % args.block)
  os.remove(path)
  return {'failed': args.block}


def cmd_repair(args):
  code = load_code(args.workdir)
  code.check_block(args.block)
  payloads = _load_shards(code, args.workdir)
  payloads.pop(args.block, None)
  if not payloads:
    raise ClusterStateError('No shards to repair from.')

  plan = plan_repair(code, args.block, helpers=args.helpers,
                     policy=args.policy, random_seed=args.seed)
  absent = [i for i in plan.contacted if i not in payloads]
  if absent:
    raise ClusterStateError('Helper shards %s are missing.' % absent)
  verify = len(payloads) == code.n_blocks - 1

  stripes = len(next(iter(payloads.values())))
  rebuilt = code.field.zeros((stripes, code.N, code.ell))
  for k in range(stripes):
    view = {i: payload[k] for i, payload in payloads.items()}
    rebuilt[k], report = execute_repair(code, view, plan, verify=verify)

  _write_block(code, args.workdir, args.block, rebuilt)
  out = report.to_dict()
  out['stripes'] = stripes
  out['check'] = bandwidth_check(report, code).to_dict()
  return out


def cmd_decode(args):
  code = load_code(args.workdir)
  payloads = _load_shards(code, args.workdir)
  erased = [i for i in range(code.n_blocks) if i not in payloads]
  if len(erased) > code.r:
    raise TooManyErasures('%d shards are missing, at most r=%d can be '
                          'rebuilt.' % (len(erased), code.r))

  stripes = len(next(iter(payloads.values())))
  messages = []
  for k in range(stripes):
    word = code.field.zeros((code.n_blocks, code.N, code.ell))
    for i, payload in payloads.items():
      word[i] = payload[k]
    word = code.decode_erasures(word, erased)
    messages.append(word[:code.message_blocks].ravel())

  data = unpack_symbols(np.concatenate(messages), code.field.p)
  output = args.output or os.path.join(args.workdir, 'decoded.bin')
  try:
    with open(output, 'wb') as f:
      f.write(data)
  except OSError as err:
    raise InputUnavailable('Cannot write %s: %s'
                           % (output, err.strerror)) from err
  return {'bytes': len(data), 'erased': erased, 'output': output}


def cmd_verify_mds(args):
  code = load_code(args.workdir)
  if args.sample is not None:
    report = code.mds_check('sample', count=args.sample,
                            random_seed=args.seed)
  else:
    report = code.mds_check('exhaustive', progress=args.progress)
  return report.to_dict()


def _outer_from_args(args):
  given = [v is not None for v in (args.q, args.N, args.K)]
  if any(given) and not all(given):
    raise InvalidParameters('--q, --N and --K must be given together.')
  if all(given):
    return build_rs_outer(args.q, args.N, args.K)
  return load_code(args.workdir).outer


def cmd_count_full_weight(args):
  outer = _outer_from_args(args)
  return {'q': outer.q, 'N': outer.N, 'K': outer.K, 'M': outer.M,
          'D': outer.D, 'W': outer.W,
          'weight_distribution': outer.weight_distribution().tolist()}


def cmd_fw_bound(args):
  outer = _outer_from_args(args)
  bound = fw_lower_bound(outer.N, outer.K, args.genus, outer.q)
  return {'q': outer.q, 'N': outer.N, 'K': outer.K, 'genus': args.genus,
          'bound': bound, 'W': outer.W, 'holds': bound <= outer.W}


def cmd_plan_ag(args):
  plan = ag_plan(args.r, args.eps, args.u)
  out = plan.to_dict()
  if args.genus is not None:
    out['instance'] = plan.instantiate(args.genus, args.s)
  return out


def cmd_simulate(args):
  report = run_trials(args.config, n_jobs=args.n_jobs,
                      progress=args.progress)
  return report.summary


def build_parser():

  parser = argparse.ArgumentParser(
      prog='emsr_codes',
      description='Build, store and repair with eps-MSR erasure codes.')
  parser.add_argument('--workdir', default='.',
                      help='Directory holding code.json and the shards.')
  parser.add_argument('--log-level', default='WARNING')
  parser.add_argument('--progress', action='store_true',
                      help='Show progress bars on long sweeps.')
  sub = parser.add_subparsers(dest='command', required=True)

  p = sub.add_parser('build', help='Construct a code and save its descriptor.')
  for name in ('--n', '--k', '--t', '--q', '--N', '--K'):
    p.add_argument(name, type=int, required=True)
  p.add_argument('--eps', type=float, default=0.5)
  p.add_argument('--p', type=int, default=None,
                 help='Field modulus; searched for when omitted.')
  p.set_defaults(func=cmd_build)

  p = sub.add_parser('encode', help='Encode a file into shard files.')
  p.add_argument('file')
  p.set_defaults(func=cmd_encode)

  p = sub.add_parser('fail', help='Delete one shard.')
  p.add_argument('block', type=int)
  p.set_defaults(func=cmd_fail)

  p = sub.add_parser('repair', help='Rebuild one shard from its helpers.')
  p.add_argument('block', type=int)
  p.add_argument('--helpers', type=int, nargs='+', default=None)
  p.add_argument('--policy', choices=['ascending', 'random'],
                 default='ascending')
  p.add_argument('--seed', type=int, default=0)
  p.set_defaults(func=cmd_repair)

  p = sub.add_parser('decode', help='Restore the file from the shards.')
  p.add_argument('--output', default=None)
  p.set_defaults(func=cmd_decode)

  p = sub.add_parser('verify-mds', help='Rank sweep over block subsets.')
  group = p.add_mutually_exclusive_group()
  group.add_argument('--exhaustive', action='store_true')
  group.add_argument('--sample', type=int, default=None)
  p.add_argument('--seed', type=int, default=0)
  p.set_defaults(func=cmd_verify_mds)

  for name, func in (('count-full-weight', cmd_count_full_weight),
                     ('fw-bound', cmd_fw_bound)):
    p = sub.add_parser(name)
    p.add_argument('--q', type=int, default=None)
    p.add_argument('--N', type=int, default=None)
    p.add_argument('--K', type=int, default=None)
    if name == 'fw-bound':
      p.add_argument('--genus', type=int, required=True)
    p.set_defaults(func=func)

  p = sub.add_parser('plan-ag', help='Size an algebraic geometry outer code.')
  p.add_argument('--r', type=int, required=True)
  p.add_argument('--eps', type=float, required=True)
  p.add_argument('--u', type=int, required=True)
  p.add_argument('--genus', type=int, default=None)
  p.add_argument('--s', type=int, default=2)
  p.set_defaults(func=cmd_plan_ag)

  p = sub.add_parser('simulate', help='Run failure and repair trials.')
  p.add_argument('--config', required=True)
  p.add_argument('--n-jobs', type=int, default=None)
  p.set_defaults(func=cmd_simulate)

  return parser


def main(argv=None):

  parser = build_parser()
  args = parser.parse_args(argv)
  logging.basicConfig(level=args.log_level.upper(),
                      format='%(levelname)s %(name)s: %(message)s')

  try:
    try:
      result = args.func(args)
    except OSError as err:
      raise InputUnavailable(str(err)) from err
  except EmsrError as err:
    print(json.dumps(err.to_dict(), sort_keys=True), file=sys.stderr)
    return 1

  print(to_json(result))
  if isinstance(result, dict) and result.get('passed') is False:
    return 1
  return 0
