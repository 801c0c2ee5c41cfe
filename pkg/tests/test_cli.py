"""End to end tests of the command line interface."""
import contextlib
import io
import json
import os
import tempfile
import unittest

import numpy as np

from emsr_codes.cli import main, load_code
from emsr_codes.shards import (shard_path, read_shard, pack_bytes,
                               unpack_symbols, symbol_bits)
from emsr_codes.errors import CorruptShard
from emsr_codes.models.emsr.repair import plan_repair, compulsory_sets

BUILD = ['build', '--n', '5', '--k', '2', '--t', '3',
         '--q', '5', '--N', '4', '--K', '2', '--eps', '0.5']


def run(*argv):
  """Run the CLI and return its exit status and parsed JSON output."""
  out, err = io.StringIO(), io.StringIO()
  with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
    status = main(list(argv))
  if status == 0:
    return status, json.loads(out.getvalue())
  # Errors are a single JSON line after any logged warnings.
  return status, json.loads(err.getvalue().strip().splitlines()[-1])


class TestPlanning(unittest.TestCase):
  """Commands that need no stored code."""

  def test_plan_ag(self):
    status, out = run('plan-ag', '--r', '3', '--eps', '0.5', '--u', '4')
    self.assertEqual(status, 0)
    self.assertEqual(out['q_min'], 1849)
    self.assertEqual(out['delta_min'], 0.75)

    status, out = run('plan-ag', '--r', '3', '--eps', '0.5', '--u', '3')
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'InvalidU')

  def test_outer_counts(self):
    status, out = run('count-full-weight', '--q', '5', '--N', '4', '--K', '2')
    self.assertEqual(status, 0)
    self.assertEqual(out['W'], 8)
    self.assertEqual(out['weight_distribution'], [1, 0, 0, 16, 8])

    status, out = run('fw-bound', '--q', '5', '--N', '4', '--K', '2',
                      '--genus', '0')
    self.assertEqual((out['bound'], out['holds']), (7, True))

    status, out = run('fw-bound', '--q', '5', '--N', '4', '--genus', '0')
    self.assertEqual(status, 1)


class TestStorageCycle(unittest.TestCase):
  """Build, encode, fail, repair and decode a file through shard files."""

  def setUp(self):
    self.tmp = tempfile.TemporaryDirectory()
    self.workdir = os.path.join(self.tmp.name, 'store')
    rng = np.random.default_rng(17)
    self.data = rng.integers(0, 256, 4096, dtype=np.uint8).tobytes()
    self.source = os.path.join(self.tmp.name, 'input.bin')
    with open(self.source, 'wb') as f:
      f.write(self.data)

    status, self.summary = run('--workdir', self.workdir, *BUILD)
    self.assertEqual(status, 0)
    status, self.encoded = run('--workdir', self.workdir, 'encode',
                               self.source)
    self.assertEqual(status, 0)

  def tearDown(self):
    self.tmp.cleanup()

  def cli(self, *argv):
    return run('--workdir', self.workdir, *argv)

  def test_build_summary(self):
    self.assertEqual(self.summary['helpers'], 23)
    self.assertEqual(self.summary['n_blocks'], 25)
    code = load_code(self.workdir)
    self.assertEqual(code.field.p, self.summary['p'])
    self.assertEqual(self.encoded['shards'], 25)
    self.assertGreaterEqual(self.encoded['stripes'], 1)

  def test_fail_repair_decode(self):
    before = read_shard(shard_path(self.workdir, 1))[1]
    status, out = self.cli('fail', '1')
    self.assertEqual((status, out['failed']), (0, 1))
    self.assertFalse(os.path.exists(shard_path(self.workdir, 1)))

    status, out = self.cli('repair', '1')
    self.assertEqual(status, 0)
    self.assertEqual(out['helpers'], 23)
    self.assertEqual(out['max_helper_symbols'], 80)
    self.assertTrue(out['check']['pass'])
    self.assertEqual(out['stripes'], self.encoded['stripes'])
    np.testing.assert_array_equal(
        read_shard(shard_path(self.workdir, 1))[1], before)

    status, out = self.cli('decode')
    self.assertEqual(status, 0)
    with open(out['output'], 'rb') as f:
      self.assertEqual(f.read(), self.data)

  def test_decode_with_erasures(self):
    for block in (0, 10, 24):
      self.assertEqual(self.cli('fail', str(block))[0], 0)
    output = os.path.join(self.tmp.name, 'restored.bin')
    status, out = self.cli('decode', '--output', output)
    self.assertEqual(status, 0)
    self.assertEqual(out['erased'], [0, 10, 24])
    with open(output, 'rb') as f:
      self.assertEqual(f.read(), self.data)

    self.assertEqual(self.cli('fail', '5')[0], 0)
    status, out = self.cli('decode')
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'TooManyErasures')

  def test_shards_are_deterministic(self):
    other = os.path.join(self.tmp.name, 'other')
    run('--workdir', other, *BUILD)
    run('--workdir', other, 'encode', self.source)
    for block in range(25):
      with open(shard_path(self.workdir, block), 'rb') as f:
        first = f.read()
      with open(shard_path(other, block), 'rb') as f:
        self.assertEqual(f.read(), first)

  def test_corrupt_header(self):
    path = shard_path(self.workdir, 0)
    with open(path, 'r+b') as f:
      f.write(b'XXXX')
    status, out = self.cli('decode')
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'CorruptShard')

  def test_missing_descriptor(self):
    status, out = run('--workdir', os.path.join(self.tmp.name, 'empty'),
                      'decode')
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'ClusterStateError')

  def test_verify_mds_sample(self):
    status, out = self.cli('verify-mds', '--sample', '10')
    self.assertEqual(status, 0)
    self.assertTrue(out['passed'])
    self.assertEqual(out['ranks_checked'], 40)

  def test_verify_mds_exhaustive(self):
    status, out = self.cli('verify-mds', '--exhaustive')
    self.assertEqual(status, 0)
    self.assertEqual(out['mode'], 'exhaustive')
    self.assertEqual(out['subsets_checked'], 2300)
    self.assertEqual(out['ranks_checked'], 9200)
    self.assertTrue(out['passed'])
    self.assertEqual(out['violations'], [])

  def test_repair_with_explicit_helpers(self):
    code = load_code(self.workdir)
    plan = plan_repair(code, 1)
    union = compulsory_sets(code, 1).union
    dropped = max(i for i in plan.contacted if i not in union)
    helpers = [i for i in plan.contacted if i != dropped]
    helpers += list(plan.not_contacted)
    before = read_shard(shard_path(self.workdir, 1))[1]
    self.assertEqual(self.cli('fail', '1')[0], 0)

    status, out = self.cli('repair', '1', '--helpers',
                           *[str(i) for i in helpers])
    self.assertEqual(status, 0)
    self.assertEqual(out['helpers'], 23)
    self.assertTrue(out['check']['pass'])
    np.testing.assert_array_equal(
        read_shard(shard_path(self.workdir, 1))[1], before)

  def test_repair_without_compulsory_helper(self):
    code = load_code(self.workdir)
    plan = plan_repair(code, 1)
    compulsory = min(compulsory_sets(code, 1).union)
    helpers = [i for i in plan.contacted if i != compulsory]
    helpers += list(plan.not_contacted)
    self.assertEqual(self.cli('fail', '1')[0], 0)

    status, out = self.cli('repair', '1', '--helpers',
                           *[str(i) for i in helpers])
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'MissingCompulsory')
    self.assertFalse(os.path.exists(shard_path(self.workdir, 1)))

  def test_missing_input_file(self):
    status, out = self.cli('encode', os.path.join(self.tmp.name, 'nope.bin'))
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'InputUnavailable')
    self.assertIn('nope.bin', out['message'])

  def test_unreadable_descriptor(self):
    with open(os.path.join(self.workdir, 'code.json'), 'w') as f:
      f.write('{')
    status, out = self.cli('decode')
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'CorruptDescriptor')

  def test_incomplete_descriptor(self):
    path = os.path.join(self.workdir, 'code.json')
    with open(path) as f:
      desc = json.load(f)
    del desc['sigma']
    with open(path, 'w') as f:
      json.dump(desc, f)
    status, out = self.cli('decode')
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'CorruptDescriptor')
    self.assertIn('sigma', out['message'])


class TestSimulate(unittest.TestCase):
  """Trial runs driven by a config file."""

  def setUp(self):
    self.tmp = tempfile.TemporaryDirectory()
    self.addCleanup(self.tmp.cleanup)

  def write_config(self, **extra):
    config = {'inner': {'n': 5, 'k': 2, 't': 3},
              'outer': {'q': 5, 'N': 4, 'K': 2}}
    config.update(extra)
    path = os.path.join(self.tmp.name, 'run.json')
    with open(path, 'w') as f:
      json.dump(config, f)
    return path

  def test_summary(self):
    status, out = run('simulate', '--config',
                      self.write_config(epsilon=0.5, trials=3))
    self.assertEqual(status, 0)
    self.assertEqual(out['trials'], 3)
    self.assertTrue(out['all_pass'])
    self.assertEqual(out['max_helper_symbols'], 80)

  def test_bad_config(self):
    status, out = run('simulate', '--config', self.write_config(trials=-1))
    self.assertEqual(status, 1)
    self.assertEqual(out['error'], 'BadConfig')


class TestFraming(unittest.TestCase):
  """Byte to symbol framing."""

  def test_recovers_bytes(self):
    for p, data in ((29, b''), (29, b'eps-msr'), (257, bytes(range(256)))):
      symbols = pack_bytes(data, p, 64)
      self.assertEqual(len(symbols) % 64, 0)
      self.assertTrue((symbols < 2**symbol_bits(p)).all())
      self.assertEqual(unpack_symbols(symbols, p), data)

  def test_rejects_wide_symbols(self):
    with self.assertRaises(CorruptShard):
      unpack_symbols(np.full(64, 20), 17)


if __name__ == '__main__':
  unittest.main()
