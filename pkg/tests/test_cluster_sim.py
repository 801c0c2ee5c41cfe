"""Tests for the simulated cluster and the trial runner."""
import json
import os
import tempfile
import unittest
from unittest import mock
import warnings

import numpy as np
import pandas as pd

from emsr_codes.cluster_sim import Cluster, _GuardedShards, run_trials
from emsr_codes.config import load_config
from emsr_codes.models.emsr import build_emsr
from emsr_codes.errors import (AccessViolation, ClusterStateError, BadConfig,
                               SimulationFailure)
from emsr_codes.models.emsr.repair import execute_repair

REFERENCE = {'inner': {'n': 5, 'k': 2, 't': 3},
        'outer': {'q': 5, 'N': 4, 'K': 2}}


def reference_config(**extra):
  config = dict(REFERENCE)
  config.update(extra)
  return config


class TestCluster(unittest.TestCase):
  """Node failure bookkeeping and guarded reads."""

  @classmethod
  def setUpClass(cls):
    cls.code = build_emsr(5, 2, 3, 5, 4, 2, epsilon=0.5)

  def setUp(self):
    self.cluster = Cluster(self.code)
    rng = np.random.default_rng(5)
    self.cluster.load(self.code.field.random(22 * 128, rng))

  def test_fail_and_repair(self):
    cluster = self.cluster
    original = cluster.snapshot()
    cluster.fail(6)
    self.assertEqual(cluster.failed, 6)
    self.assertFalse(cluster.shards[6].any())
    report = cluster.repair()
    self.assertIsNone(cluster.failed)
    np.testing.assert_array_equal(cluster.shards, original)
    self.assertEqual(report.helpers, 23)
    self.assertEqual(report.max_helper, 80)
    self.assertEqual([event for event, _ in cluster.log],
                     ['load', 'fail', 'repair'])

  def test_state_errors(self):
    cluster = self.cluster
    with self.assertRaises(ClusterStateError):
      cluster.repair()
    cluster.fail(0)
    with self.assertRaises(ClusterStateError):
      cluster.fail(1)

  def test_failed_node_is_unreadable(self):
    cluster = self.cluster
    cluster.fail(3)
    shards = _GuardedShards(cluster)
    self.assertEqual(len(shards), 25)
    np.testing.assert_array_equal(shards[4], cluster.shards[4])
    with self.assertRaises(AccessViolation):
      shards[3]


class TestRunTrials(unittest.TestCase):
  """End to end fail, repair and verify runs."""

  @classmethod
  def setUpClass(cls):
    cls.report = run_trials(reference_config(epsilon=0.5, trials=25, seed=0))

  def test_round_robin(self):
    summary = self.report.summary
    self.assertEqual(summary['trials'], 25)
    self.assertTrue(summary['all_pass'])
    self.assertTrue(summary['all_correct'])
    self.assertEqual(summary['max_helper_symbols'], 80)
    self.assertEqual(summary['compulsory_histogram'], {'16': 25})
    self.assertEqual(summary['code']['helpers'], 23)
    self.assertEqual([t.failed for t in self.report.trials], list(range(25)))

  def test_frame(self):
    frame = self.report.to_frame()
    self.assertEqual(list(frame.columns),
                     ['trial', 'failed', 'helpers', 'compulsory',
                      'max_helper_symbols', 'budget_symbols', 'pass'])
    self.assertEqual(len(frame), 25)
    self.assertTrue(frame['pass'].all())
    self.assertTrue((frame['budget_symbols'] == 96).all())
    self.assertIn('wall_time', self.report.to_frame(True).columns)

  def test_deterministic(self):
    again = run_trials(reference_config(epsilon=0.5, trials=25, seed=0))
    self.assertEqual(again.to_json(), self.report.to_json())
    pd.testing.assert_frame_equal(again.to_frame(), self.report.to_frame())

  def test_threads_match_serial(self):
    threaded = run_trials(reference_config(epsilon=0.5, trials=25, seed=0),
                          n_jobs=2)
    pd.testing.assert_frame_equal(threaded.to_frame(), self.report.to_frame())

  def test_random_policies(self):
    config = reference_config(trials=6, seed=3,
                         policies={'failure': 'random', 'helpers': 'random'})
    report = run_trials(config)
    self.assertTrue(report.summary['all_correct'])
    self.assertTrue(report.summary['all_pass'])
    again = run_trials(config)
    self.assertEqual([t.failed for t in again.trials],
                     [t.failed for t in report.trials])

  def test_no_trials(self):
    report = run_trials(reference_config(trials=0))
    summary = report.summary
    self.assertEqual(summary['trials'], 0)
    self.assertTrue(summary['all_pass'])
    self.assertEqual(summary['max_helper_symbols'], 0)
    self.assertEqual(len(report.to_frame()), 0)

  def test_zero_epsilon(self):
    with warnings.catch_warnings():
      warnings.simplefilter('ignore')
      report = run_trials(reference_config(epsilon=0.0, trials=5))
    summary = report.summary
    self.assertEqual(summary['passed'], 0)
    self.assertTrue(summary['all_correct'])
    self.assertFalse(summary['all_pass'])

  def test_output_files(self):
    with tempfile.TemporaryDirectory() as workdir:
      csv_path = os.path.join(workdir, 'trials.csv')
      json_path = os.path.join(workdir, 'summary.json')
      run_trials(reference_config(trials=3, output={'csv': csv_path,
                                               'json': json_path}))
      frame = pd.read_csv(csv_path)
      self.assertEqual(list(frame['failed']), [0, 1, 2])
      with open(json_path) as f:
        summary = json.load(f)
      self.assertEqual(summary['trials'], 3)

  def test_wrong_repair_names_trial(self):
    def corrupting(code, shards, plan, **kwargs):
      block, report = execute_repair(code, shards, plan, **kwargs)
      block = block.copy()
      block[0, 0] = (block[0, 0] + 1) % code.field.p
      return block, report

    with mock.patch('emsr_codes.cluster_sim.execute_repair',
                    side_effect=corrupting):
      with self.assertRaises(SimulationFailure) as ctx:
        run_trials(reference_config(trials=2))
    self.assertEqual(ctx.exception.trial, 0)
    self.assertEqual(ctx.exception.to_dict()['trial'], 0)


class TestConfig(unittest.TestCase):
  """Schema validation of run configs."""

  def test_defaults(self):
    config = load_config(reference_config())
    self.assertEqual(config.epsilon, 0.5)
    self.assertEqual(config.trials, 0)
    self.assertEqual(config.failure_policy, 'round_robin')
    self.assertEqual(config.code_params['K'], 2)

  def test_schema_violations(self):
    bad = [reference_config(trials=-1),
           reference_config(epsilon='half'),
           reference_config(policies={'failure': 'sometimes'}),
           {'inner': REFERENCE['inner']},
           reference_config(extra=1)]
    for document in bad:
      with self.assertRaises(BadConfig):
        load_config(document)

  def test_error_names_path(self):
    with self.assertRaises(BadConfig) as ctx:
      load_config(reference_config(inner={'n': 5, 'k': 2, 't': 'three'}))
    self.assertIn('inner/t', str(ctx.exception))

  def test_file(self):
    with tempfile.TemporaryDirectory() as workdir:
      path = os.path.join(workdir, 'run.json')
      with open(path, 'w') as f:
        json.dump(reference_config(trials=2), f)
      self.assertEqual(load_config(path).trials, 2)
      with self.assertRaises(BadConfig):
        load_config(os.path.join(workdir, 'missing.json'))


if __name__ == '__main__':
  unittest.main()
