"""Tests for the composed eps-MSR code on a small reference code.

Inner (n=5, k=2, t=3), outer Reed-Solomon (q=5, N=4, K=2), eps = 0.5:
25 blocks, 22 data blocks, 23 helpers and 128 symbols per block.
"""
import unittest
import warnings

import numpy as np

from emsr_codes.gf import Field, mat_mul, mat_rank, poly_eval
from emsr_codes.models.emsr import (EmsrCode, build_emsr, select_scalars,
                                    validate_scalars, emsr_encode,
                                    emsr_parity_column, emsr_verify,
                                    emsr_decode_erasures, mds_check)
from emsr_codes.models.emsr.repair import (compulsory_sets, plan_repair,
                                           interpolation_matrix,
                                           execute_repair)
from emsr_codes.models.inner_msr import build_inner
from emsr_codes.models.outer import OuterCode, build_rs_outer
from emsr_codes.metrics import bandwidth_check
from emsr_codes.experiments import RepairBandwidthSweep
from emsr_codes.errors import (FieldTooSmall, DimensionMismatch,
                               TooManyErasures, InvalidParameters,
                               MissingCompulsory, BadPlanSize, NotACodeword)


class ReferenceCode(unittest.TestCase):
  """Shared fixture: the reference code and a few encoded words."""

  @classmethod
  def setUpClass(cls):
    cls.code = build_emsr(5, 2, 3, 5, 4, 2, epsilon=0.5)
    cls.rng = np.random.default_rng(2024)
    cls.message = cls.code.field.random(22 * 128, cls.rng)
    cls.word = emsr_encode(cls.code, cls.message)


class TestConstruction(ReferenceCode):

  def test_parameters(self):
    code = self.code
    self.assertEqual(code.n_blocks, 25)
    self.assertEqual(code.message_blocks, 22)
    self.assertEqual(code.helpers, 23)
    self.assertEqual(code.subpacketization, 128)
    self.assertEqual(code.budget, 96)
    self.assertEqual(code.t_prime, 17)
    self.assertEqual(code.t_prime_helpers, 16)
    self.assertEqual(code.delta, 0.75)
    self.assertEqual(code.delta_min, 0.75)
    summary = code.summary()
    self.assertEqual(summary['msr_optimum'], 64)
    self.assertEqual(summary['W'], 8)

  def test_scalars(self):
    code = self.code
    self.assertEqual(code.field.p, 107)
    self.assertEqual(code.sigma.tolist(),
                     [1, 2, 3, 5, 6, 7, 11, 8, 10, 22, 13, 17, 23, 19, 9, 12,
                      29, 49, 48, 33, 20, 25, 95, 34, 89])
    self.assertEqual(len(set(code.sigma.tolist())), 25)
    self.assertNotIn(0, code.sigma.tolist())
    self.assertEqual(validate_scalars(code.field, code.inner, code.outer,
                                      code.sigma), [])
    # The search is deterministic.
    again = select_scalars(code.field, code.inner, code.outer)
    self.assertEqual(again, code.sigma.tolist())

  def test_scalars_small_cases(self):
    field = Field(11)
    inner = build_inner(5, 2, 3, field)
    zero_code = OuterCode(5, np.zeros((0, 4)))
    self.assertEqual(select_scalars(field, inner, zero_code), [1])
    with self.assertRaises(FieldTooSmall):
      select_scalars(field, inner, build_rs_outer(5, 4, 2))

  def test_duplicate_scalars_rejected(self):
    sigma = self.code.sigma.copy()
    sigma[1] = sigma[0]
    with self.assertRaises(InvalidParameters):
      EmsrCode(self.code.inner, self.code.outer, sigma, 0.5)

  def test_parity_column(self):
    code = self.code
    p = code.field.p
    i = 7
    column = emsr_parity_column(code, i)
    self.assertEqual(column.shape, (384, 128))
    np.testing.assert_array_equal(column[:128], np.eye(128, dtype=np.int64))

    for k in range(4):
      a = code.outer.codewords[i, k]
      for b in (0, 5, 31):
        expected = code.sigma[i] * code.inner.lam[a, code.inner.digits[b, a]]
        self.assertEqual(column[128 + 32 * k + b, 32 * k + b], expected % p)

    mask = np.zeros((384, 128), dtype=bool)
    for m in range(3):
      for k in range(4):
        idx = np.arange(32)
        mask[128 * m + 32 * k + idx, 32 * k + idx] = True
    self.assertFalse(column[~mask].any())


class TestEncoding(ReferenceCode):

  def test_encode(self):
    code = self.code
    self.assertEqual(self.word.shape, (25, 4, 32))
    self.assertTrue(emsr_verify(code, self.word))
    np.testing.assert_array_equal(self.word[:22].ravel(), self.message)
    self.assertFalse(code.encode(np.zeros(2816)).any())
    with self.assertRaises(DimensionMismatch):
      code.encode(np.zeros(2815))

  def test_parity_matrix_kernel(self):
    code = self.code
    H = code.parity_matrix()
    self.assertEqual(H.shape, (384, 3200))
    np.testing.assert_array_equal(mat_mul(H, self.word.ravel(), code.field),
                                  np.zeros(384))

  def test_decode_erasures(self):
    code = self.code
    for erased in ([22, 23, 24], [0, 11, 24], [3, 4], [9]):
      damaged = self.word.copy()
      damaged[erased] = 0
      np.testing.assert_array_equal(
          emsr_decode_erasures(code, damaged, erased), self.word)
    with self.assertRaises(TooManyErasures):
      code.decode_erasures(self.word, [0, 1, 2, 3])

    corrupt = self.word.copy()
    corrupt[24, 1, 0] = (corrupt[24, 1, 0] + 1) % code.field.p
    with self.assertRaises(NotACodeword):
      code.decode_erasures(corrupt, [0])

  def test_solver_cache_is_bounded(self):
    code = self.code
    word = self.word
    for erased in ([0], [1, 2], [5, 6, 7], [10, 20], [12, 13, 14], [24]):
      damaged = word.copy()
      damaged[erased] = 0
      code.decode_erasures(damaged, erased)
    code.encode(self.message)
    self.assertLessEqual(len(code._encoders), code.N)


class TestMds(ReferenceCode):

  def test_exhaustive(self):
    report = mds_check(self.code, 'exhaustive')
    self.assertEqual(report.subsets_checked, 2300)
    self.assertEqual(report.ranks_checked, 9200)
    self.assertTrue(report.passed)

  def test_single_thick_column(self):
    code = self.code
    for i in (0, 12, 24):
      self.assertEqual(mat_rank(code.parity_column(i), code.field), 128)
    self.assertTrue(code.mds_check(subset_size=1).passed)

  def test_sampled(self):
    report = self.code.mds_check('sample', count=20, random_seed=1)
    self.assertEqual(report.subsets_checked, 20)
    self.assertTrue(report.passed)

  def test_duplicate_scalars_violate(self):
    code = self.code
    sigma = code.sigma.copy()
    sigma[1] = sigma[0]
    bad = EmsrCode(code.inner, code.outer, sigma, 0.5, check_scalars=False)
    report = bad.mds_check(subsets=[(0, 1, 2)])
    self.assertFalse(report.passed)
    self.assertIn(((0, 1, 2), 0), report.violations)


class TestCompulsory(ReferenceCode):

  def test_counts_every_block(self):
    code = self.code
    for failed in range(25):
      sets = compulsory_sets(code, failed)
      self.assertEqual(sets.counts, (4, 4, 4, 4))
      self.assertEqual(len(sets.union), 16)
      self.assertLessEqual(len(sets.union), sets.t_prime)
      self.assertEqual(sets.t_prime, 17)

  def test_full_weight_outer_has_no_compulsory(self):
    code = self.code
    outer = build_rs_outer(5, 4, 1)
    self.assertEqual(outer.W, outer.M - 1)
    sigma = select_scalars(code.field, code.inner, outer)
    small = EmsrCode(code.inner, outer, sigma, 0.5)
    self.assertEqual(compulsory_sets(small, 0).union, frozenset())

    word = small.encode(small.field.random(2 * 128, self.rng))
    block, report = execute_repair(small, word, plan_repair(small, 2))
    np.testing.assert_array_equal(block, word[2])
    self.assertEqual(set(report.per_helper.values()), {64})


class TestPlanning(ReferenceCode):

  def test_default_plan(self):
    code = self.code
    plan = plan_repair(code, 0)
    sets = compulsory_sets(code, 0)
    self.assertEqual(len(plan.contacted), 23)
    self.assertEqual(len(plan.not_contacted), 1)
    self.assertTrue(sets.union <= set(plan.contacted))
    free = sorted(set(range(1, 25)) - sets.union)
    self.assertEqual(plan.not_contacted, (free[-1],))
    for j in range(4):
      self.assertEqual(len(plan.free[j]), 20)
      self.assertGreaterEqual(len(plan.free[j] & set(plan.contacted)), 19)

  def test_explicit_plans(self):
    code = self.code
    sets = compulsory_sets(code, 0)
    others = list(range(1, 25))
    dropped = min(sets.union)
    with self.assertRaises(MissingCompulsory):
      plan_repair(code, 0, helpers=[i for i in others if i != dropped])
    with self.assertRaises(BadPlanSize):
      plan_repair(code, 0, helpers=sorted(sets.union))
    free = sorted(set(others) - sets.union)
    plan = plan_repair(code, 0, helpers=sorted(sets.union) + free[1:])
    self.assertEqual(plan.not_contacted, (free[0],))

  def test_interpolation_matrix(self):
    code = self.code
    p = code.field.p
    for failed, j in ((0, 0), (13, 2)):
      P = interpolation_matrix(code, failed, j)
      self.assertEqual(P.shape, (1, 3))
      a = code.outer.codewords[failed, j]
      roots = (code.sigma[failed] * code.inner.lam[a]) % p
      np.testing.assert_array_equal(
          mat_mul(P, code.field.powers(roots, 3), code.field),
          np.zeros((1, 2)))

      points = code.coordinate_points(j)
      nodes = code.outer.codewords[:, j]
      others = np.flatnonzero(nodes != a)
      values = poly_eval(P[0], points[others].ravel(), code.field)
      self.assertTrue(values.all())


class TestRepair(ReferenceCode):

  def test_every_block_many_messages(self):
    code = self.code
    plans = [plan_repair(code, failed) for failed in range(25)]
    for trial in range(100):
      message = code.field.random(22 * 128, self.rng)
      word = code.encode(message)
      for plan in plans:
        damaged = word.copy()
        damaged[plan.failed] = 0
        block, _ = execute_repair(code, damaged, plan, verify=False)
        np.testing.assert_array_equal(block, word[plan.failed])

  def test_matches_decoder(self):
    code = self.code
    for failed in range(25):
      oracle = code.decode_erasures(self.word, [failed])[failed]
      survivors = {i: self.word[i] for i in range(25) if i != failed}
      block, _ = execute_repair(code, survivors, plan_repair(code, failed))
      np.testing.assert_array_equal(block, oracle)

  def test_bandwidth_law(self):
    code = self.code
    overall = 0
    for failed in range(25):
      plan = plan_repair(code, failed)
      _, report = execute_repair(code, self.word, plan)
      agreements = code.outer.agreements(failed)
      expected = sum(int(agreements[i]) * 32 + (4 - int(agreements[i])) * 16
                     for i in plan.contacted)
      self.assertEqual(report.total, expected)
      for i in plan.contacted:
        self.assertEqual(report.per_helper[i], report.expected(i))
        if agreements[i] == 0:
          self.assertEqual(report.per_helper[i], 64)
        else:
          self.assertEqual(report.per_helper[i], 80)
      self.assertLessEqual(report.max_helper, 96)
      self.assertTrue(bandwidth_check(report, code).passed)
      overall = max(overall, report.max_helper)
    self.assertEqual(overall, 80)

  def test_zero_codeword(self):
    code = self.code
    plan = plan_repair(code, 5)
    _, reference = execute_repair(code, self.word, plan)
    block, report = execute_repair(code, np.zeros((25, 4, 32), np.int64), plan)
    self.assertFalse(block.any())
    self.assertEqual(report.per_helper, reference.per_helper)

  def test_random_policy(self):
    code = self.code
    plan = plan_repair(code, 9, policy='random', random_seed=3)
    self.assertEqual(len(plan.contacted), 23)
    block, _ = execute_repair(code, self.word, plan)
    np.testing.assert_array_equal(block, self.word[9])

  def test_workspace(self):
    code = self.code
    plan = plan_repair(code, 4)
    _, _, workspace = execute_repair(code, self.word, plan,
                                     return_workspace=True)
    for j in range(4):
      self.assertEqual(len(workspace.mu[j]) + len(workspace.recovered_mu[j]),
                       len(plan.free[j]))
      self.assertEqual(len(workspace.downloads[j]), 4)
      self.assertEqual(workspace.y[j].shape, (1, 16))

  def test_inconsistent_survivors(self):
    code = self.code
    plan = plan_repair(code, 0)
    corrupt = self.word.copy()
    victim = plan.not_contacted[0]
    corrupt[victim, 0, 0] = (corrupt[victim, 0, 0] + 1) % code.field.p
    with self.assertRaises(NotACodeword):
      execute_repair(code, corrupt, plan)


class TestBandwidthCheck(ReferenceCode):

  def test_zero_epsilon_fails_budget(self):
    code = self.code
    with warnings.catch_warnings():
      warnings.simplefilter('ignore')
      strict = EmsrCode(code.inner, code.outer, code.sigma, epsilon=0.0)
      block, report = execute_repair(strict, self.word, plan_repair(strict, 0))
      check = bandwidth_check(report, strict)
    np.testing.assert_array_equal(block, self.word[0])
    self.assertEqual(report.budget, 64)
    self.assertFalse(check.passed)
    self.assertFalse(check.hypothesis_holds)

  def test_hypothesis_and_vacuous_flags(self):
    code = self.code
    _, report = execute_repair(code, self.word, plan_repair(code, 1))
    check = bandwidth_check(report, code)
    self.assertTrue(check.passed)
    self.assertTrue(check.hypothesis_holds)
    self.assertFalse(check.vacuous)

    with warnings.catch_warnings():
      warnings.simplefilter('ignore')
      loose = EmsrCode(code.inner, code.outer, code.sigma, epsilon=2.0)
      self.assertTrue(bandwidth_check(report, loose).vacuous)

  def test_report_frame(self):
    _, report = execute_repair(self.code, self.word,
                               plan_repair(self.code, 2))
    frame = report.to_frame()
    self.assertEqual(len(frame), 23)
    self.assertTrue(frame['within_budget'].all())
    self.assertEqual(report.to_dict()['max_helper_symbols'], 80)


class TestSweep(unittest.TestCase):

  def test_epsilon_sweep(self):
    sweep = RepairBandwidthSweep({'n': [5], 'k': [2], 't': [3], 'q': [5],
                                  'N': [4], 'K': [2],
                                  'epsilon': [0.2, 0.5]})
    with warnings.catch_warnings():
      warnings.simplefilter('ignore')
      results = sweep.run()
    self.assertEqual(len(results), 2)
    self.assertTrue((results['max_helper_symbols'] == 80).all())
    by_eps = results.set_index('epsilon')['all_pass']
    self.assertFalse(by_eps[0.2])
    self.assertTrue(by_eps[0.5])


if __name__ == '__main__':
  unittest.main()
