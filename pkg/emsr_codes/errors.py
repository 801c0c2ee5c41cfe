"""Exceptions raised by `emsr_codes`.

Every error carries a stable `code` (the class name) so that the command
line interface can report failures as machine-readable JSON.
"""


class EmsrError(Exception):
  """Base class for all errors raised by the package."""

  @property
  def code(self):
    return type(self).__name__

  def to_dict(self):
    return {'error': self.code, 'message': str(self)}


class InversionOfZero(EmsrError, ZeroDivisionError):
  pass


class SingularSystem(EmsrError):
  pass


class DimensionMismatch(EmsrError, ValueError):
  pass


class IndexOutOfRange(EmsrError, IndexError):
  pass


class InvalidParameters(EmsrError, ValueError):
  pass


class TooManyErasures(EmsrError):
  pass


class NotACodeword(EmsrError):
  pass


class BadHelperSet(EmsrError, ValueError):
  pass


class NotEnoughEvaluationPoints(EmsrError, ValueError):
  pass


class BoundInapplicable(EmsrError, ValueError):
  pass


class InvalidU(EmsrError, ValueError):
  pass


class FieldTooSmall(EmsrError):
  pass


class MissingCompulsory(EmsrError, ValueError):
  pass


class BadPlanSize(EmsrError, ValueError):
  pass


class ScalarValidationBug(EmsrError):
  """A recovery system was singular although the scalars were validated."""


class SimulationFailure(EmsrError):

  def __init__(self, message, trial=None):
    super().__init__(message)
    self.trial = trial

  def to_dict(self):
    out = super().to_dict()
    out['trial'] = self.trial
    return out


class AccessViolation(EmsrError):
  pass


class ClusterStateError(EmsrError):
  pass


class CorruptShard(EmsrError):
  pass


class BadConfig(EmsrError, ValueError):
  pass


class CorruptDescriptor(EmsrError):
  """The stored code descriptor cannot be read or is incomplete."""


class InputUnavailable(EmsrError):
  pass
