"""Exception types raised deliberately by the screening pipeline.

Every subsystem raises subclasses of PneumoError so callers (CLI, HTTP
service) can map failures to exit codes / status codes without string
matching.
"""


class PneumoError(Exception):
    """Base class for all errors this package raises on purpose."""


# image loading / preprocessing
class UnsupportedFormat(PneumoError):
    pass


class CorruptFile(PneumoError):
    pass


class ZeroDimension(PneumoError):
    pass


class GridTooFine(PneumoError):
    pass


# classifier
class NonFiniteParams(PneumoError):
    pass


class EmptyBatch(PneumoError):
    pass


class EmptyDataset(PneumoError):
    pass


class UnlabeledSample(PneumoError):
    pass


# external prediction ingestion
class MalformedLine(PneumoError):
    pass


class BadDistribution(PneumoError):
    pass


class DuplicateKey(PneumoError):
    pass


# aggregation
class LengthMismatch(PneumoError):
    pass


class MissingInput(PneumoError):
    pass


# indicators
class NegativeAge(PneumoError):
    pass


class BadCounts(PneumoError):
    pass


class NonChronological(PneumoError):
    pass


class GridMismatch(PneumoError):
    pass


class BadThreshold(PneumoError):
    pass


# dataset / evaluation
class DuplicatePath(PneumoError):
    pass


class BadLabel(PneumoError):
    pass


class BadSplit(PneumoError):
    pass


class IoFailure(PneumoError):
    pass


class EmptyInput(PneumoError):
    pass


class EmptyMatrix(PneumoError):
    pass


class ZeroRow(PneumoError):
    pass


class BadFormat(PneumoError):
    pass


# record store / service
class UnknownPatient(PneumoError):
    pass


class NoExams(PneumoError):
    pass


class StoreUnavailable(PneumoError):
    pass


class StoreCorrupt(PneumoError):
    pass


class PortInUse(PneumoError):
    pass
