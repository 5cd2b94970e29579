"""Exception types raised across the solver."""


class CrawlFVError(Exception):
    """Base class for all crawlfv errors."""


class NonPositiveRadius(CrawlFVError):
    pass


class InvertedRadii(CrawlFVError):
    pass


class TooFewCells(CrawlFVError):
    pass


class IndexOutOfRange(CrawlFVError):
    pass


class DimensionMismatch(CrawlFVError):
    pass


class SolverDiverged(CrawlFVError):
    pass


class SingularMatrix(CrawlFVError):
    pass


class MissingFile(CrawlFVError):
    pass


class UnknownKey(CrawlFVError):
    pass


class BadValue(CrawlFVError):
    pass


class IoError(CrawlFVError):
    pass


class NonFiniteState(CrawlFVError):
    pass


class OutOfDomain(CrawlFVError):
    pass


class GridTooLarge(CrawlFVError):
    pass
