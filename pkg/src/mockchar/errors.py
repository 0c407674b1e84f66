"""Exception hierarchy shared by the symbolic and numeric layers."""


class MockcharError(Exception):
    pass


class SeriesError(MockcharError, ArithmeticError):
    pass


class InexactDivision(SeriesError):
    """A leading Laurent coefficient did not divide exactly.

    Every quotient built by this package is a finite Laurent polynomial at each
    q-order, so this always points at a transcription error in a formula.
    """


class ZeroDivisor(SeriesError, ZeroDivisionError):
    pass


class OddParity(SeriesError):
    """Operation needs integer powers of y but the series has odd u-powers."""


class AboveTruncation(SeriesError):
    pass


class InvalidSpec(MockcharError, ValueError):
    pass


class InconsistentSystem(MockcharError):
    """Nonzero residual in an overdetermined exact solve or a decomposition."""


class SingularLeadingBlock(MockcharError):
    pass


class NonConvergent(MockcharError):
    pass


class NearPole(MockcharError):
    pass


class QuadratureDivergence(MockcharError):
    pass


class UnknownObject(MockcharError, KeyError):
    pass
