"""Exception hierarchy. Every error raised on purpose derives from GermbenchError."""


class GermbenchError(Exception):
    pass


class NotAssociative(GermbenchError):
    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"(st)u != s(tu) at (s, t, u) = {triple}")


class NoUniqueInverse(GermbenchError):
    def __init__(self, element, candidates):
        self.element = element
        self.candidates = tuple(candidates)
        super().__init__(
            f"element {element!r} has {len(self.candidates)} candidate inverses: {list(self.candidates)}"
        )


class ZeroNotAbsorbing(GermbenchError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"zero is not absorbing against {witness!r}")


class NotIdempotent(GermbenchError):
    pass


class NotAGroup(GermbenchError):
    pass


class SizeGuard(GermbenchError):
    pass


class DomainViolation(GermbenchError):
    pass


class InvalidAction(GermbenchError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"action fails validation: {report.violations[:3]}")


class NotAUnit(GermbenchError):
    pass


class NotAHomomorphism(GermbenchError):
    pass


class NotDBijective(GermbenchError):
    pass


class TotalityViolation(GermbenchError):
    pass


class WellDefinednessFailure(GermbenchError):
    pass


class FormatError(GermbenchError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
