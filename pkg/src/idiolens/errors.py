"""Exception types shared across the package."""


class IdiolensError(Exception):
    """Base class for all errors raised by this package."""


class ZeroVector(IdiolensError):
    """Vector has zero norm or a non-finite component where a direction is required."""


class DimMismatch(IdiolensError):
    """Vectors that must share a dimension do not."""


class EmptyInput(IdiolensError):
    """An operation received an empty collection it cannot work with."""


class AllZeroWeights(IdiolensError):
    """Every weight in a weighted sum is zero."""


class CollinearConstituents(IdiolensError):
    """The two constituent vectors are (anti)parallel; the closed form is singular."""


class MissingEmbedding(IdiolensError):
    """A term or constituent word has no vector in the store."""

    def __init__(self, term: str, missing_keys: list[str]):
        self.term = term
        self.missing_keys = list(missing_keys)
        super().__init__(f"no embedding for {missing_keys!r} (term {term!r})")


class InvalidEncoding(IdiolensError):
    """Input text is not valid UTF-8."""

    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        super().__init__(f"invalid UTF-8 on line {line_no}" + (f": {detail}" if detail else ""))


class MalformedRecord(IdiolensError):
    """A store line is not a valid record."""

    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        super().__init__(f"malformed record on line {line_no}" + (f": {detail}" if detail else ""))


class DimInconsistent(IdiolensError):
    """A store record's vector length disagrees with the header dim."""

    def __init__(self, line_no: int, expected: int, got: int):
        self.line_no = line_no
        super().__init__(f"line {line_no}: vector length {got}, header dim {expected}")


class DuplicateKey(IdiolensError):
    """The same text key appears twice in a store file."""

    def __init__(self, key: str):
        self.key = key
        super().__init__(f"duplicate key {key!r}")


class UnknownLabel(IdiolensError):
    """An annotation label is not one of the allowed values."""

    def __init__(self, line_no: int, label: str):
        self.line_no = line_no
        self.label = label
        super().__init__(f"line {line_no}: unknown label {label!r}")


class MissingColumn(IdiolensError):
    """The annotations CSV lacks a required column."""


class BinMismatch(IdiolensError):
    """Ratio bins do not align with histogram bins."""


class DegenerateLabels(IdiolensError):
    """Labeled data contains a single class; ROC is undefined."""


class MissingScore(IdiolensError):
    """A labeled term has no score."""

    def __init__(self, term: str):
        self.term = term
        super().__init__(f"no score for labeled term {term!r}")


class TermSetMismatch(IdiolensError):
    """Two annotators labeled different term sets."""


class TransportError(IdiolensError):
    """An embedding request failed after exhausting retries."""


class CountMismatch(IdiolensError):
    """An embedding response returned the wrong number of vectors."""
