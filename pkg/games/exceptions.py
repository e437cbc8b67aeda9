class GameError(Exception):
    """Erreur de base des jeux et stratégies."""


class DimensionMismatch(GameError):
    def __init__(self, message, expected=None, received=None):
        self.expected = expected
        self.received = received
        super().__init__(message)


class InvalidDimension(GameError):
    pass


class ValidationFailed(GameError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"Validation échouée : {report}")


class NonRealProbability(GameError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"Probabilité non réelle : {value!r}")


class UnsupportedAnswerAlphabet(GameError):
    pass


class CertificationFailed(GameError):
    pass
