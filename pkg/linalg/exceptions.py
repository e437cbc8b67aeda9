class LinalgError(ValueError):
    """Erreur de base du module d'algèbre linéaire."""


class NonSquare(LinalgError):
    pass


class NotHermitian(LinalgError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"Matrice non hermitienne (résidu {residual:.3e})")


class NoConvergence(LinalgError):
    pass


class ShapeMismatch(LinalgError):
    pass


class EmptyKeepSet(LinalgError):
    pass


class NotAPermutation(LinalgError):
    pass
