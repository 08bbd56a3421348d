"""Exception hierarchy shared by every module."""


class GameError(ValueError):
    """Base class for validation and contract failures (CLI exit code 1)."""


class InvalidInput(GameError):
    """An argument is out of range or malformed."""


class ContractViolation(GameError):
    """A precondition or structural guarantee does not hold."""


class DegenerateInterpolation(GameError):
    """The mixed interpolation formula has a vanishing denominator."""


class SocialParamsError(GameError):
    """Social-game parameters violate one of the required inequalities."""

    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        msg = f"parameters violate {inequality}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
