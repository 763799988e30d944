"""Exception hierarchy shared by every module.

Each error carries a short machine-readable ``code`` that the CLI copies into
its diagnostics; input-type errors map to exit status 2.
"""


class AnticycError(Exception):
    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: repr(v) for k, v in self.details.items()}
        return out


class InputError(AnticycError, ValueError):
    code = "input_error"


class PreconditionFailed(InputError):
    code = "precondition_failed"


class NoRoot(AnticycError, ArithmeticError):
    code = "no_root"


class ResourceLimit(AnticycError):
    code = "resource_limit"


class NotPrincipal(AnticycError):
    code = "not_principal"


class NotPrincipalField(InputError):
    code = "not_principal_field"


class NotCoprime(InputError):
    code = "not_coprime"


class UnitIncompatible(InputError):
    code = "unit_incompatible"


class SelfDualityViolated(PreconditionFailed):
    code = "self_duality_violated"


class NotOrdinary(AnticycError):
    code = "not_ordinary"


class PoleError(AnticycError, ArithmeticError):
    code = "pole"
