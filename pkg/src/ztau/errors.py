"""Exception hierarchy. Every error carries a stable machine-readable code."""


class ZtauError(Exception):
    """Base class; ``code`` is the machine-readable identifier used by the CLI."""

    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class ParseError(ZtauError):
    code = "parse_error"


class NonPositiveRational(ZtauError):
    code = "non_positive_rational"


class FactorizationLimit(ZtauError):
    code = "factorization_limit"


class TermBudgetExceeded(ZtauError):
    code = "term_budget_exceeded"


class NotRealSymmetric(ZtauError):
    code = "not_real_symmetric"


class DimensionTooLarge(ZtauError):
    code = "dimension_too_large"


class WeightNearZero(ZtauError):
    code = "weight_near_zero"


class NotAnalytic(ZtauError):
    code = "not_analytic"


class DuplicateIndices(ZtauError):
    code = "duplicate_indices"


class ToleranceUnachievable(ZtauError):
    code = "tolerance_unachievable"


class NotOuter(ZtauError):
    code = "not_outer"


class SupportConditionViolated(ZtauError):
    code = "support_condition_violated"
