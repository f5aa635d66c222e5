"""Exception hierarchy shared by every module.

Each error carries a short machine-readable ``code`` so that the batch
front end can embed it in reports without string matching.
"""


class IndFlagError(Exception):
    """Base class for all library errors."""

    code = "error"


class InvalidAddress(IndFlagError):
    code = "invalid_address"


class NotOrdered(IndFlagError):
    code = "not_ordered"


class EqualAddresses(IndFlagError):
    code = "equal_addresses"


class FixedPointArgument(IndFlagError):
    code = "fixed_point_argument"


class CarrierMismatch(IndFlagError):
    code = "carrier_mismatch"


class NotEquivariant(IndFlagError):
    code = "not_equivariant"


class SupportExceedsTruncation(IndFlagError):
    code = "support_exceeds_truncation"


class InvalidRule(IndFlagError):
    code = "invalid_rule"


class UnsupportedRuleCombination(IndFlagError):
    code = "unsupported_rule_combination"


class OrbitMismatch(IndFlagError):
    code = "orbit_mismatch"


class SizeMismatch(IndFlagError):
    code = "size_mismatch"


class TrivialParabolic(IndFlagError):
    code = "trivial_parabolic"


class NotTwoElements(IndFlagError):
    code = "not_two_elements"


class UnsupportedFamily(IndFlagError):
    code = "unsupported_family"


class CapExceeded(IndFlagError):
    code = "cap_exceeded"


class NotMember(IndFlagError):
    code = "not_member"


class DegenerateFlag(IndFlagError):
    code = "degenerate_flag"


class NotNested(IndFlagError):
    code = "not_nested"


class UnsupportedType(IndFlagError):
    code = "unsupported_type"


class SchemaError(IndFlagError):
    """A JSON document does not match the expected shape.

    ``path`` is the JSON path of the offending node, e.g. ``$.carrier.blocks[1]``.
    """

    code = "schema_error"

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
