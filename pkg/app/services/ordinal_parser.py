import lark
from lark.exceptions import UnexpectedInput, VisitError

from app.models.errors import MagnitudeError, OrdinalParseError
from app.models.ordinal import OMEGA, ZERO, Ordinal

# "w" and "*" also accept their typeset forms; "e0" is recognized only so it
# can be rejected as too large.
ORDINAL_GRAMMAR = r"""
?start: expr

expr: term ("+" term)*

?term: _OMEGA ("^" atom)? (_TIMES NAT)?   -> omega_term
     | NAT                                -> nat
     | "e0"                               -> epsilon

?atom: NAT                                -> nat
     | _OMEGA                             -> omega
     | "(" expr ")"

_OMEGA: "w" | "ω"
_TIMES: "*" | "·"
NAT: /\d+/

%import common.WS
%ignore WS
"""


class _OrdinalBuilder(lark.Transformer):
    def nat(self, children: list[lark.Token]) -> Ordinal:
        return Ordinal.of(int(children[0]))

    def omega(self, children: list) -> Ordinal:
        return OMEGA

    def epsilon(self, children: list) -> Ordinal:
        raise MagnitudeError("epsilon_0 and above are not representable")

    def omega_term(self, children: list) -> Ordinal:
        exponent = next((c for c in children if isinstance(c, Ordinal)), Ordinal.of(1))
        coefficient = next((int(c) for c in children if isinstance(c, lark.Token)), 1)
        return Ordinal.omega_power(exponent, coefficient)

    def expr(self, children: list[Ordinal]) -> Ordinal:
        total = ZERO
        for term in children:
            total = total + term
        return total


class OrdinalParser:
    """Parses ordinal expressions such as w^(w^2)*3+w*5+7."""

    def __init__(self) -> None:
        self._parser = lark.Lark(ORDINAL_GRAMMAR, parser="lalr", start="start")
        self._builder = _OrdinalBuilder()

    def parse(self, text: str) -> Ordinal:
        """
        Parse and normalize an expression to Cantor normal form.

        Raises:
            OrdinalParseError: text does not match the grammar
            MagnitudeError: text names epsilon_0
        """
        try:
            tree = self._parser.parse(text)
        except UnexpectedInput as exc:
            position = exc.pos_in_stream if exc.pos_in_stream is not None and exc.pos_in_stream >= 0 else len(text)
            raise OrdinalParseError(f"cannot parse {text!r}", position) from exc
        try:
            result = self._builder.transform(tree)
        except VisitError as exc:
            raise exc.orig_exc from None
        if isinstance(result, lark.Tree):
            raise OrdinalParseError(f"cannot parse {text!r}", 0)
        return result

    def format(self, value: Ordinal) -> str:
        return str(value)


ordinal_parser = OrdinalParser()
