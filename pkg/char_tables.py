"""
Character tables of the finite Hecke algebras of types A2 and C2 on their cocenter bases.

Each irreducible module is an explicit matrix model of the generators T_1, T_2. It satisfies
(T_s + 1)(T_s - c(s)) = 0 and the braid relation of the type. Rows are the basis T_O of minimal
length classes, by decreasing length. Columns are the modules in the order listed below.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from sympy import Expr, Matrix, Poly, QQ, Symbol, eye, sympify, zeros
from sympy.core.sympify import SympifyError
from sympy.polys.agca.extensions import FiniteExtension
from sympy.polys.matrices import DomainMatrix

from colors import Colors
from errors import ConsistencyError, DomainError
from polynomials import MPoly

logger = logging.getLogger(__name__)

q, q1, q2 = Symbol("q"), Symbol("q1"), Symbol("q2")


@dataclass(frozen=True)
class HeckeModel:
    """Generator matrices of one irreducible module."""
    name: str
    generators: tuple[Matrix, ...]

    def image(self, word: tuple[int, ...]) -> Matrix:
        size = self.generators[0].shape[0]
        result = eye(size)
        for s in word:
            result = result * self.generators[s - 1]
        return result.expand()


@dataclass(frozen=True)
class CharTable:
    label: str
    gens: tuple[Symbol, ...]
    parameters: tuple[Expr, ...]
    braid_order: int
    row_words: tuple[tuple[int, ...], ...]
    modules: tuple[HeckeModel, ...]
    entries: tuple[tuple[MPoly, ...], ...]

    @property
    def row_labels(self) -> list[str]:
        return ["T_{" + "".join(f"s{s}" for s in word) + "}" if word else "1" for word in self.row_words]

    @property
    def column_labels(self) -> list[str]:
        return [module.name for module in self.modules]

    def matrix(self) -> Matrix:
        return Matrix([[entry.as_expr() for entry in row] for row in self.entries])


def _one_dimensional(name: str, images) -> HeckeModel:
    return HeckeModel(name, tuple(Matrix([[image]]) for image in images))


def _a2(c: Expr) -> tuple[tuple[HeckeModel, ...], tuple[tuple[int, ...], ...], int]:
    modules = (
        _one_dimensional("triv", (c, c)),
        _one_dimensional("St", (-1, -1)),
        HeckeModel("pi", (Matrix([[-1, 1], [0, c]]), Matrix([[c, 0], [c, -1]]))),
    )
    return modules, ((1, 2), (1,), ()), 3


def _c2(c1: Expr, c2: Expr) -> tuple[tuple[HeckeModel, ...], tuple[tuple[int, ...], ...], int]:
    modules = (
        _one_dimensional("2x0", (c1, c2)),
        _one_dimensional("11x0", (-1, c2)),
        _one_dimensional("0x2", (c1, -1)),
        _one_dimensional("0x11", (-1, -1)),
        HeckeModel("1x1", (Matrix([[-1, 1], [0, c1]]), Matrix([[c2, 0], [c1 + c2, -1]]))),
    )
    return modules, ((1, 2, 1, 2), (1, 2), (1,), (2,), ()), 4


def _parse_value(name: str, raw) -> Expr:
    try:
        return sympify(str(raw))
    except SympifyError:
        raise DomainError(f"cannot read the value '{raw}' of parameter {name}")


def finite_char_table(label: str, params: Mapping[str, object] | None = None, equal_parameters: bool = False) -> CharTable:
    """
    params specializes parameters by name (q for A2, q1 and q2 for C2); specialized values must be nonzero.
    equal_parameters sets q1 = q2 = q for C2.
    """
    label = label.upper()
    if label == "A2":
        gens = (q,)
    elif label in ("C2", "B2"):
        label = "C2"
        gens = (q,) if equal_parameters else (q1, q2)
    else:
        raise DomainError(f"no character table for '{label}': supported are A2 and C2")
    values: dict[Symbol, Expr] = {}
    for name, raw in (params or {}).items():
        symbol = next((g for g in gens if str(g) == name), None)
        if symbol is None:
            raise DomainError(f"{label} has no parameter '{name}' (parameters: {', '.join(str(g) for g in gens)})")
        value = _parse_value(name, raw)
        if value.free_symbols:
            raise DomainError(f"parameter {name} must be specialized to a number, got {value}")
        if value == 0:
            raise DomainError(f"parameter {name} = 0 makes the Hecke algebra degenerate: use the 0-Hecke basis")
        values[symbol] = value
    parameters = tuple(values.get(g, g) for g in gens)
    if label == "A2":
        modules, row_words, braid_order = _a2(parameters[0])
    elif equal_parameters:
        modules, row_words, braid_order = _c2(parameters[0], parameters[0])
    else:
        modules, row_words, braid_order = _c2(*parameters)
    entries = tuple(tuple(MPoly(module.image(word).trace(), gens) for module in modules) for word in row_words)
    logger.debug(f"Built the {Colors.BRIGHT_CYAN}{label}{Colors.END} character table with parameters {parameters}")
    return CharTable(label, gens, parameters, braid_order, row_words, modules, entries)


def verify_relations(table: CharTable) -> bool:
    for module in table.modules:
        size = module.generators[0].shape[0]
        for generator, c in zip(module.generators, _parameters_per_generator(table)):
            quadratic = ((generator + eye(size)) * (generator - c * eye(size))).expand()
            if quadratic != zeros(size, size):
                logger.error(f"{Colors.BRIGHT_RED}quadratic relation fails in module {module.name}{Colors.END}")
                return False
        left = tuple((1, 2) * (table.braid_order // 2) + ((1,) if table.braid_order % 2 else ()))
        right = tuple((2, 1) * (table.braid_order // 2) + ((2,) if table.braid_order % 2 else ()))
        if (module.image(left) - module.image(right)).expand() != zeros(size, size):
            logger.error(f"{Colors.BRIGHT_RED}braid relation fails in module {module.name}{Colors.END}")
            return False
    return True


def _parameters_per_generator(table: CharTable) -> tuple[Expr, Expr]:
    if len(table.parameters) == 1:
        return table.parameters[0], table.parameters[0]
    return table.parameters[0], table.parameters[1]


def char_table_det(table: CharTable) -> MPoly:
    """Determinant with rows and columns in table order."""
    if len(table.row_words) != len(table.modules):
        raise ConsistencyError(f"{table.label} table is not square")
    return MPoly(table.matrix().det().expand(), table.gens)


def trace_kernel_at(table: CharTable, specialization: Mapping[str, object]) -> list[tuple[Expr, ...]]:
    """
    Cocenter coordinates c with sum_r c_r * row_r = 0 after specialization.

    A value is a number, or an irreducible polynomial in the parameter itself, meaning that the
    parameter is a root of it; coordinates are then reduced modulo that polynomial.
    """
    gens = {str(g): g for g in table.gens}
    values: dict[Symbol, Expr] = {}
    modulus: Poly | None = None
    for name, raw in specialization.items():
        symbol = gens.get(name)
        if symbol is None:
            raise DomainError(f"{table.label} has no parameter '{name}'")
        try:
            value = sympify(str(raw), locals={name: symbol})
        except SympifyError:
            raise DomainError(f"cannot read the specialization {name} = {raw}")
        if value.free_symbols - {symbol}:
            raise DomainError(f"the specialization of {name} may only mention {name}")
        if symbol in value.free_symbols:
            if modulus is not None:
                raise DomainError("at most one parameter can be specialized to a root of a polynomial")
            modulus = Poly(value, symbol, domain=QQ)
            if modulus.degree() < 1 or not modulus.is_irreducible:
                raise DomainError(f"{value} is not irreducible over Q")
            if modulus.eval(0) == 0:
                raise DomainError(f"{name} = 0 is a root of {value}: parameters must be nonzero")
        else:
            if value == 0:
                raise DomainError(f"parameter {name} must be nonzero")
            values[symbol] = value
    missing = [str(g) for g in table.gens if g not in values and (modulus is None or g != modulus.gen)]
    if missing:
        raise DomainError(f"parameters {', '.join(missing)} are not specialized")
    specialized = table.matrix().subs(values)
    if modulus is None:
        return [tuple(v) for v in specialized.T.nullspace()]
    return _nullspace_mod(specialized.T.tolist(), modulus)


def _nullspace_mod(rows: list[list[Expr]], modulus: Poly) -> list[tuple[Expr, ...]]:
    """Kernel over the field Q[x]/(modulus)."""
    field = FiniteExtension(modulus)
    matrix = DomainMatrix([[field.from_sympy(e) for e in row] for row in rows], (len(rows), len(rows[0])), field)
    reduced, pivots = matrix.rref(method="GJ")
    kernel = reduced.nullspace_from_rref(pivots)
    return [tuple(field.to_sympy(e) for e in row) for row in kernel.to_list()]


def specialize_all(table: CharTable, value: int | Fraction = 1) -> CharTable:
    return finite_char_table(table.label, {str(g): value for g in table.gens}, equal_parameters=len(table.gens) == 1 and table.label == "C2")
