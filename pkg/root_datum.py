"""
Based root data, their finite Weyl groups and the presets the command line knows about.

Coordinates: cocharacters (X_*) are integer column vectors in a chosen lattice basis, characters
(X^*) are row vectors in the dual basis, so the pairing is the plain dot product. A `LatticeFrame`
translates between the internal basis and the coordinates users type and read (ambient Z^n for
GL_n and SL_n, the last-coordinate-0 normal form for PGL_n).
"""
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
from sympy import Matrix, Rational

from colors import Colors
from errors import DomainError
from lattice_forms import LatticeQuotient

Vector = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]

ROOT_CLOSURE_CAP = 2000


def pair(alpha: Sequence, x: Sequence):
    return sum(a * b for a, b in zip(alpha, x))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def mat_vec(m: IntMatrix, v: Sequence) -> tuple:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in m)


def vec_mat(v: Sequence, m: IntMatrix) -> tuple:
    n = len(m)
    return tuple(sum(v[k] * m[k][j] for k in range(n)) for j in range(n))


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def to_rational(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class FiniteWeylElt:
    """An element of W_0. Equality is by index inside its group; `matrix` acts on X_*."""
    index: int
    matrix: IntMatrix = field(compare=False, repr=False)


class FiniteWeylGroup:
    """W_0 enumerated once by breadth-first search over right multiplication by simple reflections."""

    def __init__(self, rank: int, simple_roots: Sequence[Vector], simple_coroots: Sequence[Vector]):
        self.logger = logging.getLogger(__class__.__qualname__)
        self.rank = rank
        self.simple_count = len(simple_roots)
        self._by_matrix: dict[IntMatrix, FiniteWeylElt] = {}
        self.elements: list[FiniteWeylElt] = []
        self._words: list[tuple[int, ...]] = []
        self._mul_cache: dict[tuple[int, int], FiniteWeylElt] = {}

        self.generators: list[IntMatrix] = []
        for root, coroot in zip(simple_roots, simple_coroots):
            self.generators.append(tuple(
                tuple((1 if a == b else 0) - coroot[a] * root[b] for b in range(rank)) for a in range(rank)))

        self.identity = self._register(identity_matrix(rank), ())
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for i, s in enumerate(self.generators, start=1):
                m = mat_mul(g.matrix, s)
                if m not in self._by_matrix:
                    h = self._register(m, self._words[g.index] + (i,))
                    queue.append(h)
        self._inverse = [self._by_matrix[self._invert(e)] for e in self.elements]
        self.longest = max(self.elements, key=lambda e: len(self._words[e.index]))
        self.logger.debug(f"Enumerated W_0 with {Colors.BRIGHT_CYAN}{len(self.elements)}{Colors.END} elements")

    def _register(self, matrix: IntMatrix, word: tuple[int, ...]) -> FiniteWeylElt:
        element = FiniteWeylElt(len(self.elements), matrix)
        self.elements.append(element)
        self._words.append(word)
        self._by_matrix[matrix] = element
        return element

    def _invert(self, element: FiniteWeylElt) -> IntMatrix:
        m = self.identity.matrix
        for i in reversed(self._words[element.index]):
            m = mat_mul(m, self.generators[i - 1])
        return m

    def __len__(self):
        return len(self.elements)

    def simple(self, i: int) -> FiniteWeylElt:
        return self._by_matrix[self.generators[i - 1]]

    def element_of(self, matrix: IntMatrix) -> FiniteWeylElt:
        try:
            return self._by_matrix[matrix]
        except KeyError:
            raise DomainError(f"matrix {matrix} is not an element of W_0")

    def from_word(self, word: Iterable[int]) -> FiniteWeylElt:
        result = self.identity
        for i in word:
            if not 1 <= i <= self.simple_count:
                raise DomainError(f"simple reflection index {i} out of range 1..{self.simple_count}")
            result = self.mul(result, self.simple(i))
        return result

    def mul(self, a: FiniteWeylElt, b: FiniteWeylElt) -> FiniteWeylElt:
        key = (a.index, b.index)
        cached = self._mul_cache.get(key)
        if cached is None:
            cached = self._by_matrix[mat_mul(a.matrix, b.matrix)]
            self._mul_cache[key] = cached
        return cached

    def inverse(self, a: FiniteWeylElt) -> FiniteWeylElt:
        return self._inverse[a.index]

    def length(self, a: FiniteWeylElt) -> int:
        return len(self._words[a.index])

    def word(self, a: FiniteWeylElt) -> tuple[int, ...]:
        return self._words[a.index]

    def act(self, a: FiniteWeylElt, x: Sequence) -> tuple:
        return mat_vec(a.matrix, x)

    def act_root(self, a: FiniteWeylElt, alpha: Sequence) -> tuple:
        """a(alpha) for a character alpha, i.e. alpha composed with a^-1."""
        return vec_mat(alpha, self._inverse[a.index].matrix)

    def parabolic(self, indices: Iterable[int]) -> list[FiniteWeylElt]:
        indices = sorted(set(indices))
        seen = {self.identity}
        order = [self.identity]
        queue = deque(order)
        while queue:
            g = queue.popleft()
            for i in indices:
                h = self.mul(g, self.simple(i))
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    queue.append(h)
        return order

    def longest_in(self, indices: Iterable[int]) -> FiniteWeylElt:
        return max(self.parabolic(indices), key=self.length)


@dataclass(frozen=True)
class LatticeFrame:
    """Translation between internal X_* coordinates and display coordinates."""
    kind: str
    n: int

    def to_display(self, v: Sequence) -> tuple:
        if self.kind == "sl":
            return tuple((v[k] if k < self.n - 1 else 0) - (v[k - 1] if k > 0 else 0) for k in range(self.n))
        if self.kind == "pgl":
            return tuple(v) + (0,)
        return tuple(v)

    def from_display(self, v: Sequence) -> tuple:
        if self.kind == "identity":
            if len(v) != self.n:
                raise DomainError(f"expected {self.n} coordinates, got {len(v)}")
            return tuple(v)
        if len(v) != self.n:
            raise DomainError(f"expected {self.n} coordinates, got {len(v)}")
        if self.kind == "sl":
            if sum(v) != 0:
                raise DomainError(f"{tuple(v)} is not a cocharacter of SL_{self.n}: coordinates must sum to 0")
            partial, out = 0, []
            for x in v[:-1]:
                partial += x
                out.append(partial)
            return tuple(out)
        if self.kind == "pgl":
            last = v[-1]
            return tuple(x - last for x in v[:-1])
        raise DomainError(f"unknown lattice frame {self.kind}")


class RootDatum:
    """A reduced based root datum together with all derived finite data."""

    def __init__(self, name: str, rank: int, simple_roots: Sequence[Sequence[int]],
                 simple_coroots: Sequence[Sequence[int]], frame: LatticeFrame | None = None):
        self.logger = logging.getLogger(__class__.__qualname__)
        self.name = name
        self.rank = rank
        self.simple_roots: list[Vector] = [tuple(a) for a in simple_roots]
        self.simple_coroots: list[Vector] = [tuple(a) for a in simple_coroots]
        self.frame = frame or LatticeFrame("identity", rank)
        self.semisimple_rank = len(self.simple_roots)
        if self.semisimple_rank == 0:
            raise DomainError(f"{name}: a root datum needs at least one simple root")
        for v in self.simple_roots + self.simple_coroots:
            if len(v) != rank:
                raise DomainError(f"{name}: vector {v} does not have {rank} coordinates")

        self.cartan = [[pair(self.simple_roots[j], self.simple_coroots[i]) for j in range(self.semisimple_rank)]
                       for i in range(self.semisimple_rank)]
        self._validate_cartan()
        self._generate_roots()
        self.two_rho: Vector = tuple(sum(alpha[k] for alpha in self.positive_roots) for k in range(rank))
        for i, coroot in enumerate(self.simple_coroots, start=1):
            if pair(self.two_rho, coroot) != 2:
                raise DomainError(f"{name}: <2rho, alpha_{i}^vee> = {pair(self.two_rho, coroot)}, not of finite type")
        self._find_components()
        self.weyl = FiniteWeylGroup(rank, self.simple_roots, self.simple_coroots)
        self.coroot_lattice = LatticeQuotient(self.simple_coroots, rank)
        self.logger.debug(f"Built root datum {Colors.BRIGHT_CYAN}{name}{Colors.END}: "
                          f"{len(self.positive_roots)} positive roots, |W_0| = {len(self.weyl)}")

    def _validate_cartan(self):
        a = self.cartan
        for i in range(self.semisimple_rank):
            if a[i][i] != 2:
                raise DomainError(f"{self.name}: Cartan diagonal entry ({i + 1},{i + 1}) is {a[i][i]}, expected 2")
            for j in range(self.semisimple_rank):
                if i != j and a[i][j] > 0:
                    raise DomainError(f"{self.name}: Cartan entry ({i + 1},{j + 1}) is positive")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise DomainError(f"{self.name}: Cartan zero pattern is not symmetric at ({i + 1},{j + 1})")

    def _generate_roots(self):
        r = self.semisimple_rank
        start = []
        for i in range(r):
            coefficients = tuple(1 if k == i else 0 for k in range(r))
            start.append((coefficients, self.simple_roots[i], self.simple_coroots[i]))
        seen = {s[0]: s for s in start}
        queue = deque(start)
        while queue:
            coefficients, root, coroot = queue.popleft()
            for i in range(r):
                c = pair(root, self.simple_coroots[i])
                new_coefficients = tuple(x - (c if k == i else 0) for k, x in enumerate(coefficients))
                if new_coefficients in seen:
                    continue
                new_root = tuple(x - c * y for x, y in zip(root, self.simple_roots[i]))
                d = pair(self.simple_roots[i], coroot)
                new_coroot = tuple(x - d * y for x, y in zip(coroot, self.simple_coroots[i]))
                entry = (new_coefficients, new_root, new_coroot)
                seen[new_coefficients] = entry
                queue.append(entry)
                if len(seen) > ROOT_CLOSURE_CAP:
                    raise DomainError(f"{self.name}: root system is infinite (Cartan matrix not of finite type)")
        positives = sorted((e for e in seen.values() if all(x >= 0 for x in e[0])),
                           key=lambda e: (sum(e[0]), e[0]))
        if 2 * len(positives) != len(seen):
            raise DomainError(f"{self.name}: roots are not split into positive and negative ones")
        self.positive_roots: list[Vector] = [e[1] for e in positives]
        self.roots: list[Vector] = self.positive_roots + [tuple(-x for x in a) for a in self.positive_roots]
        self.coroot_of: dict[Vector, Vector] = {}
        self.coefficients_of: dict[Vector, tuple[int, ...]] = {}
        for coefficients, root, coroot in seen.values():
            self.coroot_of[root] = coroot
            self.coefficients_of[root] = coefficients
        self._positive_set = set(self.positive_roots)

    def _find_components(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.semisimple_rank + 1))
        for i in range(self.semisimple_rank):
            for j in range(i + 1, self.semisimple_rank):
                if self.cartan[i][j] != 0:
                    graph.add_edge(i + 1, j + 1)
        self.components: list[list[int]] = sorted((sorted(c) for c in nx.connected_components(graph)),
                                                  key=lambda c: c[0])
        self.highest_roots: list[Vector] = []
        for component in self.components:
            support = set(component)
            candidates = [a for a in self.positive_roots
                          if all(c == 0 or (k + 1) in support for k, c in enumerate(self.coefficients_of[a]))]
            self.highest_roots.append(max(candidates, key=self.height))

    def is_positive(self, alpha: Sequence[int]) -> bool:
        return tuple(alpha) in self._positive_set

    def is_root(self, alpha: Sequence[int]) -> bool:
        return tuple(alpha) in self.coroot_of

    def height(self, alpha: Vector) -> int:
        return sum(self.coefficients_of[alpha])

    def max_height(self) -> int:
        return max(self.height(a) for a in self.positive_roots)

    def component_of(self, alpha: Vector) -> int:
        coefficients = self.coefficients_of[tuple(alpha)]
        first = next(k for k, c in enumerate(coefficients) if c != 0) + 1
        return next(c for c, members in enumerate(self.components) if first in members)

    def support(self, alpha: Vector) -> frozenset[int]:
        return frozenset(k + 1 for k, c in enumerate(self.coefficients_of[tuple(alpha)]) if c != 0)

    def is_dominant(self, x: Sequence) -> bool:
        return all(pair(alpha, x) >= 0 for alpha in self.simple_roots)

    def rho_pairing(self, x: Sequence) -> Fraction:
        """<rho, x> for a rational cocharacter."""
        return Fraction(pair(self.two_rho, to_rational(x))) / 2

    def coroot_span_coefficients(self, x: Sequence) -> list[Fraction] | None:
        """Coefficients c with x = sum c_i alpha_i^vee, or None when x is outside the span."""
        coroots = Matrix([[Rational(self.simple_coroots[i][k]) for i in range(self.semisimple_rank)]
                          for k in range(self.rank)])
        target = Matrix([Rational(Fraction(v).numerator, Fraction(v).denominator) for v in x])
        try:
            solution, params = coroots.gauss_jordan_solve(target)
        except ValueError:
            return None
        if params.shape[0]:
            solution = solution.subs({p: 0 for p in params})
        return [Fraction(int(c.p), int(c.q)) for c in solution]

    def describe_omega(self) -> str:
        return self.coroot_lattice.describe()

    def __repr__(self):
        return f"RootDatum({self.name})"


def dominant_representative(datum: RootDatum, x: Sequence) -> tuple[tuple, FiniteWeylElt]:
    """The dominant W_0-translate of x and the element u with u(x) dominant.

    The element is built from the applied reflections in reverse order of application.
    """
    v = tuple(x)
    applied: list[int] = []
    while True:
        bad = next((i for i, alpha in enumerate(datum.simple_roots, start=1) if pair(alpha, v) < 0), None)
        if bad is None:
            break
        alpha, coroot = datum.simple_roots[bad - 1], datum.simple_coroots[bad - 1]
        c = pair(alpha, v)
        v = tuple(a - c * b for a, b in zip(v, coroot))
        applied.append(bad)
    element = datum.weyl.from_word(reversed(applied))
    return v, element


def dominance_leq(datum: RootDatum, nu: Sequence, nu_prime: Sequence) -> bool:
    """nu <= nu' in the dominance order: nu' - nu is a non-negative rational sum of simple coroots."""
    for v in (nu, nu_prime):
        if not datum.is_dominant(v):
            raise DomainError(f"{tuple(format_rational(c) for c in v)} is not dominant")
    difference = [Fraction(b) - Fraction(a) for a, b in zip(nu, nu_prime)]
    coefficients = datum.coroot_span_coefficients(difference)
    return coefficients is not None and all(c >= 0 for c in coefficients)


def _cartan_type(letter: str, n: int) -> list[list[int]]:
    a = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    if letter == "A":
        return a
    if letter == "B" and n >= 2:
        a[n - 1][n - 2] = -2
        return a
    if letter == "C" and n >= 2:
        a[n - 2][n - 1] = -2
        return a
    if letter == "D" and n >= 4:
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    if letter == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise DomainError(f"unsupported Cartan type {letter}{n}")


def from_cartan(name: str, cartan: Sequence[Sequence[int]], lattice: str | Sequence[Sequence[int]] = "sc") -> RootDatum:
    """Root datum with given Cartan matrix.

    `lattice` is "sc" (X_* = coroot lattice), "ad" (X_* = coweight lattice) or an integer matrix whose
    rows are a basis of X_* in fundamental-coweight coordinates. Entry (i, j) of the Cartan matrix is
    <alpha_j, alpha_i^vee>.
    """
    r = len(cartan)
    if any(len(row) != r for row in cartan):
        raise DomainError(f"{name}: Cartan matrix must be square")
    if lattice == "sc":
        basis = [list(row) for row in cartan]
    elif lattice == "ad":
        basis = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    elif isinstance(lattice, str):
        raise DomainError(f"{name}: unknown lattice '{lattice}', expected sc, ad or a matrix")
    else:
        basis = [list(row) for row in lattice]
    l_matrix = Matrix(basis)
    if l_matrix.shape != (r, r) or l_matrix.det() == 0:
        raise DomainError(f"{name}: lattice basis must be an invertible {r}x{r} matrix")
    inverse = l_matrix.inv()
    simple_roots = [tuple(int(basis[k][j]) for k in range(r)) for j in range(r)]
    simple_coroots = []
    for i in range(r):
        row = Matrix([list(cartan[i])]) * inverse
        if any(not c.is_integer for c in row):
            raise DomainError(f"{name}: coroot alpha_{i + 1}^vee is not integral in the given lattice")
        simple_coroots.append(tuple(int(c) for c in row))
    return RootDatum(name, r, simple_roots, simple_coroots)


def _gl(n: int) -> RootDatum:
    roots = [tuple(1 if k == i else (-1 if k == i + 1 else 0) for k in range(n)) for i in range(n - 1)]
    return RootDatum(f"GL{n}", n, roots, roots, LatticeFrame("identity", n))


def _sl(n: int) -> RootDatum:
    cartan = _cartan_type("A", n - 1)
    datum = from_cartan(f"SL{n}", cartan, "sc")
    datum.frame = LatticeFrame("sl", n)
    return datum


def _pgl(n: int) -> RootDatum:
    m = n - 1
    roots, coroots = [], []
    for i in range(m):
        roots.append(tuple(1 if k == i else (-1 if k == i + 1 else 0) for k in range(m)))
        if i < m - 1:
            coroots.append(roots[-1])
        else:
            coroots.append(tuple(2 if k == i else 1 for k in range(m)))
    return RootDatum(f"PGL{n}", m, roots, coroots, LatticeFrame("pgl", n))


def _ambient_rank_two(name: str, short_coroot_scale: int) -> RootDatum:
    roots = [(1, -1), (0, 2 // short_coroot_scale)]
    coroots = [(1, -1), (0, short_coroot_scale)]
    return RootDatum(name, 2, roots, coroots, LatticeFrame("identity", 2))


PRESET_PATTERN = re.compile(r"^(GL|SL|PGL)(\d+)$|^(Sp4|SO5|A1|B2|C2|G2)$")


def preset(name: str) -> RootDatum:
    """Root datum for a preset name: GLn, SLn, PGLn, Sp4 (= C2), SO5 (= B2), A1 (= SL2), G2."""
    match = PRESET_PATTERN.match(name.strip())
    if not match:
        raise DomainError(f"unknown group preset '{name}'")
    if match.group(1):
        n = int(match.group(2))
        if n < 2:
            raise DomainError(f"{name}: need n >= 2")
        return {"GL": _gl, "SL": _sl, "PGL": _pgl}[match.group(1)](n)
    special = match.group(3)
    if special == "A1":
        return _sl(2)
    if special in ("Sp4", "C2"):
        return _ambient_rank_two(special, 1)
    if special in ("SO5", "B2"):
        return _ambient_rank_two(special, 2)
    return from_cartan("G2", _cartan_type("G", 2), "sc")
