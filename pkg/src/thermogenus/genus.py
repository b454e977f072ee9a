#!/usr/bin/env python3

"""
    Multiplicative sequences, genus evaluation and the signature index pairing.

    The product over formal roots prod_i Q(x_i) is symmetric; its degree-j part
    is rewritten in the basis of products of elementary symmetric functions
    (Pontryagin classes p_i = e_i(x^2), or Chern classes c_i = e_i(x)) by exact
    Gaussian elimination over the monomial symmetric basis. The resulting
    ClassPolynomials are paired with user-supplied characteristic numbers of a
    manifold to obtain genera and the index 2^l * ch(xi) * L(M)[M].
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from .errors import IncompleteSequence, InsufficientRoots, InvalidManifoldData, MissingCharacteristicNumber
from .genera import GenusKind, RootConvention, get_genus
from .series_core import DEFAULT_ORDER, PowerSeries, as_rational

lgr = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

_FACTOR_RE = re.compile(r"^([a-z]+)(\d+)(?:\^(\d+))?$")


# -- monomial naming --------------------------------------------------------

def monomial_key(symbol: str, monomial: Monomial) -> str:
    """Render a class monomial, e.g. ('p', (2, 1, 1)) -> 'p1^2*p2'; () -> '1'."""
    if not monomial:
        return "1"
    counts: Dict[int, int] = {}
    for index in monomial:
        counts[index] = counts.get(index, 0) + 1
    parts = []
    for index in sorted(counts):
        power = counts[index]
        parts.append(f"{symbol}{index}" if power == 1 else f"{symbol}{index}^{power}")
    return "*".join(parts)


def parse_factors(text: str) -> List[Tuple[str, int, int]]:
    """Parse 'p1^2*p2' (or 'p1^2 p2') into [(symbol, index, power), ...]."""
    text = str(text).strip()
    if text in ("", "1"):
        return []
    factors = []
    for token in re.split(r"[*\s]+", text):
        match = _FACTOR_RE.match(token)
        if not match:
            raise ValueError(f"Cannot parse characteristic monomial factor '{token}' in '{text}'")
        symbol, index, power = match.group(1), int(match.group(2)), int(match.group(3) or 1)
        factors.append((symbol, index, power))
    return factors


def canonical_monomial(text: str) -> str:
    """Normalize a monomial string so equal monomials compare equal."""
    merged: Dict[Tuple[str, int], int] = {}
    for symbol, index, power in parse_factors(text):
        merged[(symbol, index)] = merged.get((symbol, index), 0) + power
    if not merged:
        return "1"
    parts = []
    for (symbol, index) in sorted(merged):
        power = merged[(symbol, index)]
        parts.append(f"{symbol}{index}" if power == 1 else f"{symbol}{index}^{power}")
    return "*".join(parts)


# degree of each class variable in units of p1 (real degree 4)
CLASS_WEIGHTS: Dict[str, Fraction] = {"p": Fraction(1), "c": Fraction(1, 2), "ch": Fraction(1)}


def class_weight(symbol: str) -> Fraction:
    if symbol not in CLASS_WEIGHTS:
        raise ValueError(f"Unknown characteristic class symbol '{symbol}'. Known: {sorted(CLASS_WEIGHTS)}")
    return CLASS_WEIGHTS[symbol]


def weighted_degree(text: str) -> Fraction:
    """Degree of a monomial string in units of p1; c_i counts i/2."""
    return sum((index * power * class_weight(symbol) for symbol, index, power in parse_factors(text)), Fraction(0))


# -- class polynomials ------------------------------------------------------

@dataclass(frozen=True)
class ClassPolynomial:
    """
    Polynomial with rational coefficients in graded class variables.

    Monomials are tuples of class indices sorted in descending order, so
    p1^2 p2 is (2, 1, 1). Zero coefficients are dropped.
    """

    degree: int
    symbol: str
    terms: Dict[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for monomial, coeff in self.terms.items():
            monomial = tuple(sorted(monomial, reverse=True))
            if sum(monomial) != self.degree:
                raise ValueError(f"monomial {monomial} has weighted degree {sum(monomial)}, expected {self.degree}")
            coeff = as_rational(coeff)
            if coeff != 0:
                cleaned[monomial] = cleaned.get(monomial, Fraction(0)) + coeff
        object.__setattr__(self, "terms", {m: c for m, c in cleaned.items() if c != 0})

    @property
    def top_weight(self) -> Fraction:
        """Degree in units of p1."""
        return self.degree * class_weight(self.symbol)

    def coefficient(self, monomial: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(sorted(monomial, reverse=True)), Fraction(0))

    def evaluate(self, values: Mapping[int, Fraction]) -> Fraction:
        """Substitute class values (index -> value) and return the exact result."""
        total = Fraction(0)
        for monomial, coeff in self.terms.items():
            product = Fraction(coeff)
            for index in monomial:
                if index not in values:
                    raise MissingCharacteristicNumber(f"no value supplied for {self.symbol}{index}")
                product *= as_rational(values[index])
            total += product
        return total

    def __add__(self, other: "ClassPolynomial") -> "ClassPolynomial":
        if other.degree != self.degree or other.symbol != self.symbol:
            raise ValueError("can only add class polynomials of equal degree and symbol")
        terms = dict(self.terms)
        for monomial, coeff in other.terms.items():
            terms[monomial] = terms.get(monomial, Fraction(0)) + coeff
        return ClassPolynomial(self.degree, self.symbol, terms)

    def __mul__(self, other: "ClassPolynomial") -> "ClassPolynomial":
        if other.symbol != self.symbol:
            raise ValueError("can only multiply class polynomials in the same class variables")
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                monomial = tuple(sorted(m1 + m2, reverse=True))
                terms[monomial] = terms.get(monomial, Fraction(0)) + c1 * c2
        return ClassPolynomial(self.degree + other.degree, self.symbol, terms)

    def to_json(self) -> dict:
        """Serialize as {"degree": d, "terms": {"p1^2": "-1/45", ...}}."""
        return {
            "degree": self.degree,
            "terms": {monomial_key(self.symbol, m): str(c) for m, c in self.terms.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClassPolynomial":
        terms: Dict[Monomial, Fraction] = {}
        symbol = None
        for key, value in data.get("terms", {}).items():
            monomial: List[int] = []
            for sym, index, power in parse_factors(key):
                if symbol is None:
                    symbol = sym
                elif sym != symbol:
                    raise ValueError(f"mixed class symbols in polynomial: {symbol} and {sym}")
                monomial.extend([index] * power)
            terms[tuple(monomial)] = Fraction(str(value))
        return cls(int(data["degree"]), symbol or data.get("symbol", "p"), terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{monomial_key(self.symbol, m)}" for m, c in self.terms.items())


# -- symmetric function machinery -------------------------------------------

def partitions(n: int, max_part: Optional[int] = None) -> Iterator[Monomial]:
    """Partitions of n as descending tuples, in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _zero_one_matrices(rows: Monomial, cols: Monomial) -> int:
    """Count 0/1 matrices with the given row and column sums (rows sorted descending)."""
    if not cols:
        return 1 if not any(rows) else 0
    need, rest = cols[0], cols[1:]
    live = [i for i, r in enumerate(rows) if r > 0]
    total = 0
    for chosen in combinations(live, need):
        remaining = list(rows)
        for i in chosen:
            remaining[i] -= 1
        total += _zero_one_matrices(tuple(sorted(remaining, reverse=True)), rest)
    return total


def elementary_in_monomials(mu: Monomial, lam: Monomial) -> int:
    """Coefficient of the monomial t^lam in the product e_mu = prod_r e_{mu_r}."""
    if sum(mu) != sum(lam):
        return 0
    return _zero_one_matrices(tuple(sorted(mu, reverse=True)), tuple(lam))


def _solve_exact(matrix: List[List[int]], rhs: List[Fraction]) -> List[Fraction]:
    """Exact LU solve of the e -> m change of basis over sympy rationals."""
    system = sympy.Matrix(matrix)
    values = sympy.Matrix([sympy.Rational(b.numerator, b.denominator) for b in rhs])
    try:
        solution = system.LUsolve(values)
    except ValueError as e:
        raise InsufficientRoots(f"symmetric rewrite is singular; increase num_roots ({e})") from e
    return [Fraction(int(v.p), int(v.q)) for v in (sympy.Rational(entry) for entry in solution)]


def sequence_from_class_series(
    class_series: PowerSeries, max_degree: int, num_roots: int, symbol: str
) -> List[ClassPolynomial]:
    """
    Multiplicative sequence K_0..K_max_degree of a series q(t) in the class variable.

    The degree-j part of prod_{i<=num_roots} q(t_i) is sum_lam q_lam m_lam, with
    q_lam = prod q_{lam_i} and m_lam the monomial symmetric polynomial. Writing
    it as sum_mu a_mu e_mu gives the linear system sum_mu M[lam][mu] a_mu = q_lam.
    """
    if max_degree < 0:
        raise ValueError(f"max_degree must be non-negative, got {max_degree}")
    if num_roots < max_degree:
        raise InsufficientRoots(f"num_roots={num_roots} < max_degree={max_degree}; coefficients would not be stable")
    if class_series.order < max_degree:
        raise ValueError(f"class series of order {class_series.order} cannot reach degree {max_degree}")
    q = class_series.coeffs
    sequence = []
    for j in range(max_degree + 1):
        # monomials with at most num_roots parts; e_m vanishes for m > num_roots
        lams = [lam for lam in partitions(j) if len(lam) <= num_roots]
        mus = list(partitions(j, max_part=num_roots))
        matrix = [[elementary_in_monomials(mu, lam) for mu in mus] for lam in lams]
        rhs = []
        for lam in lams:
            value = Fraction(1)
            for part in lam:
                value *= q[part]
            rhs.append(value)
        solution = _solve_exact(matrix, rhs)
        sequence.append(ClassPolynomial(j, symbol, dict(zip(mus, solution))))
        lgr.debug(f"K_{j}: {len(mus)} basis monomials, {len(sequence[-1].terms)} non-zero terms")
    return sequence


def multiplicative_sequence(
    kind: Union[GenusKind, str], max_degree: int, num_roots: Optional[int] = None
) -> List[ClassPolynomial]:
    """
    Polynomials K_0..K_max_degree of the multiplicative sequence of a genus.

    Args:
        kind: genus kind; its root convention decides Pontryagin (p_i) or Chern (c_i) variables
        max_degree: highest degree (units of 4 for Pontryagin, 2 for Chern)
        num_roots: formal roots used in the expansion, default max_degree + 2

    Raises:
        InsufficientRoots: when num_roots < max_degree
    """
    genus = get_genus(kind)
    if num_roots is None:
        num_roots = max_degree + 2
    if num_roots < max_degree:
        raise InsufficientRoots(f"num_roots={num_roots} < max_degree={max_degree}; coefficients would not be stable")
    return sequence_from_class_series(
        genus.class_series(max_degree), max_degree, num_roots, genus.convention.symbol
    )


def convolve_sequences(a: Sequence[ClassPolynomial], b: Sequence[ClassPolynomial]) -> List[ClassPolynomial]:
    """Degree-wise product of two multiplicative sequences: C_j = sum_{i+k=j} A_i B_k."""
    top = min(len(a), len(b)) - 1
    out = []
    for j in range(top + 1):
        total = ClassPolynomial(j, a[0].symbol, {})
        for i in range(j + 1):
            total = total + a[i] * b[j - i]
        out.append(total)
    return out


# -- generating series and identities ---------------------------------------

def generating_series(kind: Union[GenusKind, str], order: int = DEFAULT_ORDER) -> PowerSeries:
    """Exact one-variable series of the generating function of kind."""
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    return get_genus(kind).build_series(order)


def genus_coefficient(kind: Union[GenusKind, str], k: int) -> Fraction:
    """Coefficient of x^k from the Bernoulli-number closed form."""
    return get_genus(kind).closed_form_coefficient(k)


def verify_LA_identity(order: int = DEFAULT_ORDER) -> PowerSeries:
    """Residual L(x) - A-hat(x) cosh(x/2); identically zero."""
    l_series = generating_series(GenusKind.L, order)
    a_series = generating_series(GenusKind.A_HAT, order)
    cosh_series = generating_series(GenusKind.COSH_HALF, order)
    return l_series - a_series * cosh_series


# -- manifolds and pairings -------------------------------------------------

@dataclass
class ManifoldClassData:
    """
    Characteristic data of a closed oriented manifold of dimension 2l.

    characteristic_numbers maps monomials ('p1', 'c1^2', 'ch1*p1', ...) to their
    pairing with the fundamental class. chern_character_numbers maps a degree d
    (same units as the genus degree) to the component of ch(xi): degree 0 is the
    rank, degree l is ch_l(xi)[M].
    """

    name: str
    l: int
    characteristic_numbers: Dict[str, Fraction] = field(default_factory=dict)
    chern_character_numbers: Optional[Dict[int, Fraction]] = None

    def __post_init__(self):
        if self.l < 0:
            raise InvalidManifoldData(f"l must be non-negative, got {self.l}")
        numbers = {}
        for key, value in self.characteristic_numbers.items():
            canon = canonical_monomial(key)
            if weighted_degree(canon) > self.l:
                raise InvalidManifoldData(f"monomial '{key}' has weighted degree above l={self.l}")
            numbers[canon] = as_rational(value)
        self.characteristic_numbers = numbers
        if self.chern_character_numbers is not None:
            self.chern_character_numbers = {
                int(d): as_rational(v) for d, v in self.chern_character_numbers.items()
            }

    def number(self, key: str) -> Fraction:
        canon = canonical_monomial(key)
        if canon not in self.characteristic_numbers:
            raise MissingCharacteristicNumber(f"{self.name}: no characteristic number supplied for '{canon}'")
        return self.characteristic_numbers[canon]

    @classmethod
    def from_json(cls, data: dict) -> "ManifoldClassData":
        ch = data.get("chern_character_numbers")
        return cls(
            name=data.get("name", "unnamed"),
            l=int(data["l"]),
            characteristic_numbers={k: Fraction(str(v)) for k, v in data.get("characteristic_numbers", {}).items()},
            chern_character_numbers=None if ch is None else {int(d): Fraction(str(v)) for d, v in ch.items()},
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ManifoldClassData":
        """
        Read manifold data from a JSON file.

        Raises:
            InvalidManifoldData: if the file is not valid JSON or the data is malformed
        """
        path = Path(path)
        try:
            with path.open("r") as f:
                data = json.load(f)
            manifold = cls.from_json(data)
        except InvalidManifoldData:
            raise
        except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as e:
            raise InvalidManifoldData(f"{path}: {type(e).__name__}: {e}") from e
        lgr.debug(f"Loaded manifold data '{manifold.name}' from {path}")
        return manifold

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "l": self.l,
            "characteristic_numbers": {k: str(v) for k, v in self.characteristic_numbers.items()},
        }
        if self.chern_character_numbers is not None:
            out["chern_character_numbers"] = {str(d): str(v) for d, v in sorted(self.chern_character_numbers.items())}
        return out


def pair_with_fundamental_class(poly: ClassPolynomial, data: ManifoldClassData, prefix: str = "") -> Fraction:
    """
    <poly, [M]>. A polynomial whose degree differs from the top degree pairs to 0.

    prefix is prepended to each monomial key, e.g. 'ch1*' for mixed pairings.
    """
    if poly.top_weight + weighted_degree(prefix.rstrip("*")) != data.l:
        return Fraction(0)
    total = Fraction(0)
    for monomial, coeff in poly.terms.items():
        total += coeff * data.number(prefix + monomial_key(poly.symbol, monomial))
    return total


def evaluate_genus(polys: Sequence[ClassPolynomial], data: ManifoldClassData) -> Fraction:
    """Pair the degree-l member of a multiplicative sequence with [M]."""
    top = next((p for p in polys if p.top_weight == data.l), None)
    if top is None:
        raise IncompleteSequence(f"sequence has no degree-{data.l} polynomial for {data.name}")
    return pair_with_fundamental_class(top, data)


def pontryagin_from_chern(chern_numbers: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    """
    Pontryagin number p1 = c1^2 - 2 c2 of an almost complex 4-manifold.

    Raises:
        MissingCharacteristicNumber: if c1^2 or c2 is absent
    """
    canon = {canonical_monomial(k): as_rational(v) for k, v in chern_numbers.items()}
    missing = [key for key in ("c1^2", "c2") if key not in canon]
    if missing:
        raise MissingCharacteristicNumber(f"pontryagin_from_chern needs {missing}")
    return {"p1": canon["c1^2"] - 2 * canon["c2"]}


def with_pontryagin_numbers(data: ManifoldClassData) -> ManifoldClassData:
    """Return data with p1 derived from Chern numbers when only the latter were supplied."""
    if "p1" in data.characteristic_numbers or data.l != 1:
        return data
    if not {"c1^2", "c2"} <= set(data.characteristic_numbers):
        return data
    numbers = dict(data.characteristic_numbers)
    numbers.update(pontryagin_from_chern(numbers))
    lgr.info(f"{data.name}: derived p1 = {numbers['p1']} from Chern numbers")
    return ManifoldClassData(data.name, data.l, numbers, data.chern_character_numbers)


def genus_value(kind: Union[GenusKind, str], data: ManifoldClassData, num_roots: Optional[int] = None) -> Fraction:
    """Genus of a manifold: multiplicative sequence through degree l paired with [M]."""
    genus = get_genus(kind)
    if genus.convention is RootConvention.PONTRYAGIN:
        data = with_pontryagin_numbers(data)
    degree = data.l if genus.convention is RootConvention.PONTRYAGIN else 2 * data.l
    return evaluate_genus(multiplicative_sequence(genus.kind, degree, num_roots), data)


def signature_index(
    data: ManifoldClassData,
    polys: Optional[Sequence[ClassPolynomial]] = None,
    two_power: Optional[int] = None,
) -> Fraction:
    """
    index A_xi = 2^l * (ch xi * L(M))[M].

    The degree-0 component of ch xi (the rank) multiplies L_l[M]; the degree-l
    component pairs with L_0 = 1; an intermediate component d needs the mixed
    numbers 'ch{d}*<monomial>' in characteristic_numbers.

    Args:
        data: manifold data; a missing Chern character means the trivial line bundle
        polys: L-sequence through degree l (computed when omitted)
        two_power: exponent of 2, default data.l. Pass the complex dimension
            instead when that reading of l is intended.
    """
    data = with_pontryagin_numbers(data)
    if polys is None:
        polys = multiplicative_sequence(GenusKind.L, data.l)
    ch = data.chern_character_numbers
    if ch is None:
        lgr.debug(f"{data.name}: no Chern character supplied, using the trivial line bundle")
        ch = {0: Fraction(1)}
    by_degree = {p.degree: p for p in polys}
    total = Fraction(0)
    for d, component in sorted(ch.items()):
        if d > data.l or component == 0 and d != 0:
            continue
        if d == 0:
            if component != 0:
                total += component * evaluate_genus(polys, data)
        elif d == data.l:
            total += component
        else:
            partner = by_degree.get(data.l - d)
            if partner is None:
                raise IncompleteSequence(f"sequence has no degree-{data.l - d} polynomial")
            total += pair_with_fundamental_class(partner, data, prefix=f"ch{d}*")
    power = data.l if two_power is None else two_power
    return Fraction(2) ** power * total


def flat_todd_check(degree: int) -> Dict[str, List[Fraction]]:
    """
    Todd class of flat factors with all Chern classes zero.

    Evaluates the Todd sequence on a flat factor and on the product of two flat
    factors (degree-wise convolution). Both must come out as [1, 0, 0, ...].
    """
    todd = multiplicative_sequence(GenusKind.TODD, degree)
    zeros = {i: Fraction(0) for i in range(1, degree + 1)}
    flat = [p.evaluate(zeros) for p in todd]
    product = [p.evaluate(zeros) for p in convolve_sequences(todd, todd)]
    return {"flat_factor": flat, "product": product}
