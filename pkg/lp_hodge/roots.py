"""Root systems, maximal-root weight profiles and symmetric-space thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from itertools import combinations, product
import logging
import math
import re

from .const import (
    EXCEPTIONAL_RANKS,
    GROMOV_TABLE_RANKS,
    GROMOV_TABLE_RESTRICTED_RANK,
    MIN_RANK,
    P_TWO,
    RESTRICTED_CN_MULTIPLICITIES,
    ROOT_TYPES,
    SPLIT_N1_FORMULA,
    VERDICT_NOT_COVERED,
    VERDICT_P2_RULE,
    VERDICT_VANISHES_REDUCED,
    VERDICT_VANISHES_TORSION,
)
from .exceptions import FrameError, RootSystemError
from .exterior import Frame, weight_extremes
from .utils import check_exponent

_LOGGER = logging.getLogger(__name__)

_GROUP_PATTERN = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")

Vector = tuple[Fraction, ...]
Threshold = Fraction | float

INF = math.inf

# Closed forms printed next to the computed values in the Gromov table
_N1_CLOSED_FORM = {"A": "2n-2", "B": "4n-6", "C": "2n-2", "D": "4n-8", "G": "4", "F": "14"}
_E_N1_CLOSED_FORM = {6: "20", 7: "32", 8: "56"}
_RESTRICTED_N1_CLOSED_FORM = {1: "4n-4", 2: "8n-8", 3: "8n-8", 4: "16n-16"}


@dataclass(frozen=True)
class RootDatum:
    """Positive (restricted) roots with multiplicities and the maximal root."""

    type_label: str
    rank: int
    positive_roots: tuple[Vector, ...]
    multiplicities: tuple[int, ...]
    doubled: tuple[int, ...]
    maximal_root: Vector
    restricted_case: int | None = None

    @property
    def label(self) -> str:
        """Return label like 'E8' or 'C3/restricted-2'."""

        base = f"{self.type_label}{self.rank}"
        return base if self.restricted_case is None else f"{base}/restricted-{self.restricted_case}"

    @property
    def is_split(self) -> bool:
        """Return whether all multiplicities are 1 and no root is doubled."""

        return self.restricted_case is None and set(self.multiplicities) == {1} and not any(self.doubled)

    @property
    def maximal_root_index(self) -> int:
        """Return Iwasawa frame index of the first direction of the maximal root."""

        position = self.positive_roots.index(self.maximal_root)
        return sum(self.multiplicities[:position]) + sum(self.doubled[:position])

    def root_weights(self) -> tuple[int, ...]:
        """Return 2<β,μ>/<μ,μ> for every positive root."""

        return tuple(_weight(root, self.maximal_root) for root in self.positive_roots)

    def direction_weights(self) -> list[int]:
        """Return the weight of every root-space direction, counted with multiplicity."""

        weights: list[int] = []
        for weight, multiplicity, doubled in zip(self.root_weights(), self.multiplicities, self.doubled, strict=True):
            weights.extend([weight] * multiplicity)
            # 2β pairs with μ twice as strongly
            weights.extend([2 * weight] * doubled)

        return weights

    def dimension(self) -> int:
        """Return dim G/K = rank + Σ multiplicities, doubled roots as separate spaces."""

        return self.rank + sum(self.multiplicities) + sum(self.doubled)

    def iwasawa_frame(self) -> Frame:
        """Return frame of root directions followed by rank flat directions dt^j."""

        weights = self.direction_weights()
        labels = [f"r{index}" for index in range(len(weights))] + [f"t{index}" for index in range(self.rank)]

        return Frame(len(labels), tuple(labels), tuple(float(weight) for weight in weights + [0] * self.rank))


@dataclass(frozen=True)
class WeightProfile:
    """Multiset of β(T) weights in units of |μ|/2 and the flat direction count."""

    weights: tuple[int, ...]
    flat_count: int
    label: str = ""

    @property
    def n0(self) -> int:
        """Return count of weight-0 directions."""

        return self.weights.count(0)

    @property
    def n1(self) -> int:
        """Return n_G(1)."""

        return self.weights.count(1)

    @property
    def n2(self) -> int:
        """Return n_G(2)."""

        return self.weights.count(2)

    @property
    def total(self) -> int:
        """Return Σ weights = n1 + 2·n2."""

        return sum(self.weights)

    @property
    def dimension(self) -> int:
        """Return number of root and flat directions."""

        return len(self.weights) + self.flat_count


@dataclass(frozen=True)
class NonsplitConstraint:
    """Lower bounds on (n_G(1), n_G(2)) for a non-split group of a given restricted type."""

    type_label: str
    rank: int
    n1_min: int
    n2_min: int

    @property
    def label(self) -> str:
        """Return label like 'A3/non-split'."""

        return f"{self.type_label}{self.rank}/non-split"

    def simplified_threshold(self, k: int) -> Fraction:
        """Return (n1_min + 2·n2_min)/(2k), a lower bound of the true simplified threshold."""

        _check_degree(k)
        return Fraction(self.n1_min + 2 * self.n2_min, 2 * k)


@dataclass(frozen=True)
class TorsionThresholds:
    """Both numerator readings of the symmetric-space torsion threshold."""

    literal: Threshold
    shifted: Threshold

    @property
    def differ(self) -> bool:
        """Return whether the two readings disagree."""

        return self.literal != self.shifted


@dataclass(frozen=True)
class SymmetricVerdict:
    """Vanishing verdict for H^k_p of a symmetric space of noncompact type."""

    group: str
    k: int
    p: Fraction
    query: str
    thresholds: dict[str, Threshold | None] = field(default_factory=dict)
    torsion: TorsionThresholds | None = None
    dimension: int | None = None
    rank: int = 0
    verdict: str = VERDICT_NOT_COVERED
    criterion: str | None = None

    @property
    def in_gromov_range(self) -> bool:
        """Return whether k < rank."""

        return self.k < self.rank

    def as_dict(self) -> dict:
        """Return verdict as a plain dict for reports."""

        return {
            "group": self.group,
            "rank": self.rank,
            "k": self.k,
            "p": self.p,
            "query": self.query,
            "dimension": self.dimension,
            "in_gromov_range": self.in_gromov_range,
            "thresholds": dict(self.thresholds),
            "torsion": None
            if self.torsion is None
            else {"literal": self.torsion.literal, "shifted": self.torsion.shifted},
            "torsion_variants_differ": self.torsion is not None and self.torsion.differ,
            "verdict": self.verdict,
            "criterion": self.criterion,
        }


@dataclass(frozen=True)
class CaseRow:
    """One row of the Gromov table."""

    case: str
    group: str
    rank: int
    n1: int
    n2: int
    n1_closed_form: str
    numerator: int
    sharp_k1: Fraction
    sharp_top: Fraction

    def as_dict(self) -> dict:
        """Return row as a plain dict."""

        return {
            "case": self.case,
            "group": self.group,
            "rank": self.rank,
            "n1": self.n1,
            "n2": self.n2,
            "n1_closed_form": self.n1_closed_form,
            "numerator": self.numerator,
            "sharp_k1": self.sharp_k1,
            "sharp_top": self.sharp_top,
        }


def _dot(a: Vector, b: Vector) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), start=Fraction(0))


def _weight(root: Vector, mu: Vector) -> int:
    weight = 2 * _dot(root, mu) / _dot(mu, mu)
    if weight.denominator != 1 or weight not in (0, 1, 2):
        raise RootSystemError("invalid_group", group=f"weight {weight} outside 0, 1, 2")

    return int(weight)


def _unit(size: int, *entries: tuple[int, int | Fraction]) -> Vector:
    vector = [Fraction(0)] * size
    for index, value in entries:
        vector[index] += Fraction(value)

    return tuple(vector)


def _plus_minus_pairs(size: int, upto: int | None = None) -> list[Vector]:
    """Return ±e_i ± e_j for i < j < upto."""

    upto = size if upto is None else upto
    return [
        _unit(size, (i, si), (j, sj)) for i, j in combinations(range(upto), 2) for si, sj in product((1, -1), repeat=2)
    ]


def _e8_roots() -> list[Vector]:
    half = Fraction(1, 2)
    roots = _plus_minus_pairs(8)
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(half * sign for sign in signs))

    return roots


def _all_roots(type_label: str, rank: int) -> list[Vector]:
    """Return all roots (both signs) in standard coordinates."""

    match type_label:
        case "A":
            size = rank + 1
            return [_unit(size, (i, 1), (j, -1)) for i in range(size) for j in range(size) if i != j]
        case "B":
            return _plus_minus_pairs(rank) + [_unit(rank, (i, s)) for i in range(rank) for s in (1, -1)]
        case "C":
            return _plus_minus_pairs(rank) + [_unit(rank, (i, 2 * s)) for i in range(rank) for s in (1, -1)]
        case "D":
            return _plus_minus_pairs(rank)
        case "G":
            short = [_unit(3, (i, 1), (j, -1)) for i in range(3) for j in range(3) if i != j]
            long = [
                _unit(3, (i, 2 * s), ((i + 1) % 3, -s), ((i + 2) % 3, -s)) for i in range(3) for s in (1, -1)
            ]
            return short + long
        case "F":
            half = Fraction(1, 2)
            roots = _plus_minus_pairs(4) + [_unit(4, (i, s)) for i in range(4) for s in (1, -1)]
            return roots + [tuple(half * sign for sign in signs) for signs in product((1, -1), repeat=4)]
        case "E":
            roots = _e8_roots()
            # E7 and E6 as the roots orthogonal to e7+e8, then also to e6-e7
            if rank <= 7:
                roots = [root for root in roots if root[6] + root[7] == 0]
            if rank == 6:
                roots = [root for root in roots if root[5] - root[6] == 0]
            return roots

    raise RootSystemError("invalid_rank", rank=rank, type=type_label)


def check_type_rank(type_label: str, rank: int) -> None:
    """Raise when (type, rank) is not a simple root system."""

    if type_label not in ROOT_TYPES:
        raise RootSystemError("invalid_group", group=f"{type_label}{rank}")
    if type_label in EXCEPTIONAL_RANKS:
        if rank not in EXCEPTIONAL_RANKS[type_label]:
            raise RootSystemError("invalid_rank", rank=rank, type=type_label)
    elif rank < MIN_RANK[type_label]:
        raise RootSystemError("invalid_rank", rank=rank, type=type_label)


def parse_group(spec: str) -> tuple[str, int]:
    """Parse group specification like 'E8' or 'c3' into (type, rank)."""

    match = _GROUP_PATTERN.match(spec)
    if match is None:
        raise RootSystemError("invalid_group", group=spec)
    type_label, rank = match.group(1).upper(), int(match.group(2))
    check_type_rank(type_label, rank)

    return type_label, rank


def _dominant_functional(size: int) -> Vector:
    # Strictly decreasing powers of 3 pair nonzero with every root used here
    return tuple(Fraction(3 ** (size - 1 - index)) for index in range(size))


def _positive_system(roots: list[Vector]) -> tuple[tuple[Vector, ...], Vector]:
    functional = _dominant_functional(len(roots[0]))
    positive = [root for root in roots if _dot(root, functional) > 0]
    # Order by decreasing height, then lexicographically, for a stable layout
    positive.sort(key=lambda root: (-_dot(root, functional), tuple(-x for x in root)))

    return tuple(positive), positive[0]


@cache
def build_root_system(type_label: str, rank: int) -> RootDatum:
    """Return the split root datum of the given simple type."""

    check_type_rank(type_label, rank)
    positive, mu = _positive_system(_all_roots(type_label, rank))
    _LOGGER.debug("Built root system '%s%d' with '%d' positive roots", type_label, rank, len(positive))

    return RootDatum(
        type_label=type_label,
        rank=rank,
        positive_roots=positive,
        multiplicities=(1,) * len(positive),
        doubled=(0,) * len(positive),
        maximal_root=mu,
    )


@cache
def restricted_root_datum_Cn(case_id: int, n: int) -> RootDatum:
    """Return restricted C_n datum with Araki multiplicities of the given case.

    Short roots λ_i ± λ_j carry multiplicity m_s, long roots 2λ_j carry m_l.
    """

    if case_id not in RESTRICTED_CN_MULTIPLICITIES:
        raise RootSystemError("restricted_case", case=case_id)
    check_type_rank("C", n)
    short, long = RESTRICTED_CN_MULTIPLICITIES[case_id]
    split = build_root_system("C", n)
    multiplicities = tuple(long if max(abs(x) for x in root) == 2 else short for root in split.positive_roots)

    return RootDatum(
        type_label="C",
        rank=n,
        positive_roots=split.positive_roots,
        multiplicities=multiplicities,
        doubled=split.doubled,
        maximal_root=split.maximal_root,
        restricted_case=case_id,
    )


def weight_profile(rd: RootDatum) -> WeightProfile:
    """Return weight multiset of a root datum."""

    profile = WeightProfile(tuple(rd.direction_weights()), rd.rank, rd.label)
    if rd.is_split and profile.n2 != 1:
        raise RootSystemError("not_split", n2=profile.n2)

    return profile


def restricted_profiles_Cn(case_id: int, n: int) -> WeightProfile:
    """Return weight profile of restricted C_n case 1..4."""

    return weight_profile(restricted_root_datum_Cn(case_id, n))


def dual_coxeter_number(type_label: str, rank: int) -> int:
    """Return dual Coxeter number h^∨; split n_G(1) equals 2h^∨ - 4."""

    check_type_rank(type_label, rank)
    match type_label:
        case "A":
            return rank + 1
        case "B":
            return 2 * rank - 1
        case "C":
            return rank + 1
        case "D":
            return 2 * rank - 2
        case "E":
            return {6: 12, 7: 18, 8: 30}[rank]
        case "F":
            return 9

    return 4


def _check_degree(k: int) -> None:
    if k < 1:
        raise FrameError("positive_degree", k=k)


def split_threshold(profile: WeightProfile, k: int) -> Fraction:
    """Return (n1 + 2)/(k + 1) for a split profile."""

    if profile.n2 != 1:
        raise RootSystemError("not_split", n2=profile.n2)
    _check_degree(k)

    return Fraction(profile.n1 + 2, k + 1)


def general_threshold(profile: WeightProfile, k: int, variant: str = "sharp") -> Fraction:
    """Return simplified (n1+2n2)/(2k) or sharp (n1+2n2)/(k+min(k,n2)) threshold."""

    _check_degree(k)
    numerator = profile.n1 + 2 * profile.n2
    if variant == "simplified":
        return Fraction(numerator, 2 * k)
    if variant == "sharp":
        return Fraction(numerator, k + min(k, profile.n2))

    raise ValueError(f"Unknown threshold variant '{variant}'")


def exact_threshold(profile: WeightProfile, k: int) -> Threshold:
    """Return sharpest exponent p* = Σ weights / max k-subset weight sum.

    Flat directions join the extremization with weight 0. k = 0 gives infinity.
    """

    directions = list(profile.weights) + [0] * profile.flat_count
    extremes = weight_extremes(directions, k)
    if extremes.maximum == 0:
        return INF

    return Fraction(profile.total, extremes.maximum)


def torsion_threshold_symmetric(profile: WeightProfile, k: int) -> TorsionThresholds:
    """Return torsion thresholds with numerators n2 + 2n1 (literal) and n1 + 2n2 (shifted)."""

    _check_degree(k)
    if k == 1:
        return TorsionThresholds(INF, INF)
    denominator = (k - 1) + min(k - 1, profile.n2)

    return TorsionThresholds(
        literal=Fraction(profile.n2 + 2 * profile.n1, denominator),
        shifted=Fraction(profile.n1 + 2 * profile.n2, denominator),
    )


def nonsplit_constraint(type_label: str, rank: int) -> NonsplitConstraint:
    """Return inequality data for a non-split group with restricted root system of the given type."""

    check_type_rank(type_label, rank)
    match type_label:
        case "A":
            # n_G(1) ≥ 2·n_{A_n}(1) and n_G(2) ≥ 2
            return NonsplitConstraint("A", rank, 2 * SPLIT_N1_FORMULA["A"](rank), 2)
        case "B" | "F":
            profile = weight_profile(build_root_system(type_label, rank))
            return NonsplitConstraint(type_label, rank, profile.n1, profile.n2)

    raise RootSystemError("invalid_group", group=f"{type_label}{rank} (non-split)")


def _profile_thresholds(profile: WeightProfile, k: int) -> dict[str, Threshold | None]:
    return {
        "split": split_threshold(profile, k) if profile.n2 == 1 else None,
        "simplified": general_threshold(profile, k, "simplified"),
        "sharp": general_threshold(profile, k, "sharp"),
        "exact": exact_threshold(profile, k),
    }


def _middle_degree(k: int, dimension: int | None, rank: int) -> bool:
    if dimension is None:
        # dim X ≥ 2·rank, so degrees below the rank are never middle
        return k >= rank
    return 2 * k == dimension


def gromov_verdict(
    group: str,
    k: int,
    p: Fraction | float | str,
    restricted_cn: int | None = None,
    nonsplit: bool = False,
    query: str = "reduced",
) -> SymmetricVerdict:
    """Return vanishing verdict of H^k_p(G/K) for the group specification."""

    p = Fraction(p)
    check_exponent(p)
    _check_degree(k)
    type_label, rank = parse_group(group)

    # Build thresholds
    torsion = None
    dimension = None
    if restricted_cn is not None:
        if type_label != "C":
            raise RootSystemError("invalid_group", group=f"{group} with restricted case {restricted_cn}")
        rd = restricted_root_datum_Cn(restricted_cn, rank)
        profile = weight_profile(rd)
        thresholds = _profile_thresholds(profile, k)
        torsion = torsion_threshold_symmetric(profile, k)
        dimension, label = rd.dimension(), rd.label
    elif nonsplit:
        constraint = nonsplit_constraint(type_label, rank)
        thresholds = {"simplified": constraint.simplified_threshold(k)}
        label = constraint.label
    else:
        rd = build_root_system(type_label, rank)
        profile = weight_profile(rd)
        thresholds = _profile_thresholds(profile, k)
        torsion = torsion_threshold_symmetric(profile, k)
        dimension, label = rd.dimension(), rd.label

    if dimension is not None and k > dimension:
        raise FrameError("degree_range", k=k, n=dimension)

    verdict, criterion = VERDICT_NOT_COVERED, None
    if query == "torsion":
        if torsion is not None and p < torsion.literal and p < torsion.shifted:
            verdict, criterion = VERDICT_VANISHES_TORSION, "torsion"
    else:
        fired = [name for name, value in thresholds.items() if value is not None and p < value]
        if fired:
            verdict, criterion = VERDICT_VANISHES_REDUCED, fired[0]
        elif p == P_TWO and not _middle_degree(k, dimension, rank):
            verdict, criterion = VERDICT_P2_RULE, "p2-middle-degree"

    _LOGGER.debug("Verdict for '%s' k='%d' p='%s': '%s'", label, k, p, verdict)

    return SymmetricVerdict(
        group=label,
        k=k,
        p=p,
        query=query,
        thresholds=thresholds,
        torsion=torsion,
        dimension=dimension,
        rank=rank,
        verdict=verdict,
        criterion=criterion,
    )


def _n1_closed_form(type_label: str, rank: int) -> str:
    return _E_N1_CLOSED_FORM[rank] if type_label == "E" else _N1_CLOSED_FORM[type_label]


def cases_table() -> list[CaseRow]:
    """Return the nine split cases followed by the four restricted C_n cases."""

    rows = []
    for case, (type_label, rank) in enumerate(GROMOV_TABLE_RANKS, start=1):
        profile = weight_profile(build_root_system(type_label, rank))
        rows.append(_case_row(str(case), f"{type_label}{rank}", rank, profile, _n1_closed_form(type_label, rank)))

    n = GROMOV_TABLE_RESTRICTED_RANK
    for case_id in sorted(RESTRICTED_CN_MULTIPLICITIES):
        profile = restricted_profiles_Cn(case_id, n)
        rows.append(_case_row(f"Cn-{case_id}", f"C{n}", n, profile, _RESTRICTED_N1_CLOSED_FORM[case_id]))

    return rows


def _case_row(case: str, group: str, rank: int, profile: WeightProfile, closed_form: str) -> CaseRow:
    return CaseRow(
        case=case,
        group=group,
        rank=rank,
        n1=profile.n1,
        n2=profile.n2,
        n1_closed_form=closed_form,
        numerator=profile.total,
        sharp_k1=general_threshold(profile, 1),
        sharp_top=general_threshold(profile, max(rank - 1, 1)),
    )

