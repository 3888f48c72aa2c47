"""Heights of elliptic curves and the affine conversions between conventions.

The stable height is computed from a minimal-discriminant norm and the
archimedean discriminant values; nothing here computes minimal models, the
records are trusted input.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .bounds import BoundReport
from .lattice import SiegelTau
from .modular import QSeriesConfig, delta_tau

CONVENTIONS = ("faltings_original", "paper_h", "colmez")

# additive offsets relative to the working convention, per unit of g/2
_OFFSET_FACTOR = {
    "paper_h": 0.0,
    "faltings_original": -math.log(math.pi),
    "colmez": -math.log(2.0 * math.pi),
}


@dataclass(frozen=True)
class HeightValue:
    value: float
    convention: str

    def __post_init__(self) -> None:
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")


@dataclass(frozen=True)
class CurveRecord:
    """Elliptic curve over a number field, reduced to analytic data.

    INPUT:

    - ``label`` -- identifier string
    - ``degree`` -- field degree D >= 1
    - ``embeddings`` -- one reduced period ratio per complex embedding
    - ``log_norm_minimal_discriminant`` -- log |N(minimal discriminant)|,
      nonnegative; semi-stability of the underlying curve is the caller's
      responsibility
    - ``j_rational`` -- optional (numerator, denominator) pair
    """

    label: str
    degree: int
    embeddings: tuple
    log_norm_minimal_discriminant: float
    j_rational: Optional[tuple] = None

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        embs = tuple(self.embeddings)
        if len(embs) != self.degree:
            raise ValueError(f"need {self.degree} embeddings, got {len(embs)}")
        for e in embs:
            if not isinstance(e, SiegelTau):
                raise TypeError("embeddings must be SiegelTau instances")
        if self.log_norm_minimal_discriminant < 0:
            raise ValueError("log |N(min disc)| must be >= 0")
        if self.j_rational is not None:
            num, den = self.j_rational
            if den == 0:
                raise ValueError("j denominator is zero")
            object.__setattr__(self, "j_rational", (int(num), int(den)))
        object.__setattr__(self, "embeddings", embs)
        self._validate_conjugate_pairs(embs)

    @staticmethod
    def _validate_conjugate_pairs(embs: Sequence[SiegelTau], tol: float = 1e-6) -> None:
        # loose: every off-axis tau wants a partner at the mirrored abscissa;
        # an unpaired one only warns because all downstream quantities depend
        # on |re| alone
        unmatched = [t for t in embs if abs(t.re) > tol and abs(abs(t.re) - 0.5) > tol]
        while unmatched:
            t = unmatched.pop()
            for k, u in enumerate(unmatched):
                if abs(u.im - t.im) <= tol and abs(u.re + t.re) <= tol:
                    del unmatched[k]
                    break
            else:
                warnings.warn(
                    f"embedding at re={t.re} has no conjugate partner", stacklevel=3
                )


def weil_height_rational_j(j) -> float:
    """log max(|num|, |den|) of a rational number in lowest terms."""
    frac = Fraction(*j) if isinstance(j, tuple) else Fraction(j)
    m = max(abs(frac.numerator), abs(frac.denominator))
    return math.log(m) if m > 1 else 0.0


def faltings_height_silverman(record: CurveRecord, cfg: QSeriesConfig = QSeriesConfig()) -> HeightValue:
    """Stable height from the minimal-discriminant norm and period ratios.

    h = (1/(12 D)) [ log|N(min disc)| - sum over embeddings of
    log(|Delta(tau)| Im(tau)^6) ], with Delta carrying the (2 pi)^12 factor
    so the result lands in the original normalization.
    """
    total = 0.0
    for t in record.embeddings:
        dl = delta_tau(t, cfg, normalization="two_pi_12")
        total += math.log(abs(dl.value) * t.im**6)
    value = (record.log_norm_minimal_discriminant - total) / (12.0 * record.degree)
    return HeightValue(value, "faltings_original")


def convert_height(h: HeightValue, target: str, g: int) -> HeightValue:
    """Affine change of height convention; exact round trips."""
    if target not in CONVENTIONS:
        raise ValueError(f"unknown convention {target!r}")
    if g < 1:
        raise ValueError("g must be >= 1")
    shift = (g / 2.0) * (_OFFSET_FACTOR[target] - _OFFSET_FACTOR[h.convention])
    return HeightValue(h.value + shift, target)


# ---------------------------------------------------------------------------
# Inequality reports
# ---------------------------------------------------------------------------

def isogeny_height_report(h_source: float, deg: float, h_target: Optional[float] = None) -> BoundReport:
    """h(target) <= h(source) + (1/2) log deg; lhs defaults to h(source)."""
    if deg < 1:
        raise ValueError("isogeny degree must be >= 1")
    lhs = h_source if h_target is None else h_target
    return BoundReport(
        "isogeny_height_shift",
        lhs,
        h_source + 0.5 * math.log(deg),
        inputs={"h_source": h_source, "deg": deg},
    )


def subvariety_height_report(h_ambient: float, g: int, h0: float, h_sub: Optional[float] = None) -> BoundReport:
    """h(sub) <= h(ambient) + g log(sqrt(2 pi) h0^2)."""
    if h0 < 1:
        raise ValueError("h0 must be >= 1")
    lhs = h_ambient if h_sub is None else h_sub
    return BoundReport(
        "subvariety_height",
        lhs,
        h_ambient + g * math.log(math.sqrt(2.0 * math.pi) * h0**2),
        inputs={"h_ambient": h_ambient, "g": g, "h0": h0},
    )


def product_additivity_report(h1: float, h2: float, h_product: float, tol: float = 1e-9) -> BoundReport:
    """Equality h(A1 x A2) = h(A1) + h(A2), reported as a tolerance check."""
    return BoundReport(
        "product_additivity",
        abs(h_product - h1 - h2),
        tol,
        inputs={"h1": h1, "h2": h2, "h_product": h_product},
    )


def hetj_report(record: CurveRecord, cfg: QSeriesConfig = QSeriesConfig()) -> BoundReport:
    """End-to-end check h(E) <= (1/12) h(j) + 2.95 for a record with rational j."""
    if record.j_rational is None:
        raise ValueError(f"record {record.label!r} has no rational j")
    hF = faltings_height_silverman(record, cfg)
    h = convert_height(hF, "paper_h", g=1)
    hj = weil_height_rational_j(record.j_rational)
    return BoundReport(
        "height_vs_j_height",
        h.value,
        hj / 12.0 + 2.95,
        inputs={"label": record.label, "h_faltings": hF.value, "h_j": hj},
    )


def height_inequality_suite(
    *,
    isogeny: Iterable[tuple] = (),
    subvariety: Iterable[tuple] = (),
    products: Iterable[tuple] = (),
    split_degrees: Iterable[tuple] = (),
    hetj_records: Iterable[CurveRecord] = (),
    cfg: QSeriesConfig = QSeriesConfig(),
) -> list[BoundReport]:
    """Evaluate the height inequalities on caller-supplied instances.

    isogeny: (h_source, deg) or (h_source, deg, h_target) tuples.
    subvariety: (h_ambient, g, h0) or (h_ambient, g, h0, h_sub).
    products: (h1, h2, h_product).
    split_degrees: (h0_B, h0_Bperp, h0_A) for the addition-map degree bound.
    hetj_records: curve records with rational j.
    """
    from .bounds import orthogonal_split_degree_report

    reports: list[BoundReport] = []
    for item in isogeny:
        reports.append(isogeny_height_report(*item))
    for item in subvariety:
        reports.append(subvariety_height_report(*item))
    for item in products:
        reports.append(product_additivity_report(*item))
    for item in split_degrees:
        reports.append(orthogonal_split_degree_report(*item))
    for rec in hetj_records:
        reports.append(hetj_report(rec, cfg))
    return reports
