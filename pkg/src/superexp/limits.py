"""Limit-formula estimators for the parabolic Abel function of h(u) = e^u - 1.

Three classical estimator families are implemented over a configurable
multiprecision backend:

* a ratio estimator built from two forward orbits (Levy),
* a binomial-transform estimator built from forward differences of one
  orbit (Newton),
* a log-corrected orbit-shift estimator, one flavour per petal
  (Fatou/Walker).

All of them converge (slowly, like powers of 1/n) to Abel-function values
at the parabolic fixed point 0 of h, and serve as independent oracles for
the asymptotic-series evaluators in :mod:`superexp.evaluators`.  The
convergence tables they produce are the benchmark artifacts of this
package.

Orbits decay like -2/n near the fixed point, so every kernel goes through
``expm1``/``log1p`` style evaluation; naive ``exp(u) - 1`` would lose all
significant digits long before n = 10^5.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import mpmath
from mpmath import mp

from .errors import (
    DomainError,
    NonConvergenceError,
    OrbitOverflowError,
    PrecisionLossWarning,
    SuperexpError,
)

__all__ = [
    "PrecisionConfig",
    "ConvergenceRecord",
    "NewtonResult",
    "iterate_h",
    "iterate_h_inverse",
    "levy_abel",
    "levy_probe",
    "newton_superfunction",
    "fatou_abel",
    "fatou_probe",
    "fatou_probe_richardson",
    "convergence_table",
    "records_to_csv",
]

Scalar = Union[int, float, complex, mpmath.mpf, mpmath.mpc]

# Forward orbits escaping to +infinity blow up as towers; one more step from
# here would already produce an exponent with ~1e8 bits.
_ESCAPE_RE = 1e8


@dataclass(frozen=True)
class PrecisionConfig:
    """Working-precision knobs shared by every limit formula.

    Parameters
    ----------
    mantissa_bits : int
        Binary mantissa length of the backend arithmetic.  53 reproduces
        IEEE double behaviour; the convergence tables default to 256.
    max_iterations : int
        Hard cap on orbit length; guards table drivers against runaway
        n requests.
    series_terms : int
        Newton summand count (the other formulas ignore it).
    """

    mantissa_bits: int = 256
    max_iterations: int = 10**7
    series_terms: int = 1000

    def __post_init__(self) -> None:
        if self.mantissa_bits < 53:
            raise ValueError("mantissa_bits must be at least 53")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.series_terms < 1:
            raise ValueError("series_terms must be positive")


@dataclass(frozen=True)
class ConvergenceRecord:
    """One table row: estimator value at orbit length n.

    ``error`` is None for clean rows; failed rows keep their n and carry a
    short error tag instead of a value.
    """

    n: int
    value: Optional[Scalar]
    method: str
    error: Optional[str] = None


@dataclass(frozen=True)
class NewtonResult:
    """Binomial-transform partial sum plus its cancellation diagnostics."""

    value: Scalar
    cancellation_warning: bool
    max_term: mpmath.mpf


def _as_mp(z: Scalar):
    z = mpmath.mpmathify(z)
    if isinstance(z, mpmath.mpc) and z.imag == 0:
        return z.real
    return z


def _tau_inv(z: Scalar):
    # fixed-point chart: tau(u) = e(u+1) maps 0 to e; inverse pulls
    # f-coordinates back to h-coordinates
    return _as_mp(z) / mpmath.e - 1


def _check_n(n: int, cfg: PrecisionConfig) -> None:
    if n < 0:
        raise ValueError("orbit length must be nonnegative")
    if n > cfg.max_iterations:
        raise NonConvergenceError(
            f"orbit length {n} exceeds max_iterations={cfg.max_iterations}"
        )


def _h_step(z, index: int):
    if mpmath.re(z) > _ESCAPE_RE:
        raise OrbitOverflowError(
            f"forward orbit escaped at step {index}", index=index
        )
    return mpmath.expm1(z)


def _h_inv_step(z, index: int):
    if isinstance(z, mpmath.mpf) and z <= -1:
        raise DomainError(
            f"backward orbit left the domain (reached {mpmath.nstr(z, 8)} <= -1 "
            f"at step {index})"
        )
    return mpmath.log1p(z)


def iterate_h(z: Scalar, n: int, cfg: PrecisionConfig = PrecisionConfig()):
    """Forward orbit h^[n](z) with cancellation-safe steps.

    Raises
    ------
    OrbitOverflowError
        If the orbit escapes to +infinity; carries the escape index.
    """
    _check_n(n, cfg)
    with mp.workprec(cfg.mantissa_bits):
        w = _as_mp(z)
        for i in range(n):
            w = _h_step(w, i)
        return w


def iterate_h_inverse(z: Scalar, n: int, cfg: PrecisionConfig = PrecisionConfig()):
    """Backward orbit h^[-n](z) via repeated log1p.

    The principal inverse branch is used throughout, so real arguments must
    stay right of the logarithmic singularity at -1.
    """
    _check_n(n, cfg)
    with mp.workprec(cfg.mantissa_bits):
        w = _as_mp(z)
        for i in range(n):
            w = _h_inv_step(w, i)
        return w


def levy_abel(
    z: Scalar, u: Scalar, n: int, cfg: PrecisionConfig = PrecisionConfig()
):
    """Ratio estimator (h^[n](z) - h^[n](u)) / (h^[n+1](u) - h^[n](u)).

    Converges to the difference of Abel-function values at z and u.  The
    denominator shrinks like 2/n^2, so double-precision use is possible but
    flagged: a PrecisionLossWarning is emitted once the denominator falls
    below 2^(-mantissa/2) of the numerator scale.
    """
    _check_n(n, cfg)
    with mp.workprec(cfg.mantissa_bits):
        zw = _as_mp(z)
        uw = _as_mp(u)
        for i in range(n):
            zw = _h_step(zw, i)
            uw = _h_step(uw, i)
        un1 = _h_step(uw, n)
        num = zw - uw
        den = un1 - uw
        if den == 0:
            raise NonConvergenceError("degenerate step: h^[n+1](u) == h^[n](u)")
        scale = max(mpmath.mpf(1), abs(num))
        if abs(den) < mpmath.mpf(2) ** (-(cfg.mantissa_bits // 2)) * scale:
            warnings.warn(
                f"ratio denominator below half-precision floor at n={n}",
                PrecisionLossWarning,
                stacklevel=2,
            )
        return num / den


def levy_probe(
    zf: Scalar, uf: Scalar, n: int, cfg: PrecisionConfig = PrecisionConfig()
):
    """Ratio estimator with arguments given in exp(z/e)-coordinates.

    Pulls both points back through the fixed-point chart and runs
    :func:`levy_abel`; ``levy_probe(-1, 1, n)`` is the benchmark-table
    sequence converging to the normalized super-logarithm at -1.
    """
    with mp.workprec(cfg.mantissa_bits):
        return levy_abel(_tau_inv(zf), _tau_inv(uf), n, cfg)


def newton_superfunction(
    u: Scalar,
    t: Scalar,
    cfg: PrecisionConfig = PrecisionConfig(),
    base_map: str = "h",
) -> NewtonResult:
    """Binomial-transform estimator sum_n C(t,n) Delta^n[orbit](0).

    The inner alternating sums sum_m C(n,m)(-1)^(n-m) base^[m](u) are
    accumulated as an in-place forward-difference table of the orbit, at
    full working precision (no compensated-summation shortcut: the whole
    point of the mantissa_bits knob is to absorb the cancellation).

    Parameters
    ----------
    base_map : {"h", "f"}
        Which orbit to difference: "h" iterates u -> e^u - 1 (the default,
        matching the h-coordinate Abel problem), "f" iterates
        u -> e^(u/e), whose orbits stay bounded on the attracting side and
        support the slow-convergence demonstration at u = 1.

    Returns
    -------
    NewtonResult
        value, a cancellation flag (running-max summand exceeded the
        result by more than half the mantissa), and the max summand size.
    """
    if base_map not in ("h", "f"):
        raise ValueError(f"unknown base_map {base_map!r}")
    terms = cfg.series_terms
    with mp.workprec(cfg.mantissa_bits):
        uw = _as_mp(u)
        tw = _as_mp(t)
        # C(t, n) vanishes for n > t at nonnegative integer t: the transform
        # terminates and the orbit tail (which may overflow) is never needed
        if mpmath.im(tw) == 0 and tw == mpmath.floor(tw) and tw >= 0:
            terms = min(terms, int(tw) + 1)
        orbit = [uw]
        if base_map == "h":
            for i in range(terms - 1):
                orbit.append(_h_step(orbit[-1], i))
        else:
            for i in range(terms - 1):
                w = orbit[-1]
                if mpmath.re(w) > _ESCAPE_RE:
                    raise OrbitOverflowError(
                        f"forward orbit escaped at step {i}", index=i
                    )
                orbit.append(mpmath.exp(w / mpmath.e))
        # pass k turns orbit[j] into Delta^k[orbit](j); only orbit[0] is read
        total = orbit[0]
        binom = mpmath.mpf(1)
        max_term = abs(total)
        for k in range(1, terms):
            for j in range(terms - k):
                orbit[j] = orbit[j + 1] - orbit[j]
            binom = binom * (tw - (k - 1)) / k
            term = binom * orbit[0]
            total += term
            max_term = max(max_term, abs(term))
        floor = abs(total) * mpmath.mpf(2) ** (cfg.mantissa_bits // 2)
        return NewtonResult(
            value=total,
            cancellation_warning=bool(max_term > floor),
            max_term=max_term,
        )


def fatou_abel(
    z: Scalar, petal: int, n: int, cfg: PrecisionConfig = PrecisionConfig()
):
    """Log-corrected orbit-shift estimator for one petal's Abel value.

    Petal 1 (attracting, Re z < 0): -(1/3) log n - 2/h^[n](z) - n.
    Petal 2 (repelling, Re z > 0): -(1/3) log n - 2/h^[-n](z) + n.

    The two shifted sequences converge to the regular Abel function of the
    respective petal, up to that petal's fixed normalization.
    """
    if petal not in (1, 2):
        raise ValueError("petal must be 1 or 2")
    if n < 1:
        raise ValueError("orbit length must be at least 1")
    _check_n(n, cfg)
    with mp.workprec(cfg.mantissa_bits):
        zw = _as_mp(z)
        re = mpmath.re(zw)
        if petal == 1:
            if re >= 0:
                raise DomainError(
                    "petal-1 estimator needs Re(z) < 0 (attracting side)"
                )
            w = iterate_h(zw, n, cfg)
            return -mpmath.log(n) / 3 - 2 / w - n
        if re <= 0:
            raise DomainError("petal-2 estimator needs Re(z) > 0 (repelling side)")
        w = iterate_h_inverse(zw, n, cfg)
        return -mpmath.log(n) / 3 - 2 / w + n


def fatou_probe(zf: Scalar, n: int, cfg: PrecisionConfig = PrecisionConfig()):
    """Petal-1 shift estimator re-based at 0, in exp(z/e)-coordinates.

    Computes -2/h^[n](tau_inv(zf)) + 2/h^[n](tau_inv(0)) - 1 in one fused
    orbit pass; the log n and n terms of the two petal-1 estimators cancel.
    This is the benchmark-table sequence converging to the normalized
    super-logarithm at zf.
    """
    if n < 1:
        raise ValueError("orbit length must be at least 1")
    _check_n(n, cfg)
    with mp.workprec(cfg.mantissa_bits):
        a = _tau_inv(zf)
        b = _tau_inv(0)
        for i in range(n):
            a = _h_step(a, i)
            b = _h_step(b, i)
        return -2 / a + 2 / b - 1


def fatou_probe_richardson(
    zf: Scalar, n: int, cfg: PrecisionConfig = PrecisionConfig()
):
    """First-order Richardson extrapolation 2 y(n) - y(n/2) of the probe.

    The probe converges like a/n + O(1/n^2); the extrapolation removes the
    a/n term and tightens the tail to O(1/n^2).  n must be even.
    """
    if n % 2 or n < 2:
        raise ValueError("Richardson step needs an even n >= 2")
    y_half = fatou_probe(zf, n // 2, cfg)
    y_full = fatou_probe(zf, n, cfg)
    return 2 * y_full - y_half


# --- table drivers ---------------------------------------------------------

# fixed-point rendering widths for the probe tables, block-dependent:
# the ratio probe prints 4/6/7/8 decimals (rounded), the shift probe
# 7/9/11 decimals (truncated toward zero)


def _levy_decimals(n: int) -> int:
    if n < 1000:
        return 4
    if n < 10000:
        return 6
    if n < 100000:
        return 7
    return 8


def _fatou_decimals(n: int) -> int:
    if n < 10000:
        return 7
    if n < 100000:
        return 9
    return 11


def _value_bits(value) -> int:
    def bits(x) -> int:
        try:
            return max(53, x._mpf_[3])
        except (AttributeError, IndexError):
            return 53

    if isinstance(value, mpmath.mpc):
        return max(bits(value.real), bits(value.imag))
    return bits(value)


def _round_fixed(value, decimals: int) -> str:
    with mp.workprec(_value_bits(value) + 32):
        scaled = mpmath.mpf(10) ** decimals * value
        q = int(mpmath.nint(scaled))
    sign = "-" if q < 0 else ""
    digits = str(abs(q)).rjust(decimals + 1, "0")
    return f"{sign}{digits[:-decimals]}.{digits[-decimals:]}"


def _trunc_fixed(value, decimals: int) -> str:
    with mp.workprec(_value_bits(value) + 32):
        scaled = mpmath.mpf(10) ** decimals * abs(value)
        q = int(mpmath.floor(scaled))
    sign = "-" if value < 0 else ""
    digits = str(q).rjust(decimals + 1, "0")
    return f"{sign}{digits[:-decimals]}.{digits[-decimals:]}"


def _printed(method: str, n: int, value) -> str:
    if value is None:
        return ""
    if mpmath.im(value) != 0:
        return mpmath.nstr(value, 12)
    real = mpmath.re(value)
    if method == "levy":
        return _round_fixed(real, _levy_decimals(n))
    if method == "fatou1":
        return _trunc_fixed(real, _fatou_decimals(n))
    return mpmath.nstr(real, 12)


def convergence_table(
    method: str,
    args: Sequence[Scalar],
    n_list: Iterable[int],
    cfg: PrecisionConfig = PrecisionConfig(),
) -> list[ConvergenceRecord]:
    """Run one estimator over ascending n, sharing a single orbit pass.

    Methods
    -------
    ``levy``   args (zf, uf): ratio probe rows, exp(z/e)-coordinates.
    ``fatou1`` args (zf,): petal-1 shift probe rows re-based at 0.
    ``fatou2`` args (zf, uf): difference of petal-2 estimators at the two
               points (backward orbits).
    ``newton`` args (u, t) or (u, t, base_map): partial sums with n terms.

    Failed rows are recorded with an error tag instead of aborting the
    remaining rows.
    """
    ns = list(n_list)
    if sorted(ns) != ns:
        raise ValueError("n_list must be ascending")
    if not ns:
        return []
    records: list[ConvergenceRecord] = []

    if method in ("levy", "fatou1"):
        _check_n(ns[-1], cfg)
        with mp.workprec(cfg.mantissa_bits):
            if method == "levy":
                zf, uf = args
                a, b = _tau_inv(zf), _tau_inv(uf)
            else:
                (zf,) = args
                a, b = _tau_inv(zf), _tau_inv(0)
            pos = 0
            failed = None
            for n in ns:
                if failed is None:
                    try:
                        while pos < n:
                            a = _h_step(a, pos)
                            b = _h_step(b, pos)
                            pos += 1
                    except SuperexpError as exc:
                        failed = _error_tag(exc)
                if failed is not None:
                    records.append(ConvergenceRecord(n, None, method, failed))
                    continue
                try:
                    if method == "levy":
                        b_next = _h_step(b, n)
                        den = b_next - b
                        if den == 0:
                            raise NonConvergenceError("degenerate step")
                        value = (a - b) / den
                    else:
                        if n < 1:
                            raise ValueError("orbit length must be at least 1")
                        value = -2 / a + 2 / b - 1
                    records.append(ConvergenceRecord(n, value, method))
                except SuperexpError as exc:
                    records.append(
                        ConvergenceRecord(n, None, method, _error_tag(exc))
                    )
        return records

    if method == "fatou2":
        zf, uf = args
        with mp.workprec(cfg.mantissa_bits):
            a, b = _tau_inv(zf), _tau_inv(uf)
            for n in ns:
                try:
                    value = fatou_abel(a, 2, n, cfg) - fatou_abel(b, 2, n, cfg)
                    records.append(ConvergenceRecord(n, value, method))
                except SuperexpError as exc:
                    records.append(
                        ConvergenceRecord(n, None, method, _error_tag(exc))
                    )
        return records

    if method == "newton":
        u, t = args[0], args[1]
        base_map = args[2] if len(args) > 2 else "h"
        for n in ns:
            row_cfg = PrecisionConfig(
                mantissa_bits=cfg.mantissa_bits,
                max_iterations=cfg.max_iterations,
                series_terms=n,
            )
            try:
                res = newton_superfunction(u, t, row_cfg, base_map=base_map)
                records.append(ConvergenceRecord(n, res.value, method))
            except SuperexpError as exc:
                records.append(ConvergenceRecord(n, None, method, _error_tag(exc)))
        return records

    raise ValueError(f"unknown method {method!r}")


def _error_tag(exc: SuperexpError) -> str:
    if isinstance(exc, OrbitOverflowError):
        return "overflow"
    if isinstance(exc, DomainError):
        return "domain"
    return "nonconv"


def records_to_csv(records: Sequence[ConvergenceRecord], stream=None) -> str:
    """Serialize records as ``method,n,value,printed`` CSV.

    The value column is a round-trip decimal of the high-precision result;
    failed rows leave it empty and put the error tag in the printed column.
    """
    lines = ["method,n,value,printed"]
    for rec in records:
        if rec.error is not None:
            lines.append(f"{rec.method},{rec.n},,{rec.error}")
            continue
        digits = mpmath.libmp.prec_to_dps(_value_bits(rec.value)) + 3
        value = mpmath.nstr(
            rec.value, digits, strip_zeros=True, min_fixed=1, max_fixed=0
        )
        if isinstance(rec.value, mpmath.mpc):
            value = value.replace(" ", "")
        lines.append(
            f"{rec.method},{rec.n},{value},{_printed(rec.method, rec.n, rec.value)}"
        )
    text = "\n".join(lines) + "\n"
    if stream is not None:
        stream.write(text)
    return text
