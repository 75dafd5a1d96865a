"""Concrete protected functions and their specialized encoders.

Families: Hamming weight, weight blocks (floor(wt/T)), block min-max,
codeword indicator, and quantized machine-learning activations. Each comes
with the cheap encoder the theory promises for it, built from the raw
material in `fcodes.construct`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import construct, fcc
from .bits import BitWord, Code, DistanceMatrix
from .bounds import gv_irregular_threshold
from .fcc import PER_MESSAGE, PER_VALUE, FccEncoder, FunctionSpec

# --- plain specs ---------------------------------------------------------


def wt_spec(k: int) -> FunctionSpec:
    """The Hamming weight of the message; image 0..k."""
    return FunctionSpec(
        k, lambda u: u.bit_count(), range(k + 1), name=f"wt:k={k}"
    )


def parity_spec(k: int) -> FunctionSpec:
    """XOR of all message bits; the canonical two-valued function."""
    return FunctionSpec(
        k, lambda u: u.bit_count() & 1, (0, 1), name=f"parity:k={k}"
    )


def or_spec(k: int) -> FunctionSpec:
    """OR of all message bits: 0 only on the all-zero message."""
    return FunctionSpec(
        k, lambda u: 1 if u else 0, (0, 1), name=f"or:k={k}"
    )


def constant_spec(k: int) -> FunctionSpec:
    """The constant 0 function (nothing to protect; redundancy 0)."""
    return FunctionSpec(k, lambda u: 0, (0,), name=f"constant:k={k}")


def delta_spec(k: int, T: int) -> FunctionSpec:
    """Weight blocks: floor(wt(u) / T); image 0..floor(k/T)."""
    if T < 1:
        raise ValueError(f"need T >= 1, got {T}")
    return FunctionSpec(
        k,
        lambda u: u.bit_count() // T,
        range(k // T + 1),
        name=f"delta_T:k={k},T={T}",
    )


class MinMaxValue(NamedTuple):
    """1-based indices of the smallest and largest block of a message."""

    argmin_index: int
    argmax_index: int


def minmax_spec(w: int, l: int) -> FunctionSpec:
    """Which of the w length-l blocks is smallest, and which largest.

    Blocks compare as binary numerals (leftmost bit most significant); ties
    go to the smaller index for the minimum and the larger for the maximum,
    so the two indices always differ. Image: all w(w-1) ordered pairs, which
    requires l >= 2 (single-bit blocks cannot realise every pair).
    """
    if w < 2:
        raise ValueError(f"need w >= 2 blocks, got {w}")
    if l < 2:
        raise ValueError(f"need block length l >= 2, got {l}")
    k = w * l
    mask = (1 << l) - 1

    def fn(u: int) -> MinMaxValue:
        best_lo = best_hi = None
        lo_i = hi_i = 0
        for i in range(1, w + 1):
            part = (u >> (l * (w - i))) & mask
            if best_lo is None or part < best_lo:
                best_lo, lo_i = part, i
            if best_hi is None or part >= best_hi:
                best_hi, hi_i = part, i
        return MinMaxValue(lo_i, hi_i)

    image = [
        MinMaxValue(i, j)
        for i in range(1, w + 1)
        for j in range(1, w + 1)
        if i != j
    ]
    return FunctionSpec(k, fn, image, name=f"minmax:w={w},l={l}")


def indicator_spec(code: Code, *, name: str = "indicator") -> FunctionSpec:
    """Which codeword (1-based index) the message is, or 0 for none.

    The code's words must be distinct. When the code covers the whole space
    the 0 value disappears from the image.
    """
    values = [w.value for w in code.words]
    if len(set(values)) != len(values):
        raise ValueError("indicator needs distinct codewords")
    lookup = {v: i + 1 for i, v in enumerate(values)}
    full_cover = code.size == 1 << code.length
    image = range(1, code.size + 1) if full_cover else range(code.size + 1)
    return FunctionSpec(
        code.length, lambda u: lookup.get(u, 0), image, name=name
    )


# --- quantized ML activations ---------------------------------------------


@dataclass(frozen=True)
class Quantizer:
    """Fixed-precision signed quantizer: k bits, step epsilon.

    Message u represents the real value epsilon * (u - 2^(k-1) + 1/2); the
    2^k centers are symmetric about zero and strictly increasing in u.
    """

    k: int
    epsilon: Fraction

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"need k >= 2, got {self.k}")
        if self.epsilon <= 0:
            raise ValueError(f"need epsilon > 0, got {self.epsilon}")

    def center(self, u: int) -> Fraction:
        return self.epsilon * (Fraction(2 * u + 1, 2) - (1 << (self.k - 1)))

    def b2r(self, u: BitWord) -> Fraction:
        if u.length != self.k:
            raise ValueError(f"message length {u.length}, expected {self.k}")
        return self.center(u.value)

    @property
    def low(self) -> Fraction:
        return self.center(0)

    @property
    def high(self) -> Fraction:
        return self.center((1 << self.k) - 1)


BIJECTIVE = "bijective"  # increasing, saturating on both sides (sigmoid, tanh)
BIJECTIVE_POSITIVE = "bijective-positive"  # zero below 0, increasing above (relu)
SYMMETRIC = "symmetric"  # g(x) = g(-x), decreasing on [0, a] (the derivatives)


@dataclass(frozen=True)
class MlFunctionKind:
    """An activation's shape class and the interval where it is injective."""

    name: str
    style: str
    lo: Fraction | None  # interval start (bijective kinds)
    hi: Fraction | None  # interval end, or the one-sided cutoff a (symmetric)


_ML_DEFAULTS: dict[str, tuple[str, Fraction | None, Fraction | None]] = {
    "sigmoid": (BIJECTIVE, Fraction(-10), Fraction(10)),
    "tanh": (BIJECTIVE, Fraction(-6), Fraction(6)),
    "relu": (BIJECTIVE_POSITIVE, None, None),
    "sigmoid_derivative": (SYMMETRIC, Fraction(0), Fraction(10)),
    "tanh_derivative": (SYMMETRIC, Fraction(0), Fraction(6)),
}


def ml_kind(
    name: str, lo: Fraction | None = None, hi: Fraction | None = None
) -> MlFunctionKind:
    """Look up an activation kind, optionally overriding its interval."""
    if name not in _ML_DEFAULTS:
        raise ValueError(f"unknown ML kind {name!r}; known: {', '.join(sorted(_ML_DEFAULTS))}")
    style, d_lo, d_hi = _ML_DEFAULTS[name]
    return MlFunctionKind(name, style, lo if lo is not None else d_lo, hi if hi is not None else d_hi)


def _ml_classify(kind: MlFunctionKind, q: Quantizer, u: int):
    """Function value of a message: a (band, level) pair ordered like g.

    Band -1 sorts below the injective band 0 and band +1 above it, so the
    image order follows the activation's own output order: low-saturation
    values first, then the strictly increasing stretch, then high saturation.
    Symmetric kinds decrease with |x|, so their level is -|center|.
    """
    c = q.center(u)
    if kind.style == BIJECTIVE:
        if c < kind.lo:
            return (-1, Fraction(0))
        if c > kind.hi:
            return (1, Fraction(0))
        return (0, c)
    if kind.style == BIJECTIVE_POSITIVE:
        if c < 0:
            return (-1, Fraction(0))
        return (0, c)
    # symmetric: saturation (≈0) is the smallest value; g decreases in |x|
    if abs(c) > kind.hi:
        return (-1, Fraction(0))
    return (0, -abs(c))


def _ml_image(kind: MlFunctionKind, q: Quantizer) -> list:
    """The attained (band, level) values in ascending order, exactly."""
    step = q.epsilon
    if kind.style == BIJECTIVE:
        if not (q.low < kind.lo and q.high > kind.hi):
            raise ValueError(
                f"{kind.name}: quantizer range [{q.low}, {q.high}] leaves a "
                f"saturation class empty around [{kind.lo}, {kind.hi}]"
            )
        if (kind.hi - kind.lo) % step != 0:
            raise ValueError(
                f"{kind.name}: epsilon {step} does not divide the interval "
                f"length {kind.hi - kind.lo}"
            )
        levels = _centers_between(q, kind.lo, kind.hi)
        return [(-1, Fraction(0))] + [(0, c) for c in levels] + [(1, Fraction(0))]
    if kind.style == BIJECTIVE_POSITIVE:
        levels = _centers_between(q, Fraction(0), q.high)
        return [(-1, Fraction(0))] + [(0, c) for c in levels]
    if q.high <= kind.hi:
        raise ValueError(
            f"{kind.name}: no centers beyond {kind.hi}; saturation class empty"
        )
    if kind.hi % step != 0:
        raise ValueError(
            f"{kind.name}: epsilon {step} does not divide the cutoff {kind.hi}"
        )
    levels = _centers_between(q, Fraction(0), kind.hi)
    return [(-1, Fraction(0))] + [(0, -c) for c in reversed(levels)]


def _centers_between(q: Quantizer, lo: Fraction, hi: Fraction) -> list[Fraction]:
    """Quantization centers c with lo <= c <= hi, ascending."""
    out = []
    for u in range(1 << q.k):
        c = q.center(u)
        if lo <= c <= hi:
            out.append(c)
    return out


def ml_spec(kind: MlFunctionKind, q: Quantizer) -> FunctionSpec:
    """Spec for g(b2r(u)): distinguishable activation outputs as values.

    Messages in a saturation region share one value; messages in the
    injective stretch each carry their own; symmetric kinds identify +/-c.
    """
    image = _ml_image(kind, q)
    extra = ""
    style, d_lo, d_hi = _ML_DEFAULTS[kind.name]
    if (kind.lo, kind.hi) != (d_lo, d_hi):
        if kind.style == SYMMETRIC:
            extra = f",a={kind.hi}"
        else:
            extra = f",a={kind.lo},b={kind.hi}"
    return FunctionSpec(
        q.k,
        lambda u: _ml_classify(kind, q, u),
        image,
        name=f"ml:{kind.name},k={q.k},eps={q.epsilon}{extra}",
        value_label=lambda v: (
            "saturated-low" if v[0] < 0 else ("saturated-high" if v[0] > 0 else f"g({v[1]})")
        ),
    )


def ml_distance_matrix(kind: MlFunctionKind, q: Quantizer, t: int) -> DistanceMatrix:
    """Requirement matrix for an activation, assembled classwise.

    Groups messages by function value (saturation classes, single centers,
    +/- pairs for symmetric kinds) and takes, for each pair of classes, the
    plain minimum of Hamming distances between their members — the direct
    form of the distance the generic matrix reaches through shell search.
    Rows follow the same image order as ml_spec, so the two agree entrywise.
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    if q.k > 16:
        raise ValueError(f"k={q.k} too large for classwise minimization")
    image = _ml_image(kind, q)
    members: dict = {v: [] for v in image}
    for u in range(1 << q.k):
        members[_ml_classify(kind, q, u)].append(u)
    need = 2 * t + 1
    e = len(image)
    rows = [[0] * e for _ in range(e)]
    for i in range(e):
        for j in range(i + 1, e):
            d = min(
                (a ^ b).bit_count()
                for a in members[image[i]]
                for b in members[image[j]]
            )
            rows[i][j] = rows[j][i] = max(need - d, 0)
    return DistanceMatrix.from_rows(rows)


def wt_requirement_matrix(k: int, t: int) -> DistanceMatrix:
    """Requirement matrix between weight values, in closed form.

    Weights i and j admit messages as close as |i - j|, so the entry is
    max(2t+1 - |i - j|, 0). Equal to the generic value-distance matrix of
    wt_spec(k) but costs nothing to build, whatever k.
    """
    if k < 1 or t < 1:
        raise ValueError(f"need k >= 1 and t >= 1, got ({k}, {t})")
    need = 2 * t + 1
    return DistanceMatrix.from_rows(
        [
            [max(need - abs(i - j), 0) if i != j else 0 for j in range(k + 1)]
            for i in range(k + 1)
        ]
    )


# --- specialized encoders ---------------------------------------------------


def _wt_parity_base(t: int) -> Code:
    """The parity cycle for weight protection: 2t+1 words, one per residue.

    For one and two errors these are small hand-picked optimal codes; beyond
    that, any 2t+1 words pairwise 2t apart do (cyclically adjacent residues
    carry the tightest requirement, 2t). A Hadamard-derived code supplies
    them at length 4t when 4t is a power of two; otherwise a greedy build at
    its existence threshold.
    """
    if t == 1:
        return Code.from_strings(["000", "110", "011"])
    if t == 2:
        return Code.from_strings(
            [
                "000000", "110011", "001111", "111100",
                "000001", "110010", "001110", "111101",
            ]
        )
    count = 2 * t + 1
    had = construct.hadamard_code(2 * t)
    if had is not None:
        return Code.of(had.words[:count], had.length)
    dmat = DistanceMatrix.uniform(count, 2 * t)
    code = construct.greedy_irregular_code(dmat, gv_irregular_threshold(dmat))
    assert code is not None
    return code


def wt_cyclic_encoder(k: int, t: int) -> FccEncoder:
    """Weight-protecting encoder: parity = base word for wt(u) mod the cycle.

    Weights whose difference is below 2t+1 need parities making up the gap;
    the base cycle's distances cover every residue offset, and weights a full
    cycle apart are already 2t+1 apart in the message alone. Redundancy 3
    for t=1 and 6 for t=2 (both optimal), the base length beyond.
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    if k <= t:
        raise ValueError(f"need k > t, got k={k}, t={t}")
    base = _wt_parity_base(t)
    period = base.size
    spec = wt_spec(k)
    parities = tuple(base[wgt % period] for wgt in range(k + 1))
    return FccEncoder(spec, t, base.length, PER_VALUE, parities)


def delta_ramp_encoder(k: int, T: int, t: int) -> FccEncoder:
    """Weight-block encoder with ramp parities of length exactly 2t.

    Parity for weight wgt is 1^(wgt mod T) padded with zeros when that prefix
    fits in 2t bits, else all ones; indices then repeat every T weights.
    Needs 2t+1 <= T: inside a block the value doesn't change, and across the
    block boundary the ramp wraps from all-ones back to all-zeros, paying the
    full 2t where the messages themselves differ least.
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    if 2 * t + 1 > T:
        raise ValueError(f"need 2t+1 <= T, got t={t}, T={T}")
    if k > 16:
        raise ValueError(f"k={k} too large for a per-message parity table")
    r = 2 * t
    ramp = []
    for residue in range(T):
        ones = min(residue, r)
        ramp.append(BitWord.ones(ones).concat(BitWord.zeros(r - ones)))
    spec = delta_spec(k, T)
    parities = tuple(ramp[u.bit_count() % T] for u in range(1 << k))
    return FccEncoder(spec, t, r, PER_MESSAGE, parities)


# --- locally binary functions ------------------------------------------------


def locally_binary_encoder(spec: FunctionSpec, t: int) -> FccEncoder:
    """One indicator bit repeated 2t times, for functions that are locally
    two-valued at radius 2t.

    The bit says whether f(u) is the larger of the (at most two) values in
    u's radius-2t ball. Messages with different values within distance 2t
    then disagree on the full parity, and anything further apart needs no
    parity help. Redundancy exactly 2t.
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    ok, witness = fcc.is_locally_binary(spec, 2 * t)
    if not ok:
        raise ValueError(
            f"{spec.name} is not {2 * t}-locally binary (witness {witness})"
        )
    k = spec.k
    ones = BitWord.ones(2 * t)
    zeros = BitWord.zeros(2 * t)
    parities = []
    for u in range(1 << k):
        ball = fcc.function_ball(spec, BitWord(u, k), 2 * t)
        top = max(ball)
        parities.append(ones if spec.fn(u) == top else zeros)
    return FccEncoder(spec, t, 2 * t, PER_MESSAGE, tuple(parities))


def locally_binary_decode(spec: FunctionSpec, t: int, y: BitWord):
    """Recover f(u) from a received (u, p) pair of the repetition encoder.

    If every message within distance t of the received message already agrees
    on f, that value is the answer regardless of the parity bits. Otherwise
    the ball holds exactly two values and the majority of the 2t+1 indicator
    bits — the receiver's own recomputed bit plus the 2t received ones —
    says whether to take the larger or the smaller.
    """
    k = spec.k
    if y.length != k + 2 * t:
        raise ValueError(f"received length {y.length}, expected {k + 2 * t}")
    u, p = y.split(k)
    ball_t = fcc.function_ball(spec, u, t)
    if len(ball_t) == 1:
        return next(iter(ball_t))
    ball_2t = fcc.function_ball(spec, u, 2 * t)
    own = 1 if spec.eval(u) == max(ball_2t) else 0
    votes = own + p.weight()
    return max(ball_t) if votes >= t + 1 else min(ball_t)


# --- min-max -----------------------------------------------------------------


@dataclass(frozen=True)
class MinMaxOracleResult:
    """Exhaustively measured value-distance landscape of a min-max spec."""

    spec: FunctionSpec
    distances: DistanceMatrix  # raw closest-approach distances, not requirements
    neighbor_counts: tuple[int, ...]  # per value: values at distance exactly 1


def minmax_distance_oracle(w: int, l: int) -> MinMaxOracleResult:
    """Brute-force all pairwise value distances of the min-max function.

    Ground truth for the structural facts the cheap encoders rely on: the
    farthest pairs are the swapped (i,j)/(j,i) ones at distance 2, and every
    value has exactly 4(w-2) values at distance 1.
    """
    spec = minmax_spec(w, l)
    if spec.k > 18:
        raise ValueError(f"k={spec.k} too large for the exhaustive oracle")
    e = spec.expressiveness
    rows = [[0] * e for _ in range(e)]
    for i in range(e):
        for j in range(i + 1, e):
            d = fcc.function_distance(spec, spec.image[i], spec.image[j])
            rows[i][j] = rows[j][i] = d
    counts = tuple(sum(1 for d in row if d == 1) for row in rows)
    return MinMaxOracleResult(spec, DistanceMatrix.from_rows(rows), counts)


def minmax_parity_encoder(w: int, l: int, t: int) -> FccEncoder:
    """Min-max encoder from a replicated even-weight code.

    Distinct values sit at message distance >= 1, so parities pairwise 2t
    apart suffice; replicating a distance-2 even-weight code t-fold provides
    w(w-1) of them at length t(ceil(log2(w(w-1))) + 1).
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    spec = minmax_spec(w, l)
    e = spec.expressiveness
    width = (max(e - 1, 1)).bit_length() + 1  # ceil(log2 e) + 1
    base = construct.even_weight_subcode(e, width)
    code = construct.replicate_bits(base, t)
    return FccEncoder(spec, t, code.length, PER_VALUE, tuple(code.words))


def minmax_rm_encoder(w: int, t: int, l: int = 3) -> FccEncoder:
    """Min-max encoder drawing parities from a Reed-Muller code.

    Picks the smallest m (then the smallest order) whose RM(order, m) has
    min distance >= 2t and at least w(w-1) codewords; the first w(w-1)
    codewords become the parities. Redundancy 2^m — asymptotically near 4t
    when w is small relative to t. The block length l only sizes the message
    domain; the parities depend on (w, t) alone.
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    spec = minmax_spec(w, l)
    e = spec.expressiveness
    need_dim = (max(e - 1, 1)).bit_length()  # ceil(log2 e)
    dist_gap = (2 * t - 1).bit_length()  # smallest g with 2^g >= 2t
    m = 0
    while True:
        chosen = None
        for order in range(m + 1):
            if m - order < dist_gap:
                break
            if sum(math.comb(m, i) for i in range(order + 1)) >= need_dim:
                chosen = order
                break
        if chosen is not None:
            break
        m += 1
    rm = construct.reed_muller_code(chosen, m)
    parities = tuple(rm.words[:e])
    sub = Code.of(parities, rm.length)
    if construct.min_distance(sub) < 2 * t:  # pragma: no cover - by design
        raise AssertionError("Reed-Muller subcode lost its distance")
    return FccEncoder(spec, t, rm.length, PER_VALUE, parities)


# --- registry glue -----------------------------------------------------------


def _get(params: dict[str, str], key: str, parse, default=None):
    if key in params:
        return parse(params[key])
    if default is not None:
        return default
    raise ValueError(f"missing parameter {key!r}")


def _check_keys(params: dict[str, str], allowed: set[str]) -> None:
    extra = set(params) - allowed - {"t"}
    if extra:
        raise ValueError(f"unexpected parameters: {sorted(extra)}")


def _build_wt(p: dict[str, str]) -> FunctionSpec:
    _check_keys(p, {"k"})
    return wt_spec(_get(p, "k", int))


def _build_parity(p: dict[str, str]) -> FunctionSpec:
    _check_keys(p, {"k"})
    return parity_spec(_get(p, "k", int))


def _build_or(p: dict[str, str]) -> FunctionSpec:
    _check_keys(p, {"k"})
    return or_spec(_get(p, "k", int))


def _build_constant(p: dict[str, str]) -> FunctionSpec:
    _check_keys(p, {"k"})
    return constant_spec(_get(p, "k", int))


def _build_delta(p: dict[str, str]) -> FunctionSpec:
    _check_keys(p, {"k", "T"})
    return delta_spec(_get(p, "k", int), _get(p, "T", int))


def _build_minmax(p: dict[str, str]) -> FunctionSpec:
    _check_keys(p, {"k", "w", "l"})
    w = _get(p, "w", int)
    l = _get(p, "l", int)
    if "k" in p and int(p["k"]) != w * l:
        raise ValueError(f"k={p['k']} inconsistent with w*l={w * l}")
    return minmax_spec(w, l)


def _build_indicator(p: dict[str, str]) -> FunctionSpec:
    _check_keys(p, {"k", "path"})
    path = _get(p, "path", str)
    with open(path, "r", encoding="utf-8") as fh:
        code = Code.from_text(fh.read())
    if "k" in p and int(p["k"]) != code.length:
        raise ValueError(f"k={p['k']} inconsistent with codeword length {code.length}")
    return indicator_spec(code, name=f"indicator:path={path}")


def _build_ml(p: dict[str, str]) -> FunctionSpec:
    _check_keys(p, {"k", "kind", "arg", "eps", "a", "b"})
    kind_name = p.get("kind") or p.get("arg")
    if kind_name is None:
        raise ValueError("ml needs a kind, e.g. ml:sigmoid,k=5,eps=1")
    lo = Fraction(p["a"]) if "a" in p else None
    hi = Fraction(p["b"]) if "b" in p else None
    style = _ML_DEFAULTS.get(kind_name, (None, None, None))[0]
    if style == SYMMETRIC and lo is not None and hi is None:
        lo, hi = Fraction(0), lo  # one-sided cutoff given as a=
    kind = ml_kind(kind_name, lo, hi)
    q = Quantizer(_get(p, "k", int), _get(p, "eps", Fraction))
    return ml_spec(kind, q)


def _register_all() -> None:
    fcc.register_spec_builder("wt", _build_wt)
    fcc.register_spec_builder("parity", _build_parity)
    fcc.register_spec_builder("or", _build_or)
    fcc.register_spec_builder("constant", _build_constant)
    fcc.register_spec_builder("delta_T", _build_delta)
    fcc.register_spec_builder("minmax", _build_minmax)
    fcc.register_spec_builder("indicator", _build_indicator)
    fcc.register_spec_builder("ml", _build_ml)


_register_all()
