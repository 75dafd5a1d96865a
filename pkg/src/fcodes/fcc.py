"""Function-correcting encoders: requirement matrices, builders, verification.

A systematic encoder sends (u, p(u)); it protects a function f when any two
messages with different f-values end up at combined distance >= 2t+1, so a
receiver seeing at most t substitutions can always recover f(u) (never
necessarily u itself). This module turns a function into its distance
requirements, builds parity rules meeting them, checks encoders exhaustively,
and decodes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Any, Callable, Iterable, Sequence

from . import bounds, construct
from .bits import BitWord, Code, DistanceMatrix, all_words

FunctionValue = Any  # any value with equality and a stable total order


class FunctionSpec:
    """A total function on k-bit messages with an enumerated, ordered image.

    `fn` maps the integer form of a message (bit 0 = leftmost) to a value;
    `image` fixes the indexing order used by every matrix in this package.
    The image is validated against an exhaustive sweep for k <= 16 and a
    deterministic sample above that.
    """

    def __init__(
        self,
        k: int,
        fn: Callable[[int], FunctionValue],
        image: Iterable[FunctionValue],
        *,
        name: str = "f",
        value_label: Callable[[FunctionValue], str] | None = None,
    ):
        if k < 1:
            raise ValueError(f"need k >= 1, got {k}")
        self.k = k
        self.fn = fn
        self.image = tuple(image)
        self.name = name
        self.value_label = value_label or str
        if len(set(self.image)) != len(self.image):
            raise ValueError("image contains duplicates")
        self._index = {v: i for i, v in enumerate(self.image)}
        self._validate()

    def _validate(self) -> None:
        if self.k <= 16:
            seen = [False] * len(self.image)
            for u in range(1 << self.k):
                i = self._index.get(self.fn(u))
                if i is None:
                    raise ValueError(f"f({u:0{self.k}b}) not in declared image")
                seen[i] = True
            if not all(seen):
                missing = [v for v, s in zip(self.image, seen) if not s]
                raise ValueError(f"image values never attained: {missing!r}")
        else:
            rng = random.Random(0)
            sample = {0, (1 << self.k) - 1}
            sample.update(rng.randrange(1 << self.k) for _ in range(256))
            for u in sample:
                if self.fn(u) not in self._index:
                    raise ValueError(f"f({u:0{self.k}b}) not in declared image")

    @property
    def expressiveness(self) -> int:
        return len(self.image)

    def eval(self, u: BitWord) -> FunctionValue:
        if u.length != self.k:
            raise ValueError(f"message length {u.length}, expected {self.k}")
        return self.fn(u.value)

    def index_of(self, value: FunctionValue) -> int:
        try:
            return self._index[value]
        except KeyError:
            raise ValueError(f"value {value!r} not in image") from None

    @cached_property
    def index_table(self) -> list[int]:
        """Image index of f(u) for every message integer u (2^k entries)."""
        if self.k > 24:
            raise ValueError(f"k={self.k} too large to tabulate")
        idx = self._index
        fn = self.fn
        return [idx[fn(u)] for u in range(1 << self.k)]

    @cached_property
    def preimage_masks(self) -> tuple[int, ...]:
        """Per image index, the set of preimages as a 2^k-bit integer mask."""
        masks = [0] * len(self.image)
        for u, i in enumerate(self.index_table):
            masks[i] |= 1 << u
        return tuple(masks)

    def __repr__(self) -> str:  # pragma: no cover - debugging nicety
        return f"FunctionSpec({self.name!r}, k={self.k}, E={self.expressiveness})"


# --- distance requirements -------------------------------------------------


def distance_requirement_matrix(
    spec: FunctionSpec, t: int, us: Sequence[BitWord]
) -> DistanceMatrix:
    """Pairwise parity-distance requirements for the given messages.

    Entry (i, j) is max(2t+1 - d(u_i, u_j), 0) when the function values
    differ and 0 when they agree: exactly what the parity words must make up
    for the messages' own distance.
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    vals = []
    seen = set()
    for u in us:
        if u.length != spec.k:
            raise ValueError(f"message length {u.length}, expected {spec.k}")
        if u.value in seen:
            raise ValueError(f"duplicate message {u}")
        seen.add(u.value)
        vals.append((u.value, spec.fn(u.value)))
    need = 2 * t + 1
    m = len(vals)
    rows = []
    for i in range(m):
        vi, fi = vals[i]
        row = []
        for j in range(m):
            vj, fj = vals[j]
            if i == j or fi == fj:
                row.append(0)
            else:
                row.append(max(need - (vi ^ vj).bit_count(), 0))
        rows.append(tuple(row))
    return DistanceMatrix(tuple(rows))


_EXPAND_PATTERNS: dict[int, list[int]] = {}


def _bit_set_patterns(k: int) -> list[int]:
    """For each message bit b, the mask of all messages with that bit set."""
    if k not in _EXPAND_PATTERNS:
        pats = []
        for b in range(k):
            s = 1 << b
            block = ((1 << s) - 1) << s
            pat = 0
            for i in range(1 << (k - b - 1)):
                pat |= block << (i * 2 * s)
            pats.append(pat)
        _EXPAND_PATTERNS[k] = pats
    return _EXPAND_PATTERNS[k]


def _expand_once(mask: int, k: int) -> int:
    """The mask together with every message one bit flip away from it."""
    out = mask
    for b, pat in enumerate(_bit_set_patterns(k)):
        s = 1 << b
        out |= (mask & ~pat) << s
        out |= (mask & pat) >> s
    return out


def function_distance(spec: FunctionSpec, f1: FunctionValue, f2: FunctionValue) -> int:
    """Smallest Hamming distance between preimages of two function values.

    Zero when the values coincide. Computed by growing Hamming shells around
    one preimage set (as a bit mask over all messages) until the other is hit.
    """
    i = spec.index_of(f1)
    j = spec.index_of(f2)
    if i == j:
        return 0
    m1 = spec.preimage_masks[i]
    m2 = spec.preimage_masks[j]
    k = spec.k
    seen = m1
    d = 0
    while not seen & m2:
        seen = _expand_once(seen, k)
        d += 1
        if d > k:  # pragma: no cover - nonempty masks always meet within k
            raise AssertionError("shell expansion failed to terminate")
    return d


def function_distance_matrix(spec: FunctionSpec, t: int) -> DistanceMatrix:
    """Requirement matrix between function values, indexed in image order.

    Entry (i, j) is max(2t+1 - d_f(f_i, f_j), 0) where d_f is the closest
    approach between the two preimage sets. This is what per-function-value
    parity words must satisfy.
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    e = spec.expressiveness
    need = 2 * t + 1
    rows = [[0] * e for _ in range(e)]
    for i in range(e):
        for j in range(i + 1, e):
            d = function_distance(spec, spec.image[i], spec.image[j])
            rows[i][j] = rows[j][i] = max(need - d, 0)
    return DistanceMatrix.from_rows(rows)


# --- encoders ----------------------------------------------------------------

PER_VALUE = "per-function-value"
PER_MESSAGE = "per-message"


@dataclass(frozen=True)
class FccEncoder:
    """A systematic encoder u -> (u, p(u)) with a tabulated parity rule.

    In per-function-value mode `parities` is indexed by image index; in
    per-message mode by the message integer itself.
    """

    spec: FunctionSpec
    t: int
    r: int
    mode: str
    parities: tuple[BitWord, ...]

    def __post_init__(self) -> None:
        if self.mode not in (PER_VALUE, PER_MESSAGE):
            raise ValueError(f"unknown mode {self.mode!r}")
        expected = (
            self.spec.expressiveness if self.mode == PER_VALUE else 1 << self.spec.k
        )
        if len(self.parities) != expected:
            raise ValueError(
                f"{self.mode} encoder needs {expected} parities, got {len(self.parities)}"
            )
        for p in self.parities:
            if p.length != self.r:
                raise ValueError(f"parity {p} has length {p.length}, expected {self.r}")

    @property
    def block_length(self) -> int:
        return self.spec.k + self.r

    def parity(self, u: BitWord) -> BitWord:
        if u.length != self.spec.k:
            raise ValueError(f"message length {u.length}, expected {self.spec.k}")
        if self.mode == PER_VALUE:
            return self.parities[self.spec.index_of(self.spec.fn(u.value))]
        return self.parities[u.value]

    def encode(self, u: BitWord) -> BitWord:
        return u.concat(self.parity(u))

    @cached_property
    def parity_ints(self) -> list[int]:
        """Parity of every message, as integers indexed by message value."""
        if self.mode == PER_MESSAGE:
            return [p.value for p in self.parities]
        by_index = [p.value for p in self.parities]
        return [by_index[i] for i in self.spec.index_table]

    @cached_property
    def codeword_ints(self) -> list[int]:
        """Full codeword integers indexed by message value."""
        r = self.r
        return [(u << r) | p for u, p in enumerate(self.parity_ints)]


def build_function_value_encoder(spec: FunctionSpec, t: int) -> FccEncoder:
    """Encoder whose parity depends on the function value only.

    Builds the value-level requirement matrix, takes the better of the
    identity and descending-row-sum greedy thresholds, and fills the parities
    first-fit at that length. The greedy build cannot fail there, and the
    resulting encoder protects f against t substitutions: messages with
    different values are either 2t+1 apart already or their parities make up
    the difference.
    """
    dmat = function_distance_matrix(spec, t)
    r_id = bounds.gv_irregular_threshold(dmat)
    order: Sequence[int] | None = None
    r = r_id
    heur = bounds.heuristic_row_order(dmat)
    r_heur = bounds.gv_irregular_threshold(dmat, heur)
    if r_heur < r_id:
        order = heur
        r = r_heur
    code = construct.greedy_irregular_code(dmat, r, order)
    if code is None:  # pragma: no cover - contradicts the threshold guarantee
        raise RuntimeError("greedy build failed at its own existence threshold")
    return FccEncoder(spec, t, r, PER_VALUE, tuple(code.words))


def per_message_encoder(spec: FunctionSpec, t: int, parities: Sequence[BitWord]) -> FccEncoder:
    """Wrap an explicit per-message parity table (one word per message)."""
    ps = tuple(parities)
    r = ps[0].length if ps else 0
    return FccEncoder(spec, t, r, PER_MESSAGE, ps)


# --- verification and decoding ----------------------------------------------


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    witness: tuple[BitWord, BitWord] | None
    pairs_checked: int
    mode: str  # "exhaustive" | "sampled"

    def __bool__(self) -> bool:
        return self.ok


def verify_fcc(
    encoder: FccEncoder, *, sample: int | None = None, seed: int = 0
) -> VerifyResult:
    """Check the distance condition for every message pair (or a sample).

    Exhaustive mode enumerates difference vectors of weight 1..2t only: pairs
    further apart satisfy the condition on message distance alone. The
    witness, if any, is the lexicographically smallest violating (u1, u2)
    with u1 < u2. Exhaustive mode requires k <= 14; ask for `sample` beyond.
    """
    spec = encoder.spec
    k, t = spec.k, encoder.t
    idx = spec.index_table
    par = encoder.parity_ints
    need = 2 * t + 1
    if sample is not None:
        rng = random.Random(seed)
        space = 1 << k
        checked = 0
        for _ in range(sample):
            u1 = rng.randrange(space)
            u2 = rng.randrange(space)
            if u1 == u2 or idx[u1] == idx[u2]:
                continue
            checked += 1
            d = (u1 ^ u2).bit_count() + (par[u1] ^ par[u2]).bit_count()
            if d < need:
                lo, hi = sorted((u1, u2))
                return VerifyResult(False, (BitWord(lo, k), BitWord(hi, k)), checked, "sampled")
        return VerifyResult(True, None, checked, "sampled")

    if k > 14:
        raise ValueError(f"k={k} too large for exhaustive verification; pass sample=")
    diffs = []
    for wgt in range(1, 2 * t + 1):
        for pos in combinations(range(k), wgt):
            e = 0
            for p in pos:
                e |= 1 << p
            diffs.append(e)
    checked = 0
    for u1 in range(1 << k):
        i1 = idx[u1]
        p1 = par[u1]
        best_u2 = -1
        for e in diffs:
            u2 = u1 ^ e
            if u2 <= u1 or idx[u2] == i1:
                continue
            checked += 1
            if e.bit_count() + (p1 ^ par[u2]).bit_count() < need:
                if best_u2 < 0 or u2 < best_u2:
                    best_u2 = u2
        if best_u2 >= 0:
            return VerifyResult(
                False, (BitWord(u1, k), BitWord(best_u2, k)), checked, "exhaustive"
            )
    return VerifyResult(True, None, checked, "exhaustive")


@dataclass(frozen=True)
class DecodeResult:
    value: FunctionValue
    out_of_model: bool
    distance: int


def decode(encoder: FccEncoder, y: BitWord) -> DecodeResult:
    """Recover the function value from a received word.

    Nearest-codeword search over all messages, reporting the value of the
    closest one. Within the design guarantee (y at distance <= t from some
    codeword of a verified encoder) the value is unique. Outside it —
    best distance above t, or distinct values tied at the best distance —
    the result carries out_of_model=True and ties resolve to the smallest
    image index.
    """
    spec = encoder.spec
    if y.length != encoder.block_length:
        raise ValueError(f"received length {y.length}, expected {encoder.block_length}")
    idx = spec.index_table
    best_d = y.length + 1
    best_indices: set[int] = set()
    yv = y.value
    for u, cw in enumerate(encoder.codeword_ints):
        d = (cw ^ yv).bit_count()
        if d < best_d:
            best_d = d
            best_indices = {idx[u]}
            if d == 0:
                break
        elif d == best_d:
            best_indices.add(idx[u])
    chosen = min(best_indices)
    out = best_d > encoder.t or len(best_indices) > 1
    return DecodeResult(spec.image[chosen], out, best_d)


def exact_optimal_redundancy(
    spec: FunctionSpec, t: int, budget: construct.SearchBudget | None = None
) -> construct.ExactLengthResult:
    """The true optimal redundancy for spec at t, by exhaustive search.

    Builds the requirement matrix over every message (so parities may depend
    on the whole message, not just its value) and finds the smallest length
    satisfying it. Feasible only for small k; guarded at k <= 6.
    """
    if spec.k > 6:
        raise ValueError(f"exact search over 2^{spec.k} rows is not feasible")
    dmat = distance_requirement_matrix(spec, t, list(all_words(spec.k)))
    return construct.exact_min_length(dmat, budget)


def encoder_from_exact_witness(
    spec: FunctionSpec, t: int, code: Code
) -> FccEncoder:
    """Per-message encoder from an exact-search witness (row u = parity of u)."""
    if code.size != 1 << spec.k:
        raise ValueError(f"witness has {code.size} rows, expected {1 << spec.k}")
    return per_message_encoder(spec, t, tuple(code.words))


# --- function balls ----------------------------------------------------------


def function_ball(spec: FunctionSpec, u: BitWord, rho: int) -> frozenset:
    """All values f takes within Hamming distance rho of u."""
    if u.length != spec.k:
        raise ValueError(f"message length {u.length}, expected {spec.k}")
    if rho < 0:
        raise ValueError(f"negative radius {rho}")
    idx = spec.index_table
    out = {idx[u.value]}
    for wgt in range(1, min(rho, spec.k) + 1):
        for pos in combinations(range(spec.k), wgt):
            e = 0
            for p in pos:
                e |= 1 << p
            out.add(idx[u.value ^ e])
    return frozenset(spec.image[i] for i in out)


def is_locally_binary(spec: FunctionSpec, rho: int) -> tuple[bool, BitWord | None]:
    """Whether every radius-rho ball sees at most two function values.

    On failure returns the smallest message (as an integer) whose ball
    witnesses three values.
    """
    if rho < 0:
        raise ValueError(f"negative radius {rho}")
    k = spec.k
    idx = spec.index_table
    diffs = []
    for wgt in range(1, min(rho, k) + 1):
        for pos in combinations(range(k), wgt):
            e = 0
            for p in pos:
                e |= 1 << p
            diffs.append(e)
    for u in range(1 << k):
        first = idx[u]
        second = -1
        for e in diffs:
            i = idx[u ^ e]
            if i != first:
                if second < 0:
                    second = i
                elif i != second:
                    return False, BitWord(u, k)
    return True, None


# --- registry and serialization ----------------------------------------------

_REGISTRY: dict[str, Callable[[dict[str, str]], FunctionSpec]] = {}


def register_spec_builder(
    name: str, builder: Callable[[dict[str, str]], FunctionSpec]
) -> None:
    """Register a named spec family; `builder` gets raw string parameters."""
    _REGISTRY[name] = builder


def registered_spec_names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def spec_from_string(text: str, defaults: dict[str, str] | None = None) -> FunctionSpec:
    """Build a spec from a registry string like "wt", "delta_T:T=3", or
    "ml:sigmoid,k=5,eps=1".

    The part before ':' names the family; the rest is a comma list of
    key=value pairs. A single bare token is passed as the parameter "arg"
    (the ml family reads its kind that way). `defaults` fills missing keys
    (the CLI passes --k and --t through it).
    """
    name, _, rest = text.strip().partition(":")
    name = name.strip()
    if name not in _REGISTRY:
        raise ValueError(f"unknown function {name!r}; known: {', '.join(registered_spec_names())}")
    params: dict[str, str] = {}
    if rest:
        for token in rest.split(","):
            token = token.strip()
            if not token:
                continue
            if "=" in token:
                key, _, val = token.partition("=")
                params[key.strip()] = val.strip()
            elif "arg" not in params:
                params["arg"] = token
            else:
                raise ValueError(f"more than one bare parameter in {text!r}")
    for key, val in (defaults or {}).items():
        params.setdefault(key, val)
    return _REGISTRY[name](params)


ENCODER_HEADER = "fcodes encoder v1"


def encoder_to_text(encoder: FccEncoder) -> str:
    """Serialize an encoder as a commented bitcore code file.

    The parity table doubles as a loadable plain code; the headers carry
    enough to rebuild the encoder when the function is registry-addressable.
    """
    lines = [
        f"# {ENCODER_HEADER}",
        f"# function: {encoder.spec.name}",
        f"# k: {encoder.spec.k}",
        f"# t: {encoder.t}",
        f"# r: {encoder.r}",
        f"# mode: {encoder.mode}",
    ]
    if encoder.r > 0:
        lines.extend(str(p) for p in encoder.parities)
    else:
        lines.append("# (no parity bits)")
    return "\n".join(lines) + "\n"


def encoder_from_text(text: str, spec: FunctionSpec | None = None) -> FccEncoder:
    """Rebuild an encoder serialized by encoder_to_text.

    A spec may be supplied to override the registry lookup (it must agree on
    k). Raises on malformed headers or a parity table of the wrong size.
    """
    headers: dict[str, str] = {}
    body: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            content = line[1:].strip()
            key, sep, val = content.partition(":")
            if sep:
                headers[key.strip()] = val.strip()
            continue
        body.append(line)
    for required in ("k", "t", "r", "mode"):
        if required not in headers:
            raise ValueError(f"encoder file missing '{required}' header")
    k = int(headers["k"])
    t = int(headers["t"])
    r = int(headers["r"])
    mode = headers["mode"]
    if spec is None:
        if "function" not in headers:
            raise ValueError("encoder file names no function and no spec was given")
        spec = spec_from_string(headers["function"], defaults={"k": str(k)})
    if spec.k != k:
        raise ValueError(f"spec has k={spec.k} but encoder file says {k}")
    if r == 0:
        count = spec.expressiveness if mode == PER_VALUE else 1 << k
        parities = tuple(BitWord.zeros(0) for _ in range(count))
    else:
        parities = tuple(BitWord.from_string(s) for s in body)
    return FccEncoder(spec, t, r, mode, parities)
