"""Hyperbolic Coxeter polytopes given by Lorentz normals, and Monte-Carlo volumes.

Coordinates are (x_1, ..., x_n, t) with <u, v> = u_1 v_1 + ... + u_n v_n - u_t v_t.
A polytope is {v : <v, e_i> <= 0 for all i} intersected with the future cone,
and in the Klein model it is the Euclidean polytope cut out by the lifts (x, 1).

Normals file format::

    dim D          # ambient dimension n + 1
    sides s
    <D rows of s entries>   # column j is normal j

Entries follow ``[-] (a | a/b) [* sqrt(c | c/d)] | [-] sqrt(c | c/d)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np
from scipy.optimize import linprog

from .errors import DegenerateSpec, NotHyperbolic, NotUnitNormal, ParseError
from .surd import SurdScalar, dot_lorentz, exact_cos_pi_over, parse_surd

CHUNK = 1_000_000
MIN_SAMPLES = 10_000
DEFAULT_SWEEP = (1e-2, 1e-3, 1e-4)


@dataclass
class PolytopeSpec:
    ambient_dim: int
    normals: list[list[SurdScalar]] | None
    float_normals: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.float_normals is None:
            if self.normals is None:
                raise ValueError("a polytope needs normals")
            self.float_normals = np.array([[float(x) for x in col] for col in self.normals])
        self.float_normals = np.asarray(self.float_normals, dtype=float)
        if self.float_normals.shape[1] != self.ambient_dim:
            raise ValueError("normal length does not match ambient_dim")

    @property
    def n(self) -> int:
        return self.ambient_dim - 1

    @property
    def exact(self) -> bool:
        return self.normals is not None

    @property
    def sides(self) -> int:
        return len(self.float_normals)


def _parse_rows(text: str) -> tuple[int, int, list[list[SurdScalar]]]:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if len(lines) < 2:
        raise ParseError("expected 'dim D' and 'sides s' header lines")
    header = {}
    for lineno, line in lines[:2]:
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("dim", "sides"):
            raise ParseError(f"expected 'dim D' or 'sides s', got {line!r}", lineno)
        try:
            header[parts[0]] = int(parts[1])
        except ValueError:
            raise ParseError(f"{parts[0]} value {parts[1]!r} is not an integer", lineno) from None
    if set(header) != {"dim", "sides"}:
        raise ParseError("both 'dim' and 'sides' are required")
    D, s = header["dim"], header["sides"]
    body = lines[2:]
    if len(body) != D:
        where = body[D][0] if len(body) > D else None
        raise ParseError(f"expected {D} matrix rows, found {len(body)}", where)
    rows = []
    for lineno, line in body:
        entries = line.split()
        if len(entries) != s:
            raise ParseError(f"expected {s} entries, found {len(entries)}", lineno)
        try:
            rows.append([parse_surd(e) for e in entries])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    return D, s, rows


def parse_matrix(text: str) -> list[list[SurdScalar]]:
    """Rows of an exact matrix in the normals file format (no unit check)."""
    _, _, rows = _parse_rows(text)
    return rows


def parse_normals(text: str) -> PolytopeSpec:
    D, s, rows = _parse_rows(text)
    columns = [[rows[i][j] for i in range(D)] for j in range(s)]
    for j, col in enumerate(columns):
        norm = dot_lorentz(col, col)
        if norm != 1:
            raise NotUnitNormal(j + 1, norm)
    return PolytopeSpec(D, columns)


def format_normals(spec: PolytopeSpec) -> str:
    from .surd import format_surd

    lines = [f"dim {spec.ambient_dim}", f"sides {spec.sides}"]
    for i in range(spec.ambient_dim):
        lines.append(" ".join(format_surd(col[i]) for col in spec.normals))
    return "\n".join(lines) + "\n"


def gram_matrix(spec: PolytopeSpec) -> list[list[SurdScalar]]:
    if not spec.exact:
        raise ValueError("exact Gram matrix needs exact normals")
    return [[dot_lorentz(a, b) for b in spec.normals] for a in spec.normals]


ADMISSIBLE_OFF_DIAGONAL = (
    SurdScalar(0),
    SurdScalar(Fraction(-1, 2)),
    SurdScalar(0, Fraction(-1, 2)),
    SurdScalar(0, 0, Fraction(-1, 2)),
)


def coxeter_admissible(spec: PolytopeSpec, allow_divergent: bool = True) -> list[tuple[int, int, SurdScalar]]:
    """Off-diagonal Gram entries that are not -cos(pi/m) for m in {2,3,4,6} (or <= -1).

    An empty list means every pair of sides meets at a Coxeter angle or is
    parallel/ultraparallel.
    """
    G = gram_matrix(spec)
    bad = []
    for i, j in itertools.combinations(range(spec.sides), 2):
        g = G[i][j]
        if g in ADMISSIBLE_OFF_DIAGONAL:
            continue
        if allow_divergent and g <= -1:
            continue
        bad.append((i + 1, j + 1, g))
    return bad


def lorentz_identity(dim: int) -> list[list[SurdScalar]]:
    J = [[SurdScalar(0) for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        J[i][i] = SurdScalar(1 if i < dim - 1 else -1)
    return J


def _matmul(A, B):
    return [
        [sum((A[i][k] * B[k][j] for k in range(len(B))), SurdScalar(0)) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def _transpose(A):
    return [list(r) for r in zip(*A)]


@dataclass(frozen=True)
class SigmaCheck:
    preserves_form: bool
    involution: bool

    def __bool__(self):
        return self.preserves_form and self.involution

    def describe(self) -> str:
        failed = [
            name
            for name, ok in (("sigma^t J sigma = J", self.preserves_form), ("sigma^2 = I", self.involution))
            if not ok
        ]
        return "ok" if not failed else "failed: " + ", ".join(failed)


def validate_sigma(sigma: list[list[SurdScalar]] | None = None) -> SigmaCheck:
    """Exact check that sigma is a Lorentz isometry and an involution."""
    if sigma is None:
        sigma = load_sigma7()
    dim = len(sigma)
    J = lorentz_identity(dim)
    eye = [[SurdScalar(1 if i == j else 0) for j in range(dim)] for i in range(dim)]
    form = _matmul(_matmul(_transpose(sigma), J), sigma) == J
    square = _matmul(sigma, sigma) == eye
    return SigmaCheck(form, square)


# --------------------------------------------------------------------------
# building normals from a Gram matrix
# --------------------------------------------------------------------------


def _exact_sqrt(x: SurdScalar) -> SurdScalar:
    if not x.is_rational():
        raise ValueError("square root of an irrational surd")
    return SurdScalar.sqrt_of_rational(x.to_fraction())


def _complete(G, sqrt, zero, one):
    """Vectors e_0..e_n in signature (n, 1) with <e_i, e_j> = G[i][j].

    e_i for i < n only uses the first i+1 space coordinates, the last vector
    takes the time coordinate.  Coordinates come from forward substitution.
    """
    m = len(G)
    vecs = []
    for i in range(m):
        v = [zero] * m
        for j in range(min(i, m - 1)):
            acc = G[i][j]
            for k in range(j):
                acc = acc - v[k] * vecs[j][k]
            v[j] = acc / vecs[j][j]
        sq = zero
        for k in range(min(i, m - 1)):
            sq = sq + v[k] * v[k]
        if i < m - 1:
            rest = one - sq
            if not rest > zero:
                raise NotHyperbolic("Gram matrix is not of signature (n, 1) in this order")
            v[i] = sqrt(rest)
        else:
            rest = sq - one
            if not rest > zero:
                raise NotHyperbolic("Gram matrix does not describe a hyperbolic simplex")
            v[m - 1] = sqrt(rest)
        vecs.append(v)
    return vecs


def normals_from_gram(G) -> PolytopeSpec:
    """Lorentz unit normals realizing a Gram matrix of signature (n, 1).

    Exact over Q(sqrt2, sqrt3) when some vertex ordering keeps every square
    root rational, otherwise in floating point.
    """
    m = len(G)
    exact = all(isinstance(g, SurdScalar) for row in G for g in row)
    if exact:
        eig = np.linalg.eigvalsh(np.array([[float(g) for g in row] for row in G]))
        if not (np.sum(eig < -1e-12) == 1 and np.all(np.abs(eig) > 1e-12)):
            raise NotHyperbolic("Gram matrix is not of signature (n, 1)")
        for perm in itertools.permutations(range(m)):
            Gp = [[G[a][b] for b in perm] for a in perm]
            try:
                vecs = _complete(Gp, _exact_sqrt, SurdScalar(0), SurdScalar(1))
            except (ValueError, NotHyperbolic):
                continue
            out = [None] * m
            for pos, idx in enumerate(perm):
                out[idx] = vecs[pos]
            return PolytopeSpec(m, out)
    Gf = np.array([[float(g) for g in row] for row in G])
    eig = np.linalg.eigvalsh(Gf)
    if not (np.sum(eig < -1e-12) == 1 and np.all(np.abs(eig) > 1e-12)):
        raise NotHyperbolic("Gram matrix is not of signature (n, 1)")
    for perm in itertools.permutations(range(m)):
        Gp = Gf[np.ix_(perm, perm)]
        try:
            vecs = _complete(Gp.tolist(), math.sqrt, 0.0, 1.0)
        except NotHyperbolic:
            continue
        arr = np.empty((m, m))
        for pos, idx in enumerate(perm):
            arr[idx] = vecs[pos]
        return PolytopeSpec(m, None, arr)
    raise NotHyperbolic("no vertex ordering admits a completion")


def _minus_cos(m: int):
    try:
        return -exact_cos_pi_over(m)
    except (ValueError, KeyError):
        return -math.cos(math.pi / m)


def build_triangle_normals(angles: tuple[int, int, int]) -> PolytopeSpec:
    """Triangle with angles pi/p, pi/q, pi/r; sides (1,2) meet at pi/p, (2,3) at pi/q, (1,3) at pi/r."""
    p, q, r = angles
    if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) >= 1:
        raise NotHyperbolic(f"1/{p} + 1/{q} + 1/{r} >= 1, the triangle is not hyperbolic")
    g12, g23, g13 = _minus_cos(p), _minus_cos(q), _minus_cos(r)
    one = SurdScalar(1)
    if all(isinstance(g, SurdScalar) for g in (g12, g23, g13)):
        G = [[one, g12, g13], [g12, one, g23], [g13, g23, one]]
    else:
        f = [float(g) for g in (g12, g23, g13)]
        G = [[1.0, f[0], f[2]], [f[0], 1.0, f[1]], [f[2], f[1], 1.0]]
    return normals_from_gram(G)


def build_orthoscheme_normals(labels: tuple[int, ...]) -> PolytopeSpec:
    """Simplex with linear Coxeter diagram labels m_1, ..., m_n (e.g. (4, 3, 6))."""
    m = len(labels) + 1
    one, zero = SurdScalar(1), SurdScalar(0)
    entries = [_minus_cos(k) for k in labels]
    if all(isinstance(g, SurdScalar) for g in entries):
        G = [[one if i == j else zero for j in range(m)] for i in range(m)]
    else:
        entries = [float(g) for g in entries]
        G = [[1.0 if i == j else 0.0 for j in range(m)] for i in range(m)]
    for i, g in enumerate(entries):
        G[i][i + 1] = G[i + 1][i] = g
    return normals_from_gram(G)


# --------------------------------------------------------------------------
# fixtures
# --------------------------------------------------------------------------


def _data(name: str) -> str:
    return (resources.files("lorentz_covol") / "data" / name).read_text()


def load_delta7() -> PolytopeSpec:
    return parse_normals(_data("delta7.nrm"))


def load_p7() -> PolytopeSpec:
    return parse_normals(_data("p7.nrm"))


def load_sigma7() -> list[list[SurdScalar]]:
    return parse_matrix(_data("sigma7.mat"))


def load_fixture(name: str) -> PolytopeSpec:
    """Built-in polytopes by name: triangle246, p3, delta7, p7."""
    if name == "triangle246":
        return build_triangle_normals((2, 4, 6))
    if name == "p3":
        return build_orthoscheme_normals((4, 3, 6))
    if name == "delta7":
        return load_delta7()
    if name == "p7":
        return load_p7()
    raise KeyError(f"unknown built-in polytope {name!r}")


# --------------------------------------------------------------------------
# Monte Carlo
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Orientation:
    constraints: np.ndarray  # rows a_i, b_i with a_i . x <= b_i in Klein coordinates
    box_low: np.ndarray
    box_high: np.ndarray


def _orient(spec: PolytopeSpec) -> Orientation:
    """Fix the sign convention and compute a bounding box in the Klein model."""
    E = spec.float_normals
    n = spec.n
    # <v, e_i> = v_space . e_space - v_t e_t
    M = E.copy()
    M[:, -1] *= -1
    res = linprog(
        np.zeros(n + 1),
        A_ub=M,
        b_ub=-np.ones(len(E)),
        bounds=[(-1e6, 1e6)] * (n + 1),
        method="highs",
    )
    if res.status != 0:
        raise DegenerateSpec("the half-spaces <v, e_i> <= 0 have no common interior")
    if res.x[-1] < 0:
        M = -M
    # Klein point x with v = (x, 1): M[:, :n] x + M[:, n] <= 0
    A = M[:, :n]
    b = -M[:, n]
    low, high = np.empty(n), np.empty(n)
    for k in range(n):
        c = np.zeros(n)
        c[k] = 1
        for sign, store in ((1, low), (-1, high)):
            r = linprog(sign * c, A_ub=A, b_ub=b, bounds=[(-1, 1)] * n, method="highs")
            if r.status != 0:
                raise DegenerateSpec("could not bound the polytope in the Klein model")
            store[k] = r.x[k]
    return Orientation(np.hstack([A, b[:, None]]), np.clip(low, -1, 1), np.clip(high, -1, 1))


@dataclass(frozen=True)
class MCResult:
    estimate: float
    std_error: float
    samples: int
    truncation_radius: float
    seed: int
    per_eps: tuple = ()
    extrapolated: bool = False
    hits: int = 0


def _chunk_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _sample_chunk(rng, size, orient: Orientation, domain: str, radius: float, n: int):
    if domain == "box":
        x = orient.box_low + (orient.box_high - orient.box_low) * rng.random((size, n))
    else:
        g = rng.standard_normal((size, n))
        g /= np.linalg.norm(g, axis=1)[:, None]
        x = g * (radius * rng.random(size) ** (1.0 / n))[:, None]
    A = orient.constraints[:, :n]
    b = orient.constraints[:, n]
    inside = np.all(x @ A.T <= b, axis=1)
    r2 = np.einsum("ij,ij->i", x, x)
    return inside, r2


def _domain_volume(orient: Orientation, domain: str, radius: float, n: int) -> float:
    if domain == "box":
        return float(np.prod(orient.box_high - orient.box_low))
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * radius**n


def _run(spec, samples, seed, eps_list, weights, domain):
    if samples < MIN_SAMPLES:
        raise ValueError(f"mc_volume needs at least {MIN_SAMPLES} samples")
    if min(eps_list) <= 0 or max(eps_list) >= 1:
        raise ValueError("truncation eps must lie in (0, 1)")
    n = spec.n
    orient = _orient(spec)
    radius = 1 - min(eps_list)
    vol = _domain_volume(orient, domain, radius, n)
    limits = np.array([(1 - e) ** 2 for e in eps_list])
    weights = np.asarray(weights, dtype=float)
    sizes = _chunk_sizes(samples)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    per_sum = [[] for _ in eps_list]
    comb_sum, comb_sq = [], []
    hits = 0
    for ss, size in zip(streams, sizes):
        rng = np.random.Generator(np.random.PCG64(ss))
        inside, r2 = _sample_chunk(rng, size, orient, domain, radius, n)
        keep = inside & (r2 <= limits.max())
        r2k = r2[keep]
        f = (1.0 - r2k) ** (-(n + 1) / 2)
        contrib = np.zeros(len(r2k))
        for j, lim in enumerate(limits):
            fj = np.where(r2k <= lim, f, 0.0)
            per_sum[j].append(math.fsum(fj))
            contrib += weights[j] * fj
        comb_sum.append(math.fsum(contrib))
        comb_sq.append(math.fsum(contrib * contrib))
        hits += int(keep.sum())
    if hits == 0:
        raise DegenerateSpec(f"no sample out of {samples} landed inside the polytope")
    N = samples
    per_eps = tuple(
        (eps, vol * math.fsum(s) / N) for eps, s in zip(eps_list, per_sum)
    )
    mean = math.fsum(comb_sum) / N
    var = max(math.fsum(comb_sq) / N - mean * mean, 0.0) * N / (N - 1)
    return vol * mean, vol * math.sqrt(var / N), radius, per_eps, hits


def mc_volume(
    spec: PolytopeSpec,
    samples: int,
    seed: int,
    truncation_eps: float = 1e-4,
    domain: str = "box",
) -> MCResult:
    """Estimate vol(P) = integral over P and |x| <= 1 - eps of (1 - |x|^2)^(-(n+1)/2) dx.

    Points are drawn uniformly from the Klein-model bounding box of P
    (``domain="box"``) or from the ball of radius 1 - eps (``domain="ball"``).
    Chunks of 10^6 samples use independent PCG64 streams spawned from ``seed``,
    so the result only depends on (seed, samples, eps, domain).
    """
    if domain not in ("box", "ball"):
        raise ValueError(f"unknown sampling domain {domain!r}")
    est, se, radius, per_eps, hits = _run(spec, samples, seed, [truncation_eps], [1.0], domain)
    return MCResult(est, se, samples, radius, seed, per_eps, False, hits)


def mc_volume_sweep(
    spec: PolytopeSpec,
    samples: int,
    seed: int,
    eps_values=DEFAULT_SWEEP,
    domain: str = "box",
) -> MCResult:
    """Truncated estimates at several eps, extrapolated to eps = 0.

    The volume cut off near a cusp scales like eps^((n-1)/2), so the estimates
    are fitted by least squares as a + b * eps^((n-1)/2) and ``a`` is
    reported.  The fit is linear in the per-sample values, which gives the
    standard error of ``a`` directly from the same samples.
    """
    eps_values = tuple(sorted(eps_values, reverse=True))
    if len(eps_values) < 2:
        raise ValueError("an eps sweep needs at least two values")
    n = spec.n
    t = np.array([e ** ((n - 1) / 2) for e in eps_values])
    X = np.vstack([np.ones_like(t), t]).T
    weights = np.linalg.pinv(X)[0]  # row giving the intercept
    est, se, radius, per_eps, hits = _run(spec, samples, seed, list(eps_values), weights, domain)
    return MCResult(est, se, samples, radius, seed, per_eps, True, hits)
