"""Local solvability of the twist models, ELS candidates and the batch scanner.

Both deciders refine residue boxes.  A box is centred at an integral point and
has radius q^-nu.  Each centre is classified with two rules:

* a point exists if the centre passes a lifting test.  For the quartic the
  value must be a square in Q_q.  For the cubic we need v(G) > 2 v(dG/dx_j)
  for some coordinate j;
* the box is closed if every Taylor term beyond the constant has valuation
  above v(G(centre)) (plus 3 when q = 2 for the square class).  Then G has
  constant valuation, or constant square class, on the box.

Closed boxes stay closed under refinement.  So the tree verdict matches a
brute-force classification of all residues mod q^N, which is what the oracle
functions do.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import factorint
from sympy.ntheory import sqrt_mod

from .curve import Place, bad_primes, curve_from_parameter, places_above
from .field import Cyc, is_prime
from .twist import CubicModel, QuarticModel, cubic_model, quadratic_model

__all__ = [
    "Status",
    "LocalPlace",
    "LocalVerdict",
    "PadicApprox",
    "CriterionFails",
    "PrecisionExhausted",
    "ZeroBound",
    "valuation",
    "is_square_qp",
    "hensel_lift",
    "quartic_local",
    "quartic_real",
    "cubic_local",
    "brute_force_quartic",
    "brute_force_cubic",
    "recheck_quartic_witness",
    "recheck_cubic_witness",
    "els_candidates",
    "els_scan",
]


class CriterionFails(ValueError):
    pass


class PrecisionExhausted(RuntimeError):
    pass


class ZeroBound(ValueError):
    pass


class Status(str, Enum):
    SOLVABLE = "Solvable"
    EMPTY = "Empty"
    UNDETERMINED = "Undetermined"


@dataclass
class LocalVerdict:
    status: Status
    witness: Optional[dict] = None
    certificate: dict = field(default_factory=dict)
    reason: str = ""

    def as_dict(self) -> dict:
        out = {"status": self.status.value, "witness": self.witness}
        if self.certificate:
            out["certificate"] = self.certificate
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True, order=True)
class LocalPlace:
    """A completion: kind is Rational, Split, Inert, Ramified, Real or Complex.

    For Split places ``root`` is r mod q with r^2 + r + 1 = 0; z3 maps to the
    q-adic lift of r.
    """

    q: int
    kind: str
    root: Optional[int] = None

    @classmethod
    def from_place(cls, place: Place) -> "LocalPlace":
        return cls(place.q, place.kind, place.root)

    @classmethod
    def above(cls, q: int) -> List["LocalPlace"]:
        return [cls.from_place(P) for P in places_above(q)]

    @property
    def archimedean(self) -> bool:
        return self.kind in ("Real", "Complex")

    def sort_key(self):
        return (math.inf if self.archimedean else self.q, self.kind, self.root or 0)

    def as_dict(self) -> dict:
        out = {"q": "inf" if self.archimedean else self.q, "kind": self.kind}
        if self.root is not None:
            out["root"] = self.root
        return out


REAL = LocalPlace(0, "Real")
COMPLEX = LocalPlace(0, "Complex")


# ---------------------------------------------------------------------------
# q-adic helpers
# ---------------------------------------------------------------------------


def valuation(n, q: int, cap: Optional[int] = None) -> int:
    """v_q of a nonzero integer or rational; 0 maps to ``cap`` (or raises)."""
    n = Fraction(n)
    if n == 0:
        if cap is None:
            raise ValueError("valuation of 0")
        return cap
    v = 0
    num, den = n.numerator, n.denominator
    while num % q == 0:
        num //= q
        v += 1
    while den % q == 0:
        den //= q
        v -= 1
    return v if cap is None else min(v, cap)


def _unit_part(n: int, q: int) -> Tuple[int, int]:
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v, n


def is_square_qp(n, q: int) -> bool:
    """Is the rational n a square in Q_q?"""
    n = Fraction(n)
    if n == 0:
        return True
    n = n * n.denominator ** 2
    v, u = _unit_part(int(n), q)
    if v % 2:
        return False
    if q == 2:
        return u % 8 == 1
    return pow(u % q, (q - 1) // 2, q) == 1


@dataclass(frozen=True)
class PadicApprox:
    """q^valuation * unit, known modulo q^precision (absolute).

    ``exact`` marks a value known exactly (then ``unit`` is the exact unit part,
    or the value is 0 when ``is_zero``).
    """

    q: int
    valuation: int
    unit: int
    precision: int
    exact: bool = False
    is_zero: bool = False

    @classmethod
    def from_int(cls, n: int, q: int, precision: int, exact: bool = False) -> "PadicApprox":
        if n == 0:
            return cls(q, precision, 0, precision, exact, True)
        v, u = _unit_part(n, q)
        if not exact:
            u %= q ** max(precision - v, 0) if precision > v else 1
        return cls(q, v, u, precision, exact)

    def to_int(self) -> int:
        """Integer representative (the exact value when known)."""
        if self.is_zero:
            return 0
        val = self.q ** self.valuation * self.unit
        return val if self.exact else val % self.q ** self.precision

    def __str__(self):
        if self.exact:
            return str(self.to_int())
        return f"{self.to_int()} + O({self.q}^{self.precision})"


def _horner(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _derivative(coeffs: Sequence[int]) -> List[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_lift(f: Sequence[int], x0, q: int, N: int) -> PadicApprox:
    """Lift a root of f (integer coefficients, constant first) from x0.

    Requires v(f(x0)) > 2 v(f'(x0)).  The result is congruent to x0 modulo
    q^(v(f'(x0)) + 1) and is a root to absolute precision N.
    """
    x = x0.to_int() if isinstance(x0, PadicApprox) else int(x0)
    df = _derivative(f)
    fx, dfx = _horner(f, x), _horner(df, x)
    if fx == 0:
        return PadicApprox.from_int(x, q, N, exact=True)
    if dfx == 0:
        raise CriterionFails("f'(x0) = 0")
    mu = valuation(dfx, q)
    if valuation(fx, q) <= 2 * mu:
        raise CriterionFails(f"v(f(x0)) = {valuation(fx, q)} <= 2 v(f'(x0)) = {2 * mu}")
    mod = q ** (N + 2 * mu + 2)
    while True:
        fx, dfx = _horner(f, x), _horner(df, x)
        if fx == 0:
            return PadicApprox.from_int(x, q, N, exact=True)
        # root lies within q^(v(f) - mu) of x
        if valuation(fx, q) - mu >= N:
            return PadicApprox.from_int(x % q ** N, q, N)
        u = dfx // q ** mu
        x = (x - (fx // q ** mu) * pow(u, -1, mod)) % mod


def _sqrt_unit(u: int, q: int, N: int) -> int:
    """A square root of the q-adic unit u modulo q^N (u must be a square)."""
    r = math.isqrt(u) if u > 0 else -1
    if r >= 0 and r * r == u:
        return r
    if q == 2:
        r0 = 1
    else:
        r0 = min(sqrt_mod(u % q, q, all_roots=True))
    return hensel_lift([-u, 0, 1], r0, q, N).to_int()


# ---------------------------------------------------------------------------
# quartic models over Q_q and R
# ---------------------------------------------------------------------------


def _taylor_valuation_bound(coeffs: Sequence[int], x0: int, nu: int, q: int) -> int:
    """min over k >= 1 of v(g^(k)(x0)/k!) + k nu (large if all vanish)."""
    best = None
    deg = len(coeffs) - 1
    for k in range(1, deg + 1):
        tk = sum(math.comb(i, k) * coeffs[i] * x0 ** (i - k) for i in range(k, deg + 1))
        if tk == 0:
            continue
        v = valuation(tk, q) + k * nu
        best = v if best is None else min(best, v)
    return best if best is not None else 10 ** 9


def _quartic_charts(model: QuarticModel) -> Tuple[List[int], List[int], int]:
    """Integral polynomials G(x), H(u) = u^4 G(1/u) with d y^2 = f(x) iff G(x) = (d L y)^2."""
    A, B, C = (Fraction(c) for c in (model.A, model.B, model.C))
    L = math.lcm(A.denominator, B.denominator, C.denominator)
    d = model.d
    G = [int(d * L * L * c) for c in (C, 0, B, 0, A)]
    return G, list(reversed(G)), d * L


def _quartic_disc_valuation(model: QuarticModel, q: int) -> int:
    disc = model.discriminant()
    return valuation(disc, q) if disc else 0


def default_quartic_depth(model: QuarticModel, q: int) -> int:
    return 2 * _quartic_disc_valuation(model, q) + 3 + (3 if q == 2 else 0)


def _classify_quartic(G: Sequence[int], x0: int, nu: int, q: int) -> int:
    """+1 point at x0, -1 box has no point, 0 unresolved."""
    val = _horner(G, x0)
    if is_square_qp(val, q):
        return 1
    lam = valuation(val, q)
    e = 3 if q == 2 else 1
    if _taylor_valuation_bound(G, x0, nu, q) - lam >= e:
        return -1
    return 0


def _quartic_witness(model: QuarticModel, chart: int, x0: int, q: int, N: int) -> dict:
    G, H, scale = _quartic_charts(model)
    if chart == 0:
        val, x, extra = _horner(G, x0), Fraction(x0), 1
    else:
        val, extra = _horner(H, x0), (x0 * x0 if x0 else 1)
        x = "infinity" if x0 == 0 else Fraction(1, x0)
    wit: Dict[str, object] = {"x": str(x), "chart": "affine" if chart == 0 else "infinity"}
    if val == 0:
        wit["y"] = "0"
        return wit
    root = math.isqrt(val) if val > 0 else -1
    if root >= 0 and root * root == val:
        if x == "infinity":
            wit["y_over_x2"] = str(Fraction(root, scale))
        else:
            wit["y"] = str(Fraction(root, scale * extra))
        return wit
    k, u = _unit_part(val, q)
    k //= 2
    r = _sqrt_unit(u, q, N)
    den = scale * extra
    if den < 0:
        den, r = -den, q ** N - r
    num = f"{q}^{k}*{r}" if k else str(r)
    key = "y_over_x2" if x == "infinity" else "y"
    wit[key] = f"{num}/{den} + O({q}^{N + k - valuation(den, q)})"
    wit["sqrt_data"] = {"valuation": k, "unit": r, "precision": N, "denominator": den}
    return wit


def quartic_local(model: QuarticModel, q: int, N: Optional[int] = None) -> LocalVerdict:
    """Decide whether d y^2 = A x^4 + B x^2 + C has a point over Q_q.

    Both affine charts of the smooth model are covered: x in Z_q and
    x = 1/u with u in qZ_q (u = 0 being the points at infinity).  N bounds the
    refinement depth; by default it is 2 v_q(disc) + 3 (+3 for q = 2).
    """
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    depth = default_quartic_depth(model, q) if N is None else N
    G, H, _ = _quartic_charts(model)
    queue = deque([(0, 0, 0), (1, 0, 1)])  # (chart, centre, nu)
    nodes = closed = deepest = 0
    open_leaves = 0
    while queue:
        chart, x0, nu = queue.popleft()
        poly = G if chart == 0 else H
        nodes += 1
        cls = _classify_quartic(poly, x0, nu, q)
        if cls == 1:
            wit = _quartic_witness(model, chart, x0, q, max(depth, 1))
            cert = {"depth": nu, "nodes": nodes, "max_depth": depth, "rule": "square"}
            return LocalVerdict(Status.SOLVABLE, wit, cert)
        if cls == -1:
            closed += 1
            deepest = max(deepest, nu)
            continue
        if nu >= depth:
            open_leaves += 1
            continue
        step = q ** nu
        for j in range(q):
            queue.append((chart, x0 + step * j, nu + 1))
    cert = {"max_depth": depth, "nodes": nodes, "closed_boxes": closed, "closed_depth": deepest,
            "square_class_margin": 3 if q == 2 else 1}
    if open_leaves:
        return LocalVerdict(Status.UNDETERMINED, None, cert,
                            f"precision exhausted: {open_leaves} boxes open at depth {depth}")
    return LocalVerdict(Status.EMPTY, None, cert)


def brute_force_quartic(model: QuarticModel, q: int, N: int) -> Status:
    """Classify every residue box mod q^N independently (test oracle)."""
    G, H, _ = _quartic_charts(model)
    seen_open = False
    for chart, poly, reps in ((0, G, range(q ** N)), (1, H, range(0, q ** N, q))):
        for x0 in reps:
            cls = _classify_quartic(poly, x0, N, q)
            if cls == 1:
                return Status.SOLVABLE
            seen_open |= cls == 0
    return Status.UNDETERMINED if seen_open else Status.EMPTY


def recheck_quartic_witness(model: QuarticModel, q: int, witness: dict) -> bool:
    """Independent check of a Solvable witness against the model."""
    A, B, C, d = (Fraction(c) for c in (model.A, model.B, model.C, model.d))
    if witness["x"] == "infinity":
        rhs, key = A, "y_over_x2"  # d (y/x^2)^2 = A at the points at infinity
    else:
        x = Fraction(witness["x"])
        rhs, key = A * x ** 4 + B * x ** 2 + C, "y"

    def f(yy):
        return d * yy * yy - rhs

    if "sqrt_data" not in witness:
        return f(Fraction(witness[key])) == 0
    sd = witness["sqrt_data"]
    k, r, N, den = sd["valuation"], sd["unit"], sd["precision"], sd["denominator"]
    # d (q^k r / den)^2 - rhs must vanish to q-adic order 2k + N - 2 v(den) + v(d)
    y = Fraction(q ** k * r, den)
    resid = f(y)
    target = valuation(d, q) + 2 * (k - valuation(den, q)) + N
    return resid == 0 or valuation(resid, q) >= target


def quartic_real(model: QuarticModel) -> LocalVerdict:
    """Real points of d y^2 = A x^4 + B x^2 + C by sign analysis in X = x^2."""
    s = 1 if model.d > 0 else -1
    A, B, C = (s * Fraction(c) for c in (model.A, model.B, model.C))
    if A > 0:
        return LocalVerdict(Status.SOLVABLE, {"x": "infinity"}, {"rule": "A/d > 0"})
    if C >= 0:
        return LocalVerdict(Status.SOLVABLE, {"x2": "0"}, {"rule": "C/d >= 0"})
    if A == 0:
        if B > 0:
            X = -C / B + 1
            return LocalVerdict(Status.SOLVABLE, {"x2": str(X)}, {"rule": "linear"})
        return LocalVerdict(Status.EMPTY, None, {"rule": "linear, negative"})
    # A < 0: the maximum of A X^2 + B X + C on X >= 0 is at X = -B / 2A when positive
    X = -B / (2 * A)
    if X > 0 and A * X * X + B * X + C >= 0:
        return LocalVerdict(Status.SOLVABLE, {"x2": str(X)}, {"rule": "vertex"})
    return LocalVerdict(Status.EMPTY, None, {"rule": "quadratic in x^2 negative on [0, inf)"})


# ---------------------------------------------------------------------------
# cubic models over completions of Q(z3)
# ---------------------------------------------------------------------------


def lift_cube_root(r: int, q: int, M: int) -> int:
    """The root of x^2 + x + 1 in Z_q congruent to r, modulo q^M."""
    return hensel_lift([1, 1, 1], r, q, M).to_int() % q ** M


class _SplitRing:
    """O_v / q^M for a split place, identified with Z / q^M via z3 -> rho."""

    def __init__(self, q: int, root: int, M: int):
        self.q, self.M, self.mod = q, M, q ** M
        self.rho = lift_cube_root(root, q, M)

    def embed(self, r: int, s: int) -> int:
        return (r + s * self.rho) % self.mod

    def reps(self, nu: int) -> List[int]:
        return list(range(self.q ** nu))

    def residues(self) -> List[int]:
        return list(range(self.q))

    def zero(self):
        return 0

    def scal(self, n: int, x: int) -> int:
        return n * x % self.mod

    def add(self, x, y):
        return (x + y) % self.mod

    def mul(self, x, y):
        return x * y % self.mod

    def val(self, x) -> int:
        x %= self.mod
        if x == 0:
            return self.M
        return _unit_part(x, self.q)[0]

    def div_qpow(self, x, k):
        return (x % self.mod) // self.q ** k

    def inverse_unit(self, x):
        return pow(x, -1, self.mod)

    def show(self, x) -> str:
        return str(x % self.mod)

    def reduce(self, x, N):
        return x % self.q ** N


class _InertRing:
    """O_v / q^M for an inert place: pairs (r, s) meaning r + s*z3."""

    def __init__(self, q: int, M: int):
        self.q, self.M, self.mod = q, M, q ** M

    def embed(self, r: int, s: int):
        return (r % self.mod, s % self.mod)

    def reps(self, nu: int):
        n = self.q ** nu
        return [(a, b) for a in range(n) for b in range(n)]

    def residues(self):
        return self.reps(1)

    def zero(self):
        return (0, 0)

    def scal(self, n: int, x):
        return (n * x[0] % self.mod, n * x[1] % self.mod)

    def add(self, x, y):
        return ((x[0] + y[0]) % self.mod, (x[1] + y[1]) % self.mod)

    def mul(self, x, y):
        r1, s1 = x
        r2, s2 = y
        return ((r1 * r2 - s1 * s2) % self.mod, (r1 * s2 + r2 * s1 - s1 * s2) % self.mod)

    def val(self, x) -> int:
        r, s = x[0] % self.mod, x[1] % self.mod
        vr = self.M if r == 0 else _unit_part(r, self.q)[0]
        vs = self.M if s == 0 else _unit_part(s, self.q)[0]
        return min(vr, vs)

    def div_qpow(self, x, k):
        return ((x[0] % self.mod) // self.q ** k, (x[1] % self.mod) // self.q ** k)

    def inverse_unit(self, x):
        r, s = x
        n = (r * r - r * s + s * s) % self.mod
        ninv = pow(n, -1, self.mod)
        # conjugate of r + s z3 is (r - s) - s z3
        return ((r - s) * ninv % self.mod, (-s) * ninv % self.mod)

    def show(self, x) -> str:
        return str(Cyc(x[0] % self.mod, x[1] % self.mod))

    def reduce(self, x, N):
        m = self.q ** N
        return (x[0] % m, x[1] % m)


def _integral_form(model: CubicModel) -> Dict[Tuple[int, int, int], Tuple[int, int]]:
    form = model.form
    L = 1
    for c in form.values():
        L = math.lcm(L, Fraction(c.r).denominator, Fraction(c.s).denominator)
    return {k: (int(Fraction(c.r) * L), int(Fraction(c.s) * L)) for k, c in form.items()}


def _chart_polys(form, q: int) -> List[Dict[Tuple[int, int], Tuple[int, int]]]:
    """Affine charts covering P^2(O_v): (x, y, 1), (x, 1, q y), (1, q x, q y)."""
    charts: List[Dict[Tuple[int, int], Tuple[int, int]]] = [{}, {}, {}]
    for (eZ, eW, eV), (r, s) in form.items():
        for idx, key, k in ((0, (eZ, eW), 0), (1, (eZ, eV), eV), (2, (eW, eV), eW + eV)):
            qk = q ** k
            cr, cs = charts[idx].get(key, (0, 0))
            charts[idx][key] = (cr + r * qk, cs + s * qk)
    return charts


def _chart_point(idx: int, x: str, y: str, q: int) -> Tuple[str, str, str]:
    if idx == 0:
        return (x, y, "1")
    if idx == 1:
        return (x, "1", f"{q}*({y})")
    return ("1", f"{q}*({x})", f"{q}*({y})")


class _CubicSearch:
    def __init__(self, model: CubicModel, place: LocalPlace, depth: int):
        q = place.q
        self.q, self.depth, self.place = q, depth, place
        self.M = 4 * depth + 12
        if place.kind == "Split":
            self.ring = _SplitRing(q, place.root, self.M)
        else:
            self.ring = _InertRing(q, self.M)
        R = self.ring
        self.charts = [{k: R.embed(*c) for k, c in ch.items()} for ch in _chart_polys(_integral_form(model), q)]

    def taylor(self, poly, x0, y0):
        """Coefficients of G(x0 + X, y0 + Y) as {(i, j): value}."""
        R = self.ring
        px = [None] * 4
        py = [None] * 4
        one = R.embed(1, 0)
        px[0] = py[0] = one
        for k in range(1, 4):
            px[k] = R.mul(px[k - 1], x0)
            py[k] = R.mul(py[k - 1], y0)
        out = {}
        for (i, j), c in poly.items():
            for a in range(i + 1):
                for b in range(j + 1):
                    term = R.mul(c, R.mul(px[i - a], py[j - b]))
                    term = R.scal(math.comb(i, a) * math.comb(j, b), term)
                    out[(a, b)] = R.add(out.get((a, b), R.zero()), term)
        return out

    def classify(self, idx: int, x0, y0, nu: int):
        """(+1 | -1 | 0, data)."""
        R = self.ring
        T = self.taylor(self.charts[idx], x0, y0)
        lam = R.val(T.get((0, 0), R.zero()))
        mus = (R.val(T.get((1, 0), R.zero())), R.val(T.get((0, 1), R.zero())))
        for j, mu in enumerate(mus):
            if mu < self.M and lam > 2 * mu:
                return 1, {"lambda": lam, "mu": mu, "coordinate": "xy"[j]}
        if lam < self.M:
            b = min((R.val(v) + nu * (a + c) for (a, c), v in T.items() if (a, c) != (0, 0)), default=self.M)
            if b > lam:
                return -1, {"lambda": lam, "b": b}
        return 0, {}

    def lift(self, idx: int, x0, y0, coord: str, target: int):
        """Newton along one coordinate until v(G) >= target."""
        R = self.ring
        poly = self.charts[idx]
        pt = [x0, y0]
        j = 0 if coord == "x" else 1
        for _ in range(4 * target + 8):
            T = self.taylor(poly, pt[0], pt[1])
            g = T.get((0, 0), R.zero())
            dg = T.get((1, 0) if j == 0 else (0, 1), R.zero())
            lam, mu = R.val(g), R.val(dg)
            if lam >= target:
                break
            u = R.div_qpow(dg, mu)
            step = R.mul(R.div_qpow(g, mu), R.inverse_unit(u))
            pt[j] = R.add(pt[j], R.scal(-1, step))
        return pt

    def witness(self, idx: int, x0, y0, info: dict, N: int) -> dict:
        R = self.ring
        target = max(N, info["lambda"])
        x1, y1 = self.lift(idx, x0, y0, info["coordinate"], target)
        xs, ys = R.show(R.reduce(x1, target)), R.show(R.reduce(y1, target))
        Z, W, V = _chart_point(idx, xs, ys, self.q)
        cx, cy = R.show(x0), R.show(y0)
        cZ, cW, cV = _chart_point(idx, cx, cy, self.q)
        return {
            "chart": idx,
            "centre": {"Z": cZ, "W": cW, "V": cV},
            "point": {"Z": Z, "W": W, "V": V},
            "precision": target,
            "hensel": info,
        }


def _global_point(model: CubicModel, box: int = 2) -> Optional[Tuple[Cyc, Cyc, Cyc]]:
    """A K-rational point with small coordinates, if one is found."""
    form = model.form
    rng = range(-box, box + 1)
    elems = [Cyc(r, s) for r in rng for s in rng]
    for V in (Cyc(0), Cyc(1)):
        Ws = [Cyc(1)] if V.is_zero() else elems
        for W in Ws:
            for Z in ([Cyc(1)] if V.is_zero() and W.is_zero() else elems):
                if all(c.is_zero() for c in (Z, W, V)):
                    continue
                tot = Cyc(0)
                for (a, b, c), coef in form.items():
                    tot = tot + coef * Z ** a * W ** b * V ** c
                if tot.is_zero():
                    return Z, W, V
    return None


def _cyc_valuation(c: Cyc, place: LocalPlace) -> int:
    r, s = Fraction(c.r), Fraction(c.s)
    den = math.lcm(r.denominator, s.denominator)
    ri, si = int(r * den), int(s * den)
    vden = valuation(den, place.q)
    if ri == 0 and si == 0:
        raise ValueError("valuation of 0")
    if place.kind == "Inert":
        return min(valuation(x, place.q) for x in (ri, si) if x) - vden
    if place.kind == "Split":
        norm = ri * ri - ri * si + si * si
        M = valuation(norm, place.q) + 1
        R = _SplitRing(place.q, place.root, M)
        return R.val(R.embed(ri, si)) - vden
    raise ValueError(f"no valuation implemented for {place.kind}")


def default_cubic_depth(model: CubicModel, place: LocalPlace) -> int:
    disc = model.discriminant()
    v = 0 if disc.is_zero() else max(_cyc_valuation(disc, place), 0)
    return 2 * v + 3 + (3 if place.q == 2 else 0)


def cubic_local(model: CubicModel, place: LocalPlace, N: Optional[int] = None) -> LocalVerdict:
    """Decide whether the cubic model has a point over the completion K_v.

    N is the refinement depth (residues mod q^N); by default 2 v(disc) + 3.
    """
    if place.kind == "Complex":
        return LocalVerdict(Status.SOLVABLE, None, {"rule": "algebraically closed"})
    if place.kind in ("Ramified", "Real", "Rational"):
        if place.kind == "Ramified":
            pt = _global_point(model)
            if pt is not None:
                wit = {"global": True, "point": {"Z": str(pt[0]), "W": str(pt[1]), "V": str(pt[2])}}
                return LocalVerdict(Status.SOLVABLE, wit, {"rule": "K-rational point"})
            return LocalVerdict(Status.UNDETERMINED, None, {}, "ramified place out of scope")
        raise ValueError(f"{place.kind} is not a place of Q(z3)")
    depth = default_cubic_depth(model, place) if N is None else N
    search = _CubicSearch(model, place, depth)
    R = search.ring
    queue = deque((idx, R.zero(), R.zero(), 0) for idx in range(3))
    nodes = closed = deepest = open_leaves = 0
    residues = R.residues()
    while queue:
        idx, x0, y0, nu = queue.popleft()
        nodes += 1
        cls, info = search.classify(idx, x0, y0, nu)
        if cls == 1:
            wit = search.witness(idx, x0, y0, info, max(depth, 1))
            return LocalVerdict(Status.SOLVABLE, wit, {"depth": nu, "nodes": nodes, "max_depth": depth})
        if cls == -1:
            closed += 1
            deepest = max(deepest, nu)
            continue
        if nu >= depth:
            open_leaves += 1
            continue
        step = q_pow = search.q ** nu
        for r1 in residues:
            for r2 in residues:
                queue.append((idx, R.add(x0, R.scal(step, r1)), R.add(y0, R.scal(q_pow, r2)), nu + 1))
    cert = {"max_depth": depth, "nodes": nodes, "closed_boxes": closed, "closed_depth": deepest,
            "hensel_rule": "v(G) > 2 v(dG)"}
    if open_leaves:
        return LocalVerdict(Status.UNDETERMINED, None, cert,
                            f"precision exhausted: {open_leaves} boxes open at depth {depth}")
    return LocalVerdict(Status.EMPTY, None, cert)


def brute_force_cubic(model: CubicModel, place: LocalPlace, N: int) -> Status:
    """Classify every residue box mod q^N in each chart independently (test oracle)."""
    search = _CubicSearch(model, place, N)
    R = search.ring
    reps = R.reps(N)
    seen_open = False
    for idx in range(3):
        for x0 in reps:
            for y0 in reps:
                cls, _ = search.classify(idx, x0, y0, N)
                if cls == 1:
                    return Status.SOLVABLE
                seen_open |= cls == 0
    return Status.UNDETERMINED if seen_open else Status.EMPTY


def recheck_cubic_witness(model: CubicModel, place: LocalPlace, witness: dict) -> bool:
    """Evaluate the model at the reported point in O_v / q^M and check the congruence."""
    from .textform import parse_cyc

    if witness.get("global"):
        Z, W, V = (parse_cyc(witness["point"][k]) for k in "ZWV")
        return Cyc.coerce(model.evaluate(Z, W, V)).is_zero()
    prec = witness["precision"]
    q = place.q
    M = 3 * prec + 6
    R = _SplitRing(q, place.root, M) if place.kind == "Split" else _InertRing(q, M)
    pt = []
    for k in "ZWV":
        c = parse_cyc(witness["point"][k])
        pt.append(R.embed(int(c.r), int(c.s)))
    total = R.zero()
    for (a, b, c), (r, s) in _integral_form(model).items():
        term = R.embed(r, s)
        for base, e in zip(pt, (a, b, c)):
            for _ in range(e):
                term = R.mul(term, base)
        total = R.add(total, term)
    return R.val(total) >= prec


# ---------------------------------------------------------------------------
# candidates and scanning
# ---------------------------------------------------------------------------


def _primes_of(x: Fraction) -> List[int]:
    x = Fraction(x)
    return sorted(set(factorint(abs(x.numerator))) | set(factorint(x.denominator)))


def _power_free_products(primes: Iterable[int], p: int) -> List[int]:
    primes = sorted(set(primes))
    out = []
    for exps in itertools.product(range(p), repeat=len(primes)):
        n = 1
        for q, e in zip(primes, exps):
            n *= q ** e
        out.append(n)
    return sorted(out)


def _cubic_relevant_primes(a: Cyc) -> List[int]:
    E, _, _ = curve_from_parameter(a)
    primes = {P.q for P in bad_primes(E)}
    primes |= set(_primes_of(Fraction(Cyc.coerce(a).denominator())))
    return sorted(primes)


def els_candidates(p: int, a, b=None) -> List[int]:
    """The finite list of p-power-free d that can give an ELS twist.

    p = 2 (curve y^2 = x^3 + a x^2 + b x): square-free d of either sign built
    from primes dividing 2a(a^2 - 4b).  p = 3 (curve E_a): positive cube-free
    d built from primes under bad places of E_a and 3.
    """
    if p == 2:
        a, b = Fraction(a), Fraction(b)
        bound = 2 * a * (a * a - 4 * b)
        if bound == 0:
            raise ZeroBound("2a(a^2 - 4b) = 0: every square-free d passes the criterion")
        pos = _power_free_products(_primes_of(bound), 2)
        return sorted(pos + [-d for d in pos])
    if p == 3:
        primes = set(_cubic_relevant_primes(Cyc.coerce(a))) | {3}
        return _power_free_products(primes, 3)
    raise ValueError(f"p={p} models are not available")


def _overall(statuses: List[Status]) -> str:
    if any(s is Status.EMPTY for s in statuses):
        return "NotELS"
    if all(s is Status.SOLVABLE for s in statuses):
        return "ELS"
    return "Inconclusive"


def _good_row(note: str) -> dict:
    return {"q": "other", "kind": "Good", "status": Status.SOLVABLE.value, "witness": None, "reason": note}


def _scan_quartic(a, b, precision, verify_below, extra_places) -> dict:
    a, b = Fraction(a), Fraction(b)
    rows = []
    for d in els_candidates(2, a, b):
        model = quadratic_model(a, b, d)
        relevant = set(_primes_of(2 * d * b * (a * a - 4 * b)))
        explicit = set(relevant) | set(extra_places or [])
        explicit |= {q for q in range(2, verify_below) if is_prime(q)}
        places = []
        for q in sorted(explicit):
            v = quartic_local(model, q, precision)
            entry = {"q": q, "kind": "Rational", **v.as_dict()}
            if q not in relevant:
                entry["good"] = True
            places.append(entry)
        rv = quartic_real(model)
        places.append({"q": "inf", "kind": "Real", **rv.as_dict()})
        places.append(_good_row("HasseBound: good reduction and coprime to 2d"))
        statuses = [Status(pl["status"]) for pl in places]
        rows.append({"d": d, "model": model.as_dict(), "equation": model.equation(),
                     "places": places, "verdict": _overall(statuses)})
    return {"curve": {"a": str(a), "b": str(b), "equation": f"y^2 = x^3 + ({a})*x^2 + ({b})*x"},
            "p": 2, "header": {"d_signs": "both", "precision": precision},
            "candidates": rows}


def _scan_cubic(a, precision, verify_below, extra_places) -> dict:
    a = Cyc.coerce(a)
    bad = _cubic_relevant_primes(a)
    rows = []
    for d in els_candidates(3, a):
        model = cubic_model(a, d)
        rel = set(bad) | set(_primes_of(d)) | {3}
        explicit = rel | set(extra_places or []) | {q for q in range(2, verify_below) if is_prime(q)}
        places = []
        for q in sorted(explicit):
            for pl in LocalPlace.above(q):
                v = cubic_local(model, pl, precision)
                entry = {**pl.as_dict(), **v.as_dict()}
                if q not in rel:
                    entry["good"] = True
                places.append(entry)
        places.append({**COMPLEX.as_dict(), **cubic_local(model, COMPLEX).as_dict()})
        places.append(_good_row("HasseBound: good reduction and coprime to 3d"))
        statuses = [Status(pl["status"]) for pl in places]
        rows.append({"d": d, "model": model.as_dict(), "equation": model.equation(),
                     "places": places, "verdict": _overall(statuses)})
    return {"curve": {"a": str(a), "family": "E_a"}, "p": 3,
            "header": {"d_signs": "positive (-1 is a cube)", "precision": precision},
            "candidates": rows}


def els_scan(p: int, a, b=None, *, precision: Optional[int] = None, verify_good_primes_below: int = 0,
             places: Optional[Sequence[int]] = None) -> dict:
    """Per-candidate local verdicts; rows sorted by d, places by (q, kind, root)."""
    if p == 2:
        if b is None:
            raise ValueError("p=2 needs both a and b")
        return _scan_quartic(a, b, precision, verify_good_primes_below, places)
    if p == 3:
        return _scan_cubic(a, precision, verify_good_primes_below, places)
    raise ValueError(f"p={p} models are not available")
