"""Executable symmetric multiplication algorithms for GF(q^n)/GF(q) built
from the rational function field (genus 0).

An element x of GF(q^n) is a polynomial f_x of degree < n over GF(q).  The
product x*y is recovered from joint evaluations of the degree <= 2n-2
polynomial f_x * f_y at an evaluation plan worth at least 2n-1 degrees:

* a rational node a contributes the single symmetric form f(a);
* the place at infinity contributes the leading coefficient coeff_{n-1}(f)
  (for the product polynomial, the coefficient at 2n-2 is exactly the product
  of the operands' leading coefficients, one bilinear form);
* a degree-2 place pi (a monic irreducible quadratic) contributes the residue
  f mod pi in GF(q^2) = GF(q)[t]/pi; the residue product is expanded through
  the canonical rank-3 symmetric algorithm for GF(q^2)/GF(q) (itself built
  here recursively from three rational slots), so the place costs 3 products
  for 2 degrees of evaluation.

Interpolation inverts the joint-evaluation map on polynomials of degree
<= 2n-2 (injective as soon as the plan's total degree reaches 2n-1), and a
final reduction mod the extension's defining polynomial sends the product
polynomial back to coordinates.  Both operands pass through the same linear
forms, so the emitted tensor decomposition is symmetric by construction.

Everything is canonical (node order, place order, modulus choice, pivoting),
so emitted tensors are byte-stable across runs.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

import numpy as np

from .fields import (
    ExtensionField,
    Field,
    FieldElement,
    Matrix,
    find_irreducible,
    invert,
    irreducible_polys,
    make_field,
    poly_mod,
    select_independent_rows,
)

EXHAUSTIVE_PAIR_CAP = 1 << 24  # exhaustive verification iff q**(2n) <= this
DEFAULT_SEED = 20170223
DEFAULT_TRIALS = 1000


class InfeasiblePlanError(ValueError):
    """No evaluation plan meets the required degree; cites the failed
    point-count hypothesis at genus 0."""

    def __init__(self, q: int, n: int, allow_deg2: bool, capacity: int, required: int):
        self.q = q
        self.n = n
        self.allow_deg2 = allow_deg2
        self.capacity = capacity
        self.required = required
        if allow_deg2:
            hypothesis = (
                f"N1 + 2*N2 = {capacity} must exceed 2n-2 = {2 * n - 2} "
                f"(degree-1 and degree-2 places of the rational function field over GF({q}))"
            )
        else:
            hypothesis = (
                f"N1 = {capacity} must exceed 2n-2 = {2 * n - 2} "
                f"(rational places of the rational function field over GF({q}))"
            )
        super().__init__(f"no feasible evaluation plan for q={q}, n={n}: {hypothesis}")
        self.hypothesis = hypothesis

    def to_json_dict(self) -> dict:
        return {
            "error": "infeasible",
            "reason": self.hypothesis,
            "q": self.q,
            "n": self.n,
            "allow_deg2": self.allow_deg2,
            "required_degree": self.required,
            "capacity": self.capacity,
        }


class VerificationError(AssertionError):
    """A built algorithm disagreed with reference multiplication."""

    def __init__(self, q: int, n: int, x_code: int, y_code: int, expected: int, got: int):
        super().__init__(
            f"multiplication mismatch in GF({q}^{n}): x={x_code}, y={y_code}, "
            f"expected code {expected}, got {got}"
        )
        self.q = q
        self.n = n
        self.x_code = x_code
        self.y_code = y_code
        self.expected = expected
        self.got = got

    def to_json_dict(self) -> dict:
        return {
            "error": "verification_failure",
            "reason": str(self),
            "q": self.q,
            "n": self.n,
            "x": self.x_code,
            "y": self.y_code,
            "expected": self.expected,
            "got": self.got,
        }


@dataclass(frozen=True)
class EvalPlan:
    """Which places of the rational function field the construction consumes."""

    q: int
    n: int
    rational_nodes: tuple  # raw base-field values, canonical code order
    use_infinity: bool
    deg2_places: tuple  # monic irreducible quadratics, canonical order
    total_degree: int

    @property
    def rational_slots(self) -> int:
        return len(self.rational_nodes) + (1 if self.use_infinity else 0)

    @property
    def cost(self) -> int:
        return self.rational_slots + 3 * len(self.deg2_places)

    @property
    def case(self) -> int:
        return 1 if not self.deg2_places else 2

    def to_json_dict(self, base: Field) -> dict:
        return {
            "rational_nodes": [base.to_int(a) for a in self.rational_nodes],
            "use_infinity": self.use_infinity,
            "deg2_places": [[base.to_int(c) for c in pi] for pi in self.deg2_places],
            "total_degree": self.total_degree,
            "cost": self.cost,
        }


def plan_evaluation(q: int, n: int, allow_deg2: bool = True) -> EvalPlan:
    """Greedy minimal-cost plan covering 2n-1 degrees of evaluation.

    Rational slots (nodes in code order, then infinity) cost 1 per degree and
    are preferred; degree-2 places cost 3 per 2 degrees.  When the remainder
    past the rational capacity is odd, one rational slot is dropped so no
    degree is wasted (cost drops by 1).  Infeasibility mirrors the genus-0
    point-count hypotheses exactly.
    """
    if n < 2:
        raise ValueError("plan_evaluation requires n >= 2")
    base = make_field(q)
    required = 2 * n - 1
    rational_capacity = q + 1
    if required <= rational_capacity:
        slots = required
        deg2_count = 0
    else:
        n2_capacity = (q * q - q) // 2
        if not allow_deg2 or rational_capacity + 2 * n2_capacity < required:
            cap = rational_capacity + (2 * n2_capacity if allow_deg2 else 0)
            raise InfeasiblePlanError(q, n, allow_deg2, cap, required)
        deficit = required - rational_capacity
        slots = rational_capacity - (1 if deficit % 2 else 0)
        deg2_count = (required - slots) // 2
    nodes = tuple(base.from_int(k) for k in range(min(slots, q)))
    use_infinity = slots > q
    places = tuple(itertools.islice(irreducible_polys(base, 2), deg2_count))
    assert len(places) == deg2_count
    total = len(nodes) + (1 if use_infinity else 0) + 2 * deg2_count
    assert total == required
    return EvalPlan(q, n, nodes, use_infinity, places, total)


@dataclass(frozen=True)
class BilinearAlgorithm:
    """A symmetric decomposition of the multiplication tensor of GF(q^n)/GF(q).

    For all x, y:  recon @ ((forms @ x) .* (forms @ y))  ==  x * y,
    with the same forms applied to both operands.
    """

    ext: ExtensionField
    plan: EvalPlan
    rank: int
    forms: Matrix  # rank x n over the base field
    recon: Matrix  # n x rank over the base field
    contributions: tuple[int, ...]  # per-place product counts, plan order

    @property
    def base(self) -> Field:
        return self.ext.base

    @property
    def q(self) -> int:
        return self.base.order

    @property
    def n(self) -> int:
        return self.ext.degree

    def envelope(self) -> int:
        """The genus-0 envelope the rank is accounted against."""
        n = self.n
        return 2 * n - 1 if self.plan.case == 1 else 3 * n


def _node_powers(base: Field, a, count: int) -> list:
    out = [base.one]
    for _ in range(count - 1):
        out.append(base.mul(out[-1], a))
    return out


def _residue_rows(base: Field, pi: tuple, count: int) -> list[list]:
    """Rows of u**j mod pi for j < count, as two coordinate lists."""
    rows = []
    cur = (base.one,)
    for _ in range(count):
        c0 = cur[0] if len(cur) > 0 else base.zero
        c1 = cur[1] if len(cur) > 1 else base.zero
        rows.append([c0, c1])
        cur = poly_mod(base, (base.zero,) + cur, pi)
    return rows


def build_algorithm(
    q: int,
    n: int,
    plan: EvalPlan | None = None,
    modulus: tuple | None = None,
) -> BilinearAlgorithm:
    """Construct and assemble the symmetric decomposition for GF(q^n)/GF(q).

    The defining modulus defaults to the canonical irreducible of degree n.
    The interpolation system is inverted on the first full-rank square row
    subsystem in canonical order (for the canonical plans the system is
    square already), which cannot be singular for distinct places.
    """
    base = make_field(q)
    if plan is None:
        plan = plan_evaluation(q, n, allow_deg2=True)
    if plan.q != q or plan.n != n:
        raise ValueError("plan does not match the requested field")
    actual_degree = (
        len(plan.rational_nodes) + (1 if plan.use_infinity else 0) + 2 * len(plan.deg2_places)
    )
    if plan.total_degree != actual_degree:
        raise ValueError("plan total_degree is inconsistent with its places")
    if plan.total_degree < 2 * n - 1:
        raise ValueError("plan total degree is below 2n-1")
    if len(set(plan.rational_nodes)) != len(plan.rational_nodes):
        raise ValueError("rational nodes must be distinct")
    if len(set(plan.deg2_places)) != len(plan.deg2_places):
        raise ValueError("degree-2 places must be distinct")
    if modulus is None:
        modulus = find_irreducible(base, n)
    ext = ExtensionField(base, n, modulus)
    prod_len = 2 * n - 1

    forms_rows: list[list] = []
    eval_rows: list[list] = []  # joint-evaluation functionals on product coeffs
    s_blocks: list[tuple[int, list[list]]] = []  # (product count, rows over products)
    contributions: list[int] = []

    for a in plan.rational_nodes:
        forms_rows.append(_node_powers(base, a, n))
        eval_rows.append(_node_powers(base, a, prod_len))
        s_blocks.append((1, [[base.one]]))
        contributions.append(1)
    if plan.use_infinity:
        forms_rows.append([base.zero] * (n - 1) + [base.one])
        eval_rows.append([base.zero] * (prod_len - 1) + [base.one])
        s_blocks.append((1, [[base.one]]))
        contributions.append(1)
    for pi in plan.deg2_places:
        sub = _degree2_subalgorithm(q, pi)
        res_n = _residue_rows(base, pi, n)  # n rows of 2 coords
        # compose the three sub-forms with the residue map: rows over x coords
        for srow in range(3):
            s0 = sub.forms[srow, 0]
            s1 = sub.forms[srow, 1]
            forms_rows.append(
                [base.add(base.mul(s0, res_n[j][0]), base.mul(s1, res_n[j][1])) for j in range(n)]
            )
        res_prod = _residue_rows(base, pi, prod_len)
        for coord in range(2):
            eval_rows.append([res_prod[j][coord] for j in range(prod_len)])
        s_blocks.append((3, [[sub.recon[i, j] for j in range(3)] for i in range(2)]))
        contributions.append(3)

    rank = len(forms_rows)
    forms = Matrix.from_rows(base, forms_rows)

    # assemble S: functional values of the product from the pointwise products
    total_rows = len(eval_rows)
    s_mat = Matrix.zero(base, total_rows, rank)
    row = 0
    col = 0
    for count, rows in s_blocks:
        for i, rvals in enumerate(rows):
            for j, v in enumerate(rvals):
                s_mat[row + i, col + j] = v
        row += len(rows)
        col += count

    e_mat = Matrix.from_rows(base, eval_rows)
    picked = select_independent_rows(e_mat, prod_len)
    square = Matrix.from_rows(base, [e_mat.row(i) for i in picked])
    inv_sq = invert(square)
    left_inv = Matrix.zero(base, prod_len, total_rows)
    for j, src in enumerate(picked):
        for i in range(prod_len):
            left_inv[i, src] = inv_sq[i, j]

    # reduction of product coefficients mod the defining polynomial
    reduce_q = Matrix.zero(base, n, prod_len)
    cur = (base.one,)
    for j in range(prod_len):
        for i, c in enumerate(cur):
            reduce_q[i, j] = c
        cur = poly_mod(base, (base.zero,) + cur, modulus)

    recon = reduce_q @ left_inv @ s_mat
    assert rank >= 2 * n - 1  # classical lower bound, structural here
    return BilinearAlgorithm(ext, plan, rank, forms, recon, tuple(contributions))


def _degree2_subalgorithm(q: int, pi: tuple) -> BilinearAlgorithm:
    """Canonical rank-3 symmetric algorithm for the residue field at pi.

    Rational-only plan on 3 slots; feasible for every q since q+1 >= 3, and
    never recursing further.
    """
    plan = plan_evaluation(q, 2, allow_deg2=False)
    return build_algorithm(q, 2, plan, modulus=pi)


def multiply(algo: BilinearAlgorithm, x: FieldElement, y: FieldElement) -> FieldElement:
    """Multiply through the decomposition: forms, pointwise products, recon."""
    if x.field != algo.ext or y.field != algo.ext:
        raise ValueError("operands do not live in the algorithm's extension")
    return FieldElement(algo.ext, _apply_raw(algo, x.value, y.value))


def _apply_raw(algo: BilinearAlgorithm, xv: tuple, yv: tuple) -> tuple:
    base = algo.base
    fx = algo.forms.matvec(list(xv))
    fy = algo.forms.matvec(list(yv))
    w = [base.mul(a, b) for a, b in zip(fx, fy)]
    return tuple(algo.recon.matvec(w))


@dataclass(frozen=True)
class VerificationReport:
    mode: str  # "exhaustive" | "random"
    pairs_checked: int
    failures: int
    rank: int
    envelope: int
    seed: int | None = None

    def to_json_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "pairs_checked": self.pairs_checked,
            "failures": self.failures,
            "rank": self.rank,
            "envelope": self.envelope,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def verify(
    algo: BilinearAlgorithm,
    mode: str = "auto",
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Check the decomposition against reference (schoolbook) multiplication.

    Exhaustive over all q**(2n) operand pairs when that count is at most
    2**24 (and "auto" resolves accordingly); otherwise a seeded stream of
    random pairs.  Any mismatch raises VerificationError carrying the
    offending pair.
    """
    q, n = algo.q, algo.n
    pair_count = q ** (2 * n)
    if mode == "auto":
        mode = "exhaustive" if pair_count <= EXHAUSTIVE_PAIR_CAP else "random"
    if mode == "exhaustive":
        if pair_count > EXHAUSTIVE_PAIR_CAP:
            raise ValueError(
                f"exhaustive verification capped at {EXHAUSTIVE_PAIR_CAP} pairs; "
                f"q**(2n) = {pair_count}"
            )
        _exhaustive_check(algo)
        return VerificationReport("exhaustive", pair_count, 0, algo.rank, algo.envelope())
    if mode != "random":
        raise ValueError(f"unknown verification mode {mode!r}")
    if trials < 1:
        raise ValueError("random verification needs at least one trial")
    ext = algo.ext
    rng = random.Random(seed)
    order = ext.order
    for _ in range(trials):
        xc = rng.randrange(order)
        yc = rng.randrange(order)
        xv = ext.from_int(xc)
        yv = ext.from_int(yc)
        got = _apply_raw(algo, xv, yv)
        expected = ext.mul(xv, yv)
        if got != expected:
            raise VerificationError(q, n, xc, yc, ext.to_int(expected), ext.to_int(got))
    return VerificationReport("random", trials, 0, algo.rank, algo.envelope(), seed)


def _exhaustive_check(algo: BilinearAlgorithm) -> None:
    """Vectorized exhaustive check of the bilinear identity.

    Both routes run on integer element codes with base-field add/mul lookup
    tables: the reference route is schoolbook convolution of coefficient
    vectors followed by reduction, the tensor route is forms, pointwise
    products and reconstruction.  Semantics match the scalar path exactly.
    """
    base = algo.base
    ext = algo.ext
    q, n = algo.q, algo.n
    qn = q**n
    prod_len = 2 * n - 1
    elems = list(base.elements())
    add_t = np.array(
        [[base.to_int(base.add(a, b)) for b in elems] for a in elems], dtype=np.int64
    )
    mul_t = np.array(
        [[base.to_int(base.mul(a, b)) for b in elems] for a in elems], dtype=np.int64
    )
    # all coefficient vectors by code: row k = digits of k base q, low index first
    codes = np.arange(qn, dtype=np.int64)
    coeffs = np.empty((qn, n), dtype=np.int64)
    rest = codes.copy()
    for j in range(n):
        coeffs[:, j] = rest % q
        rest //= q
    forms_c = np.array(algo.forms.to_int_lists(), dtype=np.int64)
    recon_c = np.array(algo.recon.to_int_lists(), dtype=np.int64)
    # u**k mod modulus for k < 2n-1, as coordinate rows of codes
    curp = (base.one,)
    all_rows = []
    for _ in range(prod_len):
        all_rows.append([base.to_int(c) for c in curp] + [0] * (n - len(curp)))
        curp = poly_mod(base, (base.zero,) + curp, ext.modulus)
    red = np.array(all_rows, dtype=np.int64)  # prod_len x n

    rank = algo.rank
    phi = np.zeros((qn, rank), dtype=np.int64)
    for i in range(rank):
        acc = np.zeros(qn, dtype=np.int64)
        for j in range(n):
            fij = forms_c[i, j]
            if fij:
                acc = add_t[acc, mul_t[fij, coeffs[:, j]]]
        phi[:, i] = acc

    chunk = max(1, (1 << 20) // qn)  # keeps per-chunk arrays tens of MB at worst
    for start in range(0, qn, chunk):
        stop = min(qn, start + chunk)
        cx = coeffs[start:stop]  # B x n
        b = stop - start
        # reference route: convolution then reduction
        conv = np.zeros((b, qn, prod_len), dtype=np.int64)
        for i in range(n):
            col = cx[:, i][:, None]  # B x 1 codes
            for j in range(n):
                prod = mul_t[col, coeffs[None, :, j]]
                conv[:, :, i + j] = add_t[conv[:, :, i + j], prod]
        ref = conv[:, :, :n].copy()
        for k in range(n, prod_len):
            hk = conv[:, :, k]
            for j in range(n):
                rkj = red[k, j]
                if rkj:
                    ref[:, :, j] = add_t[ref[:, :, j], mul_t[rkj, hk]]
        # tensor route: pointwise products of forms, then reconstruction
        px = phi[start:stop]  # B x rank
        got = np.zeros((b, qn, n), dtype=np.int64)
        for k in range(rank):
            wk = mul_t[px[:, k][:, None], phi[None, :, k]]
            for j in range(n):
                cjk = recon_c[j, k]
                if cjk:
                    got[:, :, j] = add_t[got[:, :, j], mul_t[cjk, wk]]
        bad = (ref != got).any(axis=2)
        if bad.any():
            bx, by = np.argwhere(bad)[0]
            x_code = int(codes[start + bx])
            y_code = int(codes[by])
            xv = ext.from_int(x_code)
            yv = ext.from_int(y_code)
            raise VerificationError(
                q,
                n,
                x_code,
                y_code,
                ext.to_int(ext.mul(xv, yv)),
                ext.to_int(_apply_raw(algo, xv, yv)),
            )


def emit_tensor(algo: BilinearAlgorithm) -> str:
    """Serialize the decomposition as canonical JSON (byte-stable)."""
    base = algo.base
    doc = {
        "q": algo.q,
        "n": algo.n,
        "modulus": [base.to_int(c) for c in algo.ext.modulus],
        "rank": algo.rank,
        "forms": algo.forms.to_int_lists(),
        "recon": algo.recon.to_int_lists(),
        "ledger": {
            "plan": algo.plan.to_json_dict(base),
            "contributions": list(algo.contributions),
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_tensor(text: str) -> BilinearAlgorithm:
    """Rebuild an algorithm from emit_tensor output; verify() re-checks it."""
    doc = json.loads(text)
    q, n = doc["q"], doc["n"]
    base = make_field(q)
    modulus = tuple(base.from_int(c) for c in doc["modulus"])
    ledger = doc["ledger"]
    plan = EvalPlan(
        q,
        n,
        tuple(base.from_int(c) for c in ledger["plan"]["rational_nodes"]),
        ledger["plan"]["use_infinity"],
        tuple(tuple(base.from_int(c) for c in pi) for pi in ledger["plan"]["deg2_places"]),
        ledger["plan"]["total_degree"],
    )
    ext = ExtensionField(base, n, modulus)
    forms = Matrix.from_rows(base, [[base.from_int(c) for c in row] for row in doc["forms"]])
    recon = Matrix.from_rows(base, [[base.from_int(c) for c in row] for row in doc["recon"]])
    if forms.rows != doc["rank"] or recon.cols != doc["rank"]:
        raise ValueError("tensor document is inconsistent: rank does not match matrices")
    return BilinearAlgorithm(ext, plan, doc["rank"], forms, recon, tuple(ledger["contributions"]))
