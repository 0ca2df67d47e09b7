"""Dense multi-index tensors with jet or rational entries.

Slots carry a variance (up/down); declared symmetries are validated on
construction with exact entrywise equality, never used to compress storage.
Index positions are 0-based and purely positional.
"""

from __future__ import annotations

from itertools import permutations, product
from math import factorial

from .errors import ShapeError, SingularityError
from .jets import Jet
from .rationals import Q, QONE, QZERO, rat

UP = "up"
DOWN = "down"

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


def all_indices(dim: int, rank: int):
    return product(range(dim), repeat=rank)


def _canon_symmetries(symmetries, rank):
    canon = []
    for slots, kind in symmetries:
        slots = tuple(sorted(slots))
        if len(set(slots)) != len(slots) or any(not 0 <= s < rank for s in slots):
            raise ShapeError(f"bad symmetry slot set {slots}")
        if kind not in (SYMMETRIC, ANTISYMMETRIC):
            raise ShapeError(f"unknown symmetry kind {kind!r}")
        if len(slots) >= 2:
            canon.append((slots, kind))
    return tuple(canon)


class _BaseTensor:
    __slots__ = ("dim", "variances", "entries", "symmetries")

    kind = "tensor"

    def __init__(self, dim, variances, entries, symmetries=(), check=True):
        variances = tuple(variances)
        if any(v not in (UP, DOWN) for v in variances):
            raise ShapeError(f"bad variances {variances}")
        entries = list(entries)
        if len(entries) != dim ** len(variances):
            raise ShapeError(
                f"expected {dim ** len(variances)} entries, got {len(entries)}"
            )
        self.dim = dim
        self.variances = variances
        self.entries = entries
        self.symmetries = _canon_symmetries(symmetries, len(variances))
        if check:
            self._check_entries()
            self.check_symmetries()

    # subclasses: _check_entries, zero_entry, _coerce

    @property
    def rank(self) -> int:
        return len(self.variances)

    def _offset(self, idx) -> int:
        off = 0
        for i in idx:
            off = off * self.dim + i
        return off

    def __getitem__(self, idx):
        if isinstance(idx, int):
            idx = (idx,)
        if len(idx) != self.rank:
            raise ShapeError(f"index {idx} has wrong rank for {self.variances}")
        return self.entries[self._offset(idx)]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.variances == other.variances
            and self.entries == other.entries
        )

    __hash__ = None

    def __repr__(self):
        marks = "".join("u" if v == UP else "d" for v in self.variances)
        return f"<{type(self).__name__} dim={self.dim} slots={marks}>"

    def is_zero(self) -> bool:
        return all(_entry_is_zero(e) for e in self.entries)

    def check_symmetries(self):
        """Validate every declared symmetry entrywise; raise on violation."""
        for slots, kind in self.symmetries:
            witness = self.symmetry_witness(slots, kind)
            if witness is not None:
                raise ShapeError(
                    f"declared {kind} symmetry on slots {slots} fails at index {witness}"
                )

    def symmetry_witness(self, slots, kind):
        """First index tuple violating the symmetry, or None."""
        sign = QONE if kind == SYMMETRIC else -QONE
        for a_pos in range(len(slots) - 1):
            s, t = slots[a_pos], slots[a_pos + 1]
            for idx in all_indices(self.dim, self.rank):
                if idx[s] >= idx[t]:
                    continue
                swapped = list(idx)
                swapped[s], swapped[t] = swapped[t], swapped[s]
                if self[idx] != sign * self[tuple(swapped)]:
                    return idx
            if kind == ANTISYMMETRIC:
                for idx in all_indices(self.dim, self.rank):
                    if idx[s] == idx[t] and not _entry_is_zero(self[idx]):
                        return idx
        return None

    def with_symmetries(self, symmetries):
        """Same entries with a different declared symmetry list (validated)."""
        return type(self)(self.dim, self.variances, self.entries, symmetries)

    def map_entries(self, fn, variances=None, symmetries=()):
        return type(self)(
            self.dim,
            self.variances if variances is None else variances,
            [fn(e) for e in self.entries],
            symmetries,
        )


def _entry_is_zero(e) -> bool:
    if isinstance(e, Jet):
        return e.is_zero()
    return not e


class JetTensor(_BaseTensor):
    """Tensor whose entries are jets sharing n_vars and order."""

    __slots__ = ("n_vars", "order")

    def __init__(self, dim, variances, entries, symmetries=(), check=True):
        entries = list(entries)
        if not entries:
            raise ShapeError("empty tensor")
        if not all(isinstance(e, Jet) for e in entries):
            raise ShapeError("JetTensor entries must be jets")
        n_vars = entries[0].n_vars
        order = min(e.order for e in entries)
        entries = [e.truncate(min(order, e.order)) for e in entries]
        self.n_vars = n_vars
        self.order = order
        super().__init__(dim, variances, entries, symmetries, check)

    def _check_entries(self):
        if any(e.n_vars != self.n_vars for e in self.entries):
            raise ShapeError("tensor entries disagree in variable count")

    def zero_entry(self):
        return Jet.zero(self.n_vars, self.order)

    @classmethod
    def build(cls, dim, variances, fn, symmetries=(), check=True):
        """Entries from fn(idx) -> Jet; mixed orders are aligned to the min."""
        entries = [fn(idx) for idx in all_indices(dim, len(variances))]
        return cls(dim, variances, entries, symmetries, check)

    def truncate(self, order: int) -> "JetTensor":
        return JetTensor(
            self.dim,
            self.variances,
            [e.truncate(order) for e in self.entries],
            self.symmetries,
            check=False,
        )

    def at_origin(self, symmetries=None) -> "PointTensor":
        """Constant terms as a PointTensor."""
        return PointTensor(
            self.dim,
            self.variances,
            [e.constant_term() for e in self.entries],
            self.symmetries if symmetries is None else symmetries,
            check=False,
        )

    def __add__(self, other):
        _require_same_shape(self, other)
        return JetTensor(
            self.dim,
            self.variances,
            [a + b for a, b in zip(self.entries, other.entries)],
        )

    def __sub__(self, other):
        _require_same_shape(self, other)
        return JetTensor(
            self.dim,
            self.variances,
            [a - b for a, b in zip(self.entries, other.entries)],
        )

    def __neg__(self):
        return self.map_entries(lambda e: -e)


class PointTensor(_BaseTensor):
    """Tensor of exact rationals (order-zero jets) at the chart origin."""

    __slots__ = ()

    def _check_entries(self):
        self.entries = [rat(e) for e in self.entries]

    def zero_entry(self):
        return QZERO

    @classmethod
    def build(cls, dim, variances, fn, symmetries=(), check=True):
        entries = [fn(idx) for idx in all_indices(dim, len(variances))]
        return cls(dim, variances, entries, symmetries, check)

    @classmethod
    def zeros(cls, dim, variances, symmetries=()):
        return cls(dim, variances, [QZERO] * dim ** len(variances), symmetries, check=False)

    def as_jets(self, n_vars: int, order: int, symmetries=None) -> JetTensor:
        return JetTensor(
            self.dim,
            self.variances,
            [Jet.const(n_vars, order, e) for e in self.entries],
            self.symmetries if symmetries is None else symmetries,
            check=False,
        )

    def __add__(self, other):
        _require_same_shape(self, other)
        return PointTensor(
            self.dim,
            self.variances,
            [a + b for a, b in zip(self.entries, other.entries)],
            check=False,
        )

    def __sub__(self, other):
        _require_same_shape(self, other)
        return PointTensor(
            self.dim,
            self.variances,
            [a - b for a, b in zip(self.entries, other.entries)],
            check=False,
        )

    def __neg__(self):
        return self.map_entries(lambda e: -e)

    def scaled(self, s) -> "PointTensor":
        s = rat(s)
        return self.map_entries(lambda e: s * e)


def _require_same_shape(a, b):
    if a.dim != b.dim or a.variances != b.variances:
        raise ShapeError(f"shape mismatch: {a!r} vs {b!r}")
    if isinstance(a, JetTensor) and a.n_vars != b.n_vars:
        raise ShapeError("variable count mismatch")


# ---------------------------------------------------------------------------
# slot operations
# ---------------------------------------------------------------------------


def contract(tensor, slot_up: int, slot_down: int):
    """Einstein sum over one up slot and one down slot; both slots drop."""
    rank = tensor.rank
    if slot_up == slot_down or not (0 <= slot_up < rank and 0 <= slot_down < rank):
        raise ShapeError(f"bad contraction slots ({slot_up}, {slot_down})")
    if tensor.variances[slot_up] != UP or tensor.variances[slot_down] != DOWN:
        raise ShapeError(
            f"contraction needs an up/down pair, got "
            f"{tensor.variances[slot_up]}/{tensor.variances[slot_down]}"
        )
    keep = [p for p in range(rank) if p not in (slot_up, slot_down)]
    variances = tuple(tensor.variances[p] for p in keep)
    dim = tensor.dim

    def entry(idx):
        total = tensor.zero_entry()
        full = [0] * rank
        for p, i in zip(keep, idx):
            full[p] = i
        for s in range(dim):
            full[slot_up] = s
            full[slot_down] = s
            total = total + tensor[tuple(full)]
        return total

    cls = type(tensor)
    return cls(dim, variances, [entry(idx) for idx in all_indices(dim, len(keep))], check=False)


def _pairing_apply(tensor, slot, matrix_entries, new_variance):
    """Replace slot contents by sum_m M[i][m] * T[... m ...]."""
    rank = tensor.rank
    dim = tensor.dim

    def entry(idx):
        total = tensor.zero_entry()
        probe = list(idx)
        i = idx[slot]
        for m in range(dim):
            probe[slot] = m
            total = total + matrix_entries[i][m] * tensor[tuple(probe)]
        return total

    variances = list(tensor.variances)
    variances[slot] = new_variance
    cls = type(tensor)
    return cls(dim, tuple(variances), [entry(idx) for idx in all_indices(dim, rank)], check=False)


def omega_lower(tensor, slot: int, omega):
    """Lower an up slot with a symplectic form: (T_low)_i = sum_m w_im T^m.

    ``omega`` is a (down, down) tensor of the same entry kind; its constant
    term must be invertible.
    """
    if tensor.variances[slot] != UP:
        raise ShapeError(f"slot {slot} is not up")
    if omega.variances != (DOWN, DOWN):
        raise ShapeError("omega must be a (down, down) tensor")
    _require_invertible_origin(omega)
    matrix = [[omega[(i, m)] for m in range(omega.dim)] for i in range(omega.dim)]
    return _pairing_apply(tensor, slot, matrix, DOWN)


def omega_raise(tensor, slot: int, omega_inv):
    """Raise a down slot with the inverse form: (T_up)^k = sum_i w^ki T_i."""
    if tensor.variances[slot] != DOWN:
        raise ShapeError(f"slot {slot} is not down")
    if omega_inv.variances != (UP, UP):
        raise ShapeError("omega_inv must be an (up, up) tensor")
    matrix = [[omega_inv[(k, i)] for i in range(omega_inv.dim)] for k in range(omega_inv.dim)]
    return _pairing_apply(tensor, slot, matrix, UP)


def _require_invertible_origin(omega):
    if isinstance(omega, JetTensor):
        rows = [[omega[(i, j)].constant_term() for j in range(omega.dim)] for i in range(omega.dim)]
    else:
        rows = [[omega[(i, j)] for j in range(omega.dim)] for i in range(omega.dim)]
    if not rat_det(rows):
        raise SingularityError("form is degenerate at the origin")


def rat_det(rows) -> "Q":
    """Determinant of a square rational matrix (fraction-free not needed here)."""
    n = len(rows)
    m = [[Q(x) for x in row] for row in rows]
    det = QONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return QZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = QONE / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] * inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


SYMMETRIZE = "symmetrize"
ANTISYMMETRIZE = "antisymmetrize"
CYCLIC_SUM = "cyclic_sum"


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sym_project(tensor, slots, mode):
    """Permutation sums over a slot set.

    ``cyclic_sum`` adds the cyclic rotations with no normalization, matching
    the parenthesized-index convention T_(jkl) = T_jkl + T_klj + T_ljk;
    ``symmetrize``/``antisymmetrize`` average over all permutations with a
    1/m! factor (and signs for the antisymmetric case).
    """
    slots = tuple(slots)
    rank = tensor.rank
    if len(set(slots)) != len(slots) or any(not 0 <= s < rank for s in slots):
        raise ShapeError(f"bad slot set {slots}")
    v0 = tensor.variances[slots[0]]
    if any(tensor.variances[s] != v0 for s in slots):
        raise ShapeError("slots to permute must share a variance")
    m = len(slots)
    if mode == CYCLIC_SUM:
        perms = [tuple((p + shift) % m for p in range(m)) for shift in range(m)]
        signs = [QONE] * m
        norm = QONE
    elif mode in (SYMMETRIZE, ANTISYMMETRIZE):
        perms = [tuple(p) for p in permutations(range(m))]
        signs = [
            QONE if mode == SYMMETRIZE else Q(_perm_sign(p)) for p in perms
        ]
        norm = QONE / factorial(m)
    else:
        raise ShapeError(f"unknown mode {mode!r}")

    def entry(idx):
        total = tensor.zero_entry()
        for perm, sign in zip(perms, signs):
            src = list(idx)
            for target_pos, source_pos in enumerate(perm):
                src[slots[target_pos]] = idx[slots[source_pos]]
            total = total + sign * tensor[tuple(src)]
        if norm != QONE:
            total = norm * total
        return total

    cls = type(tensor)
    return cls(
        tensor.dim,
        tensor.variances,
        [entry(idx) for idx in all_indices(tensor.dim, rank)],
        check=False,
    )


def veblen_sum(tensor: PointTensor) -> PointTensor:
    """Sum over all pair choices from the non-leading slots.

    The input has slots (i | j k | a_1 ... a_r), symmetric in (j, k) and in
    the trailing block.  For each of the (r+2)(r+1)/2 two-element subsets
    {p, q} of {j, k, a_1, ..., a_r} the term T_{i p q rest} is added; the
    result vanishes exactly on genuine normal tensors.
    """
    rank = tensor.rank
    if rank < 3:
        raise ShapeError("veblen_sum needs at least rank 3")
    _require_symmetry(tensor, (1, 2))
    if rank > 4:
        _require_symmetry(tensor, tuple(range(3, rank)))
    tail = rank - 1

    def entry(idx):
        i = idx[0]
        rest = list(idx[1:])
        total = tensor.zero_entry()
        for p in range(tail):
            for q in range(p + 1, tail):
                remaining = [rest[t] for t in range(tail) if t not in (p, q)]
                total = total + tensor[tuple([i, rest[p], rest[q]] + remaining)]
        return total

    return PointTensor(
        tensor.dim,
        tensor.variances,
        [entry(idx) for idx in all_indices(tensor.dim, rank)],
        check=False,
    )


def _require_symmetry(tensor, slots):
    if len(slots) < 2:
        return
    witness = tensor.symmetry_witness(tuple(slots), SYMMETRIC)
    if witness is not None:
        raise ShapeError(
            f"required symmetry on slots {tuple(slots)} fails at index {witness}"
        )
