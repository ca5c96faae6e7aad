"""The classification tables, loaded from data files, plus the pair model.

Tables live in plain-text files under ``tables/`` (override the directory
with the ``CARTAN_DATA_DIR`` environment variable).  Each nonempty,
non-comment line is one record of ``key=value`` fields; values with spaces
are double-quoted.  The field grammars are documented in the data files and
in the README.  Entries are parsed once, frozen, and shared.

This module also defines the input model for computations: a
:class:`ReductivePair` is a reductive algebra (simple factors plus a central
torus) together with a list of subalgebra items and an optional central
subspace expressed in the canonical one-dimensional centralizer generators.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import exprs
from .errors import ConstraintError, DimensionError, TableFormatError
from .ratlinalg import (
    LinearFunctional,
    RationalSubspace,
    Vector,
    span,
)
from .rootsystems import (
    SimpleType,
    build_root_system,
    dual_weight_permutation,
    sl,
    so,
    sp,
)

TABLE_FILES = {
    "T1.4": "t14.tbl",
    "T1.6": "t16.tbl",
    "T3.2": "t32.tbl",
    "T3.4": "t34.tbl",
    "T3.6": "t36.tbl",
    "T3.7": "t37.tbl",
    "T4.8": "t48.tbl",
}

EXCEPTIONAL_TOKENS = {"G2": ("G", 2), "F4": ("F", 4), "E6": ("E", 6), "E7": ("E", 7), "E8": ("E", 8)}


# ---------------------------------------------------------------------------
# record parsing
# ---------------------------------------------------------------------------

_FIELD = re.compile(r'(\w[\w.]*)=("([^"]*)"|\S+)')


def split_top(text: str, sep: str) -> list[str]:
    """Split on a separator character, ignoring occurrences inside () or []."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_record(line: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    pos = 0
    while pos < len(line):
        if line[pos].isspace():
            pos += 1
            continue
        m = _FIELD.match(line, pos)
        if not m:
            raise TableFormatError(f"malformed field at column {pos + 1}")
        key = m.group(1)
        fields[key] = m.group(3) if m.group(3) is not None else m.group(2)
        pos = m.end()
    return fields


# ---------------------------------------------------------------------------
# type and item patterns
# ---------------------------------------------------------------------------

_TYPE_PAT = re.compile(r"([A-Za-z]\w*)(?:\(([^()]*)\))?$")


@dataclass(frozen=True)
class TypePattern:
    """A parameterized simple-type expression such as so(4*n+2) or X(r)."""

    base: str  # 'sl' | 'so' | 'sp' | rank-form series letter | 'X' | exceptional token
    arg: str | None

    def resolve(self, params: dict) -> SimpleType:
        if self.base in EXCEPTIONAL_TOKENS:
            s, r = EXCEPTIONAL_TOKENS[self.base]
            return SimpleType(s, r)
        if self.arg is None:
            raise TableFormatError(f"type pattern {self.base!r} needs an argument")
        if self.base == "X":
            series = params.get("s")
            if not isinstance(series, str):
                raise ConstraintError("pattern X(...) needs a series parameter 's'")
            return SimpleType(series, exprs.evaluate_int(self.arg, params))
        n = exprs.evaluate_int(self.arg, params)
        if self.base == "sl":
            return sl(n)
        if self.base == "so":
            return so(n)
        if self.base == "sp":
            return sp(n)
        if self.base in ("A", "B", "C", "D"):
            return SimpleType(self.base, n)
        raise TableFormatError(f"unknown type pattern base {self.base!r}")


def parse_type_pattern(text: str) -> TypePattern:
    m = _TYPE_PAT.match(text.strip())
    if not m:
        raise TableFormatError(f"bad type pattern {text!r}")
    return TypePattern(m.group(1), m.group(2))


def parse_g_pattern(text: str) -> tuple[TypePattern, ...]:
    return tuple(parse_type_pattern(part) for part in split_top(text, "+"))


ITEM_BASES = {"sl", "so", "sp", "spin", "g2", "f4", "e6", "e7", "diag", "bridge", "sl2long"}


@dataclass(frozen=True)
class ItemPattern:
    base: str
    arg: str | None
    targets: tuple[int, ...]  # 0-based positions in the row's g pattern


def parse_h_pattern(text: str) -> tuple[ItemPattern, ...]:
    items = []
    for part in split_top(text, "*"):
        part = part.strip()
        targets: tuple[int, ...] = (0,)
        if "@" in part:
            part, tail = part.split("@", 1)
            targets = tuple(int(x) - 1 for x in tail.split(","))
        m = _TYPE_PAT.match(part)
        if not m or m.group(1) not in ITEM_BASES:
            raise TableFormatError(f"bad subalgebra item {part!r}")
        items.append(ItemPattern(m.group(1), m.group(2), targets))
    return tuple(items)


def size_dim(base: str, size: int) -> int:
    """Dimension of the named algebra of the given matrix size."""
    if base == "sl":
        return size * size - 1
    if base in ("so", "spin"):
        return size * (size - 1) // 2
    if base == "sp":
        if size % 2:
            raise ConstraintError(f"sp({size}) needs an even size")
        return size * (size + 1) // 2
    raise TableFormatError(f"no size-based dimension for {base!r}")


def size_type(base: str, size: int) -> SimpleType:
    """SimpleType of the named algebra (handles the small coincidences)."""
    if base == "sl":
        return sl(size)
    if base in ("so", "spin"):
        if size == 3:
            return SimpleType("A", 1)
        return so(size)
    if base == "sp":
        if size == 2:
            return SimpleType("A", 1)
        return sp(size)
    raise TableFormatError(f"no size-based type for {base!r}")


# ---------------------------------------------------------------------------
# symbolic weight expressions
# ---------------------------------------------------------------------------

_WTERM = re.compile(r"pi(\*?)('{0,2})\(([^()]*)\)$")


@dataclass(frozen=True)
class WeightGroup:
    """One generator group: a list of weight sums, optionally ranged."""

    sums: tuple[tuple[tuple[bool, int, str], ...], ...]  # (dualize, factor, index expr)
    var: str | None
    lo: str | None
    hi: str | None


def _parse_wsum(text: str) -> tuple[tuple[bool, int, str], ...]:
    terms = []
    for piece in split_top(text, "+"):
        m = _WTERM.match(piece.strip())
        if not m:
            raise TableFormatError(f"bad weight term {piece.strip()!r}")
        terms.append((m.group(1) == "*", len(m.group(2)), m.group(3)))
    return tuple(terms)


@lru_cache(maxsize=1024)
def parse_weight_groups(text: str) -> tuple[WeightGroup, ...]:
    groups = []
    for part in text.split("|"):
        part = part.strip()
        if not part:
            continue
        var = lo = hi = None
        if ":" in part:
            part, rng = part.split(":", 1)
            m = re.match(r"\s*(\w+)\s*=\s*(.+?)\s*\.\.\s*(.+?)\s*$", rng)
            if not m:
                raise TableFormatError(f"bad range {rng!r}")
            var, lo, hi = m.group(1), m.group(2), m.group(3)
        sums = tuple(_parse_wsum(s) for s in part.split(","))
        groups.append(WeightGroup(sums, var, lo, hi))
    return tuple(groups)


def instantiate_weight_groups(
    groups: Sequence[WeightGroup],
    params: dict,
    factor_types: Sequence[SimpleType],
) -> list[Vector]:
    """Evaluate symbolic generators to coordinate vectors over the factors.

    The ambient is the concatenation of the fundamental-weight blocks of the
    factors, in order.
    """
    ranks = [t.rank for t in factor_types]
    offsets = [sum(ranks[:i]) for i in range(len(ranks))]
    total = sum(ranks)
    duals = [dual_weight_permutation(t) for t in factor_types]
    out: list[Vector] = []
    for g in groups:
        if g.var is None:
            values = [None]
        else:
            lo = exprs.evaluate_int(g.lo, params)
            hi = exprs.evaluate_int(g.hi, params)
            values = list(range(lo, hi + 1))
        for value in values:
            env = dict(params)
            if g.var is not None:
                env[g.var] = value
            for terms in g.sums:
                v = [Fraction(0)] * total
                for dualize, factor, idx_expr in terms:
                    if factor >= len(factor_types):
                        raise TableFormatError("weight term refers to a missing factor")
                    idx = exprs.evaluate_int(idx_expr, env)
                    if not (1 <= idx <= ranks[factor]):
                        raise ConstraintError(
                            f"weight index {idx} out of range for factor {factor_types[factor]}"
                        )
                    if dualize:
                        idx = duals[factor][idx - 1] + 1
                    v[offsets[factor] + idx - 1] += 1
                out.append(tuple(v))
    return out


_CUT_TERM = re.compile(r"c\(([^()]*)\)\s*=\s*(.+)$")


def instantiate_cut(text: str, params: dict, rank: int) -> Vector:
    """Functional coefficients on a single factor's weight coordinates."""
    coeffs = [Fraction(0)] * rank
    for part in text.split("|"):
        part = part.strip()
        var = lo = hi = None
        if ":" in part:
            part, rng = part.split(":", 1)
            m = re.match(r"\s*(\w+)\s*=\s*(.+?)\s*\.\.\s*(.+?)\s*$", rng)
            if not m:
                raise TableFormatError(f"bad range {rng!r}")
            var, lo, hi = m.group(1), m.group(2), m.group(3)
        m = _CUT_TERM.match(part.strip())
        if not m:
            raise TableFormatError(f"bad cut term {part.strip()!r}")
        values = [None]
        if var is not None:
            values = list(range(exprs.evaluate_int(lo, params), exprs.evaluate_int(hi, params) + 1))
        for value in values:
            env = dict(params)
            if var is not None:
                env[var] = value
            idx = exprs.evaluate_int(m.group(1), env)
            if not (1 <= idx <= rank):
                raise ConstraintError(f"cut index {idx} out of range")
            coeffs[idx - 1] += exprs.evaluate(m.group(2), env)
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# catalog entries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    table: str
    row: str          # row number as text ('3') or a series key ('G')
    g_pattern: tuple[TypePattern, ...]
    h_pattern: tuple[ItemPattern, ...]
    constraints: tuple[str, ...]
    gens: tuple[WeightGroup, ...]
    aux: dict = field(default_factory=dict, compare=False)
    raw: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    @property
    def row_id(self) -> str:
        return f"{self.table}:{self.row}"

    def record_line(self) -> str:
        """Serialize back to the data-file record format."""
        parts = []
        for key, value in self.raw:
            if re.fullmatch(r"\S+", value) and '"' not in value:
                parts.append(f"{key}={value}")
            else:
                parts.append(f'{key}="{value}"')
        return " ".join(parts)

    def variables(self) -> tuple[str, ...]:
        names: set[str] = set()
        for tp in self.g_pattern:
            if tp.arg:
                names |= exprs.variables(tp.arg)
            if tp.base == "X":
                names.add("s")
        for ip in self.h_pattern:
            if ip.arg:
                names |= exprs.variables(ip.arg)
        for c in self.constraints:
            names |= exprs.variables(c)
        return tuple(sorted(names))

    def check_constraints(self, params: dict) -> None:
        for c in self.constraints:
            if not exprs.check_relation(c, params):
                raise ConstraintError(f"{self.row_id}: parameters {params} violate {c!r}")


def _split_constraints(text: str) -> tuple[str, ...]:
    return tuple(c.strip() for c in text.split(";") if c.strip())


_KNOWN_TYPE_BASES = {"sl", "so", "sp", "A", "B", "C", "D", "X"} | set(EXCEPTIONAL_TOKENS)


def _validate_entry_syntax(entry: CatalogEntry) -> None:
    """Eager structural validation so data errors surface at load time."""
    for tp in entry.g_pattern:
        if tp.base not in _KNOWN_TYPE_BASES:
            raise TableFormatError(f"unknown type pattern base {tp.base!r}")
        if tp.arg is not None:
            exprs.syntax_check(tp.arg)
    for ip in entry.h_pattern:
        if ip.arg is not None:
            exprs.syntax_check(ip.arg)
    for c in entry.constraints:
        exprs.syntax_check_relation(c)
    for g in entry.gens:
        for terms in g.sums:
            for _, _, idx in terms:
                exprs.syntax_check(idx)
        if g.var is not None:
            exprs.syntax_check(g.lo)
            exprs.syntax_check(g.hi)
    aux = entry.aux
    for key in ("zgen", "alpha", "kform"):
        if key in aux:
            exprs.syntax_check(aux[key])
    for key in ("lam", "full", "sat"):
        if key in aux:
            parse_weight_groups(aux[key])
    if "idx" in aux and not aux["idx"].isdigit():
        raise TableFormatError(f"idx must be a positive integer, got {aux['idx']!r}")
    if "norm" in aux:
        for part in split_top(aux["norm"], "*"):
            part = part.strip()
            if part == "Z":
                continue
            m = _TYPE_PAT.match(part)
            if not m or (m.group(1) not in ("sl", "so", "sp") and m.group(1) not in EXCEPTIONAL_TOKENS):
                raise TableFormatError(f"bad normalizer factor {part!r}")
            if m.group(2) is not None:
                exprs.syntax_check(m.group(2))
    if "mods" in aux:
        for summand in split_top(aux["mods"], "+"):
            summand = summand.strip()
            m = re.match(r"z\((-?\d+)\)\s*:\s*(.*)$", summand)
            if m:
                summand = m.group(2)
            for term in split_top(summand, "*"):
                if not _MOD_TERM.match(term.strip()):
                    raise TableFormatError(f"bad module term {term.strip()!r}")
    if "ideals" in aux:
        for part in aux["ideals"].split("|"):
            part = part.strip()
            if not part:
                continue
            if ":" in part:
                part, cond = part.split(":", 1)
                for c in cond.split("&"):
                    exprs.syntax_check_relation(c)
            if not all(x.strip().isdigit() for x in part.split(",")):
                raise TableFormatError(f"bad ideal sequence {part!r}")


class Catalog:
    """All classification tables, loaded once from a data directory."""

    def __init__(self, data_dir: Path):
        self.data_dir = data_dir
        self.entries: dict[tuple[str, str], CatalogEntry] = {}
        for table, fname in TABLE_FILES.items():
            path = data_dir / fname
            if not path.exists():
                raise TableFormatError(f"missing table file {path}")
            for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    rec = _parse_record(line)
                    entry = self._build_entry(rec)
                except (TableFormatError, ConstraintError) as exc:
                    raise TableFormatError(f"{path.name}:{lineno}: {exc}") from exc
                key = (entry.table, entry.row)
                if key in self.entries:
                    raise TableFormatError(f"{path.name}:{lineno}: duplicate row {key}")
                self.entries[key] = entry

    @staticmethod
    def _build_entry(rec: dict[str, str]) -> CatalogEntry:
        table = rec["table"]
        row = rec["row"]
        g_pattern = parse_g_pattern(rec["g"]) if "g" in rec else ()
        h_pattern = parse_h_pattern(rec["h"]) if "h" in rec else ()
        constraints = _split_constraints(rec.get("constraint", ""))
        gens = parse_weight_groups(rec["gens"]) if "gens" in rec else ()
        aux: dict = {}
        for key in ("zgen", "lam", "alpha", "full", "sat", "cut", "kform",
                    "idx", "module", "norm", "mods", "ideals", "exhaustive"):
            if key in rec:
                aux[key] = rec[key]
        entry = CatalogEntry(table, row, g_pattern, h_pattern, constraints, gens, aux,
                             tuple(rec.items()))
        _validate_entry_syntax(entry)
        return entry

    def lookup(self, table: str, row) -> CatalogEntry:
        key = (table, str(row))
        if key not in self.entries:
            raise ConstraintError(f"unknown catalog row {table}:{row}")
        return self.entries[key]

    def rows(self, table: str) -> list[CatalogEntry]:
        return [e for (t, _), e in sorted(self.entries.items()) if t == table]


_CATALOG: Catalog | None = None


def default_data_dir() -> Path:
    env = os.environ.get("CARTAN_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).parent / "tables"


def get_catalog() -> Catalog:
    global _CATALOG
    if _CATALOG is None or _CATALOG.data_dir != default_data_dir():
        _CATALOG = Catalog(default_data_dir())
    return _CATALOG


def lookup(table: str, row) -> CatalogEntry:
    return get_catalog().lookup(table, row)


# ---------------------------------------------------------------------------
# reductive pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HItem:
    """One subalgebra item of a pair: a named embedded ideal.

    `base` and `size` are the surface description (sl/so/sp/spin with the
    matrix size, or g2/f4/e6/e7/diag/bridge/sl2long); `targets` are the
    indices of the ambient factors it lives in (two for diag and bridge).
    """

    base: str
    size: int | None
    targets: tuple[int, ...]
    diag_type: SimpleType | None = None

    @property
    def dim(self) -> int:
        if self.base in ("sl", "so", "sp", "spin"):
            return size_dim("so" if self.base == "spin" else self.base, self.size)
        if self.base == "diag":
            return self.diag_type.dim
        if self.base in ("bridge", "sl2long"):
            return 3
        return {"g2": 14, "f4": 52, "e6": 78, "e7": 133}[self.base]

    @property
    def simple_type(self) -> SimpleType:
        """Abstract isomorphism type of the ideal."""
        if self.base in ("sl", "so", "sp", "spin"):
            return size_type("so" if self.base == "spin" else self.base, self.size)
        if self.base == "diag":
            return self.diag_type
        if self.base in ("bridge", "sl2long"):
            return SimpleType("A", 1)
        return {"g2": SimpleType("G", 2), "f4": SimpleType("F", 4),
                "e6": SimpleType("E", 6), "e7": SimpleType("E", 7)}[self.base]

    def describe(self) -> str:
        if self.base in ("sl", "so", "sp", "spin"):
            name = f"{self.base}({self.size})"
        elif self.base == "diag":
            name = f"diag({classical_name(self.diag_type)})"
        else:
            name = self.base
        if len(self.targets) > 1 or self.targets != (0,):
            name += "@" + ",".join(str(t + 1) for t in self.targets)
        return name


# the classification-facing name for the item model
EmbeddingDescriptor = HItem


@dataclass(frozen=True)
class ReductivePair:
    """A reductive ambient algebra with an embedded reductive subalgebra.

    The central subspace, when present, lives in coordinates
    [z(g) coordinates..., one coordinate per extendable factor in factor
    order], where a factor is extendable when its items form an extension
    family with a one-dimensional centralizer center (see `family_slots`).
    """

    factors: tuple[SimpleType, ...]
    center_dim: int = 0
    items: tuple[HItem, ...] = ()
    center: RationalSubspace | None = None

    def __post_init__(self):
        for item in self.items:
            for t in item.targets:
                if not (0 <= t < len(self.factors)):
                    raise ConstraintError(f"item {item.describe()} targets missing factor {t + 1}")
        if self.center is not None:
            expected = self.center_dim + len(self.family_slots())
            if self.center.ambient_dim != expected:
                raise DimensionError(
                    f"central subspace ambient {self.center.ambient_dim}, expected {expected}"
                )

    def items_on_factor(self, f: int) -> tuple[HItem, ...]:
        return tuple(it for it in self.items if it.targets == (f,))

    def family_slots(self) -> tuple[int, ...]:
        """Factor indices admitting a one-dimensional central extension.

        A factor owns a central coordinate exactly when the items living on
        it (and only on it) form a central-extension family row.
        """
        slots = []
        for f in range(len(self.factors)):
            if any(len(it.targets) > 1 and f in it.targets for it in self.items):
                continue
            local = self.items_on_factor(f)
            if local and family_row_for_factor(self.factors[f], local) is not None:
                slots.append(f)
        return tuple(slots)

    @property
    def dim_g(self) -> int:
        return sum(t.dim for t in self.factors) + self.center_dim

    @property
    def dim_h(self) -> int:
        return sum(it.dim for it in self.items) + (self.center.dim if self.center else 0)

    @property
    def rank_g(self) -> int:
        return sum(t.rank for t in self.factors)

    @property
    def weight_ambient(self) -> int:
        """Fundamental-weight coordinates of all factors plus z(g) block."""
        return self.rank_g + self.center_dim

    def describe_g(self) -> str:
        parts = [classical_name(t) for t in self.factors]
        if self.center_dim:
            parts.append(f"center({self.center_dim})")
        return "+".join(parts)


def classical_name(t: SimpleType) -> str:
    n = t.classical_size
    if t.series == "A":
        return f"sl({n})"
    if t.series in ("B", "D"):
        return f"so({n})"
    if t.series == "C":
        return f"sp({n})"
    return f"{t.series}{t.rank}"


# ---------------------------------------------------------------------------
# row matching and instantiation
# ---------------------------------------------------------------------------

def _pattern_matches_type(tp: TypePattern, t: SimpleType, params: dict) -> bool:
    try:
        return tp.resolve(params) == t
    except (ConstraintError, TableFormatError):
        return False


def _canonical_item_key(base: str, size: int | None, context: SimpleType) -> tuple:
    # Inside a symplectic factor the rank-one corner items coincide:
    # any of sl(2)/sp(2)/so(3) is the same two-by-two block.
    if context.series == "C" and (base, size) in {("sp", 2), ("so", 3)}:
        return ("sl", 2)
    return (base, size)


def _item_key(item: HItem, context: SimpleType) -> tuple:
    return _canonical_item_key(item.base, item.size, context)


def _pattern_item_key(ip: ItemPattern, params: dict, context: SimpleType) -> tuple:
    size = exprs.evaluate_int(ip.arg, params) if ip.arg else None
    return _canonical_item_key(ip.base, size, context)


def _param_domain(entry: CatalogEntry, g_types: Sequence[SimpleType]) -> dict[str, list]:
    bound = max((t.classical_size or (t.rank + 1)) for t in g_types) + 2
    domain: dict[str, list] = {}
    for v in entry.variables():
        if v == "s":
            domain[v] = sorted({t.series for t in g_types})
        else:
            domain[v] = list(range(0, bound + 1))
    return domain


def _solve_assignments(entry: CatalogEntry, g_types: Sequence[SimpleType]):
    """Yield parameter dicts making the row's g pattern equal the given types.

    The search assigns one variable at a time and tests every ambient factor
    as soon as all of its variables are bound, so mismatching branches are
    pruned early.
    """
    if len(entry.g_pattern) != len(g_types):
        return
    domain = _param_domain(entry, g_types)
    names = list(domain)
    factor_vars = []
    for tp in entry.g_pattern:
        needed = set()
        if tp.arg:
            needed = exprs.variables(tp.arg)
        if tp.base == "X":
            needed.add("s")
        factor_vars.append(needed)
    checkpoints: list[list[int]] = [[] for _ in range(len(names) + 1)]
    for f, needed in enumerate(factor_vars):
        last = 0
        for i, name in enumerate(names):
            if name in needed:
                last = i + 1
        checkpoints[last].append(f)

    def rec(i: int, params: dict):
        for f in checkpoints[i]:
            if not _pattern_matches_type(entry.g_pattern[f], g_types[f], params):
                return
        if i == len(names):
            yield dict(params)
            return
        for value in domain[names[i]]:
            params[names[i]] = value
            yield from rec(i + 1, params)
        del params[names[i]]

    yield from rec(0, {})


def match_row(
    entry: CatalogEntry,
    g_types: Sequence[SimpleType],
    items: Sequence[HItem],
) -> tuple[dict, tuple[int, ...]] | None:
    """Match concrete factors/items against a T1.4 row.

    Returns (params, factor_map) where factor_map[p] is the index in
    `g_types` assigned to pattern position p, or None when no admissible
    assignment exists.
    """
    import itertools

    npos = len(entry.g_pattern)
    if len(g_types) != npos:
        return None
    for perm in sorted(set(itertools.permutations(range(npos)))):
        typed = [g_types[perm[p]] for p in range(npos)]
        for params in _solve_assignments(entry, typed):
            try:
                entry.check_constraints(params)
            except ConstraintError:
                continue
            want = sorted(
                (_pattern_item_key(ip, params, typed[ip.targets[0]]),
                 tuple(sorted(ip.targets)))
                for ip in entry.h_pattern
            )
            have = sorted(
                (_item_key(it, g_types[it.targets[0]]),
                 tuple(sorted(perm.index(t) for t in it.targets)))
                for it in items
            )
            if want != have:
                continue
            if entry.h_pattern and entry.h_pattern[0].base == "diag":
                # the diagonal item's type must be the common factor type
                diag_items = [it for it in items if it.base == "diag"]
                if not diag_items or diag_items[0].diag_type != typed[0]:
                    continue
            return params, tuple(perm)
    return None


def match_t14(g_types: Sequence[SimpleType], items: Sequence[HItem]):
    """Find the unique T1.4 row matching the factors and items, if any.

    Returns (entry, params, factor_map).  Raises ConstraintError with the
    nearest violated constraint when the shape matches a row but the
    parameters fall outside its admissible range.
    """
    import itertools

    catalog = get_catalog()
    for entry in catalog.rows("T1.4"):
        res = match_row(entry, g_types, items)
        if res is not None:
            return entry, res[0], res[1]
    # nothing matched: look for a shape match with violated constraints, to
    # name the offending inequality in the error text
    near_miss: str | None = None
    for entry in catalog.rows("T1.4"):
        npos = len(entry.g_pattern)
        if len(g_types) != npos:
            continue
        for perm in sorted(set(itertools.permutations(range(npos)))):
            typed = [g_types[perm[p]] for p in range(npos)]
            for params in _solve_assignments(entry, typed):
                want = sorted(
                    (_pattern_item_key(ip, params, typed[ip.targets[0]]),
                     tuple(sorted(ip.targets)))
                    for ip in entry.h_pattern
                )
                have = sorted(
                    (_item_key(it, g_types[it.targets[0]]),
                     tuple(sorted(perm.index(t) for t in it.targets)))
                    for it in items
                )
                if want != have:
                    continue
                for c in entry.constraints:
                    if not exprs.check_relation(c, params):
                        near_miss = f"{entry.row_id} requires {c!r}, violated at {params}"
                        break
    if near_miss:
        raise ConstraintError(near_miss)
    return None


def family_row_for_factor(
    g_type: SimpleType, items: Sequence[HItem]
) -> tuple[CatalogEntry, dict] | None:
    """The central-extension family covering one factor's items, if any."""
    if not items or any(len(it.targets) != 1 for it in items):
        return None
    if any(it.base in ("diag", "bridge") for it in items):
        return None
    local = tuple(sorted((_retarget(it, (0,)) for it in items),
                         key=lambda it: (it.base, it.size or 0)))
    return _family_row_cached(get_catalog(), g_type, local)


@lru_cache(maxsize=4096)
def _family_row_cached(catalog: "Catalog", g_type: SimpleType, local: tuple):
    for entry in catalog.rows("T1.6"):
        res = match_row(entry, [g_type], list(local))
        if res is not None:
            return entry, res[0]
    return None


def _retarget(item: HItem, targets: tuple[int, ...]) -> HItem:
    return HItem(item.base, item.size, targets, item.diag_type)


# ---------------------------------------------------------------------------
# instantiation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RowInstance:
    """A catalog row at concrete parameters."""

    entry: CatalogEntry
    params: dict
    g_types: tuple[SimpleType, ...]
    items: tuple[HItem, ...]
    gens: tuple[Vector, ...]          # ambient: concatenated weight blocks
    aux: dict

    @property
    def ambient(self) -> int:
        return sum(t.rank for t in self.g_types)


def instantiate(entry: CatalogEntry, params: dict) -> RowInstance:
    """Resolve a row's symbolic data at concrete parameters.

    Raises ConstraintError naming the violated inequality when the
    parameters are out of range.
    """
    entry.check_constraints(params)
    g_types = tuple(tp.resolve(params) for tp in entry.g_pattern)
    items = []
    for ip in entry.h_pattern:
        size = exprs.evaluate_int(ip.arg, params) if ip.arg else None
        diag_type = g_types[ip.targets[0]] if ip.base == "diag" else None
        base, size = _canonical_item_key(ip.base, size, g_types[ip.targets[0]]) \
            if ip.base in ("sl", "so", "sp") else (ip.base, size)
        items.append(HItem(base, size, ip.targets, diag_type))
    gens = tuple(instantiate_weight_groups(entry.gens, params, g_types)) if entry.gens else ()
    aux: dict = {}
    if entry.table == "T1.6":
        rank = g_types[0].rank
        full_vecs = instantiate_weight_groups(parse_weight_groups(entry.aux["full"]), params, g_types)
        sat_vecs = instantiate_weight_groups(parse_weight_groups(entry.aux["sat"]), params, g_types)
        full_sp = span(full_vecs, rank)
        sat_sp = span(sat_vecs, rank)
        if "cut" in entry.aux:
            from .ratlinalg import annihilator_preimage, zero_space
            cut = instantiate_cut(entry.aux["cut"], params, rank)
            sat_sp = annihilator_preimage(full_sp, zero_space(rank), [LinearFunctional(cut)])
            aux["cut"] = cut
        lam = instantiate_weight_groups(parse_weight_groups(entry.aux["lam"]), params, g_types)[0]
        aux.update(
            full=full_sp,
            sat=sat_sp,
            lam=lam,
            alpha_value=exprs.evaluate(entry.aux["alpha"], params),
            zgen=exprs.evaluate_int(entry.aux["zgen"], params),
        )
    if entry.table in ("T3.6", "T3.7"):
        aux["idx"] = int(entry.aux["idx"])
    if entry.table == "T4.8":
        aux["norm"] = _instantiate_norm(entry.aux["norm"], params)
        aux["mods"] = _instantiate_mods(entry.aux["mods"], params, aux["norm"])
        aux["ideals"] = _instantiate_ideals(entry.aux.get("ideals", ""), params)
        aux["exhaustive"] = entry.aux.get("exhaustive", "true") != "false"
    return RowInstance(entry, dict(params), g_types, tuple(items), gens, aux)


# --- normalizer patterns and module summands (T4.8) ------------------------

@dataclass(frozen=True)
class NormFactor:
    base: str          # 'sl' | 'so' | 'sp' | exceptional token
    size: int | None   # matrix size for the classical bases

    @property
    def dim(self) -> int:
        if self.size is not None:
            return size_dim(self.base, self.size)
        s, r = EXCEPTIONAL_TOKENS[self.base]
        return SimpleType(s, r).dim

    @property
    def tau_dim(self) -> int:
        if self.size is None:
            raise TableFormatError(f"no tautological module size for {self.base!r}")
        return self.size

    def root_system(self):
        if self.size is not None:
            return build_root_system(size_type(self.base, self.size))
        s, r = EXCEPTIONAL_TOKENS[self.base]
        return build_root_system(SimpleType(s, r))


def _instantiate_norm(text: str, params: dict) -> tuple[tuple[NormFactor, ...], int]:
    simple: list[NormFactor] = []
    torus = 0
    for part in split_top(text, "*"):
        part = part.strip()
        if part == "Z":
            torus += 1
            continue
        m = _TYPE_PAT.match(part)
        if not m:
            raise TableFormatError(f"bad normalizer factor {part!r}")
        base, arg = m.group(1), m.group(2)
        if base in EXCEPTIONAL_TOKENS:
            simple.append(NormFactor(base, None))
        else:
            simple.append(NormFactor(base, exprs.evaluate_int(arg, params)))
    return tuple(simple), torus


_MOD_TERM = re.compile(r"(tau|taus|w2|w2s)\((\d+)\)$|rep\((\d+),(\d+)\)$")


def _instantiate_mods(text: str, params: dict, norm) -> tuple[tuple[int, int], ...]:
    """Summands as (dimension, torus exponent) pairs."""
    simple, _ = norm
    out = []
    for summand in split_top(text, "+"):
        summand = summand.strip()
        zexp = 0
        m = re.match(r"z\((-?\d+)\)\s*:\s*(.*)$", summand)
        if m:
            zexp = int(m.group(1))
            summand = m.group(2)
        dim = 1
        for term in split_top(summand, "*"):
            term = term.strip()
            m = _MOD_TERM.match(term)
            if not m:
                raise TableFormatError(f"bad module term {term!r}")
            if m.group(1):
                f = simple[int(m.group(2)) - 1]
                if m.group(1) in ("tau", "taus"):
                    dim *= f.tau_dim
                else:
                    dim *= f.tau_dim * (f.tau_dim - 1) // 2
            else:
                from .rootsystems import weyl_dim

                f = simple[int(m.group(3)) - 1]
                idx = int(m.group(4))
                rs = f.root_system()
                coeffs = [0] * rs.rank
                coeffs[idx - 1] = 1
                dim *= weyl_dim(rs, coeffs)
        out.append((dim, zexp))
    return tuple(out)


def _instantiate_ideals(text: str, params: dict) -> tuple[tuple[tuple[int, ...], bool], ...]:
    """Candidate ideal sequences with their conditions evaluated."""
    out = []
    for part in text.split("|"):
        part = part.strip()
        if not part:
            continue
        cond_ok = True
        if ":" in part:
            part, cond = part.split(":", 1)
            cond_ok = all(exprs.check_relation(c, params) for c in cond.split("&"))
        seq = tuple(int(x) for x in part.split(","))
        out.append((seq, cond_ok))
    return tuple(out)


# ---------------------------------------------------------------------------
# parameter search helpers
# ---------------------------------------------------------------------------

_SERIES_ORDER = ["A", "B", "C", "D", "E", "F", "G"]


def admissible_params(entry: CatalogEntry, bound: int = 40):
    """Yield admissible parameter dicts in lexicographic order."""
    names = list(entry.variables())
    if not names:
        try:
            entry.check_constraints({})
            _ = tuple(tp.resolve({}) for tp in entry.g_pattern)
            yield {}
        except (ConstraintError, TableFormatError):
            pass
        return

    def domain(name: str):
        if name == "s":
            return _SERIES_ORDER
        return range(1, bound + 1)

    def rec(i: int, params: dict):
        if i == len(names):
            try:
                entry.check_constraints(params)
                for tp in entry.g_pattern:
                    tp.resolve(params)
                for ip in entry.h_pattern:
                    if ip.arg is not None and exprs.evaluate_int(ip.arg, params) < 0:
                        return
                yield dict(params)
            except (ConstraintError, TableFormatError):
                pass
            return
        for value in domain(names[i]):
            params[names[i]] = value
            yield from rec(i + 1, params)
        del params[names[i]]

    yield from rec(0, {})


def minimal_params(entry: CatalogEntry) -> dict:
    for params in admissible_params(entry):
        return params
    raise ConstraintError(f"{entry.row_id} has no admissible parameters")


def shifted_params(entry: CatalogEntry, delta: int = 2) -> dict:
    """Minimal admissible parameters with every numeric value raised by delta."""
    base = minimal_params(entry)
    shifted = {k: (v if isinstance(v, str) else v + delta) for k, v in base.items()}
    try:
        entry.check_constraints(shifted)
        for tp in entry.g_pattern:
            tp.resolve(shifted)
        return shifted
    except (ConstraintError, TableFormatError):
        return base


# ---------------------------------------------------------------------------
# self-verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def __str__(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: {self.detail}"


def verify_entry(entry: CatalogEntry, params: dict) -> list[Check]:
    """Consistency checks for one row at concrete parameters.

    Failures are reported, not raised.
    """
    from .indexes import dynkin_index_of, module_index_complement_types
    from .rootsystems import k_value

    checks: list[Check] = []
    inst = instantiate(entry, params)

    if entry.table == "T1.4":
        distinct = sorted(set(inst.gens))
        spanned = span(distinct, inst.ambient)
        ok = spanned.dim == len(distinct)
        checks.append(Check(
            f"{entry.row_id} generators-independent at {params}",
            ok, f"{len(distinct)} generators span dimension {spanned.dim}"))

    if entry.table == "T3.2":
        rs = build_root_system(inst.g_types[0])
        want = exprs.evaluate_int(entry.aux["kform"], params)
        got = k_value(rs)
        checks.append(Check(
            f"{entry.row_id} long-root pairing sum at rank {rs.rank}",
            got == want, f"enumeration {got}, closed form {want}"))

    if entry.table == "T3.4":
        idx = dynkin_index_of(inst.items[0], list(inst.g_types))
        checks.append(Check(
            f"{entry.row_id} unit-index at {params}", idx == 1, f"index {idx}"))

    if entry.table in ("T3.6", "T3.7"):
        l = module_index_complement_types(inst.g_types[0], inst.items[0], inst.aux["idx"])
        if entry.table == "T3.6":
            ok, want = l < 1, "< 1"
        else:
            ok, want = l == 1, "= 1"
        checks.append(Check(
            f"{entry.row_id} complement-index {want} at {params}",
            ok, f"index {l}"))

    if entry.table == "T4.8":
        simple, torus = inst.aux["norm"]
        dim_norm = sum(f.dim for f in simple) + torus
        dim_mods = sum(d for d, _ in inst.aux["mods"])
        dim_g = inst.g_types[0].dim
        checks.append(Check(
            f"{entry.row_id} dimension-bookkeeping at {params}",
            dim_g == dim_norm + dim_mods,
            f"dim g = {dim_g}, normalizer {dim_norm} + modules {dim_mods}"))

    if entry.table == "T1.6":
        full: RationalSubspace = inst.aux["full"]
        sat: RationalSubspace = inst.aux["sat"]
        lam = inst.aux["lam"]
        checks.append(Check(
            f"{entry.row_id} saturated-inside-full-codim-1 at {params}",
            full.contains(sat) and full.dim == sat.dim + 1,
            f"dims {sat.dim} inside {full.dim}"))
        from .ratlinalg import member
        checks.append(Check(
            f"{entry.row_id} duality-weight-separates at {params}",
            member(full, lam) and not member(sat, lam),
            "weight lies in the full space but not the saturated one"))
    return checks
