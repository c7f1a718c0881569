"""Row-transfer counting without materializing patterns.

Each half-pattern is swept from its length-1 row toward the shared middle row.
A DP state is a row signature together with the partial value of every sum
constraint over the rows already swept.  States with the same accumulator are
held as one dense array indexed by signature, so the transfer to the next row
(a sum over a box of interlacing predecessors) is an inclusion-exclusion over
a multidimensional prefix sum.  All arithmetic is on Python integers.
"""
from __future__ import annotations

import itertools
import json
import hashlib
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .core import FamilySpec, Group
from .patterns import BudgetExceeded, count_naive, row_sum_range, sum_constraints

log = logging.getLogger(__name__)

ENGINE_VERSION = "mompoly-dp/1"
DEFAULT_STATE_BUDGET = 10_000_000


def signatures(length: int, N: int, strict: bool) -> np.ndarray:
    """All admissible rows of ``length`` entries, lexicographic, as an int array."""
    if strict:
        rows = [tuple(reversed(c)) for c in itertools.combinations(range(1, N), length)]
    else:
        rows = [tuple(reversed(c)) for c in itertools.combinations_with_replacement(range(N + 1), length)]
    rows.sort()
    return np.array(rows, dtype=np.int64).reshape(len(rows), length)


class _Sweep:
    def __init__(self, spec: FamilySpec, N: int, strict: bool, state_budget: int):
        self.spec, self.N, self.strict = spec, N, strict
        self.budget = state_budget
        self.constraints = sum_constraints(spec)
        self.n_const = np.array([c.n_coef * N for c in self.constraints], dtype=object)
        self._sigs: dict[int, np.ndarray] = {}
        ranges = {}
        for j in range(1, spec.row_count + 1):
            ranges[j] = row_sum_range(spec.row_length(j), N, strict)
        self.contrib = {}  # row -> per-constraint (min, max) contribution
        for j, (lo, hi) in ranges.items():
            spans = []
            for c in self.constraints:
                a = c.coef(j)
                spans.append((min(a * lo, a * hi), max(a * lo, a * hi)))
            self.contrib[j] = spans

    def sigs(self, length: int) -> np.ndarray:
        if length not in self._sigs:
            self._sigs[length] = signatures(length, self.N, self.strict)
        return self._sigs[length]

    def window(self, rows) -> list[tuple[int, int]]:
        lo = [0] * len(self.constraints)
        hi = [0] * len(self.constraints)
        for j in rows:
            for c, (a, b) in enumerate(self.contrib[j]):
                lo[c] += a
                hi[c] += b
        return list(zip(lo, hi))

    def _prune(self, states: dict, remaining) -> dict:
        win = self.window(remaining)
        out = {}
        for acc, arr in states.items():
            ok = all(a + n + lo <= 0 <= a + n + hi for a, n, (lo, hi) in zip(acc, self.n_const, win))
            if ok:
                out[acc] = arr
        return out

    def _check_budget(self, states: dict, length: int, row: int) -> None:
        used = len(states) * len(self.sigs(length))
        if used > self.budget:
            raise BudgetExceeded(
                f"DP for {self.spec.label()} N={self.N} needs {used} states at row {row} "
                f"(budget {self.budget})",
                used=used,
                N=self.N,
            )

    def _coefs(self, row: int) -> np.ndarray:
        return np.array([c.coef(row) for c in self.constraints], dtype=np.int64)

    def _distribute(self, values: np.ndarray, sigs: np.ndarray, acc: tuple, row: int | None,
                    length: int, out: dict) -> None:
        """Add per-signature counts into ``out`` keyed by the updated accumulator."""
        shape = (self.N + 1,) * length
        if row is None or not any(c.coef(row) for c in self.constraints):
            groups = [(acc, slice(None))]
        else:
            coefs = self._coefs(row)
            sums = sigs.sum(axis=1)
            groups = []
            for s in np.unique(sums):
                key = tuple(a + int(c) * int(s) for a, c in zip(acc, coefs))
                groups.append((key, sums == s))
        for key, mask in groups:
            sel = sigs[mask]
            vals = values[mask]
            nz = vals != 0
            if not nz.any():
                continue
            arr = out.get(key)
            if arr is None:
                arr = out[key] = np.zeros(shape, dtype=object)
            idx = tuple(sel[nz].T)
            arr[idx] = arr[idx] + vals[nz]

    def _initial(self, row: int, add_coef: bool) -> dict:
        sigs = self.sigs(self.spec.row_length(row))
        out: dict = {}
        ones = np.ones(len(sigs), dtype=object)
        zero = tuple(0 for _ in self.constraints)
        self._distribute(ones, sigs, zero, row if add_coef else None, sigs.shape[1], out)
        return out

    def _transfer(self, states: dict, prev_len: int, row: int, add_coef: bool) -> dict:
        """Pull counts from the previous row into every admissible signature of ``row``."""
        N, strict = self.N, self.strict
        length = self.spec.row_length(row)
        sigs = self.sigs(length)
        gap = 1 if strict else 0
        # predecessor entry mu_i lies in [lam_{i+1}, lam_i], lam_{length+1} = 0
        padded = np.concatenate([sigs, np.zeros((len(sigs), 1), dtype=np.int64)], axis=1)
        lo = padded[:, 1 : prev_len + 1] + gap
        hi = padded[:, :prev_len] - gap
        if strict:
            lo = np.maximum(lo, 1)
        empty = (lo > hi).any(axis=1)
        lo = np.clip(lo, 0, N + 1)
        hi1 = np.clip(hi + 1, 0, N + 1)
        out: dict = {}
        for acc, arr in states.items():
            pref = arr
            pad = [(1, 0)] * prev_len
            pref = np.pad(pref, pad, mode="constant", constant_values=0)
            for ax in range(prev_len):
                pref = np.cumsum(pref, axis=ax, dtype=object)
            total = np.zeros(len(sigs), dtype=object)
            for corner in itertools.product((0, 1), repeat=prev_len):
                idx = tuple(np.where(corner[d], lo[:, d], hi1[:, d]) for d in range(prev_len))
                term = pref[idx]
                if sum(corner) % 2:
                    total = total - term
                else:
                    total = total + term
            total[empty] = 0
            self._distribute(total, sigs, acc, row if add_coef else None, length, out)
        return out

    def chain(self, rows: tuple[int, ...], add_last: bool, remaining_after: list) -> dict:
        states = self._initial(rows[0], add_coef=add_last or len(rows) > 1)
        states = self._prune(states, remaining_after[0])
        for t in range(1, len(rows)):
            add = add_last or t < len(rows) - 1
            states = self._transfer(states, self.spec.row_length(rows[t - 1]), rows[t], add)
            states = self._prune(states, remaining_after[t])
            self._check_budget(states, self.spec.row_length(rows[t]), rows[t])
        return states

    def run(self) -> int:
        spec, N = self.spec, self.N
        if self.strict and N < 2:
            return 0
        lower, upper = spec.chains()
        m = spec.middle_row
        upper_rows = upper[:-1]
        # rows not yet swept after each lower position: rest of lower + upper (minus middle)
        rem_lower = [list(lower[t + 1 :]) + list(upper_rows) for t in range(len(lower))]
        rem_upper = [list(upper_rows[t + 1 :]) + list(lower) for t in range(len(upper))]
        low = self.chain(lower, add_last=True, remaining_after=rem_lower)
        up = self.chain(upper, add_last=False, remaining_after=rem_upper) if upper_rows else self._initial(m, False)
        total = 0
        for acc, arr in low.items():
            need = tuple(-(a + n) for a, n in zip(acc, self.n_const))
            other = up.get(need)
            if other is not None:
                total += int(np.sum(arr * other))
        return total


@lru_cache(maxsize=4096)
def _count_cached(spec: FamilySpec, N: int, strict: bool, state_budget: int) -> int:
    return _Sweep(spec, N, strict, state_budget).run()


def count_dp(spec: FamilySpec, N: int, strict: bool = False, state_budget: int = DEFAULT_STATE_BUDGET) -> int:
    if N < 0:
        raise ValueError("N must be non-negative")
    return _count_cached(spec, N, bool(strict), state_budget)


@dataclass
class CountTable:
    spec: FamilySpec
    strict: bool
    entries: dict[int, int] = field(default_factory=dict)

    def __getitem__(self, N: int) -> int:
        return self.entries[N]

    def __contains__(self, N: int) -> bool:
        return N in self.entries

    def nodes(self) -> list[int]:
        return sorted(self.entries)

    def to_json(self) -> dict:
        return {
            "schema": "mompoly.counts/1",
            "group": self.spec.group.value,
            "k": self.spec.k,
            "q": self.spec.q,
            "strict": self.strict,
            "counts": [{"N": n, "count": str(self.entries[n])} for n in self.nodes()],
        }


def _series_worker(args):
    spec, N, strict, budget = args
    try:
        return N, count_dp(spec, N, strict, budget), None
    except BudgetExceeded as exc:
        return N, None, str(exc)


def count_series(
    spec: FamilySpec,
    n_max: int,
    strict: bool = False,
    *,
    state_budget: int = DEFAULT_STATE_BUDGET,
    workers: int = 1,
    cache: "CountCache | None" = None,
    n_min: int = 0,
) -> CountTable:
    """Counts for N = n_min..n_max; each N is computed independently."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    table = CountTable(spec, strict)
    todo = []
    for N in range(n_min, n_max + 1):
        hit = cache.get(spec, N, strict) if cache else None
        if hit is not None:
            table.entries[N] = hit
        else:
            todo.append(N)
    jobs = [(spec, N, strict, state_budget) for N in todo]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_series_worker, jobs))
    else:
        results = [_series_worker(j) for j in jobs]
    for N, value, err in results:
        if err is not None:
            raise BudgetExceeded(err, N=N)
        table.entries[N] = value
        if cache:
            cache.put(spec, N, strict, value)
    table.entries = dict(sorted(table.entries.items()))
    return table


def count(spec: FamilySpec, N: int, strict: bool = False, engine: str = "dp", **budgets) -> int:
    """Dispatch to one engine, or run both and insist they agree."""
    if engine == "dp":
        return count_dp(spec, N, strict, budgets.get("state_budget", DEFAULT_STATE_BUDGET))
    naive_kwargs = {"node_budget": budgets["node_budget"]} if "node_budget" in budgets else {}
    if engine == "naive":
        return count_naive(spec, N, strict, **naive_kwargs)
    if engine == "both":
        a = count_dp(spec, N, strict, budgets.get("state_budget", DEFAULT_STATE_BUDGET))
        b = count_naive(spec, N, strict, **naive_kwargs)
        if a != b:
            raise EngineMismatch(spec, N, strict, a, b)
        return a
    raise ValueError(f"unknown engine {engine!r}")


class EngineMismatch(AssertionError):
    def __init__(self, spec, N, strict, dp, naive):
        super().__init__(f"{spec.label()} N={N} strict={strict}: dp={dp} naive={naive}")
        self.dp, self.naive = dp, naive


class CountCache:
    """Append-only line-delimited count cache.

    The first line is a header carrying the engine version and its checksum;
    a file written by another engine version is ignored as a whole.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._data: dict[tuple, int] = {}
        self._trusted = True
        self._load()

    @staticmethod
    def header() -> str:
        digest = hashlib.sha256(ENGINE_VERSION.encode()).hexdigest()[:16]
        return json.dumps({"engine": ENGINE_VERSION, "checksum": digest}, sort_keys=True)

    def _load(self) -> None:
        if not self.path.exists():
            return
        lines = self.path.read_text(encoding="utf-8").splitlines()
        if not lines:
            return
        if lines[0] != self.header():
            log.warning("ignoring count cache %s: engine header mismatch", self.path)
            self._trusted = False
            return
        for n, line in enumerate(lines[1:], start=2):
            try:
                rec = json.loads(line)
                key = (Group.parse(rec["group"]).value, int(rec["k"]), int(rec["q"]), int(rec["N"]), bool(rec["strict"]))
                value = int(rec["count"])
                if not isinstance(rec["count"], str) or value < 0:
                    raise ValueError("count must be a non-negative decimal string")
            except (ValueError, KeyError, TypeError) as exc:
                log.warning("ignoring corrupt cache line %d in %s: %s", n, self.path, exc)
                continue
            self._data[key] = value

    @staticmethod
    def _key(spec: FamilySpec, N: int, strict: bool) -> tuple:
        return (spec.group.value, spec.k, spec.q, N, bool(strict))

    def get(self, spec: FamilySpec, N: int, strict: bool) -> int | None:
        return self._data.get(self._key(spec, N, strict))

    def put(self, spec: FamilySpec, N: int, strict: bool, value: int) -> None:
        key = self._key(spec, N, strict)
        if key in self._data or not self._trusted:
            return
        self._data[key] = value
        new = not self.path.exists() or self.path.stat().st_size == 0
        with self.path.open("a", encoding="utf-8") as fh:
            if new:
                fh.write(self.header() + "\n")
            rec = {"group": key[0], "k": key[1], "q": key[2], "N": N, "strict": bool(strict), "count": str(value)}
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
