"""Lattice search for polynomials whose factorial-functional powers all vanish.

Results go to a JSONL file, one record per candidate, in candidate-id order.
A sidecar ``<out>.ckpt`` holds the last flushed id and ``<out>.spec`` the
spec, so an interrupted run can be resumed and matches an uninterrupted one
byte for byte.
"""

from __future__ import annotations

import json
import logging
import math
import os
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from multiprocessing import get_context
from pathlib import Path
from typing import Optional

from .config import read_flat, write_flat
from .errors import SpecInvalid
from .lfunctional import L_power_profile
from .poly import QQ, SparsePoly, U, format_poly, parse_poly

log = logging.getLogger(__name__)


@dataclass
class CandidateSpec:
    n: int
    support: list
    c_max: Optional[int] = None
    coeffs: Optional[list] = None
    m_max: int = 8
    dedupe: bool = False
    terms: Optional[int] = None  # use every subset of this size, all coefficients nonzero

    def __post_init__(self):
        self.support = [tuple(e) for e in self.support]
        self.validate()

    def validate(self):
        if self.n < 1:
            raise SpecInvalid("n must be >= 1")
        if not self.support:
            raise SpecInvalid("support must be nonempty")
        if len(set(self.support)) != len(self.support):
            raise SpecInvalid("support exponents must be distinct")
        for e in self.support:
            if len(e) != self.n or any(x < 0 for x in e):
                raise SpecInvalid(f"bad exponent {e} for n = {self.n}")
        if self.coeffs is None:
            if self.c_max is None or self.c_max < 1:
                raise SpecInvalid("c_max must be >= 1")
        if self.m_max < 1:
            raise SpecInvalid("m_max must be >= 1")
        if self.terms is not None and not 1 <= self.terms <= len(self.support):
            raise SpecInvalid("terms must be between 1 and the support size")

    @property
    def lattice(self) -> list:
        if self.coeffs is not None:
            return sorted(set(int(c) for c in self.coeffs))
        return list(range(-self.c_max, self.c_max + 1))

    def to_flat(self) -> dict:
        out = {
            "n": self.n,
            "support": [format_poly(SparsePoly.monomial(U(self.n), e)) for e in self.support],
            "m_max": self.m_max,
            "dedupe": self.dedupe,
        }
        if self.coeffs is not None:
            out["coeffs"] = self.lattice
        else:
            out["c_max"] = self.c_max
        if self.terms is not None:
            out["terms"] = self.terms
        return out

    @classmethod
    def from_flat(cls, d: dict) -> "CandidateSpec":
        try:
            n = int(d["n"])
            support = parse_support(str(d["support"]), n)
        except KeyError as exc:
            raise SpecInvalid(f"spec is missing {exc}") from None
        coeffs = d.get("coeffs")
        if coeffs is not None:
            coeffs = [int(x) for x in str(coeffs).split(",") if x.strip()]
        return cls(
            n=n,
            support=support,
            c_max=d.get("c_max"),
            coeffs=coeffs,
            m_max=int(d.get("m_max", 8)),
            dedupe=bool(d.get("dedupe", False)),
            terms=d.get("terms"),
        )

    @classmethod
    def read(cls, path) -> "CandidateSpec":
        return cls.from_flat(read_flat(path))


def parse_support(text: str, n: int) -> list:
    """Comma separated monomials such as ``U1, U1^2*U2``."""
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        m = parse_poly(piece, U(n))
        if len(m) != 1 or m.terms()[0][1] != 1:
            raise SpecInvalid(f"support entry {piece!r} is not a monomial")
        out.append(m.terms()[0][0])
    return out


def monomials_up_to(n: int, degree: int, include_one: bool = False) -> list:
    exps = [e for e in product(range(degree + 1), repeat=n) if sum(e) <= degree]
    if not include_one:
        exps = [e for e in exps if sum(e)]
    return sorted(exps, key=lambda e: (sum(e), tuple(-x for x in e)))


def _normalize(vec):
    g = 0
    for c in vec:
        g = math.gcd(g, c)
    first = next(c for c in vec if c)
    s = -1 if first < 0 else 1
    return tuple(s * c // g for c in vec)


def enumerate_candidates(spec: CandidateSpec):
    """Yield (id, exponent tuple, coefficient tuple) in a fixed order; zero is skipped."""
    lattice = spec.lattice
    allowed = set(lattice)
    if spec.terms is None:
        shapes = [(tuple(spec.support), lattice)]
    else:
        nonzero = [c for c in lattice if c]
        shapes = [(sub, nonzero) for sub in combinations(spec.support, spec.terms)]
    cid = 0
    for exps, values in shapes:
        seen = set()
        for vec in product(values, repeat=len(exps)):
            if not any(vec):
                continue
            if spec.dedupe:
                norm = _normalize(vec)
                if all(c in allowed for c in norm):
                    if vec != norm:
                        continue
                else:
                    if norm in seen:
                        continue
                    seen.add(norm)
            yield cid, exps, vec
            cid += 1


def count_candidates(spec: CandidateSpec) -> int:
    return sum(1 for _ in enumerate_candidates(spec))


def build_poly(n, exps, vec) -> SparsePoly:
    return SparsePoly(U(n), {e: c for e, c in zip(exps, vec) if c}, QQ)


def evaluate(task) -> dict:
    """Worker entry point; task = (id, n, exps, vec, m_max, term_budget, timing)."""
    cid, n, exps, vec, m_max, budget, timing = task
    t0 = time.perf_counter_ns() if timing else 0
    f = build_poly(n, exps, vec)
    rep = L_power_profile(f, m_max, budget)
    micros = (time.perf_counter_ns() - t0) // 1000 if timing else 0
    return {
        "id": cid,
        "f": format_poly(f),
        "n": n,
        "m1_depth": rep.m1_depth,
        "first_nonzero": None if rep.first_nonzero is None else str(rep.first_nonzero),
        "survivor": rep.first_nonzero_m is None,
        "micros": micros,
    }


def record_line(rec: dict) -> str:
    return json.dumps(rec, separators=(",", ":")) + "\n"


@dataclass
class SearchSummary:
    output: str
    total: int = 0
    written: int = 0
    survivors: list = field(default_factory=list)
    confirmed: list = field(default_factory=list)
    complete: bool = True

    @property
    def exit_code(self) -> int:
        return 1 if self.confirmed else 0

    def to_dict(self):
        return {
            "output": self.output,
            "total": self.total,
            "written": self.written,
            "survivors": [r["id"] for r in self.survivors],
            "confirmed": [r["id"] for r in self.confirmed],
            "complete": self.complete,
        }


def sidecars(output):
    output = Path(output)
    return output.with_name(output.name + ".ckpt"), output.with_name(output.name + ".spec")


def read_checkpoint(path) -> int:
    try:
        return int(Path(path).read_text().strip())
    except FileNotFoundError:
        return -1


def write_checkpoint(path, last_id: int):
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(f"{last_id}\n")
    os.replace(tmp, path)


def _truncate_after(output: Path, last_id: int) -> int:
    """Drop every line past the checkpointed id (including a torn last line)."""
    if not output.exists():
        return 0
    keep = []
    with open(output, "rb") as fh:
        for raw in fh:
            if not raw.endswith(b"\n"):
                break
            try:
                rid = json.loads(raw)["id"]
            except (ValueError, KeyError):
                break
            if rid > last_id:
                break
            keep.append(raw)
    with open(output, "wb") as fh:
        fh.writelines(keep)
    return len(keep)


def run_search(spec: CandidateSpec, workers: int = 1, output=None, resume: bool = False,
               limit: Optional[int] = None, timing: bool = False, term_budget: Optional[int] = None,
               checkpoint_every: int = 64, chunksize: int = 64, escalate: bool = True) -> SearchSummary:
    """Evaluate every candidate; ``limit`` stops after that many new records."""
    if output is None:
        raise SpecInvalid("an output path is required")
    output = Path(output)
    ckpt, spec_path = sidecars(output)
    last = -1
    if resume:
        last = read_checkpoint(ckpt)
        kept = _truncate_after(output, last)
        log.info("resuming after id %d (%d records kept)", last, kept)
    else:
        output.write_text("")
        if ckpt.exists():
            ckpt.unlink()
    write_flat(spec_path, spec.to_flat())

    summary = SearchSummary(str(output))
    tasks = (
        (cid, spec.n, exps, vec, spec.m_max, term_budget, timing)
        for cid, exps, vec in enumerate_candidates(spec)
        if cid > last
    )
    if limit is not None:
        tasks = _take(tasks, limit)

    pool = None
    if workers > 1:
        pool = get_context("fork" if hasattr(os, "fork") else "spawn").Pool(workers)
        results = pool.imap(evaluate, tasks, chunksize=chunksize)
    else:
        results = map(evaluate, tasks)
    try:
        with open(output, "a") as fh:
            pending = 0
            for rec in results:
                fh.write(record_line(rec))
                summary.written += 1
                last = rec["id"]
                if rec["survivor"]:
                    summary.survivors.append(rec)
                pending += 1
                if pending >= checkpoint_every:
                    fh.flush()
                    os.fsync(fh.fileno())
                    write_checkpoint(ckpt, last)
                    pending = 0
            fh.flush()
            os.fsync(fh.fileno())
            if last >= 0:
                write_checkpoint(ckpt, last)
    finally:
        if pool is not None:
            pool.close()
            pool.join()

    summary.total = last + 1
    summary.complete = limit is None or summary.written < limit
    if resume:
        summary.survivors = _all_survivors(output)
    if escalate:
        for rec in summary.survivors:
            f = parse_poly(rec["f"], U(spec.n))
            prof = L_power_profile(f, 2 * spec.m_max, term_budget)
            if prof.first_nonzero_m is None:
                summary.confirmed.append(rec)
                log.warning("SURVIVOR id=%d f=%s; reproduce with: mathieu-lab lfunc profile -n %d --m-max %d %r",
                            rec["id"], rec["f"], spec.n, 2 * spec.m_max, rec["f"])
    return summary


def resume_search(output, workers: int = 1, **kw) -> SearchSummary:
    _, spec_path = sidecars(output)
    if not Path(spec_path).exists():
        raise SpecInvalid(f"no spec file next to {output}")
    spec = CandidateSpec.read(spec_path)
    return run_search(spec, workers, output, resume=True, **kw)


def _all_survivors(output):
    out = []
    with open(output) as fh:
        for line in fh:
            rec = json.loads(line)
            if rec["survivor"]:
                out.append(rec)
    return out


def _take(it, k):
    for i, x in enumerate(it):
        if i >= k:
            return
        yield x


__all__ = [
    "CandidateSpec", "enumerate_candidates", "count_candidates", "run_search", "resume_search",
    "SearchSummary", "evaluate", "monomials_up_to", "parse_support",
]
