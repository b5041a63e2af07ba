"""Extreme-ray identification for pointed, finitely generated cones.

The output-sensitive search keeps a growing set of certified extreme rays
and probes each unprocessed generator with one conic-membership test:

  inside the hull of the kept rays  ->  discard it;
  outside                           ->  the separating functional v exposes
       a face (the ratio-argmax slice under the base direction g); recurse
       on that face and keep its extreme rays.

Positively-proportional generators are collapsed into alignment classes up
front and kept or discarded as a unit, so duplicated directions never feed
the recursion. Each call seeds its kept set with the lexicographic
ratio-argmax class - a certified vertex of the base slice - which makes
every later separating functional expose a proper face and guarantees the
recursion shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import RaySet, angular_argmax, conic_membership, find_base
from .numerics import DEFAULT_TOL, Tolerances


@dataclass(frozen=True)
class ExtremeRaySet:
    """Result of an extreme-ray run over a RaySet.

    kept/discarded partition all 0-based input indices; classes lists the
    alignment classes (each sorted, ordered by representative). kept holds
    every member of each surviving class, so aligned duplicates of an
    extreme direction are all reported.
    """

    kept: tuple[int, ...]
    discarded: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    membership_calls: int
    lp_calls: int


def alignment_classes(Z, tol: Tolerances = DEFAULT_TOL) -> list[list[int]]:
    """Group ray indices into positively-proportional classes.

    Two rays align when the cosine of their angle is within align_eps of 1.
    Small sets use the exact quadratic scan; larger sets group via a
    lexicographic sort of the unit rays with adjacent chaining, which is
    exact for identical directions (the only kind bulk data produces).
    """
    rows = Z.rays if isinstance(Z, RaySet) else np.asarray(Z, dtype=np.float64)
    p = rows.shape[0]
    unit = rows / np.linalg.norm(rows, axis=1, keepdims=True)
    if p <= 1500:
        rep_of = np.full(p, -1, dtype=np.int64)
        classes: list[list[int]] = []
        for i in range(p):
            if rep_of[i] >= 0:
                continue
            cos = unit[i + 1:] @ unit[i]
            members = [i] + [i + 1 + int(j) for j in
                             np.flatnonzero((cos >= 1.0 - tol.align_eps) & (rep_of[i + 1:] < 0))]
            for m in members:
                rep_of[m] = i
            classes.append(members)
        return classes
    order = np.lexsort(unit.T[::-1])
    comp_eps = np.sqrt(2.0 * tol.align_eps) * 1.01
    classes = [[int(order[0])]]
    for a, b in zip(order[:-1], order[1:]):
        if np.max(np.abs(unit[a] - unit[b])) <= comp_eps and unit[a] @ unit[b] >= 1.0 - tol.align_eps:
            classes[-1].append(int(b))
        else:
            classes.append([int(b)])
    for cls in classes:
        cls.sort()
    classes.sort(key=lambda cls: cls[0])
    return classes


class _Counter:
    __slots__ = ("membership", "lp")

    def __init__(self):
        self.membership = 0
        self.lp = 0


def _lex_extreme(rays, den, cand, tol):
    """Representative whose base-slice point is the lexicographic maximum.

    That point is a vertex of the slice polytope, hence a certified extreme
    ray of pos{rays[cand]}. Distinct classes have distinct slice points, so
    the refinement ends in a single class (ties broken by lowest index).
    """
    cur = np.asarray(cand, dtype=np.int64)
    n = rays.shape[1]
    for axis in range(n):
        if cur.size == 1:
            break
        ratios = rays[cur, axis] / den[cur]
        best = ratios.max()
        band = tol.align_eps * max(1.0, abs(best))
        cur = cur[ratios >= best - band]
    return int(cur.min())


def _search(Z, den, cand, tol, ctr, depth=0):
    """Extreme representatives among `cand` (class reps of a face or cone)."""
    if depth > len(cand) + 8:
        raise RuntimeError("extreme-ray recursion failed to shrink")
    if len(cand) == 1:
        return set(cand)
    kept: list[int] = []
    seed = _lex_extreme(Z.rays, den, cand, tol)
    kept.append(seed)
    remaining = [r for r in cand if r != seed]
    while remaining:
        j = remaining[0]
        cert = conic_membership(Z.rays[kept], Z.rays[j], tol)
        ctr.membership += 1
        if cert.inside:
            remaining.pop(0)
            continue
        ctr.lp += 1
        face = angular_argmax(cert.v, Z, remaining, tol)
        kept.extend(_search(Z, den, list(map(int, face)), tol, ctr, depth + 1))
        face_set = set(map(int, face))
        remaining = [r for r in remaining if r not in face_set]
    return set(kept)


def _with_base(Z: RaySet, tol: Tolerances) -> RaySet:
    if Z.base is not None:
        return Z
    return RaySet(np.array(Z.rays), find_base(Z, tol))


def extreme_rays(Z: RaySet, tol: Tolerances = DEFAULT_TOL) -> ExtremeRaySet:
    """Output-sensitive extreme-ray identification.

    kept contains exactly the indices whose rays are extreme in
    pos{rows of Z} (aligned duplicates included); the work scales with the
    number of extreme classes rather than with the full quadratic scan.
    Raises NotPointed (via find_base) when no base direction exists.
    """
    Z = _with_base(Z, tol)
    classes = alignment_classes(Z, tol)
    reps = [cls[0] for cls in classes]
    cls_of = {cls[0]: cls for cls in classes}
    den = Z.rays @ Z.base
    ctr = _Counter()
    kept_reps = _search(Z, den, reps, tol, ctr)
    kept = sorted(i for r in kept_reps for i in cls_of[r])
    disc = sorted(set(range(len(Z))) - set(kept))
    return ExtremeRaySet(tuple(kept), tuple(disc),
                         tuple(tuple(c) for c in classes),
                         ctr.membership, ctr.lp)


def extreme_rays_brute(Z: RaySet, tol: Tolerances = DEFAULT_TOL) -> ExtremeRaySet:
    """Quadratic reference scan: a class is extreme iff its representative
    is outside the conic hull of all other class representatives."""
    Z = _with_base(Z, tol)
    classes = alignment_classes(Z, tol)
    reps = [cls[0] for cls in classes]
    ctr = _Counter()
    kept: list[int] = []
    if len(reps) == 1:
        kept = list(classes[0])
    else:
        arr = np.asarray(reps, dtype=np.int64)
        for k, r in enumerate(reps):
            others = Z.rays[np.delete(arr, k)]
            cert = conic_membership(others, Z.rays[r], tol)
            ctr.membership += 1
            if not cert.inside:
                kept.extend(classes[k])
    kept = sorted(kept)
    disc = sorted(set(range(len(Z))) - set(kept))
    return ExtremeRaySet(tuple(kept), tuple(disc),
                         tuple(tuple(c) for c in classes),
                         ctr.membership, ctr.lp)


def merge_extreme_sets(Z: RaySet, parts, tol: Tolerances = DEFAULT_TOL) -> ExtremeRaySet:
    """Divide-and-conquer merge: run the search per part, then once more on
    the union of survivors. `parts` must partition range(len(Z)).

    Equals extreme_rays(Z) because an extreme ray of the whole cone is
    extreme in every sub-cone containing it.
    """
    Z = _with_base(Z, tol)
    seen: set[int] = set()
    for part in parts:
        for i in part:
            if i in seen:
                raise ValueError("parts must be disjoint")
            seen.add(int(i))
    if seen != set(range(len(Z))):
        raise ValueError("parts must cover every index")

    survivors: list[int] = []
    calls = lps = 0
    for part in parts:
        idx = np.sort(np.asarray(part, dtype=np.int64))
        sub = RaySet(Z.rays[idx], Z.base)
        res = extreme_rays(sub, tol)
        survivors.extend(int(idx[i]) for i in res.kept)
        calls += res.membership_calls
        lps += res.lp_calls
    idx = np.sort(np.asarray(survivors, dtype=np.int64))
    final = extreme_rays(RaySet(Z.rays[idx], Z.base), tol)
    kept = sorted(int(idx[i]) for i in final.kept)
    classes = alignment_classes(Z, tol)
    disc = sorted(set(range(len(Z))) - set(kept))
    return ExtremeRaySet(tuple(kept), tuple(disc),
                         tuple(tuple(c) for c in classes),
                         calls + final.membership_calls, lps + final.lp_calls)
