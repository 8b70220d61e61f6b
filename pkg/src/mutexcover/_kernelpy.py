"""Pure-Python covering kernel.

Implements the greedy vertex-set growth loop of the covering algorithm
over int bitmasks. Semantics must match ``_kernelc`` exactly; the test
suite checks both against the reference operations in ``cover``.
"""

from __future__ import annotations

BACKEND_NAME = "python"


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _partition_cost(size: int) -> int:
    return 1 if size == 1 else 2 * size + 1


def _internal_count(mask: int, unc: list[int]) -> int:
    """Sum over members of |unc[v] & mask| (each internal edge twice)."""
    return sum((unc[v] & mask).bit_count() for v in _iter_bits(mask))


def _score_parts(parts: list[int], members: int, dmask: int, unc: list[int]) -> int:
    """Score of the multiclique (parts + one default partition dmask)."""
    allm = members | dmask
    total = _internal_count(allm, unc)
    within = sum(_internal_count(p, unc) for p in parts)
    cost = sum(_partition_cost(p.bit_count()) for p in parts)
    if dmask:
        within += _internal_count(dmask, unc)
        cost += _partition_cost(dmask.bit_count())
    newly = (total - within) // 2
    return 2 * newly - cost


def grow_vertex_set(n: int, adj: list[int], unc: list[int], seed: int) -> list[int]:
    """Greedy growth from seed; returns the final vertex set, ascending.

    adj/unc are per-vertex neighbor bitmasks (unc restricted to uncovered
    edges). Candidates are all vertices outside the current set; a vertex
    is kept only on strict score improvement; ties go to the lowest id.
    """
    eligible = 0
    for v in range(n):
        if unc[v].bit_count() >= 2:
            eligible |= 1 << v

    members = 1 << seed
    parts = [1 << seed]
    # cached per-part internal uncovered counts and costs
    part_t = [_internal_count(parts[0], unc)]
    cand = adj[seed]
    cur_score = _score_parts(parts, members, cand & eligible, unc)

    while True:
        best_w = -1
        best_score = 0
        for w in range(n):
            if (members >> w) & 1:
                continue
            aw = adj[w]
            merged = 1 << w
            kept_t = 0
            kept_cost = 0
            for i, p in enumerate(parts):
                if p & ~aw:
                    merged |= p
                else:
                    kept_t += part_t[i]
                    kept_cost += _partition_cost(p.bit_count())
            dmask = cand & aw & eligible
            allm = members | merged | dmask
            total = _internal_count(allm, unc)
            within = kept_t + _internal_count(merged, unc)
            cost = kept_cost + _partition_cost(merged.bit_count())
            if dmask:
                within += _internal_count(dmask, unc)
                cost += _partition_cost(dmask.bit_count())
            score = (total - within) - cost  # 2 * newly - cost
            if best_w < 0 or score > best_score:
                best_w = w
                best_score = score
        if best_w < 0 or best_score <= cur_score:
            break
        aw = adj[best_w]
        merged = 1 << best_w
        new_parts = []
        new_t = []
        for i, p in enumerate(parts):
            if p & ~aw:
                merged |= p
            else:
                new_parts.append(p)
                new_t.append(part_t[i])
        new_parts.append(merged)
        new_t.append(_internal_count(merged, unc))
        parts = new_parts
        part_t = new_t
        members |= 1 << best_w
        cand &= aw
        cur_score = best_score

    return sorted(_iter_bits(members))
