# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled covering kernel over uint64 bitset rows.

Same greedy growth semantics as ``_kernelpy``; the hot loops run in C.
"""

from libc.stdlib cimport calloc, free

import numpy as np

BACKEND_NAME = "cython"

cdef extern from *:
    """
    static inline int mc_popcnt(unsigned long long x) {
        return __builtin_popcountll(x);
    }
    static inline int mc_ctz(unsigned long long x) {
        return __builtin_ctzll(x);
    }
    """
    int mc_popcnt(unsigned long long x) nogil
    int mc_ctz(unsigned long long x) nogil


cdef inline int _part_cost(int size) nogil:
    return 1 if size == 1 else 2 * size + 1


cdef _to_words(list masks, int words):
    cdef int n = len(masks)
    arr = np.zeros((n, words), dtype=np.uint64)
    cdef int i
    for i in range(n):
        b = int(masks[i]).to_bytes(words * 8, "little")
        arr[i, :] = np.frombuffer(b, dtype=np.uint64)
    return arr


cdef int _internal_count(unsigned long long *mask,
                         unsigned long long[:, ::1] rows,
                         int words) nogil:
    """Sum over set bits v of popcount(rows[v] & mask)."""
    cdef int total = 0
    cdef int wi, v, k
    cdef unsigned long long chunk
    for wi in range(words):
        chunk = mask[wi]
        while chunk:
            v = wi * 64 + mc_ctz(chunk)
            chunk &= chunk - 1
            for k in range(words):
                total += mc_popcnt(rows[v, k] & mask[k])
    return total


cdef int _popcount_mask(unsigned long long *mask, int words) nogil:
    cdef int total = 0
    cdef int k
    for k in range(words):
        total += mc_popcnt(mask[k])
    return total


def grow_vertex_set(int n, list adj, list unc, int seed):
    """Greedy growth from seed; returns the final vertex set, ascending."""
    cdef int words = (n + 63) // 64
    cdef unsigned long long[:, ::1] adj_w = _to_words(adj, words)
    cdef unsigned long long[:, ::1] unc_w = _to_words(unc, words)

    cdef unsigned long long *eligible = <unsigned long long *> calloc(words, 8)
    cdef unsigned long long *members = <unsigned long long *> calloc(words, 8)
    cdef unsigned long long *cand = <unsigned long long *> calloc(words, 8)
    cdef unsigned long long *merged = <unsigned long long *> calloc(words, 8)
    cdef unsigned long long *dmask = <unsigned long long *> calloc(words, 8)
    cdef unsigned long long *allm = <unsigned long long *> calloc(words, 8)
    # partition masks: at most n partitions, each `words` wide
    cdef unsigned long long *parts = <unsigned long long *> calloc(<size_t> n * words, 8)
    cdef unsigned long long *new_parts = <unsigned long long *> calloc(<size_t> n * words, 8)
    cdef int *part_t = <int *> calloc(n, sizeof(int))
    cdef int *part_size = <int *> calloc(n, sizeof(int))
    cdef int *new_t = <int *> calloc(n, sizeof(int))
    cdef int *new_size = <int *> calloc(n, sizeof(int))
    if not (eligible and members and cand and merged and dmask and allm
            and parts and new_parts and part_t and part_size and new_t and new_size):
        raise MemoryError()

    cdef int npart, new_npart
    cdef int v, k, w, i, deg
    cdef int best_w, best_score, cur_score, score
    cdef int kept_t, kept_cost, total, within, cost, msize, dsize
    cdef bint overlaps

    try:
        with nogil:
            for v in range(n):
                deg = 0
                for k in range(words):
                    deg += mc_popcnt(unc_w[v, k])
                if deg >= 2:
                    eligible[v >> 6] |= (<unsigned long long> 1) << (v & 63)

            members[seed >> 6] = (<unsigned long long> 1) << (seed & 63)
            for k in range(words):
                parts[k] = members[k]
                cand[k] = adj_w[seed, k]
            npart = 1
            part_t[0] = _internal_count(members, unc_w, words)
            part_size[0] = 1

            # score of the seed-only set with its default partition
            for k in range(words):
                dmask[k] = cand[k] & eligible[k]
                allm[k] = members[k] | dmask[k]
            total = _internal_count(allm, unc_w, words)
            within = part_t[0]
            cost = _part_cost(1)
            dsize = _popcount_mask(dmask, words)
            if dsize:
                within += _internal_count(dmask, unc_w, words)
                cost += _part_cost(dsize)
            cur_score = (total - within) - cost

            while True:
                best_w = -1
                best_score = 0
                for w in range(n):
                    if (members[w >> 6] >> (w & 63)) & 1:
                        continue
                    for k in range(words):
                        merged[k] = 0
                    merged[w >> 6] = (<unsigned long long> 1) << (w & 63)
                    kept_t = 0
                    kept_cost = 0
                    for i in range(npart):
                        overlaps = False
                        for k in range(words):
                            if parts[i * words + k] & ~adj_w[w, k]:
                                overlaps = True
                                break
                        if overlaps:
                            for k in range(words):
                                merged[k] |= parts[i * words + k]
                        else:
                            kept_t += part_t[i]
                            kept_cost += _part_cost(part_size[i])
                    for k in range(words):
                        dmask[k] = cand[k] & adj_w[w, k] & eligible[k]
                        allm[k] = members[k] | merged[k] | dmask[k]
                    dsize = _popcount_mask(dmask, words)
                    total = _internal_count(allm, unc_w, words)
                    within = kept_t + _internal_count(merged, unc_w, words)
                    msize = _popcount_mask(merged, words)
                    cost = kept_cost + _part_cost(msize)
                    if dsize:
                        within += _internal_count(dmask, unc_w, words)
                        cost += _part_cost(dsize)
                    score = (total - within) - cost
                    if best_w < 0 or score > best_score:
                        best_w = w
                        best_score = score
                if best_w < 0 or best_score <= cur_score:
                    break

                # commit best_w: rebuild the partition list
                w = best_w
                for k in range(words):
                    merged[k] = 0
                merged[w >> 6] = (<unsigned long long> 1) << (w & 63)
                new_npart = 0
                for i in range(npart):
                    overlaps = False
                    for k in range(words):
                        if parts[i * words + k] & ~adj_w[w, k]:
                            overlaps = True
                            break
                    if overlaps:
                        for k in range(words):
                            merged[k] |= parts[i * words + k]
                    else:
                        for k in range(words):
                            new_parts[new_npart * words + k] = parts[i * words + k]
                        new_t[new_npart] = part_t[i]
                        new_size[new_npart] = part_size[i]
                        new_npart += 1
                for k in range(words):
                    new_parts[new_npart * words + k] = merged[k]
                new_t[new_npart] = _internal_count(merged, unc_w, words)
                new_size[new_npart] = _popcount_mask(merged, words)
                new_npart += 1

                for i in range(new_npart):
                    for k in range(words):
                        parts[i * words + k] = new_parts[i * words + k]
                    part_t[i] = new_t[i]
                    part_size[i] = new_size[i]
                npart = new_npart
                members[w >> 6] |= (<unsigned long long> 1) << (w & 63)
                for k in range(words):
                    cand[k] &= adj_w[w, k]
                cur_score = best_score

        result = []
        for v in range(n):
            if (members[v >> 6] >> (v & 63)) & 1:
                result.append(v)
        return result
    finally:
        free(eligible); free(members); free(cand); free(merged)
        free(dmask); free(allm); free(parts); free(new_parts)
        free(part_t); free(part_size); free(new_t); free(new_size)
