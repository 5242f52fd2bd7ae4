# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled matching kernels; same contracts as ``_pykernels``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

DEF EVEN = 0
DEF ODD = 1
DEF UNREACHABLE = 2


cdef int* _csr(list adj, int n, int** offsets_out) except NULL:
    cdef int total = 0, u, k = 0
    for u in range(n):
        total += len(<list>adj[u])
    cdef int* offsets = <int*>malloc((n + 1) * sizeof(int))
    cdef int* targets = <int*>malloc((total + 1) * sizeof(int))
    if offsets == NULL or targets == NULL:
        free(offsets)
        free(targets)
        raise MemoryError()
    for u in range(n):
        offsets[u] = k
        for v in <list>adj[u]:
            targets[k] = v
            k += 1
    offsets[n] = k
    offsets_out[0] = offsets
    return targets


def augment(list adj, int n_right, list mate_l, list mate_r, order):
    cdef int n_left = len(adj)
    cdef int* off
    cdef int* tgt = _csr(adj, n_left, &off)
    cdef int* ml = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int* mr = <int*>malloc((n_right + 1) * sizeof(int))
    cdef char* seen = <char*>malloc(n_right + 1)
    cdef int* parent = <int*>malloc((n_right + 1) * sizeof(int))
    cdef int* st_u = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int* st_i = <int*>malloc((n_left + 1) * sizeof(int))
    cdef int u, v, w, i, sp, found, nxt, root
    try:
        for u in range(n_left):
            ml[u] = mate_l[u]
        for v in range(n_right):
            mr[v] = mate_r[v]
        for root in order:
            if ml[root] != -1:
                continue
            memset(seen, 0, n_right + 1)
            sp = 0
            st_u[0] = root
            st_i[0] = off[root]
            found = -1
            while sp >= 0 and found < 0:
                u = st_u[sp]
                i = st_i[sp]
                if i >= off[u + 1]:
                    sp -= 1
                    continue
                st_i[sp] = i + 1
                v = tgt[i]
                if seen[v]:
                    continue
                seen[v] = 1
                parent[v] = u
                w = mr[v]
                if w == -1:
                    found = v
                else:
                    sp += 1
                    st_u[sp] = w
                    st_i[sp] = off[w]
            if found < 0:
                continue
            v = found
            while v != -1:
                u = parent[v]
                nxt = ml[u]
                ml[u] = v
                mr[v] = u
                v = nxt
        for u in range(n_left):
            mate_l[u] = ml[u]
        for v in range(n_right):
            mate_r[v] = mr[v]
    finally:
        free(off)
        free(tgt)
        free(ml)
        free(mr)
        free(seen)
        free(parent)
        free(st_u)
        free(st_i)
    return mate_l, mate_r


def eou(list adj, int n_right, list mate_l, list mate_r):
    cdef int n_left = len(adj)
    cdef list radj = [[] for _ in range(n_right)]
    for u in range(n_left):
        for v in <list>adj[u]:
            (<list>radj[v]).append(u)
    cdef int* off_l
    cdef int* off_r
    cdef int* tgt_l = _csr(adj, n_left, &off_l)
    cdef int* tgt_r = _csr(radj, n_right, &off_r)
    cdef int n = n_left + n_right + 2
    cdef char* even_l = <char*>malloc(n)
    cdef char* odd_l = <char*>malloc(n)
    cdef char* even_r = <char*>malloc(n)
    cdef char* odd_r = <char*>malloc(n)
    cdef int* queue = <int*>malloc(n * sizeof(int))
    cdef int* ml = <int*>malloc(n * sizeof(int))
    cdef int* mr = <int*>malloc(n * sizeof(int))
    cdef int head, tail, a, b, w, k
    cdef bint augmenting = False
    try:
        memset(even_l, 0, n)
        memset(odd_l, 0, n)
        memset(even_r, 0, n)
        memset(odd_r, 0, n)
        for a in range(n_left):
            ml[a] = mate_l[a]
        for b in range(n_right):
            mr[b] = mate_r[b]

        tail = 0
        for a in range(n_left):
            if ml[a] == -1:
                even_l[a] = 1
                queue[tail] = a
                tail += 1
        head = 0
        while head < tail:
            a = queue[head]
            head += 1
            for k in range(off_l[a], off_l[a + 1]):
                b = tgt_l[k]
                if odd_r[b]:
                    continue
                odd_r[b] = 1
                w = mr[b]
                if w == -1:
                    augmenting = True
                elif not even_l[w]:
                    even_l[w] = 1
                    queue[tail] = w
                    tail += 1

        tail = 0
        for b in range(n_right):
            if mr[b] == -1:
                even_r[b] = 1
                queue[tail] = b
                tail += 1
        head = 0
        while head < tail:
            b = queue[head]
            head += 1
            for k in range(off_r[b], off_r[b + 1]):
                a = tgt_r[k]
                if odd_l[a]:
                    continue
                odd_l[a] = 1
                w = ml[a]
                if w == -1:
                    augmenting = True
                elif not even_r[w]:
                    even_r[w] = 1
                    queue[tail] = w
                    tail += 1

        lab_l = []
        for a in range(n_left):
            if even_l[a] and odd_l[a]:
                augmenting = True
            lab_l.append(EVEN if even_l[a] else ODD if odd_l[a] else UNREACHABLE)
        lab_r = []
        for b in range(n_right):
            if even_r[b] and odd_r[b]:
                augmenting = True
            lab_r.append(EVEN if even_r[b] else ODD if odd_r[b] else UNREACHABLE)
    finally:
        free(off_l)
        free(off_r)
        free(tgt_l)
        free(tgt_r)
        free(even_l)
        free(odd_l)
        free(even_r)
        free(odd_r)
        free(queue)
        free(ml)
        free(mr)
    return lab_l, lab_r, augmenting


cdef struct _Enum:
    int n_left
    int r
    int* off
    int* post
    int* rank
    char* taken
    int* counts
    int* best
    int* assign
    bint have_best


cdef int _cmp_best(_Enum* e):
    cdef int k
    if not e.have_best:
        return 1
    for k in range(1, e.r + 1):
        if e.counts[k] != e.best[k]:
            return 1 if e.counts[k] > e.best[k] else -1
    return 0


cdef int _rec(_Enum* e, int u, list found) except -1:
    cdef int i, v, k, c
    if u == e.n_left:
        c = _cmp_best(e)
        if c > 0:
            for k in range(e.r + 1):
                e.best[k] = e.counts[k]
            e.have_best = True
            del found[:]
        if c >= 0:
            found.append(tuple([e.assign[i] for i in range(e.n_left)]))
        return 0
    for i in range(e.off[u], e.off[u + 1]):
        v = e.post[i]
        if e.taken[v]:
            continue
        k = e.rank[i]
        e.taken[v] = 1
        e.counts[k] += 1
        e.assign[u] = v
        _rec(e, u + 1, found)
        e.assign[u] = -1
        e.counts[k] -= 1
        e.taken[v] = 0
    _rec(e, u + 1, found)
    return 0


def enumerate_best(list radj, int n_right, int r):
    cdef _Enum e
    cdef int n_left = len(radj)
    cdef int total = 0, u, k = 0
    for u in range(n_left):
        total += len(<list>radj[u])
    e.n_left = n_left
    e.r = r
    e.have_best = False
    e.off = <int*>malloc((n_left + 1) * sizeof(int))
    e.post = <int*>malloc((total + 1) * sizeof(int))
    e.rank = <int*>malloc((total + 1) * sizeof(int))
    e.taken = <char*>malloc(n_right + 1)
    e.counts = <int*>malloc((r + 1) * sizeof(int))
    e.best = <int*>malloc((r + 1) * sizeof(int))
    e.assign = <int*>malloc((n_left + 1) * sizeof(int))
    found = []
    try:
        for u in range(n_left):
            e.off[u] = k
            for v, rk in <list>radj[u]:
                e.post[k] = v
                e.rank[k] = rk
                k += 1
            e.assign[u] = -1
        e.off[n_left] = k
        memset(e.taken, 0, n_right + 1)
        for k in range(r + 1):
            e.counts[k] = 0
            e.best[k] = 0
        _rec(&e, 0, found)
        sig = tuple([e.best[k] for k in range(1, r + 1)])
    finally:
        free(e.off)
        free(e.post)
        free(e.rank)
        free(e.taken)
        free(e.counts)
        free(e.best)
        free(e.assign)
    return sig, found
