"""Pure-Python matching kernels.

Vertices are integers: applicants ``0..n_left-1`` on the left, posts
``0..n_right-1`` on the right.  ``mate_l[u]`` / ``mate_r[v]`` hold the
partner index or -1.  The compiled twin in ``_ckernels.pyx`` has the same
signatures and must return identical results.
"""

EVEN, ODD, UNREACHABLE = 0, 1, 2


def augment(adj, n_right, mate_l, mate_r, order):
    """Grow ``mate_l``/``mate_r`` in place to a maximum matching of ``adj``.

    One augmenting-path search per free applicant, in ``order``.  A vertex
    with no augmenting path stays without one after later augmentations, so a
    single pass suffices.
    """
    for root in order:
        if mate_l[root] != -1:
            continue
        seen = [False] * n_right
        # stack of (applicant, next neighbour position); parent[v] = applicant that reached post v
        parent = {}
        stack = [[root, 0]]
        found = -1
        while stack and found < 0:
            top = stack[-1]
            u, i = top
            nbrs = adj[u]
            if i >= len(nbrs):
                stack.pop()
                continue
            top[1] = i + 1
            v = nbrs[i]
            if seen[v]:
                continue
            seen[v] = True
            parent[v] = u
            w = mate_r[v]
            if w == -1:
                found = v
            else:
                stack.append([w, 0])
        if found < 0:
            continue
        v = found
        while v != -1:
            u = parent[v]
            nxt = mate_l[u]
            mate_l[u] = v
            mate_r[v] = u
            v = nxt
    return mate_l, mate_r


def eou(adj, n_right, mate_l, mate_r):
    """Even/Odd/Unreachable labels by alternating BFS from every free vertex.

    Returns ``(labels_left, labels_right, augmenting)`` where ``augmenting`` is
    True when the search met an augmenting path (the matching is not maximum).
    """
    n_left = len(adj)
    radj = [[] for _ in range(n_right)]
    for u in range(n_left):
        for v in adj[u]:
            radj[v].append(u)

    even_l = [False] * n_left
    odd_l = [False] * n_left
    even_r = [False] * n_right
    odd_r = [False] * n_right
    augmenting = False

    queue = [u for u in range(n_left) if mate_l[u] == -1]
    for u in queue:
        even_l[u] = True
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in adj[u]:
            if odd_r[v]:
                continue
            odd_r[v] = True
            w = mate_r[v]
            if w == -1:
                augmenting = True
            elif not even_l[w]:
                even_l[w] = True
                queue.append(w)

    queue = [v for v in range(n_right) if mate_r[v] == -1]
    for v in queue:
        even_r[v] = True
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        for u in radj[v]:
            if odd_l[u]:
                continue
            odd_l[u] = True
            w = mate_l[u]
            if w == -1:
                augmenting = True
            elif not even_r[w]:
                even_r[w] = True
                queue.append(w)

    # a vertex both even and odd sits on an augmenting walk
    if any(e and o for e, o in zip(even_l, odd_l)) or any(e and o for e, o in zip(even_r, odd_r)):
        augmenting = True
    lab_l = [EVEN if e else ODD if o else UNREACHABLE for e, o in zip(even_l, odd_l)]
    lab_r = [EVEN if e else ODD if o else UNREACHABLE for e, o in zip(even_r, odd_r)]
    return lab_l, lab_r, augmenting


def enumerate_best(radj, n_right, r):
    """All matchings with the lexicographically best rank signature.

    ``radj[u]`` lists ``(post, rank)`` pairs for applicant ``u``.  Every
    applicant is tried with each free neighbour and with no partner; nothing
    is pruned.  Returns ``(signature, [mate_l tuples])``.
    """
    n_left = len(radj)
    taken = [False] * n_right
    counts = [0] * (r + 1)
    assign = [-1] * n_left
    best = [None]
    found = []

    def leaf():
        sig = counts[1:]
        b = best[0]
        if b is None or sig > b:
            best[0] = sig[:]
            found.clear()
            found.append(tuple(assign))
        elif sig == b:
            found.append(tuple(assign))

    def rec(u):
        if u == n_left:
            leaf()
            return
        for v, k in radj[u]:
            if taken[v]:
                continue
            taken[v] = True
            counts[k] += 1
            assign[u] = v
            rec(u + 1)
            assign[u] = -1
            counts[k] -= 1
            taken[v] = False
        rec(u + 1)

    rec(0)
    return tuple(best[0]), found
