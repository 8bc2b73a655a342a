# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled emptiness kernels over CSR adjacency arrays.

Each kernel mirrors the corresponding provider-based search in ``ndfs`` /
``scc_algos`` step for step, so verdicts and counters are identical.  The
return value is ``(found, counters, payload)`` with counters
``(post_calls, successors_generated, distinct_states, transitions_explored,
max_search_depth)``.  For nested searches the payload is ``(prefix, loop)``;
for SCC searches it is ``(path, cursors, root, floor, nums, scope)`` and the
caller extracts the lasso.
"""

from libc.stdlib cimport malloc, calloc, free

cdef enum:
    WHITE = 0
    CYAN = 1
    BLUE = 2
    RED = 3


cdef struct Counters:
    long post_calls
    long successors
    long distinct
    long transitions
    long depth


cdef inline void do_post(Counters* c, const int[::1] indptr, const int[::1] indices,
                         char* seen, int s) noexcept nogil:
    cdef int a = indptr[s]
    cdef int b = indptr[s + 1]
    cdef int j
    c.post_calls += 1
    c.successors += b - a
    for j in range(a, b):
        if not seen[indices[j]]:
            seen[indices[j]] = 1
            c.distinct += 1


cdef inline void bump(Counters* c, long d) noexcept nogil:
    if d > c.depth:
        c.depth = d


cdef tuple pack(Counters* c):
    return (c.post_calls, c.successors, c.distinct, c.transitions, c.depth)


def nested(int mode, const int[::1] indptr, const int[::1] indices,
           const long long[::1] acc, int init):
    """mode 0 = AND, 1 = SD."""
    cdef int n = indptr.shape[0] - 1
    cdef char* colour = <char*> calloc(n, 1)
    cdef char* seen = <char*> calloc(n, 1)
    cdef int* fstate = <int*> malloc(n * sizeof(int))
    cdef int* fcur = <int*> malloc(n * sizeof(int))
    cdef char* fallred = <char*> malloc(n)
    cdef int* pos = <int*> malloc(n * sizeof(int))
    cdef int* rstate = <int*> malloc(n * sizeof(int))
    cdef int* rcur = <int*> malloc(n * sizeof(int))
    cdef Counters c
    cdef int top, rtop, s, t, u, i, seed, hit = -1, red_hit = 0
    cdef char col
    c.post_calls = c.successors = c.distinct = c.transitions = c.depth = 0
    try:
        seen[init] = 1
        c.distinct = 1
        colour[init] = CYAN
        top = 0
        fstate[0] = init
        fcur[0] = indptr[init]
        fallred[0] = 1
        pos[init] = 0
        do_post(&c, indptr, indices, seen, init)
        bump(&c, 1)
        rtop = -1
        while top >= 0:
            s = fstate[top]
            i = fcur[top]
            if i < indptr[s + 1]:
                fcur[top] = i + 1
                t = indices[i]
                c.transitions += 1
                col = colour[t]
                if col == CYAN and ((acc[s] & 1) or (acc[t] & 1)):
                    hit = t
                    break
                elif col == WHITE:
                    colour[t] = CYAN
                    top += 1
                    fstate[top] = t
                    fcur[top] = indptr[t]
                    fallred[top] = 1
                    pos[t] = top
                    do_post(&c, indptr, indices, seen, t)
                    bump(&c, top + 1)
                    continue
                if col != RED:
                    fallred[top] = 0
                continue
            # blue invocation of s finishes
            if mode == 1:
                colour[s] = RED if (acc[s] & 1) else BLUE
            elif fallred[top]:
                colour[s] = RED
            elif acc[s] & 1:
                seed = s
                rtop = 0
                rstate[0] = seed
                rcur[0] = indptr[seed]
                do_post(&c, indptr, indices, seen, seed)
                while rtop >= 0:
                    u = rstate[rtop]
                    i = rcur[rtop]
                    if i < indptr[u + 1]:
                        rcur[rtop] = i + 1
                        t = indices[i]
                        c.transitions += 1
                        col = colour[t]
                        if col == CYAN:
                            hit = t
                            red_hit = 1
                            break
                        elif col == BLUE:
                            colour[t] = RED
                            rtop += 1
                            rstate[rtop] = t
                            rcur[rtop] = indptr[t]
                            do_post(&c, indptr, indices, seen, t)
                            bump(&c, top + 1 + rtop)
                        continue
                    rtop -= 1
                if red_hit:
                    break
                colour[s] = RED
            else:
                colour[s] = BLUE
            top -= 1
            if top >= 0 and colour[s] != RED:
                fallred[top] = 0
        if hit < 0:
            return False, pack(&c), None
        i = pos[hit]
        prefix = [fstate[j] for j in range(i)]
        loop = [fstate[j] for j in range(i, top + 1)]
        if red_hit:
            loop.extend(rstate[j] for j in range(1, rtop + 1))
        return True, pack(&c), (prefix, loop)
    finally:
        free(colour); free(seen); free(fstate); free(fcur); free(fallred)
        free(pos); free(rstate); free(rcur)


def baseline(const int[::1] indptr, const int[::1] indices,
             const long long[::1] acc, int init):
    cdef int n = indptr.shape[0] - 1
    cdef char* visited = <char*> calloc(n, 1)
    cdef char* red = <char*> calloc(n, 1)
    cdef char* seen = <char*> calloc(n, 1)
    cdef int* fstate = <int*> malloc(n * sizeof(int))
    cdef int* fcur = <int*> malloc(n * sizeof(int))
    cdef int* rstate = <int*> malloc((n + 1) * sizeof(int))
    cdef int* rcur = <int*> malloc((n + 1) * sizeof(int))
    cdef Counters c
    cdef int top, rtop = -1, s, t, u, i, found = 0
    c.post_calls = c.successors = c.distinct = c.transitions = c.depth = 0
    try:
        seen[init] = 1
        c.distinct = 1
        visited[init] = 1
        top = 0
        fstate[0] = init
        fcur[0] = indptr[init]
        do_post(&c, indptr, indices, seen, init)
        bump(&c, 1)
        while top >= 0:
            s = fstate[top]
            i = fcur[top]
            if i < indptr[s + 1]:
                fcur[top] = i + 1
                t = indices[i]
                c.transitions += 1
                if not visited[t]:
                    visited[t] = 1
                    top += 1
                    fstate[top] = t
                    fcur[top] = indptr[t]
                    do_post(&c, indptr, indices, seen, t)
                    bump(&c, top + 1)
                continue
            top -= 1
            if acc[s] & 1:
                rtop = 0
                rstate[0] = s
                rcur[0] = indptr[s]
                do_post(&c, indptr, indices, seen, s)
                while rtop >= 0:
                    u = rstate[rtop]
                    i = rcur[rtop]
                    if i < indptr[u + 1]:
                        rcur[rtop] = i + 1
                        t = indices[i]
                        c.transitions += 1
                        if t == s:
                            found = 1
                            break
                        if not red[t]:
                            red[t] = 1
                            rtop += 1
                            rstate[rtop] = t
                            rcur[rtop] = indptr[t]
                            do_post(&c, indptr, indices, seen, t)
                            bump(&c, top + 1 + rtop + 1)
                        continue
                    rtop -= 1
                if found:
                    break
                red[s] = 1
        if not found:
            return False, pack(&c), None
        prefix = [fstate[j] for j in range(top + 1)]
        loop = [rstate[j] for j in range(rtop + 1)]
        return True, pack(&c), (prefix, loop)
    finally:
        free(visited); free(red); free(seen); free(fstate); free(fcur)
        free(rstate); free(rcur)


def scc(int mode, const int[::1] indptr, const int[::1] indices,
        const long long[::1] acc, int init, long long K):
    """mode 0 = ASCC, 1 = GV, 2 = C99."""
    cdef int n = indptr.shape[0] - 1
    cdef int* num = <int*> calloc(n, sizeof(int))
    cdef int* low = <int*> calloc(n, sizeof(int))
    cdef char* flag = <char*> calloc(n, 1)       # current (ASCC/GV) or removed (C99)
    cdef char* seen = <char*> calloc(n, 1)
    cdef int* fstate = <int*> malloc(n * sizeof(int))
    cdef int* fcur = <int*> malloc(n * sizeof(int))
    cdef int* rootst = <int*> malloc(n * sizeof(int))
    cdef long long* rootacc = <long long*> malloc(n * sizeof(long long))
    cdef int* active = <int*> malloc(n * sizeof(int))
    cdef int* accnums = <int*> malloc(n * sizeof(int))
    cdef int* xstate = <int*> malloc(n * sizeof(int))
    cdef int* xcur = <int*> malloc(n * sizeof(int))
    cdef Counters c
    cdef int top, rtop, atop, ntop, xtop, s, t, u, i, count = 0
    cdef int root = -1, floor = 0
    cdef long long B
    cdef bint found = False
    c.post_calls = c.successors = c.distinct = c.transitions = c.depth = 0
    try:
        seen[init] = 1
        c.distinct = 1
        top = rtop = atop = ntop = -1
        # push(init)
        count += 1
        num[init] = count
        low[init] = count
        if mode != 2:
            flag[init] = 1
            atop += 1
            active[atop] = init
        if mode != 1:
            rtop += 1
            rootst[rtop] = init
            rootacc[rtop] = acc[init]
        elif acc[init] & 1:
            ntop += 1
            accnums[ntop] = count
        top += 1
        fstate[top] = init
        fcur[top] = indptr[init]
        do_post(&c, indptr, indices, seen, init)
        bump(&c, top + 1)
        while top >= 0:
            s = fstate[top]
            i = fcur[top]
            if i < indptr[s + 1]:
                fcur[top] = i + 1
                t = indices[i]
                c.transitions += 1
                if num[t] == 0:
                    count += 1
                    num[t] = count
                    low[t] = count
                    if mode != 2:
                        flag[t] = 1
                        atop += 1
                        active[atop] = t
                    if mode != 1:
                        rtop += 1
                        rootst[rtop] = t
                        rootacc[rtop] = acc[t]
                    elif acc[t] & 1:
                        ntop += 1
                        accnums[ntop] = count
                    top += 1
                    fstate[top] = t
                    fcur[top] = indptr[t]
                    do_post(&c, indptr, indices, seen, t)
                    bump(&c, top + 1)
                elif (mode != 2 and flag[t]) or (mode == 2 and not flag[t]):
                    if mode == 1:
                        if num[t] < low[s]:
                            low[s] = num[t]
                        if ntop >= 0 and num[t] <= accnums[ntop]:
                            found = True
                            floor = 1
                            for u in range(top, -1, -1):
                                if num[fstate[u]] == accnums[ntop]:
                                    root = fstate[u]
                                    break
                            break
                    else:
                        B = 0
                        while True:
                            u = rootst[rtop]
                            B |= rootacc[rtop]
                            rtop -= 1
                            if B == K:
                                found = True
                                if num[u] > num[t]:
                                    while num[rootst[rtop]] > num[t]:
                                        rtop -= 1
                                    u = rootst[rtop]
                                root = u
                                floor = num[u]
                                break
                            if num[u] <= num[t]:
                                break
                        if found:
                            break
                        rtop += 1
                        rootst[rtop] = u
                        rootacc[rtop] = B
                continue
            # backtrack from s
            if mode == 1:
                if (acc[s] & 1) and low[s] < num[s]:
                    found = True
                    root = s
                    floor = 1
                    break
                top -= 1
                if acc[s] & 1:
                    ntop -= 1
                if low[s] == num[s]:
                    while True:
                        u = active[atop]
                        atop -= 1
                        flag[u] = 0
                        if u == s:
                            break
                if top >= 0 and low[s] < low[fstate[top]]:
                    low[fstate[top]] = low[s]
                continue
            top -= 1
            if rootst[rtop] == s:
                rtop -= 1
                if mode == 0:
                    while True:
                        u = active[atop]
                        atop -= 1
                        flag[u] = 0
                        if u == s:
                            break
                else:
                    # removal DFS: successors are recomputed
                    flag[s] = 1
                    xtop = 0
                    xstate[0] = s
                    xcur[0] = indptr[s]
                    do_post(&c, indptr, indices, seen, s)
                    while xtop >= 0:
                        u = xstate[xtop]
                        i = xcur[xtop]
                        if i < indptr[u + 1]:
                            xcur[xtop] = i + 1
                            t = indices[i]
                            c.transitions += 1
                            if num[t] > 0 and not flag[t]:
                                flag[t] = 1
                                xtop += 1
                                xstate[xtop] = t
                                xcur[xtop] = indptr[t]
                                do_post(&c, indptr, indices, seen, t)
                                bump(&c, top + 1 + xtop + 1)
                            continue
                        xtop -= 1
        if not found:
            return False, pack(&c), None
        path = [fstate[j] for j in range(top + 1)]
        cursors = [fcur[j] - indptr[fstate[j]] for j in range(top + 1)]
        nums = [num[j] for j in range(n)]
        if mode == 2:
            scope = bytes([1 if num[j] > 0 and not flag[j] else 0 for j in range(n)])
        else:
            scope = bytes([flag[j] for j in range(n)])
        return True, pack(&c), (path, cursors, root, floor, nums, scope)
    finally:
        free(num); free(low); free(flag); free(seen); free(fstate); free(fcur)
        free(rootst); free(rootacc); free(active); free(accnums); free(xstate); free(xcur)
