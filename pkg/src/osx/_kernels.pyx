# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Semantics match ``_kernels_py`` exactly."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


def free_reduce(w):
    cdef list out = []
    cdef Py_ssize_t n = 0
    cdef long x
    for x in w:
        if n and out[n - 1] == -x:
            out.pop()
            n -= 1
        else:
            out.append(x)
            n += 1
    return out


cdef struct Side:
    int *img       # concatenated letter images
    int *start     # start[c] .. start[c+1]
    int64_t *wt    # weight per edge index
    int *stack
    int64_t *pref  # pref[h] = weight of stack[0:h]
    int h


cdef inline int side_push(Side *s, int c) noexcept nogil:
    cdef int b = s.start[c]
    cdef int n = s.start[c + 1] - b
    cdef int k = 0
    cdef int i, e
    while k < n and s.h > 0 and s.stack[s.h - 1] == -s.img[b + k]:
        s.h -= 1
        k += 1
    i = k
    while i < n:
        e = s.img[b + i]
        s.stack[s.h] = e
        s.pref[s.h + 1] = s.pref[s.h] + s.wt[(e if e > 0 else -e) - 1]
        s.h += 1
        i += 1
    return k


cdef inline void side_undo(Side *s, int c, int k) noexcept nogil:
    # ``k`` is the number of cancelled edges recorded by side_push
    cdef int b = s.start[c]
    cdef int n = s.start[c + 1] - b
    cdef int i, e
    s.h -= n - k
    i = k - 1
    while i >= 0:
        e = -s.img[b + i]
        s.stack[s.h] = e
        s.pref[s.h + 1] = s.pref[s.h] + s.wt[(e if e > 0 else -e) - 1]
        s.h += 1
        i -= 1


cdef inline int64_t side_cyc(Side *s) noexcept nogil:
    cdef int h = s.h
    cdef int j = 0
    while j < h - 1 - j and s.stack[j] == -s.stack[h - 1 - j]:
        j += 1
    return s.pref[h] - 2 * s.pref[j]


cdef int fill_side(Side *s, images, weights, int max_len) except -1:
    cdef int nl = len(images)
    cdef int total = 0
    cdef int longest = 0
    cdef int c, i, pos
    for p in images:
        total += len(p)
        if len(p) > longest:
            longest = len(p)
    s.img = <int *> malloc(max(total, 1) * sizeof(int))
    s.start = <int *> malloc((nl + 1) * sizeof(int))
    s.wt = <int64_t *> malloc(max(len(weights), 1) * sizeof(int64_t))
    cap = max_len * longest + 2
    s.stack = <int *> malloc(cap * sizeof(int))
    s.pref = <int64_t *> malloc((cap + 1) * sizeof(int64_t))
    if not (s.img and s.start and s.wt and s.stack and s.pref):
        raise MemoryError()
    pos = 0
    for c in range(nl):
        s.start[c] = pos
        for e in images[c]:
            s.img[pos] = e
            pos += 1
    s.start[nl] = pos
    for i in range(len(weights)):
        s.wt[i] = weights[i]
    s.pref[0] = 0
    s.h = 0
    return 0


cdef void free_side(Side *s) noexcept:
    free(s.img)
    free(s.start)
    free(s.wt)
    free(s.stack)
    free(s.pref)


def max_stretch_words(int nletters, int max_len, x_images, x_weights, y_images, y_weights):
    """See ``_kernels_py.max_stretch_words``.  Weights must keep every product
    of two loop weights inside int64; the caller guards this."""
    cdef Side sx, sy
    sx.img = NULL; sx.start = NULL; sx.wt = NULL; sx.stack = NULL; sx.pref = NULL
    sy.img = NULL; sy.start = NULL; sy.wt = NULL; sy.stack = NULL; sy.pref = NULL
    cdef int *a = <int *> malloc((max_len + 2) * sizeof(int))
    cdef int *pp = <int *> malloc((max_len + 2) * sizeof(int))   # period at depth
    cdef int *kx = <int *> malloc((max_len + 2) * sizeof(int))
    cdef int *ky = <int *> malloc((max_len + 2) * sizeof(int))
    cdef int *best_w = <int *> malloc((max_len + 2) * sizeof(int))
    cdef int t, j, q, i, best_len = 0
    cdef int64_t lx, ly, best_ly = 0, best_lx = 1, nodes = 0
    try:
        if not (a and pp and kx and ky and best_w):
            raise MemoryError()
        fill_side(&sx, x_images, x_weights, max_len)
        fill_side(&sy, y_images, y_weights, max_len)
        if max_len < 1:
            return 0, 1, [], 0
        with nogil:
            # iterative FKM-style walk; a[t] = -1 means "start choosing"
            a[0] = 0
            pp[0] = 1
            t = 1
            a[1] = -1
            while t >= 1:
                # undo the previous choice at depth t
                if a[t] >= 0:
                    side_undo(&sy, a[t], ky[t])
                    side_undo(&sx, a[t], kx[t])
                    j = a[t] + 1
                else:
                    j = a[t - pp[t - 1]] if t > 1 else 0
                if t > 1 and j == (a[t - 1] ^ 1):
                    j += 1
                if j >= nletters:
                    a[t] = -1
                    t -= 1
                    continue
                a[t] = j
                kx[t] = side_push(&sx, j)
                ky[t] = side_push(&sy, j)
                nodes += 1
                q = pp[t - 1] if (t > 1 and j == a[t - pp[t - 1]]) else t
                pp[t] = q
                if t % q == 0 and (t == 1 or a[1] != (j ^ 1)):
                    lx = side_cyc(&sx)
                    ly = side_cyc(&sy)
                    if lx > 0 and ly * best_lx > best_ly * lx:
                        best_ly = ly
                        best_lx = lx
                        best_len = t
                        for i in range(t):
                            best_w[i] = a[i + 1]
                if t < max_len:
                    t += 1
                    a[t] = -1
        return best_ly, best_lx, [best_w[i] for i in range(best_len)], nodes
    finally:
        free_side(&sx)
        free_side(&sy)
        free(a)
        free(pp)
        free(kx)
        free(ky)
        free(best_w)
