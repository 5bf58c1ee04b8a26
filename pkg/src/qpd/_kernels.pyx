# distutils: language = c++
"""Compiled hot loops: triangle cover of circle samples, grid-to-trajectory Hausdorff, Rips cohomology."""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, M_PI, fabs, sin
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.vector cimport vector

ctypedef long long i64
ctypedef pair[double, i64] entry_t


cdef inline double circ(double a) noexcept nogil:
    a = fabs(a)
    return a if a <= 1.0 - a else 1.0 - a


# ------------------------------------------------------------- triangle cover

cdef double _cover(const double[::1] p) noexcept nogil:
    cdef Py_ssize_t n = p.shape[0], i, j, lo, hi, mid, k
    cdef double best = INFINITY, a, target, c, arc
    for i in range(n):
        for j in range(i + 1, n):
            a = p[j] - p[i]
            if a >= best:
                break  # arcs from i only grow with j
            target = 0.5 * (p[i] + 1.0 + p[j])
            # first index > j with p >= target
            lo = j + 1
            hi = n
            while lo < hi:
                mid = (lo + hi) >> 1
                if p[mid] < target:
                    lo = mid + 1
                else:
                    hi = mid
            for k in range(lo - 1, lo + 1):
                if k <= j or k >= n:
                    continue
                arc = p[k] - p[j]
                c = 1.0 - (p[k] - p[i])
                if c > arc:
                    arc = c
                if a > arc:
                    arc = a
                if arc < best:
                    best = arc
    return best


def triangle_cover(pts):
    """Smallest ``r`` such that three of the sorted points cut the circle into arcs all ``<= r``."""
    cdef const double[::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    cdef double out
    with nogil:
        out = _cover(p)
    return float(out)


# ------------------------------------------------------------------ hausdorff

cdef double _grid_chunk(const double[:, ::1] tr, const i64[::1] start_of, i64 c,
                        const double[:, ::1] gflat, const i64[::1] gsize,
                        const double[::1] radii, i64 start, i64 stop, double h) noexcept nogil:
    """Directed grid->trajectory distance over flat grid indices [start, stop).

    Trajectory points are bucketed into ``c`` cells per axis (``tr`` sorted by
    cell, ``start_of`` the CSR offsets). Cells are visited in rings of growing
    max-offset until the ring's lower bound exceeds the current nearest
    distance. A grid point is abandoned once it is within the running maximum ``h``.
    """
    cdef Py_ssize_t N = tr.shape[0]
    cdef i64 p, rem, s, r, rmax = c // 2, cell, q, lin
    cdef Py_ssize_t j
    cdef double cur, d, dj, lb, rmin = INFINITY
    cdef bint onring, done
    cdef vector[double] g
    cdef vector[i64] home, off
    g.resize(N)
    home.resize(N)
    off.resize(N)
    for j in range(N):
        if radii[j] < rmin:
            rmin = radii[j]
    for p in range(start, stop):
        rem = p
        for j in range(N - 1, -1, -1):
            s = rem % gsize[j]
            rem = rem // gsize[j]
            g[j] = gflat[j, s]
            cell = <i64>(g[j] * c)
            home[j] = cell if cell < c else c - 1
        cur = INFINITY
        r = 0
        while r <= rmax and cur > h:
            if r >= 2:
                lb = 2.0 * rmin * sin(M_PI * (r - 1) / <double>c)
                if lb >= cur:
                    break
            for j in range(N):
                off[j] = -r
            done = False
            while not done:
                onring = False
                for j in range(N):
                    if off[j] == r or off[j] == -r:
                        onring = True
                        break
                if onring:
                    lin = 0
                    for j in range(N):
                        lin = lin * c + ((home[j] + off[j]) % c + c) % c
                    for q in range(start_of[lin], start_of[lin + 1]):
                        d = 0.0
                        for j in range(N):
                            dj = 2.0 * radii[j] * sin(M_PI * circ(tr[j, q] - g[j]))
                            if dj > d:
                                d = dj
                                if d >= cur:
                                    break
                        if d < cur:
                            cur = d
                # odometer over [-r, r]^N
                j = N - 1
                while j >= 0:
                    if off[j] < r:
                        off[j] += 1
                        break
                    off[j] = -r
                    j -= 1
                done = j < 0
            r += 1
        if cur > h:
            h = cur
    return h


def grid_to_traj(traj, grids, radii, double h0=0.0, int nthreads=1):
    traj = np.asarray(traj, dtype=np.float64)
    N, m = traj.shape
    c = max(1, int(m ** (1.0 / N)))
    cells = np.minimum((traj * c).astype(np.int64), c - 1)
    lin = np.zeros(m, dtype=np.int64)
    for j in range(N):
        lin = lin * c + cells[j]
    order = np.argsort(lin, kind="stable")
    tr = np.ascontiguousarray(traj[:, order])
    start_of = np.searchsorted(lin[order], np.arange(c ** N + 1)).astype(np.int64)
    sizes = np.array([len(g) for g in grids], dtype=np.int64)
    gflat = np.zeros((len(grids), int(sizes.max())), dtype=np.float64)
    for j, gj in enumerate(grids):
        gflat[j, : len(gj)] = gj
    rad = np.ascontiguousarray(radii, dtype=np.float64)
    total = int(np.prod(sizes))

    cdef const double[:, ::1] trv = tr
    cdef const i64[::1] stv = start_of
    cdef i64 cc = c
    cdef const double[:, ::1] gv = gflat
    cdef const i64[::1] sv = sizes
    cdef const double[::1] rv = rad

    def run(bounds):
        cdef i64 a = bounds[0], b = bounds[1]
        cdef double hh = h0
        with nogil:
            hh = _grid_chunk(trv, stv, cc, gv, sv, rv, a, b, hh)
        return hh

    nthreads = max(1, nthreads)
    if nthreads == 1 or total < 4096:
        return float(run((0, total)))
    edges = np.linspace(0, total, 4 * nthreads + 1).astype(np.int64)
    chunks = [(int(edges[i]), int(edges[i + 1])) for i in range(len(edges) - 1)]
    with ThreadPoolExecutor(max_workers=nthreads) as ex:
        return float(max(ex.map(run, chunks)))


# ----------------------------------------------------------------- rips (cohomology)

cdef class _Complex:
    """Implicit Rips complex; simplices coded as base-n digits of sorted vertices."""

    cdef const double[:, ::1] D
    cdef double thr
    cdef i64 n

    def __init__(self, D, double thr):
        self.D = D
        self.thr = thr
        self.n = D.shape[0]

    cdef void decode(self, i64 code, int dim, i64* out) noexcept nogil:
        cdef int k
        for k in range(dim, -1, -1):
            out[k] = code % self.n
            code = code // self.n

    cdef double value(self, i64* v, int dim) noexcept nogil:
        cdef double m = 0.0
        cdef int a, b
        for a in range(dim + 1):
            for b in range(a + 1, dim + 1):
                if self.D[v[a], v[b]] > m:
                    m = self.D[v[a], v[b]]
        return m

    cdef inline i64 cofacet_code(self, i64* v, int dim, i64 w) noexcept nogil:
        cdef i64 code = 0
        cdef int k
        cdef bint placed = False
        for k in range(dim + 1):
            if not placed and w < v[k]:
                code = code * self.n + w
                placed = True
            code = code * self.n + v[k]
        if not placed:
            code = code * self.n + w
        return code

    cdef inline double join(self, i64* v, int dim, i64 w) noexcept nogil:
        """Largest distance from ``w`` to the simplex, or -1 when ``w`` is a vertex of it."""
        cdef double m = 0.0, dw
        cdef int k
        for k in range(dim + 1):
            if v[k] == w:
                return -1.0
            dw = self.D[v[k], w]
            if dw > m:
                m = dw
        return m

    cdef void push_cofacets(self, i64* v, int dim, double val,
                            priority_queue[entry_t]& heap) noexcept nogil:
        cdef i64 w
        cdef double m
        for w in range(self.n):
            m = self.join(v, dim, w)
            if m < 0.0 or m > self.thr:
                continue
            if val > m:
                m = val
            heap.push(entry_t(-m, -self.cofacet_code(v, dim, w)))

    cdef bint min_cofacet(self, i64* v, int dim, double val, entry_t* out) noexcept nogil:
        """Pivot of an unreduced coboundary column without building a heap."""
        cdef i64 w, code
        cdef double m
        cdef bint found = False
        cdef entry_t e
        for w in range(self.n):
            m = self.join(v, dim, w)
            if m < 0.0 or m > self.thr:
                continue
            if val > m:
                m = val
            if found and -m < out[0].first:
                continue
            e = entry_t(-m, -self.cofacet_code(v, dim, w))
            if not found or e > out[0]:
                out[0] = e
                found = True
        return found


cdef bint _pivot(priority_queue[entry_t]& heap, entry_t* out) noexcept nogil:
    cdef entry_t top
    while not heap.empty():
        top = heap.top()
        heap.pop()
        if not heap.empty() and heap.top() == top:
            heap.pop()
            continue
        heap.push(top)
        out[0] = top
        return True
    return False


cdef vector[i64] _xor_reduce(vector[i64]& work) noexcept nogil:
    """Cancel duplicate codes pairwise (GF(2) sum of the recorded simplices)."""
    cdef unordered_map[i64, int] cnt
    cdef vector[i64] res
    cdef Py_ssize_t i
    for i in range(<Py_ssize_t>work.size()):
        cnt[work[i]] += 1
    for i in range(<Py_ssize_t>work.size()):
        if cnt[work[i]] % 2 == 1:
            res.push_back(work[i])
            cnt[work[i]] = 0
    return res


cdef void _add_column(_Complex K, i64 code, int p, priority_queue[entry_t]& heap,
                      vector[i64]& work) noexcept nogil:
    cdef i64 buf[64]
    K.decode(code, p, buf)
    K.push_cofacets(buf, p, K.value(buf, p), heap)
    work.push_back(code)


def rips_pairs(D, int max_dim, double threshold=INFINITY):
    """Persistence pairs per dimension via reduction of the coboundary matrix.

    Dimensions are processed in ascending order; (p+1)-simplices that kill a
    p-class are cleared from the next stage.
    """
    D = np.ascontiguousarray(D, dtype=np.float64)
    cdef i64 n = D.shape[0]
    if n == 0:
        return [[] for _ in range(max_dim + 1)]
    if float(n) ** (max_dim + 2) >= 2.0 ** 62:
        raise OverflowError("simplex codes overflow 64 bits for this size/dimension")
    cdef _Complex K = _Complex(D, threshold)
    cdef const double[:, ::1] Dv = D
    out = [[] for _ in range(max_dim + 1)]

    # dimension 0: union-find over edges in filtration order
    iu, ju = np.triu_indices(n, 1)
    ev = D[iu, ju]
    keep = ev <= threshold
    iu, ju, ev = iu[keep], ju[keep], ev[keep]
    codes = iu.astype(np.int64) * n + ju
    order = np.lexsort((codes, ev))
    iu, ju, ev, codes = iu[order], ju[order], ev[order], codes[order]
    parent = np.arange(n)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cdef unordered_set[i64] cleared
    components = n
    for a, b, val, code in zip(iu.tolist(), ju.tolist(), ev.tolist(), codes.tolist()):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
            components -= 1
            cleared.insert(code)
            if val > 0.0:
                out[0].append((0.0, val))
    out[0].extend([(0.0, math.inf)] * components)

    # p-simplices of the current dimension (vertex arrays + values)
    verts = np.stack([iu, ju], axis=1).astype(np.int64) if len(iu) else np.zeros((0, 2), np.int64)
    vals = ev.astype(np.float64)

    cdef int p
    cdef Py_ssize_t col, t
    cdef i64[:, ::1] vv
    cdef double[::1] valv
    cdef i64[::1] colcodes
    cdef i64 buf[64]
    cdef priority_queue[entry_t] heap
    cdef unordered_map[i64, Py_ssize_t] pivot_of
    cdef unordered_set[i64] next_cleared
    cdef vector[i64] owner_code
    cdef unordered_map[Py_ssize_t, vector[i64]] extra
    cdef vector[i64] work, reduced
    cdef entry_t piv
    cdef bint has
    cdef Py_ssize_t owner, k, slot

    for p in range(1, max_dim + 1):
        if p > 1:
            verts, vals = _extend(Dv, verts, vals, threshold)
        m = verts.shape[0]
        if m == 0:
            break
        colcodes_arr = np.zeros(m, dtype=np.int64)
        for k in range(p + 1):
            colcodes_arr = colcodes_arr * n + verts[:, k]
        corder = np.lexsort((colcodes_arr, vals))[::-1]
        verts = np.ascontiguousarray(verts[corder])
        vals = np.ascontiguousarray(vals[corder])
        colcodes = np.ascontiguousarray(colcodes_arr[corder])
        del colcodes_arr, corder
        vv = verts
        valv = vals

        pivot_of.clear()
        owner_code.clear()
        extra.clear()
        next_cleared.clear()
        with nogil:
            for col in range(vv.shape[0]):
                if cleared.count(colcodes[col]):
                    continue
                for k in range(p + 1):
                    buf[k] = vv[col, k]
                has = K.min_cofacet(buf, p, valv[col], &piv)
                work.clear()
                if has and pivot_of.count(-piv.second):
                    # pivot already owned: reduce with an explicit heap
                    while not heap.empty():
                        heap.pop()
                    work.push_back(colcodes[col])
                    K.push_cofacets(buf, p, valv[col], heap)
                    has = _pivot(heap, &piv)
                    while has and pivot_of.count(-piv.second):
                        owner = pivot_of[-piv.second]
                        _add_column(K, owner_code[owner], p, heap, work)
                        if extra.count(owner):
                            for t in range(<Py_ssize_t>extra[owner].size()):
                                _add_column(K, extra[owner][t], p, heap, work)
                        has = _pivot(heap, &piv)
                if has:
                    slot = owner_code.size()
                    pivot_of[-piv.second] = slot
                    owner_code.push_back(colcodes[col])
                    if work.size() > 1:
                        reduced = _xor_reduce(work)
                        for t in range(<Py_ssize_t>reduced.size()):
                            if reduced[t] != colcodes[col]:
                                extra[slot].push_back(reduced[t])
                    next_cleared.insert(-piv.second)
                    if -piv.first > valv[col]:
                        with gil:
                            out[p].append((valv[col], -piv.first))
                else:
                    with gil:
                        out[p].append((valv[col], math.inf))
        cleared = next_cleared
    return out


def _extend(const double[:, ::1] D, verts, vals, double thr):
    """All (p+1)-simplices obtained by appending a larger vertex to each p-simplex."""
    cdef i64[:, ::1] v = np.ascontiguousarray(verts, dtype=np.int64)
    cdef double[::1] val = np.ascontiguousarray(vals, dtype=np.float64)
    cdef Py_ssize_t m = v.shape[0], width = v.shape[1], i, k
    cdef i64 n = D.shape[0], w
    cdef double mx, dw
    cdef vector[i64] outv
    cdef vector[double] outval
    with nogil:
        for i in range(m):
            for w in range(v[i, width - 1] + 1, n):
                mx = val[i]
                for k in range(width):
                    dw = D[v[i, k], w]
                    if dw > mx:
                        mx = dw
                if mx > thr:
                    continue
                for k in range(width):
                    outv.push_back(v[i, k])
                outv.push_back(w)
                outval.push_back(mx)
    cnt = outval.size()
    res_v = np.empty((cnt, width + 1), dtype=np.int64)
    res_val = np.empty(cnt, dtype=np.float64)
    cdef i64[:, ::1] rv = res_v
    cdef double[::1] rval = res_val
    for i in range(<Py_ssize_t>cnt):
        rval[i] = outval[i]
        for k in range(width + 1):
            rv[i, k] = outv[i * (width + 1) + k]
    return res_v, res_val
