# Compiled kernels: mod-l matrix closure and Felsch coset enumeration.
#
# These transliterate the algorithms in pykernels.py step for step; the two
# backends must produce byte-identical outputs (tests compare them). Keep
# any behavioral change synchronized with pykernels.py.

from cpython.bytearray cimport PyByteArray_AS_STRING
from cpython.bytes cimport PyBytes_FromStringAndSize, PyBytes_AS_STRING
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy

from .common import TC_BUDGET, TC_OK, rotations_by_symbol

cdef int UNDEF = -1


def matmul_mod(bytes a, bytes b, int n, int ell):
    """Product of two one-byte-per-entry encoded matrices mod ell."""
    cdef const unsigned char* pa = <const unsigned char*> PyBytes_AS_STRING(a)
    cdef const unsigned char* pb = <const unsigned char*> PyBytes_AS_STRING(b)
    cdef unsigned char* out = <unsigned char*> malloc(n * n)
    if out == NULL:
        raise MemoryError()
    cdef int i, j, k
    cdef unsigned int acc
    try:
        for i in range(n):
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc += (<unsigned int> pa[i * n + k]) * pb[k * n + j]
                out[i * n + j] = <unsigned char> (acc % ell)
        return PyBytes_FromStringAndSize(<char*> out, n * n)
    finally:
        free(out)


def bfs_closure(list mults, int n, int ell, long cap):
    """Close {identity} under right multiplication by ``mults``.

    Same contract and discovery order as pykernels.bfs_closure.
    """
    cdef int size = n * n
    cdef int nmults = len(mults)
    cdef int i, j, k, r, c
    cdef unsigned int acc

    ident = bytearray(size)
    for i in range(n):
        ident[i * n + i] = 1 % ell
    cdef bytes ident_b = bytes(ident)

    blob = bytearray(ident_b)
    index = {ident_b: 0}
    parent = [-1]
    letter = [-1]
    if nmults == 0:
        return blob, parent, letter, True

    cdef unsigned char* mdata = <unsigned char*> malloc(nmults * size)
    cdef unsigned char* scratch = <unsigned char*> malloc(size)
    if mdata == NULL or scratch == NULL:
        free(mdata)
        free(scratch)
        raise MemoryError()

    cdef const unsigned char* src
    cdef const unsigned char* mj
    cdef long count = 1
    cdef long elem
    cdef bytes key
    level = [0]
    try:
        for j in range(nmults):
            key = mults[j]
            if len(key) != size:
                raise ValueError("multiplier encoding has wrong length")
            memcpy(mdata + j * size, PyBytes_AS_STRING(key), size)
        while level:
            next_level = []
            for j in range(nmults):
                mj = mdata + j * size
                for elem in level:
                    # blob may reallocate on append: re-acquire each time
                    src = <const unsigned char*> PyByteArray_AS_STRING(blob) + elem * size
                    for r in range(n):
                        for c in range(n):
                            acc = 0
                            for k in range(n):
                                acc += (<unsigned int> src[r * n + k]) * mj[k * n + c]
                            scratch[r * n + c] = <unsigned char> (acc % ell)
                    key = PyBytes_FromStringAndSize(<char*> scratch, size)
                    cached = index.get(key)
                    if cached is None:
                        if count >= cap:
                            return blob, parent, letter, False
                        index[key] = count
                        blob += key
                        parent.append(elem)
                        letter.append(j)
                        next_level.append(count)
                        count += 1
            level = next_level
        return blob, parent, letter, True
    finally:
        free(mdata)
        free(scratch)


cdef class _Table:
    cdef int nsym
    cdef long cap
    cdef long nrows, nlive, alloc_rows
    cdef int* tab
    cdef long* p
    cdef long* ded          # interleaved (coset, symbol)
    cdef long ded_n, ded_alloc
    cdef long* q
    cdef long q_n, q_alloc

    def __cinit__(self, int nsym, long cap):
        self.nsym = nsym
        self.cap = cap
        self.alloc_rows = 1024
        self.tab = <int*> malloc(self.alloc_rows * nsym * sizeof(int))
        self.p = <long*> malloc(self.alloc_rows * sizeof(long))
        self.ded_alloc = 1024
        self.ded = <long*> malloc(self.ded_alloc * 2 * sizeof(long))
        self.q_alloc = 1024
        self.q = <long*> malloc(self.q_alloc * sizeof(long))
        if self.tab == NULL or self.p == NULL or self.ded == NULL or self.q == NULL:
            raise MemoryError()
        cdef int x
        for x in range(nsym):
            self.tab[x] = UNDEF
        self.p[0] = 0
        self.nrows = 1
        self.nlive = 1
        self.ded_n = 0
        self.q_n = 0

    def __dealloc__(self):
        free(self.tab)
        free(self.p)
        free(self.ded)
        free(self.q)

    cdef long rep(self, long a):
        cdef long r = a
        cdef long nxt
        while self.p[r] != r:
            r = self.p[r]
        while self.p[a] != r:
            nxt = self.p[a]
            self.p[a] = r
            a = nxt
        return r

    cdef int grow(self) except -1:
        cdef long newalloc = self.alloc_rows * 2
        cdef int* t2 = <int*> realloc(self.tab, newalloc * self.nsym * sizeof(int))
        if t2 == NULL:
            raise MemoryError()
        self.tab = t2
        cdef long* p2 = <long*> realloc(self.p, newalloc * sizeof(long))
        if p2 == NULL:
            raise MemoryError()
        self.p = p2
        self.alloc_rows = newalloc
        return 0

    cdef void push_ded(self, long a, long x):
        cdef long* d2
        if self.ded_n == self.ded_alloc:
            d2 = <long*> realloc(self.ded, self.ded_alloc * 4 * sizeof(long))
            if d2 == NULL:
                return  # dropped deduction only costs extra scans later
            self.ded = d2
            self.ded_alloc *= 2
        self.ded[2 * self.ded_n] = a
        self.ded[2 * self.ded_n + 1] = x
        self.ded_n += 1

    cdef void set_entry(self, long alpha, long x, long beta):
        self.tab[alpha * self.nsym + x] = <int> beta
        self.tab[beta * self.nsym + (x ^ 1)] = <int> alpha
        self.push_ded(alpha, x)
        self.push_ded(beta, x ^ 1)

    cdef long define(self, long alpha, long x) except? -2:
        if self.nrows >= self.cap:
            return -1
        if self.nrows == self.alloc_rows:
            self.grow()
        cdef long beta = self.nrows
        self.p[beta] = beta
        cdef long base = beta * self.nsym
        cdef int s
        for s in range(self.nsym):
            self.tab[base + s] = UNDEF
        self.nrows += 1
        self.nlive += 1
        self.set_entry(alpha, x, beta)
        return beta

    cdef void merge(self, long a, long b) except *:
        cdef long* q2
        a = self.rep(a)
        b = self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.p[b] = a
        self.nlive -= 1
        if self.q_n == self.q_alloc:
            q2 = <long*> realloc(self.q, self.q_alloc * 2 * sizeof(long))
            if q2 == NULL:
                raise MemoryError()
            self.q = q2
            self.q_alloc *= 2
        self.q[self.q_n] = b
        self.q_n += 1

    cdef void coincidence(self, long a, long b) except *:
        self.merge(a, b)
        cdef long gamma, base, delta, mu, nu, ex, ex2
        cdef int x
        while self.q_n > 0:
            self.q_n -= 1
            gamma = self.q[self.q_n]
            base = gamma * self.nsym
            for x in range(self.nsym):
                delta = self.tab[base + x]
                if delta == UNDEF:
                    continue
                self.tab[delta * self.nsym + (x ^ 1)] = UNDEF
                self.tab[base + x] = UNDEF
                mu = self.rep(gamma)
                nu = self.rep(delta)
                ex = self.tab[mu * self.nsym + x]
                if ex != UNDEF:
                    self.merge(nu, ex)
                else:
                    ex2 = self.tab[nu * self.nsym + (x ^ 1)]
                    if ex2 != UNDEF:
                        self.merge(mu, ex2)
                    else:
                        self.set_entry(mu, x, nu)

    cdef void scan(self, long alpha, int* word, int wlen) except *:
        cdef long f = alpha
        cdef long b = alpha
        cdef int i = 0
        cdef int j = wlen - 1
        cdef long nxt
        while i <= j:
            nxt = self.tab[f * self.nsym + word[i]]
            if nxt == UNDEF:
                break
            f = nxt
            i += 1
        if i > j:
            if f != alpha:
                self.coincidence(f, alpha)
            return
        while j >= i:
            nxt = self.tab[b * self.nsym + (word[j] ^ 1)]
            if nxt == UNDEF:
                break
            b = nxt
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif j == i:
            self.set_entry(f, word[i], b)


def todd_coxeter(int ngens, list relators, long cap, str strategy="felsch"):
    """Felsch enumeration of the cosets of the trivial subgroup.

    Same contract as pykernels.todd_coxeter; only the felsch strategy is
    compiled (the dispatcher routes hlt to the pure backend).
    """
    if strategy != "felsch":
        raise ValueError("compiled backend implements the felsch strategy only")
    cdef int nsym = 2 * ngens
    cdef _Table t = _Table(nsym, cap)

    rots = rotations_by_symbol(relators, ngens)
    # flatten rotations into C arrays, grouped by first symbol
    cdef long total_words = 0
    cdef long total_syms = 0
    for group in rots:
        total_words += len(group)
        for w in group:
            total_syms += len(w)
    cdef int* rot_data = <int*> malloc(max(total_syms, 1) * sizeof(int))
    cdef long* rot_off = <long*> malloc(max(total_words, 1) * sizeof(long))
    cdef int* rot_len = <int*> malloc(max(total_words, 1) * sizeof(int))
    cdef long* sym_first = <long*> malloc(nsym * sizeof(long))
    cdef int* sym_count = <int*> malloc(nsym * sizeof(int))
    if (rot_data == NULL or rot_off == NULL or rot_len == NULL
            or sym_first == NULL or sym_count == NULL):
        free(rot_data); free(rot_off); free(rot_len)
        free(sym_first); free(sym_count)
        raise MemoryError()

    cdef long wpos = 0, spos = 0
    cdef int x, s
    for x in range(nsym):
        sym_first[x] = wpos
        sym_count[x] = len(rots[x])
        for w in rots[x]:
            rot_off[wpos] = spos
            rot_len[wpos] = len(w)
            for s in w:
                rot_data[spos] = s
                spos += 1
            wpos += 1

    cdef long alpha, gamma, dsym, beta
    cdef long widx
    cdef int wi
    try:
        alpha = 0
        while alpha < t.nrows:
            if t.p[alpha] != alpha:
                alpha += 1
                continue
            x = 0
            while x < nsym:
                if t.p[alpha] != alpha:
                    break
                if t.tab[alpha * nsym + x] == UNDEF:
                    beta = t.define(alpha, x)
                    if beta == -1:
                        return TC_BUDGET, t.nlive, t.nrows, []
                    # process deductions
                    while t.ded_n > 0:
                        t.ded_n -= 1
                        gamma = t.ded[2 * t.ded_n]
                        dsym = t.ded[2 * t.ded_n + 1]
                        gamma = t.rep(gamma)
                        for wi in range(sym_count[dsym]):
                            widx = sym_first[dsym] + wi
                            t.scan(gamma, rot_data + rot_off[widx], rot_len[widx])
                x += 1
            alpha += 1

        live = []
        renumber = {}
        for alpha in range(t.nrows):
            if t.p[alpha] == alpha:
                renumber[alpha] = len(live)
                live.append(alpha)
        table = []
        for alpha in live:
            row = []
            for x in range(nsym):
                e = t.tab[alpha * nsym + x]
                row.append(renumber[t.rep(e)] if e != UNDEF else UNDEF)
            table.append(row)
        return TC_OK, len(live), t.nrows, table
    finally:
        free(rot_data)
        free(rot_off)
        free(rot_len)
        free(sym_first)
        free(sym_count)
