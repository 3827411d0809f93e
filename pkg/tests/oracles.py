"""Reference implementations that share no evaluation code with the package.

Each oracle recomputes a quantity from first principles: raw tables walked
state by state, closed-form recursions, or plain group arithmetic.
"""
import itertools


# --- raw table walking -------------------------------------------------------

def walk(aut, level, state, sign, letters):
    """Image of ``letters`` under one state (or its inverse) read straight off the tables."""
    out = []
    q = state
    for j, x in enumerate(letters):
        t = aut.tables(level + j)
        if sign > 0:
            y = t.psi[q][x]
            q = t.phi[q][x]
        else:
            row = t.psi[q]
            y = row.index(x)
            q = t.phi[q][y]
        out.append(y)
    return tuple(out)


def act(aut, level, factors, letters):
    letters = tuple(letters)
    for q, sign in factors:
        letters = walk(aut, level, q, sign, letters)
    return letters


def all_words(sizes):
    return itertools.product(*[range(n) for n in sizes])


def brute_trivial(aut, level, factors, depth):
    sizes = [aut.size_at(level + j) for j in range(depth)]
    return all(act(aut, level, factors, w) == tuple(w) for w in all_words(sizes))


# --- permutations as plain lists --------------------------------------------

def cycle_perm(size, cycles):
    p = list(range(size))
    for c in cycles:
        for j, x in enumerate(c):
            p[x] = c[(j + 1) % len(c)]
    return p


def perm_pow(p, k):
    if k < 0:
        inv = [0] * len(p)
        for x, y in enumerate(p):
            inv[y] = x
        p, k = inv, -k
    out = list(range(len(p)))
    for _ in range(k):
        out = [p[x] for x in out]
    return out


# --- closed-form recursions for the lamplighter elements --------------------

def zwrz_level(i, seq=lambda i: i + 2):
    """0-based cycles of the Z wr Z display: alpha on even letters, sigma on odd ones, mark 0."""
    r = seq(i)
    return 2 * r, list(range(0, 2 * r, 2)), list(range(1, 2 * r, 2))


def recursion_c(level_data, level, word):
    """c(xw) = xw at the marked letter, sigma(x) c(w) elsewhere."""
    out = []
    for j, x in enumerate(word):
        size, pi, sigma = level_data(level + j)
        if x == pi[0]:
            return tuple(out) + tuple(word[j:])
        out.append(cycle_perm(size, [sigma])[x])
    return tuple(out)


def recursion_c_power(level_data, level, k, word):
    """c^k(xw) = xw at the marked letter, sigma^k(x) c^k(w) elsewhere."""
    out = []
    for j, x in enumerate(word):
        size, pi, sigma = level_data(level + j)
        if x == pi[0]:
            return tuple(out) + tuple(word[j:])
        out.append(perm_pow(cycle_perm(size, [sigma]), k)[x])
    return tuple(out)


def recursion_d(level_data, level, k, word):
    """d_k(xw) = xw when x = alpha^k(mark), sigma(x) d_k(w) otherwise."""
    out = []
    for j, x in enumerate(word):
        size, pi, sigma = level_data(level + j)
        fixed = perm_pow(cycle_perm(size, [pi]), k)[pi[0]]
        if x == fixed:
            return tuple(out) + tuple(word[j:])
        out.append(cycle_perm(size, [sigma])[x])
    return tuple(out)


def recursion_C(layout_at, level, M, word):
    """C_M(xw) = x C_{M with m_s zeroed}(w) at the marked letter x_s, Sigma_M(x) C_M(w) elsewhere."""
    M = list(M)
    out = []
    for j, x in enumerate(word):
        lay = layout_at(level + j)
        marks = [c[0] for c in lay.pi]
        if x in marks:
            M[marks.index(x)] = 0
            out.append(x)
            continue
        y = x
        for s, m in enumerate(M):
            y = perm_pow(cycle_perm(lay.size, [lay.sigma[s]]), m)[y]
        out.append(y)
    return tuple(out)


# --- diagonal automata: the cartesian-product image --------------------------

def diagonal_images(level_perm, factors, levels):
    """Level-wise permutations lambda_i / gamma_i of a word in a diagonal automaton.

    ``level_perm(i, q)`` is the output permutation of state q at level i.
    """
    images = []
    for i in range(levels):
        size = len(level_perm(i, 0))
        p = list(range(size))
        for q, sign in factors:
            p = [perm_pow(level_perm(i, q), sign)[x] for x in p]
        images.append(p)
    return images


def diagonal_trivial(level_perm, factors, levels):
    return all(p == list(range(len(p))) for p in diagonal_images(level_perm, factors, levels))


# --- free group --------------------------------------------------------------

def free_ball_sizes(rank, radius):
    """Elements of length <= r in the free group, counted by enumerating reduced words."""
    letters = [(g, e) for g in range(rank) for e in (1, -1)]
    seen = {()}
    frontier = [()]
    sizes = [1]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for g, e in letters:
                if w and w[-1] == (g, -e):
                    continue
                v = w + ((g, e),)
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


# --- Z wr Z arithmetic ---------------------------------------------------------

def wreath_mul(x, y):
    """(f, s)(g, t) = (f + shift_s g, s + t) in (direct sum over Z of Z) semidirect Z."""
    f, s = x
    g, t = y
    h = dict(f)
    for pos, v in g:
        h[pos + s] = h.get(pos + s, 0) + v
    return (frozenset((p, v) for p, v in h.items() if v), s + t)


def wreath_inv(x):
    f, s = x
    return (frozenset((p - s, -v) for p, v in f), -s)


def wreath_ball_sizes(gens, radius):
    steps = list(gens) + [wreath_inv(g) for g in gens]
    one = (frozenset(), 0)
    seen = {one}
    frontier = [one]
    sizes = [1]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in steps:
                h = wreath_mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


U = (frozenset(), 1)
ETA = (frozenset({(0, 1)}), 0)
ETA_U = wreath_mul(ETA, U)
