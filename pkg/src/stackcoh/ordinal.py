"""
Maps between finite ordinals [l] -> [n] and the simplicial operators.

An OrdinalMap with source_size l and target_size n is a function
{0,...,l} -> {0,...,n}.  Composition follows diagram order:
``compose(f, g)`` is "first f, then g", i.e. g∘f, which matches the
right action of operators on simplices (x f g = (x f) g).

Generators:

    delta(i, n)  [n-1] -> [n]  monotone injection missing i
    sigma(j, n)  [n+1] -> [n]  monotone surjection repeating j
    iota(p, n)   [p] -> [n]    front inclusion 0..p
    tau(q, n)    [q] -> [n]    back inclusion n-q..n
    chi(i, n)    [0] -> [n]    vertex i
"""

from __future__ import annotations

from functools import total_ordering
from itertools import combinations


class CompositionError(ValueError):
    pass


@total_ordering
class OrdinalMap:
    __slots__ = ("source_size", "target_size", "values", "_hash")

    def __init__(self, values, target_size: int):
        values = tuple(int(v) for v in values)
        if not values:
            raise ValueError("an ordinal map needs at least one value")
        for v in values:
            if v < 0 or v > target_size:
                raise ValueError(f"value {v} outside [0, {target_size}]")
        self.values = values
        self.source_size = len(values) - 1
        self.target_size = int(target_size)
        self._hash = hash((self.values, self.target_size))

    # derived flags, never cached
    @property
    def is_monotone(self) -> bool:
        v = self.values
        return all(v[i] <= v[i + 1] for i in range(len(v) - 1))

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.target_size + 1))

    @property
    def is_sdp_index(self) -> bool:
        """Injective, monotone and 0 -> 0."""
        return self.values[0] == 0 and self.is_monotone and self.is_injective

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, OrdinalMap):
            return NotImplemented
        return self.values == other.values and self.target_size == other.target_size

    def __hash__(self):
        return self._hash

    def _key(self):
        return (self.source_size, self.values, self.target_size)

    def __lt__(self, other):
        if not isinstance(other, OrdinalMap):
            return NotImplemented
        return self._key() < other._key()

    def __repr__(self):
        return f"OrdinalMap({self.values}, {self.target_size})"

    def then(self, other: "OrdinalMap") -> "OrdinalMap":
        return compose(self, other)


def compose(f: OrdinalMap, g: OrdinalMap) -> OrdinalMap:
    """Return g∘f (apply f first)."""
    if f.target_size != g.source_size:
        raise CompositionError(
            f"cannot compose [{f.source_size}]->[{f.target_size}] "
            f"with [{g.source_size}]->[{g.target_size}]")
    return OrdinalMap([g.values[v] for v in f.values], g.target_size)


def identity(n: int) -> OrdinalMap:
    return OrdinalMap(range(n + 1), n)


def generator(kind: str, index: int, n: int) -> OrdinalMap:
    if n < 0 or index < 0:
        raise ValueError("negative index or size")
    if kind == "delta":
        if n < 1 or index > n:
            raise ValueError(f"delta_{index} needs 0 <= i <= n, n >= 1 (n={n})")
        return OrdinalMap([v if v < index else v + 1 for v in range(n)], n)
    if kind == "sigma":
        if index > n:
            raise ValueError(f"sigma_{index} needs 0 <= j <= n (n={n})")
        return OrdinalMap([v if v <= index else v - 1 for v in range(n + 2)], n)
    if kind == "iota":
        if index > n:
            raise ValueError(f"iota_{index} needs p <= n (n={n})")
        return OrdinalMap(range(index + 1), n)
    if kind == "tau":
        if index > n:
            raise ValueError(f"tau_{index} needs q <= n (n={n})")
        return OrdinalMap(range(n - index, n + 1), n)
    if kind == "chi":
        if index > n:
            raise ValueError(f"chi_{index} needs i <= n (n={n})")
        return OrdinalMap([index], n)
    raise ValueError(f"unknown generator kind {kind!r}")


def delta(i, n):
    return generator("delta", i, n)


def sigma(j, n):
    return generator("sigma", j, n)


def iota(p, n):
    return generator("iota", p, n)


def tau(q, n):
    return generator("tau", q, n)


def chi(i, n):
    return generator("chi", i, n)


def prime(beta: OrdinalMap) -> OrdinalMap:
    """beta': [l+1] -> [m+1], 0 -> 0 and i+1 -> beta(i)+1 for every i >= 0."""
    return OrdinalMap((0,) + tuple(v + 1 for v in beta.values), beta.target_size + 1)


def reversal(n: int) -> OrdinalMap:
    """i -> n - i; not monotone, only meaningful for groupoid chains."""
    return OrdinalMap([n - i for i in range(n + 1)], n)


def epi_mono(theta: OrdinalMap):
    """Factor a monotone map as mono∘epi: returns (epi, mono) with
    compose(epi, mono) == theta."""
    if not theta.is_monotone:
        raise ValueError("epi-mono factorisation needs a monotone map")
    image = sorted(set(theta.values))
    pos = {v: k for k, v in enumerate(image)}
    epi = OrdinalMap([pos[v] for v in theta.values], len(image) - 1)
    mono = OrdinalMap(image, theta.target_size)
    return epi, mono


def monotone_maps(l: int, n: int):
    """All monotone maps [l] -> [n] in lexicographic order."""
    def rec(prefix, lo):
        if len(prefix) == l + 1:
            yield OrdinalMap(prefix, n)
            return
        for v in range(lo, n + 1):
            yield from rec(prefix + [v], v)
    yield from rec([], 0)


def injective_monotone_maps(l: int, n: int):
    for c in combinations(range(n + 1), l + 1):
        yield OrdinalMap(c, n)


def sdp_indices(n: int, max_k: int):
    """Injective monotone 0-preserving maps [k] -> [n], 0 <= k <= max_k,
    in canonical order."""
    out = []
    for k in range(0, min(max_k, n) + 1):
        for rest in combinations(range(1, n + 1), k):
            out.append(OrdinalMap((0,) + rest, n))
    out.sort()
    return out


def prime_iota_preimages(alpha: OrdinalMap, n: int, max_l: int, search: bool = False):
    """Pairs (beta, k) with beta: [l] -> [n-1] an sdp index, l <= max_l, and
    prime(beta)∘iota_k == alpha.  ``search`` enumerates all candidates."""
    k = alpha.source_size
    out = []
    if search:
        for beta in sdp_indices(n - 1, max_l):
            if beta.source_size + 1 >= k and prime(beta).values[:k + 1] == alpha.values:
                out.append((beta, k))
        return out
    if not (alpha.is_monotone and alpha.is_injective):
        return out
    if alpha.values[0] != 0 or (k >= 1 and alpha.values[1] < 1):
        return out
    if k >= 1 and alpha.values[1] != 1:
        # beta(0) = alpha(1) - 1 must be 0 for beta to preserve 0
        return out
    head = tuple(v - 1 for v in alpha.values[1:])
    if k == 0:
        # beta'(0) = 0 always; beta is any sdp index
        for beta in sdp_indices(n - 1, max_l):
            out.append((beta, 0))
        return out
    top = head[-1]
    for extra in range(0, max_l - (k - 1) + 1):
        for rest in combinations(range(top + 1, n), extra):
            beta = OrdinalMap(head + rest, n - 1)
            out.append((beta, k))
    out.sort()
    return out


def prime_delta_preimages(alpha: OrdinalMap, n: int, search: bool = False):
    """Pairs (beta, r), 1 <= r <= l, beta: [l] -> [n-1] an sdp index with
    prime(beta)∘delta_r == alpha, where l = alpha.source_size."""
    l = alpha.source_size
    out = []
    if search:
        if l >= 0:
            for beta in injective_monotone_maps(l, n - 1):
                if beta.values[0] != 0:
                    continue
                bp = prime(beta)
                for r in range(1, l + 1):
                    if compose(delta(r, l + 1), bp) == alpha:
                        out.append((beta, r))
        out.sort()
        return out
    if not (alpha.is_monotone and alpha.is_injective):
        return out
    a = alpha.values
    # beta' is alpha with one value inserted at position r, 1 <= r <= l;
    # beta'(1) = beta(0) + 1 = 1 forces the inserted or kept value at 1 to be 1
    for r in range(1, l + 1):
        for v in range(a[r - 1] + 1, a[r]):
            bp = a[:r] + (v,) + a[r:]
            if bp[1] != 1:
                continue
            beta = OrdinalMap([x - 1 for x in bp[1:]], n - 1)
            out.append((beta, r))
    out.sort()
    return out
