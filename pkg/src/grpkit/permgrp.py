"""Finite permutation groups via deterministic stabilizer chains.

Permutations act on the right: ``x ** p`` is the image of the point ``x``,
and ``p * q`` means "apply p, then q".  Group order, membership, and element
enumeration all go through a Schreier-Sims stabilizer chain built without
randomization (base points are the smallest moved points), so every query is
reproducible run to run.
"""

from __future__ import annotations

import threading

from grpkit.errors import OrderBudgetError

DEFAULT_ELEMENT_BUDGET = 10**5


class Permutation:
    """A bijection of {0, ..., n-1}, stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        n = len(images)
        if n == 0:
            raise ValueError("a permutation needs at least one point")
        seen = [False] * n
        for x in images:
            if not isinstance(x, int) or not 0 <= x < n or seen[x]:
                raise ValueError(f"not a bijection of 0..{n - 1}: {images!r}")
            seen[x] = True
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, degree):
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree, cycles):
        images = list(range(degree))
        touched = set()
        for cycle in cycles:
            if len(set(cycle)) != len(cycle):
                raise ValueError("repeated point within a cycle")
            for i, x in enumerate(cycle):
                if x in touched:
                    raise ValueError("cycles are not disjoint")
                touched.add(x)
                images[x] = cycle[(i + 1) % len(cycle)]
        return cls(images)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, point):
        return self.images[point]

    def __mul__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(other.images[x] for x in self.images)

    def __invert__(self):
        out = [0] * self.degree
        for i, x in enumerate(self.images):
            out[x] = i
        return Permutation(out)

    def __pow__(self, k):
        if k < 0:
            return (~self) ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def cycles(self):
        """Nontrivial cycles, each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = self.images[x]
            out.append(tuple(cycle))
        return out

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self):
        return f"Permutation({self.images!r})"


class _Level:
    __slots__ = ("base", "gens", "transversal")

    def __init__(self, base, identity):
        self.base = base
        self.gens = []
        self.transversal = {base: identity}


class PermutationGroup:
    """The group generated by a list of permutations of common degree."""

    def __init__(self, generators, degree=None):
        generators = list(generators)
        if degree is None:
            if not generators:
                raise ValueError("need generators or an explicit degree")
            degree = generators[0].degree
        for g in generators:
            if not isinstance(g, Permutation):
                raise TypeError("generators must be Permutation objects")
            if g.degree != degree:
                raise ValueError("degree mismatch among generators")
        self.degree = degree
        self.generators = tuple(g for g in generators if not g.is_identity())
        self._chain = None
        self._lock = threading.Lock()

    # -- stabilizer chain ------------------------------------------------

    def _smallest_moved(self, perm):
        for x in range(self.degree):
            if perm(x) != x:
                return x
        return None

    def _sift(self, levels, perm, start=0):
        """Reduce perm through the chain; returns (residue, stop level)."""
        for i in range(start, len(levels)):
            level = levels[i]
            x = perm(level.base)
            if x not in level.transversal:
                return perm, i
            perm = perm * ~level.transversal[x]
        return perm, len(levels)

    def _extend(self, levels, perm, at):
        """Install a residue known to fix the first ``at`` base points."""
        stack = [(perm, at)]
        identity = Permutation.identity(self.degree)
        while stack:
            g, i = stack.pop()
            residue, j = self._sift(levels, g, i)
            if residue.is_identity():
                continue
            if j == len(levels):
                levels.append(_Level(self._smallest_moved(residue), identity))
            # the residue fixes the first j base points, so it belongs to the
            # generating set of every level up to j
            for k in range(j, -1, -1):
                level = levels[k]
                level.gens.append(residue)
                # grow the basic orbit: seed with points the new generator
                # reaches from the old orbit, then close under all generators
                frontier = []
                for x in list(level.transversal):
                    y = residue(x)
                    if y not in level.transversal:
                        level.transversal[y] = level.transversal[x] * residue
                        frontier.append(y)
                new_points = list(frontier)
                while frontier:
                    x = frontier.pop(0)
                    u = level.transversal[x]
                    for s in level.gens:
                        y = s(x)
                        if y not in level.transversal:
                            level.transversal[y] = u * s
                            frontier.append(y)
                            new_points.append(y)
                # Schreier generators not seen before this insertion: every
                # generator at a new point, and the new generator everywhere
                for x in new_points:
                    u = level.transversal[x]
                    for s in level.gens:
                        schreier = u * s * ~level.transversal[s(x)]
                        if not schreier.is_identity():
                            stack.append((schreier, k + 1))
                for x, u in list(level.transversal.items()):
                    schreier = u * residue * ~level.transversal[residue(x)]
                    if not schreier.is_identity():
                        stack.append((schreier, k + 1))

    def chain(self):
        """Base points, basic orbits, and strong generators (built once)."""
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    levels = []
                    for g in self.generators:
                        self._extend(levels, g, 0)
                    self._chain = levels
        return self._chain

    # -- queries ---------------------------------------------------------

    def order(self):
        result = 1
        for level in self.chain():
            result *= len(level.transversal)
        return result

    def is_member(self, perm):
        if not isinstance(perm, Permutation):
            raise TypeError("expected a Permutation")
        if perm.degree != self.degree:
            raise ValueError("degree mismatch")
        residue, _ = self._sift(self.chain(), perm)
        return residue.is_identity()

    def __contains__(self, perm):
        return self.is_member(perm)

    def elements(self):
        """All elements, in a deterministic chain order."""
        levels = self.chain()
        identity = Permutation.identity(self.degree)

        def rec(i, prefix):
            if i < 0:
                yield prefix
                return
            level = levels[i]
            for x in sorted(level.transversal):
                for done in rec(i - 1, prefix * level.transversal[x]):
                    yield done

        # each element factors uniquely as u_deepest * ... * u_0 over the
        # basic transversals, deepest level leftmost
        return rec(len(levels) - 1, identity)

    def orbit(self, point):
        if not 0 <= point < self.degree:
            raise ValueError("point out of range")
        seen = {point}
        queue = [point]
        while queue:
            x = queue.pop(0)
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def is_transitive(self):
        return len(self.orbit(0)) == self.degree

    def normal_closure(self, seeds):
        """Smallest normal subgroup containing the seed permutations."""
        for s in seeds:
            if not isinstance(s, Permutation):
                raise TypeError("seeds must be Permutation objects")
            if s.degree != self.degree:
                raise ValueError("degree mismatch")
        closure_gens = []
        closure = PermutationGroup([], degree=self.degree)
        queue = [s for s in seeds if not s.is_identity()]
        while queue:
            x = queue.pop()
            if closure.is_member(x):
                continue
            closure_gens.append(x)
            closure = PermutationGroup(closure_gens, degree=self.degree)
            for g in self.generators:
                queue.append(~g * x * g)
        return closure

    def is_simple(self, element_budget=DEFAULT_ELEMENT_BUDGET):
        """Exhaustively test simplicity; only for small groups.

        Sweeps one representative per conjugacy class and checks that every
        nonidentity normal closure is the whole group.  Groups larger than
        ``element_budget`` raise :class:`OrderBudgetError` -- the caller
        learns nothing about them.
        """
        order = self.order()
        if order > element_budget:
            raise OrderBudgetError(
                f"group order {order} exceeds the element budget {element_budget}"
            )
        if order == 1:
            return False
        processed = set()
        for x in self.elements():
            if x.is_identity() or x.images in processed:
                continue
            # mark the whole conjugacy class of x
            class_queue = [x]
            processed.add(x.images)
            while class_queue:
                y = class_queue.pop()
                for g in self.generators:
                    z = ~g * y * g
                    if z.images not in processed:
                        processed.add(z.images)
                        class_queue.append(z)
            if self.normal_closure([x]).order() != order:
                return False
        return True
