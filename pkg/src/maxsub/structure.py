"""Chief series, chief factor descriptors, crowns and Baer classification.

The series is built ascending: repeatedly find one minimal normal subgroup
of G above the current term.  Three refinement tools drive the search on a
section (N, W) with both ends normal in G:

* derived refinement: replace W by N[W,W] until the section is abelian or
  perfect;
* abelian sections: split off the elementary layer for one prime, then
  spin a minimal G-submodule (coordinates from `modules`);
* perfect sections: per-orbit restriction.  The subgroup of W acting
  within the image of N on some orbit is normal in G; when it collapses to
  N the section embeds in a small quotient of the orbit image, where chief
  minimality is decided exactly and pulled back.

Quotients are never materialized above the coset limit; all large-group
work happens through orbit restrictions, point labels and prefixed
stabilizer chains.
"""

from __future__ import annotations

import random
from math import lcm

import numpy as np

from .bsgs import LimitExceeded, StabilizerChain, _compose
from .group import (GroupHandle, coset_action, coset_canonical,
                    group_from_generators, is_normal, kernel_of_action,
                    normal_closure, stabilizer_of_action_point)
from .modules import (ElementaryLayer, SectionSpace, intertwiner_space_dim,
                      minimal_submodule)
from .perms import Permutation
from .simptable import split_simple_power
from .tables import element_table

ELEMENT_BUDGET = 40000
SECTION_DIM_CAP = 48


class RefusedComputation(RuntimeError):
    """A structural computation exceeded its stated resource limits."""


class NormalSection:
    """A pair K <= H of subgroups normal in the parent G."""

    __slots__ = ("parent", "upper", "lower")

    def __init__(self, parent, upper, lower):
        self.parent = parent
        self.upper = upper
        self.lower = lower

    @property
    def order(self):
        return self.upper.order // self.lower.order

    def __repr__(self):
        return f"<section {self.upper.order}/{self.lower.order}>"


class ChiefFactorDescriptor:
    __slots__ = ("section", "order", "abelian", "prime", "dim", "simple_id",
                 "copies", "ambiguity_note", "centralizer", "frattini",
                 "complemented", "space", "factor_action", "index_in_series")

    def __init__(self, section):
        self.section = section
        self.order = section.order
        self.abelian = None
        self.prime = None
        self.dim = None
        self.simple_id = None
        self.copies = None
        self.ambiguity_note = None
        self.centralizer = None
        self.frattini = None
        self.complemented = None
        self.space = None            # SectionSpace for abelian factors
        self.factor_action = None    # FactorAction for non-abelian factors
        self.index_in_series = None

    @property
    def action_matrices(self):
        if not self.abelian:
            raise ValueError("action matrices exist for abelian factors only")
        return self.space.gen_matrices

    def __repr__(self):
        kind = "abelian" if self.abelian else (self.simple_id or "non-abelian")
        return f"<chief factor {self.order} ({kind})>"


class FactorAction:
    """Conjugation action of G on the cosets of K in H (the chief factor
    as a G-set), with the induced image group and its kernel C_G(H/K)."""

    def __init__(self, G, H, K):
        self.parent = G
        Kchain = K.chain
        ident = np.arange(G.degree, dtype=np.int32)
        first = coset_canonical(Kchain, ident)
        reps = [first]
        index_of = {first.tobytes(): 0}
        hgens = [h.images for h in H.generators if not h.is_identity()]
        head = 0
        n = H.order // K.order
        while head < len(reps):
            r = reps[head]
            head += 1
            for harr in hgens:
                nxt = coset_canonical(Kchain, _compose(r, harr))
                key = nxt.tobytes()
                if key not in index_of:
                    index_of[key] = len(reps)
                    reps.append(nxt)
        if len(reps) != n:
            raise RuntimeError("factor coset enumeration mismatch")
        self.reps = reps
        self.index_of = index_of
        self.n = n

        def conj_array(g):
            garr = g.images
            ginv = g.inv().images
            out = np.empty(n, dtype=np.int32)
            for j, r in enumerate(reps):
                img = coset_canonical(Kchain, _compose(_compose(ginv, r), garr))
                out[j] = index_of[img.tobytes()]
            return out

        self._conj_array = conj_array
        self.gen_arrays = [conj_array(g) for g in G.generators]

    def array_of(self, p):
        return self._conj_array(p)

    def image_group(self, name=None):
        return group_from_generators(
            self.n, [Permutation(a) for a in self.gen_arrays], name=name)

    def kernel(self):
        from .group import kernel_of_action_schreier
        return kernel_of_action_schreier(self.parent, self.gen_arrays, self.n)


# -- general small-group helpers ----------------------------------------------

def _conjugacy_class_reps(G, budget=ELEMENT_BUDGET):
    els = G.elements(limit=budget)
    index = {p.images.tobytes(): i for i, p in enumerate(els)}
    seen = [False] * len(els)
    conj = [(g, g.inv()) for g in G.generators]
    reps = []
    for i, p in enumerate(els):
        if seen[i]:
            continue
        reps.append(p)
        frontier = [p]
        seen[i] = True
        while frontier:
            x = frontier.pop()
            for g, ginv in conj:
                y = ginv * x * g
                j = index[y.images.tobytes()]
                if not seen[j]:
                    seen[j] = True
                    frontier.append(y)
    return reps


def minimal_normal_subgroups(G, budget=ELEMENT_BUDGET):
    """All minimal normal subgroups (element-closure route, desk scale).

    Every minimal normal subgroup is the normal closure of any of its
    nontrivial elements, so the minimal members of the set of closures of
    class representatives are exactly the minimal normal subgroups.
    """
    if G.order == 1:
        return []
    if G.order > budget:
        raise RefusedComputation(
            f"minimal normal subgroups need order <= {budget}, got {G.order}")
    closures = []
    for rep in _conjugacy_class_reps(G, budget):
        if rep.is_identity():
            continue
        N = normal_closure(G, [rep])
        if not any(M.order == N.order and N.contains(M.generators[0] if M.generators else M.identity())
                   and all(N.contains(g) for g in M.generators)
                   for M in closures):
            closures.append(N)
    out = []
    for N in closures:
        minimal = True
        for M in closures:
            if M.order < N.order and all(N.contains(g) for g in M.generators):
                minimal = False
                break
        if minimal:
            out.append(N)
    # dedupe identical subgroups
    dedup = []
    for N in out:
        if not any(D.order == N.order and all(D.contains(g) for g in N.generators)
                   for D in dedup):
            dedup.append(N)
    return sorted(dedup, key=lambda H: (H.order,
                                        tuple(g.key() for g in H.generators)))


# -- chief series --------------------------------------------------------------

def _section_is_abelian(W, K):
    gens = W.generators
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if not K.contains(a.inv() * b.inv() * a * b):
                return False
    return True


def _order_mod(K, w):
    """Order of the image of w in W/K (section need not be abelian)."""
    e = w.order()
    for q in _prime_list(e):
        while e % q == 0 and K.contains(w ** (e // q)):
            e //= q
    return e


def _prime_list(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_elementary_abelian_group(W, p):
    key = ("elab", p)
    got = W._cache.get(key)
    if got is None:
        got = True
        gens = W.generators
        for g in gens:
            if g.order() not in (1, p):
                got = False
                break
        if got:
            for i, a in enumerate(gens):
                if not got:
                    break
                for b in gens[i + 1:]:
                    if not (a * b == b * a):
                        got = False
                        break
        W._cache[key] = got
    return got


def _orbit_partition(G):
    key = "orbits"
    orbs = G._cache.get(key)
    if orbs is None:
        seen = np.zeros(G.degree, dtype=bool)
        orbs = []
        arrs = [g.images for g in G.generators]
        for s in range(G.degree):
            if seen[s]:
                continue
            orb = [s]
            seen[s] = True
            head = 0
            while head < len(orb):
                x = orb[head]
                head += 1
                for a in arrs:
                    y = int(a[x])
                    if not seen[y]:
                        seen[y] = True
                        orb.append(y)
            orbs.append(sorted(orb))
        G._cache[key] = orbs
    return orbs


def _restrict(arr, points, position):
    return np.array([position[int(arr[p])] for p in points], dtype=np.int32)


def _find_minimal_normal_above(G, N, rng, coset_limit=20000):
    W = G
    while True:
        D = _derived_over(G, N, W)
        if D.order == W.order:
            # perfect section
            step = _peel_orbits(G, N, W, rng)
            if step is not None:
                kind, X = step
                if kind == "chief":
                    return X
                W = X
                continue
            X = _materialize_step(G, N, W, coset_limit)
            if X is not None:
                return X
            raise RefusedComputation(
                "perfect section resisted orbit peeling and the quotient "
                f"index {G.order // N.order} exceeds the coset limit")
        if D.order > N.order:
            W = D
            continue
        # abelian section
        return _abelian_chief_above(G, N, W, rng)


def _derived_over(G, N, W):
    """N[W,W] as a normal subgroup of G.

    [W,W] is normal in G (W is) and does not depend on N, so it is cached
    on W; the common cases N <= [W,W] and [W,W] <= N avoid building the
    join.
    """
    DW = W._cache.get("derived_in_parent")
    if DW is None:
        gens = list(W.generators)
        comms = []
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                comms.append(a.inv() * b.inv() * a * b)
        DW = normal_closure(G, comms)
        W._cache["derived_in_parent"] = DW
    if all(N.contains(g) for g in DW.generators):
        return N
    if all(DW.contains(g) for g in N.generators):
        return DW
    join = G.subgroup(list(N.generators) + list(DW.chain.strong_generators()))
    join.chain
    return join


def _abelian_chief_above(G, N, W, rng):
    exps = [_order_mod(N, w) for w in W.generators]
    exponent = lcm(*[e for e in exps if e > 1]) if any(e > 1 for e in exps) else 1
    primes = _prime_list(exponent)
    p = primes[0] if len(primes) == 1 and exponent == primes[0] else None
    if p is None:
        # peel one elementary layer: (W/N)^(e/p) for the smallest prime
        q = primes[0]
        power = exponent // q
        gens = [w ** power for w in W.generators]
        X = G.subgroup(list(N.generators) + [g for g in gens
                                             if not N.contains(g)])
        X.chain  # force
        return _abelian_chief_above(G, N, X, rng)
    # elementary abelian section of exponent p
    if _is_elementary_abelian_group(W, p):
        layer = _elementary_layer_for(W, p)
        sec = SectionSpace(G, W, N, p, layer=layer)
    else:
        sec = SectionSpace(G, W, N, p, dim_cap=SECTION_DIM_CAP)
    if sec.dim == 0:
        raise RuntimeError("empty abelian section")
    basis = minimal_submodule(sec.gen_matrices, p, sec.dim,
                              seed=rng.randrange(1 << 30))
    lifts = [sec.lift(row) for row in basis]
    X = G.subgroup(list(N.generators) + lifts,
                   known_order=N.order * p ** basis.shape[0])
    X.chain
    return X


def _elementary_layer_for(W, p):
    layer = W._cache.get("elementary_layer")
    if layer is None:
        layer = ElementaryLayer(W, p)
        W._cache["elementary_layer"] = layer
    return layer


def _peel_orbits(G, N, W, rng):
    """Refine a perfect section through orbit restrictions.

    Returns ("descend", X) with N < X < W, ("chief", X) when W/N was
    certified chief via a faithful orbit image, or None if every orbit was
    uninformative.
    """
    orbits = _orbit_partition(G)
    order = list(range(len(orbits)))
    for oi in order:
        pts = orbits[oi]
        if len(pts) == 1:
            continue
        pos = {p: i for i, p in enumerate(pts)}
        wgens = [Permutation(_restrict(g.images, pts, pos))
                 for g in W.chain.strong_generators()]
        ngens = [Permutation(_restrict(g.images, pts, pos))
                 for g in N.chain.strong_generators()]
        JW = group_from_generators(len(pts), wgens or [Permutation.identity(len(pts))])
        JN = group_from_generators(len(pts), ngens or [Permutation.identity(len(pts))])
        if JW.order == JN.order:
            continue
        # X = preimage in W of J_N under restriction
        act = coset_action(JW, JN)
        arrays = []
        for w in W.generators:
            rw = Permutation(_restrict(w.images, pts, pos))
            arrays.append(act.map.apply(rw).images)
        X = stabilizer_of_action_point(W, arrays, act.quotient.degree, point=0)
        if N.order < X.order < W.order:
            if not is_normal(G, X):
                raise RuntimeError("orbit peel produced a non-normal subgroup")
            return ("descend", X)
        if X.order == N.order:
            # W/N embeds in J_W/J_N; find a minimal G-invariant step there
            jg = [Permutation(_restrict(g.images, pts, pos))
                  for g in G.generators]
            S = _minimal_invariant_normal_over(JW, JN, jg)
            act2 = coset_action(JW, S)
            arrays2 = []
            for w in W.generators:
                rw = Permutation(_restrict(w.images, pts, pos))
                arrays2.append(act2.map.apply(rw).images)
            X2 = stabilizer_of_action_point(W, arrays2, act2.quotient.degree,
                                            point=0)
            return ("chief", X2)
    return None


def _minimal_invariant_normal_over(JW, JN, jg_perms):
    """Smallest S with J_N < S <= J_W, S normalized by J_W and by the given
    outer permutations (all small-group work)."""
    JG = group_from_generators(JW.degree,
                               list(JW.generators) + list(jg_perms))
    best = None
    for rep in _conjugacy_class_reps(JW):
        if JN.contains(rep):
            continue
        # normal closure of <J_N, rep> under the full invariance group
        S = normal_closure(JG, list(JN.generators) + [rep])
        # S must stay inside J_W
        if S.order > JW.order or not S.is_subgroup_of(JW):
            continue
        if best is None or S.order < best.order:
            best = S
    if best is None:
        raise RuntimeError("no invariant normal subgroup found in orbit image")
    # descend to minimality by rescanning elements of the current candidate
    improved = True
    while improved:
        improved = False
        for x in best.elements(limit=ELEMENT_BUDGET):
            if x.is_identity() or JN.contains(x):
                continue
            S = normal_closure(JG, list(JN.generators) + [x])
            if S.order < best.order and S.is_subgroup_of(JW):
                best = S
                improved = True
                break
    return best


def _materialize_step(G, N, W, coset_limit):
    index = G.order // N.order
    if index > coset_limit:
        return None
    act = coset_action(G, N, limit=coset_limit)
    Q = act.quotient
    Wbar = Q.subgroup([act.map.apply(w) for w in W.generators])
    if Wbar.order == 1:
        return None
    target = None
    for rep in _conjugacy_class_reps(Wbar, ELEMENT_BUDGET):
        if rep.is_identity():
            continue
        S = normal_closure(Q, [rep])
        if target is None or S.order < target.order:
            target = S
    improved = True
    while improved:
        improved = False
        for x in target.elements(limit=ELEMENT_BUDGET):
            if x.is_identity():
                continue
            S = normal_closure(Q, [x])
            if S.order < target.order:
                target = S
                improved = True
                break
    # pull back: G acts on cosets of target in Q through the quotient map
    act2 = coset_action(Q, target)
    arrays = [act2.map.apply(act.map.gen_images[i]).images
              for i in range(len(G.generators))]
    X = stabilizer_of_action_point(G, arrays, act2.quotient.degree, point=0)
    return X


def chief_series(G, seed=0, coset_limit=20000):
    """Ascending chief series as a list of ChiefFactorDescriptors."""
    cache_key = ("chief_series", seed)
    got = G._cache.get(cache_key)
    if got is not None:
        return got
    rng = random.Random(seed * 0x9E3779B1 + 0xC41EF)
    subgroups = [G.subgroup([], known_order=1)]
    N = subgroups[0]
    while N.order < G.order:
        X = _find_minimal_normal_above(G, N, rng, coset_limit)
        if X.order <= N.order or X.order > G.order or G.order % X.order:
            raise RuntimeError("chief series step produced a bad subgroup")
        subgroups.append(X)
        N = X
    factors = []
    for i in range(len(subgroups) - 1):
        d = describe_factor(G, subgroups[i + 1], subgroups[i])
        d.index_in_series = i
        factors.append(d)
    G._cache[cache_key] = factors
    return factors


def describe_factor(G, H, K):
    """Populate a descriptor for the chief factor H/K of G."""
    sec = NormalSection(G, H, K)
    d = ChiefFactorDescriptor(sec)
    d.abelian = _section_is_abelian(H, K)
    if d.abelian:
        from .simptable import prime_power_split
        split = prime_power_split(d.order)
        if split is None:
            raise RuntimeError("abelian chief factor of non-prime-power order")
        d.prime, d.dim = split
        d.space = SectionSpace(G, H, K, d.prime, dim_cap=SECTION_DIM_CAP)
        if d.space.dim != d.dim:
            raise RuntimeError("section dimension mismatch")
        d.centralizer = _abelian_centralizer(G, d)
    else:
        split = split_simple_power(d.order)
        if split is None:
            raise RuntimeError(
                f"non-abelian chief factor order {d.order} has no simple root")
        s, k, names = split
        d.copies = k
        if len(names) == 1:
            d.simple_id = names[0]
        else:
            d.simple_id, d.ambiguity_note = _disambiguate_simple(G, H, K, names)
        d.factor_action = FactorAction(G, H, K)
        d.centralizer = d.factor_action.kernel()
    return d


def _abelian_centralizer(G, d):
    """Kernel of the conjugation action on the factor (read from the action
    matrices: points of the factor are its p^dim vectors).  Built through
    Schreier generators so no full chain of G is rebuilt."""
    from .group import kernel_of_action_schreier
    space = d.space
    p, dim = d.prime, d.dim
    npoints = p ** dim
    arrays = []
    for M in space.gen_matrices:
        out = np.empty(npoints, dtype=np.int32)
        for i, v in enumerate(_all_vecs(p, dim)):
            img = (np.array(v, dtype=np.int64) @ M) % p
            out[i] = _vec_code(img, p, dim)
        arrays.append(out)
    return kernel_of_action_schreier(G, arrays, npoints)


def _all_vecs(p, dim):
    out = []
    for code in range(p ** dim):
        v = []
        c = code
        for _ in range(dim):
            v.append(c % p)
            c //= p
        out.append(tuple(v))
    return out


def _vec_code(v, p, dim):
    code = 0
    for i in range(dim - 1, -1, -1):
        code = code * p + int(v[i]) % p
    return code


def _disambiguate_simple(G, H, K, names):
    """Order 20160: Alt(8) has elements of order 15, PSL(3,4) does not."""
    fa = FactorAction(G, H, K)
    img = fa.image_group()
    # image of H is the factor itself (H/K embeds via conjugation action)
    hgens = [Permutation(fa.array_of(h)) for h in H.generators]
    factor_group = img.subgroup(hgens)
    rng = random.Random(0xD15A)
    found15 = False
    for _ in range(4000):
        x = factor_group.uniform_random(rng)
        if x.order() % 15 == 0:
            found15 = True
            break
    name = "Alt(8)" if found15 else "PSL(3,4)"
    note = ("order 20160 resolved by element-order scan "
            f"(order-15 element {'found' if found15 else 'absent'})")
    return name, note


# -- complements and Frattini flags --------------------------------------------

DIRECT_COMPLEMENT_ORDER_CAP = 10 ** 7
COMPLEMENT_TUPLE_BUDGET = 1 << 16


def _abelian_coset_lifts(d):
    """Lift of every element of the factor (one per coset), via the section
    space; index 0 is the identity coset."""
    space = d.space
    from .modules import _VEC_DTYPE
    lifts = []
    for v in _all_vecs(d.prime, d.dim):
        lifts.append(space.lift(np.array(v, dtype=_VEC_DTYPE)))
    return lifts


def complement_solution_count(G, H, K, budget=COMPLEMENT_TUPLE_BUDGET,
                              early_exit=False):
    """Number of tuples (a_1..a_d) in A^d with Y = <K, g_1 a_1, ..., g_d a_d>
    a complement of A = H/K in G/K; this equals the number of complements.

    The test is purely an order test: Y >= K and Y H = G always hold (H is
    normal and the twisted generators cover G mod H), so Y is a complement
    exactly when |Y| = |G| / |A|.
    """
    sec_d = ChiefFactorDescriptor(NormalSection(G, H, K))
    sec_d.abelian = _section_is_abelian(H, K)
    if not sec_d.abelian:
        raise ValueError("complement counting is for abelian factors")
    from .simptable import prime_power_split
    sec_d.prime, sec_d.dim = prime_power_split(sec_d.order)
    sec_d.space = SectionSpace(G, H, K, sec_d.prime, dim_cap=SECTION_DIM_CAP)
    lifts = _abelian_coset_lifts(sec_d)
    n = sec_d.order
    dgen = len(G.generators)
    if n ** dgen > budget:
        raise RefusedComputation(
            f"complement search space {n}**{dgen} exceeds budget {budget}")
    target = G.order // n
    base_gens = list(K.chain.strong_generators())
    count = 0
    from itertools import product
    for tup in product(range(n), repeat=dgen):
        gens = base_gens + [g * lifts[t] for g, t in zip(G.generators, tup)]
        chain = StabilizerChain(G.degree, gens)
        if chain.order == target:
            count += 1
            if early_exit:
                return count
    return count


def _orbit_image_groups(G, pts, pos, *subgroups):
    out = []
    for S in subgroups:
        gens = [Permutation(_restrict(g.images, pts, pos))
                for g in S.chain.strong_generators()]
        out.append(group_from_generators(
            len(pts), gens or [Permutation.identity(len(pts))]))
    return out


def _orbit_image_lattice(G, oi, pts, pos, lattice_cap):
    """Cached (image group, lattice) of G restricted to one orbit."""
    key = ("orbit_image", oi)
    got = G._cache.get(key)
    if got is None:
        from .lattice import subgroup_classes
        jgens = [Permutation(_restrict(g.images, pts, pos))
                 for g in G.generators]
        JG = group_from_generators(len(pts), jgens)
        lat = None
        if JG.order <= lattice_cap:
            lat = subgroup_classes(JG, order_limit=lattice_cap)
        got = (JG, lat)
        G._cache[key] = got
    return got


def _orbit_supplement_search(G, H, K, lattice_cap=2000):
    """Search the orbit images for a maximal subgroup of G containing K but
    not H (certifying that H/K is non-Frattini).  Returns True or None."""
    from .tables import mask_of
    for oi, pts in enumerate(_orbit_partition(G)):
        if len(pts) == 1:
            continue
        pos = {p: i for i, p in enumerate(pts)}
        JG, lat = _orbit_image_lattice(G, oi, pts, pos, lattice_cap)
        if lat is None:
            continue
        JH, JK = _orbit_image_groups(G, pts, pos, H, K)
        if JH.order == JK.order:
            continue
        table = lat.table
        try:
            k_idx = [table.element_index(p) for p in JK.elements()]
            h_gens_idx = [table.element_index(p) for p in JH.generators]
        except KeyError:
            continue
        k_mask = mask_of(sorted(set(k_idx)), table.n)
        for cls in lat.maximal_classes():
            for m in cls.conjugate_masks:
                if k_mask & m == k_mask and not all(
                        (m >> i) & 1 for i in h_gens_idx):
                    return True
    return None


def ensure_factor_flags(G, d, lattice_cap=2000,
                        direct_cap=DIRECT_COMPLEMENT_ORDER_CAP):
    """Fill in complemented/frattini for a descriptor (may leave None with a
    refusal note when budgets preclude a certificate)."""
    if d.complemented is not None and d.frattini is not None:
        return d
    H, K = d.section.upper, d.section.lower
    if d.abelian:
        if G.order <= direct_cap:
            cnt = complement_solution_count(G, H, K, early_exit=True)
            d.complemented = cnt > 0
        else:
            found = _orbit_supplement_search(G, H, K, lattice_cap)
            d.complemented = True if found else None
        d.frattini = (not d.complemented) if d.complemented is not None else None
    else:
        # complemented: the associated primitive group has a maximal
        # subgroup complementing its socle
        d.complemented = _nonabelian_complemented(G, d, lattice_cap)
        d.frattini = _nonabelian_frattini(G, d, lattice_cap)
    return d


def _nonabelian_complemented(G, d, lattice_cap):
    from .lattice import subgroup_classes
    P = d.factor_action.image_group(name="primitive")
    if P.order > lattice_cap:
        return None
    hgens = [Permutation(d.factor_action.array_of(h))
             for h in d.section.upper.generators]
    soc = P.subgroup(hgens)
    lat = subgroup_classes(P, order_limit=lattice_cap)
    table = lat.table
    soc_idx = sorted({table.element_index(p) for p in soc.elements()})
    from .tables import mask_of
    soc_mask = mask_of(soc_idx, table.n)
    n = soc.order
    for cls in lat.maximal_classes():
        if cls.order * n != P.order:
            continue
        for m in cls.conjugate_masks:
            inter = m & soc_mask
            if bin(inter).count("1") == 1:   # only the identity
                return True
    return False


def _nonabelian_frattini(G, d, lattice_cap, coset_limit=20000):
    """Frattini flag via a maximal supplement: H/K is non-Frattini iff some
    maximal subgroup of G contains K but not H."""
    H, K = d.section.upper, d.section.lower
    index = G.order // K.order
    if index <= coset_limit:
        act = coset_action(G, K, limit=coset_limit)
        Q = act.quotient
        if Q.order <= lattice_cap:
            from .lattice import frattini as frattini_of
            phi = frattini_of(Q, order_limit=lattice_cap)
            him = [act.map.apply(h) for h in H.generators]
            return all(phi.contains(p) for p in him)
    found = _orbit_supplement_search(G, H, K, lattice_cap)
    return False if found else None


# -- G-isomorphism and G-connectedness ----------------------------------------

def g_isomorphic(G, f1, f2):
    """Whether two chief factors of the same group are G-isomorphic."""
    if f1 is f2:
        return True
    if f1.abelian != f2.abelian or f1.order != f2.order:
        return False
    if f1.abelian:
        return intertwiner_space_dim(f1.space.gen_matrices,
                                     f2.space.gen_matrices, f1.prime) > 0
    c1, c2 = f1.centralizer, f2.centralizer
    return (c1.order == c2.order
            and all(c2.contains(g) for g in c1.generators))


def group_isomorphisms(A, B, limit=None, budget=200000):
    """All isomorphisms A -> B as element maps (dicts keyed by image bytes).

    Search over candidate images of a small generating set of A, certifying
    each candidate by full multiplication-consistency over A's elements.
    """
    if A.order != B.order:
        return
    els_a = A.elements(limit=ELEMENT_BUDGET)
    gens = _small_generating_set(A)
    b_els = B.elements(limit=ELEMENT_BUDGET)
    orders_b = {}
    for p in b_els:
        orders_b.setdefault(p.order(), []).append(p)
    # breadth-first words over A for evaluation
    index_a = {p.images.tobytes(): i for i, p in enumerate(els_a)}
    parent = [None] * len(els_a)
    idx_id = index_a[Permutation.identity(A.degree).images.tobytes()]
    frontier = [idx_id]
    seenw = {idx_id}
    order_list = [idx_id]
    while frontier:
        new = []
        for i in frontier:
            for gi, g in enumerate(gens):
                j = index_a[(els_a[i] * g).images.tobytes()]
                if j not in seenw:
                    seenw.add(j)
                    parent[j] = (i, gi)
                    new.append(j)
                    order_list.append(j)
        frontier = new
    if len(seenw) != len(els_a):
        raise RuntimeError("generating set failed to reach all elements")

    cand_lists = [orders_b.get(g.order(), []) for g in gens]
    from itertools import product
    tried = 0
    for images in product(*cand_lists):
        tried += 1
        if tried > budget:
            raise RefusedComputation("isomorphism search budget exhausted")
        # build phi over all elements, verifying consistency
        phi = [None] * len(els_a)
        phi[idx_id] = Permutation.identity(B.degree)
        ok = True
        for j in order_list[1:]:
            i, gi = parent[j]
            phi[j] = phi[i] * images[gi]
        # full homomorphism check
        for i in range(len(els_a)):
            for gi, g in enumerate(gens):
                j = index_a[(els_a[i] * g).images.tobytes()]
                if not (phi[i] * images[gi]) == phi[j]:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        if len({p.images.tobytes() for p in phi}) != len(els_a):
            continue
        if not all(B.contains(p) for p in images):
            continue
        yield {els_a[i].images.tobytes(): phi[i] for i in range(len(els_a))}
        if limit is not None:
            limit -= 1
            if limit <= 0:
                return


def _small_generating_set(A):
    gens = []
    chain = None
    for g in sorted(A.generators, key=lambda p: -p.order()):
        if g.is_identity():
            continue
        if chain is not None and chain.contains(g):
            continue
        gens.append(g)
        chain = StabilizerChain(A.degree, gens)
        if chain.order == A.order:
            break
    if chain is None or chain.order != A.order:
        # fall back to accumulating strong generators
        for g in A.chain.strong_generators():
            if chain is not None and chain.contains(g):
                continue
            gens.append(g)
            chain = StabilizerChain(A.degree, gens)
            if chain.order == A.order:
                break
    return gens


def g_connected(G, f1, f2, element_budget=ELEMENT_BUDGET):
    """G-connectedness of two non-abelian chief factors.

    True when G-isomorphic, or when the quotient by the intersection of the
    two centralizers is a primitive group of type 3 whose minimal normal
    subgroups are the images of the factors.  Returns True/False or the
    string "undecided" when budgets prevent a certificate.
    """
    if f1.abelian or f2.abelian:
        raise ValueError("G-connectedness applies to non-abelian factors")
    if g_isomorphic(G, f1, f2):
        return True
    if f1.order != f2.order:
        return False
    fa1, fa2 = f1.factor_action, f2.factor_action
    n1, n2 = fa1.n, fa2.n
    combined = []
    for i in range(len(G.generators)):
        arr = np.concatenate([fa1.gen_arrays[i], fa2.gen_arrays[i] + n1])
        combined.append(Permutation(arr))
    Q = group_from_generators(n1 + n2, combined, name="pair-quotient")
    if Q.order > element_budget:
        return "undecided"

    def push(p):
        return Permutation(np.concatenate([fa1.array_of(p),
                                           fa2.array_of(p) + n1]))

    # the socle halves of a type-3 quotient are the images of the two
    # centralizers (the core of the hypothetical maximal is C1 n C2)
    M1 = Q.subgroup([push(h) for h in f2.centralizer.generators])
    M2 = Q.subgroup([push(h) for h in f1.centralizer.generators])
    if M1.order != f1.order or M2.order != f2.order:
        return False
    mins = minimal_normal_subgroups(Q, budget=element_budget)
    if len(mins) != 2:
        return False

    def same(Na, Nb):
        return Na.order == Nb.order and all(Nb.contains(g) for g in Na.generators)

    pairs_ok = ((same(mins[0], M1) and same(mins[1], M2))
                or (same(mins[0], M2) and same(mins[1], M1)))
    if not pairs_ok:
        return False
    return _has_diagonal_corefree_maximal(Q, M1, M2)


def _has_diagonal_corefree_maximal(Q, M1, M2):
    """Exact test: some full diagonal between the two minimal normals has a
    normalizer that is a core-free maximal subgroup of index |M1|.

    In a type-3 primitive group the core-free maximal U satisfies
    U n Soc = a full diagonal D and U = N(D), so exhausting the diagonals
    (one per isomorphism M1 -> M2) decides existence exactly.  Core-freeness
    reduces to U containing neither minimal normal.
    """
    n = M1.order
    m1_els = M1.elements(limit=ELEMENT_BUDGET)
    for iso in group_isomorphisms(M1, M2):
        delta_els = frozenset((p * iso[p.images.tobytes()]).images.tobytes()
                              for p in m1_els)
        U = _set_stabilizer(Q, delta_els, len(m1_els))
        if Q.order % U.order or Q.order // U.order != n:
            continue
        if any(not U.contains(g) for g in M1.generators) \
                and any(not U.contains(g) for g in M2.generators) \
                and _is_maximal_by_cosets(Q, U):
            return True
    return False


def _set_stabilizer(Q, elem_keys, set_size):
    """Stabilizer of a set of group elements under conjugation, by
    orbit-stabilizer with Schreier generators."""
    start = elem_keys
    orbit = {start: Permutation.identity(Q.degree)}
    queue = [start]
    gens = [(g, g.inv()) for g in Q.generators]
    sgens = []
    while queue:
        s = queue.pop()
        u = orbit[s]
        for g, ginv in gens:
            img = frozenset(
                (ginv * Permutation(np.frombuffer(k, dtype=np.int32)) * g
                 ).images.tobytes() for k in s)
            if img not in orbit:
                orbit[img] = u * g
                queue.append(img)
            else:
                v = orbit[img]
                sgens.append(u * g * v.inv())
    U = Q.subgroup([s for s in sgens if not s.is_identity()],
                   known_order=Q.order // len(orbit))
    return U


def _is_maximal_by_cosets(Q, U):
    """U maximal in Q, verified by closing U with one representative of
    every nontrivial coset."""
    index = Q.order // U.order
    Uchain = U.chain
    ident = np.arange(Q.degree, dtype=np.int32)
    reps = [coset_canonical(Uchain, ident)]
    seen = {reps[0].tobytes()}
    head = 0
    garrs = [g.images for g in Q.generators]
    while head < len(reps):
        r = reps[head]
        head += 1
        for a in garrs:
            nxt = coset_canonical(Uchain, _compose(r, a))
            if nxt.tobytes() not in seen:
                seen.add(nxt.tobytes())
                reps.append(nxt)
    if len(reps) != index:
        raise RuntimeError("coset enumeration mismatch in maximality test")
    ugens = list(U.chain.strong_generators())
    for r in reps[1:]:
        chain = StabilizerChain(Q.degree, ugens + [Permutation(r.copy())])
        if chain.order != Q.order:
            return False
    return True


# -- crowns ---------------------------------------------------------------------

class CrownRecord:
    __slots__ = ("factor_class", "length", "member_sections", "abelian",
                 "order", "members")

    def __init__(self, factor_class, members, abelian):
        self.factor_class = factor_class
        self.members = members
        self.member_sections = [m.section for m in members]
        self.length = len(members)
        self.abelian = abelian
        self.order = factor_class.order

    def __repr__(self):
        kind = "abelian" if self.abelian else "non-abelian"
        return f"<crown {kind} order={self.order} length={self.length}>"


def crowns(G, seed=0):
    """Crowns of G: G-isomorphism classes of complemented abelian chief
    factors and G-connectedness classes of non-Frattini non-abelian ones."""
    key = ("crowns", seed)
    got = G._cache.get(key)
    if got is not None:
        return got
    facs = chief_series(G, seed=seed)
    for d in facs:
        ensure_factor_flags(G, d)
    undecided = [d for d in facs if d.complemented is None and d.abelian]
    if undecided:
        raise RefusedComputation(
            f"{len(undecided)} abelian factors have undecided complement "
            "status; crowns would be incomplete")
    ab = [d for d in facs if d.abelian and d.complemented]
    nonab = [d for d in facs if not d.abelian and d.frattini is False]
    nonab_unknown = [d for d in facs if not d.abelian and d.frattini is None]
    if nonab_unknown:
        raise RefusedComputation(
            f"{len(nonab_unknown)} non-abelian factors have undecided "
            "Frattini status")
    out = []
    for group_members in _partition(G, ab, g_isomorphic):
        out.append(CrownRecord(group_members[0], group_members, True))
    for group_members in _partition(G, nonab, _connected_or_raise):
        out.append(CrownRecord(group_members[0], group_members, False))
    G._cache[key] = out
    return out


def _connected_or_raise(G, f1, f2):
    r = g_connected(G, f1, f2)
    if r == "undecided":
        raise RefusedComputation(
            "G-connectedness undecided between two chief factors "
            f"(orders {f1.order}, {f2.order})")
    return r


def _partition(G, items, rel):
    groups = []
    for d in items:
        placed = False
        for grp in groups:
            if rel(G, grp[0], d):
                grp.append(d)
                placed = True
                break
        if not placed:
            groups.append([d])
    return groups


# -- Baer classification and associated primitive groups ------------------------

def classify_maximal(G, M, coset_limit=20000):
    """Baer type (1, 2 or 3) of a maximal subgroup via its primitive
    quotient G/M_G."""
    act = coset_action(G, M, limit=coset_limit)
    Q = act.quotient
    mins = minimal_normal_subgroups(Q)
    if len(mins) == 1:
        N = mins[0]
        return 1 if _is_abelian_group(N) else 2
    if len(mins) == 2:
        return 3
    raise RuntimeError(
        f"quotient by the core has {len(mins)} minimal normal subgroups; "
        "was the subgroup really maximal?")


def _is_abelian_group(N):
    gens = N.generators
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if not (a * b == b * a):
                return False
    return True


def associated_primitive(G, d):
    """The primitive group attached to a chief factor: the affine extension
    for abelian factors, the centralizer quotient for non-abelian ones."""
    if not d.abelian:
        return d.factor_action.image_group(name="associated-primitive")
    p, dim = d.prime, d.dim
    npoints = p ** dim
    vecs = _all_vecs(p, dim)
    code = {v: i for i, v in enumerate(vecs)}
    gens = []
    for k in range(dim):
        arr = np.empty(npoints, dtype=np.int32)
        for v, i in code.items():
            w = list(v)
            w[k] = (w[k] + 1) % p
            arr[i] = code[tuple(w)]
        gens.append(Permutation(arr))
    for M in d.space.gen_matrices:
        arr = np.empty(npoints, dtype=np.int32)
        for v, i in code.items():
            img = tuple((np.array(v, dtype=np.int64) @ M) % p)
            arr[i] = code[img]
        gens.append(Permutation(arr))
    P = group_from_generators(npoints, gens, name="associated-primitive")
    expected = npoints * (G.order // d.centralizer.order)
    if P.order != expected:
        raise RuntimeError("affine primitive group has unexpected order")
    return P


def is_complemented(G, d, budget=COMPLEMENT_TUPLE_BUDGET):
    """Public wrapper: complement flag of a chief factor descriptor."""
    ensure_factor_flags(G, d)
    if d.complemented is None:
        raise RefusedComputation("complement status undecided within budget")
    return d.complemented
