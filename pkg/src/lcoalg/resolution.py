"""The binary-resolution base, acyclic extensions, and the operad tower.

The base is the minimal periodic free resolution over k[Sigma_2]: one free
generator w_d per degree with d(w_d) = w_{d-1} (1 + (-1)^d tau).  Each tower
stage adjoins free generators in the next arity whose boundaries kill a
Sigma-generating set of cycles (mode "cycles") or of reduced homology classes
(mode "homology", the size-reduced default) of the current component, sweep
by sweep in increasing degree.  The resulting quasi-free presentation is the
amalgamated-sum step realized on generators: the previous operad includes as
the subpresentation on its own generator list, so consecutive stages agree
through the previous arity at the level of bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, trees
from .algebra import all_permutations
from .dgmod import FreeDGModule
from .operad import GeneratorDecl, OperadElement, QuasiFreeOperad, SModule, make_decl


def resolution_generators(D: int, p: int):
    """Generators w_0..w_D of the arity-2 base with the periodic boundaries."""
    gens = [make_decl("w0", 2, 0)]
    for d in range(1, D + 1):
        plain = trees.corolla(f"w{d-1}", 2)
        swapped = trees.node(f"w{d-1}", [trees.leaf(2), trees.leaf(1)])
        sgn = 1 if d % 2 == 0 else p - 1
        gens.append(make_decl(f"w{d}", 2, d, {plain: 1, swapped: sgn}))
    return gens


def minimal_resolution(D: int, p: int) -> FreeDGModule:
    """The k[Sigma_2]-free resolution of k as a module (arity-2 component)."""
    op = QuasiFreeOperad(p, resolution_generators(D, p), 2, D, name="W")
    return op.component(2)


def base_s_module(D: int, p: int, max_arity: int = 2) -> SModule:
    """The generating collection concentrated in arity 2."""
    return SModule({2: minimal_resolution(D, p)})


@dataclass
class ExtensionStep:
    arity: int
    mode: str
    new_gens: list


@dataclass
class KTower:
    p: int
    N: int
    D: int
    mode: str
    operads: list            # stages indexed 2..N
    steps: list = field(default_factory=list)

    def stage(self, n: int) -> QuasiFreeOperad:
        return self.operads[n - 2]

    @property
    def top(self) -> QuasiFreeOperad:
        return self.operads[-1]

    def component(self, n: int) -> FreeDGModule:
        return self.top.component(n)


def acyclic_extension(operad: QuasiFreeOperad, arity: int, mode: str = "homology",
                      gen_prefix: str = "x"):
    """New generator declarations making the arity component acyclic.

    Sweeps degrees 0..D-1.  At degree d it takes the cycle space (inside
    ker eps when d = 0), greedily picks an elimination basis vector not yet
    covered, adjoins one free generator of degree d+1 with that cycle as
    boundary, and adds the whole Sigma-orbit of the cycle to the covered
    space.  In homology mode the covered space starts at the boundary space,
    so only reduced homology gets killed; in cycles mode it starts at zero.
    Returns [] when the component is already acyclic in homology mode.
    """
    if mode not in ("homology", "cycles"):
        raise ValueError(f"unknown extension mode {mode!r}")
    p = operad.p
    gens = list(operad.gens)
    new = []
    for d in range(operad.D):
        current = QuasiFreeOperad(p, gens, operad.N, operad.D,
                                  name=operad.name, check=False)
        comp = current.component(arity)
        if comp.dim(d) == 0:
            continue
        if d == 0:
            zmat = comp.aug.reshape(1, -1)
        else:
            zmat = comp.d_matrix(d)
        cycles = linalg.kernel_basis(zmat, p)
        covered = linalg.IncrementalSpan(comp.dim(d), p)
        if mode == "homology":
            bmat = comp.d_matrix(d + 1)
            for j in range(bmat.shape[1]):
                covered.add(bmat[:, j])
        perms = all_permutations(arity)
        batch = []
        for v in cycles:
            if covered.contains(v):
                continue
            boundary = {comp.basis[d][i]: int(v[i]) for i in np.nonzero(v)[0]}
            gid = f"{gen_prefix}{arity}_{d+1}_{len(batch)}"
            batch.append(make_decl(gid, arity, d + 1, boundary))
            for s in perms:
                covered.add(comp.act_on_vector(s, d, v))
        gens.extend(batch)
        new.extend(batch)
    return new


def build_K(N: int, D: int, mode: str = "homology", p: int = 2) -> KTower:
    """The operad tower: free base in arity 2, then one extension per arity."""
    if N < 2:
        raise ValueError("tower needs N >= 2")
    gens = resolution_generators(D, p)
    stage = QuasiFreeOperad(p, gens, N, D, name="K2")
    operads = [stage]
    steps = []
    for n in range(2, N):
        new = acyclic_extension(stage, n + 1, mode=mode)
        steps.append(ExtensionStep(n + 1, mode, new))
        gens = list(stage.gens) + new
        stage = QuasiFreeOperad(p, gens, N, D, name=f"K{n+1}", check=False)
        operads.append(stage)
    return KTower(p, N, D, mode, operads, steps)


@dataclass
class ComponentReport:
    arity: int
    dims: list
    h_dims: list
    reliable_through: int
    eps_iso: bool
    free_counts_ok: bool

    @property
    def passed(self) -> bool:
        top = self.reliable_through
        return (self.eps_iso and self.free_counts_ok
                and all(h == 0 for h in self.h_dims[1:top + 1])
                and self.h_dims[0] == 1)


@dataclass
class EInfinityReport:
    components: list
    through_arity: int
    through_degree: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.components)

    def failing(self):
        return [c.arity for c in self.components if not c.passed]


def verify_E_infinity(tower: KTower, through_arity: int,
                      through_degree: int) -> EInfinityReport:
    """Homology table and freeness counts per component; pass/fail."""
    reports = []
    top = tower.top
    fact = [1] * (through_arity + 1)
    for i in range(2, through_arity + 1):
        fact[i] = fact[i - 1] * i
    for n in range(2, through_arity + 1):
        comp = top.component(n)
        dims = comp.dims()
        h = []
        reliable = min(through_degree, comp.D - 1)
        for d in range(reliable + 1):
            h.append(comp.homology(d)[0])
        # eps induces the iso in degree 0: a representative must augment to 1
        eps_iso = False
        dim0, reps0, _ = comp.homology(0)
        if dim0 == 1:
            eps_iso = int((comp.aug @ reps0[0]) % comp.p) != 0
        free_ok = all(len(top.basis(n, d)) == fact[n] * len(top.reps(n, d))
                      for d in range(comp.D + 1))
        reports.append(ComponentReport(n, dims, h, reliable, eps_iso, free_ok))
    return EInfinityReport(reports, through_arity, through_degree)


def towers_agree_through(t1: KTower, t2: KTower, arity: int) -> bool:
    """Basis-level equality of components up to the given arity."""
    a, b = t1.top, t2.top
    for n in range(1, arity + 1):
        for d in range(min(t1.D, t2.D) + 1):
            if a.basis(n, d) != b.basis(n, d):
                return False
    return True


def sabotage_tower(tower: KTower, gen_id: str | None = None) -> KTower:
    """Negative control: zero out one generator's boundary (breaks acyclicity)."""
    top = tower.top
    target = gen_id
    if target is None:
        for g in top.gens:
            if g.boundary and g.arity > 2:
                target = g.id
                break
        if target is None:
            target = next(g.id for g in top.gens if g.boundary)
    gens = [GeneratorDecl(g.id, g.arity, g.degree, ())
            if g.id == target else g for g in top.gens]
    bad = QuasiFreeOperad(tower.p, gens, tower.N, tower.D,
                          name=top.name + "!", check=False)
    return KTower(tower.p, tower.N, tower.D, tower.mode,
                  tower.operads[:-1] + [bad], tower.steps)


# ---------------------------------------------------------------------------
# serialization (structured text; deterministic, diffable)


def dump_tower(tower: KTower) -> str:
    lines = [
        "schema: lcoalg-tower/1",
        f"prime: {tower.p}",
        f"max_arity: {tower.N}",
        f"max_degree: {tower.D}",
        f"mode: {tower.mode}",
    ]
    stage_of = {}
    for i, step in enumerate(tower.steps):
        for g in step.new_gens:
            stage_of[g.id] = step.arity
    for g in tower.top.gens:
        stage = stage_of.get(g.id, 2)
        if g.boundary:
            terms = " + ".join(f"{c}*{trees.pretty(t)}"
                               for t, c in sorted(g.boundary))
        else:
            terms = "0"
        lines.append(f"generator: {g.id} arity={g.arity} degree={g.degree} "
                     f"stage={stage} boundary={terms}")
    return "\n".join(lines) + "\n"


def load_tower(text: str) -> KTower:
    header = {}
    gens = []
    stages = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        rest = rest.strip()
        if key == "generator":
            fields = rest.split()
            gid = fields[0]
            attrs = dict(f.split("=", 1) for f in fields[1:4])
            bexpr = rest.split("boundary=", 1)[1]
            boundary = {}
            if bexpr != "0":
                for term in bexpr.split(" + "):
                    c, _, tstr = term.partition("*")
                    t = trees.parse_tree(tstr)
                    boundary[t] = int(c)
            gens.append(make_decl(gid, int(attrs["arity"]),
                                  int(attrs["degree"]), boundary))
            stages[gid] = int(attrs["stage"])
        else:
            header[key] = rest
    p = int(header["prime"])
    N = int(header["max_arity"])
    D = int(header["max_degree"])
    mode = header["mode"]
    operads = []
    steps = []
    for n in range(2, N + 1):
        sub = [g for g in gens if stages[g.id] <= n]
        operads.append(QuasiFreeOperad(p, sub, N, D, name=f"K{n}", check=False))
        if n > 2:
            steps.append(ExtensionStep(n, mode,
                                       [g for g in gens if stages[g.id] == n]))
    return KTower(p, N, D, mode, operads, steps)
