"""Leaf-labeled planar tree monomials with Koszul sign bookkeeping.

A monomial is a nested tuple:  ("L", label)  or  ("N", gen_id, (children,)).
Node labels are orbit representatives of the generating k[Sigma]-modules, so
the normal-form basis of each quasi-free operad component is exactly the set
of planar trees with representative labels and bijectively labeled leaves.
The symmetric group acts freely by leaf relabeling (no signs); Koszul signs
enter through grafting and the Leibniz differential, where graded node
symbols are reordered.  The reference order of the symbols of a tree is
root-first depth-first; every sign below is the Koszul sign of a reordering
relative to it.
"""

from __future__ import annotations

from .algebra import Permutation, koszul_sign_of_reordering


def leaf(label: int):
    return ("L", int(label))


def node(gen_id: str, children):
    return ("N", gen_id, tuple(children))


def corolla(gen_id: str, arity: int):
    return node(gen_id, [leaf(i) for i in range(1, arity + 1)])


def is_leaf(t) -> bool:
    return t[0] == "L"


def leaf_word(t):
    if is_leaf(t):
        return (t[1],)
    out = []
    for c in t[2]:
        out.extend(leaf_word(c))
    return tuple(out)


def tree_arity(t) -> int:
    return len(leaf_word(t))


def nodes_dfs(t):
    """Generator ids in root-first depth-first order."""
    if is_leaf(t):
        return []
    out = [t[1]]
    for c in t[2]:
        out.extend(nodes_dfs(c))
    return out


def tree_degree(t, gen_degree) -> int:
    return sum(gen_degree[g] for g in nodes_dfs(t))


def relabel(t, mapping):
    if is_leaf(t):
        return leaf(mapping[t[1]])
    return ("N", t[1], tuple(relabel(c, mapping) for c in t[2]))


def sigma_act_tree(t, sigma: Permutation):
    """Right action: leaf label l becomes sigma^{-1}(l); no signs."""
    inv = sigma.inverse()
    return relabel(t, {l: inv(l) for l in leaf_word(t)})


def _symbol_walk(t, subs, out, tag_of_block):
    """DFS of the grafted tree emitting source-symbol tags."""
    if is_leaf(t):
        l = t[1]
        if l in subs:
            for sym in tag_of_block[l]:
                out.append(sym)
        return
    out.append(("f", id(t), t[1]))
    for c in t[2]:
        _symbol_walk(c, subs, out, tag_of_block)


def graft(f_tree, subs, gen_degree, p):
    """Replace leaves of f_tree (by label) with subtrees; Koszul sign.

    subs maps a leaf label to a replacement tree.  Returns (tree, sign) where
    sign is the Koszul sign of reordering the graded node symbols from the
    source order (f's nodes depth-first, then each block in increasing leaf
    label order) to the composite's depth-first order.
    """
    # tag f's nodes uniquely by path
    src_syms = []
    deg = []

    def walk_f(t, path):
        if is_leaf(t):
            return
        src_syms.append(("f",) + path)
        deg.append(gen_degree[t[1]])
        for i, c in enumerate(t[2]):
            walk_f(c, path + (i,))

    walk_f(f_tree, ())
    block_syms = {}
    for l in sorted(subs):
        syms = []

        def walk_g(t, path, l=l, syms=syms):
            if is_leaf(t):
                return
            syms.append(("g", l) + path)
            deg.append(gen_degree[t[1]])
            for i, c in enumerate(t[2]):
                walk_g(c, path + (i,))

        walk_g(subs[l], ())
        block_syms[l] = syms
        src_syms.extend(syms)
    index = {s: i for i, s in enumerate(src_syms)}

    target = []

    def walk_target(t, path):
        if is_leaf(t):
            l = t[1]
            if l in subs:
                target.extend(block_syms[l])
            return
        target.append(("f",) + path)
        for i, c in enumerate(t[2]):
            walk_target(c, path + (i,))

    walk_target(f_tree, ())
    positions = [index[s] for s in target]
    sign = koszul_sign_of_reordering(deg, positions, p)

    def build(t):
        if is_leaf(t):
            return subs.get(t[1], t)
        return ("N", t[1], tuple(build(c) for c in t[2]))

    return build(f_tree), sign


def gamma_monomial(f_tree, g_trees, gen_degree, p):
    """Operadic composition of monomials: graft g_i at the leaf labeled i.

    The leaves of g_i (labeled 1..n_i) are shifted to the i-th block of the
    composite labeling.  Returns (tree, sign).
    """
    arities = [tree_arity(g) for g in g_trees]
    if tree_arity(f_tree) != len(g_trees):
        raise ValueError("arity mismatch in composition")
    offsets = [0]
    for a in arities:
        offsets.append(offsets[-1] + a)
    subs = {}
    for i, g in enumerate(g_trees, start=1):
        shift = offsets[i - 1]
        subs[i] = relabel(g, {l: l + shift for l in leaf_word(g)})
    return graft(f_tree, subs, gen_degree, p)


def differential_monomial(t, gen_degree, gen_boundary, p):
    """Leibniz differential of a monomial: dict tree -> coefficient.

    gen_boundary maps a generator id to a dict tree -> coeff over local leaf
    labels 1..arity (empty dict for a closed generator).
    """
    out = {}
    prefix = 0

    def visit(spine, sub):
        """spine: function rebuilding the whole tree from a replaced subtree."""
        nonlocal prefix
        if is_leaf(sub):
            return
        g = sub[1]
        bnd = gen_boundary[g]
        if bnd:
            psign = 1 if prefix % 2 == 0 else p - 1
            children = sub[2]
            for s_tree, c in bnd.items():
                # leaves of s_tree are labeled 1..k locally; graft children
                subs = {i + 1: ch for i, ch in enumerate(children)}
                new_sub, gsign = graft(s_tree, subs, gen_degree, p)
                coeff = (c * psign * gsign) % p
                if coeff:
                    full = spine(new_sub)
                    out[full] = (out.get(full, 0) + coeff) % p
        prefix += gen_degree[g]
        for i, ch in enumerate(sub[2]):
            def spine_i(new, i=i, sub=sub, spine=spine):
                kids = list(sub[2])
                kids[i] = new
                return spine(("N", sub[1], tuple(kids)))
            visit(spine_i, ch)

    visit(lambda x: x, t)
    return {k: v for k, v in out.items() if v % p}


def push_group_labels(t, gen_degree, p):
    """Normal form of a raw tree whose node labels may carry a permutation.

    Raw node labels are either gen_id or (gen_id, Permutation).  The group
    part sigma is absorbed by reordering the children (child at position i
    becomes the former child sigma^{-1}(i)) with the Koszul block sign.
    Returns (tree, sign); idempotent on trees without group parts.
    """
    if is_leaf(t):
        return t, 1 % p
    label = t[1]
    sign = 1 % p
    children = list(t[2])
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[1], Permutation):
        gen_id, sigma = label
        degs = []
        new_children = []
        for i in range(1, len(children) + 1):
            new_children.append(children[sigma.inverse()(i) - 1])
        # Koszul sign of the block reordering
        block_degs = [_raw_degree(c, gen_degree) for c in children]
        positions = [sigma.inverse()(i) - 1 for i in range(1, len(children) + 1)]
        sign = koszul_sign_of_reordering(block_degs, positions, p)
        children = new_children
    else:
        gen_id = label
    total = 1 % p
    fixed = []
    for c in children:
        cc, s = push_group_labels(c, gen_degree, p)
        fixed.append(cc)
        total = (total * s) % p
    return ("N", gen_id, tuple(fixed)), (sign * total) % p


def _raw_degree(t, gen_degree):
    if is_leaf(t):
        return 0
    label = t[1]
    g = label[0] if isinstance(label, tuple) else label
    return gen_degree[g] + sum(_raw_degree(c, gen_degree) for c in t[2])


def pretty(t, gen_degree=None) -> str:
    """Parenthesized leaf word with generator names: w1(w0(1,2),3)."""
    if is_leaf(t):
        return str(t[1])
    inner = ",".join(pretty(c) for c in t[2])
    return f"{t[1]}({inner})"


def parse_tree(s: str):
    """Inverse of pretty (generator ids must not contain '(' ',' ')')."""
    s = s.strip()
    pos = 0

    def parse():
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos] not in "(),":
            pos += 1
        token = s[start:pos].strip()
        if pos < len(s) and s[pos] == "(":
            pos += 1
            children = [parse()]
            while s[pos] == ",":
                pos += 1
                children.append(parse())
            if s[pos] != ")":
                raise ValueError(f"expected ')' at {pos} in {s!r}")
            pos += 1
            return node(token, children)
        return leaf(int(token))

    out = parse()
    if pos != len(s):
        raise ValueError(f"trailing input at {pos} in {s!r}")
    return out
