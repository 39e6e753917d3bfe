"""Brute-force enumerators written without the package.

Membership relations are sets of pairs over ``range(k)`` and every
predicate below is hand-coded Python; nothing is parsed or evaluated
through the library, so agreement with it is evidence rather than echo.
"""

from itertools import product


def relations(k):
    cells = [(i, j) for i in range(k) for j in range(k)]
    for bits in product((False, True), repeat=len(cells)):
        yield frozenset(c for c, b in zip(cells, bits) if b)


def members(rel, k, b):
    return frozenset(a for a in range(k) if (a, b) in rel)


def extensional(rel, k):
    exts = [members(rel, k, b) for b in range(k)]
    return len(set(exts)) == k


def empties(rel, k):
    return [b for b in range(k) if not members(rel, k, b)]


def russell_sets(rel, k):
    """Elements whose members are exactly the non-self-members."""
    target = frozenset(a for a in range(k) if (a, a) not in rel)
    return [b for b in range(k) if members(rel, k, b) == target]


def base_models(max_size):
    """Extensional relations with an empty element, sizes 1..max_size."""
    return [(k, r) for k in range(1, max_size + 1) for r in relations(k) if extensional(r, k) and empties(r, k)]


# A defined constant c is expandable in a model when exactly one element
# satisfies its condition (the axiom is: c = y iff psi(y), for every y).
EXPANDABLE = {
    "empty": lambda k, r: len(empties(r, k)) == 1,
    "nonunique": lambda k, r: k == 1,
    "russell": lambda k, r: len(russell_sets(r, k)) == 1,
}


def conservativity(name, max_size):
    """``(kind, base count, expandable count)``.

    Non-creative when every base model expands. Otherwise the oracle names
    a separating sentence by hand: for the all-elements condition it is
    "all x. all y. x = y"; for an empty set of expansions any false
    sentence of some base model works, e.g. "all x. x in x".
    """
    models = base_models(max_size)
    ok = [m for m in models if EXPANDABLE[name](*m)]
    if len(ok) == len(models):
        return "NonCreativeUpTo", len(models), len(ok)
    separators = {
        "nonunique": lambda k, r: k == 1,
        "russell": lambda k, r: all((a, a) in r for a in range(k)),
    }
    sep = separators[name]
    assert all(sep(*m) for m in ok) and not all(sep(*m) for m in models)
    return "Creative", len(models), len(ok)


def star_models(k):
    """Models of extensionality plus the guarded Russell condition for a."""
    out = []
    for r in relations(k):
        if not extensional(r, k):
            continue
        for a in range(k):
            if all(x != a for x in range(k) if ((x, a) in r) == ((x, x) not in r)):
                out.append((r, a))
    return out


def russell_instance_models(k):
    return [(r, a) for r in relations(k) if extensional(r, k) for a in russell_sets(r, k)]


if __name__ == "__main__":
    for n in ("empty", "nonunique", "russell"):
        print(n, conservativity(n, 3))
    for k in (1, 2, 3):
        print(k, len(star_models(k)), len(russell_instance_models(k)))
    print("E1 size 1:", [sorted(r) for r in relations(1) if extensional(r, 1)])
