"""Regenerate the synthetic desk-scale matrix subset under src/takumlab/data/desk.

The subset stands in for a pinned slice of the SuiteSparse collection when no
network is available.  Each matrix imitates a value profile seen in real
collections (unit-scale, stiff, integer, ill-scaled, ...); the generator is
seeded, so rerunning it rewrites byte-identical files.

    python scripts/make_desk_subset.py
"""

import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1] / "src" / "takumlab" / "data" / "desk"
GROUP = "Desk"


def loguniform(rng, lo, hi):
    return 10 ** rng.uniform(math.log10(lo), math.log10(hi))


def signed(rng, x):
    return x if rng.random() < 0.5 else -x


def random_pattern(rng, n, nnz, sym=False, diag=True):
    cells = set()
    if diag:
        cells.update((i, i) for i in range(n))
    while len(cells) < nnz:
        i, j = rng.randrange(n), rng.randrange(n)
        if sym and i < j:
            i, j = j, i
        cells.add((i, j))
    return sorted(cells, key=lambda c: (c[1], c[0]))


def coordinate(rows, cols, entries, field="real", symmetry="general"):
    out = [f"%%MatrixMarket matrix coordinate {field} {symmetry}",
           "% synthetic desk-scale benchmark matrix",
           f"{rows} {cols} {len(entries)}"]
    for i, j, v in entries:
        lit = str(int(v)) if field == "integer" else repr(float(v))
        out.append(f"{i + 1} {j + 1} {lit}")
    return "\n".join(out) + "\n"


def make(name, rng):
    if name == "unit_uniform":
        n = 30
        return coordinate(n, n, [(i, j, rng.uniform(-1, 1)) for i, j in random_pattern(rng, n, 180)])
    if name == "laplace2d_int":
        k = 6
        n = k * k
        ents = []
        for a in range(n):
            ents.append((a, a, 4))
            x, y = divmod(a, k)
            if y + 1 < k:
                ents.append((a + 1, a, -1))
            if x + 1 < k:
                ents.append((a + k, a, -1))
        ents.sort(key=lambda e: (e[1], e[0]))
        return coordinate(n, n, ents, "integer", "symmetric")
    if name == "wide_1e8":
        n = 40
        return coordinate(n, n, [(i, j, signed(rng, loguniform(rng, 1e-8, 1e8))) for i, j in random_pattern(rng, n, 240)])
    if name == "wide_1e40":
        n = 40
        return coordinate(n, n, [(i, j, signed(rng, loguniform(rng, 1e-40, 1e40))) for i, j in random_pattern(rng, n, 200)])
    if name == "huge_entries":
        n = 20
        return coordinate(n, n, [(i, j, loguniform(rng, 1e100, 1e200)) for i, j in random_pattern(rng, n, 60)])
    if name == "tiny_entries":
        n = 20
        return coordinate(n, n, [(i, j, loguniform(rng, 1e-220, 1e-180)) for i, j in random_pattern(rng, n, 60)])
    if name == "identity_spike":
        n = 25
        ents = [(i, i, 1.0) for i in range(n)]
        ents.append((n - 1, 0, 1.0e6))
        ents.sort(key=lambda e: (e[1], e[0]))
        return coordinate(n, n, ents)
    if name == "stiffness_sym":
        n = 36
        ents = [(i, j, (loguniform(rng, 1e5, 1e7) if i == j else -loguniform(rng, 1e3, 1e5)))
                for i, j in random_pattern(rng, n, 150, sym=True)]
        return coordinate(n, n, ents, "real", "symmetric")
    if name == "skew_rotation":
        n = 24
        ents = [(i, j, rng.uniform(-3, 3)) for i, j in random_pattern(rng, n, 90, sym=True, diag=False) if i != j]
        return coordinate(n, n, ents, "real", "skew-symmetric")
    if name == "markov_chain":
        n = 30
        ents = []
        for j in range(n):
            rows = sorted(rng.sample(range(n), 6))
            w = [loguniform(rng, 1e-5, 1.0) for _ in rows]
            s = sum(w)
            ents.extend((i, j, x / s) for i, x in zip(rows, w))
        return coordinate(n, n, ents)
    if name == "near_e4m3_max":
        n = 16
        return coordinate(n, n, [(i, j, rng.uniform(300.0, 460.0)) for i, j in random_pattern(rng, n, 40)])
    if name == "circuit_conductance":
        n = 45
        return coordinate(n, n, [(i, j, signed(rng, loguniform(rng, 1e-12, 1e-3))) for i, j in random_pattern(rng, n, 220)])
    if name == "large_integers":
        n = 20
        return coordinate(n, n, [(i, j, rng.randrange(-200000, 200000)) for i, j in random_pattern(rng, n, 80)], "integer")
    if name == "powers_of_two":
        n = 20
        return coordinate(n, n, [(i, j, signed(rng, 2.0 ** rng.randrange(-6, 7))) for i, j in random_pattern(rng, n, 70)])
    if name == "chemistry_rates":
        n = 30
        return coordinate(n, n, [(i, j, signed(rng, loguniform(rng, 1e-15, 1e15))) for i, j in random_pattern(rng, n, 150)])
    if name == "graph_weights":
        n = 35
        return coordinate(n, n, [(i, j, rng.randrange(1, 1001)) for i, j in random_pattern(rng, n, 160, sym=True)],
                          "integer", "symmetric")
    if name == "lp_bigM":
        n = 30
        return coordinate(n, n, [(i, j, 1e10 if rng.random() < 0.2 else signed(rng, 1.0))
                                 for i, j in random_pattern(rng, n, 140)])
    if name == "dense_array":
        n = 8
        vals = [rng.gauss(0.0, 10.0) for _ in range(n * n)]
        lines = ["%%MatrixMarket matrix array real general", "% synthetic desk-scale benchmark matrix", f"{n} {n}"]
        lines += [repr(v) for v in vals]
        return "\n".join(lines) + "\n"
    if name == "small_magnitudes":
        n = 30
        return coordinate(n, n, [(i, j, signed(rng, loguniform(rng, 1e-6, 1e-2))) for i, j in random_pattern(rng, n, 150)])
    if name == "near_one":
        n = 30
        return coordinate(n, n, [(i, j, 1.0 + rng.uniform(-1e-3, 1e-3)) for i, j in random_pattern(rng, n, 150)])
    raise KeyError(name)


NAMES = [
    "unit_uniform", "laplace2d_int", "wide_1e8", "wide_1e40", "huge_entries",
    "tiny_entries", "identity_spike", "stiffness_sym", "skew_rotation", "markov_chain",
    "near_e4m3_max", "circuit_conductance", "large_integers", "powers_of_two", "chemistry_rates",
    "graph_weights", "lp_bigM", "dense_array", "small_magnitudes", "near_one",
]


def main():
    rows = ["id,group,name,nnz,field,kind"]
    for k, name in enumerate(NAMES):
        rng = random.Random(1000 + k)
        text = make(name, rng)
        path = ROOT / GROUP / name / f"{name}.mtx"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        header = [l for l in text.splitlines() if not l.startswith("%")][0].split()
        nnz = int(header[2]) if len(header) == 3 else len(text.splitlines()) - 3
        field = text.split()[3]
        rows.append(f"{GROUP}/{name},{GROUP},{name},{nnz},{field},synthetic")
    (ROOT / "index.csv").write_text("\n".join(rows) + "\n")
    print(f"wrote {len(NAMES)} matrices to {ROOT}")


if __name__ == "__main__":
    main()
