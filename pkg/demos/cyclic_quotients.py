"""Walk through a few two-dimensional cyclic quotient cones.

For each cone: the resolution chain, the panels of the dual monoid, and
the embedding dimension of the singularity it describes.

    python3 demos/cyclic_quotients.py
"""

from arithsurf import cone_lattice as cl

CONES = [((1, 0), (1, 2)), ((1, 0), (-2, 5)), ((1, 0), (-1, 7)), ((2, 1), (-1, 3))]

for u, v in CONES:
    cone = cl.Cone2.of(u, v)
    chain = cl.resolve_cone(cone)
    print(f"cone u={u} v={v}  index {cone.index}")
    print(f"  rays    {[r.as_list() for r in chain.rays]}")
    print(f"  weights {list(chain.weights)}")
    for i, panel in enumerate(cl.panels(chain), start=1):
        print(f"  panel {i}: {sorted(f.as_list() for f in panel)}")
    print(f"  embedding dimension {cl.embedding_dimension(chain)}")
    rays = cl.star_subdivision_max_ideal(cone)
    print(f"  star subdivision by the maximal ideal: {[r.as_list() for r in rays]}")
    print()

# going back: a chain of weights determines the cone
cone, chain = cl.chain_to_cone([-3, -2])
print(f"weights [-3, -2] come from u={cone.u.as_list()} v={cone.v.as_list()}")
