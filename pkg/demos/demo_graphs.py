"""Decorated relative dual graphs: contraction moves and the stratification poset.

Builds a two-level graph with balanced orbifold decorations, contracts it both
ways, and enumerates the full contraction poset of a small stratum with its
DOT rendering.
"""

from fractions import Fraction as F

from orbidegen.contact import ContactOrder, MonodromyTable
from orbidegen.graph import (
    Edge,
    HomologyModel,
    PosetBounds,
    RelGraph,
    Tail,
    Vertex,
    bullet_genus,
    contract_edge,
    contract_level,
    genus,
    poset_to_dot,
    stratification_poset,
    to_dot,
    total_class,
    validate,
)

homology = HomologyModel(rank=1, c1=(F(3),), z_pairing=(F(1),),
                         effective=((0,), (1,), (2,)))
table = MonodromyTable(orders={"e": 1, "h": 2}, inverses={"e": "e", "h": "h"})

graph = RelGraph(
    vertices=(Vertex(0, (1,), 0), Vertex(1, (1,), 1)),
    edges=(Edge("relative", (0, 1), ("h", "h"), ContactOrder(1, 2)),
           Edge("relative", (0, 1), ("h", "h"), ContactOrder(3, 2))),
    tails=(Tail(1, "relative", "e", ContactOrder(2, 1)),))

print("two-level graph with a pair of Z2-decorated relative edges:")
print(to_dot(graph))
print("diagnostics:", validate(graph, homology, table) or "valid")
print("genus:", genus(graph), " total class:", total_class(graph))

collapsed = contract_level(graph, 0)
print("\nafter collapsing levels 0 and 1 (cycle absorbed into genus):")
print(f"  vertices {collapsed.vertices}")
print(f"  genus {genus(collapsed)}  class {total_class(collapsed)}")

loop = RelGraph((Vertex(0, (0,), 0),), (Edge("absolute", (0, 0)),), ())
print("\nself-loop contraction:", contract_edge(loop, 0).vertices[0])

print("\nstratification poset of the genus-0 stratum with one unit tail,")
print("class total (1), at most two vertices:")
poset = stratification_poset(
    0, (1,), [Tail(0, "relative", "e", ContactOrder(1, 1))], homology,
    bounds=PosetBounds(max_vertices=2))
print(f"  {len(poset.nodes)} nodes, {len(poset.covers)} covers, "
      f"maximal node index {poset.maximal_index()}")
print(poset_to_dot(poset))

disconnected = RelGraph((Vertex(0, (0,), 0), Vertex(0, (0,), 0)), (), ())
print("bullet genus of two rational components:", bullet_genus(disconnected))
