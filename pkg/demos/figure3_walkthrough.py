"""Two small systems that positive formulas cannot tell apart.

M has a root with two p-successors; N has a root with one.  Boolean
homomorphism profiles over trees agree, counting profiles do not, and the
languages that can count or negate see the difference.
"""

from homprofile import count_homs, compare_profiles, BOOL, NAT, ClassKind, ClassTag
from homprofile.closure import separating_tree
from homprofile.logic import check, equivalent, parse, to_text, tree_to_gml
from homprofile.transforms import make_figure3_pair, unravel
from homprofile.structures import to_json

M, N = make_figure3_pair()
print("M:", to_json(M))
print("N:", to_json(N))

for lang, k in [("pml", 3), ("ml", None), ("mlplus", None), ("gml", 1)]:
    print(f"{lang:7s} equivalent: {equivalent(M, N, lang, k)}")

tree = ClassTag(ClassKind.TREE, 2)
for sr in (BOOL, NAT):
    v = compare_profiles(M, N, tree, sr, bound=(3, 2))
    print(f"{sr.name} profiles over trees of depth <= 2, up to 3 states: {v.status}")

T = separating_tree(M, N, "nat", depth=1)
print("smallest separating tree:", to_json(T))
print("  hom counts:", count_homs(NAT, T, M), "vs", count_homs(NAT, T, N))
print("the tree's own graded description:", to_text(tree_to_gml(T, 1)))
phi = parse("<R>>=2 true")
print(f"'{to_text(phi)}' holds at M: {check(M, None, phi)}, at N: {check(N, None, phi)}")
print("depth-1 unravelings have", unravel(M, 1).n, "and", unravel(N, 1).n, "states")
