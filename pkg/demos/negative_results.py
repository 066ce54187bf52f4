"""Where counting in a finite semiring stops separating structures.

For each semiring the periodicity of 1, 1+1, 1+1+1, ... decides which
pair of bisimilar cliques (or the two small systems M and N) gets
mistaken for distinguishable, or vice versa.
"""

from homprofile import BOOL, NAT, min_plus, mod_p
from homprofile.harness import negative_demo, negative_demo_text

for sr in (NAT, BOOL, mod_p(2), mod_p(3), min_plus(3)):
    print(negative_demo_text(negative_demo(sr)))
    print()
