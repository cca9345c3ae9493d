"""Which families of truncation indices admit a joint universal element?

Ordering by limsup ratios, rearrangement, and the certificate search:
a subsequence along which consecutive index ratios exceed any level.
"""

from multitaylor import (
    IndexSequence,
    SequenceFamily,
    criterion_subsequence,
    is_well_ordered,
    rearrange_well_ordered,
)

print("== a family given in the wrong order ==")
fam = SequenceFamily((
    IndexSequence.poly((0, 0, 1), label="n^2"),
    IndexSequence.poly((0, 1), label="n"),
    IndexSequence.poly((0, 0, 0, 1), label="n^3"),
))
ordered, reports = is_well_ordered(fam)
print(f"  ({', '.join(m.label for m in fam.members)}) well ordered: {ordered}")
perm = rearrange_well_ordered(fam)
arranged = fam.permuted(perm)
print(f"  rearranged by {perm} -> ({', '.join(m.label for m in arranged.members)})")

print("\n== certificate: one common n per level with all ratios above it ==")
res = criterion_subsequence(arranged, levels=(2, 4, 8, 16, 32))
print(f"  status: {res.status}")
for row in res.certificate.rows:
    ratios = ", ".join(f"{r:.0f}" for r in row.ratios)
    print(f"  level {row.level:>2}: m = {row.mu:>2}, first index {row.first_value:>3}, "
          f"ratios ({ratios})")
print(f"  replay on the family confirms every row: {res.certificate.replay(arranged)}")

print("\n== bounded ratios prove the class empty, symbolically ==")
flat = SequenceFamily((IndexSequence.poly((0, 1), label="n"),
                       IndexSequence.poly((0, 2), label="2n")))
res = criterion_subsequence(flat)
print(f"  (n, 2n): status {res.status}, exact verdict: {res.exact}")
print(f"  binding fact: {res.binding}")

print("\n== geometric growth certifies instantly ==")
geo = SequenceFamily((IndexSequence.poly((0, 1), label="n"),
                      IndexSequence.geom(2, label="2^n")))
res = criterion_subsequence(geo)
print(f"  (n, 2^n): status {res.status} at levels {tuple(r.level for r in res.certificate.rows)}")
