"""Walk through the bundled four-sequence database: sequential patterns,
three hand-written LPMs, their alignment-based segmentation, and the
quality of every subset of them."""
import itertools

import lpmkit as lk
from lpmkit.fixtures import reference_lpms, running_example

db = running_example()
print(f"{len(db)} sequences, {db.total_events} events")
for i, s in enumerate(db):
    print(f"  {i}: {' '.join(s)}")

patterns = lk.mine_clogsgrow(db, min_sup=3)
print(f"\n{len(patterns)} closed repetitive patterns with support >= 3, strongest first:")
for p in patterns[:8]:
    print(f"  {p.support:3d}  <{','.join(p.pattern)}>")

lpms = reference_lpms(db)
print("\nthree LPMs, each evaluated on its own:")
for name, l in zip("abc", lpms):
    print(f"  ({name}) {l.text:28s} explains {l.support} events in {l.instance_count} instances")

seg = lk.segment_set(db, [l.net for l in lpms])
print("\nsegmentation when all three are aligned together (gamma = LPM instance, lambda = unexplained):")
for i, segs in enumerate(seg.sequences):
    parts = [f"{'abc'[s.lpm] if s.kind == 'gamma' else '-'}:{''.join(s.activities)}" for s in segs]
    print(f"  {i}: {'  '.join(parts)}")

print("\nquality of every subset:")
for k in (1, 2, 3):
    for sub in itertools.combinations(range(3), k):
        nets = [lpms[j].net for j in sub]
        c, p = lk.coverage(db, nets), lk.non_redundancy(db, nets)
        name = "".join("abc"[j] for j in sub)
        print(f"  {{{name}}}: coverage {c:.3f}  non-redundancy {p:.3f}  F {lk.fscore(db, nets):.3f}")

for label, sel in (("alignment-based", lk.alignment_based_selection(db, lpms)),
                   ("greedy", lk.greedy_selection(db, lpms)),
                   ("greedy F-score", lk.greedy_fscore_selection(db, lpms))):
    print(f"{label:>16s} selection keeps {[l.text for l in sel]}")

print("\n" + lk.evaluate(db, [l.net for l in lpms[:2]]).summary())
print(f"perplexity of the database: {lk.perplexity(db):.4f}")
