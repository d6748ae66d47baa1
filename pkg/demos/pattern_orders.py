"""First patterns of the soft, Hamming and ORB orders for a small reliability vector."""

import itertools

from guessdec import PatternStream

rel = [2.0, 3.0, 4.0, 8.0]
for order in ("soft", "hamming", "orb"):
    print(f"{order:8s}", " ".join(str(t) for t in itertools.islice(PatternStream(order, rel), 8)))

print("\nsoft order with weights")
for tep in itertools.islice(PatternStream("soft", rel), 8):
    print(f"  {tep}  soft {tep.gamma_s:4.1f}  hamming {tep.gamma_h}  orb {tep.gamma_l}")
