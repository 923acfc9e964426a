"""Prisoners' Dilemma on a GHZ state: equilibria as entanglement varies.

Writes pd_ghz.csv next to this script and prints where the NE set changes.
"""

from pathlib import Path

from eprgames import GameMatrix, sweep

pd = GameMatrix.from_json(Path(__file__).with_name("pd.json"))
diagram = sweep(pd, "ghz", ["cos_gamma=-1:1:0.01"])

out = Path(__file__).with_name("pd_ghz.csv")
with out.open("w", newline="") as fh:
    diagram.to_csv(fh)
print(f"wrote {len(diagram.points)} rows to {out.name}")

for lo, hi, before, after in diagram.transitions():
    fmt = lambda s: " ".join("".join(map(str, c)) for c in sorted(s)) or "-"
    print(f"cos_gamma {lo['cos_gamma']:+.2f} -> {hi['cos_gamma']:+.2f}: {fmt(before)}  =>  {fmt(after)}")
