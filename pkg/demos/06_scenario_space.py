"""How fast the space of possible stories grows.

The count of distinct interaction scenarios is (m * v * d) ** n for m
objects, v placement variants per object, d timing variations, and n
agents. Exponential in the cast size: even desk-scale scenes admit more
stories than could ever be enumerated, which is why plans are generated,
not authored.
"""

from scenedirector import ScenarioParams, estimate_scenarios

print(f"{'m':>4} {'v':>4} {'d':>4} {'n':>3}  scenarios")
for m, v, d, n in [
    (1, 1, 2, 1),
    (5, 1, 1, 1),
    (5, 2, 3, 2),
    (5, 3, 4, 5),
    (10, 4, 8, 5),
    (10, 4, 8, 10),
]:
    total = estimate_scenarios(ScenarioParams(m=m, v=v, d=d, n=n))
    print(f"{m:>4} {v:>4} {d:>4} {n:>3}  {total:,}")

big = estimate_scenarios(ScenarioParams(m=20, v=10, d=16, n=20))
print(f"\na 20-agent stage with 20 rich props: {big:.3e} "
      f"({big.bit_length()} bits, exact integer arithmetic)")
