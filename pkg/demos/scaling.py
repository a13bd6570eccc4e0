"""Wall time of the FGS weight calculation as n doubles.

Weights need one exact kNN pass per view, O(n^2) each, so doubling n should
cost about 4x. SNF multiplies dense n x n matrices and grows faster.
"""

from simfuse.cli import bench_rows

sizes = [200, 400, 800]
fgs = bench_rows("fgs", sizes, views=6, k=5, repeats=3)
snf = bench_rows("snf", sizes, views=6, k=5, repeats=1)

print("n     fgs weights  fgs total  snf total")
for (n, tot, wt), (_, s, _) in zip(fgs, snf):
    print(f"{n:<5d} {wt:11.4f} {tot:10.4f} {s:10.4f}")
for a, b in zip(fgs, fgs[1:]):
    print(f"weight time x{b[2] / a[2]:.2f} from n={a[0]} to n={b[0]}")
