"""Which views do the two SNF wrappers keep?

SNF-H filters by entropy and redundancy without looking at interactions;
SNF-F adds views greedily while inner-CV AUPR improves.
"""

import numpy as np

from simfuse import SnfParams, generate_synthetic, snf_fuse, snff_select, snfh_select
from simfuse.snf import view_entropy

ds = generate_synthetic(50, 50, 4, 4, signal_views=1, seed=11)
views = ds.drug_views

print("view entropies:", np.round([view_entropy(v) for v in views], 3))
print("SNF-H keeps:", snfh_select(views, SnfParams()))

other = np.mean([v.matrix for v in ds.target_views], axis=0)
print("SNF-F adds, in order:", snff_select(views, ds.interactions.matrix, cv_seed=0, other_similarity=other))

fused = snf_fuse(views, SnfParams(k=5, iters=2)).matrix
print("plain SNF output: %dx%d, row sums %.3f..%.3f" % (*fused.shape, fused.sum(1).min(), fused.sum(1).max()))
