"""Round trip through TSV files and a manifest, then export FGS weights.

A manifest lists one file per line as ``role [label] = path`` where role is
interactions, drug or target.
"""

import tempfile
from pathlib import Path

from simfuse import FgsParams, fgs_fuse, generate_synthetic, load_dataset, save_dataset, validate_dataset
from simfuse.io import write_weights_tsv

out = Path(tempfile.mkdtemp())
manifest = save_dataset(generate_synthetic(seed=2), out, "toy")
print(manifest.read_text())

ds = load_dataset(manifest)
print("validation problems:", list(validate_dataset(ds)) or "none")

_, w = fgs_fuse(ds.drug_views, ds.interactions.matrix, FgsParams())
write_weights_tsv(out / "toy_drug_weights.tsv", ds.interactions.drug_ids, [v.label for v in ds.drug_views], w)
print((out / "toy_drug_weights.tsv").read_text().splitlines()[:4])
