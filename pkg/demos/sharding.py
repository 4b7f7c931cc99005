"""Shards split the key space by hash.  The merged table is byte-identical
whatever the shard count, and counts can be summed shard by shard."""
from threepowers import aggregate, summarize

ref = aggregate(40, (1, 3))
for n in (1, 4, 16):
    print(n, aggregate(40, (1, 3), shard_count=n).digest() == ref.digest())

# summaries keep only totals and the height profile, so memory stays at one shard
s = summarize(200, (1, 2), shard_count=8)
print(s.total_ordered - s.trivial_ordered)
